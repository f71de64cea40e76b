#pragma once

#include <beaconseg/core.hpp>

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace beaconseg {

enum class Algorithm { BS, OP, PELT };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view text);

struct SearchResult {
    Partition partition;
    double total_objective = 0.0; //!< sum of segment costs + m beta
    Algorithm algorithm = Algorithm::OP;
    //! PELT: candidate-set size when F(s) was evaluated, s = 1..n. Empty for
    //! the other algorithms.
    std::vector<std::size_t> pruning_stats;
};

//! Penalised objective of a given partition, accumulated segment by segment
//! as ((-beta + C_1) + beta + C_2) + beta ..., the same order in which the
//! dynamic programs build it, so equal partitions give bit-identical values.
double partition_objective(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta,
                           const Partition& partition);

//! Optimal partitioning: F(s) = min_t F(t) + C(t+1:s) + beta, F(0) = -beta.
//! Ties go to the smaller t. Throws NoEvents for an empty sequence.
SearchResult search_op(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta);

//! Default PELT constant: -(2|log lambda| + 2|log q| + 100).
//!
//! Exact pruning needs C(t+1:s) + C(s+1:T) + K <= C(t+1:T). Opening a segment
//! costs -2(log lambda + log q) up front, and re-anchoring the period grid
//! of the right half can cost more, so K = 0 is not safe for this cost.
double default_pruning_constant(const ModelParams& params);

//! OP with PELT pruning: after F(s), candidate t is dropped when
//! F(t) + C(t+1:s) + K > F(s). K = -infinity disables pruning; nullopt
//! selects default_pruning_constant().
SearchResult search_pelt(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta,
                         std::optional<double> pruning_constant = std::nullopt);

//! Greedy binary segmentation. A split of an interval is accepted when it
//! lowers the unpenalised cost by more than beta + min_gain; ties go to the
//! earliest split.
SearchResult search_bs(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta,
                       double min_gain = 0.0);

SearchResult search(const EventSequence& seq, const ModelParams& params, PollingMode mode, Algorithm algorithm,
                    double beta);

//! Minimum of partition_objective over all 2^(n-1) partitions. Intended as a
//! test oracle; throws InvalidParameter for n > 24.
SearchResult search_exhaustive(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta);

} // namespace beaconseg
