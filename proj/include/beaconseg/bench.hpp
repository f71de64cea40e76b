#pragma once

#include <beaconseg/core.hpp>
#include <beaconseg/evaluation.hpp>
#include <beaconseg/genmodel.hpp>
#include <beaconseg/inference.hpp>
#include <beaconseg/search.hpp>
#include <beaconseg/spectral.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace beaconseg {

// ---- periodogram study -----------------------------------------------------

struct GTestBenchConfig {
    std::vector<double> q_grid{1.0, 0.5, 0.25, 0.1};
    std::vector<std::size_t> s_grid{10, 20, 40};
    std::size_t replicates = 500;
    double lambda = 0.2;
    double period = 1.0;
    // Matches the 0.4P jitter window of the perturbed generator at P = 1.
    double bin_width = 0.4;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

struct GTestCell {
    double q = 0.0;
    std::size_t subsequences = 0;
    std::vector<double> p_values; //!< replicate order
    std::size_t failures = 0;     //!< replicates the test rejected as degenerate (p = 1)

    double fraction_below(double level) const;
};

//! One cell per (q, S) in grid order. Replicate r of cell c uses stream
//! c * 2^32 + r of the seed.
std::vector<GTestCell> bench_gtest(const GTestBenchConfig& config);

//! p-values of one cell without running the whole grid.
GTestCell gtest_cell(double q, std::size_t subsequences, const GTestBenchConfig& config, std::size_t cell_index);

// ---- ROC and runtime -------------------------------------------------------

struct SimulationSetting {
    std::string name;
    ModelParams params;
    PollingMode mode = PollingMode::FixedPhase;
};

//! "easy": kappa 50, mean gap 10 P, p = r = 0.05, q = 0.1. "hard": kappa 10,
//! mean gap 5 P, p = r = 0.1, q = 0.2. Both fixed phase with P = 1.
std::vector<SimulationSetting> default_settings();

//! The alpha grid of the ROC study.
std::vector<double> default_alpha_grid();

struct RocConfig {
    std::vector<SimulationSetting> settings = default_settings();
    std::vector<double> alphas = default_alpha_grid();
    std::vector<Algorithm> algorithms{Algorithm::PELT, Algorithm::BS};
    std::size_t sequences = 100;
    std::size_t subsequences = 10;
    std::size_t tolerance = 0;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

struct RocPoint {
    std::string setting;
    double alpha = 0.0;
    Algorithm algorithm = Algorithm::PELT;
    double tp = 0.0;
    double fp = 0.0;
    std::size_t replicates = 0;
};

//! Simulates each setting's sequences once and searches them with the true
//! parameters for every (alpha, algorithm). Points are ordered by setting,
//! alpha, algorithm.
std::vector<RocPoint> bench_roc(const RocConfig& config);

struct RuntimeConfig {
    std::vector<std::size_t> changepoints{10, 20, 50, 100};
    std::vector<SimulationSetting> settings = default_settings();
    std::vector<Algorithm> algorithms{Algorithm::PELT, Algorithm::BS};
    double alpha = 2.0;
    std::size_t repeats = 1;
    std::uint64_t seed = 1;
};

struct RuntimeRow {
    std::string setting;
    std::size_t true_changepoints = 0;
    Algorithm algorithm = Algorithm::PELT;
    std::size_t events = 0;
    double seconds = 0.0;         //!< mean wall-clock over repeats
    std::size_t found = 0;        //!< changepoints in the result
    bool stable = true;           //!< every repeat returned the same partition
};

//! Sequential on purpose: timings are not taken under contention.
std::vector<RuntimeRow> bench_runtime(const RuntimeConfig& config);

// ---- LANL-like corpus and per-edge pipeline ----------------------------------

struct CorpusConfig {
    std::size_t edges = 6;
    std::size_t days = 14;
    double min_period = 60.0;
    double max_period = 300.0;
    double day_start = 9.0 * 3600.0;  //!< earliest session start, seconds after midnight
    double day_end = 19.0 * 3600.0;   //!< latest session start
    std::size_t max_sessions_per_day = 2;
    double mean_periods = 30.0;       //!< geometric mean session length in periods
    double p = 0.1;
    double r = 0.1;
    double kappa = 20.0;
    double separation_periods = 10.0; //!< idle periods required between sessions
    std::uint64_t seed = 1;
};

struct CorpusEdge {
    EdgeId edge;
    EventSequence seq; //!< seconds since midnight of day 0
    EventLabels truth;
    std::vector<std::size_t> truth_changepoints;
    double period = 0.0;
};

//! Fixed-duration polling sessions started by simulated users during working
//! hours, with missing and duplicated polls.
std::vector<CorpusEdge> simulate_lanl_corpus(const CorpusConfig& config);

//! A prior family whose lambda rate is scaled to the edge's observed gaps.
struct PriorSetting {
    std::string name;
    PriorHyper base;
    //! beta_lambda = alpha_lambda x (mean long gap), so the prior mean of
    //! lambda is one over the mean gap.
    bool lambda_from_data = true;

    PriorHyper for_sequence(const EventSequence& seq, double period) const;
};

std::vector<PriorSetting> default_prior_settings();

struct PipelineOptions {
    double bin_width = 1.0;
    std::optional<double> min_period = 2.0;
    std::optional<double> max_period = 3600.0;
    double significance = 0.01;
    PollingMode mode = PollingMode::FixedDuration;
    FitOptions fit;
};

struct EdgeScreen {
    std::optional<GTestResult> gtest;
    bool periodic = false;
    double period = 0.0; //!< refined period when periodic
    std::string note;    //!< why the edge was not fitted, if it was not
};

//! g test over the period band, then refine_period on the peak.
EdgeScreen screen_edge(const EventSequence& seq, const PipelineOptions& options);

struct EdgeAnalysis {
    EdgeScreen screen;
    std::optional<FitState> fit;
    EventLabels labels; //!< all user driven when the edge is not periodic
};

EdgeAnalysis analyse_edge(const EventSequence& seq, const EdgeScreen& screen, const PriorSetting& prior,
                          const PipelineOptions& options, Philox& rng);

EdgeAnalysis analyse_edge(const EventSequence& seq, const PriorSetting& prior, const PipelineOptions& options,
                          Philox& rng);

struct RobustnessConfig {
    std::vector<PriorSetting> priors = default_prior_settings();
    std::size_t repetitions = 10;
    PipelineOptions pipeline;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

//! Repeats the fit of every sequence with distinct MH streams under each
//! prior setting; labels of all sequences are concatenated per repetition.
RobustnessReport bench_robustness(const std::vector<EventSequence>& sequences, const RobustnessConfig& config);

} // namespace beaconseg
