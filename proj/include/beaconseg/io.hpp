#pragma once

#include <beaconseg/core.hpp>

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace beaconseg {

// JSON forms of the core value types. Layouts are documented in
// docs/formats.md.
void to_json(nlohmann::json& j, const PollingMode& mode);
void from_json(const nlohmann::json& j, PollingMode& mode);
void to_json(nlohmann::json& j, const ModelParams& params);
void from_json(const nlohmann::json& j, ModelParams& params);
void to_json(nlohmann::json& j, const PriorHyper& prior);
void from_json(const nlohmann::json& j, PriorHyper& prior);
void to_json(nlohmann::json& j, const Partition& part);
void from_json(const nlohmann::json& j, Partition& part);
void to_json(nlohmann::json& j, const EventLabels& labels);
void from_json(const nlohmann::json& j, EventLabels& labels);
void to_json(nlohmann::json& j, const EdgeId& edge);
void from_json(const nlohmann::json& j, EdgeId& edge);
void to_json(nlohmann::json& j, const EventSequence& seq);
void from_json(const nlohmann::json& j, EventSequence& seq);

//! Canonical event file: one decimal time per line, LF terminated, with an
//! optional non-numeric header line. Times are written in shortest
//! round-trip form so write/read is exact.
void write_event_file(std::ostream& out, const EventSequence& seq, bool header = true);

//! Reads a canonical event file. The horizon defaults to the largest time.
//! Throws MalformedLine for unparsable lines and the validate_sequence
//! errors for bad values.
EventSequence read_event_file(std::istream& in, std::optional<double> horizon = std::nullopt);

EventSequence read_event_file(const std::string& path, std::optional<double> horizon = std::nullopt);

//! Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

} // namespace beaconseg
