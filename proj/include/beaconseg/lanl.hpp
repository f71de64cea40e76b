#pragma once

#include <beaconseg/core.hpp>

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beaconseg {

//! One authentication log record.
struct AuthRecord {
    double time = 0.0; //!< epoch seconds
    std::string source_user;
    std::string dest_user;
    std::string source_computer;
    std::string dest_computer;
    std::string auth_type;
    std::string event_kind;
};

//! Column positions of the record fields. Fields not present map to nullopt
//! (except time and the edge fields, which are required).
struct LanlSchema {
    std::size_t time = 0;
    std::size_t source_user = 1;
    std::optional<std::size_t> dest_user = 2;
    std::size_t source_computer = 3;
    std::size_t dest_computer = 4;
    std::optional<std::size_t> auth_type = 5;
    std::optional<std::size_t> event_kind = 6;

    std::size_t min_columns() const;

    //! Parse a comma-separated list naming the file's columns in order, using
    //! time, src_user, dst_user, src_computer, dst_computer, auth_type,
    //! event_kind; "-" or "skip" marks a column to ignore.
    static LanlSchema parse(std::string_view spec);
};

struct LanlOptions {
    LanlSchema schema;
    std::optional<std::string> event_kind; //!< keep only records of this kind
    bool lenient = false;                  //!< skip malformed lines instead of failing
};

struct LanlParseResult {
    std::map<EdgeId, EventSequence> edges; //!< keyed by (user, source, destination)
    double window_start = 0.0;             //!< epoch seconds subtracted from every time
    std::size_t lines = 0;
    std::size_t records = 0; //!< records kept after filtering
    std::vector<std::string> skipped; //!< "line N: reason" for lenient skips
};

//! Split one log line into a record. Throws MalformedLine.
AuthRecord parse_auth_record(std::string_view line, std::size_t line_number, const LanlSchema& schema);

//! Group records per edge and rebase all times to the earliest kept record.
//! Every sequence shares the window horizon (latest minus earliest time).
LanlParseResult parse_lanl(std::istream& in, const LanlOptions& options);

} // namespace beaconseg
