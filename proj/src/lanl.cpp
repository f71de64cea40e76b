#include <beaconseg/lanl.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>

namespace beaconseg {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    return text;
}

} // namespace

std::size_t LanlSchema::min_columns() const {
    std::size_t top = std::max({time, source_user, source_computer, dest_computer});
    for (const auto& column : {dest_user, auth_type, event_kind}) {
        if (column) {
            top = std::max(top, *column);
        }
    }
    return top + 1;
}

LanlSchema LanlSchema::parse(std::string_view spec) {
    LanlSchema schema;
    std::optional<std::size_t> time, src_user, src_computer, dst_computer;
    schema.dest_user.reset();
    schema.auth_type.reset();
    schema.event_kind.reset();
    auto names = split_commas(spec);
    for (std::size_t column = 0; column < names.size(); ++column) {
        auto name = trim(names[column]);
        if (name == "time") {
            time = column;
        } else if (name == "src_user") {
            src_user = column;
        } else if (name == "dst_user") {
            schema.dest_user = column;
        } else if (name == "src_computer") {
            src_computer = column;
        } else if (name == "dst_computer") {
            dst_computer = column;
        } else if (name == "auth_type") {
            schema.auth_type = column;
        } else if (name == "event_kind") {
            schema.event_kind = column;
        } else if (name != "-" && name != "skip") {
            throw InvalidParameter("unknown schema column '" + std::string(name) + "'");
        }
    }
    if (!time || !src_user || !src_computer || !dst_computer) {
        throw InvalidParameter("schema needs time, src_user, src_computer and dst_computer columns");
    }
    schema.time = *time;
    schema.source_user = *src_user;
    schema.source_computer = *src_computer;
    schema.dest_computer = *dst_computer;
    return schema;
}

AuthRecord parse_auth_record(std::string_view line, std::size_t line_number, const LanlSchema& schema) {
    auto fields = split_commas(line);
    if (fields.size() < schema.min_columns()) {
        throw MalformedLine(line_number, "expected at least " + std::to_string(schema.min_columns()) +
                                             " fields, found " + std::to_string(fields.size()));
    }
    auto required = [&](std::size_t column, const char* what) {
        auto value = trim(fields[column]);
        if (value.empty()) {
            throw MalformedLine(line_number, std::string("empty ") + what);
        }
        return std::string(value);
    };
    auto optional = [&](const std::optional<std::size_t>& column) {
        return column ? std::string(trim(fields[*column])) : std::string{};
    };

    AuthRecord record;
    auto time_text = trim(fields[schema.time]);
    auto [end, ec] = std::from_chars(time_text.data(), time_text.data() + time_text.size(), record.time);
    if (ec != std::errc{} || end != time_text.data() + time_text.size() || !std::isfinite(record.time) ||
        record.time < 0.0) {
        throw MalformedLine(line_number, "invalid time '" + std::string(time_text) + "'");
    }
    record.source_user = required(schema.source_user, "source user");
    record.source_computer = required(schema.source_computer, "source computer");
    record.dest_computer = required(schema.dest_computer, "destination computer");
    record.dest_user = optional(schema.dest_user);
    record.auth_type = optional(schema.auth_type);
    record.event_kind = optional(schema.event_kind);
    return record;
}

LanlParseResult parse_lanl(std::istream& in, const LanlOptions& options) {
    LanlParseResult result;
    std::map<EdgeId, std::vector<double>> grouped;
    double earliest = std::numeric_limits<double>::infinity();
    double latest = -std::numeric_limits<double>::infinity();
    std::string line;
    while (std::getline(in, line)) {
        ++result.lines;
        if (trim(line).empty()) {
            continue;
        }
        AuthRecord record;
        try {
            record = parse_auth_record(line, result.lines, options.schema);
        } catch (const MalformedLine& err) {
            if (!options.lenient) {
                throw;
            }
            result.skipped.emplace_back(err.what());
            continue;
        }
        if (options.event_kind && record.event_kind != *options.event_kind) {
            continue;
        }
        ++result.records;
        earliest = std::min(earliest, record.time);
        latest = std::max(latest, record.time);
        grouped[EdgeId{record.source_user, record.source_computer, record.dest_computer}].push_back(record.time);
    }
    if (result.records == 0) {
        return result;
    }
    result.window_start = earliest;
    const double horizon = latest - earliest;
    for (auto& [edge, times] : grouped) {
        for (double& t : times) {
            t -= earliest;
        }
        result.edges.emplace(edge, validate_sequence(std::move(times), horizon, edge));
    }
    return result;
}

} // namespace beaconseg
