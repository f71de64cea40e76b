#include <beaconseg/io.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

namespace beaconseg {

void to_json(nlohmann::json& j, const PollingMode& mode) {
    j = std::string{to_string(mode)};
}

void from_json(const nlohmann::json& j, PollingMode& mode) {
    mode = parse_polling_mode(j.get<std::string>());
}

void to_json(nlohmann::json& j, const ModelParams& params) {
    j = nlohmann::json{{"p", params.p},           {"r", params.r},         {"q", params.q},
                       {"lambda", params.lambda}, {"kappa", params.kappa}, {"period", params.period}};
}

void from_json(const nlohmann::json& j, ModelParams& params) {
    j.at("p").get_to(params.p);
    j.at("r").get_to(params.r);
    j.at("q").get_to(params.q);
    j.at("lambda").get_to(params.lambda);
    j.at("kappa").get_to(params.kappa);
    j.at("period").get_to(params.period);
}

void to_json(nlohmann::json& j, const PriorHyper& prior) {
    j = nlohmann::json{{"alpha_p", prior.alpha_p},
                       {"beta_p", prior.beta_p},
                       {"alpha_q", prior.alpha_q},
                       {"beta_q", prior.beta_q},
                       {"alpha_r", prior.alpha_r},
                       {"beta_r", prior.beta_r},
                       {"alpha_lambda", prior.alpha_lambda},
                       {"beta_lambda", prior.beta_lambda},
                       {"c", prior.c},
                       {"R0", prior.r0},
                       {"nu0", prior.nu0}};
}

void from_json(const nlohmann::json& j, PriorHyper& prior) {
    // Missing keys keep their defaults so partial prior files are accepted.
    auto read = [&j](const char* key, double& target) {
        if (j.contains(key)) {
            j.at(key).get_to(target);
        }
    };
    read("alpha_p", prior.alpha_p);
    read("beta_p", prior.beta_p);
    read("alpha_q", prior.alpha_q);
    read("beta_q", prior.beta_q);
    read("alpha_r", prior.alpha_r);
    read("beta_r", prior.beta_r);
    read("alpha_lambda", prior.alpha_lambda);
    read("beta_lambda", prior.beta_lambda);
    read("c", prior.c);
    read("R0", prior.r0);
    read("nu0", prior.nu0);
}

void to_json(nlohmann::json& j, const Partition& part) {
    j = nlohmann::json{{"mode", part.mode}, {"changepoints", part.changepoints}};
}

void from_json(const nlohmann::json& j, Partition& part) {
    j.at("mode").get_to(part.mode);
    j.at("changepoints").get_to(part.changepoints);
}

void to_json(nlohmann::json& j, const EventLabels& labels) {
    std::string encoded;
    encoded.reserve(labels.labels.size());
    for (auto label : labels.labels) {
        encoded.push_back(label == EventLabel::UserDriven ? 'U' : 'A');
    }
    j = nlohmann::json{{"n", labels.labels.size()},
                       {"labels", encoded},
                       {"user_driven", labels.user_driven_indices()}};
}

void from_json(const nlohmann::json& j, EventLabels& labels) {
    auto encoded = j.at("labels").get<std::string>();
    labels.labels.clear();
    labels.labels.reserve(encoded.size());
    for (char c : encoded) {
        if (c == 'U') {
            labels.labels.push_back(EventLabel::UserDriven);
        } else if (c == 'A') {
            labels.labels.push_back(EventLabel::Automated);
        } else {
            throw Error(std::string{"invalid label character '"} + c + "'");
        }
    }
}

void to_json(nlohmann::json& j, const EdgeId& edge) {
    j = nlohmann::json{{"user", edge.user},
                       {"source_computer", edge.source_computer},
                       {"destination_computer", edge.destination_computer}};
}

void from_json(const nlohmann::json& j, EdgeId& edge) {
    j.at("user").get_to(edge.user);
    j.at("source_computer").get_to(edge.source_computer);
    j.at("destination_computer").get_to(edge.destination_computer);
}

void to_json(nlohmann::json& j, const EventSequence& seq) {
    j = nlohmann::json{{"horizon", seq.horizon()},
                       {"times", std::vector<double>(seq.times().begin(), seq.times().end())}};
    if (seq.edge()) {
        j["edge"] = *seq.edge();
    }
}

void from_json(const nlohmann::json& j, EventSequence& seq) {
    std::optional<EdgeId> edge;
    if (j.contains("edge")) {
        edge = j.at("edge").get<EdgeId>();
    }
    seq = validate_sequence(j.at("times").get<std::vector<double>>(), j.at("horizon").get<double>(),
                            std::move(edge));
}

std::string format_double(double value) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) {
        throw Error("failed to format double");
    }
    return std::string(buffer, end);
}

void write_event_file(std::ostream& out, const EventSequence& seq, bool header) {
    if (header) {
        out << "time\n";
    }
    for (double t : seq.times()) {
        out << format_double(t) << '\n';
    }
}

namespace {

std::optional<double> parse_time(std::string_view text) {
    while (!text.empty() && (text.back() == '\r' || text.back() == ' ' || text.back() == '\t')) {
        text.remove_suffix(1);
    }
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return value;
}

} // namespace

EventSequence read_event_file(std::istream& in, std::optional<double> horizon) {
    std::vector<double> times;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        auto value = parse_time(line);
        if (!value) {
            if (line_number == 1) {
                continue; // header
            }
            throw MalformedLine(line_number, "expected a decimal time, got '" + line + "'");
        }
        times.push_back(*value);
    }
    double window = 0.0;
    if (horizon) {
        window = *horizon;
    } else {
        for (double t : times) {
            window = std::max(window, t);
        }
    }
    return validate_sequence(std::move(times), window);
}

EventSequence read_event_file(const std::string& path, std::optional<double> horizon) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open event file '" + path + "'");
    }
    return read_event_file(in, horizon);
}

} // namespace beaconseg
