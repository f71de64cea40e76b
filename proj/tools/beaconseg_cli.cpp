// Command-line front end: simulation, screening, detection, fitting,
// benchmarks, histograms and log ingestion.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 fit did not converge.

#include <beaconseg/bench.hpp>
#include <beaconseg/csv.hpp>
#include <beaconseg/evaluation.hpp>
#include <beaconseg/genmodel.hpp>
#include <beaconseg/inference.hpp>
#include <beaconseg/io.hpp>
#include <beaconseg/lanl.hpp>
#include <beaconseg/search.hpp>
#include <beaconseg/segment_cost.hpp>
#include <beaconseg/spectral.hpp>
#include <beaconseg/version.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using beaconseg::format_double;
using nlohmann::json;

constexpr int EXIT_USAGE = 1;
constexpr int EXIT_DATA = 2;
constexpr int EXIT_NOT_CONVERGED = 3;

struct Globals {
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    std::string manifest_path;
    std::string output = "-";
    std::vector<std::string> argv;
    std::string command;
};

struct ParamFlags {
    beaconseg::ModelParams params;
    std::string mode = "fixed-phase";

    void add(CLI::App* cmd, bool with_period) {
        cmd->add_option("--p", params.p, "Probability a period is empty")->capture_default_str();
        cmd->add_option("--r", params.r, "Duplicate geometric parameter")->capture_default_str();
        cmd->add_option("--q", params.q, "Subsequence-length geometric parameter")->capture_default_str();
        cmd->add_option("--lambda", params.lambda, "Inactivity rate (1/s)")->capture_default_str();
        cmd->add_option("--kappa", params.kappa, "von Mises precision")->capture_default_str();
        if (with_period) {
            cmd->add_option("--period", params.period, "Polling period (s)")->capture_default_str();
        }
        add_mode(cmd);
    }

    void add_mode(CLI::App* cmd) {
        cmd->add_option("--mode", mode, "Polling mode")
            ->check(CLI::IsMember({"fixed-phase", "fixed-duration"}))
            ->capture_default_str();
    }

    beaconseg::PollingMode polling_mode() const { return beaconseg::parse_polling_mode(mode); }
};

json manifest(const Globals& g) {
    return json{{"tool", "beaconseg"}, {"version", beaconseg::VERSION}, {"command", g.command},
                {"seed", g.seed},      {"threads", g.threads},          {"argv", g.argv}};
}

void write_manifest(const Globals& g) {
    if (g.manifest_path.empty()) {
        std::cerr << manifest(g).dump() << '\n';
        return;
    }
    std::ofstream out(g.manifest_path);
    if (!out) {
        throw beaconseg::Error("cannot write manifest " + g.manifest_path);
    }
    out << manifest(g).dump(2) << '\n';
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw beaconseg::Error("cannot open output " + path);
    }
    body(out);
}

void emit_json(const Globals& g, json doc) {
    doc["manifest"] = manifest(g);
    with_output(g.output, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

beaconseg::EventSequence load_events(const std::string& path, std::optional<double> horizon) {
    if (path == "-") {
        return beaconseg::read_event_file(std::cin, horizon);
    }
    if (!std::filesystem::exists(path)) {
        throw beaconseg::Error("no such file: " + path);
    }
    return beaconseg::read_event_file(path, horizon);
}

std::vector<std::string> row(std::initializer_list<std::string> fields) { return fields; }

std::string num(double value) { return format_double(value); }

// ---- verbs ---------------------------------------------------------------------

struct SimulateArgs {
    ParamFlags flags;
    std::size_t subsequences = 10;
    bool perturbed = false;
    std::string truth_path;
};

int run_simulate(const Globals& g, const SimulateArgs& a) {
    beaconseg::Philox rng(g.seed);
    beaconseg::LabeledStream stream;
    if (a.perturbed) {
        stream = beaconseg::sample_perturbed_uniform_stream(a.flags.params.lambda, a.flags.params.q, a.subsequences,
                                                            a.flags.params.period, rng);
    } else if (a.flags.polling_mode() == beaconseg::PollingMode::FixedPhase) {
        stream = beaconseg::simulate_fixed_phase(a.flags.params, a.subsequences, rng);
    } else {
        stream = beaconseg::simulate_fixed_duration(a.flags.params, a.subsequences, rng);
    }
    with_output(g.output, [&](std::ostream& out) { beaconseg::write_event_file(out, stream.seq); });
    if (!a.truth_path.empty()) {
        json subsequences = json::array();
        for (const auto& spec : stream.subsequences) {
            subsequences.push_back({{"x", spec.x}, {"n_periods", spec.n_periods}, {"counts", spec.counts}});
        }
        json truth{{"manifest", manifest(g)},
                   {"generator", a.perturbed ? "perturbed-uniform" : std::string(beaconseg::to_string(stream.mode))},
                   {"params", stream.params},
                   {"seed", stream.seed},
                   {"stream", stream.stream},
                   {"redraws", stream.redraws},
                   {"n", stream.seq.size()},
                   {"horizon", stream.seq.horizon()},
                   {"truth_changepoints", stream.truth_changepoints},
                   {"labels", stream.truth},
                   {"subsequences", subsequences}};
        with_output(a.truth_path, [&](std::ostream& out) { out << truth.dump(2) << '\n'; });
    }
    return 0;
}

struct GTestArgs {
    std::string input;
    std::optional<double> horizon;
    double bin_width = 1.0;
    std::optional<double> min_period;
    std::optional<double> max_period;
    std::string periodogram_path;
};

int run_gtest(const Globals& g, const GTestArgs& a) {
    auto seq = load_events(a.input, a.horizon);
    beaconseg::GTestOptions options;
    options.bin_width = a.bin_width;
    options.min_period = a.min_period;
    options.max_period = a.max_period;
    auto result = beaconseg::g_test(seq, options);
    auto refined = beaconseg::refine_period(seq, result.candidate_period);
    emit_json(g, json{{"g", result.g},
                      {"p_value", result.p_value},
                      {"peak_frequency", result.peak_frequency},
                      {"candidate_period", result.candidate_period},
                      {"refined_period", refined.period},
                      {"refine_fallback", refined.fallback},
                      {"bins", result.bins},
                      {"retained", result.retained},
                      {"bin_width", a.bin_width},
                      {"events", seq.size()}});
    if (!a.periodogram_path.empty()) {
        with_output(a.periodogram_path, [&](std::ostream& out) {
            beaconseg::write_csv_row(out, row({"frequency", "period", "power"}));
            for (const auto& point : result.periodogram) {
                beaconseg::write_csv_row(out, row({num(point.frequency), num(1.0 / point.frequency), num(point.power)}));
            }
        });
    }
    return 0;
}

struct DetectArgs {
    std::string input;
    std::optional<double> horizon;
    ParamFlags flags;
    double period = 0.0;
    std::string algorithm = "pelt";
    double alpha = 2.0;
    std::optional<double> pruning_constant;
};

int run_detect(const Globals& g, const DetectArgs& a) {
    auto seq = load_events(a.input, a.horizon);
    auto params = a.flags.params;
    params.period = a.period;
    auto mode = a.flags.polling_mode();
    auto algorithm = beaconseg::parse_algorithm(a.algorithm);
    double beta = beaconseg::bic_penalty(seq.size(), a.alpha);
    beaconseg::SearchResult result = algorithm == beaconseg::Algorithm::PELT
                                         ? beaconseg::search_pelt(seq, params, mode, beta, a.pruning_constant)
                                         : beaconseg::search(seq, params, mode, algorithm, beta);
    json doc{{"algorithm", beaconseg::to_string(result.algorithm)},
             {"mode", mode},
             {"params", params},
             {"alpha", a.alpha},
             {"beta", beta},
             {"total_objective", result.total_objective},
             {"partition", result.partition},
             {"labels", beaconseg::labels_from_partition(seq, result.partition)}};
    if (!result.pruning_stats.empty()) {
        double total = 0.0;
        for (auto c : result.pruning_stats) {
            total += static_cast<double>(c);
        }
        doc["mean_candidates"] = total / static_cast<double>(result.pruning_stats.size());
        doc["max_candidates"] = *std::max_element(result.pruning_stats.begin(), result.pruning_stats.end());
    }
    emit_json(g, doc);
    return 0;
}

struct FitArgs {
    std::string input;
    std::optional<double> horizon;
    std::optional<double> period;
    std::string prior_path;
    std::string mode = "fixed-duration";
    std::string algorithm = "pelt";
    double alpha = 2.0;
    std::size_t max_iters = 25;
    std::size_t mh_iters = 2000;
    std::size_t mh_burn_in = 500;
    double bin_width = 1.0;
    std::optional<double> min_period;
    std::optional<double> max_period;
    bool compare_modes = false;
};

json fit_json(const beaconseg::FitState& state) {
    json history = json::array();
    for (std::size_t i = 0; i < state.history.size(); ++i) {
        const auto& rec = state.history[i];
        history.push_back({{"iteration", i + 1},
                           {"objective", rec.objective},
                           {"changepoints", rec.changepoints},
                           {"mh_acceptance", rec.mh_acceptance},
                           {"params", rec.params}});
    }
    return json{{"converged", state.converged},   {"iterations", state.iterations},
                {"objective", state.objective},   {"params", state.params},
                {"partition", state.partition},   {"labels", state.labels},
                {"user_driven", state.labels.user_driven_count()}, {"history", history}};
}

int run_fit(const Globals& g, const FitArgs& a) {
    auto seq = load_events(a.input, a.horizon);
    json doc;
    double period = 0.0;
    if (a.period) {
        period = *a.period;
    } else {
        beaconseg::GTestOptions options;
        options.bin_width = a.bin_width;
        options.min_period = a.min_period;
        options.max_period = a.max_period;
        auto screen = beaconseg::g_test(seq, options);
        double candidate = beaconseg::correct_harmonic(seq, screen.candidate_period, a.max_period);
        period = beaconseg::refine_period(seq, candidate).period;
        doc["screen"] = {{"g", screen.g}, {"p_value", screen.p_value}, {"candidate_period", candidate}};
    }
    beaconseg::PriorHyper prior = beaconseg::default_prior(seq, period);
    if (!a.prior_path.empty()) {
        std::ifstream in(a.prior_path);
        if (!in) {
            throw beaconseg::Error("cannot open prior file " + a.prior_path);
        }
        json::parse(in).get_to(prior);
    }
    prior.validate();

    beaconseg::FitOptions options;
    options.algorithm = beaconseg::parse_algorithm(a.algorithm);
    options.alpha = a.alpha;
    options.max_iters = a.max_iters;
    options.mh.iterations = a.mh_iters;
    options.mh.burn_in = a.mh_burn_in;

    auto mode = beaconseg::parse_polling_mode(a.mode);
    beaconseg::Philox rng(g.seed);
    auto state = beaconseg::fit(seq, period, prior, mode, options, rng);
    doc["mode"] = mode;
    doc["initial_period"] = period;
    doc["prior"] = prior;
    doc["algorithm"] = beaconseg::to_string(options.algorithm);
    doc["alpha"] = a.alpha;
    doc["fit"] = fit_json(state);
    if (a.compare_modes) {
        json comparison = json::object();
        for (auto other : {beaconseg::PollingMode::FixedPhase, beaconseg::PollingMode::FixedDuration}) {
            beaconseg::Philox other_rng(g.seed);
            auto alt = other == mode ? state : beaconseg::fit(seq, period, prior, other, options, other_rng);
            comparison[std::string(beaconseg::to_string(other))] = {{"objective", alt.objective},
                                                                    {"changepoints", alt.partition.changepoints.size()},
                                                                    {"converged", alt.converged}};
        }
        doc["mode_comparison"] = comparison;
    }
    emit_json(g, doc);
    if (!state.converged) {
        std::cerr << "fit did not converge in " << state.iterations << " iterations\n";
        return EXIT_NOT_CONVERGED;
    }
    return 0;
}

struct BenchGTestArgs {
    beaconseg::GTestBenchConfig config;
    std::string pvalues_path;
    std::string summary_path;
};

int run_bench_gtest(const Globals& g, BenchGTestArgs a) {
    a.config.seed = g.seed;
    a.config.threads = g.threads;
    auto cells = beaconseg::bench_gtest(a.config);
    const std::vector<double> grid{0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    with_output(g.output, [&](std::ostream& out) {
        beaconseg::write_csv_row(out, row({"q", "S", "replicates", "x", "ecdf"}));
        for (const auto& cell : cells) {
            auto values = beaconseg::ecdf(cell.p_values, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                beaconseg::write_csv_row(out, row({num(cell.q), std::to_string(cell.subsequences),
                                                   std::to_string(cell.p_values.size()), num(grid[i]), num(values[i])}));
            }
        }
    });
    if (!a.pvalues_path.empty()) {
        with_output(a.pvalues_path, [&](std::ostream& out) {
            beaconseg::write_csv_row(out, row({"q", "S", "replicate", "p_value"}));
            for (const auto& cell : cells) {
                for (std::size_t r = 0; r < cell.p_values.size(); ++r) {
                    beaconseg::write_csv_row(
                        out, row({num(cell.q), std::to_string(cell.subsequences), std::to_string(r), num(cell.p_values[r])}));
                }
            }
        });
    }
    if (!a.summary_path.empty()) {
        json summary = json::array();
        for (const auto& cell : cells) {
            auto ks = beaconseg::ks_uniform(cell.p_values);
            summary.push_back({{"q", cell.q},
                               {"S", cell.subsequences},
                               {"fraction_below_0.01", cell.fraction_below(0.01)},
                               {"ks_statistic", ks.statistic},
                               {"ks_p_value", ks.p_value},
                               {"failures", cell.failures}});
        }
        with_output(a.summary_path,
                    [&](std::ostream& out) { out << json{{"manifest", manifest(g)}, {"cells", summary}}.dump(2) << '\n'; });
    }
    return 0;
}

std::vector<beaconseg::Algorithm> parse_algorithms(const std::vector<std::string>& names) {
    std::vector<beaconseg::Algorithm> out;
    for (const auto& name : names) {
        out.push_back(beaconseg::parse_algorithm(name));
    }
    return out;
}

struct BenchRocArgs {
    beaconseg::RocConfig config;
    std::vector<std::string> algorithms{"pelt", "bs"};
};

int run_bench_roc(const Globals& g, BenchRocArgs a) {
    a.config.seed = g.seed;
    a.config.threads = g.threads;
    a.config.algorithms = parse_algorithms(a.algorithms);
    auto points = beaconseg::bench_roc(a.config);
    with_output(g.output, [&](std::ostream& out) {
        beaconseg::write_csv_row(out, row({"setting", "alpha", "algorithm", "tp", "fp", "replicates"}));
        for (const auto& p : points) {
            beaconseg::write_csv_row(out, row({p.setting, num(p.alpha), std::string(beaconseg::to_string(p.algorithm)),
                                               num(p.tp), num(p.fp), std::to_string(p.replicates)}));
        }
    });
    return 0;
}

struct BenchRuntimeArgs {
    beaconseg::RuntimeConfig config;
    std::vector<std::string> algorithms{"pelt", "bs"};
};

int run_bench_runtime(const Globals& g, BenchRuntimeArgs a) {
    a.config.seed = g.seed;
    a.config.algorithms = parse_algorithms(a.algorithms);
    auto rows = beaconseg::bench_runtime(a.config);
    with_output(g.output, [&](std::ostream& out) {
        beaconseg::write_csv_row(out, row({"setting", "true_changepoints", "algorithm", "events", "seconds", "found", "stable"}));
        for (const auto& r : rows) {
            beaconseg::write_csv_row(out, row({r.setting, std::to_string(r.true_changepoints),
                                               std::string(beaconseg::to_string(r.algorithm)), std::to_string(r.events),
                                               num(r.seconds), std::to_string(r.found), r.stable ? "true" : "false"}));
        }
    });
    return 0;
}

struct BenchRobustnessArgs {
    std::vector<std::string> inputs;
    beaconseg::CorpusConfig corpus;
    std::size_t repetitions = 10;
    std::string mode = "fixed-duration";
    double bin_width = 1.0;
};

int run_bench_robustness(const Globals& g, BenchRobustnessArgs a) {
    std::vector<beaconseg::EventSequence> sequences;
    if (a.inputs.empty()) {
        a.corpus.seed = g.seed;
        for (auto& edge : beaconseg::simulate_lanl_corpus(a.corpus)) {
            sequences.push_back(std::move(edge.seq));
        }
    } else {
        for (const auto& path : a.inputs) {
            sequences.push_back(load_events(path, std::nullopt));
        }
    }
    beaconseg::RobustnessConfig config;
    config.repetitions = a.repetitions;
    config.seed = g.seed;
    config.threads = g.threads;
    config.pipeline.mode = beaconseg::parse_polling_mode(a.mode);
    config.pipeline.bin_width = a.bin_width;
    auto report = beaconseg::bench_robustness(sequences, config);
    json priors = json::array();
    for (const auto& setting : config.priors) {
        priors.push_back({{"name", setting.name}, {"base", setting.base}, {"lambda_from_data", setting.lambda_from_data}});
    }
    emit_json(g, json{{"c", report.c},
                      {"d", report.d},
                      {"repetitions", report.repetitions},
                      {"events", report.events},
                      {"sequences", sequences.size()},
                      {"priors", priors}});
    return 0;
}

struct HistogramArgs {
    std::string input;
    std::size_t bins = 24;
    double day = beaconseg::SECONDS_PER_DAY;
    std::string labels_path;
};

int run_histogram(const Globals& g, const HistogramArgs& a) {
    auto seq = load_events(a.input, std::nullopt);
    std::vector<double> times(seq.times().begin(), seq.times().end());
    if (!a.labels_path.empty()) {
        std::ifstream in(a.labels_path);
        if (!in) {
            throw beaconseg::Error("cannot open labels file " + a.labels_path);
        }
        json doc = json::parse(in);
        // Accept a bare EventLabels document, a fit report or a simulation truth file.
        const json* node = &doc;
        if (doc.contains("fit")) {
            node = &doc.at("fit").at("labels");
        } else if (doc.contains("labels") && doc.at("labels").is_object()) {
            node = &doc.at("labels");
        }
        auto labels = node->get<beaconseg::EventLabels>();
        if (labels.labels.size() != times.size()) {
            throw beaconseg::Error("labels cover " + std::to_string(labels.labels.size()) + " events, input has " +
                                   std::to_string(times.size()));
        }
        std::vector<double> kept;
        for (auto idx : labels.user_driven_indices()) {
            kept.push_back(times[idx]);
        }
        times = std::move(kept);
    }
    auto counts = beaconseg::histogram_time_of_day(times, a.bins, a.day);
    with_output(g.output, [&](std::ostream& out) {
        beaconseg::write_csv_row(out, row({"bin", "start_seconds", "end_seconds", "count"}));
        const double width = a.day / static_cast<double>(a.bins);
        for (std::size_t b = 0; b < counts.size(); ++b) {
            beaconseg::write_csv_row(out, row({std::to_string(b), num(width * static_cast<double>(b)),
                                               num(width * static_cast<double>(b + 1)), std::to_string(counts[b])}));
        }
    });
    return 0;
}

struct ParseLanlArgs {
    std::string input;
    std::string schema;
    std::optional<std::string> event_kind;
    bool lenient = false;
    std::string output_dir;
};

std::string edge_file_name(const beaconseg::EdgeId& edge) {
    std::string name = edge.user + "__" + edge.source_computer + "__" + edge.destination_computer + ".txt";
    for (char& ch : name) {
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')) {
            ch = '_';
        }
    }
    return name;
}

int run_parse_lanl(const Globals& g, const ParseLanlArgs& a) {
    beaconseg::LanlOptions options;
    if (!a.schema.empty()) {
        options.schema = beaconseg::LanlSchema::parse(a.schema);
    }
    options.event_kind = a.event_kind;
    options.lenient = a.lenient;
    beaconseg::LanlParseResult result;
    if (a.input == "-") {
        result = beaconseg::parse_lanl(std::cin, options);
    } else {
        std::ifstream in(a.input);
        if (!in) {
            throw beaconseg::Error("cannot open " + a.input);
        }
        result = beaconseg::parse_lanl(in, options);
    }
    json edges = json::array();
    if (!a.output_dir.empty()) {
        std::filesystem::create_directories(a.output_dir);
    }
    for (const auto& [edge, seq] : result.edges) {
        json entry{{"edge", edge}, {"events", seq.size()}};
        if (!a.output_dir.empty()) {
            auto path = std::filesystem::path(a.output_dir) / edge_file_name(edge);
            std::ofstream out(path);
            if (!out) {
                throw beaconseg::Error("cannot write " + path.string());
            }
            beaconseg::write_event_file(out, seq);
            entry["file"] = path.string();
        } else {
            entry["times"] = std::vector<double>(seq.times().begin(), seq.times().end());
        }
        edges.push_back(entry);
    }
    for (const auto& message : result.skipped) {
        std::cerr << "skipped " << message << '\n';
    }
    emit_json(g, json{{"window_start", result.window_start},
                      {"lines", result.lines},
                      {"records", result.records},
                      {"skipped", result.skipped.size()},
                      {"horizon", result.edges.empty() ? 0.0 : result.edges.begin()->second.horizon()},
                      {"edges", edges}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detect intermittent periodic (beaconing) behaviour in event-time streams", "beaconseg"};
    app.set_version_flag("--version", beaconseg::VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    for (int i = 0; i < argc; ++i) {
        g.argv.emplace_back(argv[i]);
    }
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--manifest", g.manifest_path, "Write the run manifest (JSON) here instead of stderr");
    app.add_option("-o,--output", g.output, "Output path ('-' for stdout)")->capture_default_str();

    std::function<int()> action;

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate an event stream with ground truth");
    sim.flags.add(simulate, true);
    simulate->add_option("-S,--subsequences", sim.subsequences, "Number of polling subsequences")->capture_default_str();
    simulate->add_flag("--perturbed", sim.perturbed, "Grid with U(-0.2, 0.2) P noise (periodogram study generator)");
    simulate->add_option("--truth", sim.truth_path, "Write ground truth JSON here");
    simulate->callback([&] { action = [&] { return run_simulate(g, sim); }; });

    GTestArgs gt;
    auto* gtest = app.add_subcommand("gtest", "Fisher's g test for periodicity");
    gtest->add_option("input", gt.input, "Event file ('-' for stdin)")->required();
    gtest->add_option("--horizon", gt.horizon, "Observation window length (s)");
    gtest->add_option("--bin-width", gt.bin_width, "Bin width (s)")->capture_default_str();
    gtest->add_option("--min-period", gt.min_period, "Smallest period in the test band (s)");
    gtest->add_option("--max-period", gt.max_period, "Largest period in the test band (s)");
    gtest->add_option("--periodogram", gt.periodogram_path, "Write the periodogram CSV here");
    gtest->callback([&] { action = [&] { return run_gtest(g, gt); }; });

    DetectArgs det;
    auto* detect = app.add_subcommand("detect", "Changepoint search with fixed parameters");
    detect->add_option("input", det.input, "Event file ('-' for stdin)")->required();
    detect->add_option("--horizon", det.horizon, "Observation window length (s)");
    det.flags.add(detect, false);
    detect->add_option("--period", det.period, "Polling period (s)")->required();
    detect->add_option("--algorithm", det.algorithm, "bs, op or pelt")
        ->check(CLI::IsMember({"bs", "op", "pelt"}))
        ->capture_default_str();
    detect->add_option("--alpha", det.alpha, "BIC penalty multiplier")->capture_default_str();
    detect->add_option("--pruning-constant", det.pruning_constant, "PELT pruning constant K");
    detect->callback([&] { action = [&] { return run_detect(g, det); }; });

    FitArgs fa;
    auto* fitcmd = app.add_subcommand("fit", "Iterative changepoint and parameter estimation");
    fitcmd->add_option("input", fa.input, "Event file ('-' for stdin)")->required();
    fitcmd->add_option("--horizon", fa.horizon, "Observation window length (s)");
    fitcmd->add_option("--period", fa.period, "Initial period (s); screened by the g test when omitted");
    fitcmd->add_option("--prior", fa.prior_path, "Prior hyper-parameter JSON (missing keys keep defaults)");
    fitcmd->add_option("--mode", fa.mode, "Polling mode")
        ->check(CLI::IsMember({"fixed-phase", "fixed-duration"}))
        ->capture_default_str();
    fitcmd->add_option("--algorithm", fa.algorithm, "bs, op or pelt")
        ->check(CLI::IsMember({"bs", "op", "pelt"}))
        ->capture_default_str();
    fitcmd->add_option("--alpha", fa.alpha, "BIC penalty multiplier")->capture_default_str();
    fitcmd->add_option("--max-iters", fa.max_iters, "Iteration limit")->capture_default_str();
    fitcmd->add_option("--mh-iters", fa.mh_iters, "Metropolis-Hastings iterations")->capture_default_str();
    fitcmd->add_option("--mh-burn-in", fa.mh_burn_in, "Metropolis-Hastings burn-in")->capture_default_str();
    fitcmd->add_option("--bin-width", fa.bin_width, "g test bin width (s)")->capture_default_str();
    fitcmd->add_option("--min-period", fa.min_period, "Smallest period in the g test band (s)");
    fitcmd->add_option("--max-period", fa.max_period, "Largest period in the g test band (s)");
    fitcmd->add_flag("--compare-modes", fa.compare_modes, "Also report the objective under the other polling mode");
    fitcmd->callback([&] { action = [&] { return run_fit(g, fa); }; });

    auto* bench = app.add_subcommand("bench", "Benchmarks and experiments");
    bench->require_subcommand(1);

    BenchGTestArgs bg;
    auto* bench_gtest = bench->add_subcommand("gtest", "p-value ECDFs of the periodogram study");
    bench_gtest->add_option("--q", bg.config.q_grid, "q grid")->capture_default_str();
    bench_gtest->add_option("--S", bg.config.s_grid, "S grid")->capture_default_str();
    bench_gtest->add_option("--replicates", bg.config.replicates, "Replicates per cell")->capture_default_str();
    bench_gtest->add_option("--lambda", bg.config.lambda, "Inactivity rate")->capture_default_str();
    bench_gtest->add_option("--period", bg.config.period, "Period")->capture_default_str();
    bench_gtest->add_option("--bin-width", bg.config.bin_width, "Bin width")->capture_default_str();
    bench_gtest->add_option("--pvalues", bg.pvalues_path, "Write raw p-values CSV here");
    bench_gtest->add_option("--summary", bg.summary_path, "Write per-cell summary JSON here");
    bench_gtest->callback([&] { action = [&] { return run_bench_gtest(g, bg); }; });

    BenchRocArgs br;
    auto* bench_roc = bench->add_subcommand("roc", "TP/FP rates over the alpha grid");
    bench_roc->add_option("--alphas", br.config.alphas, "Alpha grid")->capture_default_str();
    bench_roc->add_option("--algorithms", br.algorithms, "Algorithms")->capture_default_str();
    bench_roc->add_option("--sequences", br.config.sequences, "Sequences per setting")->capture_default_str();
    bench_roc->add_option("--subsequences", br.config.subsequences, "Subsequences per sequence")->capture_default_str();
    bench_roc->add_option("--tolerance", br.config.tolerance, "Index tolerance for a match")->capture_default_str();
    bench_roc->callback([&] { action = [&] { return run_bench_roc(g, br); }; });

    BenchRuntimeArgs bt;
    auto* bench_runtime = bench->add_subcommand("runtime", "Wall-clock time against changepoint count");
    bench_runtime->add_option("--changepoints", bt.config.changepoints, "True changepoint counts")->capture_default_str();
    bench_runtime->add_option("--algorithms", bt.algorithms, "Algorithms")->capture_default_str();
    bench_runtime->add_option("--repeats", bt.config.repeats, "Timed repeats")->capture_default_str();
    bench_runtime->add_option("--alpha", bt.config.alpha, "BIC penalty multiplier")->capture_default_str();
    bench_runtime->callback([&] { action = [&] { return run_bench_runtime(g, bt); }; });

    BenchRobustnessArgs bb;
    auto* bench_rob = bench->add_subcommand("robustness", "Label stability across MH runs and priors");
    bench_rob->add_option("inputs", bb.inputs, "Event files (default: simulated LANL-like corpus)");
    bench_rob->add_option("--repetitions", bb.repetitions, "Repetitions per prior")->capture_default_str();
    bench_rob->add_option("--edges", bb.corpus.edges, "Simulated edges")->capture_default_str();
    bench_rob->add_option("--days", bb.corpus.days, "Simulated days")->capture_default_str();
    bench_rob->add_option("--mode", bb.mode, "Polling mode")
        ->check(CLI::IsMember({"fixed-phase", "fixed-duration"}))
        ->capture_default_str();
    bench_rob->add_option("--bin-width", bb.bin_width, "g test bin width (s)")->capture_default_str();
    bench_rob->callback([&] { action = [&] { return run_bench_robustness(g, bb); }; });

    HistogramArgs ha;
    auto* histogram = app.add_subcommand("histogram", "Time-of-day histogram");
    histogram->add_option("input", ha.input, "Event file ('-' for stdin)")->required();
    histogram->add_option("--bins", ha.bins, "Number of bins")->capture_default_str();
    histogram->add_option("--day", ha.day, "Day length (s)")->capture_default_str();
    histogram->add_option("--labels", ha.labels_path, "Keep only user-driven events from this labels/fit JSON");
    histogram->callback([&] { action = [&] { return run_histogram(g, ha); }; });

    ParseLanlArgs pl;
    auto* parse = app.add_subcommand("parse-lanl", "Split an authentication log into per-edge event files");
    parse->add_option("input", pl.input, "Log file ('-' for stdin)")->required();
    parse->add_option("--schema", pl.schema, "Column names in file order, e.g. time,src_user,dst_user,...");
    parse->add_option("--event-kind", pl.event_kind, "Keep only this event kind (e.g. LogOn)");
    parse->add_flag("--lenient", pl.lenient, "Skip malformed lines instead of failing");
    parse->add_option("--output-dir", pl.output_dir, "Write one event file per edge here");
    parse->callback([&] { action = [&] { return run_parse_lanl(g, pl); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EXIT_USAGE;
    }

    for (auto* sub : app.get_subcommands()) {
        g.command = sub->get_name();
        for (auto* nested : sub->get_subcommands()) {
            g.command += " " + nested->get_name();
        }
    }
    try {
        write_manifest(g);
        return action ? action() : EXIT_USAGE;
    } catch (const beaconseg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_DATA;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_DATA;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_DATA;
    }
}
