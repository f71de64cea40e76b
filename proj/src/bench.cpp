#include <beaconseg/bench.hpp>

#include <beaconseg/directional.hpp>
#include <beaconseg/parallel.hpp>
#include <beaconseg/segment_cost.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace beaconseg {

namespace {

constexpr std::uint64_t stream_id(std::uint64_t high, std::uint64_t low) { return (high << 32) | low; }

LabeledStream simulate(const SimulationSetting& setting, std::size_t subsequences, Philox& rng) {
    return setting.mode == PollingMode::FixedPhase ? simulate_fixed_phase(setting.params, subsequences, rng)
                                                   : simulate_fixed_duration(setting.params, subsequences, rng);
}

} // namespace

double GTestCell::fraction_below(double level) const {
    if (p_values.empty()) {
        return 0.0;
    }
    auto below = std::count_if(p_values.begin(), p_values.end(), [level](double p) { return p < level; });
    return static_cast<double>(below) / static_cast<double>(p_values.size());
}

GTestCell gtest_cell(double q, std::size_t subsequences, const GTestBenchConfig& config, std::size_t cell_index) {
    GTestCell cell;
    cell.q = q;
    cell.subsequences = subsequences;
    cell.p_values.assign(config.replicates, 1.0);
    std::vector<std::uint8_t> failed(config.replicates, 0);
    const Philox root(config.seed);
    parallel_for(config.replicates, config.threads, [&](std::size_t r) {
        Philox rng = root.split(stream_id(cell_index, r));
        LabeledStream stream = sample_perturbed_uniform_stream(config.lambda, q, subsequences, config.period, rng);
        try {
            cell.p_values[r] = g_test(stream.seq, config.bin_width).p_value;
        } catch (const Error&) {
            failed[r] = 1;
        }
    });
    cell.failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
    return cell;
}

std::vector<GTestCell> bench_gtest(const GTestBenchConfig& config) {
    if (config.q_grid.empty() || config.s_grid.empty()) {
        throw InvalidParameter("q and S grids must be non-empty");
    }
    std::vector<GTestCell> cells;
    std::size_t index = 0;
    for (double q : config.q_grid) {
        for (std::size_t s : config.s_grid) {
            cells.push_back(gtest_cell(q, s, config, index++));
        }
    }
    return cells;
}

std::vector<SimulationSetting> default_settings() {
    SimulationSetting easy;
    easy.name = "easy";
    easy.params = ModelParams{0.05, 0.05, 0.1, 0.1, 50.0, 1.0};
    SimulationSetting hard;
    hard.name = "hard";
    hard.params = ModelParams{0.1, 0.1, 0.2, 0.2, 10.0, 1.0};
    return {easy, hard};
}

std::vector<double> default_alpha_grid() { return {-3.0, -1.5, 0.0, 2.0, 5.0, 10.0, 20.0, 40.0}; }

std::vector<RocPoint> bench_roc(const RocConfig& config) {
    const std::size_t alphas = config.alphas.size();
    const std::size_t algorithms = config.algorithms.size();
    std::vector<RocPoint> points;
    const Philox root(config.seed);
    for (std::size_t s = 0; s < config.settings.size(); ++s) {
        const auto& setting = config.settings[s];
        // rates[seq][alpha * algorithms + algorithm]
        std::vector<std::vector<Rates>> rates(config.sequences);
        parallel_for(config.sequences, config.threads, [&](std::size_t i) {
            Philox rng = root.split(stream_id(s, i));
            LabeledStream stream = simulate(setting, config.subsequences, rng);
            const std::size_t n = stream.seq.size();
            rates[i].resize(alphas * algorithms);
            for (std::size_t a = 0; a < alphas; ++a) {
                double beta = bic_penalty(n, config.alphas[a]);
                for (std::size_t g = 0; g < algorithms; ++g) {
                    SearchResult found = search(stream.seq, setting.params, setting.mode, config.algorithms[g], beta);
                    rates[i][a * algorithms + g] =
                        tp_fp(found.partition.changepoints, stream.truth_changepoints, n, config.tolerance);
                }
            }
        });
        for (std::size_t a = 0; a < alphas; ++a) {
            for (std::size_t g = 0; g < algorithms; ++g) {
                RocPoint point;
                point.setting = setting.name;
                point.alpha = config.alphas[a];
                point.algorithm = config.algorithms[g];
                point.replicates = config.sequences;
                for (const auto& row : rates) {
                    point.tp += row[a * algorithms + g].tp;
                    point.fp += row[a * algorithms + g].fp;
                }
                point.tp /= static_cast<double>(config.sequences);
                point.fp /= static_cast<double>(config.sequences);
                points.push_back(point);
            }
        }
    }
    return points;
}

std::vector<RuntimeRow> bench_runtime(const RuntimeConfig& config) {
    std::vector<RuntimeRow> rows;
    const Philox root(config.seed);
    const std::size_t repeats = std::max<std::size_t>(config.repeats, 1);
    for (std::size_t s = 0; s < config.settings.size(); ++s) {
        const auto& setting = config.settings[s];
        for (std::size_t cp : config.changepoints) {
            Philox rng = root.split(stream_id(s, cp));
            LabeledStream stream = simulate(setting, cp + 1, rng);
            const double beta = bic_penalty(stream.seq.size(), config.alpha);
            for (Algorithm algorithm : config.algorithms) {
                RuntimeRow row;
                row.setting = setting.name;
                row.true_changepoints = cp;
                row.algorithm = algorithm;
                row.events = stream.seq.size();
                std::optional<Partition> first;
                double total = 0.0;
                for (std::size_t rep = 0; rep < repeats; ++rep) {
                    auto start = std::chrono::steady_clock::now();
                    SearchResult found = search(stream.seq, setting.params, setting.mode, algorithm, beta);
                    auto stop = std::chrono::steady_clock::now();
                    total += std::chrono::duration<double>(stop - start).count();
                    if (!first) {
                        first = found.partition;
                        row.found = found.partition.changepoints.size();
                    } else if (!(found.partition == *first)) {
                        row.stable = false;
                    }
                }
                row.seconds = total / static_cast<double>(repeats);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<CorpusEdge> simulate_lanl_corpus(const CorpusConfig& config) {
    if (config.edges == 0 || config.days == 0 || !(config.min_period > 0.0) ||
        config.max_period < config.min_period || !(config.day_end > config.day_start) ||
        !(config.mean_periods >= 1.0)) {
        throw InvalidParameter("invalid corpus configuration");
    }
    std::vector<CorpusEdge> corpus;
    const Philox root(config.seed);
    const double q = 1.0 / config.mean_periods;
    for (std::size_t e = 0; e < config.edges; ++e) {
        Philox rng = root.split(e);
        CorpusEdge edge;
        edge.edge = EdgeId{"U" + std::to_string(100 + e), "C" + std::to_string(1000 + e), "C" + std::to_string(500)};
        edge.period = uniform(rng, config.min_period, config.max_period);
        const double period = edge.period;
        const double scale = period / TWO_PI;

        // (time, session) pairs; sessions are numbered in start order.
        std::vector<std::pair<double, std::size_t>> events;
        std::size_t session = 0;
        double busy_until = -1e300;
        std::vector<double> errors;
        for (std::size_t d = 0; d < config.days; ++d) {
            const double midnight = static_cast<double>(d) * SECONDS_PER_DAY;
            const std::size_t wanted = 1 + static_cast<std::size_t>(
                                               std::floor(uniform01(rng) * static_cast<double>(config.max_sessions_per_day)));
            for (std::size_t k = 0; k < wanted; ++k) {
                double earliest = std::max(midnight + config.day_start, busy_until + config.separation_periods * period);
                double latest = midnight + config.day_end;
                if (earliest > latest) {
                    break;
                }
                double start = uniform(rng, earliest, latest);
                std::vector<std::size_t> counts;
                std::size_t total = 0;
                while (total == 0) {
                    counts.assign(static_cast<std::size_t>(geometric1(rng, q)), 0);
                    for (auto& m : counts) {
                        m = sample_hurdle_count(config.p, config.r, rng);
                        total += m;
                    }
                }
                double mean = start - period;
                double last_event = start;
                for (std::size_t j = 0; j < counts.size(); ++j) {
                    double anchor = j == 0 ? start : mean + period;
                    errors.clear();
                    for (std::size_t m = 0; m < counts[j]; ++m) {
                        errors.push_back(von_mises_centered(rng, config.kappa));
                    }
                    if (errors.empty()) {
                        mean = anchor;
                        continue;
                    }
                    double sum = 0.0;
                    for (double z : errors) {
                        double t = anchor + scale * z;
                        sum += t;
                        last_event = std::max(last_event, t);
                        events.emplace_back(t, session);
                    }
                    mean = sum / static_cast<double>(errors.size());
                }
                busy_until = last_event;
                ++session;
            }
        }
        std::stable_sort(events.begin(), events.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        const double horizon = static_cast<double>(config.days) * SECONDS_PER_DAY;
        std::vector<double> times;
        times.reserve(events.size());
        std::vector<bool> seen(session, false);
        edge.truth.labels.assign(events.size(), EventLabel::Automated);
        for (std::size_t idx = 0; idx < events.size(); ++idx) {
            times.push_back(std::clamp(events[idx].first, 0.0, horizon));
            std::size_t s = events[idx].second;
            if (!seen[s]) {
                seen[s] = true;
                edge.truth.labels[idx] = EventLabel::UserDriven;
                if (idx > 0) {
                    edge.truth_changepoints.push_back(idx);
                }
            }
        }
        edge.seq = validate_sequence(std::move(times), horizon, edge.edge);
        corpus.push_back(std::move(edge));
    }
    return corpus;
}

PriorHyper PriorSetting::for_sequence(const EventSequence& seq, double period) const {
    PriorHyper prior = base;
    if (lambda_from_data) {
        prior.beta_lambda = base.alpha_lambda * default_prior(seq, period).beta_lambda;
    }
    return prior;
}

std::vector<PriorSetting> default_prior_settings() {
    PriorSetting flat;
    flat.name = "flat";

    PriorSetting informative;
    informative.name = "informative";
    informative.base.alpha_p = 1.0;
    informative.base.beta_p = 9.0;
    informative.base.alpha_r = 1.0;
    informative.base.beta_r = 9.0;
    informative.base.alpha_q = 1.0;
    informative.base.beta_q = 9.0;
    informative.base.alpha_lambda = 2.0;
    informative.base.c = 5.0;
    informative.base.r0 = 4.75;

    PriorSetting diffuse;
    diffuse.name = "diffuse";
    diffuse.base.alpha_p = 2.0;
    diffuse.base.beta_p = 2.0;
    diffuse.base.alpha_r = 2.0;
    diffuse.base.beta_r = 2.0;
    diffuse.base.alpha_q = 2.0;
    diffuse.base.beta_q = 2.0;
    diffuse.base.alpha_lambda = 0.5;
    diffuse.base.c = 1.0;
    diffuse.base.r0 = 0.5;
    return {flat, informative, diffuse};
}

EdgeScreen screen_edge(const EventSequence& seq, const PipelineOptions& options) {
    EdgeScreen screen;
    GTestOptions gopts;
    gopts.bin_width = options.bin_width;
    gopts.min_period = options.min_period;
    gopts.max_period = options.max_period;
    try {
        screen.gtest = g_test(seq, gopts);
    } catch (const Error& err) {
        screen.note = err.what();
        return screen;
    }
    if (!(screen.gtest->p_value < options.significance)) {
        screen.note = "no significant periodicity";
        return screen;
    }
    screen.periodic = true;
    double candidate = correct_harmonic(seq, screen.gtest->candidate_period, options.max_period);
    screen.period = refine_period(seq, candidate).period;
    return screen;
}

EdgeAnalysis analyse_edge(const EventSequence& seq, const EdgeScreen& screen, const PriorSetting& prior,
                          const PipelineOptions& options, Philox& rng) {
    EdgeAnalysis analysis;
    analysis.screen = screen;
    if (!screen.periodic) {
        analysis.labels.labels.assign(seq.size(), EventLabel::UserDriven);
        return analysis;
    }
    analysis.fit = fit(seq, screen.period, prior.for_sequence(seq, screen.period), options.mode, options.fit, rng);
    analysis.labels = analysis.fit->labels;
    return analysis;
}

EdgeAnalysis analyse_edge(const EventSequence& seq, const PriorSetting& prior, const PipelineOptions& options,
                          Philox& rng) {
    return analyse_edge(seq, screen_edge(seq, options), prior, options, rng);
}

RobustnessReport bench_robustness(const std::vector<EventSequence>& sequences, const RobustnessConfig& config) {
    if (config.repetitions < 2) {
        throw InvalidParameter("robustness needs at least two repetitions");
    }
    if (config.priors.empty()) {
        throw InvalidParameter("at least one prior setting is required");
    }
    std::vector<EdgeScreen> screens(sequences.size());
    parallel_for(sequences.size(), config.threads,
                 [&](std::size_t e) { screens[e] = screen_edge(sequences[e], config.pipeline); });

    const std::size_t settings = config.priors.size();
    const std::size_t jobs = settings * config.repetitions;
    std::vector<std::vector<std::uint8_t>> runs(jobs);
    const Philox root(config.seed);
    parallel_for(jobs, config.threads, [&](std::size_t job) {
        const std::size_t l = job / config.repetitions;
        for (std::size_t e = 0; e < sequences.size(); ++e) {
            Philox rng = root.split(stream_id(job, e));
            EdgeAnalysis analysis = analyse_edge(sequences[e], screens[e], config.priors[l], config.pipeline, rng);
            for (auto label : analysis.labels.labels) {
                runs[job].push_back(label == EventLabel::UserDriven ? 1 : 0);
            }
        }
    });

    std::vector<std::vector<std::vector<std::uint8_t>>> labels(settings);
    for (std::size_t job = 0; job < jobs; ++job) {
        labels[job / config.repetitions].push_back(std::move(runs[job]));
    }
    return robustness_metrics(labels);
}

} // namespace beaconseg
