#include <beaconseg/spectral.hpp>

#include <beaconseg/fft.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace beaconseg {

BinnedCounts binned_counts(const EventSequence& seq, double bin_width) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw DegenerateBinning("bin width must be positive");
    }
    if (!(seq.horizon() > 0.0)) {
        throw DegenerateBinning("cannot bin a zero-length window");
    }
    auto bins = static_cast<std::size_t>(std::ceil(seq.horizon() / bin_width));
    BinnedCounts result;
    result.bin_width = bin_width;
    result.counts.assign(bins, 0);
    for (double t : seq.times()) {
        auto index = static_cast<std::size_t>(std::floor(t / bin_width));
        ++result.counts[std::min(index, bins - 1)];
    }
    double mean = static_cast<double>(seq.size()) / static_cast<double>(bins);
    result.centered.reserve(bins);
    for (auto count : result.counts) {
        result.centered.push_back(static_cast<double>(count) - mean);
    }
    return result;
}

double fisher_g_pvalue(double g, std::size_t retained) {
    using Real = boost::multiprecision::cpp_bin_float_50;
    if (retained < 2) {
        throw DegenerateBinning("Fisher's test needs at least two ordinates");
    }
    if (!(g > 0.0)) {
        return 1.0;
    }
    if (g >= 1.0) {
        return 0.0;
    }
    const double n = static_cast<double>(retained);
    // The leading term bounds the tail from above and the alternating sum
    // behaves like 1 - exp(-lead); beyond lead = 40 the p-value is 1 to
    // double precision and the sum would only lose digits to cancellation.
    double lead = n * std::exp((n - 1.0) * std::log1p(-g));
    if (lead > 40.0) {
        return 1.0;
    }
    const auto terms = static_cast<std::size_t>(std::min(std::floor(1.0 / g), n));
    Real sum = 0;
    Real binomial = 1;
    const Real gg = g;
    for (std::size_t j = 1; j <= terms; ++j) {
        binomial = binomial * Real(retained - j + 1) / Real(j);
        Real base = 1 - Real(j) * gg;
        if (base <= 0) {
            break;
        }
        Real term = binomial * boost::multiprecision::pow(base, static_cast<int>(retained - 1));
        sum += (j % 2 == 1) ? term : Real(-term);
        if (term < Real(1e-40) && j > 1) {
            break;
        }
    }
    double p = sum.convert_to<double>();
    return std::clamp(p, 0.0, 1.0);
}

GTestResult g_test(const EventSequence& seq, double bin_width) {
    GTestOptions options;
    options.bin_width = bin_width;
    return g_test(seq, options);
}

GTestResult g_test(const EventSequence& seq, const GTestOptions& options) {
    if (seq.size() < 4) {
        throw TooFewEvents("g test needs at least 4 events");
    }
    BinnedCounts binned = binned_counts(seq, options.bin_width);
    const std::size_t n = binned.counts.size();
    if (n < 8) {
        throw DegenerateBinning("g test needs at least 8 bins");
    }
    auto transform = fft::dft(binned.centered);

    GTestResult result;
    result.bins = n;
    const double span = static_cast<double>(n) * options.bin_width;
    for (std::size_t j = 1; j <= n / 2; ++j) {
        result.periodogram.push_back({static_cast<double>(j) / span, std::norm(transform[j]) / static_cast<double>(n)});
    }

    // Nyquist (j = N/2 for even N) has a different null distribution.
    const std::size_t last = (n - 1) / 2;
    double total = 0.0;
    double best = -1.0;
    std::size_t best_index = 0;
    for (std::size_t j = 1; j <= last; ++j) {
        const auto& point = result.periodogram[j - 1];
        double period = 1.0 / point.frequency;
        if ((options.min_period && period < *options.min_period) ||
            (options.max_period && period > *options.max_period)) {
            continue;
        }
        ++result.retained;
        total += point.power;
        if (point.power > best) {
            best = point.power;
            best_index = j;
        }
    }
    if (result.retained < 2) {
        throw DegenerateBinning("fewer than two Fourier frequencies in the test band");
    }
    if (!(total > 0.0)) {
        throw DegenerateBinning("binned counts have no variation in the test band");
    }
    result.g = best / total;
    result.p_value = fisher_g_pvalue(result.g, result.retained);
    result.peak_frequency = result.periodogram[best_index - 1].frequency;
    result.candidate_period = 1.0 / result.peak_frequency;
    return result;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw EmptySample("median of an empty sample");
    }
    auto middle = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), middle, values.end());
    double upper = *middle;
    if (values.size() % 2 == 1) {
        return upper;
    }
    double lower = *std::max_element(values.begin(), middle);
    return 0.5 * (lower + upper);
}

RefinedPeriod refine_period(const EventSequence& seq, double candidate_period) {
    if (!(candidate_period > 0.0)) {
        throw NonPositivePeriod("candidate period must be positive");
    }
    std::vector<double> gaps;
    auto times = seq.times();
    for (std::size_t i = 1; i < times.size(); ++i) {
        double gap = times[i] - times[i - 1];
        if (gap >= 0.5 * candidate_period && gap <= 1.5 * candidate_period) {
            gaps.push_back(gap);
        }
    }
    RefinedPeriod result;
    result.gaps_used = gaps.size();
    if (gaps.empty()) {
        result.period = candidate_period;
        result.fallback = true;
        return result;
    }
    result.period = median(std::move(gaps));
    return result;
}

double correct_harmonic(const EventSequence& seq, double candidate_period, std::optional<double> max_period) {
    if (!(candidate_period > 0.0)) {
        throw NonPositivePeriod("candidate period must be positive");
    }
    auto times = seq.times();
    auto count_within = [&](double low, double high) {
        std::size_t count = 0;
        for (std::size_t i = 1; i < times.size(); ++i) {
            double gap = times[i] - times[i - 1];
            count += (gap >= low && gap <= high) ? 1 : 0;
        }
        return count;
    };
    double period = candidate_period;
    while (!max_period || 2.0 * period <= *max_period) {
        if (count_within(1.5 * period, 2.5 * period) <= count_within(0.5 * period, 1.5 * period)) {
            break;
        }
        period *= 2.0;
    }
    return period;
}

} // namespace beaconseg
