#pragma once

// Goodness-of-fit and moment helpers used by the verification experiments.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "qstrat/errors.hpp"
#include "qstrat/special_functions.hpp"

namespace qstrat::stats {

inline double mean(std::span<const double> v) {
    if (v.empty()) throw EmptySample("mean of empty sample");
    double acc = 0.0;
    for (const double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

// Unbiased (n - 1) sample variance.
inline double sample_variance(std::span<const double> v) {
    if (v.size() < 2) throw EmptySample("variance needs at least two values");
    const double mu = mean(v);
    double acc = 0.0;
    for (const double x : v) acc += (x - mu) * (x - mu);
    return acc / static_cast<double>(v.size() - 1);
}

inline double std_error_of_mean(std::span<const double> v) {
    return std::sqrt(sample_variance(v) / static_cast<double>(v.size()));
}

// Large-sample standard error of the sample variance, sqrt((m4 - m2^2) / n).
inline double std_error_of_variance(std::span<const double> v) {
    if (v.size() < 2) throw EmptySample("variance needs at least two values");
    const double mu = mean(v);
    double m2 = 0.0;
    double m4 = 0.0;
    for (const double x : v) {
        const double d2 = (x - mu) * (x - mu);
        m2 += d2;
        m4 += d2 * d2;
    }
    const auto n = static_cast<double>(v.size());
    m2 /= n;
    m4 /= n;
    return std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
}

inline double z_score(double empirical, double theory, double std_err) {
    if (std_err > 0.0) return (empirical - theory) / std_err;
    return empirical == theory ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), empirical - theory);
}

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double df = 0.0;  // chi-square only

    bool passes(double alpha) const { return p_value >= alpha; }
};

// Survival function of the Kolmogorov distribution.
inline double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

// One-sample Kolmogorov-Smirnov test against a continuous CDF. The p-value
// uses the Stephens small-sample correction to the asymptotic law.
template <class Cdf>
TestResult ks_test(std::vector<double> sample, Cdf&& cdf) {
    if (sample.empty()) throw EmptySample("KS test of empty sample");
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    const double sqrt_n = std::sqrt(n);
    TestResult out;
    out.statistic = d;
    out.p_value = kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
    return out;
}

// Pearson chi-square goodness of fit of observed counts to probabilities.
inline TestResult chi_square_test(std::span<const double> observed, std::span<const double> probs) {
    if (observed.size() != probs.size() || observed.size() < 2) {
        throw EmptySample("chi-square needs at least two matching cells");
    }
    double total = 0.0;
    for (const double o : observed) total += o;
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = total * probs[i];
        stat += (observed[i] - e) * (observed[i] - e) / e;
    }
    TestResult out;
    out.statistic = stat;
    out.df = static_cast<double>(observed.size() - 1);
    out.p_value = special::incomplete_gamma_upper(0.5 * out.df, 0.5 * stat);
    return out;
}

}  // namespace qstrat::stats
