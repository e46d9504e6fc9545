#pragma once

// Sample-mean and importance-sampling estimators driven by IID, QS or LQS
// samples, plus the first-order Taylor variance approximations.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qstrat/distribution.hpp"
#include "qstrat/errors.hpp"
#include "qstrat/parallel.hpp"
#include "qstrat/sampling.hpp"
#include "qstrat/stats.hpp"

namespace qstrat {

using RealFn = std::function<double(double)>;

// Estimate mu = E_f[H(X)] from draws of the proposal g through the
// importance function H(x) f(x) / g(x).
struct ImportanceProblem {
    Distribution target;
    RealFn integrand;
    Distribution proposal;
    std::optional<double> true_value;
    std::string name = "custom";
};

struct EstimateSummary {
    std::vector<double> estimates;
    double mean = 0.0;
    double std_err = 0.0;  // standard deviation of the replicate estimates
    std::optional<double> rmse;
    Method method;
    int m = 0;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
};

template <class H>
double mean_estimate(std::span<const double> values, H&& h) {
    if (values.empty()) throw EmptySample("mean estimate of empty sample");
    double acc = 0.0;
    for (const double x : values) acc += h(x);
    return acc / static_cast<double>(values.size());
}

// H(x) f(x) / g(x) from direct density evaluations, taken through log
// densities so that tiny proposal densities do not overflow.
inline double importance_weight(double x, const ImportanceProblem& prob) {
    const double h = prob.integrand(x);
    if (h == 0.0) return 0.0;
    const double log_f = prob.target.log_pdf(x);
    if (log_f == -kInf) return 0.0;
    const double log_g = prob.proposal.log_pdf(x);
    if (log_g == -kInf) {
        throw ZeroProposalDensity("proposal density vanishes where H f does not (x = " +
                                  std::to_string(x) + ")");
    }
    return std::copysign(std::exp(std::log(std::abs(h)) + log_f - log_g), h);
}

inline double importance_estimate(const ImportanceProblem& prob, int m, const Method& method, Rng& rng) {
    const SampleBatch batch = sample(prob.proposal, m, method, rng);
    return mean_estimate(batch.values, [&](double x) { return importance_weight(x, prob); });
}

// First-order Taylor approximation to the estimator variance, given G'(1/2)
// for G = H o Q: G'^2/(12 m) for IID and G'^2/(12 m^3) for QS.
inline double taylor_variance_approx(double g_prime_half, int m, MethodKind method) {
    if (m < 1) throw DomainError("m must be >= 1");
    if (method == MethodKind::LQS) throw DomainError("Taylor approximation covers IID and QS only");
    const double md = m;
    const double base = g_prime_half * g_prime_half / (12.0 * md);
    return method == MethodKind::IID ? base : base / (md * md);
}

inline EstimateSummary summarize(std::vector<double> estimates, std::optional<double> true_value) {
    if (estimates.empty()) throw EmptySample("no replicate estimates");
    EstimateSummary out;
    out.mean = stats::mean(estimates);
    out.std_err = estimates.size() > 1 ? std::sqrt(stats::sample_variance(estimates)) : 0.0;
    if (true_value) {
        double acc = 0.0;
        for (const double e : estimates) acc += (e - *true_value) * (e - *true_value);
        out.rmse = std::sqrt(acc / static_cast<double>(estimates.size()));
    }
    out.replicates = estimates.size();
    out.estimates = std::move(estimates);
    return out;
}

// Replicate r uses stream (seed, r).
inline EstimateSummary run_importance(const ImportanceProblem& prob, int m, const Method& method,
                                      std::size_t replicates, std::uint64_t seed,
                                      unsigned threads = 1) {
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    auto estimates = run_replicates<double>(replicates, seed, threads, [&](Rng& rng, std::size_t) {
        return importance_estimate(prob, m, method, rng);
    });
    EstimateSummary out = summarize(std::move(estimates), prob.true_value);
    out.method = method;
    out.m = m;
    out.seed = seed;
    return out;
}

// E[X log X] under Beta(2,2) with proposal Beta(3,2); mu = -7/24.
inline ImportanceProblem example_a() {
    return {Distribution::beta(2.0, 2.0), [](double x) { return x * std::log(x); },
            Distribution::beta(3.0, 2.0), -7.0 / 24.0, "example_a"};
}

// E[exp(-X^2)] under Gamma(shape 2, rate 5) with proposal Gamma(2, 6).
// mu = 25 (1/2 - (5/2)(sqrt(pi)/2) e^{25/4} erfc(5/2)).
inline ImportanceProblem example_b() {
    const double tail = 0.5 * std::sqrt(std::numbers::pi) * std::exp(6.25) * std::erfc(2.5);
    return {Distribution::gamma(2.0, 5.0), [](double x) { return std::exp(-x * x); },
            Distribution::gamma(2.0, 6.0), 25.0 * (0.5 - 2.5 * tail), "example_b"};
}

}  // namespace qstrat
