#pragma once

// Closed-form moments of QS/LQS uniforms, order statistics and spacings.

#include <cmath>
#include <utility>

#include "qstrat/distribution.hpp"
#include "qstrat/errors.hpp"
#include "qstrat/sampling.hpp"
#include "qstrat/special_functions.hpp"

namespace qstrat::theory {

struct MomentSummary {
    double mean = 0.5;
    double variance = 1.0 / 12.0;
    double pair_covariance = 0.0;
    double pair_correlation = 0.0;
};

// Moments of the QS uniforms: mean 1/2, variance 1/12, pairwise covariance
// -(m+1)/(12 m^2).
inline MomentSummary qs_uniform_moments(int m) {
    if (m < 1) throw DomainError("m must be >= 1");
    if (m == 1) throw PairUndefined("pairwise moments need m >= 2");
    const double md = m;
    MomentSummary out;
    out.pair_correlation = -(md + 1.0) / (md * md);
    out.pair_covariance = out.pair_correlation / 12.0;
    return out;
}

// Moments of the LQS uniforms for layer sizes m_1..m_K summing to m.
inline MomentSummary lqs_uniform_moments(const LayerSpec& layers) {
    const int m = layers.total();
    if (m < 1) throw DomainError("layer spec is empty");
    if (m == 1) throw PairUndefined("pairwise moments need m >= 2");
    if (layers.count() == 1) return qs_uniform_moments(m);  // one layer is plain QS
    const double md = m;
    MomentSummary out;
    out.pair_correlation = -(md - layers.reciprocal_sum()) / (md * (md - 1.0));
    out.pair_covariance = out.pair_correlation / 12.0;
    return out;
}

// ADJ(m) = (m^2 - sum_k m/m_k) / (m^2 - 1); scales the QS correlation to
// the LQS correlation.
inline double adj_factor(const LayerSpec& layers) {
    const int m = layers.total();
    if (m < 2) throw PairUndefined("adjustment factor needs m >= 2");
    const double md = m;
    return (md * md - md * layers.reciprocal_sum()) / (md * md - 1.0);
}

enum class Target { Pk, PkStar };

struct QuantileTargets {
    double p_k;       // k / (m + 1)
    double p_k_star;  // (k - 1/2) / m
};

inline void check_order_index(int m, int k) {
    if (m < 1) throw DomainError("m must be >= 1");
    if (k < 1 || k > m) throw DomainError("order index k outside 1..m");
}

inline QuantileTargets quantile_targets(int m, int k) {
    check_order_index(m, k);
    return {static_cast<double>(k) / (m + 1.0), (k - 0.5) / m};
}

struct OrderStatMoments {
    double mean;
    double variance;
};

inline void check_method(MethodKind method) {
    if (method == MethodKind::LQS) throw DomainError("closed forms cover IID and QS only");
}

inline OrderStatMoments order_stat_moments(int m, int k, MethodKind method) {
    check_method(method);
    const auto [p, p_star] = quantile_targets(m, k);
    if (method == MethodKind::IID) return {p, p * (1.0 - p) / (m + 2.0)};
    const double md = m;
    return {p_star, 1.0 / (12.0 * md * md)};
}

// Mean-squared error of the k-th order statistic of m uniforms as an
// estimator of p_k or p_k*.
inline double mse_exact(int m, int k, Target target, MethodKind method) {
    check_method(method);
    const auto [p, p_star] = quantile_targets(m, k);
    const double md = m;
    if (target == Target::Pk) {
        if (method == MethodKind::IID) return p * (1.0 - p) / (md + 2.0);
        // 1/(3m^2) - p(1-p)/m^2 over a common denominator; this keeps the
        // m = 1 value bit-identical to the IID one.
        return (4.0 - 12.0 * p * (1.0 - p)) / (12.0 * md * md);
    }
    if (method == MethodKind::IID) {
        return ((md - 2.0) * p_star * (1.0 - p_star) + 0.75) / ((md + 1.0) * (md + 2.0));
    }
    return 1.0 / (12.0 * md * md);
}

// Large-m form of mse_exact with phi = k/m.
inline double mse_asymptotic(double phi, int m, Target target, MethodKind method) {
    check_method(method);
    if (!(phi > 0.0 && phi < 1.0)) throw DomainError("phi must lie in (0,1)");
    if (m < 1) throw DomainError("m must be >= 1");
    const double md = m;
    const double v = phi * (1.0 - phi);
    if (method == MethodKind::IID) return v / md;
    if (target == Target::Pk) return (1.0 - 3.0 * v) / (3.0 * md * md);
    return 1.0 / (12.0 * md * md);
}

// r(phi) = log(phi(1-phi)) - log(1 - 3 phi(1-phi))
inline double r_shape(double phi) {
    if (!(phi > 0.0 && phi < 1.0)) throw DomainError("phi must lie in (0,1)");
    const double v = phi * (1.0 - phi);
    return std::log(v) - std::log(1.0 - 3.0 * v);
}

// r*(phi) = log(phi(1-phi))
inline double r_star_shape(double phi) {
    if (!(phi > 0.0 && phi < 1.0)) throw DomainError("phi must lie in (0,1)");
    return std::log(phi * (1.0 - phi));
}

// Law of the spacing U_(k+l) - U_(k); the same for every k.
struct SpacingLaw {
    enum class Kind { Beta, Triangular };

    Kind kind = Kind::Beta;
    double alpha = 0.0;  // Beta
    double beta = 0.0;
    double lo = 0.0;  // Triangular
    double mode = 0.0;
    double hi = 0.0;
    double mean = 0.0;
    double variance = 0.0;

    double pdf(double d) const {
        if (kind == Kind::Beta) return Distribution::beta(alpha, beta).pdf(d);
        if (d <= lo || d >= hi) return 0.0;
        if (d <= mode) return 2.0 * (d - lo) / ((hi - lo) * (mode - lo));
        return 2.0 * (hi - d) / ((hi - lo) * (hi - mode));
    }

    double cdf(double d) const {
        if (kind == Kind::Beta) return special::incomplete_beta(alpha, beta, d);
        if (d <= lo) return 0.0;
        if (d >= hi) return 1.0;
        if (d <= mode) return (d - lo) * (d - lo) / ((hi - lo) * (mode - lo));
        return 1.0 - (hi - d) * (hi - d) / ((hi - lo) * (hi - mode));
    }
};

inline SpacingLaw spacing_law(int m, int ell, MethodKind method) {
    check_method(method);
    if (m < 2 || ell < 1 || ell > m - 1) throw DomainError("spacing needs 1 <= l <= m-1");
    const double md = m;
    const double l = ell;
    SpacingLaw law;
    if (method == MethodKind::IID) {
        law.kind = SpacingLaw::Kind::Beta;
        law.alpha = l;
        law.beta = md - l + 1.0;
        law.mean = l / (md + 1.0);
        law.variance = l * (md - l + 1.0) / ((md + 1.0) * (md + 1.0) * (md + 2.0));
    } else {
        law.kind = SpacingLaw::Kind::Triangular;
        law.lo = (l - 1.0) / md;
        law.mode = l / md;
        law.hi = (l + 1.0) / md;
        law.mean = l / md;
        law.variance = 1.0 / (6.0 * md * md);
    }
    return law;
}

}  // namespace qstrat::theory
