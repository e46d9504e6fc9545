#pragma once

// Univariate distributions exposing density, CDF and quantile function, plus
// the quantile-block partition and the conditional laws on each block.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qstrat/errors.hpp"
#include "qstrat/special_functions.hpp"

namespace qstrat {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Support {
    double lower = -kInf;
    double upper = kInf;
};

// A distribution known only through its quantile function, optionally with
// CDF and density. Missing pieces are recovered numerically from the others.
struct CustomLaw {
    std::function<double(double)> quantile;
    std::function<double(double)> cdf;
    std::function<double(double)> pdf;
    Support support;
    bool continuous = true;
    std::string name = "custom";
};

enum class Family { Uniform01, Normal, Beta, Gamma, Discrete, Custom };

namespace detail {

inline constexpr double kInversionTol = 1e-12;
inline constexpr int kInversionMaxIter = 200;

// Bracketed Newton iteration for cdf(x) = p on [lo, hi]. Falls back to
// bisection whenever the Newton step leaves the bracket. The tolerance is
// relative to the distance from x to the nearest finite support end, so
// deep tails near 0 or 1 keep their precision.
template <class Cdf, class Pdf>
double invert_cdf(double p, double lo, double hi, double x, Cdf&& cdf, Pdf&& pdf,
                  double support_lo = -kInf, double support_hi = kInf) {
    const auto tol_at = [&](double at) {
        double scale = kInf;
        if (std::isfinite(support_lo)) scale = at - support_lo;
        if (std::isfinite(support_hi)) scale = std::min(scale, support_hi - at);
        if (!std::isfinite(scale)) scale = std::max(1.0, std::abs(at));
        return kInversionTol * std::max(scale, std::numeric_limits<double>::min());
    };
    for (int iter = 0; iter < kInversionMaxIter; ++iter) {
        const double fx = cdf(x) - p;
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double dens = pdf(x);
        double next = (dens > 0.0 && std::isfinite(dens)) ? x - fx / dens : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double tol = tol_at(next);
        if (std::abs(next - x) <= tol || hi - lo <= tol || next == lo || next == hi) return next;
        x = next;
    }
    throw NonConvergence("quantile inversion did not reach tolerance");
}

}  // namespace detail

class Distribution {
public:
    static Distribution uniform01() { return Distribution(Family::Uniform01); }

    static Distribution normal(double mu, double sigma) {
        if (!std::isfinite(mu) || !(sigma > 0.0) || !std::isfinite(sigma)) {
            throw DomainError("normal requires finite mu and sigma > 0");
        }
        Distribution d(Family::Normal);
        d.p1_ = mu;
        d.p2_ = sigma;
        d.log_norm_ = -std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
        return d;
    }

    static Distribution beta(double a, double b) {
        if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
            throw DomainError("beta requires a > 0 and b > 0");
        }
        Distribution d(Family::Beta);
        d.p1_ = a;
        d.p2_ = b;
        d.log_norm_ = special::log_beta(a, b);
        return d;
    }

    // Shape-rate parameterization: density proportional to x^(shape-1) e^(-rate x).
    static Distribution gamma(double shape, double rate) {
        if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
            throw DomainError("gamma requires shape > 0 and rate > 0");
        }
        Distribution d(Family::Gamma);
        d.p1_ = shape;
        d.p2_ = rate;
        d.log_norm_ = std::lgamma(shape);
        return d;
    }

    static Distribution discrete(std::vector<double> points, std::vector<double> probs) {
        if (points.empty() || points.size() != probs.size()) {
            throw DomainError("discrete law needs matching, nonempty points and probs");
        }
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!std::isfinite(points[i])) throw DomainError("discrete atoms must be finite");
            if (i > 0 && !(points[i] > points[i - 1])) {
                throw DomainError("discrete atoms must be strictly increasing");
            }
            if (!(probs[i] > 0.0)) throw DomainError("discrete probabilities must be positive");
            total += probs[i];
        }
        if (std::abs(total - 1.0) > 1e-9) throw DomainError("discrete probabilities must sum to 1");
        Distribution d(Family::Discrete);
        d.cumulative_.resize(probs.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            d.cumulative_[i] = acc;
        }
        d.cumulative_.back() = 1.0;
        d.points_ = std::move(points);
        d.probs_ = std::move(probs);
        return d;
    }

    static Distribution custom(CustomLaw law) {
        if (!law.quantile) throw DomainError("custom law requires a quantile function");
        Distribution d(Family::Custom);
        d.custom_ = std::make_shared<const CustomLaw>(std::move(law));
        return d;
    }

    Family family() const { return family_; }

    bool is_continuous() const {
        switch (family_) {
            case Family::Discrete: return false;
            case Family::Custom: return custom_->continuous;
            default: return true;
        }
    }

    Support support() const {
        switch (family_) {
            case Family::Uniform01:
            case Family::Beta: return {0.0, 1.0};
            case Family::Normal: return {-kInf, kInf};
            case Family::Gamma: return {0.0, kInf};
            case Family::Discrete: return {points_.front(), points_.back()};
            case Family::Custom: return custom_->support;
        }
        return {};
    }

    std::span<const double> atoms() const { return points_; }
    std::span<const double> atom_probs() const { return probs_; }

    std::string name() const {
        std::ostringstream os;
        os.precision(9);
        switch (family_) {
            case Family::Uniform01: os << "uniform"; break;
            case Family::Normal: os << "normal(" << p1_ << "," << p2_ << ")"; break;
            case Family::Beta: os << "beta(" << p1_ << "," << p2_ << ")"; break;
            case Family::Gamma: os << "gamma(" << p1_ << "," << p2_ << ")"; break;
            case Family::Discrete: os << "discrete(" << points_.size() << " atoms)"; break;
            case Family::Custom: os << custom_->name; break;
        }
        return os.str();
    }

    double pdf(double x) const {
        if (std::isnan(x)) return 0.0;
        switch (family_) {
            case Family::Uniform01: return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
            case Family::Normal: {
                const double z = (x - p1_) / p2_;
                return special::normal_pdf(z) / p2_;
            }
            case Family::Beta: {
                if (x < 0.0 || x > 1.0) return 0.0;
                if (x == 0.0 || x == 1.0) {
                    const double edge_shape = (x == 0.0) ? p1_ : p2_;
                    if (edge_shape < 1.0) return kInf;
                    if (edge_shape > 1.0) return 0.0;
                    return std::exp(-log_norm_);  // the other factor is 1 at this end
                }
                return std::exp(log_pdf(x));
            }
            case Family::Gamma: {
                if (x < 0.0 || std::isinf(x)) return 0.0;
                if (x == 0.0) {
                    if (p1_ < 1.0) return kInf;
                    return p1_ == 1.0 ? p2_ : 0.0;
                }
                return std::exp(log_pdf(x));
            }
            case Family::Discrete: {
                const auto it = std::lower_bound(points_.begin(), points_.end(), x);
                if (it != points_.end() && *it == x) {
                    return probs_[static_cast<std::size_t>(it - points_.begin())];
                }
                return 0.0;
            }
            case Family::Custom: return custom_pdf(x);
        }
        return 0.0;
    }

    double log_pdf(double x) const {
        switch (family_) {
            case Family::Normal: {
                const double z = (x - p1_) / p2_;
                return log_norm_ - 0.5 * z * z;
            }
            case Family::Beta:
                if (x <= 0.0 || x >= 1.0) return std::log(pdf(x));
                return (p1_ - 1.0) * std::log(x) + (p2_ - 1.0) * std::log1p(-x) - log_norm_;
            case Family::Gamma:
                if (x <= 0.0 || std::isinf(x)) return std::log(pdf(x));
                return p1_ * std::log(p2_) - log_norm_ + (p1_ - 1.0) * std::log(x) - p2_ * x;
            default: return std::log(pdf(x));
        }
    }

    double cdf(double x) const {
        if (std::isnan(x)) throw DomainError("cdf of NaN");
        switch (family_) {
            case Family::Uniform01: return std::clamp(x, 0.0, 1.0);
            case Family::Normal: return special::normal_cdf((x - p1_) / p2_);
            case Family::Beta: return special::incomplete_beta(p1_, p2_, x, log_norm_);
            case Family::Gamma:
                if (x <= 0.0) return 0.0;
                return special::incomplete_gamma_lower(p1_, p2_ * x, log_norm_);
            case Family::Discrete: {
                const auto it = std::upper_bound(points_.begin(), points_.end(), x);
                if (it == points_.begin()) return 0.0;
                return cumulative_[static_cast<std::size_t>(it - points_.begin()) - 1];
            }
            case Family::Custom: return custom_cdf(x);
        }
        return 0.0;
    }

    // Generalized inverse Q(p) = inf{x : F(x) >= p}.
    double quantile(double p) const {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile probability outside [0,1]");
        const Support sup = support();
        if (p == 0.0 && family_ != Family::Discrete) {
            if (std::isinf(sup.lower)) throw DomainError("Q(0) on a support unbounded below");
            return sup.lower;
        }
        if (p == 1.0 && family_ != Family::Discrete) {
            if (std::isinf(sup.upper)) throw DomainError("Q(1) on a support unbounded above");
            return sup.upper;
        }
        switch (family_) {
            case Family::Uniform01: return p;
            case Family::Normal: return p1_ + p2_ * special::normal_quantile(p);
            case Family::Beta: return beta_quantile(p);
            case Family::Gamma: return gamma_quantile(p);
            case Family::Discrete: {
                const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), p);
                const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
                return points_[std::min(idx, points_.size() - 1)];
            }
            case Family::Custom: return custom_->quantile(p);
        }
        return 0.0;
    }

private:
    explicit Distribution(Family f) : family_(f) {}

    double beta_quantile(double p) const {
        const double a = p1_;
        const double b = p2_;
        auto cdf_fn = [&](double x) { return special::incomplete_beta(a, b, x, log_norm_); };
        auto pdf_fn = [&](double x) { return pdf(x); };
        return detail::invert_cdf(p, 0.0, 1.0, a / (a + b), cdf_fn, pdf_fn, 0.0, 1.0);
    }

    double gamma_quantile(double p) const {
        // Solve in the unit-rate scale, then divide by the rate.
        const double shape = p1_;
        auto cdf_fn = [&](double y) {
            return y <= 0.0 ? 0.0 : special::incomplete_gamma_lower(shape, y, log_norm_);
        };
        auto pdf_fn = [&](double y) {
            if (y <= 0.0) return 0.0;
            return std::exp((shape - 1.0) * std::log(y) - y - log_norm_);
        };
        double hi = shape + 10.0 * std::sqrt(shape) + 10.0;
        double lo = 0.0;
        for (int i = 0; cdf_fn(hi) < p; ++i) {
            if (i > 100) throw NonConvergence("gamma quantile bracket expansion failed");
            lo = hi;
            hi *= 2.0;
        }
        const double start = std::clamp(shape, lo, hi);
        return detail::invert_cdf(p, lo, hi, start, cdf_fn, pdf_fn, 0.0) / p2_;
    }

    double custom_cdf(double x) const {
        if (custom_->cdf) return custom_->cdf(x);
        // sup{p : Q(p) <= x} by bisection on p.
        double lo = 0.0;
        double hi = 1.0;
        for (int i = 0; i < 64; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (custom_->quantile(mid) <= x) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return lo;
    }

    double custom_pdf(double x) const {
        if (custom_->pdf) return custom_->pdf(x);
        const Support sup = support();
        if (x < sup.lower || x > sup.upper) return 0.0;
        const double h = 1e-5 * std::max(1.0, std::abs(x));
        return std::max(0.0, (custom_cdf(x + h) - custom_cdf(x - h)) / (2.0 * h));
    }

    Family family_;
    double p1_ = 0.0;
    double p2_ = 0.0;
    double log_norm_ = 0.0;
    std::vector<double> points_;
    std::vector<double> probs_;
    std::vector<double> cumulative_;
    std::shared_ptr<const CustomLaw> custom_;
};

inline double quantile(const Distribution& dist, double p) { return dist.quantile(p); }
inline double cdf(const Distribution& dist, double x) { return dist.cdf(x); }
inline double pdf(const Distribution& dist, double x) { return dist.pdf(x); }

// Boundaries w_0 <= w_1 <= ... <= w_m of the m equiprobable quantile blocks.
struct BlockPartition {
    int m = 1;
    std::vector<double> boundaries;

    double lower(int s) const { return boundaries[static_cast<std::size_t>(s - 1)]; }
    double upper(int s) const { return boundaries[static_cast<std::size_t>(s)]; }
};

inline void check_block_index(int m, int s) {
    if (m < 1) throw DomainError("block count must be >= 1");
    if (s < 1 || s > m) throw DomainError("block index outside 1..m");
}

// w_s = Q(s/m), with Q(0) and Q(1) replaced by the support endpoints
// (possibly infinite).
inline BlockPartition block_boundaries(const Distribution& dist, int m) {
    if (m < 1) throw DomainError("block count must be >= 1");
    BlockPartition part;
    part.m = m;
    part.boundaries.resize(static_cast<std::size_t>(m) + 1);
    const Support sup = dist.support();
    part.boundaries.front() = dist.family() == Family::Discrete ? dist.quantile(0.0) : sup.lower;
    part.boundaries.back() = dist.family() == Family::Discrete ? dist.quantile(1.0) : sup.upper;
    for (int s = 1; s < m; ++s) {
        part.boundaries[static_cast<std::size_t>(s)] = dist.quantile(static_cast<double>(s) / m);
    }
    return part;
}

// Q(p | s) = Q((s + p - 1) / m).
inline double conditional_quantile(const Distribution& dist, int m, int s, double p) {
    check_block_index(m, s);
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("conditional quantile probability outside [0,1]");
    if (m == 1) return dist.quantile(p);
    return dist.quantile((static_cast<double>(s - 1) + p) / m);
}

// F(x | s), the CDF of Q(U) given U uniform on block s. For continuous laws
// this is 1(x > w_s) + m 1(w_{s-1} < x <= w_s)(F(x) - (s-1)/m). Laws with
// atoms use the equivalent form clamp(m F(x) - (s-1), 0, 1), which stays
// correct when an atom straddles a block boundary.
inline double conditional_cdf(const Distribution& dist, int m, int s, double x) {
    check_block_index(m, s);
    const double fx = dist.cdf(x);
    const double scaled = std::clamp(m * fx - static_cast<double>(s - 1), 0.0, 1.0);
    if (!dist.is_continuous()) return scaled;

    const Support sup = dist.support();
    const double w_lo = (s == 1) ? sup.lower : dist.quantile(static_cast<double>(s - 1) / m);
    const double w_hi = (s == m) ? sup.upper : dist.quantile(static_cast<double>(s) / m);
    if (x > w_hi) return 1.0;
    if (x <= w_lo) return 0.0;
    return scaled;
}

}  // namespace qstrat
