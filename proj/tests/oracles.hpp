#pragma once

// Test-only oracles. Nothing here calls into the library code it is used to
// check: CDFs come from closed-form finite sums, integrals from adaptive
// Simpson, and moment identities from exact rational enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// Exact rationals over 128-bit integers.

struct Rational {
    __int128 num = 0;
    __int128 den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}  // NOLINT(google-explicit-constructor)
    Rational(__int128 n, __int128 d) : num(n), den(d) { normalize(); }

    static __int128 gcd(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den == 0) throw std::domain_error("zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const __int128 g = gcd(num, den);
        num /= g;
        den /= g;
    }

    friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
    friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// ---------------------------------------------------------------------------
// Closed-form CDFs for integer shapes.

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// I_x(a, b) for integer a, b: P(Binomial(a+b-1, x) >= a).
inline double beta_cdf_integer(int a, int b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const int n = a + b - 1;
    double acc = 0.0;
    for (int j = a; j <= n; ++j) acc += binomial(n, j) * std::pow(x, j) * std::pow(1.0 - x, n - j);
    return acc;
}

// Gamma(shape n, rate) CDF for integer n: 1 - e^{-rate x} sum_{j<n} (rate x)^j / j!.
inline double gamma_cdf_integer(int n, double rate, double x) {
    if (x <= 0.0) return 0.0;
    const double y = rate * x;
    double term = 1.0;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j > 0) term *= y / j;
        acc += term;
    }
    return 1.0 - std::exp(-y) * acc;
}

// Standard normal CDF via the error function only.
inline double normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

// Bisection for cdf(x) = p on [lo, hi] to absolute tolerance tol.
inline double bisect(const std::function<double(double)>& cdf, double p, double lo, double hi, double tol = 1e-13) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature.

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Starts from `panels` equal pieces so that narrow peaks far from the
// three initial nodes of a single panel are not missed.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                               int max_depth = 50, int panels = 64) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * h;
        const double hi = i + 1 == panels ? b : lo + h;
        const double fa = f(lo);
        const double fb = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / panels, max_depth);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Exact QS / LQS pair covariance by enumeration.
//
// U_i = (sigma_i - 1 + V_i) / m with sigma a uniform permutation and V_i
// independent U(0,1) with mean 1/2, so
//   Cov(U_1, U_2) = E[(sigma_1 - 1/2)(sigma_2 - 1/2)] / m^2 - 1/4,
// averaging over all ordered pairs (a, b), a != b, of block labels.
inline Rational qs_pair_covariance_enumerated(int m) {
    Rational acc = 0;
    for (int a = 1; a <= m; ++a) {
        for (int b = 1; b <= m; ++b) {
            if (a == b) continue;
            acc = acc + Rational(2 * a - 1, 2) * Rational(2 * b - 1, 2);
        }
    }
    const Rational pairs = static_cast<long long>(m) * (m - 1);
    const Rational mm = static_cast<long long>(m) * m;
    return acc / pairs / mm - Rational(1, 4);
}

// Two distinct positions of an LQS sample come from the same layer k with
// probability m_k(m_k - 1)/(m(m - 1)); otherwise they are independent.
inline Rational lqs_pair_covariance_enumerated(const std::vector<int>& layers) {
    long long m = 0;
    for (const int s : layers) m += s;
    Rational acc = 0;
    for (const int s : layers) {
        if (s < 2) continue;
        const Rational same = Rational(static_cast<long long>(s) * (s - 1)) / Rational(m * (m - 1));
        acc = acc + same * qs_pair_covariance_enumerated(s);
    }
    return acc;
}

}  // namespace oracle
