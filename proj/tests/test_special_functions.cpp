#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qstrat/special_functions.hpp"
#include "qstrat/stats.hpp"

using namespace qstrat;

TEST(IncompleteBeta, MatchesBinomialSumForIntegerShapes) {
    for (int a = 1; a <= 6; ++a) {
        for (int b = 1; b <= 6; ++b) {
            for (double x = 0.01; x < 1.0; x += 0.049) {
                EXPECT_NEAR(special::incomplete_beta(a, b, x), oracle::beta_cdf_integer(a, b, x), 1e-13)
                    << "a=" << a << " b=" << b << " x=" << x;
            }
        }
    }
}

TEST(IncompleteBeta, EndpointsAndSymmetry) {
    EXPECT_EQ(special::incomplete_beta(2.5, 0.7, 0.0), 0.0);
    EXPECT_EQ(special::incomplete_beta(2.5, 0.7, 1.0), 1.0);
    for (double x = 0.05; x < 1.0; x += 0.1) {
        EXPECT_NEAR(special::incomplete_beta(0.6, 3.3, x), 1.0 - special::incomplete_beta(3.3, 0.6, 1.0 - x), 1e-13);
    }
}

TEST(IncompleteGamma, MatchesPoissonSumForIntegerShapes) {
    for (int n = 1; n <= 8; ++n) {
        for (double x = 0.05; x < 30.0; x *= 1.4) {
            EXPECT_NEAR(special::incomplete_gamma_lower(n, x), oracle::gamma_cdf_integer(n, 1.0, x), 1e-13)
                << "n=" << n << " x=" << x;
        }
    }
}

TEST(IncompleteGamma, UpperTailMatchesExponential) {
    // Chi-square with 2 degrees of freedom: P(X > x) = e^{-x/2}.
    for (double x = 0.1; x < 60.0; x *= 1.7) {
        EXPECT_NEAR(special::incomplete_gamma_upper(1.0, 0.5 * x) / std::exp(-0.5 * x), 1.0, 1e-12);
    }
}

TEST(Normal, CdfAndQuantileAreInverse) {
    EXPECT_DOUBLE_EQ(special::normal_cdf(0.0), 0.5);
    EXPECT_NEAR(special::normal_quantile(0.975), 1.959963984540054, 1e-14);
    for (double p = 1e-12; p < 1.0; p = (p < 0.5 ? p * 3.0 : 1.0 - (1.0 - p) / 3.0)) {
        const double z = special::normal_quantile(p);
        EXPECT_NEAR(oracle::normal_cdf(z), p, 1e-15 + 1e-12 * std::min(p, 1.0 - p)) << p;
        if (1.0 - p < 1e-12) break;
    }
    EXPECT_TRUE(std::isinf(special::normal_quantile(0.0)));
    EXPECT_TRUE(std::isinf(special::normal_quantile(1.0)));
}

TEST(GoodnessOfFit, KolmogorovSurvivalKnownValues) {
    // Critical values of the limiting Kolmogorov law.
    EXPECT_NEAR(stats::kolmogorov_survival(1.3581), 0.05, 1e-4);
    EXPECT_NEAR(stats::kolmogorov_survival(1.6276), 0.01, 1e-4);
    EXPECT_EQ(stats::kolmogorov_survival(0.0), 1.0);
}

TEST(GoodnessOfFit, ChiSquareUniformCounts) {
    const double observed[] = {25, 25, 25, 25};
    const double probs[] = {0.25, 0.25, 0.25, 0.25};
    const auto t = stats::chi_square_test(observed, probs);
    EXPECT_EQ(t.statistic, 0.0);
    EXPECT_EQ(t.df, 3.0);
    EXPECT_NEAR(t.p_value, 1.0, 1e-12);

    const double skewed[] = {40, 20, 20, 20};
    // statistic = (15^2 + 3 * 5^2) / 25 = 12, df 3: P = 0.00738316
    const auto s = stats::chi_square_test(skewed, probs);
    EXPECT_NEAR(s.statistic, 12.0, 1e-12);
    EXPECT_NEAR(s.p_value, 0.007383160, 1e-8);
}
