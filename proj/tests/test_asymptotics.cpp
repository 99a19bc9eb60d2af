#include "support.hpp"

#include <gtest/gtest.h>

using namespace nikishin;

namespace {

std::vector<real> as_real(const std::vector<double>& v) {
    std::vector<real> out;
    for (double x : v) out.push_back(real(x));
    return out;
}

}  // namespace

TEST(WeakStar, UniformAtomsAgainstUniformLaw) {
    precision_scope scope(128);
    for (int n : {10, 57, 200}) {
        std::vector<double> pts;
        for (int i = 0; i < n; ++i) pts.push_back((i + 0.5) / n);
        auto emp = EmpiricalMeasure::from(as_real(pts), 0, 1);
        EXPECT_NEAR(weakstar_distance(emp, [](double x) { return x; }), 0.5 / n, 1e-12);
        // shifting every atom by h adds h to the distance
        for (auto& x : pts) x = std::min(1.0, x + 0.1 / n);
        EXPECT_NEAR(weakstar_distance(EmpiricalMeasure::from(as_real(pts), 0, 1), [](double x) { return x; }), 0.6 / n, 1e-12);
    }
}

TEST(WeakStar, ChebyshevNodesAgainstArcsine) {
    precision_scope scope(128);
    int n = 100;
    std::vector<double> pts;
    for (int i = 0; i < n; ++i) pts.push_back(0.5 - 0.5 * std::cos(M_PI * (i + 0.5) / n));
    auto emp = EmpiricalMeasure::from(as_real(pts), 0, 1);
    double d = weakstar_distance(emp, [](double x) { return 2 / M_PI * std::asin(std::sqrt(x)); });
    EXPECT_NEAR(d, 0.5 / n, 1e-12);
    EXPECT_THROW(EmpiricalMeasure::from({real(2)}, 0, 1), validation_error);
}

TEST(WeakStar, AgainstGridMeasure) {
    precision_scope scope(128);
    auto eq = solve_vector_equilibrium({{0, 1}}, 400);
    int n = 100;
    std::vector<double> pts;
    for (int i = 0; i < n; ++i) pts.push_back(0.5 - 0.5 * std::cos(M_PI * (i + 0.5) / n));
    EXPECT_LT(weakstar_distance(EmpiricalMeasure::from(as_real(pts), 0, 1), eq.measures[0]), 0.5 / n + 2e-3);
}

TEST(StarLift, PotentialIdentityAndSymmetry) {
    auto eq = solve_vector_equilibrium({{0, 1}, {-2, -1}}, 200);
    for (int k = 0; k < 2; ++k) {
        StarMeasure s = star_lift(eq.measures[k], 2);
        for (std::complex<double> z : {std::complex<double>(1.4, 0.3), {-0.2, 1.5}, {0.3, -0.9}}) {
            EXPECT_NEAR(s.potential(z), s.potential_direct(z), 1e-6) << k;
            std::complex<double> w = std::polar(1.0, 2 * M_PI / 3);
            EXPECT_NEAR(s.potential(w * z), s.potential(z), 1e-12);
        }
        EXPECT_NEAR(s.ray_cdf(10), s.base.total() / 3, 1e-14);
        EXPECT_EQ(s.ray_cdf(0), 0);
    }
}

TEST(GeometricMean, ConstantSequence) {
    precision_scope scope(128);
    RecurrenceSequence seq;
    seq.p = 2;
    for (int n = 2; n <= 100; ++n) seq.a[n] = real(1) / 4;
    // exp(-(4/3) w) = 1/4 when w = (3/4) log 4
    auto g = check_an_geometric_mean(seq, 0, 40, std::vector<double>{0.75 * std::log(4.0)});
    EXPECT_NEAR(g.geometric_mean, 0.25, 1e-15);
    EXPECT_NEAR(g.rel_error, 0, 1e-12);
    EXPECT_THROW(check_an_geometric_mean(seq, 0, 60, std::vector<double>{0.0}), validation_error);
}

TEST(GeometricMean, LegendreApproachesQuarter) {
    precision_scope scope(256);
    MuHierarchy H(testsupport::legendre_system(), 48);
    auto recs = solve_range(H, 61);
    auto seq = recurrence_from_records(recs);
    auto g = check_an_geometric_mean(seq, 0, 60, std::vector<double>{std::log(4.0)});
    EXPECT_NEAR(g.predicted, 0.25, 1e-15);
    EXPECT_LT(g.rel_error, 0.02);
    auto g20 = check_an_geometric_mean(seq, 0, 20, std::vector<double>{std::log(4.0)});
    EXPECT_LT(g.rel_error, g20.rel_error);
}

TEST(NthRoot, LegendreReducedPolynomial) {
    precision_scope scope(256);
    MuHierarchy H(testsupport::legendre_system(), 64);
    auto eq = solve_vector_equilibrium({{0, 1}}, 400);
    double prev = 1e9;
    for (int n : {20, 40, 60}) {
        SecondKindFamily F(H, solve_Qd(H, n));
        auto c = check_nthroot_psi(F, 0, eq, secondkind_test_points(H.system()));
        EXPECT_LT(c.max_error, prev) << n;
        prev = c.max_error;
    }
    EXPECT_LT(prev, 0.05);
}

TEST(ZeroDistribution, LegendreZerosApproachArcsine) {
    precision_scope scope(256);
    MuHierarchy H(testsupport::legendre_system(), 64);
    auto eq = solve_vector_equilibrium({{0, 1}}, 400);
    auto r = solve_Qd(H, 80);
    double d = check_zero_distribution(r, eq);
    EXPECT_LT(d, 2.0 / 40);
    EXPECT_LT(check_star_zero_distribution(r, eq), 2.0 / 40);
}

TEST(Probes, StarPointsAvoidRays) {
    precision_scope scope(128);
    auto sys = testsupport::two_star_system();
    for (const auto& z : star_test_points(sys)) {
        // rays of both sets sit at multiples of pi/3
        double th = std::arg(to_std(z)) * 3 / M_PI;
        double frac = th - std::floor(th);
        EXPECT_GT(std::min(frac, 1 - frac), 0.25 - 1e-9);
    }
    EXPECT_EQ(star_test_points(sys).size(), 12u);
    ProbeSpec ps;
    ps.per_circle = 10;
    EXPECT_EQ(secondkind_test_points(sys, ps).size(), 20u);
}
