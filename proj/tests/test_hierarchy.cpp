#include "support.hpp"

#include <gtest/gtest.h>

using namespace nikishin;
using testsupport::nested_cauchy;

namespace {

std::vector<complex> probes_around(const Interval& I, int count) {
    std::vector<complex> out;
    real c = (I.a + I.b) / 2, R = I.b - I.a;
    for (int m = 0; m < count; ++m) out.push_back(complex(c) + polar(R, 2 * pi_value() * (m + real("0.5")) / count));
    return out;
}

void compare_with_nested(const StarSystem& s, int order, int dense) {
    MuHierarchy H(s, order);
    for (int j = 0; j < s.p; ++j)
        for (const auto& z : probes_around(s.intervals[0], 5)) {
            complex ref = nested_cauchy(s, 0, j, z, dense);
            complex got = H.mu_hat(0, j, z);
            EXPECT_LT(abs(got - ref) / abs(ref), real("1e-25")) << "p=" << s.p << " j=" << j;
        }
}

}  // namespace

TEST(Hierarchy, MatchesNestedQuadratureTwoLevels) {
    precision_scope scope(256);
    compare_with_nested(testsupport::two_star_system(), 64, 90);
}

TEST(Hierarchy, MatchesNestedQuadratureThreeLevels) {
    precision_scope scope(256);
    compare_with_nested(testsupport::three_level_system(), 64, 80);
}

TEST(Hierarchy, DiagonalIsTheGeneratingMeasure) {
    precision_scope scope(256);
    MuHierarchy H(testsupport::two_star_system(), 32);
    for (int k = 0; k < 2; ++k) {
        EXPECT_EQ(H.mu(k, k).nodes, H.sigma_star(k).nodes);
        EXPECT_EQ(H.mu(k, k).weights, H.sigma_star(k).weights);
    }
    // Lebesgue on [0,1] and [-2,-1]
    EXPECT_LT(abs(H.sigma_star(0).mass() - 1), real("1e-70"));
    EXPECT_LT(abs(H.sigma_star(1).mass() - 1), real("1e-70"));
}

TEST(Hierarchy, OffDiagonalMeasureIsPositive) {
    precision_scope scope(256);
    MuHierarchy H(testsupport::three_level_system(), 32);
    // tau muhat(tau) > 0 whenever the next set lies on the other side of the origin
    EXPECT_EQ(H.mu(0, 1).observed_sign(), 1);
    EXPECT_EQ(H.mu(1, 2).observed_sign(), 1);
    EXPECT_EQ(H.mu(0, 2).observed_sign(), 1);
}

TEST(Hierarchy, StarMomentsVanishOffResidue) {
    precision_scope scope(256);
    MuHierarchy H(testsupport::two_star_system(), 32);
    for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 12; ++l) {
            if ((l - j) % 3 == 0 && l >= j)
                EXPECT_EQ(H.star_moment(j, l), H.ray_moment(j, (l - j) / 3));
            else
                EXPECT_EQ(H.star_moment(j, l), 0);
        }
    // int tau^i dtau on [0,1]
    for (int i = 0; i < 6; ++i) EXPECT_LT(abs(H.ray_moment(0, i) - real(1) / (i + 1)), real("1e-70"));
}

TEST(Hierarchy, StarTransformRotates) {
    precision_scope scope(256);
    MuHierarchy H(testsupport::two_star_system(), 32);
    complex z(real("0.4"), real("1.1"));
    complex w = root_of_unity(1, 3);
    for (int j = 0; j < 2; ++j) {
        complex lhs = H.s_hat(0, j, w * z);
        complex rhs = pow_int(w, 2 - j) * H.s_hat(0, j, z);
        EXPECT_LT(abs(lhs - rhs) / abs(rhs), real("1e-60"));
    }
}

TEST(SystemValidation, RejectsMalformedSystems) {
    auto s = testsupport::two_star_system();
    s.intervals[0].a = real(-1);
    EXPECT_THROW(validate_system(s), validation_error);
    s = testsupport::two_star_system();
    s.intervals[1] = {real(-1), real(1)};
    EXPECT_THROW(validate_system(s), validation_error);
    s = testsupport::two_star_system();
    s.intervals.pop_back();
    EXPECT_THROW(validate_system(s), validation_error);
    s = testsupport::two_star_system();
    s.densities[0] = DensitySpec::power(real(-1));
    EXPECT_THROW(validate_system(s), validation_error);
    s = testsupport::two_star_system();
    s.densities[1] = DensitySpec::tabulated({real(-2), real(-1)}, {real(0), real(0)});
    EXPECT_THROW(validate_system(s), validation_error);
    EXPECT_NO_THROW(validate_system(testsupport::three_level_system()));
}
