#include "support.hpp"

#include <gtest/gtest.h>

#include <memory>

using namespace nikishin;

namespace {

constexpr int kMaxN = 16;

struct TwoStar : ::testing::Test {
    static void SetUpTestSuite() {
        set_precision_bits(256);
        H = new MuHierarchy(testsupport::two_star_system(), 64);
        recs = new std::vector<QnRecord>(solve_range(*H, kMaxN + 1));
        seq = new RecurrenceSequence(recurrence_from_records(*recs));
        fams = new std::vector<std::unique_ptr<SecondKindFamily>>();
        for (int n = 0; n <= kMaxN + 1; ++n) fams->emplace_back(new SecondKindFamily(*H, (*recs)[n]));
    }
    static void TearDownTestSuite() {
        delete fams;
        delete seq;
        delete recs;
        delete H;
    }
    const SecondKindFamily& F(int n) const { return *(*fams)[n]; }
    static MuHierarchy* H;
    static std::vector<QnRecord>* recs;
    static RecurrenceSequence* seq;
    static std::vector<std::unique_ptr<SecondKindFamily>>* fams;
};
MuHierarchy* TwoStar::H = nullptr;
std::vector<QnRecord>* TwoStar::recs = nullptr;
RecurrenceSequence* TwoStar::seq = nullptr;
std::vector<std::unique_ptr<SecondKindFamily>>* TwoStar::fams = nullptr;

}  // namespace

TEST_F(TwoStar, ZeroCountsMatchConditionCounts) {
    for (int n = 0; n <= kMaxN; ++n)
        for (int k = 0; k < 2; ++k) {
            EXPECT_EQ(static_cast<long>(F(n).zeros(k).size()), z_count(n, k, 2)) << n << " " << k;
            auto a = zero_count_audit(F(n), k);
            EXPECT_TRUE(a.ok) << "n=" << n << " k=" << k << " winding=" << a.local_winding << " else=" << a.elsewhere;
        }
}

TEST_F(TwoStar, OrthogonalityAudit) {
    for (int n = 0; n <= kMaxN; ++n)
        for (int k = 0; k < 2; ++k) {
            auto a = orthogonality_audit(F(n), k);
            EXPECT_LT(a.weighted_residual, real("1e-40")) << n << " " << k;
            EXPECT_LT(a.plain_residual, real("1e-40")) << n << " " << k;
            EXPECT_LT(a.hierarchy_residual, real("1e-40")) << n << " " << k;
        }
}

TEST_F(TwoStar, Orthonormality) {
    for (int n = 0; n <= kMaxN; ++n)
        for (int k = 0; k < 2; ++k) EXPECT_LT(abs(F(n).orthonormality(k) - 1), real("1e-40")) << n << " " << k;
}

TEST_F(TwoStar, SignLedgers) {
    for (int n = 0; n <= kMaxN; ++n)
        for (int k = 0; k < 2; ++k) {
            auto L = sign_ledger(F(n), k);
            EXPECT_EQ(L.H_empirical, L.H_recursive) << n << " " << k;
            EXPECT_EQ(L.H_recursive, L.H_closed) << n << " " << k;
            EXPECT_EQ(L.PP_empirical, L.PP_general) << n << " " << k;
            if (k == n % 2) EXPECT_EQ(L.PP_cases, L.PP_general) << n << " " << k;
            EXPECT_EQ(L.eps_empirical, L.eps_pred) << n << " " << k;
        }
}

TEST_F(TwoStar, SecondKindRecurrence) {
    auto pts = secondkind_test_points(H->system());
    for (int n = 2; n <= kMaxN; ++n)
        for (int k = 0; k <= 2; ++k)
            EXPECT_LT(secondkind_recurrence_check(F(n - 2), F(n), F(n + 1), k, seq->a.at(n), pts), real("1e-40"))
                << n << " " << k;
}

TEST_F(TwoStar, DecayAtInfinity) {
    for (int n = 2; n <= kMaxN; ++n)
        for (int k = 1; k <= 2; ++k) EXPECT_NEAR(decay_slope(F(n), k), -double(decay_order(n, k, 2)), 0.05) << n << " " << k;
}

TEST_F(TwoStar, IntegralRepresentationOfH) {
    auto pts = secondkind_test_points(H->system());
    for (int n = 3; n <= kMaxN; n += 3)
        for (int k = 1; k <= 2; ++k)
            for (const auto& z : pts) {
                complex a = F(n).hnk(k, z), b = F(n).hnk_integral(k, z);
                EXPECT_LT(abs(a - b) / abs(a), real("1e-40")) << n << " " << k;
            }
}

TEST_F(TwoStar, ShiftedMoment) {
    for (int n = 2; n <= kMaxN; ++n) EXPECT_LT(shifted_moment_check(F(n), F(n + 1)), real("1e-40")) << n;
}

TEST_F(TwoStar, ZerosOfConsecutiveLevelsInterlace) {
    for (int n = 3; n <= kMaxN; ++n) EXPECT_TRUE(pnk_interlacing_probe(F(n), F(n + 1), 1)) << n;
}

TEST_F(TwoStar, LevelZeroIsTheReducedPolynomial) {
    complex z(real("0.3"), real("0.2"));
    auto d = F(9).psi(0, z) - (*recs)[9].Qd_cheb(z);
    EXPECT_EQ(d.re, 0);
    EXPECT_EQ(d.im, 0);
    EXPECT_THROW(F(9).psi(1, complex(F(9).nodes(0)[5])), pole_proximity_error);
}

TEST_F(TwoStar, BundleView) {
    auto fam = std::make_shared<SecondKindFamily>(*H, (*recs)[10]);
    auto b = make_bundle(fam, 1);
    EXPECT_EQ(b.n, 10);
    EXPECT_EQ(b.Pnk.degree(), z_count(10, 1, 2));
    complex z(real("-1.5"), real("0.4"));
    auto d = b.psi_evaluator(z) - fam->psi(1, z);
    EXPECT_EQ(abs(d), 0);
}

TEST(SecondKindLegendre, CauchyTransformOfLegendre) {
    // p = 1: Psi_{n,1}(z) = int_{-1}^{1} Q_n(t) dt / (z - t)
    precision_scope scope(256);
    MuHierarchy H(testsupport::legendre_system(), 48);
    auto rule = testsupport::legendre_rule(120, real(-1), real(1));
    for (int n : {3, 6, 7, 12}) {
        SecondKindFamily F(H, solve_Qd(H, n));
        Poly q = F.record().Qn();
        for (const auto& z : {complex(real(0), real(2)), complex(real("1.5"), real("0.5")), complex(real(-3), real(1))}) {
            complex ref(real(0));
            for (size_t i = 0; i < rule.x.size(); ++i) ref += complex(rule.w[i] * q(rule.x[i])) / (z - complex(rule.x[i]));
            EXPECT_LT(abs(F.Psi(1, z) - ref) / abs(ref), real("1e-40")) << n;
        }
    }
}

TEST(SignFormulas, ClosedAndRecursiveAgreeInScope) {
    for (int p = 1; p <= 6; ++p)
        for (long n = 0; n <= 300; ++n)
            for (int j = 0; j <= n % p && j < p; ++j) EXPECT_EQ(sign_H_closed(n, j, p), sign_H_recursive(n, j, p));
}
