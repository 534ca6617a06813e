#include "oracles.hpp"
#include "qwork/qwork.hpp"

#include <gtest/gtest.h>

using namespace qwork;

namespace {

TEST(Monotones, MaximallyEntangledQutrit) {
    const auto m = concurrence_monotones(presets::omega_max());
    ASSERT_EQ(m.raw.size(), 3u);
    EXPECT_NEAR(m.raw[0], 1.0, 1e-12);
    EXPECT_NEAR(m.raw[1], 1.0 / 3, 1e-12);
    EXPECT_NEAR(m.raw[2], 1.0 / 27, 1e-12);
    EXPECT_NEAR(m.g_concurrence, 1.0, 1e-9);
    EXPECT_NEAR(g_concurrence(presets::omega_max()), 1.0, 1e-9);
}

TEST(Monotones, RankDeficientStatesHaveZeroG) {
    for (auto [r, s] : std::vector<std::pair<double, double>>{{1.0 / 3, 1.0 / 3}, {0.5, 0.25}, {0.1, 0.8}, {0.9, 0.05}})
        EXPECT_NEAR(g_concurrence(presets::omega_tilde(r, s)), 0.0, 1e-9) << r << "," << s;
    EXPECT_NEAR(g_concurrence(presets::prod00(3)), 0.0, 1e-9);
    EXPECT_NEAR(g_concurrence(presets::prod00(2)), 0.0, 1e-9);
}

TEST(Monotones, ElementarySymmetricMatchesCharacteristicPolynomial) {
    SplitMix64 rng(31);
    for (int t = 0; t < 300; ++t) {
        const Eigen::Index d = 2 + t % 3;
        const auto psi = random_pure_state(d, d, rng);
        const auto m = concurrence_monotones(psi);
        const auto c = oracle::char_poly(reduced_density(psi, Side::A).matrix());
        for (Eigen::Index k = 1; k <= d; ++k) {
            const double ek = (k % 2 ? -1.0 : 1.0) * c[static_cast<std::size_t>(k - 1)];
            ASSERT_NEAR(m.raw[static_cast<std::size_t>(k - 1)], ek, 1e-8) << "d=" << d << " k=" << k;
        }
    }
}

TEST(Monotones, GMatchesSingularValueOracle) {
    SplitMix64 rng(32);
    for (int t = 0; t < 1000; ++t) {
        const Eigen::Index d = 2 + t % 3;
        const auto psi = random_pure_state(d, d, rng);
        const double g = g_concurrence(psi);
        ASSERT_NEAR(g, oracle::g_by_svd(psi), 1e-9);
        ASSERT_GE(g, 0.0);
        ASSERT_LE(g, 1.0);
    }
}

TEST(Monotones, QubitGEqualsConcurrence) {
    SplitMix64 rng(33);
    for (int t = 0; t < 500; ++t) {
        const auto psi = random_pure_state(2, 2, rng);
        ASSERT_NEAR(g_concurrence(psi), concurrence(psi), 1e-9);
    }
    EXPECT_NEAR(concurrence(presets::phi_me()), 1.0, 1e-12);
}

TEST(Monotones, OmegaTildeConcurrenceClosedForm) {
    for (double r : {0.1, 0.25, 0.5, 0.7}) {
        const auto psi = presets::omega_tilde(r, (1 - r) / 2);
        EXPECT_NEAR(concurrence(psi), 2 * std::sqrt(r * (1 - r)), 1e-12) << r;
    }
}

TEST(Monotones, InvariantUnderLocalUnitaries) {
    SplitMix64 rng(34);
    for (int t = 0; t < 300; ++t) {
        const Eigen::Index d = 2 + t % 3;
        const auto psi = random_pure_state(d, d, rng);
        const auto moved = apply_local_unitary(psi, random_unitary(d, rng), random_unitary(d, rng));
        const auto m0 = concurrence_monotones(psi), m1 = concurrence_monotones(moved);
        for (std::size_t k = 0; k < m0.raw.size(); ++k) ASSERT_NEAR(m0.raw[k], m1.raw[k], 1e-9);
        ASSERT_NEAR(m0.g_concurrence, m1.g_concurrence, 1e-9);
    }
}

TEST(Monotones, RejectRectangularStates) {
    SplitMix64 rng(35);
    const auto psi = random_pure_state(2, 3, rng);
    EXPECT_THROW(g_concurrence(psi), UnsupportedShape);
    EXPECT_THROW(concurrence_monotones(psi), UnsupportedShape);
    EXPECT_THROW(criterion_check(psi), UnsupportedShape);
}

TEST(FamilyG, ClosedForms) {
    for (int k = 0; k <= 20; ++k) {
        const double x = k / 20.0;
        EXPECT_EQ(g_concurrence_family(MixedFamily::FigB, x), 1.0 - x);
        EXPECT_EQ(g_concurrence_family(MixedFamily::FigC, x), x);
    }
    EXPECT_THROW(g_concurrence_family(MixedFamily::FigB, -0.01), InvalidParameter);
    EXPECT_THROW(g_concurrence_family(MixedFamily::FigC, 1.01), InvalidParameter);
    EXPECT_THROW(g_concurrence_family(MixedFamily::FigC, std::nan("")), InvalidParameter);
}

TEST(Criterion, Examples) {
    const auto om = criterion_check(presets::omega_max());
    EXPECT_TRUE(om.passes);
    EXPECT_EQ(om.schmidt_rank, 3);
    EXPECT_NEAR(om.column_gram_deviation, 0.0, 1e-12);

    const auto ot = criterion_check(presets::omega());
    EXPECT_FALSE(ot.passes);
    EXPECT_EQ(ot.schmidt_rank, 2);
    // A^dagger A has 1/3 on the diagonal plus an off-diagonal 1/3 pair; c = 1/3.
    EXPECT_NEAR(ot.column_gram_deviation, 1.0 / 3, 1e-12);

    const auto p = criterion_check(presets::prod00(3));
    EXPECT_FALSE(p.passes);
    EXPECT_EQ(p.schmidt_rank, 1);
}

TEST(Criterion, RankOfConstructedStates) {
    SplitMix64 rng(36);
    for (int t = 0; t < 300; ++t) {
        const Eigen::Index d = 2 + t % 3;
        const Eigen::Index r = 1 + (t / 3) % d;
        const auto rep = criterion_check(random_state_of_rank(d, r, rng));
        ASSERT_EQ(rep.schmidt_rank, r);
        ASSERT_EQ(rep.passes, r == d);
        // Roundoff rank deficiency leaves G ~ d * eps^(2/d), about 1e-8 at d = 4.
        if (r < d) {
            ASSERT_LT(rep.g_concurrence, 1e-7);
        }
    }
}

}  // namespace
