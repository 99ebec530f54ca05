#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

#include "qreg/bath.hpp"
#include "qreg/codes.hpp"
#include "qreg/dephasing.hpp"
#include "qreg/geometry.hpp"

using namespace qreg;
using std::numbers::pi;

TEST(EncodeAdjacent, Examples) {
    EXPECT_EQ(encode_adjacent(BasisLabel::parse("+")), BasisLabel::parse("+-"));
    EXPECT_EQ(encode_adjacent(BasisLabel::parse("-+")), BasisLabel::parse("-++-"));
    EXPECT_EQ(encode_adjacent(BasisLabel::parse("+-+")), BasisLabel::parse("+--++-"));
}

TEST(EncodeAdjacent, PreservesAmplitudesAndNorm) {
    const auto logical = RegisterState::normalized({{BasisLabel::parse("++"), {0.6, 0.0}},
                                                    {BasisLabel::parse("+-"), {0.0, 0.3}},
                                                    {BasisLabel::parse("--"), {-0.2, 0.5}}});
    const auto phys = encode_adjacent(logical);
    EXPECT_EQ(phys.qubits(), 4u);
    EXPECT_EQ(phys.size(), 3u);
    EXPECT_NEAR(phys.norm_squared(), 1.0, 1e-15);
    EXPECT_EQ(phys.amplitude(BasisLabel::parse("+-+-")), logical.amplitude(BasisLabel::parse("++")));
    EXPECT_EQ(phys.amplitude(BasisLabel::parse("-+-+")), logical.amplitude(BasisLabel::parse("--")));
}

TEST(EncodeAdjacent, InjectiveOnAllLabels) {
    std::set<BasisLabel> seen;
    for (const auto& l : all_labels(5)) seen.insert(encode_adjacent(l));
    EXPECT_EQ(seen.size(), 32u);
}

TEST(FindPairing, Examples) {
    const auto a = find_pairing(pi, 1.0, 16, 0.05);
    ASSERT_TRUE(a.found());
    EXPECT_EQ(a.plan->m, 1);
    EXPECT_EQ(a.plan->n, 1);
    EXPECT_NEAR(a.plan->residual, 0.0, 1e-15);

    const auto b = find_pairing(pi / 2, 1.0, 16, 0.05);
    ASSERT_TRUE(b.found());
    EXPECT_EQ(b.plan->m, 2);
    EXPECT_EQ(b.plan->n, 1);

    const auto c = find_pairing(0.34 * pi, 1.0, 16, 0.05);
    ASSERT_TRUE(c.found());
    EXPECT_EQ(c.plan->m, 3);
    EXPECT_EQ(c.plan->n, 1);
    EXPECT_NEAR(c.plan->residual, 0.02, 1e-12);
}

TEST(FindPairing, ExactSolutionDoesNotDependOnTolerance) {
    for (double tol : {1e-6, 0.01, 0.05, 0.4}) {
        const auto r = find_pairing(pi / 2, 1.0, 16, tol);
        ASSERT_TRUE(r.found());
        EXPECT_EQ(r.plan->m, 2);
    }
}

TEST(FindPairing, ReportsBestCandidateWhenNothingFits) {
    const auto r = find_pairing(0.34 * pi, 1.0, 2, 0.01);
    EXPECT_FALSE(r.found());
    EXPECT_EQ(r.best_m, 2);
    EXPECT_EQ(r.best_n, 1);
    EXPECT_NEAR(r.best_residual, 0.32, 1e-12);
    EXPECT_THROW(find_pairing(1.0, 1.0, 0, 0.1), std::invalid_argument);
    EXPECT_THROW(find_pairing(1.0, 1.0, 4, 0.0), std::invalid_argument);
    EXPECT_THROW(find_pairing(1.0, 0.0, 4, 0.1), std::invalid_argument);
}

TEST(FindPairing, BlockLayout) {
    const auto r = find_pairing(pi / 3, 1.0, 16, 1e-9, 4);
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.plan->m, 3);
    EXPECT_EQ(r.plan->physical_size, 12u);
    const std::vector<SitePair> want{{0, 3}, {1, 4}, {2, 5}, {6, 9}};
    EXPECT_EQ(r.plan->pairs, want);
}

TEST(EncodeModulated, PartnerSignFollowsParityOfN) {
    // n = 1: partner carries the same spin
    const auto odd = *find_pairing(pi / 2, 1.0, 16, 0.05, 2).plan;
    EXPECT_EQ(encode_modulated(BasisLabel::parse("+-"), odd), BasisLabel::parse("+-+-"));
    // n = 2 at m = 1: partner carries the opposite spin
    const auto even = *find_pairing(2 * pi, 1.0, 16, 0.05).plan;
    EXPECT_EQ(even.n, 2);
    EXPECT_EQ(encode_modulated(BasisLabel::parse("-"), even), BasisLabel::parse("-+"));
}

TEST(EncodeModulated, IdleSitesHeldUp) {
    const auto plan = *find_pairing(pi / 3, 1.0, 16, 1e-9, 1).plan;
    EXPECT_EQ(encode_modulated(BasisLabel::parse("-"), plan), BasisLabel::parse("-++-++"));
}

TEST(Decode, RoundTripAndMismatches) {
    const auto code = adjacent_code(3);
    for (const auto& l : all_labels(3)) {
        const auto r = decode(code, encode(code, l));
        EXPECT_EQ(r.logical, l);
        EXPECT_TRUE(r.mismatched.empty());
    }
    const auto r = decode(code, BasisLabel::parse("+-++--"));
    EXPECT_EQ(r.logical, BasisLabel::parse("++-"));
    EXPECT_EQ(r.mismatched, (std::vector<std::size_t>{1, 2}));
    EXPECT_THROW(decode(code, BasisLabel::parse("+-")), std::invalid_argument);
    EXPECT_THROW(encode(code, BasisLabel::parse("+-")), std::invalid_argument);
}

TEST(SubdecoherenceResidual, AdjacentCodeIsSilentInCollectiveBath) {
    // single mode with k perpendicular to the register axis
    const auto bath = BathSpectrum::from_modes(1.0, 0.2, {{{0, 1.3, 0}, 1.3, 0.05}}, 3);
    const auto pos = build_lattice({6, 1, 1}, 1.0);
    const auto labels = all_labels(3);
    for (double t : {0.7, 5.0, 40.0}) {
        const auto r = subdecoherence_residual(adjacent_code(3), pos, bath, t, labels);
        EXPECT_LT(r.max_eta, 1e-12);
        EXPECT_LT(r.max_abs_phi, 1e-12);
    }
    // the unencoded register does decohere in the same bath
    const auto raw = pair_factors(BasisLabel::parse("+++"), BasisLabel::parse("+-+"), 5.0, bath,
                                  build_lattice({3, 1, 1}, 1.0));
    EXPECT_GT(raw.eta, 1e-3);
}

TEST(SubdecoherenceResidual, ModulatedCodeIsSilentAtExactResonance) {
    const double kbar = pi / 2;
    const auto bath = BathSpectrum::from_modes(1.0, 0.0, {{{kbar, 0, 0}, kbar, 0.05}, {{-kbar, 0, 0}, kbar, 0.05}}, 1);
    const auto plan = *find_pairing(kbar, 1.0, 16, 0.05, 2).plan;
    const auto pos = build_lattice({static_cast<int>(plan.physical_size), 1, 1}, 1.0);
    const auto r = subdecoherence_residual(modulated_code(plan), pos, bath, 30.0, all_labels(2));
    EXPECT_LT(r.max_eta, 1e-12);
    EXPECT_LT(r.max_abs_phi, 1e-12);
}

// Single logical flip in a detuned code: eta_code / eta_bare = 4 sin^2(pi eps / 2).
TEST(SubdecoherenceResidual, DetunedCodeScalesAsEpsilonSquared) {
    auto ratio = [](double frac) {
        const double kbar = frac * pi;
        const auto bath = BathSpectrum::from_modes(1.0, 0.0, {{{kbar, 0, 0}, kbar, 0.05}}, 1);
        const auto plan = *find_pairing(kbar, 1.0, 16, 0.05, 3).plan;
        const auto code = modulated_code(plan);
        const auto pos = build_lattice({static_cast<int>(plan.physical_size), 1, 1}, 1.0);
        const auto i = BasisLabel::parse("+-+");
        const double enc = damping_factor(encode(code, i), encode(code, i.flipped(1)), 3.0, bath, pos);
        const double bare = damping_factor(BasisLabel::parse("+"), BasisLabel::parse("-"), 3.0, bath,
                                           build_lattice({1, 1, 1}, 1.0));
        return std::pair{enc / bare, plan.residual};
    };
    const auto [r1, e1] = ratio(0.34);
    const auto [r2, e2] = ratio(0.3366666666666667);
    EXPECT_NEAR(e1, 0.02, 1e-12);
    EXPECT_NEAR(e2, 0.01, 1e-12);
    EXPECT_NEAR(r1, 4 * std::pow(std::sin(pi * e1 / 2), 2), 1e-12);
    EXPECT_NEAR(r1 / r2, 4.0, 0.01);
}
