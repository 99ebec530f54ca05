#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qreg/bath.hpp"
#include "qreg/dephasing.hpp"
#include "qreg/geometry.hpp"
#include "qreg/regimes.hpp"

using namespace qreg;
using std::numbers::pi;

namespace {

SpectralMoments moments(double mean, double width) { return {mean, width, mean, width}; }

}  // namespace

TEST(Classify, Independent1) {
    const auto r = classify(1.0, 1.0, moments(4.0, 0.1), 1.0, 1);
    EXPECT_NEAR(r.p_ind1a, 4.0, 1e-15);
    EXPECT_NEAR(r.p_ind1b, 4.0, 1e-15);
    EXPECT_EQ(r.classification, Regime::independent1);
    EXPECT_EQ(to_string(r.classification), "Independent-1");
}

TEST(Classify, Collective1) {
    const auto r = classify(1.0, 1e-3, moments(0.01, 0.001), 1.0, 1);
    EXPECT_NEAR(r.p_coll1a, 0.01, 1e-15);
    EXPECT_EQ(r.classification, Regime::collective1);
}

TEST(Classify, Intermediate) {
    const auto r = classify(1.0, 1.0, moments(1.0, 1.0), 1.0, 1);
    EXPECT_EQ(r.classification, Regime::intermediate);
    EXPECT_EQ(to_string(r.classification), "Intermediate");
}

TEST(Classify, Independent2AndCollective2) {
    EXPECT_EQ(classify(1.0, 0.01, moments(20.0, 15.0), 1.0, 1).classification, Regime::independent2);
    const auto r = classify(1.0, 0.01, moments(5.0, 0.01), 1.0, 3);
    EXPECT_NEAR(r.p_coll2, 0.03, 1e-15);
    EXPECT_EQ(r.classification, Regime::collective2);
    // the same bath with a long pairing distance loses the collective case
    EXPECT_EQ(classify(1.0, 0.01, moments(5.0, 0.01), 1.0, 20).classification, Regime::intermediate);
}

TEST(Classify, RawParametersAndValidation) {
    const SpectralMoments m{2.0, 0.5, 3.0, 0.25};
    const auto r = classify(1.5, 0.2, m, 2.0, 4);
    EXPECT_DOUBLE_EQ(r.p_ind1a, 2.0 * 0.2 / 2.0);
    EXPECT_DOUBLE_EQ(r.p_ind1b, 3.0 * 0.2 / 2.0);
    EXPECT_DOUBLE_EQ(r.p_ind2a, 0.5 * 1.5 / 2.0);
    EXPECT_DOUBLE_EQ(r.p_ind2b, 0.25 * 1.5 / 2.0);
    EXPECT_DOUBLE_EQ(r.p_coll1a, 2.0 * 1.5 / 2.0);
    EXPECT_DOUBLE_EQ(r.p_coll1b, 3.0 * 1.5 / 2.0);
    EXPECT_DOUBLE_EQ(r.p_coll2, 0.5 * 4 * 1.5 / 2.0);
    EXPECT_THROW(classify(1.0, 0.0, m, 1.0, 0), std::invalid_argument);
    EXPECT_THROW(classify(1.0, 0.0, m, 0.0, 1), std::invalid_argument);
}

TEST(Classify, MoreDisorderNeverGivesCollective1AfterIndependent1) {
    const auto m = moments(0.05, 0.01);
    bool seen_independent = false;
    for (double delta = 0.0; delta < 200.0; delta += 0.5) {
        const Regime r = classify(1.0, delta, m, 1.0, 1).classification;
        if (r == Regime::independent1) seen_independent = true;
        if (seen_independent) {
            EXPECT_NE(r, Regime::collective1);
        }
    }
    EXPECT_TRUE(seen_independent);
}

TEST(DisorderAverageLambdas, EqualLabelsGiveExactZero) {
    const auto g = RegisterGeometry::make({4, 1, 1}, 1.0, 0.5, 1);
    const auto i = BasisLabel::parse("+-+-");
    const auto a = disorder_average_lambdas(i, i, {3, 0, 0}, g, 100, 7);
    EXPECT_EQ(a.lambda1.mean, 0.0);
    EXPECT_EQ(a.lambda1.std_error, 0.0);
    EXPECT_EQ(a.lambda2.mean, 0.0);
}

TEST(DisorderAverageLambdas, SingleFlipGivesFourL0) {
    const auto g = RegisterGeometry::make({4, 1, 1}, 1.0, 2.0, 1);
    const auto i = BasisLabel::parse("++++");
    const auto a = disorder_average_lambdas(i, i.flipped(2), {10.0, 0, 0}, g, 1000, 3);
    EXPECT_LE(std::abs(a.lambda1.mean - 4.0), 3 * a.lambda1.std_error + 1e-12);
}

TEST(DisorderAverageLambdas, Lambda2VanishesForOppositeLabels) {
    const auto g = RegisterGeometry::make({4, 1, 1}, 1.0, 2.0, 1);
    const auto i = BasisLabel::uniform(4, 1);
    const auto a = disorder_average_lambdas(i, i.negated(), {10.0, 0, 0}, g, 1000, 3);
    EXPECT_LE(std::abs(a.lambda2.mean), 3 * a.lambda2.std_error + 1e-12);
}

TEST(DisorderAverageLambdas, ThreadCountDoesNotChangeResult) {
    const auto g = RegisterGeometry::make({4, 1, 1}, 1.0, 1.0, 1);
    const auto i = BasisLabel::parse("++++"), j = BasisLabel::parse("+--+");
    const auto a = disorder_average_lambdas(i, j, {4.0, 0, 0}, g, 500, 11, 1);
    const auto b = disorder_average_lambdas(i, j, {4.0, 0, 0}, g, 500, 11, 4);
    EXPECT_EQ(a.lambda1.mean, b.lambda1.mean);
    EXPECT_EQ(a.lambda2.std_error, b.lambda2.std_error);
    EXPECT_THROW(disorder_average_lambdas(i, j, {1, 0, 0}, g, 1, 1), std::invalid_argument);
}

TEST(FourierSuppression, Formula) {
    EXPECT_EQ(fourier_suppression(0.0, 1.0, 1.0, 1.0), 1.0);
    EXPECT_NEAR(fourier_suppression(3.0, 1.0, 1.0, 1.0), 1.2341e-4, 5e-9);
    EXPECT_NEAR(fourier_suppression(1.5, 2.0, 1.0, 1.0), std::exp(-9.0), 1e-18);
    EXPECT_THROW(fourier_suppression(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
}

// For a Gaussian h-weight of standard deviation sigma the exact average is
// exp(-(sigma tau)^2 / 2), so it equals the formula when sigma = sqrt2 dw.
TEST(FourierSuppression, GaussianGridAverage) {
    const double dw = 0.25, center = 5.0;
    const auto wide = discretize_spectrum(CouplingForm::gaussian(1.0, center, std::sqrt(2.0) * dw), 1.0, 0.0, 1, 4000,
                                          10.0);
    const auto narrow = discretize_spectrum(CouplingForm::gaussian(1.0, center, dw), 1.0, 0.0, 1, 4000, 10.0);
    for (double u : {1.0, 2.0, 3.0}) {
        const double s = u / dw;  // d = v = 1
        const double formula = fourier_suppression(dw, s, 1.0, 1.0);
        EXPECT_NEAR(grid_fourier_average(wide, s, 1.0) / formula, 1.0, 1e-6);
        EXPECT_NEAR(grid_fourier_average(narrow, s, 1.0), std::exp(-0.5 * u * u), 1e-6);
    }
    const double f2 = fourier_suppression(dw, 2.0 / dw, 1.0, 1.0);
    const double g2 = grid_fourier_average(wide, 2.0 / dw, 1.0);
    EXPECT_LT(std::max(f2 / g2, g2 / f2), 2.0);
}

TEST(IndependentLimit, Examples) {
    const auto bath = discretize_spectrum(CouplingForm::ohmic(0.05, 2.0), 1.0, 0.3, 3, 50, 6.0, 8);
    const auto i = BasisLabel::parse("+-+-");
    const auto same = independent_limit_factors(i, i, 2.0, bath);
    EXPECT_EQ(same.eta, 0.0);
    EXPECT_EQ(same.phi, 0.0);
    const auto one = independent_limit_factors(i, i.flipped(1), 2.0, bath);
    EXPECT_NEAR(one.eta, 4.0 * damping_scale(2.0, bath), 1e-15);
    EXPECT_EQ(one.phi, 0.0);
}

TEST(IndependentLimit, DampingScaleIsQuarterOfSingleQubitEta) {
    const auto bath = discretize_spectrum(CouplingForm::ohmic(0.05, 2.0), 1.0, 0.3, 3, 50, 6.0, 8);
    const std::vector<Vec3> site{{0.2, 0.1, 0.4}};
    for (double t : {0.5, 2.0, 9.0})
        EXPECT_NEAR(damping_scale(t, bath),
                    damping_factor(BasisLabel::parse("+"), BasisLabel::parse("-"), t, bath, site) / 4.0, 1e-14);
}

TEST(IndependentLimit, StrongDisorderApproachesClosedForm) {
    // Gaussian bath at kbar = 5, delta = 2.2: wbar delta / v = 11
    const auto bath = discretize_spectrum(CouplingForm::gaussian(0.01, 5.0, 0.2), 1.0, 0.0, 3, 200, 8.0, 16);
    const auto g = RegisterGeometry::make({4, 1, 1}, 1.0, 2.2, 1);
    const auto i = BasisLabel::parse("++++"), j = BasisLabel::parse("++--");
    const double t = 10.0;
    const auto avg = disorder_average_factors(i, j, t, bath, g, 1000, 21);
    const auto ind = independent_limit_factors(i, j, t, bath);
    EXPECT_NEAR(avg.eta.mean, ind.eta, 0.05 * ind.eta);
    EXPECT_LT(std::abs(avg.phi.mean), 0.05 * phase_scale(t, bath) * 8.0);
}
