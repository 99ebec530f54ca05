#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qreg/bath.hpp"
#include "qreg/dephasing.hpp"
#include "qreg/regimes.hpp"

using namespace qreg;

namespace {

constexpr int cases = 1000;

struct Case {
    std::vector<Vec3> positions;
    BathSpectrum bath;
    BasisLabel i, j;
    double t = 0.0;
};

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    std::size_t pick(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    BasisLabel label(std::size_t n) { return BasisLabel::from_bits(n, rng_()); }

    Case next() {
        Case c;
        const std::size_t L = pick(1, 6);
        for (std::size_t l = 0; l < L; ++l) c.positions.push_back({uni(-3, 3), uni(-3, 3), uni(-3, 3)});
        std::vector<Mode> modes;
        const double v = uni(0.5, 2.0);
        for (std::size_t m = 0, M = pick(1, 8); m < M; ++m) {
            const double z = uni(-1, 1), a = uni(0, 2 * std::numbers::pi), s = std::sqrt(1 - z * z);
            const double k = uni(0.05, 4.0);
            modes.push_back({{k * s * std::cos(a), k * s * std::sin(a), k * z}, v * k, uni(0.0, 0.2)});
        }
        c.bath = BathSpectrum::from_modes(v, pick(0, 1) ? uni(0.0, 3.0) : 0.0, std::move(modes), 3);
        c.i = label(L);
        c.j = label(L);
        c.t = uni(0.0, 50.0);
        return c;
    }

    RegisterState state(std::size_t n) {
        std::vector<std::pair<BasisLabel, cplx>> terms;
        for (std::size_t c = 0, C = pick(1, 5); c < C; ++c) terms.emplace_back(label(n), cplx{uni(-1, 1), uni(-1, 1)});
        return RegisterState::normalized(std::move(terms));
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace

TEST(Properties, DampingIsNonNegativeAndBounded) {
    Generator g(1);
    for (int n = 0; n < cases; ++n) {
        const Case c = g.next();
        const double eta = damping_factor(c.i, c.j, c.t, c.bath, c.positions);
        EXPECT_GE(eta, 0.0);
        // |S_i - S_j| <= 2 * (number of differing sites)
        const double w = 2.0 * static_cast<double>(differing_sites(c.i, c.j));
        EXPECT_LE(eta, damping_scale(c.t, c.bath) * w * w * (1 + 1e-12) + 1e-15);
    }
}

TEST(Properties, PairFactorsAreSymmetricAndAntisymmetric) {
    Generator g(2);
    for (int n = 0; n < cases; ++n) {
        const Case c = g.next();
        const auto ij = pair_factors(c.i, c.j, c.t, c.bath, c.positions);
        const auto ji = pair_factors(c.j, c.i, c.t, c.bath, c.positions);
        EXPECT_NEAR(ij.eta, ji.eta, 1e-12 * (1 + ij.eta));
        EXPECT_NEAR(ij.lamb, -ji.lamb, 1e-12 * (1 + std::abs(ij.lamb)));
        EXPECT_NEAR(ij.displacement, -ji.displacement, 1e-12 * (1 + std::abs(ij.displacement)));
        const auto ii = pair_factors(c.i, c.i, c.t, c.bath, c.positions);
        EXPECT_EQ(ii.eta, 0.0);
        EXPECT_EQ(ii.phi(), 0.0);
    }
}

TEST(Properties, LambPhaseIsDifferenceOfOperatorPhases) {
    Generator g(3);
    for (int n = 0; n < cases; ++n) {
        const Case c = g.next();
        const double fi = f_phase_value(c.i, c.t, c.bath, c.positions);
        const double fj = f_phase_value(c.j, c.t, c.bath, c.positions);
        const double lamb = lamb_phase(c.i, c.j, c.t, c.bath, c.positions);
        EXPECT_NEAR(fi - fj, lamb, 1e-10 * (1 + std::abs(fi) + std::abs(fj)));
    }
}

TEST(Properties, InvariantUnderSitePermutationAndTranslation) {
    Generator g(4);
    std::mt19937_64 rng(44);
    for (int n = 0; n < cases; ++n) {
        const Case c = g.next();
        const auto ref = pair_factors(c.i, c.j, c.t, c.bath, c.positions);
        std::vector<std::size_t> perm(c.positions.size());
        for (std::size_t l = 0; l < perm.size(); ++l) perm[l] = l;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Vec3> pos;
        std::vector<int> si, sj;
        const Vec3 shift{g.uni(-5, 5), g.uni(-5, 5), g.uni(-5, 5)};
        for (std::size_t l : perm) {
            pos.push_back({c.positions[l][0] + shift[0], c.positions[l][1] + shift[1], c.positions[l][2] + shift[2]});
            si.push_back(c.i[l]);
            sj.push_back(c.j[l]);
        }
        const auto moved = pair_factors(BasisLabel(si), BasisLabel(sj), c.t, c.bath, pos);
        const double scale = 1e-9 * (1 + damping_scale(c.t, c.bath) + phase_scale(c.t, c.bath)) * 36;
        EXPECT_NEAR(moved.eta, ref.eta, scale);
        EXPECT_NEAR(moved.phi(), ref.phi(), scale);
    }
}

TEST(Properties, EvolvedDensityIsPhysical) {
    Generator g(5);
    for (int n = 0; n < cases; ++n) {
        const Case c = g.next();
        const auto state = g.state(c.positions.size());
        const auto rho = evolve(state, c.t, c.bath, c.positions).rho;
        EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
        EXPECT_NEAR(rho.trace().imag(), 0.0, 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(Properties, FidelityStartsAtOneAndStaysInRange) {
    Generator g(6);
    for (int n = 0; n < cases; ++n) {
        const Case c = g.next();
        const auto state = g.state(c.positions.size());
        EXPECT_NEAR(fidelity(state, 0.0, c.bath, c.positions), 1.0, 1e-14);
        const double f = fidelity(state, c.t, c.bath, c.positions);
        EXPECT_GE(f, -1e-14);
        EXPECT_LE(f, 1.0 + 1e-14);
        EXPECT_NEAR(fidelity(RegisterState::basis(c.i), c.t, c.bath, c.positions), 1.0, 1e-14);
    }
}
