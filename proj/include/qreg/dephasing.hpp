#pragma once

// Exact pure-dephasing dynamics of a qubit register coupled to a common
// bosonic bath through plane-wave couplings g_kl = g_k exp(-i k.r_l).
//
// A coherence element rho_ij evolves as
//
//   rho_ij(t) = c_i conj(c_j) exp(-eta_ij(t) + i phi_ij(t))
//
//   eta_ij = sum_k |g_k|^2 coth(w/2T) (1 - cos wt)/w^2 * lambda1_k(i,j)
//   phi_ij = sum_k |g_k|^2 (wt - sin wt)/w^2 * lambda2_k(i,j)
//          + sum_k |g_k|^2 2(1 - cos wt)/w^2 * Im(conj(S_i) S_j)
//
// with S_i(k) = sum_l i_l exp(-i k.r_l), lambda1 = |S_i - S_j|^2 and
// lambda2 = |S_i|^2 - |S_j|^2. The last sum (the displacement phase) comes
// from composing the two label-conditioned displacements of the bath. It
// cancels between k and -k, so it vanishes identically for the
// inversion-symmetric mode sets produced by discretize_spectrum; it is kept
// so arbitrary mode lists are treated exactly.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "qreg/basis.hpp"
#include "qreg/bath.hpp"
#include "qreg/detail/numeric.hpp"
#include "qreg/geometry.hpp"

namespace qreg {

namespace detail {

inline void check_sizes(const BasisLabel& i, std::span<const Vec3> positions) {
    if (i.size() != positions.size())
        throw std::invalid_argument("basis label length does not match the number of qubit sites");
}

inline void check_sizes(const BasisLabel& i, const BasisLabel& j, std::span<const Vec3> positions) {
    if (i.size() != j.size()) throw std::invalid_argument("basis labels have different lengths");
    check_sizes(i, positions);
}

inline void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and >= 0");
}

// S(k) = sum_l c_l exp(-i k.r_l) for integer coefficients c_l.
template <typename Coefficients>
cplx structure_sum(const Coefficients& c, const Vec3& k, std::span<const Vec3> positions) {
    cplx s{};
    for (std::size_t l = 0; l < positions.size(); ++l) {
        const double theta = dot(k, positions[l]);
        s += static_cast<double>(c[l]) * cplx{std::cos(theta), -std::sin(theta)};
    }
    return s;
}

}  // namespace detail

inline double lambda1(const BasisLabel& i, const BasisLabel& j, const Vec3& k,
                      std::span<const Vec3> positions) {
    detail::check_sizes(i, j, positions);
    std::vector<int> diff(i.size());
    for (std::size_t l = 0; l < i.size(); ++l) diff[l] = i[l] - j[l];
    return std::norm(detail::structure_sum(diff, k, positions));
}

inline double lambda2(const BasisLabel& i, const BasisLabel& j, const Vec3& k,
                      std::span<const Vec3> positions) {
    detail::check_sizes(i, j, positions);
    return std::norm(detail::structure_sum(i.spins(), k, positions)) -
           std::norm(detail::structure_sum(j.spins(), k, positions));
}

struct PairFactors {
    double eta = 0.0;
    double lamb = 0.0;          // lambda2-weighted phase
    double displacement = 0.0;  // vanishes for inversion-symmetric mode sets

    double phi() const { return lamb + displacement; }
};

// Caches S_i(k) for a fixed set of labels so that factors at many times, or
// for many pairs, reuse one O(modes * sites * labels) pass.
class CoherenceKernel {
public:
    CoherenceKernel(std::vector<BasisLabel> labels, const BathSpectrum& bath,
                    std::span<const Vec3> positions)
        : labels_(std::move(labels)), modes_(bath.modes().begin(), bath.modes().end()) {
        coth_.resize(modes_.size());
        for (std::size_t m = 0; m < modes_.size(); ++m)
            coth_[m] = thermal_coth(modes_[m].omega, bath.temperature());
        sums_.resize(labels_.size());
        for (std::size_t a = 0; a < labels_.size(); ++a) {
            detail::check_sizes(labels_[a], positions);
            sums_[a].resize(modes_.size());
            for (std::size_t m = 0; m < modes_.size(); ++m)
                sums_[a][m] = detail::structure_sum(labels_[a].spins(), modes_[m].k, positions);
        }
    }

    const std::vector<BasisLabel>& labels() const { return labels_; }

    PairFactors pair(std::size_t a, std::size_t b, double t) const {
        detail::check_time(t);
        if (a == b) return {};
        const std::size_t n = modes_.size();
        std::vector<double> eta(n), lamb(n), disp(n);
        for (std::size_t m = 0; m < n; ++m) {
            const Mode& mode = modes_[m];
            const double w2 = mode.omega * mode.omega;
            const double wt = mode.omega * t;
            const cplx si = sums_[a][m];
            const cplx sj = sums_[b][m];
            const double omc = detail::one_minus_cos(wt) / w2;
            eta[m] = mode.g2 * coth_[m] * omc * std::norm(si - sj);
            lamb[m] = mode.g2 * detail::x_minus_sin(wt) / w2 * (std::norm(si) - std::norm(sj));
            disp[m] = mode.g2 * 2.0 * omc * std::imag(std::conj(si) * sj);
        }
        return {detail::pairwise_sum(eta), detail::pairwise_sum(lamb), detail::pairwise_sum(disp)};
    }

    // f_i(t) = sum_k (wt - sin wt)/w^2 |sum_l g_kl i_l|^2
    double f_phase(std::size_t a, double t) const {
        detail::check_time(t);
        std::vector<double> terms(modes_.size());
        for (std::size_t m = 0; m < modes_.size(); ++m) {
            const Mode& mode = modes_[m];
            terms[m] = mode.g2 * detail::x_minus_sin(mode.omega * t) / (mode.omega * mode.omega) *
                       std::norm(sums_[a][m]);
        }
        return detail::pairwise_sum(terms);
    }

private:
    std::vector<BasisLabel> labels_;
    std::vector<Mode> modes_;
    std::vector<double> coth_;
    std::vector<std::vector<cplx>> sums_;
};

inline PairFactors pair_factors(const BasisLabel& i, const BasisLabel& j, double t,
                                const BathSpectrum& bath, std::span<const Vec3> positions) {
    detail::check_sizes(i, j, positions);
    return CoherenceKernel({i, j}, bath, positions).pair(0, 1, t);
}

inline double damping_factor(const BasisLabel& i, const BasisLabel& j, double t,
                             const BathSpectrum& bath, std::span<const Vec3> positions) {
    return pair_factors(i, j, t, bath, positions).eta;
}

inline double lamb_phase(const BasisLabel& i, const BasisLabel& j, double t,
                         const BathSpectrum& bath, std::span<const Vec3> positions) {
    return pair_factors(i, j, t, bath, positions).lamb;
}

inline double displacement_phase(const BasisLabel& i, const BasisLabel& j, double t,
                                 const BathSpectrum& bath, std::span<const Vec3> positions) {
    return pair_factors(i, j, t, bath, positions).displacement;
}

inline double f_phase_value(const BasisLabel& i, double t, const BathSpectrum& bath,
                            std::span<const Vec3> positions) {
    detail::check_sizes(i, positions);
    return CoherenceKernel({i}, bath, positions).f_phase(0, t);
}

// Per ordered pair (a, b) of a label set: eta(a,b) and the total phase phi(a,b).
struct DecoherenceFactors {
    double t = 0.0;
    std::vector<BasisLabel> labels;
    Eigen::MatrixXd eta;
    Eigen::MatrixXd phi;

    std::size_t index_of(const BasisLabel& label) const {
        for (std::size_t a = 0; a < labels.size(); ++a)
            if (labels[a] == label) return a;
        throw std::out_of_range("DecoherenceFactors: label " + label.str() + " not in set");
    }
};

inline DecoherenceFactors decoherence_factors(const CoherenceKernel& kernel, double t) {
    const std::size_t n = kernel.labels().size();
    DecoherenceFactors f{t, kernel.labels(), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const PairFactors p = kernel.pair(a, b, t);
            f.eta(a, b) = f.eta(b, a) = p.eta;
            f.phi(a, b) = p.phi();
            f.phi(b, a) = -p.phi();
        }
    return f;
}

// Reduced register density restricted to the labels carrying nonzero
// amplitude; every other entry is identically zero under pure dephasing.
struct ReducedDensity {
    std::vector<BasisLabel> labels;
    Eigen::MatrixXcd rho;

    cplx entry(const BasisLabel& i, const BasisLabel& j) const {
        std::ptrdiff_t a = -1, b = -1;
        for (std::size_t n = 0; n < labels.size(); ++n) {
            if (labels[n] == i) a = static_cast<std::ptrdiff_t>(n);
            if (labels[n] == j) b = static_cast<std::ptrdiff_t>(n);
        }
        if (a < 0 || b < 0) return {};
        return rho(a, b);
    }

    double trace() const { return rho.trace().real(); }
};

namespace detail {

inline void check_normalised(const RegisterState& state) {
    if (std::abs(state.norm_squared() - 1.0) > RegisterState::norm_tolerance)
        throw std::invalid_argument("register state is not normalised");
}

inline std::vector<cplx> amplitudes(const RegisterState& state) {
    std::vector<cplx> c;
    c.reserve(state.size());
    for (const auto& [label, amp] : state.terms()) c.push_back(amp);
    return c;
}

}  // namespace detail

inline ReducedDensity evolve(const CoherenceKernel& kernel, const RegisterState& state, double t) {
    detail::check_normalised(state);
    const auto c = detail::amplitudes(state);
    const std::size_t n = c.size();
    if (kernel.labels().size() != n) throw std::invalid_argument("evolve: kernel/state label mismatch");
    ReducedDensity out{kernel.labels(), Eigen::MatrixXcd::Zero(n, n)};
    for (std::size_t a = 0; a < n; ++a) {
        out.rho(a, a) = std::norm(c[a]);
        for (std::size_t b = a + 1; b < n; ++b) {
            const PairFactors p = kernel.pair(a, b, t);
            const cplx e = c[a] * std::conj(c[b]) * std::exp(cplx{-p.eta, p.phi()});
            out.rho(a, b) = e;
            out.rho(b, a) = std::conj(e);
        }
    }
    return out;
}

inline ReducedDensity evolve(const RegisterState& state, double t, const BathSpectrum& bath,
                             std::span<const Vec3> positions) {
    detail::check_time(t);
    return evolve(CoherenceKernel(state.labels(), bath, positions), state, t);
}

// F = <psi(0)| rho(t) |psi(0)> = sum_ij |c_i|^2 |c_j|^2 exp(-eta_ij + i phi_ij).
// phi is antisymmetric, so the (i,j) and (j,i) terms combine into a cosine.
inline double fidelity(const CoherenceKernel& kernel, const RegisterState& state, double t) {
    detail::check_normalised(state);
    const auto c = detail::amplitudes(state);
    const std::size_t n = c.size();
    std::vector<double> terms;
    terms.reserve(n * (n + 1) / 2);
    for (std::size_t a = 0; a < n; ++a) {
        const double pa = std::norm(c[a]);
        terms.push_back(pa * pa);
        for (std::size_t b = a + 1; b < n; ++b) {
            const PairFactors p = kernel.pair(a, b, t);
            terms.push_back(2.0 * pa * std::norm(c[b]) * std::exp(-p.eta) * std::cos(p.phi()));
        }
    }
    return detail::pairwise_sum(terms);
}

inline double fidelity(const RegisterState& state, double t, const BathSpectrum& bath,
                       std::span<const Vec3> positions) {
    return fidelity(CoherenceKernel(state.labels(), bath, positions), state, t);
}

}  // namespace qreg
