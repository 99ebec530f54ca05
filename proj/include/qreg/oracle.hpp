#pragma once

// Brute-force reference dynamics for small registers. The interaction
// Hamiltonian
//
//   H_I(t) = sum_{k,l} (g_kl a_k e^{-i w_k t} + g_kl^* a_k^+ e^{i w_k t}) sigma^z_l
//
// is integrated directly in a truncated Fock space; nothing here calls into
// the closed-form dephasing code. H_I is diagonal in the register basis and
// has no mode-mode terms, so a product bath state stays a product for each
// register label: the joint state is stored as, per label, an amplitude and
// one Fock vector per mode. This is the exact joint tensor in factored form.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qreg/basis.hpp"
#include "qreg/bath.hpp"
#include "qreg/detail/numeric.hpp"
#include "qreg/geometry.hpp"

namespace qreg::oracle {

constexpr double leakage_limit = 1e-6;
constexpr double unitarity_tolerance = 1e-9;

class TruncationError : public std::runtime_error {
public:
    TruncationError(double leakage, std::size_t mode)
        : std::runtime_error("truncation insufficient: top Fock level of mode " + std::to_string(mode) +
                             " holds probability " + std::to_string(leakage) + " (limit 1e-6)"),
          leakage_(leakage) {}
    double leakage() const { return leakage_; }

private:
    double leakage_;
};

// g_kl = g_k exp(-i k.r_l) for every (mode, site), with g_k = sqrt(g2) real.
struct Couplings {
    std::vector<double> omega;
    std::vector<std::vector<cplx>> g;  // [mode][site]

    static Couplings plane_wave(const BathSpectrum& bath, std::span<const Vec3> positions) {
        Couplings c;
        for (const Mode& m : bath.modes()) {
            c.omega.push_back(m.omega);
            const double gk = std::sqrt(m.g2);
            std::vector<cplx> row;
            row.reserve(positions.size());
            for (const Vec3& r : positions) {
                const double theta = dot(m.k, r);
                row.push_back(gk * cplx{std::cos(theta), -std::sin(theta)});
            }
            c.g.push_back(std::move(row));
        }
        return c;
    }

    std::size_t modes() const { return omega.size(); }
    std::size_t sites() const { return g.empty() ? 0 : g.front().size(); }

    // Total coupling of mode m seen by register label i: sum_l g_ml i_l.
    cplx label_coupling(std::size_t m, const BasisLabel& i) const {
        cplx s{};
        for (std::size_t l = 0; l < i.size(); ++l) s += g[m][l] * static_cast<double>(i[l]);
        return s;
    }
};

// xi_kl(t) = g_kl (1 - e^{-i w t}) / w
inline cplx xi(cplx g_kl, double omega, double t) {
    return g_kl * (1.0 - std::exp(cplx{0.0, -omega * t})) / omega;
}

inline Eigen::VectorXcd coherent_state(cplx alpha, std::size_t dim) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    cplx term = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n < dim; ++n) {
        v(static_cast<Eigen::Index>(n)) = term;
        term *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return v;
}

inline Eigen::VectorXcd vacuum(std::size_t dim) { return coherent_state(cplx{}, dim); }

// Register amplitude times one Fock vector per mode.
struct LabelBranch {
    BasisLabel label;
    cplx amplitude;
    std::vector<Eigen::VectorXcd> modes;
};

struct TruncatedBathState {
    std::size_t dim = 0;  // Fock truncation per mode
    std::vector<LabelBranch> branches;

    static TruncatedBathState product(const RegisterState& reg, std::span<const cplx> alphas,
                                      std::size_t dim) {
        TruncatedBathState s;
        s.dim = dim;
        std::vector<Eigen::VectorXcd> bath;
        for (cplx a : alphas) bath.push_back(coherent_state(a, dim));
        for (const auto& [label, amp] : reg.terms()) s.branches.push_back({label, amp, bath});
        return s;
    }

    double norm_squared() const {
        double n = 0.0;
        for (const auto& b : branches) {
            double p = std::norm(b.amplitude);
            for (const auto& v : b.modes) p *= v.squaredNorm();
            n += p;
        }
        return n;
    }

    // Amplitude of |label> (x) |n_1, n_2, ...>.
    cplx amplitude(std::size_t branch, std::span<const std::size_t> occupations) const {
        const auto& b = branches.at(branch);
        cplx a = b.amplitude;
        for (std::size_t m = 0; m < b.modes.size(); ++m)
            a *= b.modes[m](static_cast<Eigen::Index>(occupations[m]));
        return a;
    }

    // Reduced register density over the branch labels: tr_bath.
    Eigen::MatrixXcd reduced_density() const {
        const auto n = static_cast<Eigen::Index>(branches.size());
        Eigen::MatrixXcd rho(n, n);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b) {
                cplx overlap{1.0, 0.0};
                for (std::size_t m = 0; m < branches[a].modes.size(); ++m)
                    overlap *= branches[b].modes[m].dot(branches[a].modes[m]);
                rho(a, b) = branches[a].amplitude * std::conj(branches[b].amplitude) * overlap;
            }
        return rho;
    }
};

// Largest |a - b| over every amplitude of the joint (register x Fock^modes) tensor.
inline double max_amplitude_deviation(const TruncatedBathState& a, const TruncatedBathState& b) {
    if (a.branches.size() != b.branches.size() || a.dim != b.dim)
        throw std::invalid_argument("max_amplitude_deviation: incompatible states");
    double worst = 0.0;
    for (std::size_t br = 0; br < a.branches.size(); ++br) {
        const std::size_t modes = a.branches[br].modes.size();
        std::vector<std::size_t> occ(modes, 0);
        while (true) {
            worst = std::max(worst, std::abs(a.amplitude(br, occ) - b.amplitude(br, occ)));
            std::size_t m = 0;
            while (m < modes && ++occ[m] == a.dim) occ[m++] = 0;
            if (m == modes) break;
        }
    }
    return worst;
}

inline double top_level_population(const Eigen::VectorXcd& v) {
    const double total = v.squaredNorm();
    if (total == 0.0) return 0.0;
    return std::norm(v(v.size() - 1)) / total;
}

// Split-step propagator for one mode driven by label coupling G:
//   H(s) = G a e^{-iws} + G^* a^+ e^{iws} = hx(s) x + hp(s) p,
//   hx = sqrt2 Re(G e^{-iws}),  hp = -sqrt2 Im(G e^{-iws}).
// The basic step samples the coefficients at its midpoint and applies
//   exp(-i h/2 hx x) exp(-i h hp p) exp(-i h/2 hx x)
// with x and p diagonalised once in the truncated space. That step is second
// order and time-symmetric; order 4 composes three of them with the
// Yoshida weights.
class SplitStepMode {
public:
    explicit SplitStepMode(std::size_t dim, int order = 4) : dim_(dim), order_(order) {
        if (dim < 2) throw std::invalid_argument("Fock truncation must be >= 2");
        if (order != 2 && order != 4) throw std::invalid_argument("split-step order must be 2 or 4");
        const auto n = static_cast<Eigen::Index>(dim);
        Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
        for (Eigen::Index k = 0; k + 1 < n; ++k) {
            const double s = std::sqrt(static_cast<double>(k + 1) / 2.0);
            x(k, k + 1) = x(k + 1, k) = s;
            // p = i (a^+ - a) / sqrt2
            p(k + 1, k) = cplx{0.0, s};
            p(k, k + 1) = cplx{0.0, -s};
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> xs(x);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ps(p);
        x_eval_ = xs.eigenvalues();
        p_eval_ = ps.eigenvalues();
        x_vec_ = xs.eigenvectors().cast<cplx>();
        to_p_ = ps.eigenvectors().adjoint() * x_vec_;
        from_p_ = to_p_.adjoint();
    }

    std::size_t dim() const { return dim_; }
    int order() const { return order_; }

    // Propagates the columns of `psi` (Fock basis) from 0 to t.
    template <typename Derived>
    void evolve(Eigen::MatrixBase<Derived>& psi, cplx G, double omega, double t,
                std::size_t steps) const {
        if (steps < 1) throw std::invalid_argument("trotter: steps must be >= 1");
        if (t == 0.0 || G == cplx{}) return;
        const double dt = t / static_cast<double>(steps);
        const double cbrt2 = std::cbrt(2.0);
        const double w1 = 1.0 / (2.0 - cbrt2);
        const double w0 = -cbrt2 / (2.0 - cbrt2);
        Eigen::MatrixXcd work = x_vec_.adjoint() * psi;  // x eigenbasis
        for (std::size_t s = 0; s < steps; ++s) {
            const double t0 = static_cast<double>(s) * dt;
            if (order_ == 2) {
                substep(work, G, omega, t0, dt);
            } else {
                substep(work, G, omega, t0, w1 * dt);
                substep(work, G, omega, t0 + w1 * dt, w0 * dt);
                substep(work, G, omega, t0 + (w1 + w0) * dt, w1 * dt);
            }
        }
        psi = x_vec_ * work;
    }

    Eigen::MatrixXcd propagator(cplx G, double omega, double t, std::size_t steps) const {
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim_),
                                                        static_cast<Eigen::Index>(dim_));
        evolve(u, G, omega, t, steps);
        return u;
    }

private:
    // One midpoint step of length h starting at `start`, on x-basis columns.
    void substep(Eigen::MatrixXcd& work, cplx G, double omega, double start, double h) const {
        const cplx z = G * std::exp(cplx{0.0, -omega * (start + 0.5 * h)});
        const double hx = std::sqrt(2.0) * z.real();
        const double hp = -std::sqrt(2.0) * z.imag();
        Eigen::VectorXcd half_x(work.rows()), full_p(work.rows());
        for (Eigen::Index k = 0; k < work.rows(); ++k) {
            half_x(k) = std::exp(cplx{0.0, -0.5 * h * hx * x_eval_(k)});
            full_p(k) = std::exp(cplx{0.0, -h * hp * p_eval_(k)});
        }
        work = half_x.asDiagonal() * work;
        work = full_p.asDiagonal() * (to_p_ * work);
        work = half_x.asDiagonal() * (from_p_ * work);
    }

    std::size_t dim_;
    int order_;
    Eigen::VectorXd x_eval_;
    Eigen::VectorXd p_eval_;
    Eigen::MatrixXcd x_vec_;
    Eigen::MatrixXcd to_p_;
    Eigen::MatrixXcd from_p_;
};

namespace detail {

inline void check_leakage(const TruncatedBathState& s) {
    for (const auto& b : s.branches)
        for (std::size_t m = 0; m < b.modes.size(); ++m) {
            const double leak = top_level_population(b.modes[m]);
            if (leak > leakage_limit) throw TruncationError(leak, m);
        }
}

inline void check_unitarity(double before, double after) {
    if (std::abs(after - before) > unitarity_tolerance)
        throw std::runtime_error("oracle: joint-state norm drifted by " + std::to_string(after - before));
}

}  // namespace detail

inline TruncatedBathState trotter_evolve(const TruncatedBathState& initial, const Couplings& couplings,
                                         double t, std::size_t steps, int order = 4) {
    if (steps < 1) throw std::invalid_argument("trotter_evolve: steps must be >= 1");
    if (!(t >= 0.0)) throw std::invalid_argument("trotter_evolve: t must be >= 0");
    const SplitStepMode stepper(initial.dim, order);
    TruncatedBathState out = initial;
    for (auto& b : out.branches)
        for (std::size_t m = 0; m < couplings.modes(); ++m)
            stepper.evolve(b.modes[m], couplings.label_coupling(m, b.label), couplings.omega[m], t, steps);
    detail::check_unitarity(initial.norm_squared(), out.norm_squared());
    detail::check_leakage(out);
    return out;
}

// Matrix of the displacement exp(beta a^+ - beta^* a) restricted to the first
// `dim` Fock states. The generator is diagonalised in a space enlarged by
// `pad` levels, so the returned block is exact to rounding for moderate |beta|.
inline Eigen::MatrixXcd displacement_matrix(cplx beta, std::size_t dim, std::size_t pad = 64) {
    const auto big = static_cast<Eigen::Index>(dim + pad);
    // D = exp(-i H) with H = i (beta a^+ - beta^* a), Hermitian.
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(big, big);
    for (Eigen::Index k = 0; k + 1 < big; ++k) {
        const double s = std::sqrt(static_cast<double>(k + 1));
        h(k + 1, k) = cplx{0.0, 1.0} * beta * s;
        h(k, k + 1) = -cplx{0.0, 1.0} * std::conj(beta) * s;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(big);
    for (Eigen::Index k = 0; k < big; ++k) phases(k) = std::exp(cplx{0.0, -es.eigenvalues()(k)});
    const Eigen::MatrixXcd d = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const auto n = static_cast<Eigen::Index>(dim);
    return d.topLeftCorner(n, n);
}

// f_i(t) = sum_k (w t - sin w t)/w^2 |sum_l g_kl i_l|^2
inline double operator_phase(const Couplings& couplings, const BasisLabel& label, double t) {
    double f = 0.0;
    for (std::size_t m = 0; m < couplings.modes(); ++m) {
        const double w = couplings.omega[m];
        f += (w * t - std::sin(w * t)) / (w * w) * std::norm(couplings.label_coupling(m, label));
    }
    return f;
}

// Applies U(t) = exp{ sum_{k,l} (xi_kl^* a_k^+ - xi_kl a_k) sigma^z_l } e^{i f(t)}
// exactly (per register label a displacement per mode plus a phase).
// `with_phase = false` drops e^{i f(t)}, i.e. the plain exponential of the
// integrated Hamiltonian, for ablation.
inline TruncatedBathState closed_form_unitary_apply(const TruncatedBathState& initial,
                                                    const Couplings& couplings, double t,
                                                    bool with_phase = true) {
    if (!(t >= 0.0)) throw std::invalid_argument("closed_form_unitary_apply: t must be >= 0");
    TruncatedBathState out = initial;
    for (auto& b : out.branches) {
        for (std::size_t m = 0; m < couplings.modes(); ++m) {
            cplx beta{};
            for (std::size_t l = 0; l < b.label.size(); ++l)
                beta += std::conj(xi(couplings.g[m][l], couplings.omega[m], t)) *
                        static_cast<double>(b.label[l]);
            b.modes[m] = displacement_matrix(beta, out.dim) * b.modes[m];
        }
        if (with_phase) b.amplitude *= std::exp(cplx{0.0, operator_phase(couplings, b.label, t)});
    }
    detail::check_leakage(out);
    return out;
}

// Fock truncation heuristic: thermal spread plus the largest displacement
// |xi| and, for sampled runs, the tail radius of the coherent-state samples.
inline std::size_t default_truncation(double nbar, double xi_max, std::size_t samples = 1) {
    double r = xi_max;
    if (nbar > 0.0) r += std::sqrt(nbar * std::log(10.0 * static_cast<double>(std::max<std::size_t>(samples, 1))));
    const double n = nbar + 6.0 * std::sqrt(nbar + 1.0) + r * r + 6.0 * r;
    return static_cast<std::size_t>(std::ceil(n)) + 2;
}

inline double max_displacement(const Couplings& couplings, std::span<const BasisLabel> labels) {
    double worst = 0.0;
    for (std::size_t m = 0; m < couplings.modes(); ++m)
        for (const auto& l : labels)
            worst = std::max(worst, 2.0 * std::abs(couplings.label_coupling(m, l)) / couplings.omega[m]);
    return worst;
}

struct ThermalDensity {
    std::vector<BasisLabel> labels;
    Eigen::MatrixXcd rho;
    // Standard error of the complex estimate, sqrt(var Re + var Im) / sqrt(n); zero at T = 0.
    Eigen::MatrixXd std_error;
    std::size_t samples = 0;
    std::size_t truncation = 0;
};

struct ThermalOptions {
    std::size_t samples = 10000;
    std::size_t steps = 2000;
    std::uint64_t seed = 1;
    std::size_t truncation = 0;  // 0: default_truncation
};

// Reduced register density at time t for a thermal bath, by sampling the
// Glauber P-representation prod_k (1/pi<N_k>) exp(-|alpha_k|^2/<N_k>): each
// sample starts the bath in a coherent state, the joint state is propagated
// with the split-step integrator, and the bath is traced out. At T = 0 the
// representation collapses to the vacuum and a single deterministic run is made.
inline ThermalDensity thermal_reduced_density(const RegisterState& reg, const Couplings& couplings,
                                              const std::vector<double>& occupations, double t,
                                              const ThermalOptions& opt = {}) {
    if (occupations.size() != couplings.modes())
        throw std::invalid_argument("thermal_reduced_density: one occupation per mode required");
    const auto labels = reg.labels();
    const bool zero_temperature =
        std::all_of(occupations.begin(), occupations.end(), [](double n) { return n == 0.0; });
    const double nbar = *std::max_element(occupations.begin(), occupations.end());
    const std::size_t samples = zero_temperature ? 1 : opt.samples;
    const std::size_t dim = opt.truncation ? opt.truncation
                                           : default_truncation(nbar, max_displacement(couplings, labels), samples);
    const auto nl = static_cast<Eigen::Index>(labels.size());
    const std::size_t nm = couplings.modes();

    ThermalDensity out{labels, Eigen::MatrixXcd::Zero(nl, nl), Eigen::MatrixXd::Zero(nl, nl), samples, dim};
    std::vector<cplx> amps;
    for (const auto& [label, a] : reg.terms()) amps.push_back(a);

    if (zero_temperature) {
        const std::vector<cplx> alphas(nm);
        const auto evolved = trotter_evolve(TruncatedBathState::product(reg, alphas, dim), couplings, t, opt.steps);
        out.rho = evolved.reduced_density();
        return out;
    }

    const SplitStepMode stepper(dim);
    // propagators[a][m]
    std::vector<std::vector<Eigen::MatrixXcd>> prop(labels.size());
    for (std::size_t a = 0; a < labels.size(); ++a)
        for (std::size_t m = 0; m < nm; ++m)
            prop[a].push_back(stepper.propagator(couplings.label_coupling(m, labels[a]), couplings.omega[m], t, opt.steps));

    Eigen::MatrixXd sum_re = Eigen::MatrixXd::Zero(nl, nl), sum_im = sum_re, sq_re = sum_re, sq_im = sum_re;
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<Eigen::VectorXcd>> psi(labels.size(), std::vector<Eigen::VectorXcd>(nm));
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t m = 0; m < nm; ++m) {
            const double sigma = std::sqrt(0.5 * occupations[m]);
            const cplx alpha{sigma * gauss(rng), sigma * gauss(rng)};
            const Eigen::VectorXcd v = coherent_state(alpha, dim);
            for (std::size_t a = 0; a < labels.size(); ++a) {
                psi[a][m] = prop[a][m] * v;
                const double leak = top_level_population(psi[a][m]);
                if (leak > leakage_limit) throw TruncationError(leak, m);
            }
        }
        for (Eigen::Index a = 0; a < nl; ++a)
            for (Eigen::Index b = 0; b < nl; ++b) {
                cplx overlap{1.0, 0.0};
                for (std::size_t m = 0; m < nm; ++m)
                    overlap *= psi[static_cast<std::size_t>(b)][m].dot(psi[static_cast<std::size_t>(a)][m]);
                sum_re(a, b) += overlap.real();
                sum_im(a, b) += overlap.imag();
                sq_re(a, b) += overlap.real() * overlap.real();
                sq_im(a, b) += overlap.imag() * overlap.imag();
            }
    }
    const double n = static_cast<double>(samples);
    for (Eigen::Index a = 0; a < nl; ++a)
        for (Eigen::Index b = 0; b < nl; ++b) {
            const double mre = sum_re(a, b) / n, mim = sum_im(a, b) / n;
            const double vre = std::max(0.0, sq_re(a, b) / n - mre * mre) * n / (n - 1.0);
            const double vim = std::max(0.0, sq_im(a, b) / n - mim * mim) * n / (n - 1.0);
            const cplx c = amps[static_cast<std::size_t>(a)] * std::conj(amps[static_cast<std::size_t>(b)]);
            out.rho(a, b) = c * cplx{mre, mim};
            out.std_error(a, b) = std::abs(c) * std::sqrt((vre + vim) / n);
        }
    return out;
}

}  // namespace qreg::oracle
