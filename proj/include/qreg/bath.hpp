#pragma once

// Bosonic dephasing bath: linear dispersion omega = v|k|, coupling spectrum
// |g_k|^2, thermal occupation and the spectral moments used to classify the
// decoherence regime. Units: hbar = k_B = 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qreg/detail/numeric.hpp"
#include "qreg/geometry.hpp"

namespace qreg {

struct Mode {
    Vec3 k{};
    double omega = 0.0;
    double g2 = 0.0;  // |g_k|^2 including the quadrature weight
};

// Bose-Einstein occupation 1/(exp(omega/T) - 1); zero at T = 0.
inline double thermal_occupation(double omega, double T) {
    if (!(omega > 0.0)) throw std::invalid_argument("thermal_occupation: omega must be > 0");
    if (!(T >= 0.0)) throw std::invalid_argument("thermal_occupation: T must be >= 0");
    if (T == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / T);
}

// coth(omega / 2T) = 1 + 2 <N>; exactly 1 at T = 0.
inline double thermal_coth(double omega, double T) {
    if (T == 0.0) return 1.0;
    return 1.0 + 2.0 * thermal_occupation(omega, T);
}

enum class CouplingShape { power_law, gaussian_peak };

// |g(omega)|^2 per unit frequency.
//   power_law:      A * omega^p * exp(-omega / cutoff)
//   gaussian_peak:  A * omega^2 * exp(-(omega - center)^2 / (2 width^2)),
//                   i.e. the weight |g|^2/omega^2 is a Gaussian of standard
//                   deviation `width` around `center`.
struct CouplingForm {
    CouplingShape shape = CouplingShape::power_law;
    double A = 1.0;
    double p = 1.0;
    double cutoff = 1.0;
    double center = 1.0;
    double width = 0.1;

    static CouplingForm ohmic(double A, double cutoff) {
        return {CouplingShape::power_law, A, 1.0, cutoff, 1.0, 0.1};
    }
    static CouplingForm gaussian(double A, double center, double width) {
        CouplingForm f;
        f.shape = CouplingShape::gaussian_peak;
        f.A = A;
        f.center = center;
        f.width = width;
        return f;
    }

    void validate() const {
        if (!(A >= 0.0)) throw std::invalid_argument("coupling amplitude A must be >= 0");
        if (shape == CouplingShape::power_law) {
            if (!(cutoff > 0.0)) throw std::invalid_argument("coupling cutoff must be > 0");
            if (!std::isfinite(p)) throw std::invalid_argument("coupling exponent p must be finite");
        } else {
            if (!(center > 0.0)) throw std::invalid_argument("gaussian center must be > 0");
            if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be > 0");
        }
    }

    double operator()(double omega) const {
        if (shape == CouplingShape::power_law)
            return A * std::pow(omega, p) * std::exp(-omega / cutoff);
        const double z = (omega - center) / width;
        return A * omega * omega * std::exp(-0.5 * z * z);
    }
};

class BathSpectrum {
public:
    BathSpectrum() = default;

    // Validates: omega > 0, omega = v|k| (relative 1e-9), g2 >= 0 for every mode.
    static BathSpectrum from_modes(double v, double T, std::vector<Mode> modes,
                                   int dimensionality = 3) {
        if (!(v > 0.0)) throw std::invalid_argument("bath velocity v must be > 0");
        if (!(T >= 0.0)) throw std::invalid_argument("bath temperature T must be >= 0");
        if (dimensionality != 1 && dimensionality != 3)
            throw std::invalid_argument("bath dimensionality must be 1 or 3");
        for (const Mode& m : modes) {
            if (!(m.omega > 0.0) || !std::isfinite(m.omega))
                throw std::invalid_argument("bath mode frequency must be > 0");
            if (!(m.g2 >= 0.0) || !std::isfinite(m.g2))
                throw std::invalid_argument("bath mode weight g2 must be >= 0");
            const double kw = v * norm(m.k);
            if (std::abs(kw - m.omega) > 1e-9 * m.omega)
                throw std::invalid_argument("bath mode violates omega = v|k|");
        }
        BathSpectrum b;
        b.v_ = v;
        b.T_ = T;
        b.dimensionality_ = dimensionality;
        b.modes_ = std::move(modes);
        return b;
    }

    double velocity() const { return v_; }
    double temperature() const { return T_; }
    int dimensionality() const { return dimensionality_; }
    std::span<const Mode> modes() const { return modes_; }
    std::size_t size() const { return modes_.size(); }

    // Qubit splitting omega_0 of the full Hamiltonian. It drops out of the
    // interaction-picture dynamics and is carried only as metadata.
    double qubit_splitting = 0.0;

    BathSpectrum with_temperature(double T) const {
        return from_modes(v_, T, modes_, dimensionality_);
    }

private:
    double v_ = 1.0;
    double T_ = 0.0;
    int dimensionality_ = 3;
    std::vector<Mode> modes_;
};

// Adds the mirror mode -k for each mode, splitting the weight evenly.
inline std::vector<Mode> with_inversion_partners(std::span<const Mode> modes) {
    std::vector<Mode> out;
    out.reserve(2 * modes.size());
    for (const Mode& m : modes) {
        out.push_back({m.k, m.omega, 0.5 * m.g2});
        out.push_back({scaled(m.k, -1.0), m.omega, 0.5 * m.g2});
    }
    return out;
}

namespace detail {

// Spherical Fibonacci directions over the upper hemisphere (z > 0), rotated
// in azimuth by `twist`. Paired with their antipodes by the caller.
inline std::vector<Vec3> hemisphere_directions(std::size_t count, double twist) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> dirs;
    dirs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double z = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i) + twist;
        dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return dirs;
}

}  // namespace detail

// Uniform frequency grid omega_n = n * omega_max / M, n = 1..M, carrying
// g2 = |g(omega_n)|^2 * (omega_max / M). Each frequency shell is split into
// inversion-symmetric wave vectors: (+-omega/v, 0, 0) in 1-D, or
// `directions_per_shell` antipodal Fibonacci directions in 3-D.
inline BathSpectrum discretize_spectrum(const CouplingForm& form, double v, double T,
                                        int dimensionality, std::size_t shells,
                                        double omega_max,
                                        std::size_t directions_per_shell = 16) {
    form.validate();
    if (shells < 1) throw std::invalid_argument("discretize_spectrum: mode count must be >= 1");
    if (!(omega_max > 0.0)) throw std::invalid_argument("discretize_spectrum: omega_max must be > 0");
    if (!(v > 0.0)) throw std::invalid_argument("discretize_spectrum: v must be > 0");
    if (dimensionality != 1 && dimensionality != 3)
        throw std::invalid_argument("discretize_spectrum: dimensionality must be 1 or 3");
    if (dimensionality == 3 && (directions_per_shell < 2 || directions_per_shell % 2 != 0))
        throw std::invalid_argument("discretize_spectrum: directions per shell must be even and >= 2");

    const double step = omega_max / static_cast<double>(shells);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Mode> modes;
    modes.reserve(shells * (dimensionality == 1 ? 2 : directions_per_shell));

    for (std::size_t n = 1; n <= shells; ++n) {
        const double omega = step * static_cast<double>(n);
        const double weight = form(omega) * step;
        const double kmag = omega / v;
        if (dimensionality == 1) {
            modes.push_back({{kmag, 0.0, 0.0}, omega, 0.5 * weight});
            modes.push_back({{-kmag, 0.0, 0.0}, omega, 0.5 * weight});
        } else {
            const std::size_t pairs = directions_per_shell / 2;
            const auto dirs = detail::hemisphere_directions(pairs, golden * static_cast<double>(n));
            const double w = weight / static_cast<double>(directions_per_shell);
            for (const Vec3& u : dirs) {
                modes.push_back({scaled(u, kmag), omega, w});
                modes.push_back({scaled(u, -kmag), omega, w});
            }
        }
    }
    return BathSpectrum::from_modes(v, T, std::move(modes), dimensionality);
}

struct SpectralMoments {
    double mean1 = 0.0;
    double width1 = 0.0;
    double mean2 = 0.0;
    double width2 = 0.0;
};

namespace detail {

struct MeanWidth {
    double mean;
    double width;
};

inline MeanWidth weighted_mean_width(std::span<const double> omega, std::span<const double> w) {
    std::vector<double> w0(w.begin(), w.end());
    const double total = pairwise_sum(w0);
    if (!(total > 0.0))
        throw std::invalid_argument("spectral_moments: weights are all zero, distribution not normalisable");
    std::vector<double> w1(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) w1[i] = w[i] * omega[i];
    const double mean = pairwise_sum(w1) / total;
    std::vector<double> w2(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double dz = omega[i] - mean;
        w2[i] = w[i] * dz * dz;
    }
    return {mean, std::sqrt(std::max(0.0, pairwise_sum(w2) / total))};
}

}  // namespace detail

// Mean and standard deviation of omega under the normalised weights
//   h1 ~ g2 coth(omega/2T) / omega^2      (phase damping)
//   h2 ~ g2 / omega^2                     (Lamb phase)
// When t_ref is given the time factors (1 - cos wt) and (wt - sin wt) are
// folded in; otherwise only the time-independent envelope is used.
inline SpectralMoments spectral_moments(const BathSpectrum& bath,
                                        std::optional<double> t_ref = std::nullopt) {
    const auto modes = bath.modes();
    if (modes.empty()) throw std::invalid_argument("spectral_moments: bath has no modes");
    std::vector<double> omega(modes.size()), h1(modes.size()), h2(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const Mode& m = modes[i];
        const double env = m.g2 / (m.omega * m.omega);
        omega[i] = m.omega;
        h1[i] = env * thermal_coth(m.omega, bath.temperature());
        h2[i] = env;
        if (t_ref) {
            h1[i] *= detail::one_minus_cos(m.omega * *t_ref);
            h2[i] *= detail::x_minus_sin(m.omega * *t_ref);
        }
    }
    const auto a = detail::weighted_mean_width(omega, h1);
    const auto b = detail::weighted_mean_width(omega, h2);
    return {a.mean, a.width, b.mean, b.width};
}

}  // namespace qreg
