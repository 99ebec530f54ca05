#pragma once

// Regime classification (independent vs collective dephasing) and Monte Carlo
// checks of the disorder-averaged geometric factors.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qreg/basis.hpp"
#include "qreg/bath.hpp"
#include "qreg/dephasing.hpp"
#include "qreg/detail/numeric.hpp"
#include "qreg/detail/parallel.hpp"
#include "qreg/geometry.hpp"

namespace qreg {

enum class Regime { independent1, independent2, collective1, collective2, intermediate };

constexpr std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::independent1: return "Independent-1";
        case Regime::independent2: return "Independent-2";
        case Regime::collective1: return "Collective-1";
        case Regime::collective2: return "Collective-2";
        case Regime::intermediate: return "Intermediate";
    }
    return "Intermediate";
}

// ">> / <<" are taken as a factor-of-ten margin.
struct RegimeThresholds {
    double independent1 = std::numbers::pi;        // p_ind1 >= this
    double independent2 = 10.0;                    // p_ind2 >= this
    double weak_disorder = std::numbers::pi / 10;  // p_ind1 <= this for either collective case
    double collective1 = std::numbers::pi / 10;    // p_coll1 <= this
    double collective2 = 0.1;                      // p_coll2 <= this
};

struct RegimeReport {
    double p_ind1a = 0.0;   // mean1 delta / v
    double p_ind1b = 0.0;   // mean2 delta / v
    double p_ind2a = 0.0;   // width1 d / v
    double p_ind2b = 0.0;   // width2 d / v
    double p_coll1a = 0.0;  // mean1 d / v
    double p_coll1b = 0.0;  // mean2 d / v
    double p_coll2 = 0.0;   // max(width1, width2) m d / v
    long long m = 1;
    Regime classification = Regime::intermediate;
};

inline RegimeReport classify(double spacing, double delta, const SpectralMoments& mom, double v,
                             long long m, const RegimeThresholds& th = {}) {
    if (m < 1) throw std::invalid_argument("classify: pairing distance m must be >= 1");
    if (!(v > 0.0)) throw std::invalid_argument("classify: v must be > 0");
    RegimeReport r;
    r.m = m;
    r.p_ind1a = mom.mean1 * delta / v;
    r.p_ind1b = mom.mean2 * delta / v;
    r.p_ind2a = mom.width1 * spacing / v;
    r.p_ind2b = mom.width2 * spacing / v;
    r.p_coll1a = mom.mean1 * spacing / v;
    r.p_coll1b = mom.mean2 * spacing / v;
    r.p_coll2 = std::max(mom.width1, mom.width2) * static_cast<double>(m) * spacing / v;

    const bool weak_disorder = r.p_ind1a <= th.weak_disorder && r.p_ind1b <= th.weak_disorder;
    if (r.p_ind1a >= th.independent1 && r.p_ind1b >= th.independent1)
        r.classification = Regime::independent1;
    else if (r.p_ind2a >= th.independent2 && r.p_ind2b >= th.independent2)
        r.classification = Regime::independent2;
    else if (weak_disorder && r.p_coll1a <= th.collective1 && r.p_coll1b <= th.collective1)
        r.classification = Regime::collective1;
    else if (weak_disorder && r.p_coll2 <= th.collective2)
        r.classification = Regime::collective2;
    else
        r.classification = Regime::intermediate;
    return r;
}

inline RegimeReport classify(const RegisterGeometry& geometry, const SpectralMoments& mom, double v,
                             long long m, const RegimeThresholds& th = {}) {
    return classify(geometry.spacing, geometry.delta, mom, v, m, th);
}

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

namespace detail {

inline MeanEstimate mean_and_stderr(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = pairwise_sum(xs) / n;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
    const double var = pairwise_sum(sq) / (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

}  // namespace detail

struct LambdaAverages {
    MeanEstimate lambda1;
    MeanEstimate lambda2;
    std::size_t samples = 0;
};

// Averages lambda1/lambda2 for a fixed wave vector over `samples` quenched
// disorder realisations of `geometry`. Sample s uses seed mix(seed, s), so the
// result does not depend on `threads`.
inline LambdaAverages disorder_average_lambdas(const BasisLabel& i, const BasisLabel& j, const Vec3& k,
                                               const RegisterGeometry& geometry, std::size_t samples,
                                               std::uint64_t seed, std::size_t threads = 1) {
    if (samples < 2) throw std::invalid_argument("disorder_average_lambdas: need at least 2 samples");
    detail::check_sizes(i, j, geometry.ideal);
    std::vector<double> l1(samples), l2(samples);
    detail::parallel_for(samples, threads, [&](std::size_t s) {
        const auto pos = apply_disorder(geometry.ideal, geometry.delta, detail::mix_seed(seed, s));
        l1[s] = lambda1(i, j, k, pos);
        l2[s] = lambda2(i, j, k, pos);
    });
    return {detail::mean_and_stderr(l1), detail::mean_and_stderr(l2), samples};
}

struct FactorAverages {
    MeanEstimate eta;
    MeanEstimate phi;
    std::size_t samples = 0;
};

// Disorder average of the full mode-summed eta and phi of one coherence pair.
inline FactorAverages disorder_average_factors(const BasisLabel& i, const BasisLabel& j, double t,
                                               const BathSpectrum& bath, const RegisterGeometry& geometry,
                                               std::size_t samples, std::uint64_t seed,
                                               std::size_t threads = 1) {
    if (samples < 2) throw std::invalid_argument("disorder_average_factors: need at least 2 samples");
    std::vector<double> eta(samples), phi(samples);
    detail::parallel_for(samples, threads, [&](std::size_t s) {
        const auto pos = apply_disorder(geometry.ideal, geometry.delta, detail::mix_seed(seed, s));
        const PairFactors f = pair_factors(i, j, t, bath, pos);
        eta[s] = f.eta;
        phi[s] = f.phi();
    });
    return {detail::mean_and_stderr(eta), detail::mean_and_stderr(phi), samples};
}

// Gaussian estimate exp[-(dw s d / v)^2] of |<exp(i s d w / v)>|.
inline double fourier_suppression(double width, double s, double d, double v) {
    if (!(width >= 0.0) || !(s >= 0.0) || !(d > 0.0) || !(v > 0.0))
        throw std::invalid_argument("fourier_suppression: arguments must be positive");
    const double u = width * s * d / v;
    return std::exp(-u * u);
}

enum class SpectralWeight { damping, lamb };

// Exact |sum_k h(w_k) exp(i s d w_k / v)| for the normalised weight h of a
// discretised bath.
inline double grid_fourier_average(const BathSpectrum& bath, double s, double d,
                                   SpectralWeight which = SpectralWeight::lamb) {
    const double tau = s * d / bath.velocity();
    std::vector<double> w, re, im;
    for (const Mode& m : bath.modes()) {
        double h = m.g2 / (m.omega * m.omega);
        if (which == SpectralWeight::damping) h *= thermal_coth(m.omega, bath.temperature());
        w.push_back(h);
        re.push_back(h * std::cos(tau * m.omega));
        im.push_back(h * std::sin(tau * m.omega));
    }
    const double total = detail::pairwise_sum(w);
    if (!(total > 0.0)) throw std::invalid_argument("grid_fourier_average: weights are all zero");
    return std::hypot(detail::pairwise_sum(re), detail::pairwise_sum(im)) / total;
}

// x(t) = sum_k |g_k|^2 coth(w/2T) (1 - cos wt)/w^2
inline double damping_scale(double t, const BathSpectrum& bath) {
    detail::check_time(t);
    std::vector<double> terms;
    terms.reserve(bath.size());
    for (const Mode& m : bath.modes())
        terms.push_back(m.g2 * thermal_coth(m.omega, bath.temperature()) *
                        detail::one_minus_cos(m.omega * t) / (m.omega * m.omega));
    return detail::pairwise_sum(terms);
}

// y(t) = sum_k |g_k|^2 (wt - sin wt)/w^2, the phase counterpart of x(t).
inline double phase_scale(double t, const BathSpectrum& bath) {
    detail::check_time(t);
    std::vector<double> terms;
    terms.reserve(bath.size());
    for (const Mode& m : bath.modes())
        terms.push_back(m.g2 * detail::x_minus_sin(m.omega * t) / (m.omega * m.omega));
    return detail::pairwise_sum(terms);
}

struct IndependentFactors {
    double eta = 0.0;
    double phi = 0.0;
};

// Fully decorrelated qubits: eta = x(t) sum_l (i_l - j_l)^2, phi = 0.
inline IndependentFactors independent_limit_factors(const BasisLabel& i, const BasisLabel& j, double t,
                                                    const BathSpectrum& bath) {
    if (i.size() != j.size()) throw std::invalid_argument("basis labels have different lengths");
    double weight = 0.0;
    for (std::size_t l = 0; l < i.size(); ++l) weight += (i[l] - j[l]) * (i[l] - j[l]);
    if (weight == 0.0) return {};
    return {damping_scale(t, bath) * weight, 0.0};
}

}  // namespace qreg
