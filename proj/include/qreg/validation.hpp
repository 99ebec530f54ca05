#pragma once

// Small random instances checked against the truncated-Fock oracle. Shared by
// the validate-oracle command and the test suite.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qreg/basis.hpp"
#include "qreg/bath.hpp"
#include "qreg/dephasing.hpp"
#include "qreg/geometry.hpp"
#include "qreg/oracle.hpp"

namespace qreg {

struct OracleInstance {
    std::string name;
    std::vector<Vec3> positions;
    BathSpectrum bath;
    RegisterState state;
    double t = 0.0;
};

// L qubits scattered in a 2 x 2 x 2 box, `modes` plane waves with arbitrary
// directions (no inversion partners), 2 to 4 basis labels with random complex
// amplitudes, t in [1, 10].
inline OracleInstance random_oracle_instance(std::uint64_t seed, std::size_t qubits, std::size_t modes,
                                             double T) {
    if (qubits < 1 || qubits > 3) throw std::invalid_argument("random_oracle_instance: 1 to 3 qubits");
    if (modes < 1 || modes > 4) throw std::invalid_argument("random_oracle_instance: 1 to 4 modes");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uni = [&](double a, double b) { return a + (b - a) * unit(rng); };

    OracleInstance inst;
    for (std::size_t l = 0; l < qubits; ++l) inst.positions.push_back({uni(0, 2), uni(0, 2), uni(0, 2)});

    std::vector<Mode> ms;
    for (std::size_t m = 0; m < modes; ++m) {
        const double z = uni(-1, 1), a = uni(0, 2 * std::numbers::pi), s = std::sqrt(1 - z * z);
        const double kmag = uni(0.6, 1.5);
        ms.push_back({{kmag * s * std::cos(a), kmag * s * std::sin(a), kmag * z}, kmag, uni(0.005, 0.03)});
    }
    inst.bath = BathSpectrum::from_modes(1.0, T, std::move(ms), 3);

    const std::size_t space = std::size_t{1} << qubits;
    const std::size_t count = std::min<std::size_t>(space, 2 + rng() % 3);
    std::vector<unsigned long long> bits(space);
    for (std::size_t b = 0; b < space; ++b) bits[b] = b;
    std::shuffle(bits.begin(), bits.end(), rng);
    std::vector<std::pair<BasisLabel, cplx>> terms;
    for (std::size_t c = 0; c < count; ++c)
        terms.emplace_back(BasisLabel::from_bits(qubits, bits[c]), cplx{uni(-1, 1), uni(-1, 1)});
    inst.state = RegisterState::normalized(std::move(terms));
    inst.t = uni(1, 10);
    inst.name = "L" + std::to_string(qubits) + "-M" + std::to_string(modes) + (T > 0 ? "-thermal" : "-vacuum");
    return inst;
}

struct OracleComparison {
    double max_deviation = 0.0;  // max |rho_core - rho_oracle| over all entries
    double max_z = 0.0;          // max deviation / standard error (thermal runs)
    std::size_t samples = 0;
    std::size_t truncation = 0;
    bool thermal = false;

    // Vacuum: absolute 1e-4. Thermal: 3 standard errors, with a 1e-9 floor
    // for entries whose sampling error vanishes (the diagonal).
    bool passed(double abs_tol = 1e-4, double z_tol = 3.0) const {
        return thermal ? max_z <= z_tol : max_deviation <= abs_tol;
    }
};

// Integrator steps so that w_max dt <= 0.02 (fourth-order steps).
inline std::size_t oracle_steps(const BathSpectrum& bath, double t) {
    double wmax = 0.0;
    for (const Mode& m : bath.modes()) wmax = std::max(wmax, m.omega);
    return std::max<std::size_t>(100, static_cast<std::size_t>(std::ceil(wmax * t / 0.02)));
}

inline OracleComparison compare_with_oracle(const OracleInstance& inst, std::size_t samples = 10000,
                                            std::uint64_t seed = 1) {
    const ReducedDensity core = evolve(inst.state, inst.t, inst.bath, inst.positions);
    const auto couplings = oracle::Couplings::plane_wave(inst.bath, inst.positions);
    std::vector<double> occ;
    for (const Mode& m : inst.bath.modes()) occ.push_back(thermal_occupation(m.omega, inst.bath.temperature()));
    oracle::ThermalOptions opt;
    opt.samples = samples;
    opt.steps = oracle_steps(inst.bath, inst.t);
    opt.seed = seed;
    const auto ref = oracle::thermal_reduced_density(inst.state, couplings, occ, inst.t, opt);

    OracleComparison c;
    c.samples = ref.samples;
    c.truncation = ref.truncation;
    c.thermal = inst.bath.temperature() > 0.0;
    for (Eigen::Index a = 0; a < ref.rho.rows(); ++a)
        for (Eigen::Index b = 0; b < ref.rho.cols(); ++b) {
            const double dev = std::abs(core.rho(a, b) - ref.rho(a, b));
            c.max_deviation = std::max(c.max_deviation, dev);
            if (c.thermal) c.max_z = std::max(c.max_z, dev / std::max(ref.std_error(a, b), 1e-9));
        }
    return c;
}

}  // namespace qreg
