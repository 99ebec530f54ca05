#pragma once

// Pairing encodings that place each logical qubit on two physical qubits
// whose bath phases cancel:
//   adjacent pairs   |s> -> |s, -s>               (sites 2q, 2q+1)
//   modulated pairs  |s> -> |s, s (-1)^(n+1)>     (sites l, l+m)
// with m, n chosen so that exp(i kbar m d) ~ (-1)^n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qreg/basis.hpp"
#include "qreg/bath.hpp"
#include "qreg/dephasing.hpp"
#include "qreg/geometry.hpp"

namespace qreg {

using SitePair = std::pair<std::size_t, std::size_t>;

// A pairing code: logical qubit q lives on pairs[q] = (first, partner). The
// partner carries spin s * partner_sign. Physical sites not covered by any
// pair are idle and held at +1.
struct PairCode {
    std::vector<SitePair> pairs;
    std::size_t physical_size = 0;
    int partner_sign = -1;

    std::size_t logical_size() const { return pairs.size(); }
};

// Logical qubit q -> sites (2q, 2q+1).
inline PairCode adjacent_code(std::size_t logical_qubits) {
    if (logical_qubits < 1) throw std::invalid_argument("adjacent_code: need at least one logical qubit");
    PairCode c;
    c.physical_size = 2 * logical_qubits;
    for (std::size_t q = 0; q < logical_qubits; ++q) c.pairs.emplace_back(2 * q, 2 * q + 1);
    c.partner_sign = -1;
    return c;
}

// Disjoint cover by blocks of 2m sites; within a block site l pairs with l+m.
inline std::vector<SitePair> block_pairs(long long m, std::size_t logical_qubits) {
    if (m < 1) throw std::invalid_argument("block_pairs: m must be >= 1");
    const auto mm = static_cast<std::size_t>(m);
    std::vector<SitePair> pairs;
    for (std::size_t q = 0; q < logical_qubits; ++q) {
        const std::size_t first = 2 * mm * (q / mm) + q % mm;
        pairs.emplace_back(first, first + mm);
    }
    return pairs;
}

struct PairingPlan {
    long long m = 1;
    long long n = 0;
    double residual = 0.0;  // |m kbar d / pi - n|
    std::size_t logical_qubits = 1;
    std::size_t physical_size = 2;
    std::vector<SitePair> pairs;
};

struct PairingResult {
    std::optional<PairingPlan> plan;  // empty: no (m, n) within tolerance
    long long best_m = 0;             // closest candidate seen, for diagnostics
    long long best_n = 0;
    double best_residual = 0.0;

    bool found() const { return plan.has_value(); }
};

// Smallest m <= m_max for which an integer n gives |m kbar d / pi - n| <= eps_tol.
inline PairingResult find_pairing(double kbar, double d, long long m_max, double eps_tol,
                                  std::size_t logical_qubits = 1) {
    if (m_max < 1) throw std::invalid_argument("find_pairing: m_max must be >= 1");
    if (!(eps_tol > 0.0)) throw std::invalid_argument("find_pairing: eps_tol must be > 0");
    if (!(kbar >= 0.0) || !(d > 0.0)) throw std::invalid_argument("find_pairing: need kbar >= 0 and d > 0");
    if (logical_qubits < 1) throw std::invalid_argument("find_pairing: need at least one logical qubit");

    PairingResult result;
    result.best_residual = std::numeric_limits<double>::infinity();
    const double ratio = kbar * d / std::numbers::pi;
    for (long long m = 1; m <= m_max; ++m) {
        const double x = static_cast<double>(m) * ratio;
        // nearest integer; ceil(x - 0.5) takes the smaller n on a half-integer tie
        const double n = std::ceil(x - 0.5);
        const double eps = std::abs(x - n);
        if (eps < result.best_residual) {
            result.best_residual = eps;
            result.best_m = m;
            result.best_n = static_cast<long long>(n);
        }
        if (eps <= eps_tol) {
            PairingPlan p;
            p.m = m;
            p.n = static_cast<long long>(n);
            p.residual = eps;
            p.logical_qubits = logical_qubits;
            p.pairs = block_pairs(m, logical_qubits);
            const auto mm = static_cast<std::size_t>(m);
            p.physical_size = 2 * mm * ((logical_qubits + mm - 1) / mm);
            result.plan = std::move(p);
            return result;
        }
    }
    return result;
}

inline PairCode modulated_code(const PairingPlan& plan) {
    PairCode c;
    c.pairs = plan.pairs;
    c.physical_size = plan.physical_size;
    // partner = (-1)^n for s = -1 and (-1)^(n+1) for s = +1, i.e. s * (-1)^(n+1).
    c.partner_sign = (plan.n % 2 == 0) ? -1 : 1;
    return c;
}

inline BasisLabel encode(const PairCode& code, const BasisLabel& logical) {
    if (logical.size() != code.logical_size())
        throw std::invalid_argument("encode: logical label has " + std::to_string(logical.size()) +
                                    " qubits, code expects " + std::to_string(code.logical_size()));
    std::vector<int> phys(code.physical_size, 1);
    for (std::size_t q = 0; q < code.pairs.size(); ++q) {
        const auto [a, b] = code.pairs[q];
        phys.at(a) = logical[q];
        phys.at(b) = logical[q] * code.partner_sign;
    }
    return BasisLabel(std::move(phys));
}

// Amplitudes carry over unchanged; the map is injective so norms are kept.
inline RegisterState encode(const PairCode& code, const RegisterState& logical) {
    std::vector<std::pair<BasisLabel, cplx>> terms;
    for (const auto& [label, amp] : logical.terms()) terms.emplace_back(encode(code, label), amp);
    return RegisterState::make(std::move(terms));
}

inline BasisLabel encode_adjacent(const BasisLabel& logical) {
    return encode(adjacent_code(logical.size()), logical);
}
inline RegisterState encode_adjacent(const RegisterState& logical) {
    return encode(adjacent_code(logical.qubits()), logical);
}
inline BasisLabel encode_modulated(const BasisLabel& logical, const PairingPlan& plan) {
    return encode(modulated_code(plan), logical);
}
inline RegisterState encode_modulated(const RegisterState& logical, const PairingPlan& plan) {
    return encode(modulated_code(plan), logical);
}

struct DecodeResult {
    BasisLabel logical;
    std::vector<std::size_t> mismatched;  // logical qubits whose partner disagrees
};

// Reads the first member of each pair. Partner disagreement is reported, not corrected.
inline DecodeResult decode(const PairCode& code, const BasisLabel& physical) {
    if (physical.size() != code.physical_size)
        throw std::invalid_argument("decode: physical label has the wrong length");
    std::vector<int> logical;
    DecodeResult r;
    for (std::size_t q = 0; q < code.pairs.size(); ++q) {
        const auto [a, b] = code.pairs[q];
        logical.push_back(physical[a]);
        if (physical[b] != physical[a] * code.partner_sign) r.mismatched.push_back(q);
    }
    r.logical = BasisLabel(std::move(logical));
    return r;
}

struct Residual {
    double max_eta = 0.0;
    double max_abs_phi = 0.0;
};

// Largest eta and |phi| over all ordered pairs of encoded basis labels.
inline Residual subdecoherence_residual(const PairCode& code, std::span<const Vec3> positions,
                                        const BathSpectrum& bath, double t,
                                        std::span<const BasisLabel> logical_labels) {
    if (positions.size() != code.physical_size)
        throw std::invalid_argument("subdecoherence_residual: geometry size does not match the code");
    std::vector<BasisLabel> encoded;
    for (const auto& l : logical_labels) encoded.push_back(encode(code, l));
    const CoherenceKernel kernel(encoded, bath, positions);
    Residual r;
    for (std::size_t a = 0; a < encoded.size(); ++a)
        for (std::size_t b = a + 1; b < encoded.size(); ++b) {
            const PairFactors f = kernel.pair(a, b, t);
            r.max_eta = std::max(r.max_eta, f.eta);
            r.max_abs_phi = std::max(r.max_abs_phi, std::abs(f.phi()));
        }
    return r;
}

// Every logical basis label of a register of n qubits (n <= 20).
inline std::vector<BasisLabel> all_labels(std::size_t n) {
    if (n > 20) throw std::invalid_argument("all_labels: register too large to enumerate");
    std::vector<BasisLabel> out;
    for (unsigned long long b = 0; b < (1ULL << n); ++b) out.push_back(BasisLabel::from_bits(n, b));
    return out;
}

}  // namespace qreg
