#pragma once

// Qubit register geometry: an ideal cubic lattice R_l with spacing d, plus a
// quenched random displacement delta_l per site, r_l = R_l + delta_l.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qreg {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

struct LatticeDims {
    long long l1 = 1;
    long long l2 = 1;
    long long l3 = 1;

    std::size_t size() const {
        return static_cast<std::size_t>(l1) * static_cast<std::size_t>(l2) *
               static_cast<std::size_t>(l3);
    }
    bool operator==(const LatticeDims&) const = default;
};

// Flat site index; axis 1 runs fastest so a 1-D register (L,1,1) is indexed 0..L-1.
inline std::size_t site_index(const LatticeDims& dims, long long a, long long b, long long c) {
    return static_cast<std::size_t>(a + dims.l1 * (b + dims.l2 * c));
}

inline std::vector<Vec3> build_lattice(const LatticeDims& dims, double d) {
    if (dims.l1 < 1 || dims.l2 < 1 || dims.l3 < 1)
        throw std::invalid_argument("build_lattice: every lattice dimension must be >= 1");
    if (!(d > 0.0) || !std::isfinite(d))
        throw std::invalid_argument("build_lattice: lattice constant must be positive");

    std::vector<Vec3> sites(dims.size());
    for (long long c = 0; c < dims.l3; ++c)
        for (long long b = 0; b < dims.l2; ++b)
            for (long long a = 0; a < dims.l1; ++a)
                sites[site_index(dims, a, b, c)] = {static_cast<double>(a) * d,
                                                    static_cast<double>(b) * d,
                                                    static_cast<double>(c) * d};
    return sites;
}

// Isotropic Gaussian displacement, standard deviation delta/sqrt(3) per axis,
// so that sqrt(<|delta_l|^2>) = delta.
inline std::vector<Vec3> apply_disorder(std::span<const Vec3> ideal, double delta,
                                        std::uint64_t seed) {
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("apply_disorder: disorder amplitude must be >= 0");

    std::vector<Vec3> out(ideal.begin(), ideal.end());
    if (delta == 0.0) return out;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> axis(0.0, delta / std::sqrt(3.0));
    for (auto& r : out)
        for (double& x : r) x += axis(rng);
    return out;
}

struct RegisterGeometry {
    LatticeDims dims;
    double spacing = 1.0;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::vector<Vec3> ideal;
    std::vector<Vec3> positions;

    std::size_t size() const { return positions.size(); }

    static RegisterGeometry make(const LatticeDims& dims, double spacing, double delta,
                                 std::uint64_t seed) {
        RegisterGeometry g;
        g.dims = dims;
        g.spacing = spacing;
        g.delta = delta;
        g.seed = seed;
        g.ideal = build_lattice(dims, spacing);
        g.positions = apply_disorder(g.ideal, delta, seed);
        return g;
    }

    // Same lattice, fresh disorder realisation.
    RegisterGeometry resampled(std::uint64_t new_seed) const {
        RegisterGeometry g = *this;
        g.seed = new_seed;
        g.positions = apply_disorder(ideal, delta, new_seed);
        return g;
    }
};

}  // namespace qreg
