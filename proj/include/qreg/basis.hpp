#pragma once

// Computational-basis labels (strings of sigma^z eigenvalues +-1) and pure
// register states expanded over them.

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qreg {

using cplx = std::complex<double>;

class BasisLabel {
public:
    BasisLabel() = default;

    explicit BasisLabel(std::vector<int> spins) : spins_(std::move(spins)) {
        for (int s : spins_)
            if (s != 1 && s != -1) throw std::invalid_argument("BasisLabel: spins must be +1 or -1");
    }
    BasisLabel(std::initializer_list<int> spins) : BasisLabel(std::vector<int>(spins)) {}

    // Accepts '+'/'-' characters, e.g. "+-+".
    static BasisLabel parse(std::string_view text) {
        if (text.empty()) throw std::invalid_argument("BasisLabel: empty label");
        std::vector<int> spins;
        spins.reserve(text.size());
        for (char c : text) {
            if (c == '+')
                spins.push_back(1);
            else if (c == '-')
                spins.push_back(-1);
            else
                throw std::invalid_argument("BasisLabel: invalid character '" + std::string(1, c) +
                                            "' (expected '+' or '-')");
        }
        return BasisLabel(std::move(spins));
    }

    // All-up / all-down labels of length n.
    static BasisLabel uniform(std::size_t n, int spin) { return BasisLabel(std::vector<int>(n, spin)); }

    // Label from the bits of `bits`: bit l set means spin -1 at site l.
    static BasisLabel from_bits(std::size_t n, unsigned long long bits) {
        std::vector<int> spins(n);
        for (std::size_t l = 0; l < n; ++l) spins[l] = ((bits >> l) & 1ULL) ? -1 : 1;
        return BasisLabel(std::move(spins));
    }

    std::string str() const {
        std::string s;
        s.reserve(spins_.size());
        for (int v : spins_) s.push_back(v > 0 ? '+' : '-');
        return s;
    }

    std::size_t size() const { return spins_.size(); }
    int operator[](std::size_t l) const { return spins_[l]; }
    const std::vector<int>& spins() const { return spins_; }

    BasisLabel flipped(std::size_t l) const {
        BasisLabel out = *this;
        out.spins_.at(l) = -out.spins_.at(l);
        return out;
    }
    BasisLabel negated() const {
        BasisLabel out = *this;
        for (int& s : out.spins_) s = -s;
        return out;
    }

    auto operator<=>(const BasisLabel&) const = default;
    bool operator==(const BasisLabel&) const = default;

private:
    std::vector<int> spins_;
};

inline std::size_t differing_sites(const BasisLabel& i, const BasisLabel& j) {
    if (i.size() != j.size()) throw std::invalid_argument("label length mismatch");
    std::size_t n = 0;
    for (std::size_t l = 0; l < i.size(); ++l) n += (i[l] != j[l]);
    return n;
}

// Pure register state sum_i c_i |i>. Terms are kept ordered by label so every
// traversal is deterministic.
class RegisterState {
public:
    static constexpr double norm_tolerance = 1e-12;

    RegisterState() = default;

    // Builds and validates: uniform label length, at least one nonzero
    // amplitude, sum |c|^2 = 1 within `tol`.
    static RegisterState make(std::vector<std::pair<BasisLabel, cplx>> terms,
                              double tol = norm_tolerance) {
        RegisterState s;
        for (auto& [label, amp] : terms) {
            if (!s.terms_.empty() && label.size() != s.terms_.begin()->first.size())
                throw std::invalid_argument("RegisterState: basis labels have different lengths");
            if (amp == cplx{}) continue;
            auto [it, fresh] = s.terms_.emplace(label, amp);
            if (!fresh) it->second += amp;
        }
        if (s.terms_.empty()) throw std::invalid_argument("RegisterState: no nonzero amplitude");
        const double n = s.norm_squared();
        if (std::abs(n - 1.0) > tol)
            throw std::invalid_argument("RegisterState: state is not normalised (sum |c|^2 = " +
                                        std::to_string(n) + ")");
        return s;
    }

    // Merges repeated labels, then normalises.
    static RegisterState normalized(std::vector<std::pair<BasisLabel, cplx>> terms) {
        std::map<BasisLabel, cplx> merged;
        for (auto& [label, amp] : terms) merged[label] += amp;
        double n = 0.0;
        for (const auto& t : merged) n += std::norm(t.second);
        if (!(n > 0.0)) throw std::invalid_argument("RegisterState: no nonzero amplitude");
        const double s = 1.0 / std::sqrt(n);
        std::vector<std::pair<BasisLabel, cplx>> scaled;
        for (auto& [label, amp] : merged) scaled.emplace_back(label, amp * s);
        return make(std::move(scaled));
    }

    static RegisterState basis(const BasisLabel& label) { return make({{label, cplx{1.0, 0.0}}}); }

    // (|+...+> + |-...->)/sqrt(2)
    static RegisterState cat(std::size_t n) {
        const double a = 1.0 / std::sqrt(2.0);
        return make({{BasisLabel::uniform(n, 1), a}, {BasisLabel::uniform(n, -1), a}});
    }

    // (|+...+> + |-+...+>)/sqrt(2): coherence across a single flipped qubit.
    static RegisterState single_flip(std::size_t n) {
        const double a = 1.0 / std::sqrt(2.0);
        const auto up = BasisLabel::uniform(n, 1);
        return make({{up, a}, {up.flipped(0), a}});
    }

    std::size_t qubits() const { return terms_.begin()->first.size(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<BasisLabel, cplx>& terms() const { return terms_; }

    cplx amplitude(const BasisLabel& label) const {
        auto it = terms_.find(label);
        return it == terms_.end() ? cplx{} : it->second;
    }

    double norm_squared() const {
        double n = 0.0;
        for (const auto& [label, amp] : terms_) n += std::norm(amp);
        return n;
    }

    std::vector<BasisLabel> labels() const {
        std::vector<BasisLabel> out;
        out.reserve(terms_.size());
        for (const auto& [label, amp] : terms_) out.push_back(label);
        return out;
    }

private:
    std::map<BasisLabel, cplx> terms_;
};

}  // namespace qreg
