#pragma once

// State files: one basis label per line, "<label> <Re c> <Im c>", with '#'
// comments and blank lines ignored.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qreg/basis.hpp"
#include "qreg/format.hpp"

namespace qreg {

constexpr double state_file_norm_tolerance = 1e-9;

// Throws std::invalid_argument naming the line on malformed input or when
// sum |c|^2 differs from 1 by more than 1e-9. The accepted state is
// renormalised exactly.
inline RegisterState parse_state_text(std::string_view text) {
    std::vector<std::pair<BasisLabel, cplx>> terms;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> parts;
        for (std::string p; fields >> p;) parts.push_back(p);
        if (parts.empty()) continue;
        const std::string where = "state line " + std::to_string(line_no) + ": ";
        if (parts.size() != 3) throw std::invalid_argument(where + "expected '<label> <re> <im>'");
        const auto re = parse_double(parts[1]);
        const auto im = parse_double(parts[2]);
        if (!re || !im) throw std::invalid_argument(where + "amplitude is not a number");
        try {
            terms.emplace_back(BasisLabel::parse(parts[0]), cplx{*re, *im});
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + e.what());
        }
        if (terms.back().first.size() != terms.front().first.size())
            throw std::invalid_argument(where + "label length differs from the first entry");
    }
    if (terms.empty()) throw std::invalid_argument("state file has no entries");
    double n = 0.0;
    for (const auto& t : terms) n += std::norm(t.second);
    if (std::abs(n - 1.0) > state_file_norm_tolerance)
        throw std::invalid_argument("state is not normalised: sum |c|^2 = " + format_number(n, 17));
    return RegisterState::normalized(std::move(terms));
}

inline std::string format_state(const RegisterState& state, int precision = 12) {
    std::string out;
    for (const auto& [label, amp] : state.terms())
        out += label.str() + " " + format_number(amp.real(), precision) + " " +
               format_number(amp.imag(), precision) + "\n";
    return out;
}

}  // namespace qreg
