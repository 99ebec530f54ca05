#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "qreg/config.hpp"
#include "qreg/state_io.hpp"

using namespace qreg;

namespace {

const char* sample = R"(# register
[geometry]
dims = 2 2
d = 0.5
delta = 0.01
seed = 18446744073709551615

[bath]
v = 2
T = 0.3
dimensionality = 3

[coupling]
form = gaussian
center_k = 1.5707963267948966
width_k = 0.1

[grid]
modes = 300
directions = 8

[state]
preset = entries
entry = +-+- 0.6
entry = -+-+ 0 0.8

[run]
t1 = 25
steps = 50
pairs = 0:1
label_i = ++++
label_j = ----

[output]
precision = 9
positions = true
)";

ConfigError parse_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "no ConfigError for:\n" << text;
    return ConfigError("", "");
}

}  // namespace

TEST(Config, DefaultsFromEmptyText) {
    const auto c = parse_config("");
    EXPECT_EQ(c, RunConfig{});
    EXPECT_EQ(c.register_size(), 4u);
    EXPECT_EQ(c.state.preset, "cat");
}

TEST(Config, ParsesEverySection) {
    const auto c = parse_config(sample);
    EXPECT_EQ(c.geometry.l1, 2);
    EXPECT_EQ(c.geometry.l2, 2);
    EXPECT_EQ(c.geometry.l3, 1);
    EXPECT_EQ(c.geometry.seed, 18446744073709551615ULL);
    EXPECT_EQ(c.bath.dimensionality, 3);
    EXPECT_EQ(c.coupling.form, "gaussian");
    ASSERT_EQ(c.state.entries.size(), 2u);
    EXPECT_EQ(c.state.entries[1], (StateEntry{"-+-+", 0.0, 0.8}));
    EXPECT_EQ(c.run.pairs, "0:1");
    EXPECT_TRUE(c.output.positions);
    EXPECT_EQ(c.output.precision, 9);
}

TEST(Config, SerializeRoundTrips) {
    const auto c = parse_config(sample);
    const std::string text = serialize_config(c);
    const auto back = parse_config(text);
    EXPECT_EQ(back, c);
    EXPECT_EQ(serialize_config(back), text);
    EXPECT_EQ(config_hash(back), config_hash(c));
    EXPECT_EQ(config_hash(c).size(), 16u);
}

TEST(Config, RandomisedRoundTrip) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 200; ++n) {
        RunConfig c;
        c.geometry.d = u(rng) * 3 + 1e-3;
        c.geometry.delta = u(rng);
        c.geometry.seed = rng();
        c.bath.T = u(rng) * 1e-7;
        c.coupling.A = u(rng) / 7.0;
        c.run.t1 = 1e5 * u(rng);
        c.run.kbar = std::ldexp(u(rng), -30);
        const auto back = parse_config(serialize_config(c));
        ASSERT_EQ(back, c) << serialize_config(c);
    }
}

TEST(Config, HashTracksContent) {
    RunConfig a, b;
    b.geometry.delta = 1e-12;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a), config_hash(RunConfig{}));
}

TEST(Config, UnknownKeyIsNamed) {
    const auto e = parse_error("[geometry]\nspacing = 1\n");
    EXPECT_EQ(e.key(), "geometry.spacing");
    EXPECT_NE(std::string(e.what()).find("unknown key"), std::string::npos);
}

TEST(Config, NegativeDisorderIsNamed) {
    const auto e = parse_error("[geometry]\ndelta = -1\n");
    EXPECT_EQ(e.key(), "geometry.delta");
    EXPECT_EQ(std::string(e.what()), "geometry.delta: must be >= 0");
}

TEST(Config, BadValuesAreNamed) {
    EXPECT_EQ(parse_error("[bath]\nT = warm\n").key(), "bath.T");
    EXPECT_EQ(parse_error("[grid]\nmodes = 2.5\n").key(), "grid.modes");
    EXPECT_EQ(parse_error("[grid]\ndirections = 3\n").key(), "grid.directions");
    EXPECT_EQ(parse_error("[output]\npositions = maybe\n").key(), "output.positions");
    EXPECT_EQ(parse_error("[geometry]\ndims = 1 2 3 4\n").key(), "geometry.dims");
    EXPECT_EQ(parse_error("[geometry]\ndims = 100 100\n").key(), "geometry.dims");
    EXPECT_EQ(parse_error("[state]\npreset = entries\nentry = ++ 1\n").key(), "state.entry");
    EXPECT_EQ(parse_error("[run]\nlabel_i = ++x+\n").key(), "run.label_i");
    EXPECT_EQ(parse_error("[run]\nt0 = 5\nt1 = 1\n").key(), "run.t1");
}

TEST(Config, SyntaxErrorsCarryLineAndColumn) {
    auto e = parse_error("[geometry]\nd = 1\n  [bath\n");
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 8u);
    e = parse_error("[geometry]\n\n   d 1\n");
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 4u);
    EXPECT_EQ(std::string(e.what()).rfind("config:3:4:", 0), 0u);
    e = parse_error("d = 1\n");
    EXPECT_EQ(e.line(), 1u);
    e = parse_error("[nowhere]\n");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 2u);
}

TEST(Config, DuplicateKeyRejectedButEntriesRepeat) {
    const auto e = parse_error("[geometry]\nd = 1\n; again\nd = 2\n");
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("duplicate key 'geometry.d'"), std::string::npos);
    EXPECT_NO_THROW(parse_config("[geometry]\ndims = 1\n[state]\npreset = entries\nentry = + 1\nentry = - 0\n"));
}

TEST(StateText, ParsesAndRenormalises) {
    const auto s = parse_state_text("# comment\n+- 0.6 0\n\n-+ 0 0.8  # trailing\n");
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s.amplitude(BasisLabel::parse("-+")), (cplx{0.0, 0.8}));
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
    EXPECT_EQ(parse_state_text(format_state(s, 17)).terms(), s.terms());
}

TEST(StateText, RejectsMalformedInput) {
    auto message = [](const std::string& text) {
        try {
            parse_state_text(text);
        } catch (const std::invalid_argument& e) {
            return std::string(e.what());
        }
        return std::string("accepted");
    };
    EXPECT_EQ(message("+ 1 0\n- 0\n").rfind("state line 2:", 0), 0u);
    EXPECT_EQ(message("+ one 0\n").rfind("state line 1:", 0), 0u);
    EXPECT_EQ(message("+ 1 0\n+- 0 0\n").rfind("state line 2:", 0), 0u);
    EXPECT_NE(message("+ 0.6 0\n- 0.6 0\n").find("not normalised"), std::string::npos);
    EXPECT_NE(message("# nothing\n"), "accepted");
    EXPECT_EQ(message("+ 0.6 0\n- 0.8 1e-10\n"), "accepted");
}
