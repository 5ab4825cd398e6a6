#include <doctest.h>

#include "stochwave/config.hpp"
#include "stochwave/errors.hpp"

using namespace stochwave;

namespace {

std::string pointer_of(const std::string& text)
{
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.pointer();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("minimal config gets defaults")
{
    const RunConfig c = parse_config_text(R"({"grid": {"M": 4, "N": 8, "T": 1.5}})");
    CHECK(c.grid.M == 4);
    CHECK(c.grid.N == 8);
    CHECK(c.weight.T == 1.5);
    CHECK(c.paths == 1);
    CHECK(c.g_mode == SourceMode::SpaceTime);
    CHECK(c.data.y0.kind == DataKind::Zero);
    CHECK(*c.a.constant == 0.0);
    CHECK_FALSE(c.sweep.has_value());
}

TEST_CASE("errors name the JSON pointer")
{
    CHECK(pointer_of(R"({"grid": {"N": 8, "T": 1}})") == "/grid/M");
    CHECK(pointer_of(R"({"grid": {"M": "three", "N": 8, "T": 1}})") == "/grid/M");
    CHECK(pointer_of(R"({"grid": {"M": 4, "N": 8, "T": 1}, "extra": 1})") == "/extra");
    CHECK(pointer_of(R"({"grid": {"M": 4, "N": 8, "T": 1, "dx": 1}})") == "/grid/dx");
    CHECK(pointer_of(R"({"grid": {"M": 4, "N": 8, "T": 1}, "mc": {"paths": 0}})") == "/mc/paths");
    CHECK(pointer_of(R"({"grid": {"M": 4, "N": 8, "T": 1},
                        "coefficients": {"a": {"preset": "nope"}}})") == "/coefficients/a/preset");
    CHECK(pointer_of(R"({"grid": {"M": 4, "N": 8, "T": 1},
                        "data": {"g": {"sine": {"mode": 0}}}})") == "/data/g/sine/mode");
    CHECK(pointer_of(R"({"grid": {"M": 4, "N": 8, "T": 1},
                        "sweep": {"parameter": "weight.q", "values": [1]}})") == "/sweep/parameter");
    CHECK(pointer_of(R"({"grid": {"M": 4, "N": 8, "T": 1}, "weight": {"beta": 2}})") == "/weight");
    CHECK(pointer_of(R"({"grid": {"M": 0, "N": 8, "T": 1}})") == "/grid");
    CHECK(pointer_of("{not json") == "/");
    CHECK(pointer_of(R"({"grid": {"M": 4, "N": 8, "T": 1}, "mc": {"master_seed": -1}})")
          == "/mc/master_seed");
}

TEST_CASE("full config")
{
    const RunConfig c = parse_config_text(R"({
        "grid": {"M": 15, "N": 1792, "T": 3.5},
        "weight": {"s": 2, "lambda": 0.05, "mconst": 10, "kappa": 0.5},
        "coefficients": {"a": {"constant": 0.1}, "d": {"preset": "sine"}},
        "data": {"y0": {"sine": {"mode": 2, "amplitude": 0.5}}, "y1": "zero",
                 "g": {"random": {"seed": 4, "amplitude": 2}}, "f": {"zero": {}}},
        "g_mode": "space_only",
        "mc": {"paths": 200, "master_seed": 18446744073709551615},
        "sweep": {"parameter": "weight.s", "values": [2, 4, 8]},
        "pair": {"data": {"y0": {"sine": {"mode": 1}}}},
        "output_dir": "runs/c7"
    })");
    CHECK(c.kappa == 0.5);
    CHECK(*c.a.constant == 0.1);
    CHECK(c.d.preset == "sine");
    CHECK(c.data.y0.kind == DataKind::Sine);
    CHECK(c.data.y0.mode == 2);
    CHECK(c.data.g.seed == 4);
    CHECK(c.g_mode == SourceMode::SpaceOnly);
    CHECK(c.master_seed == 18446744073709551615ULL);
    CHECK(c.sweep->values.size() == 3);
    CHECK(c.pair.has_value());
    CHECK_FALSE(c.pair->master_seed.has_value());

    const Grid g = build_grid(c);
    const ProblemData d = build_data(c.data, c.g_mode, g);
    CHECK_NOTHROW(d.validate(g));
    CHECK_FALSE(d.g.has_time());
    CHECK_FALSE(d.f.has_value());
    const SchemeCoefficients co = build_coefficients(c, g);
    CHECK_NOTHROW(co.validate(g));
    CHECK(co.a(node(3), node(5)) == 0.1);

    const RunConfig s8 = with_parameter(c, "weight.s", 8);
    CHECK(s8.weight.s == 8);
    CHECK_THROWS_AS(with_parameter(c, "grid.M", 2.5), ConfigError);
}

TEST_CASE("overrides feed the canonical form")
{
    const std::string text = R"({"grid": {"M": 4, "N": 8, "T": 1}})";
    const RunConfig a = parse_config_text(text);
    const RunConfig b = parse_config_text(text, {5, 9, std::string("elsewhere")});
    CHECK(b.paths == 5);
    CHECK(b.master_seed == 9);
    CHECK(b.output_dir == "elsewhere");
    CHECK(a.canonical != b.canonical);
    CHECK(fnv1a(a.canonical) == fnv1a(parse_config_text(text).canonical));
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}
