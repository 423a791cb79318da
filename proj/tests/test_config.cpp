#include "config.hpp"

#include <doctest.h>

#include <string>

using namespace lfdcli;

namespace {

const std::vector<std::string> kChecks = {"csiszar", "logsob", "K_offset"};
const std::vector<std::string> kMembers = {"fd_statistics", "aniso_mild"};

RunConfig build(const std::string& text, const Overrides& o = {})
{
    return build_config(parse_ini(text, "t.ini"), "t.ini", o, kChecks, kMembers);
}

std::string error_of(const std::string& text, const Overrides& o = {})
{
    try {
        build(text, o);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("sections, comments and values")
{
    const IniDocument d = parse_ini("subcommand = verify # trailing\n; note\n[grid]\nn = 12\n\n[physics]\ngamma=0, 1\n",
                                    "x.ini");
    CHECK(d.at("subcommand").value == "verify");
    CHECK(d.at("grid.n").value == "12");
    CHECK(d.at("grid.n").line == 4);
    CHECK(d.at("physics.gamma").value == "0, 1");
}

TEST_CASE("duplicate keys name both lines")
{
    try {
        parse_ini("[grid]\nn = 8\nL = 4\nn = 12\n", "dup.ini");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        const std::string m = e.what();
        CHECK(m.find("dup.ini:4") != std::string::npos);
        CHECK(m.find("line 2") != std::string::npos);
        CHECK(m.find("line 4") != std::string::npos);
    }
}

TEST_CASE("malformed lines")
{
    CHECK_THROWS_AS(parse_ini("[grid\n", "a"), ConfigError);
    CHECK_THROWS_AS(parse_ini("novalue\n", "a"), ConfigError);
    CHECK_THROWS_AS(parse_ini("bad key = 1\n", "a"), ConfigError);
}

TEST_CASE("defaults")
{
    const RunConfig c = build("subcommand = equilibrium\n");
    CHECK(c.n == 16);
    CHECK(c.L == 6.0);
    CHECK(c.gammas == std::vector<double>{1.0});
    CHECK(c.epsilons == std::vector<double>{0.01});
    CHECK(c.flux == "entropic");
    CHECK_FALSE(c.dt.has_value());
    CHECK(c.projection);
}

TEST_CASE("validation errors carry the source line")
{
    CHECK(error_of("subcommand = verify\n[physics]\ngamma = -5\n").find("t.ini:3") != std::string::npos);
    CHECK(error_of("subcommand = verify\n[physics]\ngamma = -5\n").find("gamma <= -4 unsupported") !=
          std::string::npos);
    CHECK(error_of("subcommand = verify\n[grid]\nspacing = 1\n").find("unknown key 'grid.spacing'") !=
          std::string::npos);
    CHECK(error_of("subcommand = verify\n[grid]\nn = 3\n").find("t.ini:3") != std::string::npos);
    CHECK(error_of("subcommand = verify\n[verify]\nchecks = nope\n").find("unknown check") != std::string::npos);
    CHECK(error_of("subcommand = verify\n[state]\nmember = nope\n").find("unknown state member") !=
          std::string::npos);
    CHECK(error_of("subcommand = evolve\n[physics]\ngamma = 0, 1\n").find("single gamma") != std::string::npos);
    CHECK(error_of("subcommand = evolve\n[physics]\ngamma = -3\n").find("[-2, 1]") != std::string::npos);
    CHECK(error_of("[grid]\nn = 8\n").find("missing 'subcommand'") != std::string::npos);
    CHECK(error_of("subcommand = fly\n").find("unknown subcommand") != std::string::npos);
    CHECK(error_of("subcommand = evolve\n[solver]\nflux = upwind\n").find("solver.flux") != std::string::npos);
}

TEST_CASE("overrides win over the document")
{
    const RunConfig c = build("subcommand = verify\n[grid]\nn = 8\n", {{"grid.n", "12"}, {"verify.checks", "csiszar"}});
    CHECK(c.n == 12);
    CHECK(c.checks == std::vector<std::string>{"csiszar"});
    CHECK(error_of("subcommand = verify\n", {{"physics.gamma", "-4"}}).find("command line") != std::string::npos);
    CHECK(build("subcommand = verify\n[verify]\nchecks = all\n").checks.empty());
}

TEST_CASE("solver keys")
{
    const RunConfig c = build("subcommand = evolve\n[solver]\ndt = 1e-4\nt_end = 2\nprojection = off\nclip = yes\n"
                              "record_every = 7\nflux = gradient\nfit_t0 = 0.25\n");
    REQUIRE(c.dt.has_value());
    CHECK(*c.dt == 1e-4);
    CHECK(c.t_end == 2.0);
    CHECK_FALSE(c.projection);
    CHECK(c.clip);
    CHECK(c.record_every == 7);
    CHECK(c.flux == "gradient");
    CHECK(c.fit_t0 == 0.25);
    CHECK_FALSE(build("subcommand = evolve\n[solver]\ndt = auto\n").dt.has_value());
}

TEST_CASE("real lists")
{
    CHECK(parse_real_list("0, 1e-3 ,0.5", "w") == std::vector<double>{0.0, 1e-3, 0.5});
    CHECK_THROWS_AS(parse_real_list("", "w"), ConfigError);
    CHECK_THROWS_AS(parse_real_list("1, x", "w"), ConfigError);
}
