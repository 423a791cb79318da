#include "equilibria.hpp"
#include "error.hpp"
#include "harness.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace lfd;

TEST_CASE("every family member lies in the admissible class")
{
    const Grid g(16, 6.0);
    const auto members = family_members();
    CHECK(members.size() >= 8);
    for (double eps : {0.0, 1e-2}) {
        for (const auto& m : members) {
            CAPTURE(m);
            const State s = family_state(m, g, eps, 1);
            CHECK(s.epsilon() == eps);
            CHECK(std::abs(s.moments().mass - 1.0) < 1e-6);
            CHECK(std::abs(s.moments().energy - 3.0) < 1e-6);
            for (double p : s.moments().momentum) CHECK(std::abs(p) < 1e-6);
            for (double x : s.values()) {
                CHECK(x >= 0.0);
                CHECK(eps * x <= 1.0);
            }
        }
    }
    CHECK_THROWS_AS(family_state("nope", g, 0.0, 1), Error);
}

TEST_CASE("main theorem at the equilibrium: both sides vanish")
{
    const Grid g(16, 6.0);
    const CheckReport r = run_check("main_theorem", family_state("fd_statistics", g, 0.01, 1), 1.0);
    CHECK_FALSE(r.skipped);
    CHECK(r.passed);
    CHECK(std::abs(r.rhs) < 1e-6);
    CHECK(r.orientation == "lhs>=rhs");
}

TEST_CASE("Csiszar-Kullback and Hoelder checks on structured states")
{
    const Grid g(16, 6.0);
    for (double gamma : {0.0, 1.0}) {
        const CheckReport r = run_check("csiszar", family_state("two_bump_x", g, 0.01, 1), gamma);
        CHECK(r.passed);
        CHECK(r.margin >= 0.0);
    }
    CheckOptions opt;
    opt.s = 1.0;
    const CheckReport h = run_check("interpolation", family_state("perturbed_fd", g, 0.01, 1), -1.0, opt);
    CHECK(h.passed);
    CHECK(h.margin >= 0.0);
}

TEST_CASE("small suite: two checks on five states")
{
    FamilySpec fam;
    fam.members = {"fd_statistics", "perturbed_fd", "two_temperature", "aniso_mild", "shell"};
    const auto reports = run_suite(fam, {"csiszar", "logsob"}, {0.0}, {1e-3});
    CHECK(reports.size() == 10);
    for (const auto& r : reports) CHECK(r.passed);
    const auto summary = summarize(reports);
    CHECK(summary.size() == 2);

    std::ostringstream csv;
    write_reports_csv(csv, reports);
    CHECK(csv.str().rfind("name,gamma,epsilon,n,lhs,rhs,margin,passed,state_descriptor\n", 0) == 0);
    std::ostringstream txt;
    write_summary(txt, reports);
    CHECK(txt.str().find("FAILED") == std::string::npos);
}

TEST_CASE("suite argument errors")
{
    FamilySpec fam;
    CHECK_THROWS_AS(run_suite(fam, {}, {0.0}, {0.0}), Error);
    CHECK_THROWS_AS(run_suite(fam, {"nope"}, {0.0}, {0.0}), Error);
    CHECK_THROWS_AS(run_check("nope", maxwellian(Grid(8, 4.0)), 0.0), Error);
}

TEST_CASE("saturated state is skipped with a reason")
{
    const CheckReport r = run_check("main_theorem", saturated_state(Grid(32, 0.6), 0.1), 1.0);
    CHECK(r.skipped);
    CHECK_FALSE(r.passed);
    CHECK(r.reason == "kappa0 = 0");
}

TEST_CASE("hard-potential checks do not apply to soft exponents")
{
    CHECK_FALSE(check_applies("main_theorem", -1.0, 0.01));
    CHECK(check_applies("fisher_control", -1.0, 0.01));
    CHECK(check_applies("interpolation", -0.5, 0.0));
}
