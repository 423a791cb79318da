#include "equilibria.hpp"
#include "error.hpp"
#include "exec.hpp"
#include "functionals.hpp"
#include "grid.hpp"
#include "production.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lfd;

namespace {

State random_state(const Grid& g, double eps, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(0.6, 1.4), C(-0.5, 0.5);
    const double tx = U(rng), ty = U(rng), tz = U(rng), cx = C(rng);
    Field f = sample(g, [&](const Vec3& v) {
        const double x = v[0] - cx;
        return std::exp(-x * x / (2 * tx) - v[1] * v[1] / (2 * ty) - v[2] * v[2] / (2 * tz));
    });
    f = tilt_to_moments(g, f, 1.0, {0, 0, 0}, 3.0);
    return State(g, f, eps);
}

// Independent single-pair integrand: 1/2 |v-w|^gamma sum_{i != j} (z_i y_j - z_j y_i)^2 written out.
double naive_pair(const Vec3& z, const Vec3& y, double gamma)
{
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) s += (z[i] * y[j] - z[j] * y[i]) * (z[i] * y[j] - z[j] * y[i]);
    return std::pow(std::sqrt(norm2(z)), gamma) * 0.5 * s;
}

} // namespace

TEST_CASE("Lagrange identity for single pairs")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N;
    for (int k = 0; k < 200; ++k) {
        const Vec3 z{N(rng), N(rng), N(rng)}, y{N(rng), N(rng), N(rng)};
        const double zz = norm2(z), yy = norm2(y), zy = z[0] * y[0] + z[1] * y[1] + z[2] * y[2];
        double half = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) half += 0.5 * (z[i] * y[j] - z[j] * y[i]) * (z[i] * y[j] - z[j] * y[i]);
        CHECK(std::abs(half - (zz * yy - zy * zy)) <= 1e-14 * std::max(1.0, zz * yy));
        for (double gamma : {-1.0, 0.0, 1.0}) {
            const double p = projection_integrand(z, y, gamma), c = cross_integrand(z, y, gamma);
            const double ref = naive_pair(z, y, gamma);
            CHECK(std::abs(p - c) <= 1e-13 * std::max(1.0, std::abs(ref)));
            CHECK(std::abs(c - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("projection and cross-product forms agree on random states")
{
    set_reduction(Reduction::deterministic);
    const Grid g(8, 4.0);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 4; ++k)
        for (double eps : {0.0, 0.01})
            for (double gamma : {-1.0, 0.0, 1.0}) {
                const State s = random_state(g, eps, rng);
                const ProductionResult a = entropy_production_projection(s, gamma);
                const ProductionResult b = entropy_production_cross(s, gamma);
                CHECK(a.value > 0.0);
                CHECK(std::abs(a.value - b.value) / std::max(a.value, 1e-30) <= 1e-10);
                CHECK(a.skipped_diagonal == g.size());
                CHECK(a.pair_count == g.size() * (g.size() - 1));
            }
    set_reduction(Reduction::fast);
}

TEST_CASE("wrong-temperature Gaussian produces entropy")
{
    const Grid g(8, 4.0);
    const State s(g, sample(g, [](const Vec3& v) {
                      return std::exp(-0.5 * v[0] * v[0] / 1.5 - 0.5 * (v[1] * v[1] + v[2] * v[2]) / 0.7);
                  }),
                  0.0);
    CHECK(entropy_production_projection(s, 0.0).value > 0.0);
}

TEST_CASE("power variant and reflection symmetry")
{
    const Grid g(6, 3.0);
    std::mt19937_64 rng(3);
    const State s = random_state(g, 0.01, rng);
    CHECK(entropy_production_power(s, 1.0).value == entropy_production_projection(s, 1.0).value);

    Field r(s.values().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto c = g.cell(i);
        r[g.index(g.n() - 1 - c[0], c[1], c[2])] = s.values()[i];
    }
    const State rs(g, r, 0.01);
    CHECK(entropy_production_projection(rs, 0.0).value ==
          doctest::Approx(entropy_production_projection(s, 0.0).value).epsilon(1e-12));
}

TEST_CASE("Hoelder interpolation between production exponents")
{
    const Grid g(8, 4.0);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 3; ++k) {
        const State s = random_state(g, 0.01, rng);
        const double gm = -1.0, sp = 1.0;
        const double D0 = entropy_production_power(s, 0.0).value;
        const double Dg = entropy_production_power(s, gm).value;
        const double Ds = entropy_production_power(s, sp).value;
        CHECK(D0 <= std::pow(Dg, sp / (sp - gm)) * std::pow(Ds, -gm / (sp - gm)) * (1 + 1e-10));
    }
}

TEST_CASE("power production bounded by moments and square-root Fisher information")
{
    const Grid g(8, 4.0);
    std::mt19937_64 rng(9);
    const State s = random_state(g, 0.01, rng);
    const double sp = 1.0;
    const double rhs = 8.0 * std::pow(2.0, sp / 2) / s.kappa0() * weighted_moment(s, sp + 2) *
                       weighted_sqrt_fisher(s, sp + 2);
    CHECK(entropy_production_power(s, sp).value <= rhs);
}

TEST_CASE("production vanishes on the grid equilibrium up to discretization")
{
    const Grid g(12, 6.0);
    const double D = entropy_production_projection(grid_fd_statistics(g, 0.01).second, 0.0).value;
    CHECK(D >= 0.0);
    std::mt19937_64 rng(1);
    CHECK(D < entropy_production_projection(random_state(g, 0.01, rng), 0.0).value);

    ProductionOptions lg;
    lg.log_gradient = true;
    CHECK(entropy_production(grid_fd_statistics(g, 0.01).second, 1.0, lg).value < 1e-20);
}

TEST_CASE("exponents at or below -4 are rejected")
{
    const Grid g(4, 2.0);
    const State s(g, Field(g.size(), 0.1), 0.0);
    CHECK_THROWS_AS(entropy_production_projection(s, -4.0), Error);
    CHECK_THROWS_AS(entropy_production_power(s, -5.0), Error);
}
