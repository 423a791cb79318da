#include "functionals.hpp"

#include "error.hpp"
#include "exec.hpp"

#include <cmath>

namespace lfd {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_same(const State& f, const State& g)
{
    if (!(f.grid() == g.grid())) fail(Errc::invalid_argument, "states live on different grids");
    if (f.epsilon() != g.epsilon()) fail(Errc::invalid_argument, "states have different epsilon");
}

} // namespace

double weighted_moment(const State& g, double s)
{
    const Grid& gr = g.grid();
    const Field& f = g.values();
    return gr.weight() * reduce_sum(f.size(), [&](std::size_t i) {
        return std::pow(bracket(gr.node(i)), s) * std::abs(f[i]);
    });
}

double boltzmann_entropy(const State& g)
{
    const Field& f = g.values();
    for (double x : f)
        if (x < 0.0) fail(Errc::domain, "entropy of a negative density");
    return g.grid().weight() * reduce_sum(f.size(), [&](std::size_t i) { return xlogx(f[i]); });
}

double fd_entropy(const State& g)
{
    const double eps = g.epsilon();
    if (!(eps > 0.0)) fail(Errc::domain, "Fermi-Dirac entropy needs epsilon > 0; use the Boltzmann entropy");
    const Field& f = g.values();
    for (double x : f)
        if (x < 0.0 || eps * x > 1.0 + 1e-12) fail(Errc::domain, "density outside [0, 1/epsilon]");
    const double s = reduce_sum(f.size(), [&](std::size_t i) {
        const double y = std::min(eps * f[i], 1.0);
        return xlogx(y) + xlogx(1.0 - y);
    });
    return -s * g.grid().weight() / eps;
}

double relative_entropy(const State& f, const State& g)
{
    require_same(f, g);
    const double mf = f.moments().mass, mg = g.moments().mass;
    if (std::abs(mf - mg) > 1e-6 * std::max(std::abs(mf), std::abs(mg)))
        fail(Errc::invalid_argument, "relative entropy needs equal masses");
    if (f.epsilon() == 0.0) return boltzmann_entropy(f) - boltzmann_entropy(g);
    return -fd_entropy(f) + fd_entropy(g);
}

double weighted_sqrt_fisher(const State& g, double gamma)
{
    const Grid& gr = g.grid();
    Field r(g.values().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::sqrt(std::max(g.values()[i], 0.0));
    const VecField d = gradient(gr, r);
    return gr.weight() * reduce_sum(r.size(), [&](std::size_t i) {
        const double q = d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i];
        return q * std::pow(bracket(gr.node(i)), gamma);
    });
}

VecField h_gradient(const State& g)
{
    const Field& f = g.values();
    VecField d = gradient(g.grid(), f);
    const double eps = g.epsilon();
    parallel_for(f.size(), [&](std::size_t i) {
        const double F = f[i] * (1.0 - eps * f[i]);
        for (int a = 0; a < 3; ++a) d[a][i] = (f[i] > vacuum_floor && F > 0.0) ? d[a][i] / F : 0.0;
    });
    return d;
}

VecField h_gradient_log(const State& g)
{
    const Field& f = g.values();
    const double eps = g.epsilon();
    Field h(f.size());
    parallel_for(f.size(), [&](std::size_t i) {
        const double x = std::max(f[i], vacuum_floor);
        h[i] = std::log(x) - std::log1p(-std::min(eps * x, 1.0 - 1e-16));
    });
    VecField d = gradient(g.grid(), h);
    parallel_for(f.size(), [&](std::size_t i) {
        if (!(f[i] > vacuum_floor && f[i] * (1.0 - eps * f[i]) > 0.0))
            for (int a = 0; a < 3; ++a) d[a][i] = 0.0;
    });
    return d;
}

double fisher_relative_K(const State& g, double gamma, double K)
{
    if (!(g.kappa0() > 0.0)) fail(Errc::domain, "kappa0 must be positive");
    const Grid& gr = g.grid();
    const Field& f = g.values();
    const VecField dh = h_gradient(g);
    return gr.weight() * reduce_sum(f.size(), [&](std::size_t i) {
        if (!(f[i] > vacuum_floor)) return 0.0;
        const Vec3 v = gr.node(i);
        double q = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double t = dh[a][i] - K * v[a];
            q += t * t;
        }
        return q * f[i] * std::pow(bracket(v), gamma);
    });
}

double fisher_relative_FD(const State& g, double gamma, double b_eps)
{
    return fisher_relative_K(g, std::min(gamma, 0.0), -2.0 * b_eps);
}

Lemma21 lemma21_diagnostics(const State& g, double R, const std::vector<bool>& mask)
{
    const Grid& gr = g.grid();
    const Field& f = g.values();
    if (!mask.empty() && mask.size() != f.size()) fail(Errc::invalid_argument, "mask length does not match grid");
    const double eps = g.epsilon();
    Lemma21 out;
    out.ball = gr.weight() * reduce_sum(f.size(), [&](std::size_t i) {
        return norm2(gr.node(i)) <= R * R ? f[i] * (1.0 - eps * f[i]) : 0.0;
    });
    out.set = mask.empty() ? 0.0 : gr.weight() * reduce_sum(f.size(), [&](std::size_t i) {
        return mask[i] ? f[i] * (1.0 - eps * f[i]) : 0.0;
    });
    return out;
}

double l1_distance(const State& f, const State& g)
{
    if (!(f.grid() == g.grid())) fail(Errc::invalid_argument, "states live on different grids");
    const Field& a = f.values();
    const Field& b = g.values();
    return f.grid().weight() * reduce_sum(a.size(), [&](std::size_t i) { return std::abs(a[i] - b[i]); });
}

} // namespace lfd
