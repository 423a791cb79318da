#include "equilibria.hpp"

#include "error.hpp"
#include "exec.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace lfd {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int quad_nodes = 256;
constexpr double max_log_z = 700.0;

struct GaussLegendre {
    std::vector<double> x, w; // on [0, 1]
};

const GaussLegendre& gauss_legendre()
{
    static const GaussLegendre rule = [] {
        GaussLegendre r;
        const int n = quad_nodes;
        r.x.resize(n);
        r.w.resize(n);
        for (int i = 0; i < n; ++i) {
            double t = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            r.x[i] = 0.5 * (1.0 - t);
            r.w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
        }
        return r;
    }();
    return rule;
}

double logistic(double y) { return y >= 0 ? 1.0 / (1.0 + std::exp(-y)) : std::exp(y) / (1.0 + std::exp(y)); }

template <class Fn>
void integrate_panel(double lo, double hi, Fn&& fn)
{
    const auto& gl = gauss_legendre();
    for (int i = 0; i < quad_nodes; ++i) fn(lo + (hi - lo) * gl.x[i], (hi - lo) * gl.w[i]);
}

// x = x0 + s t / (1 - t) maps [0, 1) onto [x0, inf).
template <class Fn>
void integrate_tail(double x0, double s, Fn&& fn)
{
    const auto& gl = gauss_legendre();
    for (int i = 0; i < quad_nodes; ++i) {
        const double t = gl.x[i];
        const double om = 1.0 - t;
        fn(x0 + s * t / om, gl.w[i] * s / (om * om));
    }
}

struct Residual {
    double f0, f1;       // log mass, log(energy / 3)
    double j00, j10;     // d/d log a
};

Residual residual(double eps, double la, double lb)
{
    const double l = std::log(eps) + la;
    const RadialIntegrals I = radial_integrals(l);
    Residual r;
    r.f0 = -1.5 * lb + std::log(I.J0) - std::log(eps);
    r.f1 = -2.5 * lb + std::log(I.J2) - std::log(eps) - std::log(3.0);
    r.j00 = I.dJ0 / I.J0;
    r.j10 = I.dJ2 / I.J2;
    return r;
}

// Root of J0 (3 J0 / J2)^{3/2} = eps in l = log(eps a).
bool bisect_log_z(double eps, double& la, double& lb)
{
    auto phi = [&](double l) {
        const RadialIntegrals I = radial_integrals(l);
        return std::log(I.J0) + 1.5 * (std::log(3.0 * I.J0) - std::log(I.J2)) - std::log(eps);
    };
    double lo = -700.0, hi = max_log_z;
    if (!(phi(lo) < 0.0) || !(phi(hi) > 0.0)) return false;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (phi(mid) < 0.0 ? lo : hi) = mid;
    }
    const double l = 0.5 * (lo + hi);
    const RadialIntegrals I = radial_integrals(l);
    const double b = I.J2 / (3.0 * I.J0);
    lb = std::log(b);
    la = l - std::log(eps);
    return true;
}

void fill_residuals(EquilibriumParams& p)
{
    if (p.epsilon == 0.0) {
        p.residual_mass = p.a * std::pow(pi / p.b, 1.5) - 1.0;
        p.residual_energy = 1.5 * p.a * std::pow(pi, 1.5) * std::pow(p.b, -2.5) - 3.0;
        p.sup_norm = p.a;
        return;
    }
    const double l = std::log(p.epsilon * p.a);
    const RadialIntegrals I = radial_integrals(l);
    p.residual_mass = I.J0 * std::pow(p.b, -1.5) / p.epsilon - 1.0;
    p.residual_energy = I.J2 * std::pow(p.b, -2.5) / p.epsilon - 3.0;
    p.sup_norm = p.a / (1.0 + p.epsilon * p.a);
}

} // namespace

double epsilon_bar() { return std::pow(0.4, 2.5) * std::pow(18.0 * pi, 1.5); }

double epsilon_saturation_limit() { return 4.0 * pi / 3.0 * std::pow(5.0, 1.5); }

RadialIntegrals radial_integrals(double l)
{
    RadialIntegrals r{0.0, 0.0, 0.0, 0.0};
    auto acc = [&](double x, double w) {
        const double s = logistic(l - x * x);
        const double ds = s * (1.0 - s);
        const double x2 = x * x;
        r.J0 += w * x2 * s;
        r.J2 += w * x2 * x2 * s;
        r.dJ0 += w * x2 * ds;
        r.dJ2 += w * x2 * x2 * ds;
    };
    if (l > 1.0) {
        const double xe = std::sqrt(l);
        integrate_panel(0.0, xe, acc);
        integrate_tail(xe, 1.0 / xe, acc);
    } else {
        integrate_tail(0.0, 2.0, acc);
    }
    r.J0 *= 4.0 * pi;
    r.J2 *= 4.0 * pi;
    r.dJ0 *= 4.0 * pi;
    r.dJ2 *= 4.0 * pi;
    return r;
}

double fd_value(const EquilibriumParams& p, double r2)
{
    if (p.epsilon == 0.0) return p.a * std::exp(-p.b * r2);
    return logistic(std::log(p.epsilon * p.a) - p.b * r2) / p.epsilon;
}

State maxwellian(const Grid& g)
{
    const double a0 = std::pow(2.0 * pi, -1.5);
    State s(g, sample(g, [&](const Vec3& v) { return a0 * std::exp(-0.5 * norm2(v)); }), 0.0);
    s.descriptor = "maxwellian";
    return s;
}

EquilibriumParams fd_parameters(double epsilon)
{
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail(Errc::invalid_argument, "epsilon must be finite and >= 0");
    EquilibriumParams p;
    p.epsilon = epsilon;
    if (epsilon == 0.0) {
        p.a = std::pow(2.0 * pi, -1.5);
        p.b = 0.5;
        fill_residuals(p);
        return p;
    }
    double la = std::log(std::pow(2.0 * pi, -1.5)), lb = std::log(0.5);
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
        if (std::log(epsilon) + la > max_log_z) break;
        const Residual r = residual(epsilon, la, lb);
        const double norm = std::max(std::abs(r.f0), std::abs(r.f1));
        p.iterations = it;
        if (!std::isfinite(norm)) break;
        if (norm < 1e-14) {
            ok = true;
            break;
        }
        const double det = r.j00 * -2.5 - (-1.5) * r.j10;
        if (!(std::abs(det) > 1e-300)) break;
        double da = (-r.f0 * -2.5 + 1.5 * -r.f1) / det;
        double db = (r.j00 * -r.f1 - r.j10 * -r.f0) / det;
        const double big = std::max(std::abs(da), std::abs(db));
        if (big > 2.0) {
            da *= 2.0 / big;
            db *= 2.0 / big;
        }
        la += da;
        lb += db;
    }
    if (!ok) {
        p.used_fallback = true;
        if (!bisect_log_z(epsilon, la, lb))
            fail(Errc::saturation, "no Fermi-Dirac statistics with unit mass and energy 3 at this epsilon");
        for (int it = 0; it < 3; ++it) {
            const Residual r = residual(epsilon, la, lb);
            const double det = r.j00 * -2.5 + 1.5 * r.j10;
            la += (-r.f0 * -2.5 + 1.5 * -r.f1) / det;
            lb += (r.j00 * -r.f1 - r.j10 * -r.f0) / det;
        }
    }
    p.a = std::exp(la);
    p.b = std::exp(lb);
    fill_residuals(p);
    if (!(std::abs(p.residual_mass) < 1e-8 && std::abs(p.residual_energy) < 1e-8))
        fail(Errc::saturation, "Fermi-Dirac solve did not reach the moment constraints");
    return p;
}

std::pair<EquilibriumParams, State> solve_fd_statistics(const Grid& g, double epsilon)
{
    EquilibriumParams p = fd_parameters(epsilon);
    State s(g, sample(g, [&](const Vec3& v) { return fd_value(p, norm2(v)); }), epsilon);
    s.descriptor = "fd_statistics";
    p.grid_mass = s.moments().mass;
    p.grid_energy = s.moments().energy;
    return {p, std::move(s)};
}

std::pair<EquilibriumParams, State> grid_fd_statistics(const Grid& g, double epsilon)
{
    EquilibriumParams p = fd_parameters(epsilon);
    double la = std::log(p.a), lb = std::log(p.b);
    std::vector<double> r2(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) r2[n] = norm2(g.node(n));
    Field f(g.size());
    auto eval = [&] {
        const EquilibriumParams q{std::exp(la), std::exp(lb), epsilon};
        for (std::size_t n = 0; n < g.size(); ++n) f[n] = fd_value(q, r2[n]);
    };
    for (int it = 0; it < 50; ++it) {
        eval();
        // d f / d log a = F and d f / d log b = -b r^2 F with F = f (1 - eps f)
        double m = 0, e = 0, j00 = 0, j01 = 0, j10 = 0, j11 = 0;
        const double b = std::exp(lb);
        for (std::size_t n = 0; n < g.size(); ++n) {
            const double F = f[n] * (1.0 - epsilon * f[n]);
            m += f[n];
            e += f[n] * r2[n];
            j00 += F;
            j01 -= b * r2[n] * F;
            j10 += F * r2[n];
            j11 -= b * r2[n] * r2[n] * F;
        }
        const double w = g.weight();
        const double r0 = m * w - 1.0, r1 = e * w - 3.0;
        p.iterations = it;
        if (std::max(std::abs(r0), std::abs(r1)) < 1e-15) break;
        const double det = w * w * (j00 * j11 - j01 * j10);
        if (!(std::abs(det) > 0.0)) fail(Errc::numerical, "singular Jacobian in grid equilibrium solve");
        la -= w * (j11 * r0 - j01 * r1) / det;
        lb -= w * (j00 * r1 - j10 * r0) / det;
    }
    eval();
    p.a = std::exp(la);
    p.b = std::exp(lb);
    State s(g, f, epsilon);
    s.descriptor = "fd_statistics_grid";
    p.grid_mass = s.moments().mass;
    p.grid_energy = s.moments().energy;
    p.sup_norm = s.sup();
    if (!(std::abs(p.grid_mass - 1.0) < 1e-12 && std::abs(p.grid_energy - 3.0) < 1e-12))
        fail(Errc::numerical, "grid equilibrium solve did not converge");
    return {p, std::move(s)};
}

State saturated_state(const Grid& g, double epsilon)
{
    if (!(epsilon > 0.0)) fail(Errc::invalid_argument, "saturated state needs epsilon > 0");
    const double R = std::cbrt(3.0 * epsilon / (4.0 * pi));
    if (R >= g.extent()) fail(Errc::invalid_argument, "saturated ball does not fit in the grid box");
    State s(g, sample(g, [&](const Vec3& v) { return norm2(v) < R * R ? 1.0 / epsilon : 0.0; }), epsilon);
    s.descriptor = "saturated";
    return s;
}

SaturationBracket saturation_threshold(double rel_width)
{
    SaturationBracket out;
    auto solvable = [&](double e) {
        ++out.evaluations;
        try {
            fd_parameters(e);
            return true;
        } catch (const Error& err) {
            if (err.code() != Errc::saturation) throw;
            return false;
        }
    };
    double lo = epsilon_bar(), hi = 2.0 * lo;
    while (!solvable(lo)) {
        hi = lo;
        lo *= 0.5;
    }
    while (solvable(hi)) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > rel_width * lo) {
        const double mid = 0.5 * (lo + hi);
        (solvable(mid) ? lo : hi) = mid;
    }
    out.value = lo;
    out.upper = hi;
    return out;
}

} // namespace lfd
