#include "grid.hpp"

#include "error.hpp"
#include "exec.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace lfd {

Grid::Grid(int n, double L) : n_(n), L_(L), h_(0.0)
{
    if (n < 4) fail(Errc::invalid_argument, "grid needs at least 4 nodes per axis");
    if (!(L > 0.0) || !std::isfinite(L)) fail(Errc::invalid_argument, "grid extent must be positive");
    h_ = 2.0 * L / n;
}

Field sample(const Grid& g, const std::function<double(const Vec3&)>& fn)
{
    Field f(g.size());
    parallel_for(g.size(), [&](std::size_t i) { f[i] = fn(g.node(i)); });
    return f;
}

VecField gradient(const Grid& g, const Field& f)
{
    const int n = g.n();
    const double inv2h = 0.5 / g.h();
    const std::size_t stride[3] = {static_cast<std::size_t>(n) * n, static_cast<std::size_t>(n), 1};
    VecField d;
    for (auto& c : d) c.assign(g.size(), 0.0);
    parallel_for(g.size(), [&](std::size_t idx) {
        const auto c = g.cell(idx);
        for (int a = 0; a < 3; ++a) {
            const std::size_t s = stride[a];
            const int k = c[a];
            double v;
            if (k == 0)
                v = (-3.0 * f[idx] + 4.0 * f[idx + s] - f[idx + 2 * s]) * inv2h;
            else if (k == n - 1)
                v = (3.0 * f[idx] - 4.0 * f[idx - s] + f[idx - 2 * s]) * inv2h;
            else
                v = (f[idx + s] - f[idx - s]) * inv2h;
            d[a][idx] = v;
        }
    });
    return d;
}

Field divergence(const Grid& g, const VecField& G)
{
    const int n = g.n();
    const double inv2h = 0.5 / g.h();
    const std::size_t stride[3] = {static_cast<std::size_t>(n) * n, static_cast<std::size_t>(n), 1};
    Field out(g.size(), 0.0);
    parallel_for(g.size(), [&](std::size_t idx) {
        const auto c = g.cell(idx);
        double acc = 0.0;
        for (int a = 0; a < 3; ++a) {
            const std::size_t s = stride[a];
            const double up = c[a] + 1 < n ? G[a][idx + s] : 0.0;
            const double dn = c[a] > 0 ? G[a][idx - s] : 0.0;
            acc += (up - dn) * inv2h;
        }
        out[idx] = acc;
    });
    return out;
}

double integrate(const Grid& g, const Field& f)
{
    return g.weight() * reduce_sum(f.size(), [&](std::size_t i) { return f[i]; });
}

double interpolate(const Grid& g, const Field& f, const Vec3& v)
{
    const int n = g.n();
    int base[3];
    double t[3];
    for (int a = 0; a < 3; ++a) {
        const double x = (v[a] + g.extent()) / g.h() - 0.5;
        if (!(x > -1.0 && x < n)) return 0.0;
        const double fl = std::floor(x);
        base[a] = static_cast<int>(fl);
        t[a] = x - fl;
    }
    double acc = 0.0;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
            for (int dk = 0; dk < 2; ++dk) {
                const int i = base[0] + di, j = base[1] + dj, k = base[2] + dk;
                if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) continue;
                const double w = (di ? t[0] : 1 - t[0]) * (dj ? t[1] : 1 - t[1]) * (dk ? t[2] : 1 - t[2]);
                if (w != 0.0) acc += w * f[g.index(i, j, k)];
            }
    return acc;
}

Moments compute_moments(const Grid& g, const Field& f)
{
    Moments m;
    const double w = g.weight();
    m.mass = w * reduce_sum(f.size(), [&](std::size_t i) { return f[i]; });
    for (int a = 0; a < 3; ++a) {
        m.momentum[a] = w * reduce_sum(f.size(), [&](std::size_t i) { return f[i] * g.node(i)[a]; });
        m.directional[a] = w * reduce_sum(f.size(), [&](std::size_t i) {
            const double x = g.node(i)[a];
            return f[i] * x * x;
        });
    }
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int p = 0; p < 3; ++p)
        m.cross[p] = w * reduce_sum(f.size(), [&](std::size_t i) {
            const Vec3 v = g.node(i);
            return f[i] * v[pairs[p][0]] * v[pairs[p][1]];
        });
    m.energy = m.directional[0] + m.directional[1] + m.directional[2];
    return m;
}

double bracket(const Vec3& v) { return std::sqrt(1.0 + norm2(v)); }

State::State(Grid grid, Field values, double epsilon)
    : grid_(grid), values_(std::move(values)), eps_(epsilon), kappa0_(1.0), sup_(0.0)
{
    if (values_.size() != grid_.size()) fail(Errc::invalid_argument, "field length does not match grid");
    if (!(eps_ >= 0.0) || !std::isfinite(eps_)) fail(Errc::invalid_argument, "epsilon must be finite and >= 0");
    double mx = 0.0;
    for (double x : values_) {
        if (!std::isfinite(x)) fail(Errc::numerical, "non-finite value in field");
        mx = std::max(mx, x);
    }
    sup_ = mx;
    kappa0_ = std::clamp(1.0 - eps_ * mx, 0.0, 1.0);
    mom_ = compute_moments(grid_, values_);
}

namespace {

// f exp(c . p(v)) with p = (1, v, |v|^2[, v0 v1, v0 v2, v1 v2]) matching the targets; Newton on the
// convex dual with a backtracking line search.
using TiltVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
using TiltMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

Field tilt(const Grid& g, const Field& f, const TiltVec& target)
{
    const int k = static_cast<int>(target.size());
    const double w = g.weight();
    auto basis = [&](std::size_t i) {
        const Vec3 v = g.node(i);
        TiltVec p(k);
        p.head<5>() << 1.0, v[0], v[1], v[2], norm2(v);
        if (k == 8) p.tail<3>() << v[0] * v[1], v[0] * v[2], v[1] * v[2];
        return p;
    };
    auto evaluate = [&](const TiltVec& c, TiltVec& grad, TiltMat* hess) {
        grad.setZero(k);
        if (hess) hess->setZero(k, k);
        double phi = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i] == 0.0) continue;
            const TiltVec p = basis(i);
            const double e = w * f[i] * std::exp(c.dot(p));
            phi += e;
            grad += e * p;
            if (hess) hess->selfadjointView<Eigen::Lower>().rankUpdate(p, e);
        }
        if (hess) *hess = hess->selfadjointView<Eigen::Lower>();
        grad -= target;
        return phi - c.dot(target);
    };
    TiltVec c = TiltVec::Zero(k), grad(k), trial(k), g2(k);
    TiltMat hess(k, k);
    double phi = evaluate(c, grad, &hess);
    for (int it = 0; it < 60; ++it) {
        if (grad.cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, target.cwiseAbs().maxCoeff())) break;
        const TiltVec step = hess.ldlt().solve(-grad);
        double t = 1.0, phi2 = 0.0;
        for (int ls = 0; ls < 40; ++ls) {
            trial = c + t * step;
            phi2 = evaluate(trial, g2, nullptr);
            if (std::isfinite(phi2) && phi2 <= phi + 1e-4 * t * grad.dot(step) + 1e-15 * std::abs(phi)) break;
            t *= 0.5;
        }
        c = trial;
        phi = evaluate(c, grad, &hess);
    }
    Field out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] == 0.0 ? 0.0 : f[i] * std::exp(c.dot(basis(i)));
    return out;
}

} // namespace

Field tilt_to_moments(const Grid& g, const Field& f, double mass, const Vec3& momentum, double energy)
{
    TiltVec target(5);
    target << mass, momentum[0], momentum[1], momentum[2], energy;
    return tilt(g, f, target);
}

namespace {

// Principal axes ordered so that axis a is the eigenvector dominated by component a.
std::array<Vec3, 3> principal_axes(const Eigen::Matrix3d& P)
{
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(P);
    if (es.info() != Eigen::Success) fail(Errc::degenerate, "degenerate dispersion");
    // Already diagonal: keep the grid axes, since near-degenerate eigenvalues make the
    // eigenvectors arbitrary and any rotation costs an interpolation.
    const double off = std::max({std::abs(P(0, 1)), std::abs(P(0, 2)), std::abs(P(1, 2))});
    if (off <= 1e-10 * P.trace() && P.diagonal().minCoeff() > 1e-12 * P.trace())
        return {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    const auto& ev = es.eigenvalues();
    if (!(ev.minCoeff() > 1e-12 * std::max(ev.maxCoeff(), 1e-300)))
        fail(Errc::degenerate, "degenerate dispersion");
    const Eigen::Matrix3d V = es.eigenvectors();
    std::array<Vec3, 3> axes{};
    bool used_axis[3] = {false, false, false};
    bool used_vec[3] = {false, false, false};
    for (int round = 0; round < 3; ++round) {
        int bv = -1, ba = -1;
        double best = -1.0;
        for (int c = 0; c < 3; ++c) {
            if (used_vec[c]) continue;
            for (int a = 0; a < 3; ++a)
                if (!used_axis[a] && std::abs(V(a, c)) > best) {
                    best = std::abs(V(a, c));
                    bv = c;
                    ba = a;
                }
        }
        used_vec[bv] = used_axis[ba] = true;
        Eigen::Vector3d col = V.col(bv);
        int big = 0;
        for (int a = 1; a < 3; ++a)
            if (std::abs(col[a]) > std::abs(col[big])) big = a;
        if (col[big] < 0) col = -col;
        axes[ba] = {col[0], col[1], col[2]};
    }
    return axes;
}

} // namespace

State normalize_to_standard(const State& s, NormalizeInfo* info)
{
    const Grid& g = s.grid();
    const Field& f = s.values();
    const Moments& m = s.moments();
    if (!(m.mass > 0.0)) fail(Errc::invalid_argument, "normalization needs positive mass");
    const double rho = m.mass;
    const Vec3 u = {m.momentum[0] / rho, m.momentum[1] / rho, m.momentum[2] / rho};
    const double w = g.weight();
    Eigen::Matrix3d P = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3 v = g.node(i);
        const Eigen::Vector3d d(v[0] - u[0], v[1] - u[1], v[2] - u[2]);
        P += w * f[i] * d * d.transpose();
    }
    const double T = P.trace() / (3.0 * rho);
    if (!(T > 0.0)) fail(Errc::degenerate, "degenerate dispersion");
    const auto axes = principal_axes(P);
    const double sT = std::sqrt(T);
    const double scale = std::pow(T, 1.5) / rho;

    Field out(g.size());
    parallel_for(g.size(), [&](std::size_t i) {
        const Vec3 v = g.node(i);
        Vec3 x{};
        for (int r = 0; r < 3; ++r) {
            double acc = 0.0;
            for (int c = 0; c < 3; ++c) acc += axes[c][r] * v[c];
            x[r] = sT * acc + u[r];
        }
        out[i] = scale * interpolate(g, f, x);
    });
    const double new_eps = s.epsilon() * rho / std::pow(T, 1.5);
    // Exponential tilt back onto (1, 0, 3) with vanishing cross moments, which interpolation
    // only preserves to O(h^2).
    TiltVec target = TiltVec::Zero(8);
    target[0] = 1.0;
    target[4] = 3.0;
    out = tilt(g, out, target);
    State res(g, std::move(out), new_eps);
    res.descriptor = s.descriptor;
    if (info) {
        info->rho = rho;
        info->u = u;
        info->temperature = T;
        info->rotation = axes;
        const int n = g.n();
        double tail = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto c = g.cell(i);
            if (c[0] == 0 || c[1] == 0 || c[2] == 0 || c[0] == n - 1 || c[1] == n - 1 || c[2] == n - 1)
                tail += res.values()[i] * w;
        }
        info->tail_mass = tail;
        const Moments& r = res.moments();
        info->residual = std::max({std::abs(r.mass - 1.0), std::abs(r.momentum[0]), std::abs(r.momentum[1]),
                                   std::abs(r.momentum[2]), std::abs(r.energy - 3.0)});
    }
    return res;
}

} // namespace lfd
