#include "constants.hpp"

#include "error.hpp"
#include "exec.hpp"
#include "functionals.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace lfd {

namespace {

void require_axes(int i, int j)
{
    if (i < 0 || i > 2 || j < 0 || j > 2) fail(Errc::invalid_argument, "axis index out of range");
    if (i == j) fail(Errc::invalid_argument, "axes must be distinct");
}

void require_kappa(const State& g)
{
    if (!(g.kappa0() > 0.0)) fail(Errc::domain, "kappa0 must be positive");
}

double moment(const State& g, const std::function<double(const Vec3&, double)>& integrand)
{
    const Grid& gr = g.grid();
    const Field& f = g.values();
    return gr.weight() * reduce_sum(f.size(), [&](std::size_t n) { return integrand(gr.node(n), f[n]); });
}

// |z|^p over all node offsets, with 0 at the origin.
std::vector<double> offset_table(const Grid& gr, double p)
{
    const int n = gr.n(), m = 2 * n - 1;
    const double h = gr.h();
    std::vector<double> t(static_cast<std::size_t>(m) * m * m, 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                const double z2 = h * h * ((a - n + 1.0) * (a - n + 1.0) + (b - n + 1.0) * (b - n + 1.0) +
                                           (c - n + 1.0) * (c - n + 1.0));
                t[(static_cast<std::size_t>(a) * m + b) * m + c] = z2 > 0.0 ? std::pow(z2, 0.5 * p) : 0.0;
            }
    return t;
}

// sup_v <v>^gamma sum_w |v - w|^{-gamma} rho(w) h^3 over grid nodes. The coincident node is
// dropped when the kernel is singular there.
double grid_sup_potential(const Grid& gr, const Field& rho, double gamma)
{
    const int n = gr.n(), m = 2 * n - 1;
    const auto tab = offset_table(gr, -gamma);
    const double w = gr.weight();
    return reduce_max(gr.size(), [&](std::size_t iv) {
        const auto c = gr.cell(iv);
        double acc = 0.0;
        std::size_t iw = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const std::size_t row = (static_cast<std::size_t>(c[0] - i + n - 1) * m + (c[1] - j + n - 1)) * m;
                for (int k = 0; k < n; ++k, ++iw)
                    if (iw != iv) acc += tab[row + (c[2] - k + n - 1)] * rho[iw];
            }
        if (gamma == 0.0) acc += rho[iv];
        return std::pow(bracket(gr.node(iv)), gamma) * acc * w;
    });
}

} // namespace

KL compute_K_L(const State& g)
{
    const double eps = g.epsilon();
    KL out;
    if (eps == 0.0) {
        out.K = -g.moments().mass;
        for (int a = 0; a < 3; ++a) out.L[a] = -g.moments().momentum[a];
        return out;
    }
    require_kappa(g);
    auto lg = [eps](double x) { return std::log1p(-eps * x) / eps; };
    out.K = moment(g, [&](const Vec3&, double x) { return lg(x); });
    for (int a = 0; a < 3; ++a) out.L[a] = moment(g, [&](const Vec3& v, double x) { return lg(x) * v[a]; });
    return out;
}

MNFields m_n_fields(const State& g, int i, int j)
{
    require_axes(i, j);
    require_kappa(g);
    const Grid& gr = g.grid();
    const VecField dh = h_gradient(g);
    const KL kl = compute_K_L(g);
    const Vec3& a = g.moments().directional;
    MNFields out;
    out.N.resize(gr.size());
    out.M.resize(gr.size());
    out.M_check.resize(gr.size());
    parallel_for(gr.size(), [&](std::size_t n) {
        const Vec3 v = gr.node(n);
        out.N[n] = v[i] * dh[j][n] - v[j] * dh[i][n];
        out.M[n] = -a[i] * dh[j][n] + kl.K * v[j] - kl.L[j];
        out.M_check[n] = a[j] * dh[i][n] - kl.K * v[i] + kl.L[i];
    });
    return out;
}

QMoments q_moments_bruteforce(const State& g, int i, int j)
{
    require_axes(i, j);
    const Grid& gr = g.grid();
    const Field& f = g.values();
    const VecField dh = h_gradient(g);
    const std::size_t N = gr.size();
    const double w = gr.weight();
    QMoments out;
    out.plain.assign(N, 0.0);
    out.wi.assign(N, 0.0);
    out.wj.assign(N, 0.0);
    parallel_for(N, [&](std::size_t iv) {
        const Vec3 v = gr.node(iv);
        double s0 = 0.0, si = 0.0, sj = 0.0;
        for (std::size_t iw = 0; iw < N; ++iw) {
            if (iw == iv) continue;
            const Vec3 u = gr.node(iw);
            const double q = (v[i] - u[i]) * (dh[j][iv] - dh[j][iw]) - (v[j] - u[j]) * (dh[i][iv] - dh[i][iw]);
            const double gq = q * f[iw];
            s0 += gq;
            si += gq * u[i];
            sj += gq * u[j];
        }
        out.plain[iv] = s0 * w;
        out.wi[iv] = si * w;
        out.wj[iv] = sj * w;
    });
    return out;
}

QMoments q_moments_expanded(const State& g, int i, int j)
{
    require_axes(i, j);
    const Grid& gr = g.grid();
    const Field& f = g.values();
    const VecField dh = h_gradient(g);
    const std::size_t N = gr.size();

    // For chi in {1, w_i, w_j}: mu = sum g chi, mw[k] = sum g chi w_k, P[l] = sum g chi d_l h,
    // T[k][l] = sum g chi w_k d_l h.
    struct Sums {
        double mu = 0.0;
        double mw[3] = {0, 0, 0};
        double P[3] = {0, 0, 0};
        double T[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    };
    auto accumulate = [&](int axis) {
        Sums s;
        for (std::size_t n = 0; n < N; ++n) {
            const Vec3 u = gr.node(n);
            const double c = f[n] * (axis < 0 ? 1.0 : u[axis]) * gr.weight();
            s.mu += c;
            for (int k = 0; k < 3; ++k) {
                s.mw[k] += c * u[k];
                s.P[k] += c * dh[k][n];
                for (int l = 0; l < 3; ++l) s.T[k][l] += c * u[k] * dh[l][n];
            }
        }
        return s;
    };
    const Sums s0 = accumulate(-1), si = accumulate(i), sj = accumulate(j);
    auto eval = [&](const Sums& s, std::size_t n) {
        const Vec3 v = gr.node(n);
        const double a = v[i] * dh[j][n] * s.mu - v[i] * s.P[j] - dh[j][n] * s.mw[i] + s.T[i][j];
        const double b = v[j] * dh[i][n] * s.mu - v[j] * s.P[i] - dh[i][n] * s.mw[j] + s.T[j][i];
        return a - b;
    };
    QMoments out;
    out.plain.resize(N);
    out.wi.resize(N);
    out.wj.resize(N);
    for (std::size_t n = 0; n < N; ++n) {
        out.plain[n] = eval(s0, n);
        out.wi[n] = eval(si, n);
        out.wj[n] = eval(sj, n);
    }
    return out;
}

double circle_infimum(double mx, double mxy, double my)
{
    const double mean = 0.5 * (mx + my);
    const double half = 0.5 * (mx - my);
    return mean - std::hypot(half, mxy);
}

SupResult sup_weighted_potential(const State& g, double gamma, double s)
{
    const Grid& gr = g.grid();
    const Field& f = g.values();
    Field rho(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) {
        const double r = std::sqrt(norm2(gr.node(n)));
        rho[n] = f[n] * (s == 0.0 ? 1.0 : std::pow(r, s));
    }
    SupResult out;
    out.grid_max = grid_sup_potential(gr, rho, gamma);
    out.asymptote = integrate(gr, rho);
    out.value = std::max(out.grid_max, out.asymptote);
    return out;
}

SupResult sup_weighted_bracket2(const State& g, double gamma)
{
    const Grid& gr = g.grid();
    const Field& f = g.values();
    Field rho(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) rho[n] = f[n] * (1.0 + norm2(gr.node(n)));
    SupResult out;
    out.grid_max = grid_sup_potential(gr, rho, gamma);
    out.asymptote = integrate(gr, rho);
    out.value = std::max(out.grid_max, out.asymptote);
    return out;
}

ConstantsBundle constants_bundle(const State& g, double gamma)
{
    require_kappa(g);
    if (!(gamma > -4.0)) fail(Errc::invalid_argument, "potential exponent must exceed -4");
    ConstantsBundle c;
    c.gamma = gamma;
    c.epsilon = g.epsilon();
    c.kappa0 = g.kappa0();
    const KL kl = compute_K_L(g);
    c.K = kl.K;
    c.L = kl.L;
    c.a = g.moments().directional;

    for (int l = 0; l < 3; ++l) {
        if (gamma >= 0.0) {
            c.A_ell[l] = c.a[l] / 3.0;
        } else {
            const double mx = moment(g, [&](const Vec3& v, double x) { return x * v[l] * v[l] * std::pow(bracket(v), gamma); });
            const double mxy = moment(g, [&](const Vec3& v, double x) { return x * v[l] * std::pow(bracket(v), gamma); });
            const double my = moment(g, [&](const Vec3& v, double x) { return x * std::pow(bracket(v), gamma); });
            c.A_ell[l] = circle_infimum(mx, mxy, my);
        }
    }
    const double wexp = -2.0 + std::min(gamma, 0.0);
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int p = 0; p < 3; ++p) {
        const int i = pairs[p][0], j = pairs[p][1];
        const double mx = moment(g, [&](const Vec3& v, double x) { return x * v[i] * v[i] * std::pow(bracket(v), wexp); });
        const double mxy = moment(g, [&](const Vec3& v, double x) { return x * v[i] * v[j] * std::pow(bracket(v), wexp); });
        const double my = moment(g, [&](const Vec3& v, double x) { return x * v[j] * v[j] * std::pow(bracket(v), wexp); });
        const double inv = circle_infimum(mx, mxy, my);
        if (!(inv > 0.0)) fail(Errc::degenerate, "degenerate direction");
        c.B_ij[p] = 1.0 / inv;
    }
    const double amin = std::min({c.a[0], c.a[1], c.a[2]});
    const double Amin = std::min({c.A_ell[0], c.A_ell[1], c.A_ell[2]});
    if (!(amin > 0.0) || !(Amin > 0.0)) fail(Errc::degenerate, "degenerate direction");
    c.e_gamma = 3.0 / amin;
    c.A_gamma = std::max(1.0, 3.0 / Amin);
    c.B_gamma = std::max({c.B_ij[0], c.B_ij[1], c.B_ij[2]});
    c.I0 = sup_weighted_potential(g, gamma, 0.0).value;
    c.I2 = sup_weighted_potential(g, gamma, 2.0).value;
    c.script_I = c.I0 + c.I2;
    c.m_2g = weighted_moment(g, 2.0 + gamma);
    const double inv_lambda = 510.0 * std::pow(c.e_gamma, 3) / (c.kappa0 * c.kappa0) * std::max(1.0, c.B_gamma) *
                              std::max(1.0, c.m_2g) * c.script_I;
    c.lambda = 1.0 / inv_lambda;
    return c;
}

RadialWeight default_phi(double gamma)
{
    return {[gamma](double r) { return std::pow(1.0 + 2.0 * r, 0.25 * gamma); },
            [gamma](double r) { return 0.5 * gamma * std::pow(1.0 + 2.0 * r, 0.25 * gamma - 1.0); }};
}

Field default_M(const State& g, double gamma)
{
    const Grid& gr = g.grid();
    const Field& f = g.values();
    Field M(f.size());
    for (std::size_t n = 0; n < f.size(); ++n)
        M[n] = (1.0 - g.epsilon() * f[n]) * std::pow(bracket(gr.node(n)), gamma);
    return M;
}

double G_s(const Grid& grid, const std::function<double(double)>& chi, const Field& f, double s)
{
    return grid.weight() * reduce_sum(f.size(), [&](std::size_t n) {
        const Vec3 v = grid.node(n);
        return chi(0.5 * norm2(v)) * f[n] * std::pow(bracket(v), s);
    });
}

GramResult gram_functionals(const State& g, double gamma, const RadialWeight& w, const Field& M, int i, int j,
                            double M_limit)
{
    require_axes(i, j);
    const Grid& gr = g.grid();
    const Field& f = g.values();
    if (M.size() != f.size()) fail(Errc::invalid_argument, "weight field length does not match grid");
    const double eps = g.epsilon();
    Field F(f.size()), FM(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) {
        F[n] = f[n] * (1.0 - eps * f[n]);
        FM[n] = F[n] * M[n];
    }
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    for (std::size_t n = 0; n < f.size(); ++n) {
        const Vec3 v = gr.node(n);
        const Eigen::Vector3d b(1.0, v[i], v[j]);
        G += gr.weight() * w.phi(0.5 * norm2(v)) * F[n] * b * b.transpose();
    }
    GramResult r;
    r.Delta = G.determinant();
    r.G2phiF = G_s(gr, w.phi, F, 2.0);
    r.G2oneFM = G_s(gr, [](double) { return 1.0; }, FM, 2.0);
    r.G1phig = G_s(gr, w.phi, f, 1.0);
    r.G2dphig = G_s(gr, [&](double x) { return std::abs(w.dphi(x)); }, f, 2.0);

    Field rho(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) {
        const Vec3 v = gr.node(n);
        const double p = w.phi(0.5 * norm2(v));
        rho[n] = p * p * F[n] * (1.0 + norm2(v));
    }
    const int n = gr.n(), m = 2 * n - 1;
    const auto tab = offset_table(gr, -gamma);
    double J = reduce_max(gr.size(), [&](std::size_t iv) {
        const auto c = gr.cell(iv);
        double acc = 0.0;
        std::size_t iw = 0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const std::size_t row = (static_cast<std::size_t>(c[0] - a + n - 1) * m + (c[1] - b + n - 1)) * m;
                for (int k = 0; k < n; ++k, ++iw)
                    if (iw != iv) acc += tab[row + (c[2] - k + n - 1)] * rho[iw];
            }
        if (gamma == 0.0) acc += rho[iv];
        return M[iv] * acc * gr.weight();
    });
    if (M_limit >= 0.0) J = std::max(J, M_limit * integrate(gr, rho));
    r.J = J;
    return r;
}

} // namespace lfd
