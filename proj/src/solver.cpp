#include "solver.hpp"

#include "equilibria.hpp"
#include "error.hpp"
#include "exec.hpp"
#include "functionals.hpp"
#include "production.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>

namespace lfd {

namespace {

std::mutex& plan_mutex()
{
    static std::mutex m;
    return m;
}

void require_gamma(double gamma)
{
    if (!(gamma > -4.0) || !std::isfinite(gamma)) fail(Errc::invalid_argument, "gamma must be finite and > -4");
}

// Kernel component (a, b) of h^3 |z|^gamma (|z|^2 delta - z z^T); a = b = -1 gives h^3 |z|^{gamma+2}.
double kernel(const Vec3& z, double gamma, int a, int b, double w)
{
    const double r2 = norm2(z);
    if (r2 == 0.0) return 0.0;
    const double p = std::pow(r2, 0.5 * gamma);
    if (a < 0) return w * p * r2;
    return w * p * ((a == b ? r2 : 0.0) - z[a] * z[b]);
}

constexpr int pairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
int pair_slot(int a, int b)
{
    if (a == b) return a;
    if (a > b) std::swap(a, b);
    return a == 0 ? (b == 1 ? 3 : 4) : 5;
}

// The vector standing for grad f in the flux.
VecField flux_gradient(const Grid& gr, const Field& f, const Field& F, double epsilon, FluxForm form)
{
    if (form == FluxForm::gradient) return gradient(gr, f);
    Field h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = std::max(f[i], vacuum_floor);
        h[i] = std::log(x) - std::log1p(-std::min(epsilon * x, 1.0 - 1e-16));
    }
    VecField d = gradient(gr, h);
    for (auto& c : d)
        for (std::size_t i = 0; i < f.size(); ++i) c[i] *= F[i];
    return d;
}

} // namespace

struct LandauOperator::Impl {
    int n = 0, m = 0;
    std::size_t real_size = 0, spec_size = 0;
    // Six tensor components, then the scalar diffusion kernel, all pre-scaled by 1/m^3.
    std::vector<std::vector<std::complex<double>>> kernels;
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;

    ~Impl()
    {
        std::lock_guard<std::mutex> lk(plan_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(rbuf);
        fftw_free(cbuf);
    }

    void load(const Field& f)
    {
        std::fill(rbuf, rbuf + real_size, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    rbuf[(static_cast<std::size_t>(i) * m + j) * m + k] =
                        f[(static_cast<std::size_t>(i) * n + j) * n + k];
    }

    std::vector<std::complex<double>> forward(const Field& f)
    {
        load(f);
        fftw_execute(fwd);
        const auto* c = reinterpret_cast<std::complex<double>*>(cbuf);
        return {c, c + spec_size};
    }

    template <class Spectrum>
    Field backward(Spectrum spec)
    {
        auto* c = reinterpret_cast<std::complex<double>*>(cbuf);
        for (std::size_t q = 0; q < spec_size; ++q) c[q] = spec(q);
        fftw_execute(bwd);
        Field out(static_cast<std::size_t>(n) * n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    out[(static_cast<std::size_t>(i) * n + j) * n + k] =
                        rbuf[(static_cast<std::size_t>(i) * m + j) * m + k];
        return out;
    }
};

LandauOperator::LandauOperator(const Grid& grid, double gamma, FluxForm form)
    : grid_(grid), gamma_(gamma), form_(form), impl_(std::make_unique<Impl>())
{
    require_gamma(gamma);
    Impl& I = *impl_;
    I.n = grid.n();
    I.m = 2 * I.n;
    I.real_size = static_cast<std::size_t>(I.m) * I.m * I.m;
    I.spec_size = static_cast<std::size_t>(I.m) * I.m * (I.m / 2 + 1);
    I.rbuf = fftw_alloc_real(I.real_size);
    I.cbuf = fftw_alloc_complex(I.spec_size);
    if (!I.rbuf || !I.cbuf) fail(Errc::numerical, "FFT buffer allocation failed");
    {
        std::lock_guard<std::mutex> lk(plan_mutex());
        I.fwd = fftw_plan_dft_r2c_3d(I.m, I.m, I.m, I.rbuf, I.cbuf, FFTW_ESTIMATE);
        I.bwd = fftw_plan_dft_c2r_3d(I.m, I.m, I.m, I.cbuf, I.rbuf, FFTW_ESTIMATE);
    }
    if (!I.fwd || !I.bwd) fail(Errc::numerical, "FFT plan creation failed");

    const double h = grid.h(), w = grid.weight();
    const double scale = 1.0 / static_cast<double>(I.real_size);
    auto offset = [&](int p) { return p < I.n ? p : p - I.m; }; // index p == n never pairs two nodes
    for (int comp = 0; comp < 7; ++comp) {
        const int a = comp < 6 ? pairs[comp][0] : -1, b = comp < 6 ? pairs[comp][1] : -1;
        for (int i = 0; i < I.m; ++i)
            for (int j = 0; j < I.m; ++j)
                for (int k = 0; k < I.m; ++k) {
                    const std::size_t q = (static_cast<std::size_t>(i) * I.m + j) * I.m + k;
                    if (i == I.n || j == I.n || k == I.n) {
                        I.rbuf[q] = 0.0;
                        continue;
                    }
                    const Vec3 z{offset(i) * h, offset(j) * h, offset(k) * h};
                    I.rbuf[q] = kernel(z, gamma, a, b, w) * scale;
                }
        fftw_execute(I.fwd);
        const auto* c = reinterpret_cast<std::complex<double>*>(I.cbuf);
        I.kernels.emplace_back(c, c + I.spec_size);
    }
}

LandauOperator::~LandauOperator() = default;

Field LandauOperator::apply_with(const Field& f, const Field& F, double epsilon, VecField* flux) const
{
    if (f.size() != grid_.size()) fail(Errc::invalid_argument, "field length does not match grid");
    Impl& I = *impl_;
    const VecField df = flux_gradient(grid_, f, F, epsilon, form_);
    const auto Fh = I.forward(F);
    std::vector<std::complex<double>> dh[3] = {I.forward(df[0]), I.forward(df[1]), I.forward(df[2])};

    // A = a * F (six components), c_i = sum_j a_ij * d_j f
    Field A[6];
    for (int s = 0; s < 6; ++s) {
        const auto& K = I.kernels[s];
        A[s] = I.backward([&](std::size_t q) { return K[q] * Fh[q]; });
    }
    VecField G;
    for (int a = 0; a < 3; ++a) {
        const auto& K0 = I.kernels[pair_slot(a, 0)];
        const auto& K1 = I.kernels[pair_slot(a, 1)];
        const auto& K2 = I.kernels[pair_slot(a, 2)];
        const Field c = I.backward([&](std::size_t q) { return K0[q] * dh[0][q] + K1[q] * dh[1][q] + K2[q] * dh[2][q]; });
        Field& Ga = G[a];
        Ga.resize(f.size());
        const Field& Aa0 = A[pair_slot(a, 0)];
        const Field& Aa1 = A[pair_slot(a, 1)];
        const Field& Aa2 = A[pair_slot(a, 2)];
        for (std::size_t i = 0; i < f.size(); ++i)
            Ga[i] = (Aa0[i] * df[0][i] + Aa1[i] * df[1][i] + Aa2[i] * df[2][i]) - F[i] * c[i];
    }
    Field Q = divergence(grid_, G);
    if (flux) *flux = std::move(G);
    return Q;
}

Field LandauOperator::apply(const Field& f, double epsilon, VecField* flux) const
{
    Field F(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) F[i] = f[i] * (1.0 - epsilon * f[i]);
    return apply_with(f, F, epsilon, flux);
}

Field LandauOperator::apply_classical(const Field& f, VecField* flux) const
{
    return apply_with(f, f, 0.0, flux);
}

double LandauOperator::diffusion_scale(const Field& f, double epsilon) const
{
    Impl& I = *impl_;
    Field F(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) F[i] = f[i] * (1.0 - epsilon * f[i]);
    const auto Fh = I.forward(F);
    const auto& K = I.kernels[6];
    const Field d = I.backward([&](std::size_t q) { return K[q] * Fh[q]; });
    return *std::max_element(d.begin(), d.end());
}

Field collision_operator(const State& f, double gamma, FluxForm form)
{
    LandauOperator op(f.grid(), gamma, form);
    return op.apply(f.values(), f.epsilon());
}

Field landau_operator(const State& f, double gamma, FluxForm form)
{
    if (f.epsilon() != 0.0) fail(Errc::invalid_argument, "classical operator needs an epsilon = 0 state");
    LandauOperator op(f.grid(), gamma, form);
    return op.apply_classical(f.values());
}

Field collision_operator_direct(const State& s, double gamma, FluxForm form, VecField* flux)
{
    require_gamma(gamma);
    const Grid& gr = s.grid();
    const Field& f = s.values();
    const double eps = s.epsilon(), w = gr.weight();
    const std::size_t N = f.size();
    Field F(N);
    for (std::size_t i = 0; i < N; ++i) F[i] = f[i] * (1.0 - eps * f[i]);
    const VecField df = flux_gradient(gr, f, F, eps, form);
    VecField G;
    for (auto& c : G) c.assign(N, 0.0);
    parallel_for(N, [&](std::size_t i) {
        const Vec3 v = gr.node(i);
        double acc[3] = {0.0, 0.0, 0.0};
        for (std::size_t j = 0; j < N; ++j) {
            if (j == i) continue;
            const Vec3 u = gr.node(j);
            const Vec3 z{v[0] - u[0], v[1] - u[1], v[2] - u[2]};
            const double r2 = norm2(z);
            const double p = std::pow(r2, 0.5 * gamma) * w;
            double y[3];
            for (int a = 0; a < 3; ++a) y[a] = F[j] * df[a][i] - F[i] * df[a][j];
            const double zy = z[0] * y[0] + z[1] * y[1] + z[2] * y[2];
            for (int a = 0; a < 3; ++a) acc[a] += p * (r2 * y[a] - z[a] * zy);
        }
        for (int a = 0; a < 3; ++a) G[a][i] = acc[a];
    });
    Field Q = divergence(gr, G);
    if (flux) *flux = std::move(G);
    return Q;
}

double dt_auto(const State& f, double gamma)
{
    LandauOperator op(f.grid(), gamma);
    const double h = f.grid().h();
    return 0.2 * h * h / op.diffusion_scale(f.values(), f.epsilon());
}

Stepper::Stepper(const Grid& grid, const SolverConfig& cfg) : cfg_(cfg), op_(grid, cfg.gamma, cfg.flux) {}
Stepper::~Stepper() = default;

namespace {

void check_field(const Grid& gr, const Field& f, const char* where)
{
    for (double x : f)
        if (!std::isfinite(x)) fail(Errc::numerical, std::string("non-finite value after ") + where);
    if (!(integrate(gr, f) > 0.0)) fail(Errc::numerical, std::string("non-positive mass after ") + where);
}

// f <- f (c . (1, v, |v|^2)) with c solving the five moment constraints.
double project(const Grid& gr, Field& f, const Moments& target)
{
    using Vec5 = Eigen::Matrix<double, 5, 1>;
    using Mat5 = Eigen::Matrix<double, 5, 5>;
    const double w = gr.weight();
    Mat5 M = Mat5::Zero();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3 v = gr.node(i);
        Vec5 p;
        p << 1.0, v[0], v[1], v[2], norm2(v);
        M.noalias() += (w * f[i]) * p * p.transpose();
    }
    const Vec5 t(target.mass, target.momentum[0], target.momentum[1], target.momentum[2], target.energy);
    const Vec5 c = M.fullPivLu().solve(t);
    if (!c.allFinite()) fail(Errc::numerical, "conservation projection is singular");
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3 v = gr.node(i);
        f[i] *= c[0] + c[1] * v[0] + c[2] * v[1] + c[3] * v[2] + c[4] * norm2(v);
    }
    Vec5 id;
    id << 1.0, 0.0, 0.0, 0.0, 0.0;
    return (c - id).cwiseAbs().maxCoeff();
}

} // namespace

State Stepper::step(const State& s, double dt, StepInfo* info, const Moments* target) const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) fail(Errc::invalid_argument, "dt must be positive");
    if (!(s.grid() == op_.grid())) fail(Errc::invalid_argument, "state grid differs from the stepper grid");
    const Grid& gr = s.grid();
    const double eps = s.epsilon();
    const Field& f0 = s.values();
    const std::size_t N = f0.size();

    const Field q0 = op_.apply(f0, eps);
    Field f1(N);
    for (std::size_t i = 0; i < N; ++i) f1[i] = f0[i] + dt * q0[i];
    check_field(gr, f1, "the first stage");
    const Field q1 = op_.apply(f1, eps);
    Field f2(N);
    for (std::size_t i = 0; i < N; ++i) f2[i] = 0.5 * f0[i] + 0.5 * (f1[i] + dt * q1[i]);
    check_field(gr, f2, "the second stage");

    StepInfo local;
    if (cfg_.clip) {
        const double top = eps > 0.0 ? 1.0 / eps : std::numeric_limits<double>::infinity();
        for (double& x : f2) {
            if (x < 0.0 || x > top) {
                x = std::clamp(x, 0.0, top);
                ++local.clipped;
            }
        }
    }
    if (cfg_.conservation_projection) {
        local.projection_correction = project(gr, f2, target ? *target : s.moments());
        check_field(gr, f2, "the conservation projection");
    }
    if (info) *info = local;
    State out(gr, std::move(f2), eps);
    out.descriptor = s.descriptor;
    return out;
}

State step(const State& f, const SolverConfig& cfg)
{
    Stepper st(f.grid(), cfg);
    const double dt = cfg.dt ? *cfg.dt : cfg.dt_scale * dt_auto(f, cfg.gamma);
    return st.step(f, dt);
}

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// S_eps of the density clamped into [0, 1/eps]; S_0 = -int f log f. Counts clamped nodes.
double entropy_clamped(const State& s, int& negatives)
{
    const Field& f = s.values();
    const double eps = s.epsilon();
    negatives = 0;
    for (double x : f)
        if (x < 0.0) ++negatives;
    const double w = s.grid().weight();
    if (eps == 0.0)
        return -w * reduce_sum(f.size(), [&](std::size_t i) { return xlogx(std::max(f[i], 0.0)); });
    const double acc = reduce_sum(f.size(), [&](std::size_t i) {
        const double y = std::clamp(eps * f[i], 0.0, 1.0);
        return xlogx(y) + xlogx(1.0 - y);
    });
    return -acc * w / eps;
}

// sum of f log(f/M) + (1 - eps f)/eps log((1 - eps f)/(1 - eps M)) (f - M + f log(f/M) at eps = 0).
// Equals S(M) - S(f) when the moments agree, without the cancellation of the difference.
double relative_entropy_termwise(const State& s, const Field& M)
{
    const Field& f = s.values();
    const double eps = s.epsilon();
    const double acc = reduce_sum(f.size(), [&](std::size_t i) {
        const double x = std::max(f[i], 0.0), m = M[i];
        const double a = x > 0.0 ? x * std::log(x / m) : 0.0;
        if (eps == 0.0) return a - x + m;
        const double y = std::min(eps * x, 1.0);
        const double b = y < 1.0 ? (1.0 - y) / eps * (std::log1p(-y) - std::log1p(-eps * m)) : 0.0;
        return a + b;
    });
    return acc * s.grid().weight();
}

} // namespace

TrajectoryRecord evolve(const State& f0, const SolverConfig& cfg)
{
    if (!(cfg.t_end > 0.0)) fail(Errc::invalid_argument, "t_end must be positive");
    if (cfg.record_every < 1) fail(Errc::invalid_argument, "record_every must be a positive integer");
    if (cfg.dt && !(*cfg.dt > 0.0)) fail(Errc::invalid_argument, "dt must be positive");
    if (!cfg.dt && !(cfg.dt_scale > 0.0)) fail(Errc::invalid_argument, "dt scale must be positive");
    require_gamma(cfg.gamma);

    Stepper stepper(f0.grid(), cfg);
    const Grid& gr = f0.grid();
    const double h = gr.h();
    const double dt_first = cfg.dt ? *cfg.dt : cfg.dt_scale * 0.2 * h * h / stepper.op().diffusion_scale(f0.values(), f0.epsilon());

    // Reference equilibrium with the grid moments of f0.
    const Moments& m0 = f0.moments();
    const Field Mref = [&] {
        if (f0.epsilon() == 0.0) return tilt_to_moments(gr, maxwellian(gr).values(), m0.mass, m0.momentum, m0.energy);
        const bool standard = std::abs(m0.mass - 1.0) < 1e-9 && std::abs(m0.energy - 3.0) < 1e-9 &&
                              norm2(m0.momentum) < 1e-18;
        if (!standard) fail(Errc::invalid_argument, "evolve needs a normalized initial state (mass 1, momentum 0, energy 3)");
        return grid_fd_statistics(gr, f0.epsilon()).second.values();
    }();

    // The diffusive bound ignores the log-form flux in the far tails, where a coarse grid can push a
    // corner node below zero; from there the run blows up within a few dozen steps. With an automatic
    // step the run restarts at half the step instead; a fixed step is taken as given.
    constexpr int max_halvings = 6;
    for (int halvings = 0;; ++halvings) {
        const bool guarded = !cfg.dt && halvings < max_halvings;
        const long steps = std::max<long>(1, static_cast<long>(std::ceil(cfg.t_end / (dt_first / (1L << halvings)) - 1e-9)));
        const double dt = cfg.t_end / static_cast<double>(steps);

        TrajectoryRecord rec;
        rec.dt = dt;
        rec.steps = steps;
        rec.dt_halvings = halvings;
        auto record = [&](const State& s, long k, double entropy, int neg) {
            const Moments& m = s.moments();
            rec.t.push_back(k * dt);
            rec.step_index.push_back(static_cast<int>(k));
            rec.entropy.push_back(entropy);
            rec.production.push_back(entropy_production_projection(s, cfg.gamma).value);
            rec.relative_entropy.push_back(relative_entropy_termwise(s, Mref));
            rec.mass.push_back(m.mass);
            rec.px.push_back(m.momentum[0]);
            rec.py.push_back(m.momentum[1]);
            rec.pz.push_back(m.momentum[2]);
            rec.energy.push_back(m.energy);
            rec.kappa0.push_back(s.kappa0());
            rec.f_inf.push_back(s.sup());
            rec.negative_nodes.push_back(neg);
        };

        State cur = f0;
        int neg = 0;
        double prev_entropy = entropy_clamped(cur, neg);
        const int neg0 = neg;
        record(cur, 0, prev_entropy, neg);
        bool unstable = false;
        for (long k = 1; k <= steps && !unstable; ++k) {
            StepInfo info;
            try {
                cur = stepper.step(cur, dt, &info, &m0);
            } catch (const Error& e) {
                if (!guarded || e.code() != Errc::numerical) throw;
                unstable = true;
                break;
            }
            rec.clipped_total += info.clipped;
            const double S = entropy_clamped(cur, neg);
            if (guarded && neg > neg0) {
                unstable = true;
                break;
            }
            rec.worst_entropy_drop = std::max(rec.worst_entropy_drop, prev_entropy - S);
            prev_entropy = S;
            if (k % cfg.record_every == 0 || k == steps) record(cur, k, S, neg);
        }
        if (unstable) continue;
        rec.final_state = cur;
        return rec;
    }
}

DecayFit fit_decay_rate(const TrajectoryRecord& rec, double t0)
{
    constexpr double floor = 1e-14;
    DecayFit fit;
    std::vector<double> ts, ys;
    double top = 0.0;
    for (std::size_t i = 0; i < rec.t.size(); ++i) {
        if (rec.t[i] < t0) continue;
        const double H = rec.relative_entropy[i];
        top = std::max(top, H);
        if (!(H > floor)) {
            fit.floor_truncated = true;
            break;
        }
        ts.push_back(rec.t[i]);
        ys.push_back(-std::log(H));
    }
    fit.points = static_cast<int>(ts.size());
    if (top <= floor) {
        fit.stationary = true;
        return fit;
    }
    if (ts.size() < 5) fail(Errc::degenerate, "fewer than 5 records with positive relative entropy after t0");
    const double n = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += ys[i];
    }
    const double tm = st / n, ym = sy / n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - tm) * (ts[i] - tm);
        sty += (ts[i] - tm) * (ys[i] - ym);
        syy += (ys[i] - ym) * (ys[i] - ym);
    }
    fit.mu = sty / stt;
    fit.r2 = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
    return fit;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec)
{
    os << "t,S_eps,D_eps,H_rel,mass,px,py,pz,energy,kappa0,f_inf\n";
    os << std::setprecision(12);
    for (std::size_t i = 0; i < rec.t.size(); ++i)
        os << rec.t[i] << ',' << rec.entropy[i] << ',' << rec.production[i] << ',' << rec.relative_entropy[i] << ','
           << rec.mass[i] << ',' << rec.px[i] << ',' << rec.py[i] << ',' << rec.pz[i] << ',' << rec.energy[i] << ','
           << rec.kappa0[i] << ',' << rec.f_inf[i] << '\n';
}

} // namespace lfd
