#include "lfd/lfd.h"

#include "constants.hpp"
#include "equilibria.hpp"
#include "error.hpp"
#include "exec.hpp"
#include "functionals.hpp"
#include "harness.hpp"
#include "production.hpp"
#include "solver.hpp"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

struct lfd_grid {
    lfd::Grid g;
};
struct lfd_state {
    lfd::State s;
};
struct lfd_reports {
    std::vector<lfd::CheckReport> r;
};
struct lfd_trajectory {
    lfd::TrajectoryRecord rec;
};

namespace {

thread_local std::string g_last_error;

lfd_status to_status(lfd::Errc c)
{
    switch (c) {
    case lfd::Errc::invalid_argument: return LFD_ERR_INVALID_ARGUMENT;
    case lfd::Errc::domain: return LFD_ERR_DOMAIN;
    case lfd::Errc::degenerate: return LFD_ERR_DEGENERATE;
    case lfd::Errc::saturation: return LFD_ERR_SATURATION;
    case lfd::Errc::numerical: return LFD_ERR_NUMERICAL;
    }
    return LFD_ERR_INTERNAL;
}

template <class Body>
lfd_status guard(Body body)
{
    try {
        body();
        g_last_error.clear();
        return LFD_OK;
    } catch (const lfd::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return LFD_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LFD_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown exception";
        return LFD_ERR_INTERNAL;
    }
}

template <class T>
void need(const T* p, const char* what)
{
    if (!p) lfd::fail(lfd::Errc::invalid_argument, std::string(what) + " is null");
}

void copy_text(char* dst, std::size_t cap, const std::string& src)
{
    if (cap == 0) return;
    const std::size_t n = std::min(cap - 1, src.size());
    std::memcpy(dst, src.data(), n);
    dst[n] = '\0';
}

lfd_state* wrap(lfd::State s) { return new lfd_state{std::move(s)}; }

void fill(lfd_equilibrium* out, const lfd::EquilibriumParams& p)
{
    out->a = p.a;
    out->b = p.b;
    out->epsilon = p.epsilon;
    out->residual_mass = p.residual_mass;
    out->residual_energy = p.residual_energy;
    out->grid_mass = p.grid_mass;
    out->grid_energy = p.grid_energy;
    out->sup_norm = p.sup_norm;
    out->iterations = p.iterations;
    out->used_fallback = p.used_fallback ? 1 : 0;
}

void fill(lfd_check_report* out, const lfd::CheckReport& r)
{
    *out = lfd_check_report{};
    copy_text(out->name, sizeof out->name, r.name);
    copy_text(out->state_descriptor, sizeof out->state_descriptor, r.state_descriptor);
    copy_text(out->orientation, sizeof out->orientation, r.orientation);
    copy_text(out->reason, sizeof out->reason, r.reason);
    out->gamma = r.gamma;
    out->epsilon = r.epsilon;
    out->n = r.n;
    out->lhs = r.lhs;
    out->rhs = r.rhs;
    out->margin = r.margin;
    out->passed = r.passed ? 1 : 0;
    out->skipped = r.skipped ? 1 : 0;
}

lfd::SolverConfig to_config(const lfd_solver_config* c)
{
    lfd::SolverConfig cfg;
    cfg.gamma = c->gamma;
    if (c->dt > 0.0) cfg.dt = c->dt;
    cfg.dt_scale = c->dt_scale;
    cfg.t_end = c->t_end;
    cfg.conservation_projection = c->conservation_projection != 0;
    cfg.record_every = c->record_every;
    cfg.clip = c->clip != 0;
    if (c->flux != LFD_FLUX_GRADIENT && c->flux != LFD_FLUX_ENTROPIC)
        lfd::fail(lfd::Errc::invalid_argument, "unknown flux form");
    cfg.flux = c->flux == LFD_FLUX_GRADIENT ? lfd::FluxForm::gradient : lfd::FluxForm::entropic;
    return cfg;
}

std::ofstream open_out(const char* path)
{
    need(path, "path");
    std::ofstream os(path);
    if (!os) lfd::fail(lfd::Errc::invalid_argument, std::string("cannot open ") + path + " for writing");
    return os;
}

} // namespace

extern "C" {

const char* lfd_version(void) { return "1.0.0"; }
const char* lfd_last_error(void) { return g_last_error.c_str(); }

const char* lfd_status_name(lfd_status s)
{
    switch (s) {
    case LFD_OK: return "ok";
    case LFD_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LFD_ERR_DOMAIN: return "domain";
    case LFD_ERR_DEGENERATE: return "degenerate";
    case LFD_ERR_SATURATION: return "saturation";
    case LFD_ERR_NUMERICAL: return "numerical";
    case LFD_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

lfd_status lfd_set_threads(int threads)
{
    return guard([&] { lfd::set_threads(threads); });
}

lfd_status lfd_set_deterministic(int on)
{
    return guard([&] { lfd::set_reduction(on ? lfd::Reduction::deterministic : lfd::Reduction::fast); });
}

lfd_status lfd_grid_create(int n, double extent, lfd_grid** out)
{
    return guard([&] {
        need(out, "out");
        *out = nullptr;
        *out = new lfd_grid{lfd::Grid(n, extent)};
    });
}

void lfd_grid_destroy(lfd_grid* g) { delete g; }
int lfd_grid_n(const lfd_grid* g) { return g ? g->g.n() : 0; }
double lfd_grid_extent(const lfd_grid* g) { return g ? g->g.extent() : 0.0; }
double lfd_grid_spacing(const lfd_grid* g) { return g ? g->g.h() : 0.0; }
size_t lfd_grid_size(const lfd_grid* g) { return g ? g->g.size() : 0; }

lfd_status lfd_grid_node(const lfd_grid* g, size_t index, double v[3])
{
    return guard([&] {
        need(g, "grid");
        need(v, "v");
        if (index >= g->g.size()) lfd::fail(lfd::Errc::invalid_argument, "node index out of range");
        const lfd::Vec3 x = g->g.node(index);
        for (int a = 0; a < 3; ++a) v[a] = x[a];
    });
}

lfd_status lfd_state_create(const lfd_grid* g, const double* values, size_t len, double epsilon, lfd_state** out)
{
    return guard([&] {
        need(g, "grid");
        need(values, "values");
        need(out, "out");
        *out = nullptr;
        if (len != g->g.size()) lfd::fail(lfd::Errc::invalid_argument, "value count does not match grid size");
        for (size_t i = 0; i < len; ++i) {
            if (values[i] < 0.0) lfd::fail(lfd::Errc::domain, "negative density value");
            if (epsilon > 0.0 && epsilon * values[i] > 1.0) lfd::fail(lfd::Errc::domain, "density exceeds 1/epsilon");
        }
        *out = wrap(lfd::State(g->g, lfd::Field(values, values + len), epsilon));
    });
}

void lfd_state_destroy(lfd_state* s) { delete s; }

lfd_status lfd_state_info_get(const lfd_state* s, lfd_state_info* out)
{
    return guard([&] {
        need(s, "state");
        need(out, "out");
        const lfd::Moments& m = s->s.moments();
        out->epsilon = s->s.epsilon();
        out->mass = m.mass;
        for (int a = 0; a < 3; ++a) out->momentum[a] = m.momentum[a];
        out->energy = m.energy;
        out->kappa0 = s->s.kappa0();
        out->sup = s->s.sup();
    });
}

lfd_status lfd_state_values(const lfd_state* s, double* out, size_t len)
{
    return guard([&] {
        need(s, "state");
        need(out, "out");
        const lfd::Field& f = s->s.values();
        if (len != f.size()) lfd::fail(lfd::Errc::invalid_argument, "buffer length does not match grid size");
        std::memcpy(out, f.data(), len * sizeof(double));
    });
}

lfd_status lfd_state_descriptor(const lfd_state* s, char* buf, size_t len)
{
    return guard([&] {
        need(s, "state");
        need(buf, "buffer");
        copy_text(buf, len, s->s.descriptor);
    });
}

lfd_status lfd_state_normalize(const lfd_state* s, lfd_state** out, lfd_normalize_info* info)
{
    return guard([&] {
        need(s, "state");
        need(out, "out");
        *out = nullptr;
        lfd::NormalizeInfo ni;
        lfd::State r = lfd::normalize_to_standard(s->s, &ni);
        if (info) {
            info->rho = ni.rho;
            for (int a = 0; a < 3; ++a) info->u[a] = ni.u[a];
            info->temperature = ni.temperature;
            for (int c = 0; c < 3; ++c)
                for (int k = 0; k < 3; ++k) info->rotation[c][k] = ni.rotation[c][k];
            info->tail_mass = ni.tail_mass;
            info->residual = ni.residual;
        }
        *out = wrap(std::move(r));
    });
}

double lfd_epsilon_bar(void) { return lfd::epsilon_bar(); }
double lfd_epsilon_saturation_limit(void) { return lfd::epsilon_saturation_limit(); }

lfd_status lfd_fd_parameters(double epsilon, lfd_equilibrium* out)
{
    return guard([&] {
        need(out, "out");
        fill(out, lfd::fd_parameters(epsilon));
    });
}

lfd_status lfd_fd_state(const lfd_grid* g, double epsilon, int grid_consistent, lfd_state** out,
                        lfd_equilibrium* params)
{
    return guard([&] {
        need(g, "grid");
        need(out, "out");
        *out = nullptr;
        auto r = grid_consistent ? lfd::grid_fd_statistics(g->g, epsilon) : lfd::solve_fd_statistics(g->g, epsilon);
        if (params) fill(params, r.first);
        *out = wrap(std::move(r.second));
    });
}

lfd_status lfd_maxwellian(const lfd_grid* g, lfd_state** out)
{
    return guard([&] {
        need(g, "grid");
        need(out, "out");
        *out = nullptr;
        *out = wrap(lfd::maxwellian(g->g));
    });
}

lfd_status lfd_saturated_state(const lfd_grid* g, double epsilon, lfd_state** out)
{
    return guard([&] {
        need(g, "grid");
        need(out, "out");
        *out = nullptr;
        *out = wrap(lfd::saturated_state(g->g, epsilon));
    });
}

lfd_status lfd_saturation_threshold(double rel_width, double* lower, double* upper)
{
    return guard([&] {
        const lfd::SaturationBracket b = lfd::saturation_threshold(rel_width);
        if (lower) *lower = b.value;
        if (upper) *upper = b.upper;
    });
}

#define LFD_SCALAR(call)                                                                                               \
    return guard([&] {                                                                                                 \
        need(s, "state");                                                                                              \
        need(out, "out");                                                                                              \
        *out = (call);                                                                                                 \
    })

lfd_status lfd_weighted_moment(const lfd_state* s, double exponent, double* out)
{
    LFD_SCALAR(lfd::weighted_moment(s->s, exponent));
}
lfd_status lfd_boltzmann_entropy(const lfd_state* s, double* out) { LFD_SCALAR(lfd::boltzmann_entropy(s->s)); }
lfd_status lfd_fd_entropy(const lfd_state* s, double* out) { LFD_SCALAR(lfd::fd_entropy(s->s)); }
lfd_status lfd_weighted_sqrt_fisher(const lfd_state* s, double gamma, double* out)
{
    LFD_SCALAR(lfd::weighted_sqrt_fisher(s->s, gamma));
}
lfd_status lfd_fisher_relative_K(const lfd_state* s, double gamma, double K, double* out)
{
    LFD_SCALAR(lfd::fisher_relative_K(s->s, gamma, K));
}
lfd_status lfd_fisher_relative_FD(const lfd_state* s, double gamma, double b_eps, double* out)
{
    LFD_SCALAR(lfd::fisher_relative_FD(s->s, gamma, b_eps));
}
lfd_status lfd_dt_auto(const lfd_state* s, double gamma, double* out) { LFD_SCALAR(lfd::dt_auto(s->s, gamma)); }

lfd_status lfd_entropy_production(const lfd_state* s, double gamma, lfd_production_form form, double* out)
{
    return guard([&] {
        need(s, "state");
        need(out, "out");
        if (form == LFD_PRODUCTION_PROJECTION)
            *out = lfd::entropy_production_projection(s->s, gamma).value;
        else if (form == LFD_PRODUCTION_CROSS)
            *out = lfd::entropy_production_cross(s->s, gamma).value;
        else
            lfd::fail(lfd::Errc::invalid_argument, "unknown production form");
    });
}

#undef LFD_SCALAR

lfd_status lfd_relative_entropy(const lfd_state* f, const lfd_state* g, double* out)
{
    return guard([&] {
        need(f, "f");
        need(g, "g");
        need(out, "out");
        *out = lfd::relative_entropy(f->s, g->s);
    });
}

lfd_status lfd_l1_distance(const lfd_state* f, const lfd_state* g, double* out)
{
    return guard([&] {
        need(f, "f");
        need(g, "g");
        need(out, "out");
        *out = lfd::l1_distance(f->s, g->s);
    });
}

lfd_status lfd_constants_bundle(const lfd_state* s, double gamma, lfd_constants* out)
{
    return guard([&] {
        need(s, "state");
        need(out, "out");
        const lfd::ConstantsBundle b = lfd::constants_bundle(s->s, gamma);
        out->gamma = b.gamma;
        out->epsilon = b.epsilon;
        out->K = b.K;
        for (int a = 0; a < 3; ++a) {
            out->L[a] = b.L[a];
            out->a[a] = b.a[a];
            out->A_ell[a] = b.A_ell[a];
            out->B_ij[a] = b.B_ij[a];
        }
        out->e_gamma = b.e_gamma;
        out->A_gamma = b.A_gamma;
        out->B_gamma = b.B_gamma;
        out->I0 = b.I0;
        out->I2 = b.I2;
        out->script_I = b.script_I;
        out->m_2g = b.m_2g;
        out->lambda = b.lambda;
        out->kappa0 = b.kappa0;
    });
}

lfd_status lfd_circle_infimum(double mx, double mxy, double my, double* out)
{
    return guard([&] {
        need(out, "out");
        *out = lfd::circle_infimum(mx, mxy, my);
    });
}

size_t lfd_check_count(void) { return lfd::check_names().size(); }

const char* lfd_check_name(size_t i)
{
    const auto& names = lfd::check_names();
    return i < names.size() ? names[i].c_str() : nullptr;
}

lfd_status lfd_run_check(const char* name, const lfd_state* s, double gamma, double s_exponent,
                         lfd_check_report* out)
{
    return guard([&] {
        need(name, "name");
        need(s, "state");
        need(out, "out");
        lfd::CheckOptions opt;
        opt.s = s_exponent;
        fill(out, lfd::run_check(name, s->s, gamma, opt));
    });
}

size_t lfd_family_count(void) { return lfd::family_members().size(); }

const char* lfd_family_member(size_t i)
{
    static const std::vector<std::string> members = lfd::family_members();
    return i < members.size() ? members[i].c_str() : nullptr;
}

lfd_status lfd_family_state(const char* member, const lfd_grid* g, double epsilon, unsigned seed, lfd_state** out)
{
    return guard([&] {
        need(member, "member");
        need(g, "grid");
        need(out, "out");
        *out = nullptr;
        *out = wrap(lfd::family_state(member, g->g, epsilon, seed));
    });
}

lfd_status lfd_run_suite(const lfd_suite_spec* spec, lfd_reports** out)
{
    return guard([&] {
        need(spec, "spec");
        need(out, "out");
        *out = nullptr;
        lfd::FamilySpec fam;
        fam.n = spec->n;
        fam.L = spec->extent;
        fam.seed = spec->seed;
        for (size_t i = 0; spec->members && i < spec->member_count; ++i) fam.members.emplace_back(spec->members[i]);
        std::vector<std::string> checks;
        for (size_t i = 0; spec->checks && i < spec->check_count; ++i) checks.emplace_back(spec->checks[i]);
        if (checks.empty()) checks = lfd::check_names();
        if (!spec->gammas || spec->gamma_count == 0) lfd::fail(lfd::Errc::invalid_argument, "no gamma values");
        if (!spec->epsilons || spec->epsilon_count == 0) lfd::fail(lfd::Errc::invalid_argument, "no epsilon values");
        const std::vector<double> gammas(spec->gammas, spec->gammas + spec->gamma_count);
        const std::vector<double> eps(spec->epsilons, spec->epsilons + spec->epsilon_count);
        lfd::CheckOptions opt;
        opt.s = spec->s_exponent;
        *out = new lfd_reports{lfd::run_suite(fam, checks, gammas, eps, opt)};
    });
}

void lfd_reports_destroy(lfd_reports* r) { delete r; }
size_t lfd_reports_size(const lfd_reports* r) { return r ? r->r.size() : 0; }

size_t lfd_reports_failed(const lfd_reports* r)
{
    if (!r) return 0;
    size_t n = 0;
    for (const auto& x : r->r)
        if (!x.skipped && !x.passed) ++n;
    return n;
}

lfd_status lfd_reports_get(const lfd_reports* r, size_t i, lfd_check_report* out)
{
    return guard([&] {
        need(r, "reports");
        need(out, "out");
        if (i >= r->r.size()) lfd::fail(lfd::Errc::invalid_argument, "report index out of range");
        fill(out, r->r[i]);
    });
}

lfd_status lfd_reports_write_csv(const lfd_reports* r, const char* path)
{
    return guard([&] {
        need(r, "reports");
        auto os = open_out(path);
        lfd::write_reports_csv(os, r->r);
    });
}

lfd_status lfd_reports_write_summary(const lfd_reports* r, const char* path)
{
    return guard([&] {
        need(r, "reports");
        auto os = open_out(path);
        lfd::write_summary(os, r->r);
    });
}

void lfd_solver_config_default(lfd_solver_config* cfg)
{
    if (!cfg) return;
    const lfd::SolverConfig d;
    cfg->gamma = d.gamma;
    cfg->dt = 0.0;
    cfg->dt_scale = d.dt_scale;
    cfg->t_end = d.t_end;
    cfg->conservation_projection = d.conservation_projection ? 1 : 0;
    cfg->record_every = d.record_every;
    cfg->clip = d.clip ? 1 : 0;
    cfg->flux = d.flux == lfd::FluxForm::gradient ? LFD_FLUX_GRADIENT : LFD_FLUX_ENTROPIC;
}

lfd_status lfd_collision_operator(const lfd_state* s, double gamma, lfd_flux_form flux, double* out, size_t len)
{
    return guard([&] {
        need(s, "state");
        need(out, "out");
        if (len != s->s.values().size()) lfd::fail(lfd::Errc::invalid_argument, "buffer length does not match grid size");
        if (flux != LFD_FLUX_GRADIENT && flux != LFD_FLUX_ENTROPIC) lfd::fail(lfd::Errc::invalid_argument, "unknown flux form");
        const lfd::Field q = lfd::collision_operator(
            s->s, gamma, flux == LFD_FLUX_GRADIENT ? lfd::FluxForm::gradient : lfd::FluxForm::entropic);
        std::memcpy(out, q.data(), len * sizeof(double));
    });
}

lfd_status lfd_step(const lfd_state* s, const lfd_solver_config* cfg, lfd_state** out)
{
    return guard([&] {
        need(s, "state");
        need(cfg, "config");
        need(out, "out");
        *out = nullptr;
        *out = wrap(lfd::step(s->s, to_config(cfg)));
    });
}

lfd_status lfd_evolve(const lfd_state* f0, const lfd_solver_config* cfg, lfd_trajectory** out)
{
    return guard([&] {
        need(f0, "state");
        need(cfg, "config");
        need(out, "out");
        *out = nullptr;
        *out = new lfd_trajectory{lfd::evolve(f0->s, to_config(cfg))};
    });
}

void lfd_trajectory_destroy(lfd_trajectory* t) { delete t; }

lfd_status lfd_trajectory_info_get(const lfd_trajectory* t, lfd_trajectory_info* out)
{
    return guard([&] {
        need(t, "trajectory");
        need(out, "out");
        out->records = t->rec.t.size();
        out->steps = t->rec.steps;
        out->dt = t->rec.dt;
        out->worst_entropy_drop = t->rec.worst_entropy_drop;
        out->clipped_total = t->rec.clipped_total;
        out->dt_halvings = t->rec.dt_halvings;
    });
}

lfd_status lfd_trajectory_row_get(const lfd_trajectory* t, size_t i, lfd_trajectory_row* out)
{
    return guard([&] {
        need(t, "trajectory");
        need(out, "out");
        const auto& r = t->rec;
        if (i >= r.t.size()) lfd::fail(lfd::Errc::invalid_argument, "record index out of range");
        *out = lfd_trajectory_row{r.t[i],  r.entropy[i], r.production[i], r.relative_entropy[i],
                                  r.mass[i], r.px[i],    r.py[i],         r.pz[i],
                                  r.energy[i], r.kappa0[i], r.f_inf[i],   r.negative_nodes[i]};
    });
}

lfd_status lfd_trajectory_write_csv(const lfd_trajectory* t, const char* path)
{
    return guard([&] {
        need(t, "trajectory");
        auto os = open_out(path);
        lfd::write_trajectory_csv(os, t->rec);
    });
}

lfd_status lfd_trajectory_final_state(const lfd_trajectory* t, lfd_state** out)
{
    return guard([&] {
        need(t, "trajectory");
        need(out, "out");
        *out = nullptr;
        if (!t->rec.final_state) lfd::fail(lfd::Errc::invalid_argument, "trajectory has no final state");
        *out = wrap(*t->rec.final_state);
    });
}

lfd_status lfd_fit_decay_rate(const lfd_trajectory* t, double t0, lfd_decay_fit* out)
{
    return guard([&] {
        need(t, "trajectory");
        need(out, "out");
        const lfd::DecayFit f = lfd::fit_decay_rate(t->rec, t0);
        out->mu = f.mu;
        out->r2 = f.r2;
        out->points = f.points;
        out->stationary = f.stationary ? 1 : 0;
        out->floor_truncated = f.floor_truncated ? 1 : 0;
    });
}

} // extern "C"
