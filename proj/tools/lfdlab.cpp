// Command-line front end over the shared-library API.
//
//   lfdlab [subcommand] [config.ini] [flags]
//
// Exit codes: 0 success, 1 a verify margin failed, 2 configuration error, 3 runtime error.

#include "config.hpp"

#include "lfd/lfd.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using lfdcli::ConfigError;
using lfdcli::RunConfig;
using lfdcli::Subcommand;

struct RuntimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(lfd_status s, const char* what)
{
    if (s != LFD_OK)
        throw RuntimeError(std::string(what) + ": " + lfd_status_name(s) + ": " + lfd_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Destroy(p); }
    T** out() { return &p; }
};
using GridH = Handle<lfd_grid, lfd_grid_destroy>;
using StateH = Handle<lfd_state, lfd_state_destroy>;
using ReportsH = Handle<lfd_reports, lfd_reports_destroy>;
using TrajH = Handle<lfd_trajectory, lfd_trajectory_destroy>;

std::vector<std::string> check_list()
{
    std::vector<std::string> v;
    for (size_t i = 0; i < lfd_check_count(); ++i) v.emplace_back(lfd_check_name(i));
    return v;
}

std::vector<std::string> member_list()
{
    std::vector<std::string> v;
    for (size_t i = 0; i < lfd_family_count(); ++i) v.emplace_back(lfd_family_member(i));
    return v;
}

// Writes to the configured output file, or stdout when none is set.
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw RuntimeError("cannot open " + path + " for writing");
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::string real(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

int run_equilibrium(const RunConfig& cfg)
{
    GridH grid;
    check(lfd_grid_create(cfg.n, cfg.L, grid.out()), "grid");
    Output out(cfg.output);
    auto& os = out.os();
    os << "epsilon,a,b,residual_mass,residual_energy,sup_norm,grid_mass,grid_energy,iterations\n";
    for (double eps : cfg.epsilons) {
        StateH s;
        lfd_equilibrium p{};
        check(lfd_fd_state(grid.p, eps, 0, s.out(), &p), "equilibrium");
        os << real(eps) << ',' << real(p.a) << ',' << real(p.b) << ',' << real(p.residual_mass) << ','
           << real(p.residual_energy) << ',' << real(p.a / (1.0 + eps * p.a)) << ',' << real(p.grid_mass) << ','
           << real(p.grid_energy) << ',' << p.iterations << '\n';
    }
    return 0;
}

int run_functionals(const RunConfig& cfg)
{
    GridH grid;
    check(lfd_grid_create(cfg.n, cfg.L, grid.out()), "grid");
    const double eps = cfg.epsilons[0];
    StateH s, ref;
    check(lfd_family_state(cfg.member.c_str(), grid.p, eps, cfg.seed, s.out()), "state");
    check(lfd_fd_state(grid.p, eps, 1, ref.out(), nullptr), "reference equilibrium");
    lfd_state_info info{};
    check(lfd_state_info_get(s.p, &info), "state info");

    Output out(cfg.output);
    auto& os = out.os();
    os << "quantity,gamma,value\n";
    auto row = [&](const std::string& q, double gamma, double v) {
        os << q << ',' << (std::isnan(gamma) ? std::string() : real(gamma)) << ',' << real(v) << '\n';
    };
    const double none = std::nan("");
    row("epsilon", none, info.epsilon);
    row("mass", none, info.mass);
    row("momentum_x", none, info.momentum[0]);
    row("momentum_y", none, info.momentum[1]);
    row("momentum_z", none, info.momentum[2]);
    row("energy", none, info.energy);
    row("kappa0", none, info.kappa0);
    row("sup", none, info.sup);
    double v = 0.0;
    check(lfd_boltzmann_entropy(s.p, &v), "Boltzmann entropy");
    row("boltzmann_entropy", none, v);
    if (eps > 0.0) {
        check(lfd_fd_entropy(s.p, &v), "Fermi-Dirac entropy");
        row("fd_entropy", none, v);
    }
    check(lfd_relative_entropy(s.p, ref.p, &v), "relative entropy");
    row("relative_entropy", none, v);
    check(lfd_l1_distance(s.p, ref.p, &v), "L1 distance");
    row("l1_distance", none, v);
    for (double gamma : cfg.gammas) {
        check(lfd_entropy_production(s.p, gamma, LFD_PRODUCTION_PROJECTION, &v), "production");
        row("D_eps", gamma, v);
        check(lfd_weighted_sqrt_fisher(s.p, gamma, &v), "Fisher information");
        row("weighted_sqrt_fisher", gamma, v);
        check(lfd_weighted_moment(s.p, 2.0 + gamma, &v), "moment");
        row("moment_2_plus_gamma", gamma, v);
        lfd_constants c{};
        check(lfd_constants_bundle(s.p, gamma, &c), "constants");
        row("K", gamma, c.K);
        const char* ax = "xyz";
        for (int a = 0; a < 3; ++a) {
            row(std::string("L_") + ax[a], gamma, c.L[a]);
            row(std::string("a_") + ax[a], gamma, c.a[a]);
            row(std::string("A_") + ax[a], gamma, c.A_ell[a]);
        }
        row("B_xy", gamma, c.B_ij[0]);
        row("B_xz", gamma, c.B_ij[1]);
        row("B_yz", gamma, c.B_ij[2]);
        row("e_gamma", gamma, c.e_gamma);
        row("A_gamma", gamma, c.A_gamma);
        row("B_gamma", gamma, c.B_gamma);
        row("I0", gamma, c.I0);
        row("I2", gamma, c.I2);
        row("script_I", gamma, c.script_I);
        row("m_2g", gamma, c.m_2g);
        row("lambda", gamma, c.lambda);
    }
    return 0;
}

int run_verify(const RunConfig& cfg)
{
    std::vector<const char*> checks, members;
    for (const auto& c : cfg.checks) checks.push_back(c.c_str());
    for (const auto& m : cfg.members) members.push_back(m.c_str());
    lfd_suite_spec spec{};
    spec.n = cfg.n;
    spec.extent = cfg.L;
    spec.seed = cfg.seed;
    spec.members = members.empty() ? nullptr : members.data();
    spec.member_count = members.size();
    spec.checks = checks.empty() ? nullptr : checks.data();
    spec.check_count = checks.size();
    spec.gammas = cfg.gammas.data();
    spec.gamma_count = cfg.gammas.size();
    spec.epsilons = cfg.epsilons.data();
    spec.epsilon_count = cfg.epsilons.size();
    spec.s_exponent = cfg.s;
    ReportsH reports;
    check(lfd_run_suite(&spec, reports.out()), "verify");
    if (cfg.output.empty()) {
        // CSV to stdout, nothing else there.
        const std::string tmp = "/dev/stdout";
        check(lfd_reports_write_csv(reports.p, tmp.c_str()), "write CSV");
    } else {
        check(lfd_reports_write_csv(reports.p, cfg.output.c_str()), "write CSV");
        check(lfd_reports_write_summary(reports.p, "/dev/stdout"), "write summary");
    }
    const size_t failed = lfd_reports_failed(reports.p);
    if (failed) std::cerr << "lfdlab: " << failed << " of " << lfd_reports_size(reports.p) << " reports failed\n";
    return failed ? 1 : 0;
}

int run_evolve(const RunConfig& cfg)
{
    GridH grid;
    check(lfd_grid_create(cfg.n, cfg.L, grid.out()), "grid");
    StateH f0;
    check(lfd_family_state(cfg.member.c_str(), grid.p, cfg.epsilons[0], cfg.seed, f0.out()), "initial state");
    lfd_solver_config sc;
    lfd_solver_config_default(&sc);
    sc.gamma = cfg.gammas[0];
    sc.dt = cfg.dt ? *cfg.dt : 0.0;
    sc.dt_scale = cfg.dt_scale;
    sc.t_end = cfg.t_end;
    sc.conservation_projection = cfg.projection ? 1 : 0;
    sc.record_every = cfg.record_every;
    sc.clip = cfg.clip ? 1 : 0;
    sc.flux = cfg.flux == "gradient" ? LFD_FLUX_GRADIENT : LFD_FLUX_ENTROPIC;
    TrajH traj;
    check(lfd_evolve(f0.p, &sc, traj.out()), "evolve");
    lfd_trajectory_info ti{};
    check(lfd_trajectory_info_get(traj.p, &ti), "trajectory");
    if (cfg.output.empty()) {
        check(lfd_trajectory_write_csv(traj.p, "/dev/stdout"), "write CSV");
    } else {
        check(lfd_trajectory_write_csv(traj.p, cfg.output.c_str()), "write CSV");
    }
    std::ostream& log = cfg.output.empty() ? std::cerr : std::cout;
    log << "steps " << ti.steps << "  dt " << real(ti.dt) << "  records " << ti.records << "  worst entropy drop "
        << real(ti.worst_entropy_drop) << "  clipped " << ti.clipped_total << '\n';
    if (ti.dt_halvings > 0)
        log << "automatic step halved " << ti.dt_halvings << " time(s) after a tail node went negative\n";
    lfd_decay_fit fit{};
    const lfd_status fs = lfd_fit_decay_rate(traj.p, cfg.fit_t0, &fit);
    if (fs == LFD_OK && fit.stationary) {
        log << "decay fit: stationary (relative entropy at the floor from t0 = " << real(cfg.fit_t0) << ")\n";
    } else if (fs == LFD_OK) {
        log << "decay fit from t0 = " << real(cfg.fit_t0) << ": mu " << real(fit.mu) << "  r2 " << real(fit.r2)
            << "  points " << fit.points << (fit.floor_truncated ? "  (window truncated at the 1e-14 floor)" : "")
            << '\n';
    } else {
        log << "decay fit unavailable: " << lfd_last_error() << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Landau-Fermi-Dirac numerical lab"};
    app.set_version_flag("--version", std::string(lfd_version()));
    std::vector<std::string> positional;
    std::string n, L, gamma, epsilon, seed, out, reduction, threads, member, t_end, dt, checks, members, flux;
    std::vector<std::string> sets;
    app.add_option("args", positional, "[subcommand] [config.ini]");
    app.add_option("--n", n, "grid points per axis");
    app.add_option("--L", L, "box half-width");
    app.add_option("--gamma", gamma, "comma-separated gamma list");
    app.add_option("--epsilon", epsilon, "comma-separated epsilon list");
    app.add_option("--seed", seed, "seed for randomized family members");
    app.add_option("--out", out, "output path (default stdout)");
    app.add_option("--reduction", reduction, "fast or deterministic");
    app.add_option("--threads", threads, "thread count (overrides LFD_THREADS)");
    app.add_option("--member", member, "state family member");
    app.add_option("--checks", checks, "comma-separated checks for verify");
    app.add_option("--members", members, "comma-separated family members for verify");
    app.add_option("--t-end", t_end, "evolve end time");
    app.add_option("--dt", dt, "time step or 'auto'");
    app.add_option("--flux", flux, "entropic or gradient");
    app.add_option("--set", sets, "section.key=value override (repeatable)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::string sub, path;
        for (const auto& p : positional) {
            if (sub.empty() && path.empty() && lfdcli::parse_subcommand(p)) sub = p;
            else if (path.empty()) path = p;
            else throw ConfigError("unexpected argument '" + p + "'");
        }
        lfdcli::IniDocument doc;
        std::string source = "command line";
        if (!path.empty()) {
            std::ifstream in(path);
            if (!in) throw ConfigError("cannot read config file " + path);
            std::stringstream ss;
            ss << in.rdbuf();
            doc = lfdcli::parse_ini(ss.str(), path);
            source = path;
        }
        lfdcli::Overrides ov;
        if (!sub.empty()) ov.emplace_back("subcommand", sub);
        auto flag = [&](const std::string& key, const std::string& v) {
            if (!v.empty()) ov.emplace_back(key, v);
        };
        flag("grid.n", n);
        flag("grid.L", L);
        flag("physics.gamma", gamma);
        flag("physics.epsilon", epsilon);
        flag("seed", seed);
        flag("output", out);
        flag("reduction", reduction);
        flag("threads", threads);
        flag("state.member", member);
        flag("verify.checks", checks);
        flag("verify.members", members);
        flag("solver.t_end", t_end);
        flag("solver.dt", dt);
        flag("solver.flux", flux);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + s + "'");
            ov.emplace_back(s.substr(0, eq), s.substr(eq + 1));
        }
        const RunConfig cfg = lfdcli::build_config(doc, source, ov, check_list(), member_list());

        check(lfd_set_deterministic(cfg.deterministic ? 1 : 0), "reduction");
        if (cfg.threads > 0) check(lfd_set_threads(cfg.threads), "threads");
        switch (cfg.subcommand) {
        case Subcommand::equilibrium: return run_equilibrium(cfg);
        case Subcommand::functionals: return run_functionals(cfg);
        case Subcommand::verify: return run_verify(cfg);
        case Subcommand::evolve: return run_evolve(cfg);
        }
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "lfdlab: config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "lfdlab: error: " << e.what() << '\n';
        return 3;
    }
}
