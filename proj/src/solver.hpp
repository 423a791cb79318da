#pragma once

#include "grid.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lfd {

// How grad f enters the flux. gradient: central differences of f. entropic: F times central
// differences of h = log(f / (1 - eps f)), which is exact on Fermi-Dirac statistics (h is
// quadratic) and pairs with the entropy.
enum class FluxForm { gradient, entropic };

// Pair-sum Landau operator on one grid and exponent. The convolution sums are evaluated
// exactly (zero-padded FFTs of size (2n)^3), so results match the direct double sum up to
// rounding.
class LandauOperator {
public:
    LandauOperator(const Grid& grid, double gamma, FluxForm form = FluxForm::gradient);
    ~LandauOperator();
    LandauOperator(const LandauOperator&) = delete;
    LandauOperator& operator=(const LandauOperator&) = delete;

    const Grid& grid() const { return grid_; }
    double gamma() const { return gamma_; }
    FluxForm form() const { return form_; }

    // Q_eps(f) = div G; also returns G when `flux` is given.
    Field apply(const Field& f, double epsilon, VecField* flux = nullptr) const;
    // Same operator with F = f (classical Landau).
    Field apply_classical(const Field& f, VecField* flux = nullptr) const;

    // max_v sum_w h^3 |v - w|^{gamma + 2} F(w)
    double diffusion_scale(const Field& f, double epsilon) const;

private:
    struct Impl;
    Field apply_with(const Field& f, const Field& F, double epsilon, VecField* flux) const;
    Grid grid_;
    double gamma_;
    FluxForm form_;
    std::unique_ptr<Impl> impl_;
};

Field collision_operator(const State& f, double gamma, FluxForm form = FluxForm::gradient);
// O(N^2) reference for the same sums.
Field collision_operator_direct(const State& f, double gamma, FluxForm form = FluxForm::gradient,
                                VecField* flux = nullptr);
// Classical operator (F = f) for epsilon = 0 states.
Field landau_operator(const State& f, double gamma, FluxForm form = FluxForm::gradient);

struct SolverConfig {
    double gamma = 1.0;
    std::optional<double> dt;   // nullopt: dt_scale * dt_auto
    double dt_scale = 1.0;
    double t_end = 1.0;
    bool conservation_projection = true;
    int record_every = 50;
    bool clip = false;
    FluxForm flux = FluxForm::entropic;
};

// 0.2 h^2 / max_v sum_w h^3 Psi(v - w) F(w)
double dt_auto(const State& f, double gamma);

struct StepInfo {
    int clipped = 0;
    double projection_correction = 0.0; // max |coefficient - identity|
};

class Stepper {
public:
    Stepper(const Grid& grid, const SolverConfig& cfg);
    ~Stepper();
    // Projection targets `target` when given, else the moments of f.
    State step(const State& f, double dt, StepInfo* info = nullptr, const Moments* target = nullptr) const;
    const LandauOperator& op() const { return op_; }

private:
    SolverConfig cfg_;
    LandauOperator op_;
};

// One step with a freshly built operator.
State step(const State& f, const SolverConfig& cfg);

struct TrajectoryRecord {
    std::vector<double> t, entropy, production, relative_entropy, mass, px, py, pz, energy, kappa0, f_inf;
    std::vector<int> negative_nodes;
    std::vector<int> step_index;
    double dt = 0.0;
    long steps = 0;
    int dt_halvings = 0; // restarts of an automatic step after a node went negative
    // Largest per-step entropy decrease seen (S(t_{k+1}) < S(t_k)); 0 if none.
    double worst_entropy_drop = 0.0;
    int clipped_total = 0;
    std::optional<State> final_state;
};

TrajectoryRecord evolve(const State& f0, const SolverConfig& cfg);

struct DecayFit {
    double mu = 0.0;
    double r2 = 0.0;
    int points = 0;
    bool stationary = false;      // relative entropy never leaves the floor
    bool floor_truncated = false; // window cut where the entropy reached 1e-14
};

DecayFit fit_decay_rate(const TrajectoryRecord& rec, double t0);

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec);

} // namespace lfd
