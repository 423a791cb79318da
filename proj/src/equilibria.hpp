#pragma once

#include "grid.hpp"

#include <utility>

namespace lfd {

struct EquilibriumParams {
    double a = 0.0;
    double b = 0.0;
    double epsilon = 0.0;
    double residual_mass = 0.0;   // continuum quadrature, mass - 1
    double residual_energy = 0.0; // continuum quadrature, energy - 3
    double grid_mass = 0.0;       // same constraints on the sampled grid field
    double grid_energy = 0.0;
    double sup_norm = 0.0;
    int iterations = 0;
    bool used_fallback = false;
};

// (2/5)^{5/2} (18 pi)^{3/2}
double epsilon_bar();
// Supremum of solvable epsilon for unit mass and energy 3: (4 pi / 3) 5^{3/2}.
double epsilon_saturation_limit();

State maxwellian(const Grid& g);

// Continuum (a, b) for mass 1 and energy 3; throws Errc::saturation when infeasible.
EquilibriumParams fd_parameters(double epsilon);

double fd_value(const EquilibriumParams& p, double r2);

std::pair<EquilibriumParams, State> solve_fd_statistics(const Grid& g, double epsilon);

// (a, b) re-solved so the sampled field has discrete mass 1 and energy 3 exactly; on the
// grid this is the maximizer of the discrete entropy at those moments.
std::pair<EquilibriumParams, State> grid_fd_statistics(const Grid& g, double epsilon);

State saturated_state(const Grid& g, double epsilon);

struct SaturationBracket {
    double value = 0.0; // largest epsilon known to solve
    double upper = 0.0; // smallest epsilon known to fail
    int evaluations = 0;
};

SaturationBracket saturation_threshold(double rel_width = 1e-6);

// Radial integrals 4 pi \int x^{2+k} sigma(l - x^2) dx and their l-derivatives.
struct RadialIntegrals {
    double J0, J2, dJ0, dJ2;
};
RadialIntegrals radial_integrals(double l);

} // namespace lfd
