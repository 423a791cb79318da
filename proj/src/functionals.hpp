#pragma once

#include "grid.hpp"

namespace lfd {

double weighted_moment(const State& g, double s);

double boltzmann_entropy(const State& g);

// Fermi-Dirac entropy; requires epsilon > 0.
double fd_entropy(const State& g);

// H_eps(f|g) = -S(f) + S(g); at epsilon = 0 uses the Boltzmann entropies.
double relative_entropy(const State& f, const State& g);

double weighted_sqrt_fisher(const State& g, double gamma);

// Nodewise grad g / (g (1 - eps g)); zero where g is at or below the vacuum floor.
VecField h_gradient(const State& g);
// Stencil applied to h = log g - log(1 - eps g) itself, as the solver's flux does; exact on
// Fermi-Dirac statistics, where h is quadratic.
VecField h_gradient_log(const State& g);

constexpr double vacuum_floor = 1e-30;

double fisher_relative_K(const State& g, double gamma, double K);
double fisher_relative_FD(const State& g, double gamma, double b_eps);

struct Lemma21 {
    double ball = 0.0;
    double set = 0.0;
};

Lemma21 lemma21_diagnostics(const State& g, double R, const std::vector<bool>& mask);

double l1_distance(const State& f, const State& g);

} // namespace lfd
