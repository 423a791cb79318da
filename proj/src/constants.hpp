#pragma once

#include "grid.hpp"

#include <functional>

namespace lfd {

struct KL {
    double K = 0.0;
    Vec3 L{};
};

KL compute_K_L(const State& g);

struct MNFields {
    Field N;       // v_i d_j h - v_j d_i h
    Field M;       // -a_i d_j h + K v_j - L_j
    Field M_check; // a_j d_i h - K v_i + L_i, closed form of the w_j-weighted q moment
};

MNFields m_n_fields(const State& g, int i, int j);

// Direct double sums of q_ij(v, w) g(w) against 1, w_i and w_j.
struct QMoments {
    Field plain, wi, wj;
};
QMoments q_moments_bruteforce(const State& g, int i, int j);

// The same three moments expanded algebraically in terms of discrete moments of g and grad h.
QMoments q_moments_expanded(const State& g, int i, int j);

// min over unit sigma of sigma1^2 mx - 2 sigma1 sigma2 mxy + sigma2^2 my.
double circle_infimum(double mx, double mxy, double my);

// sup_v <v>^gamma sum_w |v-w|^{-gamma} g(w) |w|^s h^3, joined with the |v| -> inf limit.
struct SupResult {
    double value = 0.0;
    double grid_max = 0.0;
    double asymptote = 0.0;
};
SupResult sup_weighted_potential(const State& g, double gamma, double s);

// Same sup with weight <w>^2 in place of |w|^s (the combined functional of the main bound).
SupResult sup_weighted_bracket2(const State& g, double gamma);

struct ConstantsBundle {
    double gamma = 0.0, epsilon = 0.0;
    double K = 0.0;
    Vec3 L{};
    Vec3 a{};
    Vec3 A_ell{};
    Vec3 B_ij{}; // pairs (0,1), (0,2), (1,2)
    double e_gamma = 0.0, A_gamma = 0.0, B_gamma = 0.0;
    double I0 = 0.0, I2 = 0.0, script_I = 0.0;
    double m_2g = 0.0; // m_{2+gamma}
    double lambda = 0.0;
    double kappa0 = 0.0;
};

ConstantsBundle constants_bundle(const State& g, double gamma);

struct GramResult {
    double Delta = 0.0;
    double G2phiF = 0.0;
    double G2oneFM = 0.0;
    double G1phig = 0.0;
    double G2dphig = 0.0;
    double J = 0.0;
};

struct RadialWeight {
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
};

// phi(r) = (1 + 2r)^{gamma/4}
RadialWeight default_phi(double gamma);
// M(v) = (1 - eps g) <v>^gamma
Field default_M(const State& g, double gamma);

// J's sup joins the grid max with `M_limit * \int phi^2 F <w>^2` when M_limit >= 0.
GramResult gram_functionals(const State& g, double gamma, const RadialWeight& w, const Field& M, int i, int j,
                            double M_limit = -1.0);

double G_s(const Grid& grid, const std::function<double(double)>& chi, const Field& f, double s);

} // namespace lfd
