#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace lfd {

using Vec3 = std::array<double, 3>;

// Uniform cell-centered lattice on [-L, L]^3, lexicographic in (kx, ky, kz).
class Grid {
public:
    Grid(int n, double L);

    int n() const { return n_; }
    double extent() const { return L_; }
    double h() const { return h_; }
    double weight() const { return h_ * h_ * h_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

    double coord(int k) const { return -L_ + (k + 0.5) * h_; }
    std::size_t index(int i, int j, int k) const
    {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }
    std::array<int, 3> cell(std::size_t idx) const
    {
        const int k = static_cast<int>(idx % n_);
        const int j = static_cast<int>((idx / n_) % n_);
        const int i = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
        return {i, j, k};
    }
    Vec3 node(std::size_t idx) const
    {
        const auto c = cell(idx);
        return {coord(c[0]), coord(c[1]), coord(c[2])};
    }

    bool operator==(const Grid& o) const { return n_ == o.n_ && L_ == o.L_; }

private:
    int n_;
    double L_;
    double h_;
};

using Field = std::vector<double>;
using VecField = std::array<Field, 3>;

Field sample(const Grid& g, const std::function<double(const Vec3&)>& fn);

VecField gradient(const Grid& g, const Field& f);

// Central-difference divergence; flux is taken as zero outside the box.
Field divergence(const Grid& g, const VecField& G);

double integrate(const Grid& g, const Field& f);

// Trilinear interpolation; nodes beyond the box are treated as zero.
double interpolate(const Grid& g, const Field& f, const Vec3& v);

struct Moments {
    double mass = 0.0;
    Vec3 momentum{};
    double energy = 0.0;
    Vec3 directional{};      // \int g v_i^2
    Vec3 cross{};            // \int g v_i v_j for (0,1), (0,2), (1,2)
};

Moments compute_moments(const Grid& g, const Field& f);

// Distribution bundled with its quantum parameter and cached diagnostics.
class State {
public:
    State(Grid grid, Field values, double epsilon);

    const Grid& grid() const { return grid_; }
    const Field& values() const { return values_; }
    double epsilon() const { return eps_; }
    double kappa0() const { return kappa0_; }
    double sup() const { return sup_; }
    const Moments& moments() const { return mom_; }
    std::string descriptor;

private:
    Grid grid_;
    Field values_;
    double eps_;
    double kappa0_;
    double sup_;
    Moments mom_;
};

double bracket(const Vec3& v); // <v> = sqrt(1 + |v|^2)
inline double norm2(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

struct NormalizeInfo {
    double rho = 0.0;
    Vec3 u{};
    double temperature = 0.0;
    std::array<Vec3, 3> rotation{}; // columns: principal axes
    double tail_mass = 0.0;          // mass in the outermost node shell after resampling
    double residual = 0.0;           // max |moment - target| after the final correction
};

// Rescales to mass 1, momentum 0, energy 3 and rotates onto principal axes.
State normalize_to_standard(const State& s, NormalizeInfo* info = nullptr);

// Multiplies f by exp(c0 + c.v + c4 |v|^2) so that mass, momentum, energy hit the targets.
Field tilt_to_moments(const Grid& g, const Field& f, double mass, const Vec3& momentum,
                      double energy);

} // namespace lfd
