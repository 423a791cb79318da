#pragma once

#include "grid.hpp"

#include <cstdint>

namespace lfd {

enum class ProductionForm { projection, cross_product };

struct ProductionResult {
    double value = 0.0;
    double exponent = 0.0; // gamma, or s for the power variant
    ProductionForm form = ProductionForm::projection;
    std::uint64_t pair_count = 0;
    std::uint64_t skipped_diagonal = 0;
};

struct ProductionOptions {
    ProductionForm form = ProductionForm::projection;
    bool kahan = false; // compensated inner sums; worth it from n = 20 up
    bool log_gradient = false; // h_gradient_log in place of grad g / (g (1 - eps g))
};

// Direct midpoint double sum over ordered node pairs, halved for symmetry.
ProductionResult entropy_production(const State& g, double gamma, ProductionOptions opt = {});

inline ProductionResult entropy_production_projection(const State& g, double gamma)
{
    return entropy_production(g, gamma, {ProductionForm::projection, g.grid().n() >= 20});
}
inline ProductionResult entropy_production_cross(const State& g, double gamma)
{
    return entropy_production(g, gamma, {ProductionForm::cross_product, g.grid().n() >= 20});
}
// Same functional with potential |z|^{s+2}.
inline ProductionResult entropy_production_power(const State& g, double s)
{
    return entropy_production_projection(g, s);
}

// Pair integrands for one (z, y) with z = v - w and y = grad h(v) - grad h(w).
double projection_integrand(const Vec3& z, const Vec3& y, double gamma);
double cross_integrand(const Vec3& z, const Vec3& y, double gamma);

} // namespace lfd
