#include "production.hpp"

#include "error.hpp"
#include "exec.hpp"
#include "functionals.hpp"

#include <cmath>

namespace lfd {

double projection_integrand(const Vec3& z, const Vec3& y, double gamma)
{
    const double z2 = norm2(z);
    if (z2 == 0.0) return 0.0;
    const double t = (z[0] * y[0] + z[1] * y[1] + z[2] * y[2]) / z2;
    const Vec3 p = {y[0] - t * z[0], y[1] - t * z[1], y[2] - t * z[2]};
    return std::pow(z2, 0.5 * (gamma + 2.0)) * norm2(p);
}

double cross_integrand(const Vec3& z, const Vec3& y, double gamma)
{
    const double z2 = norm2(z);
    if (z2 == 0.0) return 0.0;
    const double q01 = z[0] * y[1] - z[1] * y[0];
    const double q02 = z[0] * y[2] - z[2] * y[0];
    const double q12 = z[1] * y[2] - z[2] * y[1];
    return std::pow(z2, 0.5 * gamma) * (q01 * q01 + q02 * q02 + q12 * q12);
}

ProductionResult entropy_production(const State& g, double gamma, ProductionOptions opt)
{
    if (!(gamma > -4.0)) fail(Errc::invalid_argument, "potential exponent must exceed -4");
    if (g.values().size() != g.grid().size()) fail(Errc::invalid_argument, "field length does not match grid");
    const Grid& gr = g.grid();
    const int n = gr.n();
    const double h = gr.h();
    const double eps = g.epsilon();
    const Field& f = g.values();
    const std::size_t N = gr.size();

    const VecField u = opt.log_gradient ? h_gradient_log(g) : h_gradient(g);
    Field F(N);
    for (std::size_t i = 0; i < N; ++i)
        F[i] = f[i] > vacuum_floor ? std::max(f[i] * (1.0 - eps * f[i]), 0.0) : 0.0;

    // |z|^gamma over all lattice offsets; the projection form multiplies by |z|^2 itself.
    const int m = 2 * n - 1;
    std::vector<double> ztab(static_cast<std::size_t>(m) * m * m, 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                const double dx = (a - n + 1) * h, dy = (b - n + 1) * h, dz = (c - n + 1) * h;
                const double z2 = dx * dx + dy * dy + dz * dz;
                ztab[(static_cast<std::size_t>(a) * m + b) * m + c] = z2 > 0.0 ? std::pow(z2, 0.5 * gamma) : 0.0;
            }

    const bool cross = opt.form == ProductionForm::cross_product;
    const double total = reduce_sum(N, [&](std::size_t iv) -> double {
        if (F[iv] == 0.0) return 0.0;
        const auto cv = gr.cell(iv);
        const double uvx = u[0][iv], uvy = u[1][iv], uvz = u[2][iv];
        Kahan acc;
        double plain = 0.0;
        std::size_t iw = 0;
        for (int i = 0; i < n; ++i) {
            const double zx = (cv[0] - i) * h;
            for (int j = 0; j < n; ++j) {
                const double zy = (cv[1] - j) * h;
                const std::size_t row = (static_cast<std::size_t>(cv[0] - i + n - 1) * m + (cv[1] - j + n - 1)) * m;
                for (int k = 0; k < n; ++k, ++iw) {
                    const double Fw = F[iw];
                    if (Fw == 0.0 || iw == iv) continue;
                    const double zz = (cv[2] - k) * h;
                    const double yx = uvx - u[0][iw], yy = uvy - u[1][iw], yz = uvz - u[2][iw];
                    const double pw = ztab[row + (cv[2] - k + n - 1)];
                    double val;
                    if (cross) {
                        const double q01 = zx * yy - zy * yx;
                        const double q02 = zx * yz - zz * yx;
                        const double q12 = zy * yz - zz * yy;
                        val = pw * (q01 * q01 + q02 * q02 + q12 * q12);
                    } else {
                        const double z2 = zx * zx + zy * zy + zz * zz;
                        const double t = (zx * yx + zy * yy + zz * yz) / z2;
                        const double px = yx - t * zx, py = yy - t * zy, pz = yz - t * zz;
                        val = pw * z2 * (px * px + py * py + pz * pz);
                    }
                    if (opt.kahan)
                        acc.add(Fw * val);
                    else
                        plain += Fw * val;
                }
            }
        }
        return F[iv] * (opt.kahan ? acc.sum : plain);
    });

    ProductionResult r;
    const double w = gr.weight();
    r.value = 0.5 * w * w * total;
    r.exponent = gamma;
    r.form = opt.form;
    r.pair_count = static_cast<std::uint64_t>(N) * (N - 1);
    r.skipped_diagonal = N;
    return r;
}

} // namespace lfd
