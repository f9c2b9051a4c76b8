#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ugks/errors.hpp"
#include "ugks/ugks_core.hpp"

namespace ugks {
namespace {

// Gauss-Legendre rule on [-1,1] with n points, Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

}  // namespace

double VelocityQuadrature::average(std::span<const double> g) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * g[k];
    return 0.5 * s;
}

// Half-range rule: a Gauss-Legendre rule of nv/2 points on each of [-1,0] and [0,1].
// Integrals over one velocity half are then exact for polynomials, which the
// upwind splitting needs.
VelocityQuadrature make_velocity_quadrature(int nv) {
    if (nv < 4 || nv % 2 != 0) throw ConfigError("velocity quadrature needs an even nv >= 4");
    const int h = nv / 2;
    std::vector<double> x, w;
    gauss_legendre(h, x, w);
    VelocityQuadrature q;
    q.nodes.resize(nv);
    q.weights.resize(nv);
    for (int i = 0; i < h; ++i) {
        // negative half ascending, then positive half ascending
        q.nodes[i] = -0.5 * (1.0 - x[i]);
        q.weights[i] = 0.5 * w[h - 1 - i];
        q.nodes[h + i] = 0.5 * (1.0 + x[i]);
        q.weights[h + i] = 0.5 * w[i];
    }
    return q;
}

}  // namespace ugks
