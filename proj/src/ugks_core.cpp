#include "ugks/ugks_core.hpp"

#include <algorithm>
#include <cmath>

#include "ugks/errors.hpp"

namespace ugks {
namespace {

// Below this |w| the three combinations of e^w and (1-e^w)/w lose digits to
// cancellation, so they are summed as power series.
constexpr double kSeriesW = 0.1;
constexpr int kSeriesTerms = 16;

struct KernelSums {
    double g;        // (1-e^w)/w
    double ew_g;     // e^w + g
    double one_g;    // 1 + g
    double one_ew_2g;  // 1 + e^w + 2g
};

KernelSums kernel_sums(double w) {
    KernelSums s{};
    if (std::fabs(w) < kSeriesW) {
        // w^n/(n+1)! for n = 0..
        double t = 1.0;
        double g = 0.0, a = 0.0, b = 0.0, c = 0.0;
        for (int n = 0; n < kSeriesTerms; ++n) {
            g -= t;
            if (n >= 1) {
                a += n * t;
                b -= t;
            }
            if (n >= 2) c += (n - 1) * t;
            t *= w / (n + 2);
        }
        s.g = g;
        s.ew_g = a;
        s.one_g = b;
        s.one_ew_2g = c;
        return s;
    }
    const double ew = std::exp(w);
    const double g = -std::expm1(w) / w;
    s.g = g;
    s.ew_g = ew + g;
    s.one_g = 1.0 + g;
    s.one_ew_2g = 1.0 + ew + 2.0 * g;
    return s;
}

}  // namespace

double RegimeParams::sigma_min() const {
    return *std::min_element(sigma.begin(), sigma.end());
}

FluxCoefficients flux_coefficients(double dt, double eta, double epsilon, double sigma_iface) {
    const double nu = sigma_iface / (eta * epsilon);
    const double w = -nu * dt;
    const KernelSums s = kernel_sums(w);
    const double r = epsilon / (sigma_iface * eta);
    return {-s.g / eta, r * s.ew_g, s.one_g / eta, -r * s.one_ew_2g};
}

double van_leer(double a, double b) {
    const double den = std::fabs(a) + std::fabs(b);
    if (den == 0.0 || a * b <= 0.0) return 0.0;
    return 2.0 * std::copysign(1.0, a) * std::fabs(a) * std::fabs(b) / den;
}

double stable_dt(const SpatialGrid& grid, const RegimeParams& params, double safety) {
    if (!(safety > 0.0 && safety <= 1.0)) throw ConfigError("cfl safety must lie in (0,1]");
    const double dx = grid.dx();
    return safety * (1.5 * params.sigma_min() * dx * dx + params.eta * dx);
}

double BoundarySpec::operator()(double v) const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::isotropic: return value;
        case Kind::half_indicator: return (sign * v > 0.0) ? value : 0.0;
    }
    return 0.0;
}

double BoundarySpec::half_moment(int k, bool positive_side) const {
    double c = 0.0;
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::isotropic: c = value; break;
        case Kind::half_indicator: c = ((sign > 0) == positive_side) ? value : 0.0; break;
    }
    const double m = c / (2.0 * (k + 1));
    return (positive_side || k % 2 == 0) ? m : -m;
}

double wall_density(Boundary side, const BoundarySpec& spec) {
    // <v 1_{v<0}> = -1/4 and <v 1_{v>0}> = 1/4
    if (side == Boundary::left) return 4.0 * spec.half_moment(1, true);
    return -4.0 * spec.half_moment(1, false);
}

double interface_density(const VelocityQuadrature& q, std::span<const double> f_left,
                         std::span<const double> f_right) {
    double s = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k)
        s += q.weights[k] * (q.nodes[k] > 0.0 ? f_left[k] : f_right[k]);
    return 0.5 * s;
}

void micro_flux(const VelocityQuadrature& q, const InterfaceState& s, const FluxCoefficients& c,
                double dx, std::span<double> out) {
    const double h = 0.5 * dx;
    const double dl = (s.rho_iface - s.rho_left) / h;
    const double dr = (s.rho_right - s.rho_iface) / h;
    const bool slopes = !s.slope_left.empty();
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double v = q.nodes[k];
        double f, df, drho;
        if (v > 0.0) {
            df = slopes ? s.slope_left[k] : 0.0;
            f = s.f_left[k] + h * df;
            drho = dl;
        } else {
            df = slopes ? s.slope_right[k] : 0.0;
            f = s.f_right[k] - h * df;
            drho = dr;
        }
        out[k] = c.A * v * f + c.B * v * v * df + c.C * v * s.rho_iface + c.D * v * v * drho;
    }
}

double macro_flux(const VelocityQuadrature& q, const InterfaceState& s, const FluxCoefficients& c,
                  double dx) {
    const double h = 0.5 * dx;
    const bool slopes = !s.slope_left.empty();
    double ta = 0.0;
    double tb = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double v = q.nodes[k];
        double f, df;
        if (v > 0.0) {
            df = slopes ? s.slope_left[k] : 0.0;
            f = s.f_left[k] + h * df;
        } else {
            df = slopes ? s.slope_right[k] : 0.0;
            f = s.f_right[k] - h * df;
        }
        ta += q.weights[k] * v * f;
        tb += q.weights[k] * v * v * df;
    }
    return 0.5 * (c.A * ta + c.B * tb) + c.D * (s.rho_right - s.rho_left) / (3.0 * dx);
}

double boundary_flux_dirichlet(const VelocityQuadrature& q, Boundary side,
                               const BoundarySpec& spec, std::span<const double> f_cell,
                               double rho_cell, const FluxCoefficients& c, double eta, double dx,
                               std::span<double> out) {
    const double rho_w = wall_density(side, spec);
    const bool left = side == Boundary::left;
    // half-cell difference between the wall and the adjacent cell centre, oriented along +x
    const double drho = left ? (rho_cell - rho_w) / (0.5 * dx) : (rho_w - rho_cell) / (0.5 * dx);
    double total = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double v = q.nodes[k];
        const bool entering = left ? v > 0.0 : v < 0.0;
        if (entering)
            out[k] = v * spec(v) / eta;
        else
            out[k] = c.A * v * f_cell[k] + c.C * v * rho_w + c.D * v * v * drho;
        total += q.weights[k] * out[k];
    }
    return 0.5 * total;
}

}  // namespace ugks
