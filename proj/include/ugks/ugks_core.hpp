#pragma once

#include <span>
#include <vector>

namespace ugks {

struct SpatialGrid {
    int nx = 200;
    double x_min = 0.0;
    double x_max = 1.0;

    double dx() const { return (x_max - x_min) / nx; }
    double center(int i) const { return x_min + (i + 0.5) * dx(); }
};

// Gauss-Legendre nodes on [-1,1]; <g> = 0.5 * sum w_k g(v_k).
struct VelocityQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    double average(std::span<const double> g) const;
};

VelocityQuadrature make_velocity_quadrature(int nv);

struct RegimeParams {
    double eta = 1.0;
    double epsilon = 1.0;
    std::vector<double> sigma;  // one per cell

    double nu(int i) const { return sigma[i] / (eta * epsilon); }
    double sigma_min() const;
    double sigma_interface(int i, int ip1) const { return 0.5 * (sigma[i] + sigma[ip1]); }
};

struct FluxCoefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
};

FluxCoefficients flux_coefficients(double dt, double eta, double epsilon, double sigma_iface);

double van_leer(double a, double b);

double stable_dt(const SpatialGrid& grid, const RegimeParams& params, double safety = 0.9);

// Boundary data f_b(v): zero, an isotropic constant, or value * 1_{sign*v > 0}.
struct BoundarySpec {
    enum class Kind { zero, isotropic, half_indicator };
    Kind kind = Kind::zero;
    double value = 0.0;
    int sign = 1;

    double operator()(double v) const;
    // <v^k f_b 1_{v>0}> or <v^k f_b 1_{v<0}>, exact.
    double half_moment(int k, bool positive_side) const;
};

enum class Boundary { left, right };

struct BoundaryConditions {
    bool periodic = true;
    BoundarySpec left;
    BoundarySpec right;
};

// Density at a Dirichlet wall: the ratio -<v f_b 1_in> / <v 1_out>.
double wall_density(Boundary side, const BoundarySpec& spec);

// Per-interface data feeding the UGKS flux. Node values live on a shared quadrature.
struct InterfaceState {
    std::span<const double> f_left;
    std::span<const double> f_right;
    std::span<const double> slope_left;
    std::span<const double> slope_right;
    double rho_left = 0.0;
    double rho_iface = 0.0;
    double rho_right = 0.0;
};

double interface_density(const VelocityQuadrature& q, std::span<const double> f_left,
                         std::span<const double> f_right);

void micro_flux(const VelocityQuadrature& q, const InterfaceState& s, const FluxCoefficients& c,
                double dx, std::span<double> out);

double macro_flux(const VelocityQuadrature& q, const InterfaceState& s, const FluxCoefficients& c,
                  double dx);

// Wall flux. f_cell is the adjacent cell, rho_cell its density.
// Returns the macroscopic flux; node values are written to out.
double boundary_flux_dirichlet(const VelocityQuadrature& q, Boundary side,
                               const BoundarySpec& spec, std::span<const double> f_cell,
                               double rho_cell, const FluxCoefficients& c, double eta, double dx,
                               std::span<double> out);

}  // namespace ugks
