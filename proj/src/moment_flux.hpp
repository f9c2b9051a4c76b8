#pragma once

// Moments of the UGKS interface flux for an exponential ansatz, shared by the
// M1 and M2 schemes. Everything is expressed through half-moments of the
// ansatz on each side of the interface.

#include <array>

#include "ugks/ugks_core.hpp"

namespace ugks::detail {

// <v^n 1_{v>0}> and <v^n 1_{v<0}>
inline double half_monomial(int n, bool positive_side) {
    const double m = 1.0 / (2.0 * (n + 1));
    return (positive_side || n % 2 == 0) ? m : -m;
}

// <v^n> over [-1, 1]
inline double full_monomial(int n) { return n % 2 ? 0.0 : 1.0 / (n + 1); }

// One side of an interface: half-moments (orders 0..4) of f on the side that
// moves towards the interface, plus the slope delta_x f = (a + b v) f.
struct UpwindSide {
    std::array<double, 5> h{};
    double a = 0.0;
    double b = 0.0;
};

// <v^m phi> where phi is the micro flux built from the ansatz. m + 3 <= 4 is
// needed when slopes are present, so slopes are only allowed for m <= 1.
inline double interface_moment_flux(int m, const UpwindSide& left, const UpwindSide& right,
                                    double rho_left, double rho_iface, double rho_right,
                                    const FluxCoefficients& c, double dx) {
    const double h = 0.5 * dx;
    const auto& L = left.h;
    const auto& R = right.h;
    double a_term = L[m + 1] + R[m + 1];
    double b_term = 0.0;
    if (left.a != 0.0 || left.b != 0.0 || right.a != 0.0 || right.b != 0.0) {
        a_term += h * (left.a * L[m + 1] + left.b * L[m + 2]) -
                  h * (right.a * R[m + 1] + right.b * R[m + 2]);
        b_term = left.a * L[m + 2] + left.b * L[m + 3] + right.a * R[m + 2] + right.b * R[m + 3];
    }
    const double dl = (rho_iface - rho_left) / h;
    const double dr = (rho_right - rho_iface) / h;
    return c.A * a_term + c.B * b_term + c.C * rho_iface * full_monomial(m + 1) +
           c.D * (dl * half_monomial(m + 2, true) + dr * half_monomial(m + 2, false));
}

// <v^m phi> at a Dirichlet wall. out_half are the half-moments of the cell
// ansatz on the side leaving the domain.
inline double wall_moment_flux(int m, Boundary side, const BoundarySpec& spec,
                               const std::array<double, 5>& out_half, double rho_cell,
                               const FluxCoefficients& c, double eta, double dx) {
    const bool left = side == Boundary::left;
    const double rho_w = wall_density(side, spec);
    const double drho = left ? (rho_cell - rho_w) / (0.5 * dx) : (rho_w - rho_cell) / (0.5 * dx);
    const bool out_positive = !left;
    const double entering = spec.half_moment(m + 1, left) / eta;
    const double exiting = c.A * out_half[m + 1] + c.C * rho_w * half_monomial(m + 1, out_positive) +
                           c.D * drho * half_monomial(m + 2, out_positive);
    return entering + exiting;
}

}  // namespace ugks::detail
