#pragma once

#include <array>
#include <vector>

#include "ugks/kinetic_scheme.hpp"
#include "ugks/m1_closure.hpp"
#include "ugks/ugks_core.hpp"

namespace ugks {

struct M1Flux {
    double rho = 0.0;
    double j = 0.0;
};

using M1Slope = std::array<double, 2>;  // (d rho/dx, d j/dx)

// delta_x f = (a + b v) f for the M1 ansatz.
struct AnsatzSlope {
    double a = 0.0;
    double b = 0.0;
};

struct M1Field {
    std::vector<m1::MomentVector> U;

    int nx() const { return static_cast<int>(U.size()); }
};

struct M1Options {
    int order = 1;
    // Clamp |u| to 1 - 1e-9 after each update instead of aborting.
    bool clamp_u = false;
    m1::ClosureThresholds thresholds{};
};

M1Flux m1_flux_first_order(const m1::MomentVector& Ul, const m1::MomentVector& Ur,
                           const FluxCoefficients& c, double dx,
                           const m1::ClosureThresholds& th = {});

// van Leer limited slopes of (rho, j). Wall cells get zero slope unless periodic.
std::vector<M1Slope> limited_slopes_m1(const M1Field& field, double dx, bool periodic);

AnsatzSlope ansatz_slope(const m1::MomentVector& U, const M1Slope& dU,
                         const m1::ClosureThresholds& th = {});

M1Flux m1_flux_second_order(const m1::MomentVector& Ul, const m1::MomentVector& Ur,
                            const M1Slope& dUl, const M1Slope& dUr, const FluxCoefficients& c,
                            double dx, const m1::ClosureThresholds& th = {});

M1Flux m1_boundary_flux(Boundary side, const BoundarySpec& spec, const m1::MomentVector& U_cell,
                        const FluxCoefficients& c, double eta, double dx,
                        const m1::ClosureThresholds& th = {});

// One step. Throws RealizabilityError naming the first bad cell unless clamp_u.
M1Field step_m1(const M1Field& state, const Problem& pb, double dt, const M1Options& opt = {});

// sum_i (alpha rho + beta j - rho) dx, the entropy of the ansatz.
double m1_entropy(const M1Field& state, double dx, const m1::ClosureThresholds& th = {});

}  // namespace ugks
