#pragma once

#include <optional>
#include <vector>

#include "ugks/kinetic_scheme.hpp"
#include "ugks/m2_closure.hpp"
#include "ugks/ugks_core.hpp"

namespace ugks {

struct M2Flux {
    double rho = 0.0;
    double j = 0.0;
    double q = 0.0;
};

struct M2Field {
    std::vector<m2::MomentVector> U;
    // Multipliers of the last successful inversion per cell, used as warm starts.
    std::vector<std::optional<m2::EntropicVars>> lambda;

    int nx() const { return static_cast<int>(U.size()); }
};

struct M2Options {
    m2::InversionOptions inversion{};
    double rho_eps = 1e-12;  // below this a cell is vacuum
};

// Half-moments of the ansatz for given multipliers (nullopt means vacuum).
m2::HalfMoments m2_ansatz_half(const std::optional<m2::EntropicVars>& lam);

M2Flux m2_flux(const m2::MomentVector& Ul, const m2::MomentVector& Ur, const m2::HalfMoments& hl,
               const m2::HalfMoments& hr, const FluxCoefficients& c, double dx);

// Convenience form that inverts both cells first.
M2Flux m2_flux(const m2::MomentVector& Ul, const m2::MomentVector& Ur, const FluxCoefficients& c,
               double dx, const M2Options& opt = {});

M2Flux m2_boundary_flux(Boundary side, const BoundarySpec& spec, const m2::MomentVector& U_cell,
                        const m2::HalfMoments& h_cell, const FluxCoefficients& c, double eta,
                        double dx);

// Inverts every non-vacuum cell, warm-started from state.lambda. Throws
// ConvergenceError naming the cell and its moments on failure.
std::vector<std::optional<m2::EntropicVars>> invert_field(const M2Field& state, const M2Options& opt);

// One step: rho, then j, then q. The result carries the multipliers of the
// input state as warm starts for the next step.
M2Field step_m2(const M2Field& state, const Problem& pb, double dt, const M2Options& opt = {});

// sum_i (alpha rho + beta j + gamma q - rho) dx.
double m2_entropy(const M2Field& state, double dx, const M2Options& opt = {});

}  // namespace ugks
