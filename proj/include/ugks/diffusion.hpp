#pragma once

#include <vector>

#include "ugks/kinetic_scheme.hpp"

namespace ugks {

// Explicit finite differences for d_t rho = d_x (kappa d_x rho), kappa = 1/(3 sigma).
struct DiffusionState {
    std::vector<double> rho;
};

// Largest stable explicit step, dx^2 / (2 max kappa).
double diffusion_stable_dt(const Problem& pb);

// Dirichlet walls use the wall density of the boundary data as a ghost value
// one cell width outside the domain. Throws ConfigError if dt is too large.
DiffusionState step_diffusion(const DiffusionState& state, const Problem& pb, double dt);

}  // namespace ugks
