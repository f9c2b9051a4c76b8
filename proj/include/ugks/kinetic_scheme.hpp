#pragma once

#include <span>
#include <vector>

#include "ugks/ugks_core.hpp"

namespace ugks {

// Everything a scheme needs besides its state.
struct Problem {
    SpatialGrid grid;
    VelocityQuadrature quad;
    RegimeParams params;
    BoundaryConditions bc;
};

struct KineticField {
    int nx = 0;
    int nv = 0;
    std::vector<double> f;    // f[i*nv + k]
    std::vector<double> rho;  // macroscopic density, carried alongside f

    KineticField() = default;
    KineticField(int cells, int nodes) : nx(cells), nv(nodes), f(std::size_t(cells) * nodes), rho(cells) {}

    std::span<double> cell(int i) { return {f.data() + std::size_t(i) * nv, std::size_t(nv)}; }
    std::span<const double> cell(int i) const {
        return {f.data() + std::size_t(i) * nv, std::size_t(nv)};
    }
};

// Fills rho from f by quadrature.
void sync_density(KineticField& field, const VelocityQuadrature& q);

// One UGKS step (van Leer slopes on f; zero slopes in wall-adjacent cells).
// Throws InstabilityError if a density drops below -1e-12.
KineticField step_kinetic(const KineticField& state, const Problem& pb, double dt);

// <f ln f - f> summed over cells times dx; non-positive values count as 0.
double kinetic_entropy(const KineticField& state, const Problem& pb);

}  // namespace ugks
