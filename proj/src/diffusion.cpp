#include "ugks/diffusion.hpp"

#include "ugks/errors.hpp"

namespace ugks {

double diffusion_stable_dt(const Problem& pb) {
    const double dx = pb.grid.dx();
    const double kmax = 1.0 / (3.0 * pb.params.sigma_min());
    return dx * dx / (2.0 * kmax);
}

DiffusionState step_diffusion(const DiffusionState& s, const Problem& pb, double dt) {
    // a little slack so that a step computed as exactly the limit passes
    if (dt > diffusion_stable_dt(pb) * (1.0 + 1e-12))
        throw ConfigError("diffusion step: dt above the explicit stability limit");
    const int nx = static_cast<int>(s.rho.size());
    const double dx = pb.grid.dx();
    const auto& sig = pb.params.sigma;
    auto kappa = [&](int i) { return 1.0 / (3.0 * sig[i]); };

    // flux[f] = kappa (rho_right - rho_left) across the left face of cell f
    std::vector<double> flux(nx + 1, 0.0);
    for (int f = 1; f < nx; ++f)
        flux[f] = 0.5 * (kappa(f - 1) + kappa(f)) * (s.rho[f] - s.rho[f - 1]);
    if (pb.bc.periodic) {
        flux[0] = 0.5 * (kappa(nx - 1) + kappa(0)) * (s.rho[0] - s.rho[nx - 1]);
        flux[nx] = flux[0];
    } else {
        flux[0] = kappa(0) * (s.rho[0] - wall_density(Boundary::left, pb.bc.left));
        flux[nx] = kappa(nx - 1) * (wall_density(Boundary::right, pb.bc.right) - s.rho[nx - 1]);
    }
    DiffusionState out;
    out.rho.resize(nx);
    const double r = dt / (dx * dx);
    for (int i = 0; i < nx; ++i) out.rho[i] = s.rho[i] + r * (flux[i + 1] - flux[i]);
    return out;
}

}  // namespace ugks
