#include "ugks/kinetic_scheme.hpp"

#include <cmath>
#include <string>

#include "ugks/errors.hpp"

namespace ugks {

void sync_density(KineticField& field, const VelocityQuadrature& q) {
    for (int i = 0; i < field.nx; ++i) field.rho[i] = q.average(field.cell(i));
}

KineticField step_kinetic(const KineticField& s, const Problem& pb, double dt) {
    const int nx = s.nx;
    const int nv = s.nv;
    const double dx = pb.grid.dx();
    const auto& q = pb.quad;
    const bool periodic = pb.bc.periodic;

    KineticField slopes(nx, nv);
    for (int i = 0; i < nx; ++i) {
        if (!periodic && (i == 0 || i == nx - 1)) continue;
        const auto fm = s.cell((i - 1 + nx) % nx);
        const auto f0 = s.cell(i);
        const auto fp = s.cell((i + 1) % nx);
        auto d = slopes.cell(i);
        for (int k = 0; k < nv; ++k) d[k] = van_leer((fp[k] - f0[k]) / dx, (f0[k] - fm[k]) / dx);
    }

    // flux[i] is the flux through the left face of cell i; flux[nx] the right wall.
    std::vector<double> micro(std::size_t(nx + 1) * nv);
    std::vector<double> macro(nx + 1);
    auto face = [&](int f) { return std::span<double>(micro.data() + std::size_t(f) * nv, nv); };

    const int first = periodic ? 0 : 1;
    for (int f = first; f < nx; ++f) {
        const int l = (f - 1 + nx) % nx;
        const int r = f;
        const auto c = flux_coefficients(dt, pb.params.eta, pb.params.epsilon,
                                         pb.params.sigma_interface(l, r));
        InterfaceState st{s.cell(l), s.cell(r), slopes.cell(l), slopes.cell(r),
                          s.rho[l], interface_density(q, s.cell(l), s.cell(r)), s.rho[r]};
        micro_flux(q, st, c, dx, face(f));
        macro[f] = macro_flux(q, st, c, dx);
    }
    if (periodic) {
        std::copy(face(0).begin(), face(0).end(), face(nx).begin());
        macro[nx] = macro[0];
    } else {
        const auto cl = flux_coefficients(dt, pb.params.eta, pb.params.epsilon, pb.params.sigma[0]);
        macro[0] = boundary_flux_dirichlet(q, Boundary::left, pb.bc.left, s.cell(0), s.rho[0], cl,
                                           pb.params.eta, dx, face(0));
        const auto cr =
            flux_coefficients(dt, pb.params.eta, pb.params.epsilon, pb.params.sigma[nx - 1]);
        macro[nx] = boundary_flux_dirichlet(q, Boundary::right, pb.bc.right, s.cell(nx - 1),
                                            s.rho[nx - 1], cr, pb.params.eta, dx, face(nx));
    }

    KineticField out(nx, nv);
    const double lam = dt / dx;
    for (int i = 0; i < nx; ++i) {
        const double rho = s.rho[i] - lam * (macro[i + 1] - macro[i]);
        if (rho < -1e-12)
            throw InstabilityError("kinetic step: negative density " + std::to_string(rho) +
                                   " in cell " + std::to_string(i));
        out.rho[i] = rho;
        const double nudt = dt * pb.params.nu(i);
        const auto fi = s.cell(i);
        const auto pl = face(i);
        const auto pr = face(i + 1);
        auto o = out.cell(i);
        for (int k = 0; k < nv; ++k)
            o[k] = (fi[k] - lam * (pr[k] - pl[k]) + nudt * rho) / (1.0 + nudt);
    }
    return out;
}

double kinetic_entropy(const KineticField& s, const Problem& pb) {
    double h = 0.0;
    for (int i = 0; i < s.nx; ++i) {
        const auto fi = s.cell(i);
        double c = 0.0;
        for (int k = 0; k < s.nv; ++k) {
            const double f = fi[k];
            if (f > 0.0) c += pb.quad.weights[k] * (f * std::log(f) - f);
        }
        h += 0.5 * c;
    }
    return h * pb.grid.dx();
}

}  // namespace ugks
