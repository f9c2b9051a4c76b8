#include "ugks/m1_scheme.hpp"

#include <cmath>
#include <string>

#include "moment_flux.hpp"
#include "ugks/errors.hpp"

namespace ugks {
namespace {

using detail::UpwindSide;

// Half-moments of the ansatz; vacuum cells have none.
m1::HalfMoments ansatz_half(const m1::MomentVector& U, const m1::ClosureThresholds& th) {
    const auto lam = m1::entropic_from_moments(U, th);
    if (!lam) return {};
    return m1::half_moments(*lam);
}

UpwindSide side(const std::array<double, 5>& h, AnsatzSlope s = {}) {
    UpwindSide u;
    for (int k = 0; k < 5; ++k) u.h[k] = h[k];
    u.a = s.a;
    u.b = s.b;
    return u;
}

M1Flux assemble(const m1::MomentVector& Ul, const m1::MomentVector& Ur, const m1::HalfMoments& hl,
                const m1::HalfMoments& hr, AnsatzSlope sl, AnsatzSlope sr,
                const FluxCoefficients& c, double dx) {
    const UpwindSide L = side(hl.pos, sl);
    const UpwindSide R = side(hr.neg, sr);
    const double rho_iface = hl.pos[0] + hr.neg[0];
    return {detail::interface_moment_flux(0, L, R, Ul.rho, rho_iface, Ur.rho, c, dx),
            detail::interface_moment_flux(1, L, R, Ul.rho, rho_iface, Ur.rho, c, dx)};
}

}  // namespace

M1Flux m1_flux_first_order(const m1::MomentVector& Ul, const m1::MomentVector& Ur,
                           const FluxCoefficients& c, double dx, const m1::ClosureThresholds& th) {
    return assemble(Ul, Ur, ansatz_half(Ul, th), ansatz_half(Ur, th), {}, {}, c, dx);
}

std::vector<M1Slope> limited_slopes_m1(const M1Field& field, double dx, bool periodic) {
    const int nx = field.nx();
    std::vector<M1Slope> s(nx, M1Slope{0.0, 0.0});
    for (int i = 0; i < nx; ++i) {
        if (!periodic && (i == 0 || i == nx - 1)) continue;
        const auto& m = field.U[(i - 1 + nx) % nx];
        const auto& u = field.U[i];
        const auto& p = field.U[(i + 1) % nx];
        s[i] = {van_leer((p.rho - u.rho) / dx, (u.rho - m.rho) / dx),
                van_leer((p.j - u.j) / dx, (u.j - m.j) / dx)};
    }
    return s;
}

AnsatzSlope ansatz_slope(const m1::MomentVector& U, const M1Slope& dU,
                         const m1::ClosureThresholds& th) {
    if (dU[0] == 0.0 && dU[1] == 0.0) return {};
    if (U.rho < th.rho_eps) return {};
    const auto J = m1::jacobian_lambda(U, th);
    return {J[0][0] * dU[0] + J[0][1] * dU[1], J[1][0] * dU[0] + J[1][1] * dU[1]};
}

M1Flux m1_flux_second_order(const m1::MomentVector& Ul, const m1::MomentVector& Ur,
                            const M1Slope& dUl, const M1Slope& dUr, const FluxCoefficients& c,
                            double dx, const m1::ClosureThresholds& th) {
    return assemble(Ul, Ur, ansatz_half(Ul, th), ansatz_half(Ur, th), ansatz_slope(Ul, dUl, th),
                    ansatz_slope(Ur, dUr, th), c, dx);
}

M1Flux m1_boundary_flux(Boundary side, const BoundarySpec& spec, const m1::MomentVector& U_cell,
                        const FluxCoefficients& c, double eta, double dx,
                        const m1::ClosureThresholds& th) {
    const auto h = ansatz_half(U_cell, th);
    const auto& out = side == Boundary::left ? h.neg : h.pos;
    return {detail::wall_moment_flux(0, side, spec, out, U_cell.rho, c, eta, dx),
            detail::wall_moment_flux(1, side, spec, out, U_cell.rho, c, eta, dx)};
}

M1Field step_m1(const M1Field& s, const Problem& pb, double dt, const M1Options& opt) {
    if (opt.order != 1 && opt.order != 2) throw ConfigError("m1 scheme order must be 1 or 2");
    const int nx = s.nx();
    const double dx = pb.grid.dx();
    const bool periodic = pb.bc.periodic;
    const auto& th = opt.thresholds;
    const auto& par = pb.params;

    std::vector<m1::HalfMoments> half(nx);
    std::vector<AnsatzSlope> sl(nx);
    for (int i = 0; i < nx; ++i) half[i] = ansatz_half(s.U[i], th);
    if (opt.order == 2) {
        const auto dU = limited_slopes_m1(s, dx, periodic);
        for (int i = 0; i < nx; ++i) sl[i] = ansatz_slope(s.U[i], dU[i], th);
    }

    // flux[f] crosses the left face of cell f; flux[nx] is the right wall.
    std::vector<M1Flux> flux(nx + 1);
    for (int f = periodic ? 0 : 1; f < nx; ++f) {
        const int l = (f - 1 + nx) % nx;
        const auto c = flux_coefficients(dt, par.eta, par.epsilon, par.sigma_interface(l, f));
        flux[f] = assemble(s.U[l], s.U[f], half[l], half[f], sl[l], sl[f], c, dx);
    }
    if (periodic) {
        flux[nx] = flux[0];
    } else {
        const auto cl = flux_coefficients(dt, par.eta, par.epsilon, par.sigma[0]);
        flux[0] = m1_boundary_flux(Boundary::left, pb.bc.left, s.U[0], cl, par.eta, dx, th);
        const auto cr = flux_coefficients(dt, par.eta, par.epsilon, par.sigma[nx - 1]);
        flux[nx] = m1_boundary_flux(Boundary::right, pb.bc.right, s.U[nx - 1], cr, par.eta, dx, th);
    }

    M1Field out;
    out.U.resize(nx);
    const double lam = dt / dx;
    constexpr double umax = 1.0 - m1::kSaturationMargin;
    for (int i = 0; i < nx; ++i) {
        const double rho = s.U[i].rho - lam * (flux[i + 1].rho - flux[i].rho);
        double j = (s.U[i].j - lam * (flux[i + 1].j - flux[i].j)) / (1.0 + dt * par.nu(i));
        if (rho >= th.rho_eps || rho <= -th.rho_eps) {
            const bool ok = rho > 0.0 && std::fabs(j) < rho;
            if (opt.clamp_u && rho > 0.0) {
                if (std::fabs(j) > umax * rho) j = std::copysign(umax * rho, j);
            } else if (!ok) {
                throw RealizabilityError("m1 step: cell " + std::to_string(i) +
                                         " left the realizable set (rho = " + std::to_string(rho) +
                                         ", j = " + std::to_string(j) + ")");
            }
        }
        out.U[i] = {rho, j};
    }
    return out;
}

double m1_entropy(const M1Field& s, double dx, const m1::ClosureThresholds& th) {
    double h = 0.0;
    for (const auto& U : s.U) {
        const auto lam = m1::entropic_from_moments(U, th);
        if (!lam) continue;
        h += lam->alpha * U.rho + lam->beta * U.j - U.rho;
    }
    return h * dx;
}

}  // namespace ugks
