#include "ugks/m2_scheme.hpp"

#include <sstream>
#include <string>

#include "moment_flux.hpp"
#include "ugks/errors.hpp"

namespace ugks {
namespace {

detail::UpwindSide side(const std::array<double, 5>& h) {
    detail::UpwindSide u;
    u.h = h;
    return u;
}

std::string describe(int i, const m2::MomentVector& U) {
    std::ostringstream os;
    os.precision(17);
    os << "cell " << i << " (rho = " << U.rho << ", j = " << U.j << ", q = " << U.q << ")";
    return os.str();
}

}  // namespace

m2::HalfMoments m2_ansatz_half(const std::optional<m2::EntropicVars>& lam) {
    if (!lam) return {};
    return m2::half_moments_all(*lam);
}

M2Flux m2_flux(const m2::MomentVector& Ul, const m2::MomentVector& Ur, const m2::HalfMoments& hl,
               const m2::HalfMoments& hr, const FluxCoefficients& c, double dx) {
    const auto L = side(hl.pos);
    const auto R = side(hr.neg);
    const double rho_iface = hl.pos[0] + hr.neg[0];
    return {detail::interface_moment_flux(0, L, R, Ul.rho, rho_iface, Ur.rho, c, dx),
            detail::interface_moment_flux(1, L, R, Ul.rho, rho_iface, Ur.rho, c, dx),
            detail::interface_moment_flux(2, L, R, Ul.rho, rho_iface, Ur.rho, c, dx)};
}

M2Flux m2_flux(const m2::MomentVector& Ul, const m2::MomentVector& Ur, const FluxCoefficients& c,
               double dx, const M2Options& opt) {
    M2Field pair{{Ul, Ur}, {}};
    const auto lam = invert_field(pair, opt);
    return m2_flux(Ul, Ur, m2_ansatz_half(lam[0]), m2_ansatz_half(lam[1]), c, dx);
}

M2Flux m2_boundary_flux(Boundary side, const BoundarySpec& spec, const m2::MomentVector& U_cell,
                        const m2::HalfMoments& h, const FluxCoefficients& c, double eta, double dx) {
    const auto& out = side == Boundary::left ? h.neg : h.pos;
    return {detail::wall_moment_flux(0, side, spec, out, U_cell.rho, c, eta, dx),
            detail::wall_moment_flux(1, side, spec, out, U_cell.rho, c, eta, dx),
            detail::wall_moment_flux(2, side, spec, out, U_cell.rho, c, eta, dx)};
}

std::vector<std::optional<m2::EntropicVars>> invert_field(const M2Field& s, const M2Options& opt) {
    const int nx = s.nx();
    std::vector<std::optional<m2::EntropicVars>> lam(nx);
    for (int i = 0; i < nx; ++i) {
        const auto& U = s.U[i];
        if (U.rho < opt.rho_eps) continue;
        std::optional<m2::EntropicVars> guess;
        if (i < static_cast<int>(s.lambda.size())) guess = s.lambda[i];
        try {
            lam[i] = m2::lambda_from_moments(U, opt.inversion, guess).lambda;
        } catch (const RealizabilityError& e) {
            throw RealizabilityError("m2 inversion: " + describe(i, U) + ": " + e.what());
        } catch (const NumericalError& e) {
            if (!guess) throw ConvergenceError("m2 inversion: " + describe(i, U) + ": " + e.what());
            // a stale warm start can sit far from the new solution; retry cold
            try {
                lam[i] = m2::lambda_from_moments(U, opt.inversion).lambda;
            } catch (const NumericalError& e2) {
                throw ConvergenceError("m2 inversion: " + describe(i, U) + ": " + e2.what());
            }
        }
    }
    return lam;
}

M2Field step_m2(const M2Field& s, const Problem& pb, double dt, const M2Options& opt) {
    const int nx = s.nx();
    const double dx = pb.grid.dx();
    const bool periodic = pb.bc.periodic;
    const auto& par = pb.params;

    const auto lam = invert_field(s, opt);
    std::vector<m2::HalfMoments> half(nx);
    for (int i = 0; i < nx; ++i) half[i] = m2_ansatz_half(lam[i]);

    std::vector<M2Flux> flux(nx + 1);
    for (int f = periodic ? 0 : 1; f < nx; ++f) {
        const int l = (f - 1 + nx) % nx;
        const auto c = flux_coefficients(dt, par.eta, par.epsilon, par.sigma_interface(l, f));
        flux[f] = m2_flux(s.U[l], s.U[f], half[l], half[f], c, dx);
    }
    if (periodic) {
        flux[nx] = flux[0];
    } else {
        const auto cl = flux_coefficients(dt, par.eta, par.epsilon, par.sigma[0]);
        flux[0] = m2_boundary_flux(Boundary::left, pb.bc.left, s.U[0], half[0], cl, par.eta, dx);
        const auto cr = flux_coefficients(dt, par.eta, par.epsilon, par.sigma[nx - 1]);
        flux[nx] = m2_boundary_flux(Boundary::right, pb.bc.right, s.U[nx - 1], half[nx - 1], cr,
                                    par.eta, dx);
    }

    M2Field out;
    out.U.resize(nx);
    out.lambda = lam;
    const double r = dt / dx;
    for (int i = 0; i < nx; ++i) {
        const auto& U = s.U[i];
        const double nudt = dt * par.nu(i);
        const double rho = U.rho - r * (flux[i + 1].rho - flux[i].rho);
        const double j = (U.j - r * (flux[i + 1].j - flux[i].j)) / (1.0 + nudt);
        const double q = (U.q - r * (flux[i + 1].q - flux[i].q) + nudt * rho / 3.0) / (1.0 + nudt);
        out.U[i] = {rho, j, q};
        const bool vacuum = rho < opt.rho_eps && rho > -opt.rho_eps;
        if (!vacuum && !m2::is_realizable(out.U[i]))
            throw RealizabilityError("m2 step: " + describe(i, out.U[i]) +
                                     " left the realizable set");
    }
    return out;
}

double m2_entropy(const M2Field& s, double dx, const M2Options& opt) {
    const auto lam = invert_field(s, opt);
    double h = 0.0;
    for (int i = 0; i < s.nx(); ++i) {
        if (!lam[i]) continue;
        const auto& U = s.U[i];
        h += lam[i]->alpha * U.rho + lam[i]->beta * U.j + lam[i]->gamma * U.q - U.rho;
    }
    return h * dx;
}

}  // namespace ugks
