#include "ugks/m1_closure.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "ugks/errors.hpp"

namespace ugks::m1 {
namespace {

std::atomic<long> g_clamp_count{0};

constexpr double kSmallBeta = 0.1;

// Horner in b^2.
template <std::size_t N>
double even_poly(const double (&c)[N], double b2) {
    double s = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) s = s * b2 + c[i];
    return s;
}

// ln(sinh b / b), even in b.
double log_sinhc(double beta) {
    const double a = std::fabs(beta);
    if (a < kSmallBeta) {
        static constexpr double c[] = {0.0, 1.0 / 6.0, -1.0 / 180.0, 1.0 / 2835.0, -1.0 / 37800.0,
                                       1.0 / 467775.0};
        return even_poly(c, a * a);
    }
    return a - std::log(2.0 * a) + std::log1p(-std::exp(-2.0 * a));
}

// <v^k e^{bv} 1_{v>0}>, e^alpha factored in, for |b| < 1.
double positive_series(int k, double alpha, double beta) {
    double sum = 0.0;
    double t = 1.0;
    for (int n = 0; n < 30; ++n) {
        sum += t / (k + n + 1);
        t *= beta / (n + 1);
        if (std::fabs(t) < 1e-18) break;
    }
    return 0.5 * std::exp(alpha) * sum;
}

// Developed closed forms, exponentials grouped as e^{alpha+beta} and e^{alpha}.
double positive_developed(int k, double alpha, double beta) {
    const double r = 1.0 / beta;
    double p = 1.0;
    double c = 0.0;
    switch (k) {
        case 0: c = -1.0; break;
        case 1:
            p = 1.0 - r;
            c = r;
            break;
        case 2:
            p = 1.0 - 2.0 * r + 2.0 * r * r;
            c = -2.0 * r * r;
            break;
        case 3:
            p = 1.0 - 3.0 * r + 6.0 * r * r - 6.0 * r * r * r;
            c = 6.0 * r * r * r;
            break;
        case 4:
            p = 1.0 - 4.0 * r + 12.0 * r * r - 24.0 * r * r * r + 24.0 * r * r * r * r;
            c = -24.0 * r * r * r * r;
            break;
        default: throw DomainError("half_moment: order must be 0..4");
    }
    return (std::exp(alpha + beta) * p + std::exp(alpha) * c) * 0.5 * r;
}

double positive_half(int k, double alpha, double beta) {
    if (std::fabs(beta) < 1.0) return positive_series(k, alpha, beta);
    return positive_developed(k, alpha, beta);
}

}  // namespace

bool is_realizable(const MomentVector& U) {
    if (U.rho > 0.0) return std::fabs(U.j) < U.rho;
    return U.rho == 0.0 && U.j == 0.0;
}

double z_of_beta(double beta) {
    if (std::fabs(beta) < kSmallBeta) {
        static constexpr double c[] = {1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0, -1.0 / 4725.0,
                                       2.0 / 93555.0, -1382.0 / 638512875.0};
        return beta * even_poly(c, beta * beta);
    }
    return 1.0 / std::tanh(beta) - 1.0 / beta;
}

double dz_dbeta(double beta) {
    if (std::fabs(beta) < kSmallBeta) {
        static constexpr double c[] = {1.0 / 3.0, -1.0 / 15.0, 2.0 / 189.0, -1.0 / 675.0,
                                       2.0 / 10395.0};
        return even_poly(c, beta * beta);
    }
    const double s = std::sinh(beta);
    return 1.0 / (beta * beta) - 1.0 / (s * s);
}

double second_moment_ratio(double beta) {
    if (std::fabs(beta) < kSmallBeta) {
        static constexpr double c[] = {1.0 / 3.0, 2.0 / 45.0, -4.0 / 945.0, 2.0 / 4725.0,
                                       -4.0 / 93555.0};
        return even_poly(c, beta * beta);
    }
    return 1.0 - 2.0 * z_of_beta(beta) / beta;
}

double beta_of_u(double u, double tol) {
    if (!(std::fabs(u) < 1.0)) throw DomainError("beta_of_u: |u| must be < 1");
    if (u == 0.0) return 0.0;
    const double a = std::fabs(u);
    // coth(b) = 1 to double precision here, so z(b) = 1 - 1/b exactly
    if (1.0 - a < 0.04) return std::copysign(1.0 / (1.0 - a), u);
    // z(b) > 1 - 1/b, so the root lies below 1/(1-a).
    double lo = 0.0;
    double hi = 1.0 / (1.0 - a);
    double b = a * (3.0 - a * a) / (1.0 - a * a);
    if (!(b > lo && b < hi)) b = 0.5 * (lo + hi);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < 100; ++it) {
        const double f = z_of_beta(b) - a;
        if (std::fabs(f) <= tol * std::min(1.0, a)) return std::copysign(b, u);
        if (f > 0.0)
            hi = b;
        else
            lo = b;
        double next = b - f / dz_dbeta(b);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - b) <= 4.0 * eps * b) {
            if (std::fabs(f) <= tol) return std::copysign(b, u);
        }
        b = next;
    }
    if (std::fabs(z_of_beta(b) - a) <= tol) return std::copysign(b, u);
    throw ConvergenceError("beta_of_u: Newton iteration did not converge");
}

std::optional<EntropicVars> entropic_from_moments(const MomentVector& U,
                                                  const ClosureThresholds& th) {
    if (U.rho < th.rho_eps) return std::nullopt;
    if (!is_realizable(U)) throw RealizabilityError("entropic_from_moments: |j| >= rho");
    double u = U.j / U.rho;
    constexpr double umax = 1.0 - kSaturationMargin;
    if (std::fabs(u) > umax) {
        u = std::copysign(umax, u);
        g_clamp_count.fetch_add(1, std::memory_order_relaxed);
    }
    double beta = 0.0;
    if (!(th.beta_eps > 0.0 && std::fabs(u) <= z_of_beta(th.beta_eps))) beta = beta_of_u(u);
    return EntropicVars{std::log(U.rho) - log_sinhc(beta), beta};
}

double half_moment(int k, const EntropicVars& lam, Side side) {
    if (k < 0 || k > 4) throw DomainError("half_moment: order must be 0..4");
    if (side == Side::positive) return positive_half(k, lam.alpha, lam.beta);
    const double v = positive_half(k, lam.alpha, -lam.beta);
    return (k % 2 == 0) ? v : -v;
}

HalfMoments half_moments(const EntropicVars& lam) {
    HalfMoments h;
    for (int k = 0; k <= 4; ++k) {
        h.pos[k] = half_moment(k, lam, Side::positive);
        h.neg[k] = half_moment(k, lam, Side::negative);
    }
    return h;
}

double closure_q(const MomentVector& U, const ClosureThresholds& th) {
    const auto lam = entropic_from_moments(U, th);
    if (!lam) return 0.0;
    return U.rho * second_moment_ratio(lam->beta);
}

Matrix2 jacobian_lambda(const MomentVector& U, const ClosureThresholds& th) {
    const auto lam = entropic_from_moments(U, th);
    if (!lam) throw DomainError("jacobian_lambda: vacuum state");
    const double beta = lam->beta;
    const double u = z_of_beta(beta);
    const double var = dz_dbeta(beta);
    if (!(var > 1e3 * std::numeric_limits<double>::min()))
        throw NumericalError("jacobian_lambda: singular moment Hessian");
    const double s = 1.0 / (U.rho * var);
    return {{{s * second_moment_ratio(beta), -s * u}, {-s * u, s}}};
}

long saturation_clamp_count() { return g_clamp_count.load(); }
void reset_saturation_clamp_count() { g_clamp_count.store(0); }

}  // namespace ugks::m1
