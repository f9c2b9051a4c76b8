#pragma once

#include <array>
#include <optional>

namespace ugks::m1 {

struct MomentVector {
    double rho = 0.0;
    double j = 0.0;
};

// Multipliers of the ansatz f(v) = exp(alpha + beta v).
struct EntropicVars {
    double alpha = 0.0;
    double beta = 0.0;
};

struct ClosureThresholds {
    // |u| <= z(beta_eps) maps to beta = 0. Zero keeps the exact solve everywhere.
    double beta_eps = 0.0;
    // Densities below this are vacuum.
    double rho_eps = 1e-12;
};

inline constexpr double kSaturationMargin = 1e-9;

enum class Side { positive, negative };

using Matrix2 = std::array<std::array<double, 2>, 2>;

// Half-moments <v^k f 1_{v>0}> and <v^k f 1_{v<0}>, k = 0..4.
struct HalfMoments {
    std::array<double, 5> pos{};
    std::array<double, 5> neg{};
};

bool is_realizable(const MomentVector& U);

// Langevin function coth(b) - 1/b, and its derivative (the ansatz variance).
double z_of_beta(double beta);
double dz_dbeta(double beta);
// q/rho of the ansatz, 1 - 2 z(b)/b.
double second_moment_ratio(double beta);

double beta_of_u(double u, double tol = 1e-13);

// nullopt means vacuum. Throws RealizabilityError for |j| >= rho.
// Saturated states with |u| >= 1 - kSaturationMargin are pulled back onto that bound.
std::optional<EntropicVars> entropic_from_moments(const MomentVector& U,
                                                  const ClosureThresholds& th = {});

double half_moment(int k, const EntropicVars& lam, Side side);
HalfMoments half_moments(const EntropicVars& lam);

double closure_q(const MomentVector& U, const ClosureThresholds& th = {});

// Inverse of the Hessian <m m^T f>; maps dU to dLambda.
Matrix2 jacobian_lambda(const MomentVector& U, const ClosureThresholds& th = {});

// Times entropic_from_moments clamped a saturated state (process-wide).
long saturation_clamp_count();
void reset_saturation_clamp_count();

}  // namespace ugks::m1
