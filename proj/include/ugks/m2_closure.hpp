#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ugks/special_functions.hpp"

namespace ugks::m2 {

struct MomentVector {
    double rho = 0.0;
    double j = 0.0;
    double q = 0.0;
};

// Multipliers of the ansatz f(v) = exp(alpha + beta v + gamma v^2).
struct EntropicVars {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

// gamma_small: power series in gamma about v = 0, restricted to a window near
//              0 when the ansatz decays fast (and then possibly joined by the
//              same window at the far end).
// asymptotic:  the same series taken about the v = 1 (or -1) endpoint, for
//              ansatze concentrated there.
// direct:      Dawson / scaled-erfc closed form plus the upward recurrence.
enum class Branch { direct, asymptotic, gamma_small };

const char* branch_name(Branch b);

// <v^k f 1_{v>0}> and <v^k f 1_{v<0}> for k = 0..4.
struct HalfMoments {
    std::array<double, 5> pos{};
    std::array<double, 5> neg{};
    Branch branch = Branch::gamma_small;  // branch of the heavier half

    double full(int k) const { return pos[k] + neg[k]; }
};

struct HalfMomentSet {
    double rho_p, rho_m, j_p, j_m, q_p, q_m, k_p, k_m;
};

HalfMoments half_moments_all(const EntropicVars& lam,
                             special::SeriesOrder order = special::kClosureSeriesOrder);
HalfMomentSet half_moments(const EntropicVars& lam,
                           special::SeriesOrder order = special::kClosureSeriesOrder);
MomentVector moments_from_lambda(const EntropicVars& lam,
                                 special::SeriesOrder order = special::kClosureSeriesOrder);

struct DualValue {
    double value = 0.0;
    std::array<double, 3> gradient{};
};

// J(L) = <exp(L.m)> - L.U and its gradient.
DualValue dual_functional(const EntropicVars& lam, const MomentVector& U);

bool is_realizable(const MomentVector& U);

enum class Direction { newton, steepest };

struct InversionOptions {
    double tol = 1e-10;
    int max_iter = 10000;
    Direction direction = Direction::newton;
    bool record_history = false;
};

struct InversionReport {
    int iterations = 0;
    double final_gradient_norm = 0.0;
    Branch branch_used = Branch::gamma_small;
    std::vector<double> objective_history;  // filled when requested
};

struct InversionResult {
    EntropicVars lambda;
    InversionReport report;
};

// Minimises J with Armijo backtracking. Starts from guess when given, else
// from the M1 fit of (rho, j). Throws RealizabilityError / ConvergenceError.
InversionResult lambda_from_moments(const MomentVector& U, const InversionOptions& opt = {},
                                    std::optional<EntropicVars> guess = std::nullopt);

namespace detail {
// Positive-half moments k = 0..4 by one fixed branch. The second element is
// that branch's own relative error estimate.
std::pair<std::array<double, 5>, double> positive_half(const EntropicVars& lam, Branch b,
                                                       special::SeriesOrder order);
}  // namespace detail

}  // namespace ugks::m2
