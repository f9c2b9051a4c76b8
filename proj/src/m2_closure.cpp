#include "ugks/m2_closure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ugks/errors.hpp"
#include "ugks/m1_closure.hpp"

namespace ugks::m2 {
namespace {

using special::SeriesOrder;
using Arr5 = std::array<double, 5>;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSqrtPi = 1.7724538509055160273;
// A branch whose own error estimate is below this is taken without trying others.
constexpr double kAcceptError = 1e-11;
// Above this, no branch result is trusted.
constexpr double kRejectError = 1e-6;
// Past this |gamma| the series need O(|gamma|) terms; the closed form goes first.
constexpr double kLargeGamma = 50.0;
// Series branches are not attempted when they would need more terms than this.
constexpr int kMaxSeriesTerms = 4000;

// Q_n = e^{-max(b,0)} (1/2) int_0^1 v^n e^{bv} dv for n = 0..N.
// Upward recurrence while n <= |b|, downward from a convergent series above.
void scaled_power_moments(double b, int N, std::vector<double>& Q) {
    Q.assign(N + 1, 0.0);
    const double ab = std::fabs(b);
    const double eb = b > 0.0 ? 0.5 : 0.5 * std::exp(b);
    int m = -1;
    if (ab >= 1.0) {
        m = ab >= N ? N : static_cast<int>(std::floor(ab));
        Q[0] = b > 0.0 ? -std::expm1(-b) / (2.0 * b) : std::expm1(b) / (2.0 * b);
        for (int n = 1; n <= m; ++n) Q[n] = (eb - n * Q[n - 1]) / b;
    }
    if (m >= N) return;
    const int ns = std::max(N, static_cast<int>(2.0 * ab) + 10);
    // (1/2) sum_j (-b)^j / ((ns+1)...(ns+j+1)), times e^b when b < 0
    double sum = 0.0;
    double t = 1.0 / (ns + 1);
    for (int j = 0; j < 100000; ++j) {
        sum += t;
        t *= -b / (ns + j + 2);
        if (std::fabs(t) < 1e-17 * std::fabs(sum)) break;
    }
    double qn = 0.5 * sum * (b < 0.0 ? std::exp(b) : 1.0);
    if (ns <= N) Q[ns] = qn;
    for (int n = ns; n >= m + 2; --n) {
        qn = (eb - b * qn) / n;
        if (n - 1 <= N) Q[n - 1] = qn;
    }
}

struct SeriesSums {
    double log_scale;
    Arr5 r;
    double cancel;
    double tail_rel = 0.0;
};

// r_i = e^{-log_scale} (1/2) int_0^1 v^i e^{bv + g v^2} dv, expanded in g.
// Summation stops early once the Taylor remainder of e^{g v^2} is provably
// negligible; this is what makes steep one-sided profiles cheap.
SeriesSums series_on_unit(double b, double g) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double ag = std::fabs(g);
    // smallest M past |g| with |g|^M / M! below 1e-18, tracked in logs
    int M = 1;
    for (double lt = 0.0;; ++M) {
        lt += std::log(ag / M);
        if (M > ag && lt < -41.5) break;
        if (M >= kMaxSeriesTerms) break;
    }
    const bool converged_at_M = M < kMaxSeriesTerms;
    const int N = 6 + 2 * M;
    thread_local std::vector<double> Q;
    thread_local std::vector<double> Qt;
    scaled_power_moments(b, N, Q);
    // Remainder majorant: |g|^{m+1}/(m+1)! * (1/2) int v^{n} e^{bv} max(1, e^{g v}).
    const double bt = g > 0.0 ? b + g : b;
    scaled_power_moments(bt, N, Qt);
    const double log_shift = std::max(bt, 0.0) - std::max(b, 0.0);

    SeriesSums s{std::max(b, 0.0), {}, 1.0};
    Arr5 abs_sum{};
    double c = 1.0;
    double log_c = 0.0;  // log of |g|^{m+1}/(m+1)!
    for (int m = 0; m <= M; ++m) {
        for (int k = 0; k <= 4; ++k) {
            const double term = c * Q[k + 2 * m];
            s.r[k] += term;
            abs_sum[k] += std::fabs(term);
        }
        c *= g / (m + 1);
        log_c += std::log(ag / (m + 1));
        if (m == M) break;
        bool done = true;
        for (int k = 0; k <= 4 && done; ++k) {
            const double qt = Qt[k + 2 * m + 2];
            const double bound = qt > 0.0 ? std::exp(log_c + std::log(qt) + log_shift) : 0.0;
            done = bound <= 1e-17 * std::fabs(s.r[k]);
        }
        if (done) break;
        if (m + 1 == M && !converged_at_M) return {0.0, {}, inf};
    }
    for (int k = 0; k <= 4; ++k)
        s.cancel = std::max(s.cancel, s.r[k] != 0.0 ? abs_sum[k] / std::fabs(s.r[k]) : inf);
    for (double x : s.r)
        if (!std::isfinite(x)) s.cancel = inf;
    if (!std::isfinite(s.cancel)) s.cancel = inf;
    return s;
}

// Width of [0, w] outside which e^{bv + min(g,0) v^2} has decayed far below
// the v^4 moment.
double window_width(double b, double g) {
    if (b > 0.0) return 1.0;
    const double decay = 40.0 + 6.0 * std::log(std::max(1.0, std::max(-b, std::sqrt(std::fabs(g)))));
    double w = 1.0;
    if (g < 0.0) {
        // root of b w + g w^2 = -decay
        w = 2.0 * decay / (-b + std::sqrt(b * b - 4.0 * g * decay));
    } else if (b < -decay) {
        w = decay / -b;
    }
    return std::min(w, 1.0);
}

// Largest value of bv + gv^2 on [lo, hi].
double exponent_max(double b, double g, double lo, double hi) {
    double top = std::max(b * lo + g * lo * lo, b * hi + g * hi * hi);
    if (g < 0.0) {
        const double v = -b / (2.0 * g);
        if (v > lo && v < hi) top = std::max(top, b * v + g * v * v);
    }
    return top;
}

// Series over [0, w] only, in the scaling of series_on_unit(b, g).
SeriesSums window_series(double b, double g, double w) {
    if (w >= 1.0) return series_on_unit(b, g);
    SeriesSums s = series_on_unit(b * w, g * w * w);
    double p = w;
    for (int k = 0; k <= 4; ++k, p *= w) s.r[k] *= p;
    return s;
}

double tail_relative(double tail, const Arr5& r) {
    double worst = 0.0;
    for (double x : r)
        worst = std::max(worst, x != 0.0 ? tail / std::fabs(x) : std::numeric_limits<double>::infinity());
    return worst;
}

// One-sided expansion about v = 0; the rest of [0, 1] goes into tail_rel.
SeriesSums gamma_series(double b, double g) {
    const double w = window_width(b, g);
    SeriesSums s = window_series(b, g, w);
    if (w < 1.0) s.tail_rel = tail_relative(0.5 * (1.0 - w) * std::exp(exponent_max(b, g, w, 1.0)), s.r);
    return s;
}

double series_error(double cancel) { return 8.0 * kEps * cancel; }

// v^k = (1 - s)^k applied to moments in s; returns the cancellation ratio.
double reexpand_at_one(const Arr5& r, Arr5& out) {
    static constexpr double binom[5][5] = {
        {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
    double cancel = 1.0;
    for (int k = 0; k <= 4; ++k) {
        double sum = 0.0;
        double abs_sum = 0.0;
        for (int i = 0; i <= k; ++i) {
            const double term = ((i % 2) ? -binom[k][i] : binom[k][i]) * r[i];
            sum += term;
            abs_sum += std::fabs(term);
        }
        out[k] = sum;
        cancel = std::max(cancel, sum > 0.0 ? abs_sum / sum : std::numeric_limits<double>::infinity());
    }
    return cancel;
}

// Both ends carry weight and the middle is negligible: window series at
// v = 0 and at v = 1, the middle bounded by its peak.
std::pair<Arr5, double> expand_at_both(const EntropicVars& l) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double b = l.beta;
    const double g = l.gamma;
    const double b1 = -(b + 2.0 * g);
    const double w0 = window_width(b, g);
    const double w1 = window_width(b1, g);
    if (!(w0 < 1.0 && w1 < 1.0 && w0 + w1 < 1.0)) return {Arr5{}, inf};
    const SeriesSums s0 = window_series(b, g, w0);
    const SeriesSums s1 = window_series(b1, g, w1);
    Arr5 r1{};
    const double cancel1 = reexpand_at_one(s1.r, r1);
    const double e0 = std::exp(l.alpha + s0.log_scale);
    const double e1 = std::exp(l.alpha + b + g + s1.log_scale);
    Arr5 out{};
    for (int k = 0; k <= 4; ++k) out[k] = e0 * s0.r[k] + e1 * r1[k];
    const double middle = 0.5 * (1.0 - w0 - w1) * std::exp(l.alpha + exponent_max(b, g, w0, 1.0 - w1));
    const double err = series_error(std::max(s0.cancel, s1.cancel * cancel1)) + tail_relative(middle, out);
    return {out, std::isfinite(err) ? err : inf};
}

std::pair<Arr5, double> expand_at_zero(const EntropicVars& l) {
    const SeriesSums s = gamma_series(l.beta, l.gamma);
    const double scale = std::exp(l.alpha + s.log_scale);
    Arr5 out{};
    for (int k = 0; k <= 4; ++k) out[k] = scale * s.r[k];
    const double err = series_error(s.cancel) + s.tail_rel;
    if (err <= kAcceptError) return {out, err};
    auto both = expand_at_both(l);
    return both.second < err ? both : std::pair<Arr5, double>{out, err};
}

// Same series in s = 1 - v, then binomial re-expansion of v^k = (1-s)^k.
std::pair<Arr5, double> expand_at_one(const EntropicVars& l) {
    const SeriesSums s = gamma_series(-(l.beta + 2.0 * l.gamma), l.gamma);
    const double scale = std::exp(l.alpha + l.beta + l.gamma + s.log_scale);
    Arr5 out{};
    const double cancel = reexpand_at_one(s.r, out);
    for (double& x : out) x *= scale;
    return {out, series_error(s.cancel * cancel) + s.tail_rel * cancel};
}

// Relative size of the first omitted asymptotic term, (2n+1)!! / (2x^2)^{n+1}.
double asymptotic_tail(double x, SeriesOrder order) {
    if (std::fabs(x) < special::kAsymptoticSwitch) return 0.0;
    double t = 1.0;
    for (int i = 0; i <= order.n; ++i) t *= (2.0 * i + 1.0) / (2.0 * x * x);
    return t;
}

double dawson_o(double x, SeriesOrder order) {
    return std::fabs(x) >= special::kAsymptoticSwitch ? special::dawson_asymptotic(x, order)
                                                      : special::dawson(x);
}

// Only called with x >= 0.
double erfc_scaled_o(double x, SeriesOrder order) {
    return x >= special::kAsymptoticSwitch ? special::erfc_scaled_asymptotic(x, order)
                                           : special::erfc_scaled(x);
}

std::pair<Arr5, double> closed_form(const EntropicVars& l, SeriesOrder order) {
    const double a = l.alpha;
    const double b = l.beta;
    const double g = l.gamma;
    if (g == 0.0) return {Arr5{}, std::numeric_limits<double>::infinity()};
    const double s = std::sqrt(std::fabs(g));
    const double c = b / (2.0 * s);
    const double e_end = std::exp(a + b + g);
    const double e_0 = std::exp(a);
    // each term with its relative error: ~2e-14 from the special function
    // plus the truncation of the asymptotic series
    double t1 = 0.0, t2 = 0.0, t3 = 0.0;
    double r1 = 0.0, r2 = 0.0, r3 = 0.0;
    auto rel = [&](double x) { return 2e-14 + asymptotic_tail(x, order); };
    if (g > 0.0) {
        t1 = e_end * dawson_o(s + c, order);
        t2 = -e_0 * dawson_o(c, order);
        r1 = rel(s + c);
        r2 = rel(c);
    } else if (c > 0.0 && s - c < 0.0) {
        t1 = -e_0 * erfc_scaled_o(c, order);
        t2 = e_end * erfc_scaled_o(c - s, order);
        r1 = rel(c);
        r2 = rel(c - s);
    } else if (c > 0.0) {
        t1 = kSqrtPi * std::exp(a + c * c);
        t2 = -e_0 * erfc_scaled_o(c, order);
        t3 = -e_end * erfc_scaled_o(s - c, order);
        r1 = 2e-14;
        r2 = rel(c);
        r3 = rel(s - c);
    } else {
        t1 = e_0 * erfc_scaled_o(-c, order);
        t2 = -e_end * erfc_scaled_o(s - c, order);
        r1 = rel(-c);
        r2 = rel(s - c);
    }
    Arr5 I{};
    I[0] = (t1 + t2 + t3) / (2.0 * s);
    Arr5 err{};
    err[0] = (r1 * std::fabs(t1) + r2 * std::fabs(t2) + r3 * std::fabs(t3)) / (2.0 * s);
    for (int k = 0; k < 4; ++k) {
        const double bk = 0.5 * (k == 0 ? e_end - e_0 : e_end);
        const double prev = k >= 1 ? I[k - 1] : 0.0;
        const double eprev = k >= 1 ? err[k - 1] : 0.0;
        I[k + 1] = (bk - k * prev - b * I[k]) / (2.0 * g);
        err[k + 1] = (k * eprev + std::fabs(b) * err[k] +
                      kEps * (std::fabs(bk) + k * std::fabs(prev) + std::fabs(b * I[k]))) /
                     (2.0 * std::fabs(g));
    }
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k)
        worst = std::max(worst, I[k] > 0.0 ? err[k] / I[k] : std::numeric_limits<double>::infinity());
    return {I, worst};
}

std::pair<Arr5, Branch> positive_half_auto(const EntropicVars& l, SeriesOrder order) {
    const Branch plan_small[] = {Branch::gamma_small, Branch::asymptotic, Branch::direct};
    const Branch plan_large[] = {Branch::direct, Branch::gamma_small, Branch::asymptotic};
    const Branch* plan = std::fabs(l.gamma) <= kLargeGamma ? plan_small : plan_large;
    // Branches run with the integrand peak on [0, 1] normalised to 1, so that
    // error estimates survive when the final scaling underflows.
    double top = std::max(0.0, l.beta + l.gamma);
    if (l.gamma < 0.0) {
        const double v = -l.beta / (2.0 * l.gamma);
        if (v > 0.0 && v < 1.0) top = std::max(top, l.beta * v + l.gamma * v * v);
    }
    const EntropicVars n{-top, l.beta, l.gamma};
    Arr5 best{};
    Branch best_branch = plan[0];
    double best_err = std::numeric_limits<double>::infinity();
    for (int p = 0; p < 3; ++p) {
        auto [v, e] = detail::positive_half(n, plan[p], order);
        if (!(e >= 0.0)) continue;  // NaN estimate
        if (e < best_err) {
            best = v;
            best_err = e;
            best_branch = plan[p];
        }
        if (e <= kAcceptError) break;
    }
    if (!(best_err <= kRejectError))
        throw NumericalError("m2 half-moments: no branch is accurate at (beta, gamma) = (" +
                             std::to_string(l.beta) + ", " + std::to_string(l.gamma) + ")");
    const double scale = std::exp(l.alpha + top);
    for (double& x : best) {
        x *= scale;
        if (!std::isfinite(x)) throw OverflowError("m2 half-moments: ansatz moments not representable");
    }
    return {best, best_branch};
}

EntropicVars mirrored(const EntropicVars& l) { return {l.alpha, -l.beta, l.gamma}; }

}  // namespace

namespace detail {
std::pair<Arr5, double> positive_half(const EntropicVars& lam, Branch b, SeriesOrder order) {
    switch (b) {
        case Branch::gamma_small: return expand_at_zero(lam);
        case Branch::asymptotic: return expand_at_one(lam);
        case Branch::direct: return closed_form(lam, order);
    }
    return {Arr5{}, std::numeric_limits<double>::infinity()};
}
}  // namespace detail

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::direct: return "direct";
        case Branch::asymptotic: return "asymptotic";
        case Branch::gamma_small: return "gamma_small";
    }
    return "?";
}

HalfMoments half_moments_all(const EntropicVars& lam, SeriesOrder order) {
    if (!std::isfinite(lam.alpha) || !std::isfinite(lam.beta) || !std::isfinite(lam.gamma))
        throw DomainError("m2 half-moments: non-finite multipliers");
    HalfMoments h;
    auto [p, bp] = positive_half_auto(lam, order);
    auto [n, bn] = positive_half_auto(mirrored(lam), order);
    h.pos = p;
    for (int k = 0; k <= 4; ++k) h.neg[k] = (k % 2) ? -n[k] : n[k];
    h.branch = p[0] >= n[0] ? bp : bn;
    return h;
}

HalfMomentSet half_moments(const EntropicVars& lam, SeriesOrder order) {
    const HalfMoments h = half_moments_all(lam, order);
    return {h.pos[0], h.neg[0], h.pos[1], h.neg[1], h.pos[2], h.neg[2], h.pos[3], h.neg[3]};
}

MomentVector moments_from_lambda(const EntropicVars& lam, SeriesOrder order) {
    const HalfMoments h = half_moments_all(lam, order);
    return {h.full(0), h.full(1), h.full(2)};
}

DualValue dual_functional(const EntropicVars& lam, const MomentVector& U) {
    const MomentVector m = moments_from_lambda(lam);
    DualValue d;
    d.value = m.rho - (lam.alpha * U.rho + lam.beta * U.j + lam.gamma * U.q);
    d.gradient = {m.rho - U.rho, m.j - U.j, m.q - U.q};
    return d;
}

bool is_realizable(const MomentVector& U) {
    if (U.rho == 0.0 && U.j == 0.0 && U.q == 0.0) return true;
    if (!(U.rho > 0.0)) return false;
    const double u = U.j / U.rho;
    const double e = U.q / U.rho;
    return u * u < e && e < 1.0;
}

namespace {

struct Eval {
    HalfMoments h;
    double J;
    std::array<double, 3> g;
    double gnorm;
};

bool evaluate(const EntropicVars& l, const MomentVector& U, Eval& out) {
    try {
        out.h = half_moments_all(l);
    } catch (const NumericalError&) {
        return false;
    }
    const double m0 = out.h.full(0);
    out.J = m0 - (l.alpha * U.rho + l.beta * U.j + l.gamma * U.q);
    out.g = {m0 - U.rho, out.h.full(1) - U.j, out.h.full(2) - U.q};
    out.gnorm = std::max({std::fabs(out.g[0]), std::fabs(out.g[1]), std::fabs(out.g[2])});
    return std::isfinite(out.J) && std::isfinite(out.gnorm);
}

// Solves H x = r for the Hankel Hessian by Cholesky; false if not positive definite.
bool solve_hessian(const HalfMoments& h, const std::array<double, 3>& r, std::array<double, 3>& x) {
    double m[5];
    for (int k = 0; k <= 4; ++k) m[k] = h.full(k);
    const double H[3][3] = {{m[0], m[1], m[2]}, {m[1], m[2], m[3]}, {m[2], m[3], m[4]}};
    double L[3][3] = {};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = H[i][j];
            for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
            if (i == j) {
                if (!(s > 0.0)) return false;
                L[i][i] = std::sqrt(s);
            } else {
                L[i][j] = s / L[j][j];
            }
        }
    }
    double y[3];
    for (int i = 0; i < 3; ++i) {
        double s = r[i];
        for (int k = 0; k < i; ++k) s -= L[i][k] * y[k];
        y[i] = s / L[i][i];
    }
    for (int i = 2; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < 3; ++k) s -= L[k][i] * x[k];
        x[i] = s / L[i][i];
    }
    return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

}  // namespace

InversionResult lambda_from_moments(const MomentVector& U, const InversionOptions& opt,
                                    std::optional<EntropicVars> guess) {
    if (!(U.rho > 0.0) || !is_realizable(U))
        throw RealizabilityError("lambda_from_moments: moments not interior-realizable");
    // Work with rho = 1; only alpha carries the scale.
    const double lr = std::log(U.rho);
    const MomentVector Un{1.0, U.j / U.rho, U.q / U.rho};

    EntropicVars l;
    if (guess) {
        l = {guess->alpha - lr, guess->beta, guess->gamma};
    } else {
        const auto m1 = m1::entropic_from_moments({1.0, Un.j});
        l = {m1->alpha, m1->beta, 0.0};
    }

    InversionResult res;
    Eval cur;
    if (!evaluate(l, Un, cur)) {
        const auto m1 = m1::entropic_from_moments({1.0, Un.j});
        l = {m1->alpha, m1->beta, 0.0};
        if (!evaluate(l, Un, cur)) throw ConvergenceError("lambda_from_moments: bad start point");
    }
    if (opt.record_history) res.report.objective_history.push_back(cur.J);

    constexpr double c_armijo = 1e-4;
    int it = 0;
    while (cur.gnorm > opt.tol) {
        if (it >= opt.max_iter)
            throw ConvergenceError("lambda_from_moments: no convergence after " +
                                   std::to_string(it) + " iterations, |grad| = " +
                                   std::to_string(cur.gnorm));
        ++it;
        std::array<double, 3> d{-cur.g[0], -cur.g[1], -cur.g[2]};
        if (opt.direction == Direction::newton) {
            std::array<double, 3> x{};
            if (solve_hessian(cur.h, d, x)) d = x;
        }
        double slope = cur.g[0] * d[0] + cur.g[1] * d[1] + cur.g[2] * d[2];
        if (!(slope < 0.0)) {
            d = {-cur.g[0], -cur.g[1], -cur.g[2]};
            slope = -(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        }
        double t = 1.0;
        Eval trial;
        bool accepted = false;
        for (int ls = 0; ls < 200; ++ls, t *= 0.5) {
            const EntropicVars lt{l.alpha + t * d[0], l.beta + t * d[1], l.gamma + t * d[2]};
            if (!evaluate(lt, Un, trial)) continue;
            const bool armijo = trial.J <= cur.J + c_armijo * t * slope;
            // Near the optimum the decrease drops below the resolution of J;
            // then a smaller gradient is the only usable progress signal.
            const bool roundoff = std::fabs(t * slope) <= 64.0 * kEps * std::max(1.0, std::fabs(cur.J)) &&
                                  trial.gnorm < cur.gnorm;
            if (armijo || roundoff) {
                l = lt;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw ConvergenceError("lambda_from_moments: line search stalled at |grad| = " +
                                   std::to_string(cur.gnorm));
        cur = trial;
        if (opt.record_history) res.report.objective_history.push_back(cur.J);
    }
    res.lambda = {l.alpha + lr, l.beta, l.gamma};
    res.report.iterations = it;
    res.report.final_gradient_norm = cur.gnorm;
    res.report.branch_used = cur.h.branch;
    return res;
}

}  // namespace ugks::m2
