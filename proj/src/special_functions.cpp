#include "ugks/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "ugks/errors.hpp"

namespace ugks::special {
namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

void check_order(SeriesOrder order) {
    if (order.n < kMinSeriesOrder || order.n > kMaxSeriesOrder)
        throw DomainError("asymptotic series order must lie in [3, 12]");
}

void check_switch(double x) {
    if (!(std::fabs(x) >= kAsymptoticSwitch))
        throw DomainError("asymptotic series used below the switch point");
}

// 1 + sum_{j=1..n} s^j (2j-1)!! / (2x^2)^j, with s = +1 or -1.
double asymptotic_sum(double x, int n, double s) {
    const double h = 1.0 / (2.0 * x * x);
    double sum = 1.0;
    double term = 1.0;
    for (int j = 1; j <= n; ++j) {
        term *= s * (2 * j - 1) * h;
        sum += term;
    }
    return sum;
}

// Rybicki's exponentially convergent sum, h = 0.2.
constexpr double kRybickiH = 0.2;
constexpr int kRybickiTerms = 40;

const std::array<double, kRybickiTerms>& rybicki_table() {
    static const std::array<double, kRybickiTerms> table = [] {
        std::array<double, kRybickiTerms> c{};
        for (int i = 0; i < kRybickiTerms; ++i) {
            const double a = (2 * i + 1) * kRybickiH;
            c[i] = std::exp(-a * a);
        }
        return c;
    }();
    return table;
}

double dawson_rybicki(double x) {
    const auto& c = rybicki_table();
    const double ax = std::fabs(x);
    const int n0 = 2 * static_cast<int>(std::lround(0.5 * ax / kRybickiH));
    const double xp = ax - n0 * kRybickiH;
    double e1 = std::exp(2.0 * xp * kRybickiH);
    const double e2 = e1 * e1;
    double d1 = n0 + 1;
    double d2 = d1 - 2.0;
    double sum = 0.0;
    for (int i = 0; i < kRybickiTerms; ++i) {
        sum += c[i] * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    return std::copysign(std::exp(-xp * xp), x) * sum / kSqrtPi;
}

double dawson_taylor(double x) {
    const double x2 = x * x;
    double sum = 0.0;
    double term = x;
    for (int n = 1; n < 30; ++n) {
        sum += term;
        term *= -2.0 * x2 / (2 * n + 1);
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return sum + term;
}

// sqrt(pi)/2 * erfcx(x) for x >= 0.
double erfc_scaled_nonneg(double x) {
    if (x >= kAsymptoticSwitch) return asymptotic_sum(x, kMaxSeriesOrder, -1.0) / (2.0 * x);
    return 0.5 * kSqrtPi * std::exp(x * x) * std::erfc(x);
}

}  // namespace

double dawson(double x) {
    const double ax = std::fabs(x);
    if (ax < 0.2) return dawson_taylor(x);
    if (ax >= kAsymptoticSwitch) return asymptotic_sum(x, kMaxSeriesOrder, 1.0) / (2.0 * x);
    return dawson_rybicki(x);
}

double erfc_scaled(double x) {
    if (x >= 0.0) return erfc_scaled_nonneg(x);
    const double big = kSqrtPi * std::exp(x * x);
    if (!std::isfinite(big)) throw OverflowError("erfc_scaled: e^{x^2} overflows");
    return big - erfc_scaled_nonneg(-x);
}

double dawson_asymptotic(double x, SeriesOrder order) {
    check_order(order);
    check_switch(x);
    return asymptotic_sum(x, order.n, 1.0) / (2.0 * x);
}

double erfc_scaled_asymptotic(double x, SeriesOrder order) {
    check_order(order);
    check_switch(x);
    double value = asymptotic_sum(x, order.n, -1.0) / (2.0 * x);
    if (x <= 0.0) {
        const double big = kSqrtPi * std::exp(x * x);
        if (!std::isfinite(big)) throw OverflowError("erfc_scaled_asymptotic: e^{x^2} overflows");
        value += big;
    }
    return value;
}

}  // namespace ugks::special
