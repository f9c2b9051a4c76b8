#pragma once

namespace ugks::special {

// Number of terms kept in the divergent large-argument series.
struct SeriesOrder {
    int n;
    constexpr explicit SeriesOrder(int terms = 4) : n(terms) {}
};

inline constexpr int kMinSeriesOrder = 3;
inline constexpr int kMaxSeriesOrder = 12;
inline constexpr double kAsymptoticSwitch = 8.0;
// Order used internally by the closures; n = 4 leaves ~1e-8 error at |x| = 8.
inline constexpr SeriesOrder kClosureSeriesOrder{kMaxSeriesOrder};

// e^{-x^2} * int_0^x e^{t^2} dt
double dawson(double x);

// e^{x^2} * int_x^inf e^{-t^2} dt  (= sqrt(pi)/2 * erfcx(x)).
// Throws OverflowError once e^{x^2} leaves the double range.
double erfc_scaled(double x);

// Large-argument series. Both throw DomainError for |x| < kAsymptoticSwitch
// or an order outside [kMinSeriesOrder, kMaxSeriesOrder].
double dawson_asymptotic(double x, SeriesOrder order = SeriesOrder{});
double erfc_scaled_asymptotic(double x, SeriesOrder order = SeriesOrder{});

}  // namespace ugks::special
