#pragma once

#include <cmath>

#include "degdiff/errors.hpp"

// Scalar special functions used by the kernel and semigroup layers: log-gamma,
// the entire series S(a,s) = sum_m s^m / (m! Gamma(m+a)), the exponentially
// scaled modified Bessel function of the first kind, and the weighted
// sums/integrals that control the derivative series.
//
// All functions here are pure and deterministic: identical inputs produce
// bit-identical outputs, and there is no global state.

namespace degdiff {

// Result of a truncated series evaluation. tail_bound is a rigorous absolute
// bound on the truncation error, obtained from a geometric majorant of the
// terms past the last one summed.
struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    double tail_bound = 0.0;
};

// A nonnegative quantity represented as mantissa * exp(log_scale).
// Quantities proportional to e^s are returned with log_scale = s once s
// exceeds kLogScaleThreshold; below it log_scale is 0.
struct ScaledReal {
    double mantissa = 0.0;
    double log_scale = 0.0;

    double value() const { return mantissa * std::exp(log_scale); }
};

struct HolderSumCheck {
    ScaledReal lhs;  // sum_{m>=1} s^m/m! * |s-m| * m^{-1/2}
    ScaledReal rhs;  // sqrt(2) e^s, carried at the same log_scale as lhs
};

// Crossover from the power series to the large-argument asymptotic expansion
// in bessel_i_scaled. Validated by overlap agreement <= 1e-11 on [25, 35].
inline constexpr double kBesselSeriesSwitch = 30.0;

// Above this argument, e^s-sized sums are returned in (mantissa, log_scale)
// form; e^s itself overflows doubles near s = 709.
inline constexpr double kLogScaleThreshold = 500.0;

// ln Gamma(a) for a > 0, by a Lanczos rational approximation (g = 7, nine
// coefficients) evaluated in extended precision. The absolute error of the
// result is small enough that exp(log_gamma(a)) has relative error <= 1e-13
// on a in [1e-3, 200]. Throws std::domain_error for a <= 0.
double log_gamma(double a);

// S(a,s) = sum_{m>=0} s^m / (m! Gamma(m+a)) for a > 0, s >= 0, summed with
// compensated (Kahan) accumulation. tol is relative to the returned value;
// the recorded tail_bound is absolute and satisfies
// tail_bound <= tol * max(1, value). Throws BudgetExceeded (carrying the
// partial sum) if the stopping rule is not met within `budget` terms.
SeriesResult series_s(double a, double s, double tol = 1e-14, int budget = 1 << 21);

// e^{-x} I_nu(x) for nu >= -1, x >= 0. Power series below
// kBesselSeriesSwitch, large-argument asymptotic expansion above. Relative
// error <= 1e-11 against an extended-precision series oracle on
// nu in [-1, 6], x in [0, 500]. I_{-1} = I_1 is used at nu = -1; for
// nu in (-1, 0) the value at x = 0 is +infinity.
double bessel_i_scaled(double nu, double x);

// sum_{m>=0} |m-s| s^m/(m+1)! for s > 0, compensated summation. Unscaled for
// s <= kLogScaleThreshold; otherwise returned as (e^{-s} * sum, s).
ScaledReal weighted_abs_sum(double s, double tol = 1e-14, int budget = 1 << 21);

// (1/Gamma(s)) \int_0^infty e^{-z} z^{s-1} |z-s| dz, via the closed form
// 2 s^s e^{-s} / Gamma(s) evaluated in log space. Bounded by 2 sqrt(s).
double gamma_abs_integral(double s);

// lhs = sum_{m>=1} s^m/m! |s-m| m^{-1/2} and rhs = sqrt(2) e^s, both scaled
// like weighted_abs_sum for large s. Satisfies lhs <= rhs.
HolderSumCheck holder_sum_bound(double s, double tol = 1e-14, int budget = 1 << 21);

// The explicit constant C(A) in the growth bound
//   S(a,s) <= C(A) e^{2 sqrt s} s^{1/4 - a/2} (1 + e^{C(A)/(2 sqrt s)}/sqrt s),
// valid for all 0 < a <= A and s > 0:
//   C(A) = max_{a in [0,A]} max{ sqrt(pi) |4a^2-8a+3| |4a^2-8a-5|,
//                                2 |4a^2-8a+3| }.
double series_bound_constant(double a_max);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// series for x < a+1 and continued fraction otherwise. Used for rigorous
// truncation of semi-infinite quadratures.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace degdiff
