#pragma once

#include <memory>
#include <span>

#include "degdiff/kernel.hpp"
#include "degdiff/test_function.hpp"

// The semigroup P_t f(x) = \int p(x,y,t) f(y) dy and its closed-form
// derivative series. Two independent evaluation routes exist for P_t f:
// kernel quadrature (primary) and the Poisson-mixture series (oracle);
// they are validated against each other in the test suite.

namespace degdiff {

struct BoundPair {
    double value = 0.0;
    double bound = 0.0;
    double margin() const { return bound - value; }
};

// P_t f(x) by kernel quadrature with the f(0)-subtraction:
//   P_t f(x) = f(0) + \int p_ac(x,y,t) (f(y) - f(0)) dy,
// which both absorbs the atom exactly and tames the y^{b/gamma-1}
// singularity. Absolute error <= quad.tol * sup_norm. For t < quad.t_floor
// the first-order short-time value f(x) + t * (A f)(x) is returned when f
// has derivatives; otherwise a domain error is raised.
double apply(const Params& p, const TestFunction& f, double t, double x,
             const QuadratureSpec& quad);

// Series route: P_t f(x) = sum_m q_m(c) E[f(gamma t Z_m)] with
// q_m = e^{-c} c^m/m!, c = x/(gamma t), and Z_m ~ Gamma(m + b/gamma)
// (Gamma(m) and an f(0) atom term for b = 0). Kept as an independent oracle
// for apply().
double apply_series(const Params& p, const TestFunction& f, double t, double x,
                    const QuadratureSpec& quad);

// Exact k-th translated moment \int p(x,y,t) (y-x)^k dy for k <= 12, by the
// drift-shift recursion over {b, b+gamma, b+2gamma, ...}:
//   M_{b'}(k+1) = x (M_{b'+2gamma}(k) - M_{b'}(k)) + b' t M_{b'+gamma}(k),
// pure arithmetic, no quadrature. k = 1 gives b t; k = 2 gives
// 2 gamma t x + t^2 b (b+gamma).
double translated_moment(const Params& p, double x, double t, int k);

// value = \int p(x,y,t)|y-x| dy (+ atom * x when b = 0),
// bound = sqrt(2 gamma t x + t^2 b (b+gamma)).
BoundPair abs_moment_bound(const Params& p, double x, double t,
                           const QuadratureSpec& quad);

// Shared evaluator for the derivative series of P_t f at fixed (p, f, t).
// The per-index Gamma-expectation integrals do not depend on x, so sweeps
// over x reuse them. first(x) = (P_t f)'(x); x_second(x) = x (P_t f)''(x)
// via the summed-by-parts form, which is bounded termwise.
class DerivativeSeries {
public:
    DerivativeSeries(const Params& p, const TestFunction& f, double t,
                     const QuadratureSpec& quad);
    ~DerivativeSeries();
    DerivativeSeries(DerivativeSeries&&) noexcept;

    double first(double x) const;
    double x_second(double x) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// (P_t f)'(x) from the closed-form series. Satisfies
// |result| <= 2 ||f|| / (gamma t) and sqrt(x)|result| <= 2 sqrt2 ||f|| /
// sqrt(gamma t), up to quadrature tolerance.
double derivative(const Params& p, const TestFunction& f, double t, double x,
                  const QuadratureSpec& quad);

// Derivative route for b > 0 and f in C^1 with bounded f': the
// integrated-by-parts series sum_m q_m E[f'(gamma t Z)], Z ~
// Gamma(m + b/gamma + 1). Equals derivative() for such f.
double derivative_c1(const Params& p, const TestFunction& f, double t, double x,
                     const QuadratureSpec& quad);

// x (P_t f)''(x) from the summed-by-parts series; |result| is bounded by
// 2(1+sqrt2) ||f|| / (gamma t) for b > 0 and (1+2 sqrt2) ||f|| / (gamma t)
// for b = 0.
double x_second_derivative(const Params& p, const TestFunction& f, double t,
                           double x, const QuadratureSpec& quad);

// (A f)(x) = gamma x f''(x) + b f'(x); f must carry both derivatives.
double generator_apply(const Params& p, const TestFunction& f, double x);

// max over x_grid of | t (gamma x (P_t f)'' + b (P_t f)') |; bounded by
// 2(1+sqrt2+b)/gamma * ||f|| uniformly in t.
double t_a_pt_sup(const Params& p, const TestFunction& f, double t,
                  std::span<const double> x_grid, const QuadratureSpec& quad);

// max over x_grid of |P_t f(x) - f(x)|.
double strong_continuity_defect(const Params& p, const TestFunction& f, double t,
                                std::span<const double> x_grid,
                                const QuadratureSpec& quad);

// The short-time modulus bound for Lipschitz f on [0, grid_max]:
//   min_delta [ L delta + (2||f||/delta) sqrt(2 gamma t M + t^2 b(b+gamma)) ],
// minimized over a logarithmic delta grid.
double strong_continuity_bound(const Params& p, const TestFunction& f, double t,
                               double grid_max);

// Far-field decay for compactly supported f (supp in [0,M]) at x > 9M:
// value = |P_t f(x)|, bound = the explicit-constant estimate
//   C ||f|| e^{-(x-2 sqrt(xM))/(gamma t)} (M/x)^{b/(2 gamma)+1/4}
//     sqrt(gamma t / M) (1 + e^{C gamma t/(2 sqrt(xM))} gamma t/sqrt(xM))
// with C = series_bound_constant(b/gamma + 1).
BoundPair far_field_decay(const Params& p, const TestFunction& f, double t,
                          double x, const QuadratureSpec& quad);

namespace detail {

// P_t f(x) for any t > 0, without the t_floor policy of apply(): below
// quad.t_floor the first-order value is used when f has derivatives, and
// plain kernel quadrature (well-conditioned in z = y/(gamma t) at any t)
// otherwise. Used by the resolvent's Laplace integrand.
double apply_any_t(const Params& p, const TestFunction& f, double t, double x,
                   const QuadratureSpec& quad);

}  // namespace detail

}  // namespace degdiff
