#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "degdiff/errors.hpp"

namespace degdiff {

// Tolerances and budgets shared by every semi-infinite integral and series in
// the library. tol is an absolute tolerance for integral values of order one
// (operator applications are scaled by the sup-norm of the integrand).
struct QuadratureSpec {
    double tol = 1e-9;
    long max_nodes = 4000000;    // function evaluations per integral
    int series_budget = 2000000; // maximum series index
    double t_floor = 1e-6;       // smallest time accepted by semigroup::apply

    void validate() const;
    QuadratureSpec with_tol(double new_tol) const {
        QuadratureSpec q = *this;
        q.tol = new_tol;
        return q;
    }
};

struct QuadOutcome {
    double value = 0.0;
    double error_estimate = 0.0;
    long evals = 0;
};

struct ComplexQuadOutcome {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
    long evals = 0;
};

// Globally adaptive Gauss-Kronrod (G7, K15) integration over the partition
// induced by `breakpoints` (ascending, at least two entries). Segments are
// bisected worst-error-first until the summed error estimate drops below
// abs_tol. Throws BudgetExceeded with the partial value when max_evals runs
// out. Endpoints are never evaluated.
QuadOutcome integrate_adaptive(const std::function<double(double)>& f,
                               std::span<const double> breakpoints,
                               double abs_tol, long max_evals);

ComplexQuadOutcome integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                      std::span<const double> breakpoints,
                                      double abs_tol, long max_evals);

// E[h(Z)] for Z ~ Gamma(alpha, 1), i.e.
//   (1/Gamma(alpha)) \int_0^infty e^{-z} z^{alpha-1} h(z) dz.
//
// The weight is evaluated in log space, so alpha may be arbitrarily large.
// For alpha < 1 the endpoint singularity on [0, 1] is removed by the
// substitution z = v^{1/alpha}; for large alpha the integration window
// [alpha - k sqrt(alpha), alpha + k sqrt(alpha)] is chosen so that the
// discarded gamma tail mass is provably negligible.
//
// h_sup bounds |h| on the window. If h_linear_growth is true, h is allowed
// to grow like h_sup * (1 + |z - alpha|) and the Cauchy-Schwarz tail bound
// sqrt(alpha * tailmass) is used instead.
double gamma_expectation(double alpha, const std::function<double(double)>& h,
                         double abs_tol, double h_sup, bool h_linear_growth,
                         long max_evals);

}  // namespace degdiff
