#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "degdiff/resolvent.hpp"

// Verification sweeps over parameter grids. Every row's bound is computed
// from the row's own (gamma, b, t or lambda); grid-uniform constants appear
// only in the summary. Reports are deterministic given the grid, the
// quadrature spec and the function registry.

namespace degdiff {

struct SweepRow {
    double gamma = 0.0;
    double b = 0.0;
    std::optional<double> t;
    std::optional<double> lambda;
    std::optional<double> x;
    std::string function;
    std::string quantity;
    double measured = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // bound - measured
    bool pass = false;
};

struct SweepSummary {
    double worst_margin = 0.0;
    double empirical_constant = 0.0;
    std::string grid_description;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    SweepSummary summary;

    bool all_pass() const;
};

struct ResolventSweepReport {
    SweepReport contraction;       // lambda ||R f|| vs ||f||
    SweepReport weighted_gradient; // sqrt(lambda x) |(R f)'| fitted constant
    SweepReport global_gradient;   // gamma |(R f)'| / max{2, gamma/b} (b > 0)
};

// Default grids used by the CLI and the acceptance suite.
const std::vector<double>& default_gamma_grid();   // {0.5, 1, 2}
const std::vector<double>& default_b_grid();       // {0, 0.25, 1, 2}
const std::vector<double>& default_t_grid();       // {0.01, 0.1, 1, 10}
const std::vector<double>& default_lambda_grid();  // {0.1, 1, 10, 100}
std::vector<double> default_x_grid();              // 25 log-spaced in [1e-3, 50] plus 0

// Combined pass tolerance for bound rows: quadrature tolerance plus 1%
// slack on the (strict) analytic bound.
double bound_slack(double bound, const QuadratureSpec& quad);

// || t A P_t f || vs 2(1+sqrt2+b)/gamma * ||f|| on b-grid within [0,B] and
// gamma-grid within [gamma0, inf). One row per (gamma, b, t, f); the
// summary records the uniform constant 2(1+sqrt2+B)/gamma0.
SweepReport analyticity_sweep(double B, double gamma0,
                              const std::vector<TestFunction>& f_set,
                              const std::vector<double>& t_grid,
                              const std::vector<double>& x_grid,
                              const QuadratureSpec& quad);

// Three gradient quantities per (gamma, b, t, f), each a sup over x_grid:
//   gradient_weighted    sqrt(x) |(P_t f)'|      vs 2 sqrt2 ||f||/sqrt(gamma t)
//   gradient_unweighted  |(P_t f)'|              vs 2 ||f||/(gamma t)
//   x_second             |x (P_t f)''|           vs 2(1+sqrt2)||f||/(gamma t),
//                        (1+2 sqrt2)||f||/(gamma t) at b = 0
SweepReport gradient_sweep(const std::vector<Params>& params_grid,
                           const std::vector<TestFunction>& f_set,
                           const std::vector<double>& t_grid,
                           const std::vector<double>& x_grid,
                           const QuadratureSpec& quad);

// measured(b) = max over (t, x) of |P_t^{gamma,b} f - P_t^{gamma,0} f| along
// a decreasing b-list. Rows assert monotonicity within 2*quad.tol and the
// final row measured <= eps_final; the summary's empirical constant is the
// least-squares slope of log measured vs log b.
SweepReport trotter_kato_sweep(double gamma, const TestFunction& f,
                               const std::vector<double>& b_list,
                               const std::vector<double>& t_grid,
                               const std::vector<double>& x_grid,
                               const QuadratureSpec& quad,
                               double eps_final = 1e-2);

// The core-approximation sequence: Taylor polynomial of u around 1/n on
// [0, 1/n], u itself on [1/n, 1], and (u - l) phi(x/n) + l beyond, with phi
// the C^2 quintic-smoothstep cutoff (1 on [0,1], 0 on [2, inf)). The result
// is C^2 and eventually constant. u must carry both derivatives.
TestFunction core_approx_sequence(const TestFunction& u, int n);

ResolventSweepReport resolvent_sweep(const std::vector<Params>& params_grid,
                                     const std::vector<TestFunction>& f_set,
                                     const std::vector<double>& lambda_grid,
                                     const std::vector<double>& x_grid,
                                     const QuadratureSpec& quad);

// CSV with the fixed schema
//   gamma,b,t,lambda,x,y,k,quantity,measured,bound,margin,pass
// (unused columns empty, '.' decimal separator, LF line endings).
struct CsvRow {
    std::optional<double> gamma, b, t, lambda, x, y;
    std::optional<int> k;
    std::string quantity;
    std::optional<double> measured, bound, margin;
    std::optional<bool> pass;
};

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const CsvRow& row);
void write_csv(std::ostream& os, const SweepReport& report);
std::vector<CsvRow> to_csv_rows(const SweepReport& report);

}  // namespace degdiff
