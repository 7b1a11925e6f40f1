#include "degdiff/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "degdiff/specialfn.hpp"

namespace degdiff {

namespace {

double poisson_log_weight(double m, double c) {
    return m * std::log(c) - c - log_gamma(m + 1.0);
}

// Index window carrying essentially all Poisson(c) mass. spread widens the
// default 12 sqrt(c) + 40 margin for weights that grow like |m - c|.
struct IndexWindow {
    long lo;
    long hi;
};

IndexWindow poisson_window(double c, double widen) {
    const double margin = widen * std::sqrt(c) + 40.0 + widen;
    const long lo = static_cast<long>(std::max(0.0, std::floor(c - margin)));
    const long hi = static_cast<long>(std::ceil(c + margin));
    return {lo, hi};
}

double apply_raw(const Params& p, const TestFunction& f, double t, double x,
                 const QuadratureSpec& quad);

}  // namespace

double generator_apply(const Params& p, const TestFunction& f, double x) {
    if (!f.has_derivatives())
        throw std::invalid_argument("generator_apply: " + f.name + " lacks derivatives");
    return p.gamma * x * f.deriv2(x) + p.b * f.deriv1(x);
}

double apply(const Params& p, const TestFunction& f, double t, double x,
             const QuadratureSpec& quad) {
    quad.validate();
    if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("apply: t must be positive");
    if (t < quad.t_floor) {
        if (f.has_derivatives()) return f.eval(x) + t * generator_apply(p, f, x);
        throw std::domain_error("apply: t below t_floor and function lacks derivatives");
    }
    return apply_raw(p, f, t, x, quad);
}

namespace {

double apply_raw(const Params& p, const TestFunction& f, double t, double x,
                 const QuadratureSpec& quad) {
    const double f0 = f.eval(0.0);
    const QuadratureSpec inner = quad.with_tol(quad.tol * std::max(f.sup_norm, 1e-30));
    const double shifted = integrate_against_kernel(
        p, x, t, [&](double y) { return f.eval(y) - f0; }, 2.0 * f.sup_norm, inner);
    return f0 + shifted;
}

}  // namespace

namespace detail {

double apply_any_t(const Params& p, const TestFunction& f, double t, double x,
                   const QuadratureSpec& quad) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("apply_any_t: t must be positive");
    if (t < quad.t_floor && f.has_derivatives())
        return f.eval(x) + t * generator_apply(p, f, x);
    return apply_raw(p, f, t, x, quad);
}

}  // namespace detail

double apply_series(const Params& p, const TestFunction& f, double t, double x,
                    const QuadratureSpec& quad) {
    quad.validate();
    if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("apply_series: t must be positive");
    if (!(x >= 0.0)) throw std::domain_error("apply_series: x must be nonnegative");
    const double gt = p.gamma * t;
    const double beta = p.beta();
    const double c = x / gt;
    auto fval = [&](double z) { return f.eval(gt * z); };

    const double term_tol = quad.tol * std::max(f.sup_norm, 1e-30) / 4.0;
    if (c == 0.0) {
        if (p.b == 0.0) return f.eval(0.0);
        return gamma_expectation(beta, fval, term_tol, f.sup_norm, false, quad.max_nodes);
    }

    const IndexWindow win = poisson_window(c, 12.0);
    if (win.hi > quad.series_budget)
        throw BudgetExceeded("apply_series: series budget exceeded", 0.0);
    double sum = 0.0;
    for (long m = win.lo; m <= win.hi; ++m) {
        const double q = std::exp(poisson_log_weight(static_cast<double>(m), c));
        if (q < 1e-22) continue;
        double alpha;
        double ev;
        if (p.b > 0.0) {
            alpha = m + beta;
            ev = gamma_expectation(alpha, fval, term_tol, f.sup_norm, false, quad.max_nodes);
        } else {
            if (m == 0) {
                sum += q * f.eval(0.0);
                continue;
            }
            alpha = static_cast<double>(m);
            ev = gamma_expectation(alpha, fval, term_tol, f.sup_norm, false, quad.max_nodes);
        }
        sum += q * ev;
    }
    return sum;
}

double translated_moment(const Params& p, double x, double t, int k) {
    if (k < 0 || k > 12) throw std::domain_error("translated_moment: k must be in [0, 12]");
    if (!(x >= 0.0) || !(t > 0.0)) throw std::domain_error("translated_moment: need x >= 0, t > 0");
    // level l holds M_j = P^{gamma, b + j gamma}(tau_x^l)(x) for j = 0..2(k-l)
    std::vector<double> m(2 * k + 1, 1.0);
    for (int level = 1; level <= k; ++level) {
        const int width = 2 * (k - level);
        for (int j = 0; j <= width; ++j) {
            const double bj = p.b + j * p.gamma;
            m[j] = x * (m[j + 2] - m[j]) + bj * t * m[j + 1];
        }
    }
    return m[0];
}

BoundPair abs_moment_bound(const Params& p, double x, double t,
                           const QuadratureSpec& quad) {
    const double var_like = 2.0 * p.gamma * t * x + t * t * p.b * (p.b + p.gamma);
    BoundPair out;
    out.bound = std::sqrt(var_like);
    const double mean_y = x + p.b * t;
    const double spread = std::sqrt(var_like + p.gamma * p.b * t * t) + p.gamma * t;
    const double g_sup = x + mean_y + 14.0 * spread;
    double v = integrate_against_kernel(
        p, x, t, [&](double y) { return std::abs(y - x); }, g_sup, quad);
    if (p.b == 0.0) v += std::exp(-x / (p.gamma * t)) * x;
    out.value = v;
    return out;
}

// ---------------------------------------------------------------------------
// Derivative series.
//
// For b > 0 the closed form of (P_t f)'(x) is, with c = x/(gamma t),
// beta = b/gamma, q_m = e^{-c} c^m/m!, alpha_m = m + beta and
// g = f - f(0):
//
//   (P_t f)'(x)    = (1/(gamma t)) sum_{m>=0} q_m L_m,
//   x (P_t f)''(x) = (1/(gamma t)) sum_{m>=0} q_m (m - c) L_m,
//
// where L_m = (1/alpha_m) E_{alpha_m}[(Z - alpha_m) g(gamma t Z)] and
// E_alpha is the Gamma(alpha,1) expectation. (Subtracting f(0) changes
// nothing: E[(Z - alpha)] = 0.) For b = 0 the same two sums hold with
// alpha_m = m for m >= 1 and the special term L_0 = E_1[g(gamma t Z)].
// ---------------------------------------------------------------------------

struct DerivativeSeries::Impl {
    Params params;
    TestFunction f;
    double t;
    QuadratureSpec quad;
    double gt;
    double beta;
    double f0;
    mutable std::vector<double> coeff;  // L_m cache

    Impl(const Params& p_, const TestFunction& f_, double t_, const QuadratureSpec& q_)
        : params(p_), f(f_), t(t_), quad(q_), gt(p_.gamma * t_), beta(p_.beta()),
          f0(f_.eval(0.0)) {}

    double compute_coeff(long m) const {
        auto g = [&](double z) { return f.eval(gt * z) - f0; };
        const double sup = 2.0 * f.sup_norm;
        const double tol_l = quad.tol * std::max(f.sup_norm, 1e-30) /
                             (40.0 * (1.0 + std::sqrt(m + 1.0)));
        if (params.b == 0.0 && m == 0)
            return gamma_expectation(1.0, g, tol_l, sup, false, quad.max_nodes);
        const double alpha = params.b > 0.0 ? m + beta : static_cast<double>(m);
        auto h = [&](double z) { return (z - alpha) * g(z); };
        const double ev =
            gamma_expectation(alpha, h, tol_l * alpha, sup, true, quad.max_nodes);
        return ev / alpha;
    }

    void ensure(long hi) const {
        if (hi >= quad.series_budget)
            throw BudgetExceeded("DerivativeSeries: series budget exceeded", 0.0);
        const size_t want = static_cast<size_t>(hi) + 1;
        while (coeff.size() < want) coeff.push_back(compute_coeff(static_cast<long>(coeff.size())));
    }

    double sum(double x, bool second) const {
        const double c = x / gt;
        const IndexWindow win = c == 0.0 ? IndexWindow{0, 0} : poisson_window(c, second ? 14.0 : 12.0);
        ensure(win.hi);
        double acc = 0.0, carry = 0.0;
        for (long m = win.lo; m <= win.hi; ++m) {
            const double q = c == 0.0 ? (m == 0 ? 1.0 : 0.0)
                                      : std::exp(poisson_log_weight(static_cast<double>(m), c));
            if (q < 1e-22) continue;
            double term = q * coeff[static_cast<size_t>(m)];
            if (second) term *= (m - c);
            const double y = term - carry;
            const double s = acc + y;
            carry = (s - acc) - y;
            acc = s;
        }
        return acc / gt;
    }
};

DerivativeSeries::DerivativeSeries(const Params& p, const TestFunction& f, double t,
                                   const QuadratureSpec& quad)
    : impl_(std::make_unique<Impl>(p, f, t, quad)) {
    quad.validate();
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::domain_error("DerivativeSeries: t must be positive");
}

DerivativeSeries::~DerivativeSeries() = default;
DerivativeSeries::DerivativeSeries(DerivativeSeries&&) noexcept = default;

double DerivativeSeries::first(double x) const {
    if (!(x >= 0.0)) throw std::domain_error("DerivativeSeries: x must be nonnegative");
    return impl_->sum(x, false);
}

double DerivativeSeries::x_second(double x) const {
    if (!(x >= 0.0)) throw std::domain_error("DerivativeSeries: x must be nonnegative");
    if (x == 0.0) return 0.0;
    return impl_->sum(x, true);
}

double derivative(const Params& p, const TestFunction& f, double t, double x,
                  const QuadratureSpec& quad) {
    if (!(t >= quad.t_floor)) throw std::domain_error("derivative: t below t_floor");
    return DerivativeSeries(p, f, t, quad).first(x);
}

double derivative_c1(const Params& p, const TestFunction& f, double t, double x,
                     const QuadratureSpec& quad) {
    quad.validate();
    if (!(p.b > 0.0)) throw std::domain_error("derivative_c1: requires b > 0");
    if (!f.deriv1) throw std::invalid_argument("derivative_c1: " + f.name + " lacks deriv1");
    if (!(t > 0.0)) throw std::domain_error("derivative_c1: t must be positive");
    if (!(x >= 0.0)) throw std::domain_error("derivative_c1: x must be nonnegative");
    const double gt = p.gamma * t;
    const double beta = p.beta();
    const double c = x / gt;
    auto fp = [&](double z) { return f.deriv1(gt * z); };
    double fp_sup = 1.0;
    if (f.lipschitz) fp_sup = std::max(*f.lipschitz, 1e-30);
    const double term_tol = quad.tol * fp_sup / 4.0;

    if (c == 0.0)
        return gamma_expectation(beta + 1.0, fp, term_tol, fp_sup, false, quad.max_nodes);
    const IndexWindow win = poisson_window(c, 12.0);
    if (win.hi > quad.series_budget)
        throw BudgetExceeded("derivative_c1: series budget exceeded", 0.0);
    double sum = 0.0;
    for (long m = win.lo; m <= win.hi; ++m) {
        const double q = std::exp(poisson_log_weight(static_cast<double>(m), c));
        if (q < 1e-22) continue;
        sum += q * gamma_expectation(m + beta + 1.0, fp, term_tol, fp_sup, false,
                                     quad.max_nodes);
    }
    return sum;
}

double x_second_derivative(const Params& p, const TestFunction& f, double t,
                           double x, const QuadratureSpec& quad) {
    if (!(t >= quad.t_floor)) throw std::domain_error("x_second_derivative: t below t_floor");
    return DerivativeSeries(p, f, t, quad).x_second(x);
}

double t_a_pt_sup(const Params& p, const TestFunction& f, double t,
                  std::span<const double> x_grid, const QuadratureSpec& quad) {
    if (x_grid.empty()) throw std::invalid_argument("t_a_pt_sup: empty grid");
    DerivativeSeries ds(p, f, t, quad);
    double worst = 0.0;
    for (double x : x_grid) {
        const double a_pt = p.gamma * ds.x_second(x) + p.b * ds.first(x);
        worst = std::max(worst, std::abs(t * a_pt));
    }
    return worst;
}

double strong_continuity_defect(const Params& p, const TestFunction& f, double t,
                                std::span<const double> x_grid,
                                const QuadratureSpec& quad) {
    if (x_grid.empty()) throw std::invalid_argument("strong_continuity_defect: empty grid");
    double worst = 0.0;
    for (double x : x_grid)
        worst = std::max(worst, std::abs(apply(p, f, t, x, quad) - f.eval(x)));
    return worst;
}

double strong_continuity_bound(const Params& p, const TestFunction& f, double t,
                               double grid_max) {
    if (!f.lipschitz)
        throw std::invalid_argument("strong_continuity_bound: " + f.name +
                                    " lacks a Lipschitz constant");
    const double spread =
        std::sqrt(2.0 * p.gamma * t * grid_max + t * t * p.b * (p.b + p.gamma));
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 480; ++i) {
        const double delta = std::pow(10.0, -8.0 + 12.0 * i / 480.0);
        best = std::min(best, *f.lipschitz * delta + 2.0 * f.sup_norm * spread / delta);
    }
    return best;
}

BoundPair far_field_decay(const Params& p, const TestFunction& f, double t,
                          double x, const QuadratureSpec& quad) {
    if (!f.support_bound)
        throw std::invalid_argument("far_field_decay: " + f.name + " has unbounded support");
    const double M = *f.support_bound;
    if (!(x > 9.0 * M)) throw std::domain_error("far_field_decay: requires x > 9M");
    const double gt = p.gamma * t;
    const double beta = p.beta();

    // The integrand is uniformly tiny out here; integrate f against the
    // kernel over the support with a tolerance tied to the sampled peak.
    double peak = 0.0;
    for (double y : {0.125 * M, 0.25 * M, 0.5 * M, 0.75 * M, 0.9375 * M})
        peak = std::max(peak, density(p, x, y, t).density);
    const double abs_tol = std::max(peak * f.sup_norm * M * 1e-8, 1e-290);
    const double pts[5] = {0.0, 0.25 * M, 0.5 * M, 0.75 * M, M};
    QuadOutcome q = integrate_adaptive(
        [&](double y) { return density(p, x, y, t).density * f.eval(y); }, pts, abs_tol,
        quad.max_nodes);
    double value = q.value;
    if (p.b == 0.0) value += std::exp(-x / gt) * f.eval(0.0);
    BoundPair out;
    out.value = std::abs(value);

    const double C = series_bound_constant(beta + 1.0);
    const double sxm = std::sqrt(x * M);
    const double log_main = -(x - 2.0 * sxm) / gt + (0.5 * beta + 0.25) * std::log(M / x) +
                            0.5 * std::log(gt / M);
    const double u = C * gt / (2.0 * sxm);
    const double tail_factor = std::log1p(std::exp(std::min(u, 700.0)) * gt / sxm);
    out.bound = C * f.sup_norm * std::exp(log_main + tail_factor);
    return out;
}

}  // namespace degdiff
