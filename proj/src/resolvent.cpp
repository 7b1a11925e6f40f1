#include "degdiff/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace degdiff {

namespace {

void validate_query(const ResolventQuery& q) {
    q.quad.validate();
    if (q.f == nullptr) throw std::invalid_argument("ResolventQuery: missing function");
    if (!(q.lambda.real() >= kLambdaMinRe))
        throw std::domain_error("ResolventQuery: Re(lambda) below the admissible minimum");
    if (!(q.x >= 0.0) || !std::isfinite(q.x))
        throw std::domain_error("ResolventQuery: x must be nonnegative");
}

// Laplace-transform quadrature shared by resolve and resolve_derivative.
// Integrates e^{-lambda t} G(t) over (0, infty) where |G| <= g_bound(t)
// with g_bound integrable; T is chosen so the discarded tail is below tol.
std::complex<double> laplace_integral(const std::function<double(double)>& g,
                                      std::complex<double> lambda, double tail_sup,
                                      double tol, long max_evals) {
    const double re = lambda.real();
    const double t_star = 1.0 / re;
    const double T =
        std::max(4.0 * t_star, std::log(std::max(tail_sup, 1e-12) / (0.25 * tol * re)) / re);

    auto near_field = [&](double u) -> std::complex<double> {
        const double t = t_star * u * u;
        if (t <= 0.0) return {0.0, 0.0};
        return std::exp(-lambda * t) * (g(t) * 2.0 * t_star * u);
    };
    const double near_pts[6] = {0.0, 0.05, 0.15, 0.35, 0.65, 1.0};
    ComplexQuadOutcome near =
        integrate_adaptive(near_field, near_pts, 0.35 * tol, max_evals);

    const double v_max = std::log(T / t_star);
    auto far_field = [&](double v) -> std::complex<double> {
        const double t = t_star * std::exp(v);
        return std::exp(-lambda * t) * (g(t) * t);
    };
    std::vector<double> far_pts;
    for (double v = 0.0; v < v_max; v += 1.0) far_pts.push_back(v);
    far_pts.push_back(v_max);
    ComplexQuadOutcome far = integrate_adaptive(far_field, far_pts, 0.35 * tol, max_evals);

    return near.value + far.value;
}

}  // namespace

std::complex<double> resolve(const ResolventQuery& q) {
    validate_query(q);
    const TestFunction& f = *q.f;
    const double re = q.lambda.real();
    // P_t error delta integrates to delta / re against the damping factor.
    const QuadratureSpec inner = q.quad.with_tol(0.25 * q.quad.tol * re);
    auto g = [&](double t) { return detail::apply_any_t(q.params, f, t, q.x, inner); };
    return laplace_integral(g, q.lambda, f.sup_norm, q.quad.tol, q.quad.max_nodes);
}

std::complex<double> resolve_derivative(const ResolventQuery& q) {
    validate_query(q);
    const TestFunction& f = *q.f;
    if (q.x == 0.0 && !f.deriv1)
        throw std::domain_error(
            "resolve_derivative: x = 0 requires a bounded first derivative");
    const Params shifted(q.params.gamma, q.params.b + q.params.gamma);
    const double re = q.lambda.real();
    const double gamma = q.params.gamma;
    const double t_star = 1.0 / re;

    auto g = [&](double t) -> double {
        if (t < q.quad.t_floor && f.has_derivatives()) {
            // Both short-time expansions compose to exactly f'(x):
            // (f + t A^{b+gamma} f - f - t A^b f) / (gamma t) = f'(x).
            return f.deriv1(q.x);
        }
        // The difference is ~ gamma*t*(P_t f)'; keep the absolute error of
        // each term well below tol * re * gamma * t so the 1/(gamma t)
        // amplification stays harmless after time integration.
        const double tol_t = 0.125 * q.quad.tol * re * gamma * std::max(t, 1e-4 * t_star);
        const QuadratureSpec inner = q.quad.with_tol(std::max(tol_t, 1e-15));
        const double hi = detail::apply_any_t(shifted, f, t, q.x, inner);
        const double lo = detail::apply_any_t(q.params, f, t, q.x, inner);
        return (hi - lo) / (gamma * t);
    };

    // |(P_t f)'| <= min(2||f||/(gamma t), 2 sqrt2 ||f||/sqrt(gamma t x));
    // for the tail cutoff only the large-t bound matters.
    const double tail_sup = 2.0 * f.sup_norm / gamma;
    return laplace_integral(g, q.lambda, tail_sup, q.quad.tol, q.quad.max_nodes);
}

BoundPair x_second_derivative_bound(const ResolventQuery& q) {
    validate_query(q);
    if (!(q.params.b > 0.0))
        throw std::domain_error("x_second_derivative_bound: requires b > 0");
    if (q.lambda.imag() != 0.0)
        throw std::domain_error("x_second_derivative_bound: requires real lambda");
    const TestFunction& f = *q.f;
    const double u = resolve(q).real();
    const double du = resolve_derivative(q).real();
    BoundPair out;
    out.value =
        std::abs(q.lambda.real() * u - f.eval(q.x) - q.params.b * du) / q.params.gamma;
    const double beta = q.params.beta();
    out.bound = kResolventSecondDerivConstant / q.params.gamma *
                (1.0 + std::max(2.0 * beta, 1.0)) * f.sup_norm;
    return out;
}

}  // namespace degdiff
