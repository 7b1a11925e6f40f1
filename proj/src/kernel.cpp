#include "degdiff/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "degdiff/specialfn.hpp"

namespace degdiff {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Params::Params(double gamma_, double b_) : gamma(gamma_), b(b_) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::domain_error("Params: gamma must be positive and finite");
    if (!(b >= 0.0) || !std::isfinite(b))
        throw std::domain_error("Params: b must be nonnegative and finite");
}

KernelEval density(const Params& p, double x, double y, double t) {
    if (!(y > 0.0) || !std::isfinite(y)) throw std::domain_error("density: y must be positive");
    if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("density: t must be positive");
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("density: x must be nonnegative");

    const double gt = p.gamma * t;
    const double beta = p.beta();
    KernelEval out;
    out.atom = (p.b == 0.0) ? std::exp(-x / gt) : 0.0;

    if (x == 0.0) {
        if (p.b == 0.0) {
            out.density = 0.0;
            out.log_density = -kInf;
            return out;
        }
        out.log_density =
            -beta * std::log(gt) - y / gt + (beta - 1.0) * std::log(y) - log_gamma(beta);
        out.density = std::exp(out.log_density);
        return out;
    }

    const double w = 2.0 * std::sqrt(x * y) / gt;
    const double ibar = bessel_i_scaled(beta - 1.0, w);
    const double d = std::sqrt(x) - std::sqrt(y);
    out.log_density = -std::log(gt) + 0.5 * (1.0 - beta) * (std::log(x) - std::log(y)) -
                      d * d / gt + std::log(ibar);
    out.density = std::exp(out.log_density);
    return out;
}

namespace {

// Truncation window in z = y/(gamma t) for the kernel measure with
// x/(gamma t) = c. The mixture representation (Poisson(c) over m,
// Gamma(m + beta) in z) gives mean c + beta and variance 2c + beta.
struct Window {
    double lo;
    double hi;
};

Window kernel_window(double c, double beta, double eps_tail) {
    const double mean = c + beta;
    const double sigma = std::sqrt(2.0 * c + beta + 1.0);
    // Poisson index spread: P(N > c + 8 sqrt(c+1) + 16) is far below any
    // tolerance used here, so a gamma tail at that shifted shape bounds the
    // mixture tail.
    const double a_hi = std::max(c + 8.0 * std::sqrt(c + 1.0) + 16.0 + beta, beta + 1e-8);
    double hi = mean + 10.0 * sigma + 10.0;
    if (a_hi > 1e6) {
        hi = mean + 16.0 * sigma;
    } else {
        for (int i = 0; i < 300 && gamma_q(a_hi, hi) > eps_tail; ++i) hi *= 1.25;
    }
    double lo = 0.0;
    if (c > 400.0) {
        const double a_lo = std::max(c - 8.0 * std::sqrt(c + 1.0) - 16.0 + beta, 1.0);
        lo = std::max(0.0, mean - 12.0 * sigma - 10.0);
        if (a_lo > 1e6) {
            lo = std::max(0.0, mean - 16.0 * sigma);
        } else {
            for (int i = 0; i < 300 && lo > 0.0 && gamma_p(a_lo, lo) > eps_tail; ++i)
                lo = std::max(0.0, lo * 0.85 - 1.0);
        }
    }
    return {lo, hi};
}

}  // namespace

double integrate_against_kernel(const Params& p, double x, double t,
                                const std::function<double(double)>& g,
                                double g_sup, const QuadratureSpec& quad,
                                std::span<const double> extra_breaks) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("integrate_against_kernel: t must be positive");
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("integrate_against_kernel: x must be nonnegative");
    quad.validate();

    const double gt = p.gamma * t;
    const double beta = p.beta();
    const double c = x / gt;

    if (p.b == 0.0 && x == 0.0) return 0.0;  // AC part vanishes identically

    const double eps_tail = quad.tol / (10.0 * std::max(1.0, g_sup));
    const Window win = kernel_window(c, beta, eps_tail);

    double result = 0.0;
    double smooth_lo = win.lo;
    double tol_left = 0.9 * quad.tol;

    if (p.b > 0.0 && beta < 1.0 && win.lo == 0.0) {
        // Singular cell [0, z0]: in the series form the integrand is
        // e^{-c-z} z^{beta-1} S(beta, c z) g(gamma t z); the substitution
        // z = v^{1/beta} cancels the z^{beta-1} against the Jacobian exactly.
        const double z0 = std::min(1.0, win.hi);
        const double v0 = std::pow(z0, beta);
        auto cell = [&](double v) {
            const double z = std::exp(std::log(v) / beta);
            const double series = series_s(beta, c * z, 1e-13, quad.series_budget).value;
            return std::exp(-c - z) * series * g(gt * z) / beta;
        };
        const double pts[2] = {0.0, v0};
        QuadOutcome cellq = integrate_adaptive(cell, pts, 0.3 * quad.tol, quad.max_nodes);
        result += cellq.value;
        smooth_lo = z0;
        tol_left = 0.6 * quad.tol;
        if (smooth_lo >= win.hi) return result;
    }

    std::vector<double> pts = {smooth_lo, win.hi};
    const double mean = c + beta;
    const double sigma = std::sqrt(2.0 * c + beta + 1.0);
    for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
        const double v = mean + k * sigma;
        if (v > smooth_lo && v < win.hi) pts.push_back(v);
    }
    for (double yb : extra_breaks) {
        const double v = yb / gt;
        if (v > smooth_lo && v < win.hi) pts.push_back(v);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    auto integrand = [&](double z) {
        return density(p, x, gt * z, t).density * gt * g(gt * z);
    };
    QuadOutcome main = integrate_adaptive(integrand, pts, tol_left, quad.max_nodes);
    return result + main.value;
}

double normalization_defect(const Params& p, double x, double t,
                            const QuadratureSpec& quad) {
    if (p.b == 0.0 && x == 0.0) return 0.0;  // atom carries the full mass
    const double atom = (p.b == 0.0) ? std::exp(-x / (p.gamma * t)) : 0.0;
    const double integral =
        integrate_against_kernel(p, x, t, [](double) { return 1.0; }, 1.0, quad);
    return std::abs(atom + integral - 1.0);
}

double chapman_kolmogorov_defect(const Params& p, double x, double y, double s,
                                 double t, const QuadratureSpec& quad) {
    if (!(y > 0.0)) throw std::domain_error("chapman_kolmogorov_defect: y must be positive");
    if (!(s > 0.0) || !(t > 0.0))
        throw std::domain_error("chapman_kolmogorov_defect: s, t must be positive");

    const double lhs = density(p, x, y, t + s).density;

    // As a function of its first argument, p(z, y, s) concentrates near
    // z = y with width ~ sqrt(2 gamma s y); seed the outer subdivision there.
    const double width = std::sqrt(2.0 * p.gamma * s * y) + p.gamma * s;
    std::vector<double> breaks;
    for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
        const double v = y + k * width;
        if (v > 0.0) breaks.push_back(v);
    }

    double g_sup = 0.0;
    for (double z : {0.25 * y, 0.5 * y, y, 2.0 * y, y + width, std::max(y - width, 0.01 * y)})
        g_sup = std::max(g_sup, density(p, z, y, s).density);
    g_sup = std::max(g_sup, 1e-12);

    auto g = [&](double z) { return density(p, z, y, s).density; };
    const double inner =
        integrate_against_kernel(p, x, t, g, 1.5 * g_sup, quad, breaks);

    double atom_term = 0.0;
    if (p.b == 0.0) {
        // absorbed mass stays at the origin; its AC contribution at y > 0 is 0
        atom_term = std::exp(-x / (p.gamma * t)) * density(p, 0.0, y, s).density;
    }
    return std::abs(lhs - (inner + atom_term));
}

}  // namespace degdiff
