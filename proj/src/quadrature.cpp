#include "degdiff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "degdiff/specialfn.hpp"

namespace degdiff {

void QuadratureSpec::validate() const {
    if (!(tol > 0.0)) throw std::domain_error("QuadratureSpec: tol must be positive");
    if (max_nodes < 16 || series_budget < 16)
        throw std::domain_error("QuadratureSpec: budgets must be at least 16");
    if (!(t_floor > 0.0)) throw std::domain_error("QuadratureSpec: t_floor must be positive");
}

namespace {

// 15-point Kronrod extension of 7-point Gauss, positive abscissae.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
// Gauss weights attach to abscissae 1, 3, 5, 7.
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename T>
struct Segment {
    double a, b;
    T value;
    double error;
};

template <typename T, typename F>
Segment<T> gk15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T fc = f(mid);
    T gauss = kWg[3] * fc;
    T kron = kWgk[7] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        T fsum = f(mid - dx) + f(mid + dx);
        kron += kWgk[i] * fsum;
        if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
    }
    gauss *= half;
    kron *= half;
    return {a, b, kron, std::abs(kron - gauss)};
}

template <typename T>
struct WorseError {
    bool operator()(const Segment<T>& l, const Segment<T>& r) const {
        if (l.error != r.error) return l.error < r.error;
        return l.a < r.a;  // deterministic tie-break
    }
};

template <typename T, typename Out>
Out adaptive_impl(const std::function<T(double)>& f, std::span<const double> pts,
                  double abs_tol, long max_evals) {
    if (pts.size() < 2) throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");
    std::priority_queue<Segment<T>, std::vector<Segment<T>>, WorseError<T>> heap;
    T total{};
    double total_err = 0.0;
    long evals = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i] < pts[i + 1])) {
            if (pts[i] == pts[i + 1]) continue;
            throw std::invalid_argument("integrate_adaptive: breakpoints must ascend");
        }
        Segment<T> s = gk15<T>(f, pts[i], pts[i + 1]);
        evals += 15;
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }
    const double span = pts.back() - pts.front();
    while (total_err > abs_tol && !heap.empty()) {
        Segment<T> worst = heap.top();
        if (worst.error <= 0.0) break;
        if (worst.b - worst.a <= 1e-14 * span + 1e-300) break;  // cannot refine further
        heap.pop();
        if (evals + 30 > max_evals)
            throw BudgetExceeded("integrate_adaptive: node budget exceeded", std::abs(total));
        const double mid = 0.5 * (worst.a + worst.b);
        Segment<T> left = gk15<T>(f, worst.a, mid);
        Segment<T> right = gk15<T>(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    return {total, total_err, evals};
}

}  // namespace

QuadOutcome integrate_adaptive(const std::function<double(double)>& f,
                               std::span<const double> breakpoints,
                               double abs_tol, long max_evals) {
    return adaptive_impl<double, QuadOutcome>(f, breakpoints, abs_tol, max_evals);
}

ComplexQuadOutcome integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                      std::span<const double> breakpoints,
                                      double abs_tol, long max_evals) {
    return adaptive_impl<std::complex<double>, ComplexQuadOutcome>(f, breakpoints, abs_tol,
                                                                   max_evals);
}

namespace {

void push_clipped(std::vector<double>& pts, double v, double lo, double hi) {
    if (v > lo && v < hi) pts.push_back(v);
}

}  // namespace

double gamma_expectation(double alpha, const std::function<double(double)>& h,
                         double abs_tol, double h_sup, bool h_linear_growth,
                         long max_evals) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::domain_error("gamma_expectation: alpha must be positive");
    if (!(abs_tol > 0.0)) throw std::domain_error("gamma_expectation: abs_tol must be positive");

    const double lg = log_gamma(alpha);
    const double sup = std::max(h_sup, 1e-300);
    // Tail mass eps so that the discarded contribution stays below abs_tol/4:
    // bounded h needs eps <= tol/(4 sup); linearly growing h uses the
    // Cauchy-Schwarz estimate sup * sqrt(alpha * eps).
    double eps_tail;
    if (h_linear_growth) {
        const double r = abs_tol / (4.0 * sup);
        eps_tail = std::min(1e-16, r * r / std::max(alpha, 1.0));
    } else {
        eps_tail = std::min(1e-16, abs_tol / (4.0 * sup));
    }

    const double sigma = std::sqrt(alpha);
    double z_hi = alpha + 10.0 * sigma + 10.0;
    if (alpha > 1e6) {
        z_hi = alpha + 16.0 * sigma;  // Q(alpha, alpha + 16 sigma) < 1e-40
    } else {
        for (int i = 0; i < 300 && gamma_q(alpha, z_hi) > eps_tail; ++i) z_hi *= 1.25;
    }
    double z_lo = 0.0;
    if (alpha > 400.0) {
        z_lo = std::max(0.0, alpha - 12.0 * sigma - 10.0);
        if (alpha > 1e6) {
            z_lo = alpha - 16.0 * sigma;
        } else {
            for (int i = 0; i < 300 && z_lo > 0.0 && gamma_p(alpha, z_lo) > eps_tail; ++i)
                z_lo = std::max(0.0, z_lo * 0.85 - 1.0);
        }
    }

    const double tol_main = 0.75 * abs_tol;
    double result = 0.0;

    double smooth_lo = z_lo;
    if (alpha < 1.0 && z_lo == 0.0) {
        // Singular cell [0, z0]: with z = v^{1/alpha} the weight's z^{alpha-1}
        // cancels against the Jacobian, leaving a bounded integrand.
        const double z0 = std::min(1.0, z_hi);
        const double v0 = std::pow(z0, alpha);
        auto g = [&](double v) {
            const double z = std::exp(std::log(v) / alpha);
            return std::exp(-z) * h(z);
        };
        const double pts[2] = {0.0, v0};
        QuadOutcome cell = integrate_adaptive(g, pts, 0.4 * tol_main * std::exp(lg + std::log(alpha)),
                                              max_evals);
        result += cell.value * std::exp(-lg - std::log(alpha));
        smooth_lo = z0;
        if (smooth_lo >= z_hi) return result;
    }

    std::vector<double> pts = {smooth_lo, z_hi};
    push_clipped(pts, alpha - 8.0 * sigma, smooth_lo, z_hi);
    push_clipped(pts, alpha - 4.0 * sigma, smooth_lo, z_hi);
    push_clipped(pts, alpha - 2.0 * sigma, smooth_lo, z_hi);
    push_clipped(pts, alpha - sigma, smooth_lo, z_hi);
    push_clipped(pts, alpha, smooth_lo, z_hi);
    push_clipped(pts, alpha + sigma, smooth_lo, z_hi);
    push_clipped(pts, alpha + 2.0 * sigma, smooth_lo, z_hi);
    push_clipped(pts, alpha + 4.0 * sigma, smooth_lo, z_hi);
    push_clipped(pts, alpha + 8.0 * sigma, smooth_lo, z_hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    auto weighted = [&](double z) {
        return std::exp(-z + (alpha - 1.0) * std::log(z) - lg) * h(z);
    };
    QuadOutcome main = integrate_adaptive(weighted, pts, 0.6 * tol_main, max_evals);
    return result + main.value;
}

}  // namespace degdiff
