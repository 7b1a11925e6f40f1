#include "degdiff/specialfn.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace degdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lanczos coefficients for g = 7.
constexpr long double kLanczos[9] = {
    0.99999999999980993L,      676.5203681218851L,   -1259.1392167224028L,
    771.32342877765313L,      -176.61502916214059L,    12.507343278686905L,
    -0.13857109526572012L,    9.9843695780195716e-6L,  1.5056327351493116e-7L};

constexpr long double kHalfLogTwoPi = 0.918938533204672741780329736406L;

long double lanczos_log_gamma(long double z) {
    // valid for z >= 0.5
    z -= 1.0L;
    long double series = kLanczos[0];
    for (int i = 1; i < 9; ++i) series += kLanczos[i] / (z + i);
    const long double t = z + 7.5L;
    return kHalfLogTwoPi + (z + 0.5L) * std::log(t) - t + std::log(series);
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double term) {
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

double log_gamma(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::domain_error("log_gamma: argument must be positive and finite");
    if (a < 0.5)
        return static_cast<double>(lanczos_log_gamma(a + 1.0L) -
                                   std::log(static_cast<long double>(a)));
    return static_cast<double>(lanczos_log_gamma(a));
}

SeriesResult series_s(double a, double s, double tol, int budget) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("series_s: a must be positive");
    if (!(s >= 0.0) || !std::isfinite(s)) throw std::domain_error("series_s: s must be nonnegative");
    if (!(tol > 0.0)) throw std::domain_error("series_s: tol must be positive");

    double term = std::exp(-log_gamma(a));  // m = 0
    KahanSum acc;
    acc.add(term);
    int m = 0;
    while (true) {
        // ratio of term m+1 to term m
        const double ratio = s / ((m + 1.0) * (m + a));
        // Terms grow until (m+1)(m+a) > s; a pure ratio test before that
        // point would stop too early. Past m > s the ratio is < 1 and the
        // tail is dominated by a geometric series.
        if (m > s && ratio < 1.0) {
            const double tail = term * ratio / (1.0 - ratio);
            if (tail <= tol * std::max(1.0, std::abs(acc.sum)))
                return {acc.sum, m + 1, tail};
        }
        if (m >= budget)
            throw BudgetExceeded("series_s: term budget exceeded", acc.sum);
        term *= ratio;
        acc.add(term);
        ++m;
    }
}

double bessel_i_scaled(double nu, double x) {
    if (!(nu >= -1.0) || !std::isfinite(nu))
        throw std::domain_error("bessel_i_scaled: order must be >= -1");
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error("bessel_i_scaled: argument must be nonnegative");
    if (nu == -1.0) nu = 1.0;  // I_{-1} = I_1
    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        return nu > 0.0 ? 0.0 : kInf;
    }
    if (x <= kBesselSeriesSwitch) {
        const SeriesResult sr = series_s(nu + 1.0, 0.25 * x * x, 1e-16, 1 << 16);
        const double expo = nu * std::log(0.5 * x) - x;
        const double direct = std::exp(expo) * sr.value;
        if (std::isfinite(direct)) return direct;
        return std::exp(expo + std::log(sr.value));
    }
    // Large-argument expansion: e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} *
    // [1 - (mu-1)/(8x) + (mu-1)(mu-9)/(2!(8x)^2) - ...], mu = 4 nu^2.
    // Terms shrink rapidly for x > 30, nu <= 6; the neglected e^{-2x}
    // companion series is below 1e-26 there.
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = kInf;
    for (int k = 1; k <= 60; ++k) {
        term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        if (std::abs(term) >= prev) break;  // divergence onset
        sum += term;
        prev = std::abs(term);
        if (prev <= 1e-18 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

ScaledReal weighted_abs_sum(double s, double tol, int budget) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("weighted_abs_sum: s must be positive");
    if (!(tol > 0.0)) throw std::domain_error("weighted_abs_sum: tol must be positive");

    if (s <= kLogScaleThreshold) {
        // terms t_m = s^m/(m+1)!, weights |m - s|
        double term = 1.0;
        KahanSum acc;
        acc.add(std::abs(0.0 - s) * term);
        int m = 0;
        while (true) {
            if (m > s + 2.0) {
                const double r = (s / (m + 2.0)) * (1.0 + 1.0 / (m - s));
                if (r < 0.9) {
                    const double tail = (m - s) * term * r / (1.0 - r);
                    if (tail <= tol * std::max(1e-300, std::abs(acc.sum)))
                        return {acc.sum, 0.0};
                }
            }
            if (m >= budget)
                throw BudgetExceeded("weighted_abs_sum: budget exceeded", acc.sum);
            term *= s / (m + 2.0);
            ++m;
            acc.add(std::abs(m - s) * term);
        }
    }

    // Scaled branch: q_m = e^{-s} s^m/(m+1)!, summed outward from the mode.
    const int mode = static_cast<int>(s);
    const double log_q_mode = -s + mode * std::log(s) - log_gamma(mode + 2.0);
    const double q_mode = std::exp(log_q_mode);
    KahanSum acc;
    acc.add(std::abs(mode - s) * q_mode);
    const double cutoff = tol * q_mode;
    double q = q_mode;
    for (int m = mode; m > 0; --m) {  // downward
        q *= (m + 1.0) / s;
        acc.add(std::abs((m - 1.0) - s) * q);
        if (q * s < cutoff) break;
    }
    q = q_mode;
    int m = mode;
    while (true) {  // upward
        if (m - mode >= budget)
            throw BudgetExceeded("weighted_abs_sum: budget exceeded", acc.sum);
        q *= s / (m + 2.0);
        ++m;
        acc.add(std::abs(m - s) * q);
        if (m > s && q * (m - s) < cutoff * 0.01) break;
    }
    return {acc.sum, s};
}

double gamma_abs_integral(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("gamma_abs_integral: s must be positive");
    // The antiderivative of e^{-z} z^{s-1} (z-s) is -e^{-z} z^s, so both
    // halves of the split integral equal s^s e^{-s}.
    return std::exp(M_LN2 + s * std::log(s) - s - log_gamma(s));
}

HolderSumCheck holder_sum_bound(double s, double tol, int budget) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("holder_sum_bound: s must be positive");
    if (!(tol > 0.0)) throw std::domain_error("holder_sum_bound: tol must be positive");

    HolderSumCheck out;
    if (s <= kLogScaleThreshold) {
        // terms t_m = s^m/m! from m = 1, weights |s-m|/sqrt(m)
        double term = s;
        KahanSum acc;
        acc.add(std::abs(s - 1.0) * term);
        int m = 1;
        while (true) {
            if (m > s + 2.0) {
                const double r = (s / (m + 1.0)) * (1.0 + 1.0 / (m - s));
                if (r < 0.9) {
                    const double tail = ((m - s) / std::sqrt(m)) * term * r / (1.0 - r);
                    if (tail <= tol * std::max(1e-300, std::abs(acc.sum))) break;
                }
            }
            if (m >= budget)
                throw BudgetExceeded("holder_sum_bound: budget exceeded", acc.sum);
            term *= s / (m + 1.0);
            ++m;
            acc.add(std::abs(s - m) / std::sqrt(m) * term);
        }
        out.lhs = {acc.sum, 0.0};
        out.rhs = {M_SQRT2 * std::exp(s), 0.0};
        return out;
    }

    const int mode = static_cast<int>(s);
    const double q_mode = std::exp(-s + mode * std::log(s) - log_gamma(mode + 1.0));
    KahanSum acc;
    auto w = [s](int m) { return std::abs(s - m) / std::sqrt(static_cast<double>(m)); };
    acc.add(w(mode) * q_mode);
    const double cutoff = tol * q_mode;
    double q = q_mode;
    for (int m = mode; m > 1; --m) {
        q *= m / s;
        acc.add(w(m - 1) * q);
        if (q * s < cutoff) break;
    }
    q = q_mode;
    int m = mode;
    while (true) {
        if (m - mode >= budget)
            throw BudgetExceeded("holder_sum_bound: budget exceeded", acc.sum);
        q *= s / (m + 1.0);
        ++m;
        acc.add(w(m) * q);
        if (m > s && q * (m - s) < cutoff * 0.01) break;
    }
    out.lhs = {acc.sum, s};
    out.rhs = {M_SQRT2, s};
    return out;
}

double series_bound_constant(double a_max) {
    if (!(a_max > 0.0) || !std::isfinite(a_max))
        throw std::domain_error("series_bound_constant: a_max must be positive");
    // Both candidate expressions are built from g = 4a^2-8a+3 and
    // h = 4a^2-8a-5. Extrema of |g h| and |g| over [0, a_max] occur at the
    // endpoints, the zeros of g and h, the shared vertex a=1, and the
    // critical points of g h.
    std::vector<double> cand = {0.0, a_max, 0.5, 1.0, 1.5, 2.5};
    const double root = std::sqrt(320.0) / 16.0;
    cand.push_back(1.0 + root);
    cand.push_back(1.0 - root);
    double best = 0.0;
    for (double a : cand) {
        if (a < 0.0 || a > a_max) continue;
        const double g = 4.0 * a * a - 8.0 * a + 3.0;
        const double h = 4.0 * a * a - 8.0 * a - 5.0;
        best = std::max(best, std::sqrt(M_PI) * std::abs(g * h));
        best = std::max(best, 2.0 * std::abs(g));
    }
    return best;
}

namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

double gamma_q_cf(double a, double x) {
    // modified Lentz continued fraction for Q(a,x), x >= a+1
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - log_gamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw std::domain_error("gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw std::domain_error("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

}  // namespace degdiff
