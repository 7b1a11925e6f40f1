#include "degdiff/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace degdiff {

bool SweepReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.pass; });
}

const std::vector<double>& default_gamma_grid() {
    static const std::vector<double> g = {0.5, 1.0, 2.0};
    return g;
}

const std::vector<double>& default_b_grid() {
    static const std::vector<double> g = {0.0, 0.25, 1.0, 2.0};
    return g;
}

const std::vector<double>& default_t_grid() {
    static const std::vector<double> g = {0.01, 0.1, 1.0, 10.0};
    return g;
}

const std::vector<double>& default_lambda_grid() {
    static const std::vector<double> g = {0.1, 1.0, 10.0, 100.0};
    return g;
}

std::vector<double> default_x_grid() {
    std::vector<double> g = {0.0};
    for (int i = 0; i < 25; ++i)
        g.push_back(std::pow(10.0, -3.0 + (std::log10(50.0) + 3.0) * i / 24.0));
    return g;
}

double bound_slack(double bound, const QuadratureSpec& quad) {
    return 0.01 * std::abs(bound) + 10.0 * quad.tol;
}

namespace {

void finalize(SweepReport& rep) {
    double worst = std::numeric_limits<double>::infinity();
    for (const SweepRow& r : rep.rows) worst = std::min(worst, r.margin);
    rep.summary.worst_margin = rep.rows.empty() ? 0.0 : worst;
}

}  // namespace

SweepReport analyticity_sweep(double B, double gamma0,
                              const std::vector<TestFunction>& f_set,
                              const std::vector<double>& t_grid,
                              const std::vector<double>& x_grid,
                              const QuadratureSpec& quad) {
    if (f_set.empty() || t_grid.empty() || x_grid.empty())
        throw std::invalid_argument("analyticity_sweep: empty grid");
    SweepReport rep;
    double emp = 0.0;
    for (double gamma : default_gamma_grid()) {
        if (gamma < gamma0) continue;
        for (double b : default_b_grid()) {
            if (b > B) continue;
            const Params p(gamma, b);
            for (const TestFunction& f : f_set) {
                for (double t : t_grid) {
                    SweepRow row;
                    row.gamma = gamma;
                    row.b = b;
                    row.t = t;
                    row.function = f.name;
                    row.quantity = "t_a_pt_sup";
                    row.measured = t_a_pt_sup(p, f, t, x_grid, quad);
                    row.bound = 2.0 * (1.0 + M_SQRT2 + b) / gamma * f.sup_norm;
                    row.margin = row.bound - row.measured;
                    row.pass = row.margin >= -bound_slack(row.bound, quad);
                    emp = std::max(emp, row.measured * gamma / std::max(f.sup_norm, 1e-300));
                    rep.rows.push_back(row);
                }
            }
        }
    }
    rep.summary.empirical_constant = emp;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "b in [0,%g], gamma >= %g, uniform bound 2(1+sqrt2+B)/gamma0 = %.6g", B,
                  gamma0, 2.0 * (1.0 + M_SQRT2 + B) / gamma0);
    rep.summary.grid_description = buf;
    finalize(rep);
    return rep;
}

SweepReport gradient_sweep(const std::vector<Params>& params_grid,
                           const std::vector<TestFunction>& f_set,
                           const std::vector<double>& t_grid,
                           const std::vector<double>& x_grid,
                           const QuadratureSpec& quad) {
    if (params_grid.empty() || f_set.empty() || t_grid.empty() || x_grid.empty())
        throw std::invalid_argument("gradient_sweep: empty grid");
    SweepReport rep;
    double emp = 0.0;
    for (const Params& p : params_grid) {
        for (const TestFunction& f : f_set) {
            for (double t : t_grid) {
                DerivativeSeries ds(p, f, t, quad);
                double w = 0.0, u = 0.0, xs = 0.0;
                for (double x : x_grid) {
                    const double d = ds.first(x);
                    w = std::max(w, std::sqrt(x) * std::abs(d));
                    u = std::max(u, std::abs(d));
                    xs = std::max(xs, std::abs(ds.x_second(x)));
                }
                const double gt = p.gamma * t;
                SweepRow rw;
                rw.gamma = p.gamma;
                rw.b = p.b;
                rw.t = t;
                rw.function = f.name;

                rw.quantity = "gradient_weighted";
                rw.measured = w;
                rw.bound = 2.0 * M_SQRT2 * f.sup_norm / std::sqrt(gt);
                rw.margin = rw.bound - rw.measured;
                rw.pass = rw.margin >= -bound_slack(rw.bound, quad);
                emp = std::max(emp, w * std::sqrt(gt) / std::max(f.sup_norm, 1e-300));
                rep.rows.push_back(rw);

                rw.quantity = "gradient_unweighted";
                rw.measured = u;
                rw.bound = 2.0 * f.sup_norm / gt;
                rw.margin = rw.bound - rw.measured;
                rw.pass = rw.margin >= -bound_slack(rw.bound, quad);
                rep.rows.push_back(rw);

                rw.quantity = "x_second";
                rw.measured = xs;
                rw.bound = (p.b > 0.0 ? 2.0 * (1.0 + M_SQRT2) : 1.0 + 2.0 * M_SQRT2) *
                           f.sup_norm / gt;
                rw.margin = rw.bound - rw.measured;
                rw.pass = rw.margin >= -bound_slack(rw.bound, quad);
                rep.rows.push_back(rw);
            }
        }
    }
    rep.summary.empirical_constant = emp;  // sharp constant seen in Eq-(33)-type rows
    rep.summary.grid_description = "sup over x-grid per (gamma,b,t,f); three quantities";
    finalize(rep);
    return rep;
}

SweepReport trotter_kato_sweep(double gamma, const TestFunction& f,
                               const std::vector<double>& b_list,
                               const std::vector<double>& t_grid,
                               const std::vector<double>& x_grid,
                               const QuadratureSpec& quad, double eps_final) {
    if (b_list.empty() || t_grid.empty() || x_grid.empty())
        throw std::invalid_argument("trotter_kato_sweep: empty grid");
    for (size_t i = 1; i < b_list.size(); ++i)
        if (!(b_list[i] < b_list[i - 1]))
            throw std::invalid_argument("trotter_kato_sweep: b_list must decrease");

    const Params p0(gamma, 0.0);
    // cache the b = 0 reference values
    std::vector<std::vector<double>> ref(t_grid.size());
    for (size_t it = 0; it < t_grid.size(); ++it)
        for (double x : x_grid) ref[it].push_back(apply(p0, f, t_grid[it], x, quad));

    SweepReport rep;
    double prev = std::numeric_limits<double>::infinity();
    std::vector<double> logb, logm;
    for (double b : b_list) {
        const Params pb(gamma, b);
        double measured = 0.0;
        for (size_t it = 0; it < t_grid.size(); ++it)
            for (size_t ix = 0; ix < x_grid.size(); ++ix)
                measured = std::max(measured,
                                    std::abs(apply(pb, f, t_grid[it], x_grid[ix], quad) -
                                             ref[it][ix]));
        SweepRow row;
        row.gamma = gamma;
        row.b = b;
        row.function = f.name;
        row.quantity = "trotter_kato";
        row.measured = measured;
        const bool last = (b == b_list.back());
        row.bound = std::min(prev + 2.0 * quad.tol,
                             last ? eps_final : std::numeric_limits<double>::infinity());
        row.margin = row.bound - measured;
        row.pass = measured <= row.bound;
        rep.rows.push_back(row);
        if (measured > 0.0 && b > 0.0) {
            logb.push_back(std::log(b));
            logm.push_back(std::log(measured));
        }
        prev = measured;
    }
    // least-squares slope of log measured against log b (diagnostic only)
    if (logb.size() >= 2) {
        const size_t n = logb.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < n; ++i) {
            sx += logb[i];
            sy += logm[i];
            sxx += logb[i] * logb[i];
            sxy += logb[i] * logm[i];
        }
        rep.summary.empirical_constant = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    rep.summary.grid_description = "max over t,x grid per b; slope of log-log fit in summary";
    finalize(rep);
    return rep;
}

TestFunction core_approx_sequence(const TestFunction& u, int n) {
    if (!u.has_derivatives())
        throw std::invalid_argument("core_approx_sequence: " + u.name + " lacks derivatives");
    if (n < 1) throw std::invalid_argument("core_approx_sequence: n must be positive");

    const double a = 1.0 / n;
    const double ua = u.eval(a);
    const double u1 = u.deriv1(a);
    const double u2 = u.deriv2(a);
    const double l = u.limit_at_infinity;
    const double nn = n;

    // quintic smoothstep cutoff: 1 on [0,1], 0 on [2,inf), C^2
    auto phi = [](double s) -> double {
        if (s <= 1.0) return 1.0;
        if (s >= 2.0) return 0.0;
        const double r = s - 1.0;
        return 1.0 - ((6.0 * r - 15.0) * r + 10.0) * r * r * r;
    };
    auto phi1 = [](double s) -> double {
        if (s <= 1.0 || s >= 2.0) return 0.0;
        const double r = s - 1.0;
        const double q = r * (1.0 - r);
        return -30.0 * q * q;
    };
    auto phi2 = [](double s) -> double {
        if (s <= 1.0 || s >= 2.0) return 0.0;
        const double r = s - 1.0;
        return -30.0 * r * (2.0 * r - 1.0) * (r - 1.0) * 2.0;
    };

    TestFunction out;
    out.name = u.name + "_core" + std::to_string(n);
    auto ueval = u.eval;
    auto ud1 = u.deriv1;
    auto ud2 = u.deriv2;
    out.eval = [=](double x) -> double {
        if (x <= a) {
            const double d = x - a;
            return ua + d * u1 + 0.5 * d * d * u2;
        }
        if (x <= 1.0) return ueval(x);
        return (ueval(x) - l) * phi(x / nn) + l;
    };
    out.deriv1 = [=](double x) -> double {
        if (x <= a) return u1 + (x - a) * u2;
        if (x <= 1.0) return ud1(x);
        return ud1(x) * phi(x / nn) + (ueval(x) - l) * phi1(x / nn) / nn;
    };
    out.deriv2 = [=](double x) -> double {
        if (x <= a) return u2;
        if (x <= 1.0) return ud2(x);
        return ud2(x) * phi(x / nn) + 2.0 * ud1(x) * phi1(x / nn) / nn +
               (ueval(x) - l) * phi2(x / nn) / (nn * nn);
    };
    out.limit_at_infinity = l;
    // Taylor segment and cutoff can overshoot u slightly; pad the sup-norm.
    double pad = std::abs(ua) + a * std::abs(u1) + 0.5 * a * a * std::abs(u2);
    out.sup_norm = std::max({u.sup_norm, pad, std::abs(l)}) + 2.0 * std::abs(u.sup_norm - std::abs(l));
    out.lipschitz = std::nullopt;
    out.support_bound = std::nullopt;
    return out;
}

ResolventSweepReport resolvent_sweep(const std::vector<Params>& params_grid,
                                     const std::vector<TestFunction>& f_set,
                                     const std::vector<double>& lambda_grid,
                                     const std::vector<double>& x_grid,
                                     const QuadratureSpec& quad) {
    if (params_grid.empty() || f_set.empty() || lambda_grid.empty() || x_grid.empty())
        throw std::invalid_argument("resolvent_sweep: empty grid");
    ResolventSweepReport rep;
    double d2_min = std::numeric_limits<double>::infinity(), d2_max = 0.0;
    double c53_min = std::numeric_limits<double>::infinity(), c53_max = 0.0;

    for (const Params& p : params_grid) {
        for (const TestFunction& f : f_set) {
            for (double lam : lambda_grid) {
                double sup_r = 0.0, sup_wg = 0.0, sup_g = 0.0;
                for (double x : x_grid) {
                    ResolventQuery q{p, {lam, 0.0}, &f, x, quad};
                    sup_r = std::max(sup_r, std::abs(resolve(q).real()));
                    if (x > 0.0 || f.deriv1) {
                        const double d = std::abs(resolve_derivative(q).real());
                        sup_wg = std::max(sup_wg, std::sqrt(x) * d);
                        sup_g = std::max(sup_g, d);
                    }
                }
                SweepRow row;
                row.gamma = p.gamma;
                row.b = p.b;
                row.lambda = lam;
                row.function = f.name;

                row.quantity = "resolvent_contraction";
                row.measured = lam * sup_r;
                row.bound = f.sup_norm;
                row.margin = row.bound - row.measured;
                row.pass = row.margin >= -bound_slack(row.bound, quad);
                rep.contraction.rows.push_back(row);

                // fitted constant in sqrt(x)|.| <= d2 ||f|| / sqrt(lambda)
                row.quantity = "resolvent_weighted_gradient";
                row.measured = sup_wg * std::sqrt(lam) / std::max(f.sup_norm, 1e-300);
                row.bound = 0.0;
                row.margin = 0.0;
                row.pass = std::isfinite(row.measured);
                rep.weighted_gradient.rows.push_back(row);
                if (row.measured > 0.0) {
                    d2_min = std::min(d2_min, row.measured);
                    d2_max = std::max(d2_max, row.measured);
                }

                if (p.b > 0.0) {
                    row.quantity = "resolvent_global_gradient";
                    row.measured = p.gamma * sup_g /
                                   (std::max(2.0, p.gamma / p.b) * std::max(f.sup_norm, 1e-300));
                    row.pass = std::isfinite(row.measured);
                    rep.global_gradient.rows.push_back(row);
                    if (row.measured > 0.0) {
                        c53_min = std::min(c53_min, row.measured);
                        c53_max = std::max(c53_max, row.measured);
                    }
                }
            }
        }
    }
    finalize(rep.contraction);
    rep.contraction.summary.empirical_constant = 1.0;
    rep.contraction.summary.grid_description = "lambda ||R f|| vs ||f||, real lambda";
    finalize(rep.weighted_gradient);
    rep.weighted_gradient.summary.empirical_constant = d2_max;
    rep.weighted_gradient.summary.grid_description =
        "fitted d2; stability ratio " + std::to_string(d2_max / std::max(d2_min, 1e-300));
    finalize(rep.global_gradient);
    rep.global_gradient.summary.empirical_constant = c53_max;
    rep.global_gradient.summary.grid_description =
        "fitted C; stability ratio " + std::to_string(c53_max / std::max(c53_min, 1e-300));
    return rep;
}

namespace {

void append_num(std::string& line, const std::optional<double>& v) {
    if (v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *v);
        line += buf;
    }
    line += ',';
}

}  // namespace

void write_csv_header(std::ostream& os) {
    os << "gamma,b,t,lambda,x,y,k,quantity,measured,bound,margin,pass\n";
}

void write_csv_row(std::ostream& os, const CsvRow& row) {
    std::string line;
    append_num(line, row.gamma);
    append_num(line, row.b);
    append_num(line, row.t);
    append_num(line, row.lambda);
    append_num(line, row.x);
    append_num(line, row.y);
    if (row.k) line += std::to_string(*row.k);
    line += ',';
    line += row.quantity;
    line += ',';
    append_num(line, row.measured);
    append_num(line, row.bound);
    append_num(line, row.margin);
    if (row.pass) line += (*row.pass ? "true" : "false");
    line += '\n';
    os << line;
}

std::vector<CsvRow> to_csv_rows(const SweepReport& report) {
    std::vector<CsvRow> out;
    out.reserve(report.rows.size());
    for (const SweepRow& r : report.rows) {
        CsvRow c;
        c.gamma = r.gamma;
        c.b = r.b;
        c.t = r.t;
        c.lambda = r.lambda;
        c.x = r.x;
        c.quantity = r.function.empty() ? r.quantity : r.quantity + ":" + r.function;
        c.measured = r.measured;
        c.bound = r.bound;
        c.margin = r.margin;
        c.pass = r.pass;
        out.push_back(std::move(c));
    }
    return out;
}

void write_csv(std::ostream& os, const SweepReport& report) {
    write_csv_header(os);
    for (const CsvRow& r : to_csv_rows(report)) write_csv_row(os, r);
}

}  // namespace degdiff
