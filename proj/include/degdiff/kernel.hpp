#pragma once

#include <functional>
#include <span>

#include "degdiff/quadrature.hpp"

// Transition kernel of the operator gamma*x*u'' + b*u' on [0, infinity]:
// an absolutely continuous density for y > 0 plus, when b = 0, an atom at
// the origin of mass e^{-x/(gamma t)}.

namespace degdiff {

// The coefficient pair defining one operator of the family.
struct Params {
    double gamma;
    double b;

    Params(double gamma_, double b_);
    double beta() const { return b / gamma; }  // drift-to-diffusion ratio
};

struct KernelEval {
    double density = 0.0;      // AC part at (x, y, t), units 1/state
    double atom = 0.0;         // mass at y = 0; zero whenever b > 0
    double log_density = 0.0;  // ln(density); -inf where the AC part vanishes
};

// p(x,y,t) for y > 0, t > 0. Evaluated through the overflow-free form
//   (1/(gamma t)) (x/y)^{(1-b/gamma)/2} e^{-(sqrt x - sqrt y)^2/(gamma t)}
//     * [e^{-w} I_{b/gamma-1}(w)],  w = 2 sqrt(xy)/(gamma t),
// which is algebraically identical to the e^{-(x+y)/(gamma t)} I_nu form.
// At x = 0 (b > 0) this reduces to the gamma density
// (gamma t)^{-b/gamma} e^{-y/(gamma t)} y^{b/gamma-1} / Gamma(b/gamma).
// The y = 0 value of the AC part is an endpoint limit, possibly infinite,
// and is not provided.
KernelEval density(const Params& p, double x, double y, double t);

// \int_0^infty p_ac(x,y,t) g(y) dy for bounded continuous g, via the
// substitution y = gamma*t*z. The z-integral is truncated where the
// regularized gamma tail drops below tol/10 and, for b/gamma < 1, the
// z^{b/gamma-1} endpoint singularity is mapped away by z = v^{gamma/b}.
// g_sup must bound |g| on [0, infty); extra_breaks (in y units) seeds the
// subdivision with known features of g.
double integrate_against_kernel(const Params& p, double x, double t,
                                const std::function<double(double)>& g,
                                double g_sup, const QuadratureSpec& quad,
                                std::span<const double> extra_breaks = {});

// | atom(x,t) + \int_0^infty p(x,y,t) dy - 1 |
double normalization_defect(const Params& p, double x, double t,
                            const QuadratureSpec& quad);

// | p(x,y,t+s) - [ atom_t(x) p(0,y,s) + \int p(x,z,t) p(z,y,s) dz ] |
// (the atom term is present only when b = 0, and vanishes there as well
// because the AC part of p(0,.,s) is identically zero).
double chapman_kolmogorov_defect(const Params& p, double x, double y, double s,
                                 double t, const QuadratureSpec& quad);

}  // namespace degdiff
