#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace degdiff {

// A bounded continuous function on [0, infinity) with a limit at infinity,
// optionally with first and second derivatives, a Lipschitz constant and a
// compact support bound. The eval/deriv callables must be reentrant.
struct TestFunction {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> deriv1;  // empty when not C^1
    std::function<double(double)> deriv2;  // empty when not C^2
    double limit_at_infinity = 0.0;
    double sup_norm = 1.0;
    std::optional<double> lipschitz;
    std::optional<double> support_bound;  // supp f in [0, M]

    bool has_derivatives() const { return bool(deriv1) && bool(deriv2); }
};

// Built-in functions addressable by name:
//   one          constant 1
//   exp_decay    e^{-y}
//   inv_linear   1/(1+y)
//   damped_sine  0.5 + sin(y)/(1+y^2)
//   bump         C^infty bump supported on [0,2], max 1 at y=1
//   plateau      C^2 spline, 1 on [0,1], constant 0.3 beyond y=3
// bump and plateau are C^2 and eventually constant.
const std::vector<TestFunction>& registry();
const TestFunction& registry_function(std::string_view name);

}  // namespace degdiff
