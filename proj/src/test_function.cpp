#include "degdiff/test_function.hpp"

#include <cmath>
#include <stdexcept>

namespace degdiff {

namespace {

TestFunction make_one() {
    TestFunction f;
    f.name = "one";
    f.eval = [](double) { return 1.0; };
    f.deriv1 = [](double) { return 0.0; };
    f.deriv2 = [](double) { return 0.0; };
    f.limit_at_infinity = 1.0;
    f.sup_norm = 1.0;
    f.lipschitz = 0.0;
    return f;
}

TestFunction make_exp_decay() {
    TestFunction f;
    f.name = "exp_decay";
    f.eval = [](double y) { return std::exp(-y); };
    f.deriv1 = [](double y) { return -std::exp(-y); };
    f.deriv2 = [](double y) { return std::exp(-y); };
    f.limit_at_infinity = 0.0;
    f.sup_norm = 1.0;
    f.lipschitz = 1.0;
    return f;
}

TestFunction make_inv_linear() {
    TestFunction f;
    f.name = "inv_linear";
    f.eval = [](double y) { return 1.0 / (1.0 + y); };
    f.deriv1 = [](double y) { const double u = 1.0 + y; return -1.0 / (u * u); };
    f.deriv2 = [](double y) { const double u = 1.0 + y; return 2.0 / (u * u * u); };
    f.limit_at_infinity = 0.0;
    f.sup_norm = 1.0;
    f.lipschitz = 1.0;
    return f;
}

TestFunction make_damped_sine() {
    TestFunction f;
    f.name = "damped_sine";
    f.eval = [](double y) { return 0.5 + std::sin(y) / (1.0 + y * y); };
    f.deriv1 = [](double y) {
        const double u = 1.0 + y * y;
        return std::cos(y) / u - 2.0 * y * std::sin(y) / (u * u);
    };
    f.deriv2 = [](double y) {
        const double u = 1.0 + y * y;
        const double s = std::sin(y), c = std::cos(y);
        return -s / u - 4.0 * y * c / (u * u) - 2.0 * s / (u * u) +
               8.0 * y * y * s / (u * u * u);
    };
    f.limit_at_infinity = 0.5;
    f.sup_norm = 0.9374141582790101;  // attained near y = 0.798
    f.lipschitz = 1.0;                // |f'| peaks at y = 0
    return f;
}

TestFunction make_bump() {
    TestFunction f;
    f.name = "bump";
    auto val = [](double y) -> double {
        const double r = y - 1.0;
        const double u = 1.0 - r * r;
        if (u <= 0.0) return 0.0;
        return std::exp(1.0 - 1.0 / u);
    };
    f.eval = val;
    f.deriv1 = [val](double y) -> double {
        const double r = y - 1.0;
        const double u = 1.0 - r * r;
        if (u <= 0.0) return 0.0;
        return val(y) * (-2.0 * r) / (u * u);
    };
    f.deriv2 = [val](double y) -> double {
        const double r = y - 1.0;
        const double u = 1.0 - r * r;
        if (u <= 0.0) return 0.0;
        const double u2 = u * u;
        return val(y) * (4.0 * r * r / (u2 * u2) - 2.0 / u2 - 8.0 * r * r / (u2 * u));
    };
    f.limit_at_infinity = 0.0;
    f.sup_norm = 1.0;
    f.lipschitz = 2.1703570857103388;
    f.support_bound = 2.0;
    return f;
}

TestFunction make_plateau() {
    // 1 on [0,1], quintic-smoothstep transition down to 0.3 on [1,3],
    // constant 0.3 beyond: C^2 and eventually constant.
    TestFunction f;
    f.name = "plateau";
    f.eval = [](double y) -> double {
        if (y <= 1.0) return 1.0;
        if (y >= 3.0) return 0.3;
        const double s = 0.5 * (y - 1.0);
        const double sig = ((6.0 * s - 15.0) * s + 10.0) * s * s * s;
        return 1.0 - 0.7 * sig;
    };
    f.deriv1 = [](double y) -> double {
        if (y <= 1.0 || y >= 3.0) return 0.0;
        const double s = 0.5 * (y - 1.0);
        const double q = s * (1.0 - s);
        return -10.5 * q * q;
    };
    f.deriv2 = [](double y) -> double {
        if (y <= 1.0 || y >= 3.0) return 0.0;
        const double s = 0.5 * (y - 1.0);
        return -10.5 * s * (2.0 * s - 1.0) * (s - 1.0);
    };
    f.limit_at_infinity = 0.3;
    f.sup_norm = 1.0;
    f.lipschitz = 10.5 / 16.0;  // max of 10.5 s^2(1-s)^2 at s = 1/2
    return f;
}

}  // namespace

const std::vector<TestFunction>& registry() {
    static const std::vector<TestFunction> fns = {
        make_one(),        make_exp_decay(), make_inv_linear(),
        make_damped_sine(), make_bump(),     make_plateau()};
    return fns;
}

const TestFunction& registry_function(std::string_view name) {
    for (const TestFunction& f : registry())
        if (f.name == name) return f;
    throw std::invalid_argument("unknown test function: " + std::string(name));
}

}  // namespace degdiff
