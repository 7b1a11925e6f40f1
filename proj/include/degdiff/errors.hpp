#pragma once

#include <stdexcept>
#include <string>

namespace degdiff {

// Thrown when a series or quadrature fails to converge within its node
// budget. The best value computed so far is carried along.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double partial_value)
        : std::runtime_error(what), partial_(partial_value) {}

    double partial() const { return partial_; }

private:
    double partial_;
};

}  // namespace degdiff
