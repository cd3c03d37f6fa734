#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tscale {

/// A scalar coefficient t -> c(t). Cheap to copy; immutable after construction.
class Coefficient {
public:
    Coefficient(double c = 0.0);

    static Coefficient constant(double c) { return Coefficient(c); }
    /// c * t^e
    static Coefficient power(double c, double e);
    /// Piecewise-linear through (t[i], v[i]); constant beyond the ends.
    static Coefficient table(std::vector<double> t, std::vector<double> v);
    static Coefficient callable(std::function<double(double)> fn, std::string label);

    double operator()(double t) const { return const_ ? *const_ : fn_(t); }

    std::optional<double> constant_value() const { return const_; }
    const std::string& label() const { return label_; }
    /// Table knots, used to split quadrature at kinks.
    const std::vector<double>& knots() const { return knots_; }

private:
    std::function<double(double)> fn_;
    std::optional<double> const_;
    std::string label_;
    std::vector<double> knots_;
};

}  // namespace tscale
