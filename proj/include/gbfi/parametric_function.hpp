#pragma once

#include <memory>
#include <vector>

#include "gbfi/errors.hpp"
#include "gbfi/time_grid.hpp"

namespace gbfi {

// Real-valued function of t on [0, T], drawn from a closed parametric family
// or assembled pointwise from such functions. Exact derivatives are available
// for the base families (chain rule included); the pointwise wrappers that
// have no smooth derivative (positive parts, square roots) refuse to
// differentiate. GridSampled functions interpolate linearly and use the
// forward difference of the containing cell as derivative.
class ParametricFunction {
public:
    double value(double t) const;
    double derivative(double t) const;
    bool is_zero() const; // structural zero, not a numerical test

    // base families
    static ParametricFunction zero();
    static ParametricFunction constant(double c);
    static ParametricFunction linear(double slope); // slope * t
    static ParametricFunction polynomial(std::vector<double> coeffs); // sum c_k t^k
    static ParametricFunction scaled_sine(double amplitude, double frequency); // A sin(w t)
    // amplitude * sin(frequency * b(t) / b(T))
    static ParametricFunction scaled_sine_b_ratio(double amplitude, double frequency,
                                                  ParametricFunction b, double horizon);
    static ParametricFunction grid_sampled(TimeGrid grid, std::vector<double> values);

    // pointwise algebra
    static ParametricFunction sum(ParametricFunction f, ParametricFunction g);
    static ParametricFunction scaled(double c, ParametricFunction f);
    static ParametricFunction product(ParametricFunction f, ParametricFunction g);
    static ParametricFunction positive_part(ParametricFunction f);  // max(f, 0)
    static ParametricFunction negative_part(ParametricFunction f);  // max(-f, 0)
    static ParametricFunction sqrt_positive_part(ParametricFunction f);
    static ParametricFunction sqrt_negative_part(ParametricFunction f);
    // f'(t) / b'(t): the derivative of f with respect to the clock b
    static ParametricFunction density_of(ParametricFunction f, ParametricFunction b);

    struct Node; // opaque; defined with the evaluators in the .cpp

private:
    explicit ParametricFunction(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

} // namespace gbfi
