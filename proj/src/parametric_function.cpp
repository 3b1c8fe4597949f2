#include "gbfi/parametric_function.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

namespace gbfi {

namespace {

enum class Kind {
    Zero,
    Constant,
    Linear,
    Polynomial,
    Sine,       // amp * sin(freq * t)
    SineBRatio, // amp * sin(freq * b(t)/b(T))
    GridSampled,
    Sum,
    Scaled,
    Product,
    PosPart,
    NegPart,
    SqrtPosPart,
    SqrtNegPart,
    DensityOf, // lhs'(t) / rhs'(t)
};

} // namespace

struct ParametricFunction::Node {
    Kind kind;
    double p0 = 0.0, p1 = 0.0; // scalar parameters (amplitude/frequency/slope/scale/b(T))
    std::vector<double> coeffs;
    std::optional<TimeGrid> grid;
    std::vector<double> samples;
    std::shared_ptr<const Node> lhs, rhs;
};

ParametricFunction::ParametricFunction(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

namespace {

double node_value(const ParametricFunction::Node&, double);
double node_derivative(const ParametricFunction::Node&, double);

// locate cell containing t (clamped) for a grid-sampled function
int containing_cell(const TimeGrid& g, double t) {
    const auto& nodes = g.nodes();
    if (t <= nodes.front())
        return 0;
    if (t >= nodes[nodes.size() - 2])
        return g.cells() - 1;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    return static_cast<int>(it - nodes.begin()) - 1;
}

double node_value(const ParametricFunction::Node& n, double t) {
    switch (n.kind) {
    case Kind::Zero:
        return 0.0;
    case Kind::Constant:
        return n.p0;
    case Kind::Linear:
        return n.p0 * t;
    case Kind::Polynomial: {
        double acc = 0.0;
        for (std::size_t i = n.coeffs.size(); i-- > 0;)
            acc = acc * t + n.coeffs[i];
        return acc;
    }
    case Kind::Sine:
        return n.p0 * std::sin(n.p1 * t);
    case Kind::SineBRatio:
        return n.p0 * std::sin(n.p1 * node_value(*n.lhs, t) / n.rhs->p0);
    case Kind::GridSampled: {
        const TimeGrid& g = *n.grid;
        int j = containing_cell(g, t);
        double t0 = g.node(j), t1 = g.node(j + 1);
        double v0 = n.samples[static_cast<std::size_t>(j)];
        double v1 = n.samples[static_cast<std::size_t>(j) + 1];
        if (t <= t0)
            return v0;
        if (t >= t1)
            return v1;
        return v0 + (t - t0) / (t1 - t0) * (v1 - v0);
    }
    case Kind::Sum:
        return node_value(*n.lhs, t) + node_value(*n.rhs, t);
    case Kind::Scaled:
        return n.p0 * node_value(*n.lhs, t);
    case Kind::Product:
        return node_value(*n.lhs, t) * node_value(*n.rhs, t);
    case Kind::PosPart:
        return std::max(node_value(*n.lhs, t), 0.0);
    case Kind::NegPart:
        return std::max(-node_value(*n.lhs, t), 0.0);
    case Kind::SqrtPosPart:
        return std::sqrt(std::max(node_value(*n.lhs, t), 0.0));
    case Kind::SqrtNegPart:
        return std::sqrt(std::max(-node_value(*n.lhs, t), 0.0));
    case Kind::DensityOf:
        return node_derivative(*n.lhs, t) / node_derivative(*n.rhs, t);
    }
    throw Error("unreachable function kind");
}

double node_derivative(const ParametricFunction::Node& n, double t) {
    switch (n.kind) {
    case Kind::Zero:
    case Kind::Constant:
        return 0.0;
    case Kind::Linear:
        return n.p0;
    case Kind::Polynomial: {
        double acc = 0.0;
        for (std::size_t i = n.coeffs.size(); i-- > 1;)
            acc = acc * t + static_cast<double>(i) * n.coeffs[i];
        return acc;
    }
    case Kind::Sine:
        return n.p0 * n.p1 * std::cos(n.p1 * t);
    case Kind::SineBRatio: {
        double bT = n.rhs->p0;
        return n.p0 * std::cos(n.p1 * node_value(*n.lhs, t) / bT) * n.p1 *
               node_derivative(*n.lhs, t) / bT;
    }
    case Kind::GridSampled: {
        const TimeGrid& g = *n.grid;
        int j = containing_cell(g, t);
        double v0 = n.samples[static_cast<std::size_t>(j)];
        double v1 = n.samples[static_cast<std::size_t>(j) + 1];
        return (v1 - v0) / g.dt(j);
    }
    case Kind::Sum:
        return node_derivative(*n.lhs, t) + node_derivative(*n.rhs, t);
    case Kind::Scaled:
        return n.p0 * node_derivative(*n.lhs, t);
    case Kind::Product:
        return node_derivative(*n.lhs, t) * node_value(*n.rhs, t) +
               node_value(*n.lhs, t) * node_derivative(*n.rhs, t);
    case Kind::PosPart:
    case Kind::NegPart:
    case Kind::SqrtPosPart:
    case Kind::SqrtNegPart:
    case Kind::DensityOf:
        throw InvalidParameter("derivative not available for this function kind");
    }
    throw Error("unreachable function kind");
}

std::shared_ptr<const ParametricFunction::Node> make_node(Kind kind) {
    auto n = std::make_shared<ParametricFunction::Node>();
    n->kind = kind;
    return n;
}

} // namespace

double ParametricFunction::value(double t) const { return node_value(*node_, t); }
double ParametricFunction::derivative(double t) const { return node_derivative(*node_, t); }
bool ParametricFunction::is_zero() const { return node_->kind == Kind::Zero; }

ParametricFunction ParametricFunction::zero() {
    return ParametricFunction(make_node(Kind::Zero));
}

ParametricFunction ParametricFunction::constant(double c) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->p0 = c;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::linear(double slope) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Linear;
    n->p0 = slope;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty())
        return zero();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Polynomial;
    n->coeffs = std::move(coeffs);
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::scaled_sine(double amplitude, double frequency) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sine;
    n->p0 = amplitude;
    n->p1 = frequency;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::scaled_sine_b_ratio(double amplitude, double frequency,
                                                           ParametricFunction b, double horizon) {
    double b_total = b.value(horizon);
    if (!(b_total > 0.0))
        throw InvalidParameter("scaled_sine_b_ratio requires b(T) > 0");
    auto n = std::make_shared<Node>();
    n->kind = Kind::SineBRatio;
    n->p0 = amplitude;
    n->p1 = frequency;
    n->lhs = b.node_;
    auto denom = std::make_shared<Node>();
    denom->kind = Kind::Constant;
    denom->p0 = b_total;
    n->rhs = denom;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::grid_sampled(TimeGrid grid, std::vector<double> values) {
    if (values.size() != grid.nodes().size())
        throw InvalidParameter("grid_sampled needs one value per grid node");
    auto n = std::make_shared<Node>();
    n->kind = Kind::GridSampled;
    n->grid = std::move(grid);
    n->samples = std::move(values);
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::sum(ParametricFunction f, ParametricFunction g) {
    if (f.is_zero())
        return g;
    if (g.is_zero())
        return f;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->lhs = f.node_;
    n->rhs = g.node_;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::scaled(double c, ParametricFunction f) {
    if (f.is_zero())
        return f;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Scaled;
    n->p0 = c;
    n->lhs = f.node_;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::product(ParametricFunction f, ParametricFunction g) {
    if (f.is_zero())
        return f;
    if (g.is_zero())
        return g;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    n->lhs = f.node_;
    n->rhs = g.node_;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::positive_part(ParametricFunction f) {
    if (f.is_zero())
        return f;
    auto n = std::make_shared<Node>();
    n->kind = Kind::PosPart;
    n->lhs = f.node_;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::negative_part(ParametricFunction f) {
    if (f.is_zero())
        return f;
    auto n = std::make_shared<Node>();
    n->kind = Kind::NegPart;
    n->lhs = f.node_;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::sqrt_positive_part(ParametricFunction f) {
    if (f.is_zero())
        return f;
    auto n = std::make_shared<Node>();
    n->kind = Kind::SqrtPosPart;
    n->lhs = f.node_;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::sqrt_negative_part(ParametricFunction f) {
    if (f.is_zero())
        return f;
    auto n = std::make_shared<Node>();
    n->kind = Kind::SqrtNegPart;
    n->lhs = f.node_;
    return ParametricFunction(std::move(n));
}

ParametricFunction ParametricFunction::density_of(ParametricFunction f, ParametricFunction b) {
    if (f.is_zero())
        return f;
    auto n = std::make_shared<Node>();
    n->kind = Kind::DensityOf;
    n->lhs = f.node_;
    n->rhs = b.node_;
    return ParametricFunction(std::move(n));
}

} // namespace gbfi
