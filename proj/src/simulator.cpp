#include "gbfi/simulator.hpp"

#include <cmath>
#include <numbers>

namespace gbfi {

SamplePath sample_path_increments(const FunctionSpace& space, RngConfig rng) {
    const int n = space.cells();
    GaussianStream gauss(rng);
    std::vector<double> values(static_cast<std::size_t>(n) + 1);
    values[0] = 0.0;
    for (int j = 0; j < n; ++j) {
        values[static_cast<std::size_t>(j) + 1] =
            values[static_cast<std::size_t>(j)] + space.da(j) +
            std::sqrt(space.db(j)) * gauss.next();
    }
    return SamplePath{space.grid(), std::move(values)};
}

EigenSystem::EigenSystem(const FunctionSpace& space, int truncation) : truncation_(truncation) {
    if (truncation < 1)
        throw InvalidParameter("series truncation must be at least 1");
    const double b_total = space.b_total();
    const ParametricFunction& b = space.pair().b;
    const double horizon = space.horizon();
    const int n = space.cells();
    eigenvalues_.reserve(static_cast<std::size_t>(truncation));
    elements_.reserve(static_cast<std::size_t>(truncation));
    node_values_.reserve(static_cast<std::size_t>(truncation));
    for (int m = 1; m <= truncation; ++m) {
        double kappa = (static_cast<double>(m) - 0.5) * std::numbers::pi;
        eigenvalues_.push_back((b_total / kappa) * (b_total / kappa));
        double amp = std::sqrt(2.0 * b_total) / kappa;
        ParametricFunction shape =
            ParametricFunction::scaled_sine_b_ratio(amp, kappa, b, horizon);
        elements_.push_back(HPrimeElement{ParametricFunction::density_of(shape, b)});
        std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
        for (int j = 0; j <= n; ++j)
            nodes[static_cast<std::size_t>(j)] = shape.value(space.grid().node(j));
        node_values_.push_back(std::move(nodes));
    }
}

double EigenSystem::eigenvalue(int m) const {
    if (m < 1 || m > truncation_)
        throw InvalidParameter("eigenvalue index out of range");
    return eigenvalues_[static_cast<std::size_t>(m) - 1];
}

HPrimeElement EigenSystem::eigenfunction(int m) const {
    if (m < 1 || m > truncation_)
        throw InvalidParameter("eigenfunction index out of range");
    return elements_[static_cast<std::size_t>(m) - 1];
}

const std::vector<double>& EigenSystem::basis_nodes(int m) const {
    if (m < 1 || m > truncation_)
        throw InvalidParameter("eigenfunction index out of range");
    return node_values_[static_cast<std::size_t>(m) - 1];
}

HPrimeElement eigenfunction(int m, const FunctionSpace& space) {
    return EigenSystem(space, m).eigenfunction(m);
}

double eigenvalue(int m, const FunctionSpace& space) {
    double kappa = (static_cast<double>(m) - 0.5) * std::numbers::pi;
    double r = space.b_total() / kappa;
    return r * r;
}

SamplePath sample_path_series(const FunctionSpace& space, const EigenSystem& basis,
                              RngConfig rng) {
    const int n = space.cells();
    GaussianStream gauss(rng);
    std::vector<double> values = space.a_nodes();
    for (int m = 1; m <= basis.truncation(); ++m) {
        double xi = gauss.next();
        const std::vector<double>& e = basis.basis_nodes(m);
        for (int j = 0; j <= n; ++j)
            values[static_cast<std::size_t>(j)] += xi * e[static_cast<std::size_t>(j)];
    }
    values[0] = 0.0; // a(0) = 0 and e_m(0) = 0
    return SamplePath{space.grid(), std::move(values)};
}

SamplePath sample_path_series(const FunctionSpace& space, RngConfig rng, int truncation) {
    EigenSystem basis(space, truncation);
    return sample_path_series(space, basis, rng);
}

HPrimeElement apply_B(const HPrimeElement& w, const FunctionSpace& space) {
    const int n = space.cells();
    std::vector<double> mids = space.element_mids(w);
    // D(Bw)(t_j) = int_{t_j}^T w db as a tail sum of cell values; linear
    // interpolation then reproduces the midpoint rule exactly, which makes
    // (w, Bw) telescope to int w^2 db without discretization error.
    std::vector<double> tails(static_cast<std::size_t>(n) + 1);
    tails[static_cast<std::size_t>(n)] = 0.0;
    for (int j = n - 1; j >= 0; --j) {
        tails[static_cast<std::size_t>(j)] = tails[static_cast<std::size_t>(j) + 1] +
                                             mids[static_cast<std::size_t>(j)] * space.db(j);
    }
    return HPrimeElement{ParametricFunction::grid_sampled(space.grid(), std::move(tails))};
}

} // namespace gbfi
