#include "gbfi/function_space.hpp"

#include <cmath>

namespace gbfi {

std::vector<double> db_weights(const TimeGrid& grid, const ParametricFunction& b) {
    const int n = grid.cells();
    std::vector<double> db(static_cast<std::size_t>(n));
    double prev = b.value(grid.node(0));
    for (int j = 0; j < n; ++j) {
        double next = b.value(grid.node(j + 1));
        double w = next - prev;
        if (!(w > 0.0) || !std::isfinite(w))
            throw NonMonotoneVariance("variance function must increase strictly on every cell");
        db[static_cast<std::size_t>(j)] = w;
        prev = next;
    }
    return db;
}

double validate_mean_condition(const ParametricFunction& a, const TimeGrid& grid) {
    double acc = 0.0;
    for (int j = 0; j < grid.cells(); ++j) {
        double ap = a.derivative(grid.mid(j));
        acc += std::abs(ap) * ap * ap * grid.dt(j);
    }
    if (!std::isfinite(acc))
        throw NonFinite("int |a'|^2 d|a| is not finite on this grid");
    return acc;
}

FunctionSpace::FunctionSpace(MeanVarPair pair, TimeGrid grid)
    : pair_(std::move(pair)), grid_(std::move(grid)),
      mean_element_{ParametricFunction::density_of(pair_.a, pair_.b)} {
    if (std::abs(pair_.b.value(0.0)) > 1e-12)
        throw InvalidParameter("variance function must vanish at t = 0");
    if (std::abs(pair_.a.value(0.0)) > 1e-12)
        throw InvalidParameter("mean function must vanish at t = 0");
    db_ = gbfi::db_weights(grid_, pair_.b);
    const int n = grid_.cells();
    // densities are only ever sampled at cell midpoints, so that is where the
    // clock speed must be positive; b' may degenerate at the endpoints (b = t^2)
    for (int j = 0; j < n; ++j) {
        double bp = pair_.b.derivative(grid_.mid(j));
        if (!(bp > 0.0))
            throw NonMonotoneVariance("variance function needs b' > 0 at every cell midpoint");
    }
    b_total_ = pair_.b.value(grid_.horizon()) - pair_.b.value(0.0);
    da_.resize(static_cast<std::size_t>(n));
    a_nodes_.resize(static_cast<std::size_t>(n) + 1);
    double prev = pair_.a.value(0.0);
    a_nodes_[0] = prev;
    for (int j = 0; j < n; ++j) {
        double next = pair_.a.value(grid_.node(j + 1));
        da_[static_cast<std::size_t>(j)] = next - prev;
        a_nodes_[static_cast<std::size_t>(j) + 1] = next;
        prev = next;
    }
    mean_condition_ = validate_mean_condition(pair_.a, grid_);
}

std::vector<double> FunctionSpace::density_mid(const ParametricFunction& z) const {
    const int n = cells();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(j)] = z.value(mid(j));
    return out;
}

std::vector<double> FunctionSpace::element_nodes(const HPrimeElement& w) const {
    const int n = cells();
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    out[0] = 0.0;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        acc += w.density.value(mid(j)) * db(j);
        out[static_cast<std::size_t>(j) + 1] = acc;
    }
    return out;
}

std::vector<double> FunctionSpace::element_mids(const HPrimeElement& w) const {
    const int n = cells();
    std::vector<double> out(static_cast<std::size_t>(n));
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double step = w.density.value(mid(j)) * db(j);
        out[static_cast<std::size_t>(j)] = acc + 0.5 * step;
        acc += step;
    }
    return out;
}

double FunctionSpace::inner(const HPrimeElement& w1, const HPrimeElement& w2) const {
    if (w1.density.is_zero() || w2.density.is_zero())
        return 0.0;
    double acc = 0.0;
    for (int j = 0; j < cells(); ++j) {
        double m = mid(j);
        acc += w1.density.value(m) * w2.density.value(m) * db(j);
    }
    if (!std::isfinite(acc))
        throw NonFinite("inner product quadrature is not finite");
    return acc;
}

double FunctionSpace::mean_pairing(const HPrimeElement& w) const {
    if (w.density.is_zero() || pair_.a.is_zero())
        return 0.0;
    double acc = 0.0;
    for (int j = 0; j < cells(); ++j) {
        double m = mid(j);
        acc += w.density.value(m) * pair_.a.derivative(m) * dt(j);
    }
    return acc;
}

double FunctionSpace::lab_inner(const ParametricFunction& u, const ParametricFunction& v) const {
    if (u.is_zero() || v.is_zero())
        return 0.0;
    double acc = 0.0;
    for (int j = 0; j < cells(); ++j) {
        double m = mid(j);
        double weight = db(j) + std::abs(pair_.a.derivative(m)) * dt(j);
        acc += u.value(m) * v.value(m) * weight;
    }
    if (!std::isfinite(acc))
        throw NonFinite("L^2(a,b) quadrature is not finite");
    return acc;
}

double FunctionSpace::integral_sq_values_db(const HPrimeElement& w) const {
    std::vector<double> vals = element_mids(w);
    double acc = 0.0;
    for (int j = 0; j < cells(); ++j)
        acc += vals[static_cast<std::size_t>(j)] * vals[static_cast<std::size_t>(j)] * db(j);
    return acc;
}

double FunctionSpace::pwz(const HPrimeElement& w, const SamplePath& x) const {
    if (!x.grid.same_as(grid_))
        throw GridMismatch("sample path lives on a different grid");
    double acc = 0.0;
    for (int j = 0; j < cells(); ++j) {
        acc += w.density.value(mid(j)) *
               (x.values[static_cast<std::size_t>(j) + 1] - x.values[static_cast<std::size_t>(j)]);
    }
    return acc;
}

double FunctionSpace::pwz_table(std::span<const double> density_mid, const SamplePath& x) const {
    if (x.values.size() != density_mid.size() + 1)
        throw GridMismatch("density table and sample path disagree on the grid size");
    double acc = 0.0;
    const double* v = x.values.data();
    for (std::size_t j = 0; j < density_mid.size(); ++j)
        acc += density_mid[j] * (v[j + 1] - v[j]);
    return acc;
}

} // namespace gbfi
