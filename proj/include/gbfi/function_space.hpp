#pragma once

#include <span>
#include <vector>

#include "gbfi/parametric_function.hpp"
#include "gbfi/time_grid.hpp"

namespace gbfi {

// Mean function a (a(0) = 0, finite variation) and variance function b
// (b(0) = 0, strictly increasing) of the underlying Gaussian process.
struct MeanVarPair {
    ParametricFunction a;
    ParametricFunction b;
};

// Element w of the reproducing-kernel space: w(t) = int_0^t Dw db, stored by
// its velocity Dw with respect to the clock b.
struct HPrimeElement {
    ParametricFunction density;
};

inline ParametricFunction apply_D(const HPrimeElement& w) { return w.density; }
inline HPrimeElement apply_D_inverse(ParametricFunction z) { return HPrimeElement{std::move(z)}; }

// (w1 * w2)(t) = int_0^t Dw1 Dw2 db
inline HPrimeElement odot(const HPrimeElement& w, const HPrimeElement& k) {
    return HPrimeElement{ParametricFunction::product(w.density, k.density)};
}

inline HPrimeElement combine(double alpha, const HPrimeElement& w, double beta,
                             const HPrimeElement& k) {
    return HPrimeElement{ParametricFunction::sum(ParametricFunction::scaled(alpha, w.density),
                                                 ParametricFunction::scaled(beta, k.density))};
}

// One realized trajectory on a time grid: values[j] = x(t_j), x(0) = 0.
struct SamplePath {
    TimeGrid grid;
    std::vector<double> values;
};

// Discretization of the space C'_{a,b} on a fixed grid. Every inner product
// is the midpoint rule in the clock b: sums over cells of samples at the cell
// midpoint weighted by db_j = b(t_{j+1}) - b(t_j). The stochastic pairing
// pwz() uses the same midpoint samples against the path increments, so the
// discrete Gaussian law of pwz matches the quadrature norm exactly.
class FunctionSpace {
public:
    FunctionSpace(MeanVarPair pair, TimeGrid grid);

    const TimeGrid& grid() const { return grid_; }
    const MeanVarPair& pair() const { return pair_; }
    int cells() const { return grid_.cells(); }
    double horizon() const { return grid_.horizon(); }
    double b_total() const { return b_total_; }

    std::span<const double> db_weights() const { return db_; }
    double db(int j) const { return db_[static_cast<std::size_t>(j)]; }
    double da(int j) const { return da_[static_cast<std::size_t>(j)]; }
    double mid(int j) const { return grid_.mid(j); }
    double dt(int j) const { return grid_.dt(j); }

    // int |a'|^2 d|a| over [0, T]; must be finite for a valid mean
    double mean_condition_value() const { return mean_condition_; }

    // the mean function as an element: density a'(t)/b'(t)
    const HPrimeElement& mean_element() const { return mean_element_; }

    // midpoint samples of an arbitrary density
    std::vector<double> density_mid(const ParametricFunction& z) const;
    std::vector<double> density_mid(const HPrimeElement& w) const { return density_mid(w.density); }

    // w at the grid nodes (cumulative midpoint rule, w(0) = 0)
    std::vector<double> element_nodes(const HPrimeElement& w) const;
    // w at the cell midpoints, consistent with element_nodes
    std::vector<double> element_mids(const HPrimeElement& w) const;

    // (w1, w2) = int Dw1 Dw2 db
    double inner(const HPrimeElement& w1, const HPrimeElement& w2) const;
    double norm_sq(const HPrimeElement& w) const { return inner(w, w); }
    // (w, a) = int Dw Da db = int Dw a' dt
    double pair_with_mean(const HPrimeElement& w) const { return inner(w, mean_element_); }
    // same pairing computed through dt: int Dw a' dt
    double mean_pairing(const HPrimeElement& w) const;
    // (u, v) in L^2 of d[b + |a|]: int u v (db + |a'| dt)
    double lab_inner(const ParametricFunction& u, const ParametricFunction& v) const;
    // int_0^T w(t)^2 db(t) with the same cell values element_mids() produces
    double integral_sq_values_db(const HPrimeElement& w) const;

    // stochastic pairing <w, x>: sum_j Dw(m_j) (x_{j+1} - x_j)
    double pwz(const HPrimeElement& w, const SamplePath& x) const;
    double pwz_table(std::span<const double> density_mid, const SamplePath& x) const;

    const std::vector<double>& a_nodes() const { return a_nodes_; }

private:
    MeanVarPair pair_;
    TimeGrid grid_;
    double b_total_ = 0.0;
    double mean_condition_ = 0.0;
    std::vector<double> db_, da_, a_nodes_;
    HPrimeElement mean_element_;
};

// Positive cell weights db_j = b(t_{j+1}) - b(t_j); throws NonMonotoneVariance
// if b fails to increase strictly across the grid.
std::vector<double> db_weights(const TimeGrid& grid, const ParametricFunction& b);

// int |a'|^2 d|a| by the midpoint rule; throws NonFinite if it blows up.
double validate_mean_condition(const ParametricFunction& a, const TimeGrid& grid);

} // namespace gbfi
