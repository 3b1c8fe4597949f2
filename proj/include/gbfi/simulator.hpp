#pragma once

#include <vector>

#include "gbfi/function_space.hpp"
#include "gbfi/rng.hpp"

namespace gbfi {

// Exact sampling of the process by independent Gaussian increments:
// x(t_{j+1}) - x(t_j) ~ N(da_j, db_j).
SamplePath sample_path_increments(const FunctionSpace& space, RngConfig rng);

// Orthonormal eigenbasis of the covariance operator in the clock b:
//   e_m(t)  = sqrt(2 b(T)) / ((m - 1/2) pi) * sin((m - 1/2) pi b(t) / b(T))
//   lam_m   = (b(T) / ((m - 1/2) pi))^2
// with De_m = sqrt(2 / b(T)) cos((m - 1/2) pi b(t) / b(T)).
class EigenSystem {
public:
    EigenSystem(const FunctionSpace& space, int truncation);

    int truncation() const { return truncation_; }
    double eigenvalue(int m) const; // m = 1..M
    HPrimeElement eigenfunction(int m) const;
    // e_m(t_j), exact closed form at the grid nodes
    const std::vector<double>& basis_nodes(int m) const;

private:
    int truncation_;
    std::vector<double> eigenvalues_;
    std::vector<HPrimeElement> elements_;
    std::vector<std::vector<double>> node_values_;
};

HPrimeElement eigenfunction(int m, const FunctionSpace& space);
double eigenvalue(int m, const FunctionSpace& space);

// Truncated Karhunen-Loeve sampling: x(t) = a(t) + sum_m xi_m e_m(t).
SamplePath sample_path_series(const FunctionSpace& space, const EigenSystem& basis, RngConfig rng);
SamplePath sample_path_series(const FunctionSpace& space, RngConfig rng, int truncation);

// Covariance operator B on elements: D(Bw)(t) = int_t^T w db. Discretized so
// that (w, Bw) telescopes exactly to integral_sq_values_db(w).
HPrimeElement apply_B(const HPrimeElement& w, const FunctionSpace& space);

} // namespace gbfi
