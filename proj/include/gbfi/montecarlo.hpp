#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gbfi/rng.hpp"
#include "gbfi/simulator.hpp"
#include "gbfi/variation.hpp"

namespace gbfi {

// Sample mean with per-component standard errors.
struct McEstimate {
    Complex mean{0.0, 0.0};
    double stderr_re = 0.0;
    double stderr_im = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;

    double stderr_max() const { return stderr_re > stderr_im ? stderr_re : stderr_im; }
};

// Statistical check: estimate vs reference, z = max of the component
// z-scores, pass when z <= z_max.
struct StatReport {
    std::string name;
    McEstimate estimate;
    Complex reference{0.0, 0.0};
    double z = 0.0;
    double z_max = 4.0;
    bool pass = false;
    bool retried = false;
};

StatReport make_stat_report(std::string name, McEstimate estimate, Complex reference,
                            double z_max);

struct BatchOptions {
    std::size_t n_paths = 100000;
    std::uint64_t seed = 0;
    int threads = 0; // <= 0: pick automatically
};

// Per-slot accumulation of a batch: mean and per-component sample variance.
struct SlotStats {
    Complex mean{0.0, 0.0};
    double var_re = 0.0;
    double var_im = 0.0;
    std::size_t n = 0;

    McEstimate estimate(std::uint64_t seed) const;
};

using PathGenerator = std::function<SamplePath(const FunctionSpace&, RngConfig)>;

// Evaluates kernel(i, x1, x2, slots) for draws i = 0..n_paths-1, where x1 and
// x2 are independent paths on streams 2i and 2i+1. Work is split into fixed
// 256-draw blocks claimed by worker threads; block partials are reduced
// sequentially in block order, so the result is a pure function of
// (seed, n_paths) regardless of the thread count.
std::vector<SlotStats> run_pair_batch(
    const FunctionSpace& space, const BatchOptions& options, int n_slots, bool need_second_path,
    const std::function<void(std::size_t, const SamplePath&, const SamplePath&, Complex*)>& kernel,
    const PathGenerator& generator = {});

// Plain Monte-Carlo expectation of a path functional.
McEstimate mc_expectation(
    const FunctionSpace& space, const BatchOptions& options, bool need_second_path,
    const std::function<Complex(std::size_t, const SamplePath&, const SamplePath&)>& functional);

// Sample mean and variance of <w, x> against the Gaussian law
// N((w, a), ||w||^2): component 1 checks the mean, component 2 the variance.
StatReport verify_pwz_law(const HPrimeElement& w, const FunctionSpace& space,
                          const BatchOptions& options, double z_max);

// Statistical check paired with the closed-form equality it estimates.
struct VerifierResult {
    StatReport stat;
    IdentityReport closed_form;
};

// Translation of the first path argument by element w0:
// E[F(x + w0)] = exp{-||w0||^2/2 - (w0, a)} E[F(x) e^{<w0, x>}]
// checked pathwise with common random numbers plus in closed form.
VerifierResult verify_translation(const DiscreteMeasure& f, const OperatorPair& ops,
                                  const HPrimeElement& w0, const FunctionSpace& space,
                                  const BatchOptions& options, double z_max,
                                  double closed_tolerance);

// Integration by parts: E[dF(x|g)] = E[F(x) sum_j <g_j, x_j>] - sum_j (g_j, a) E[F(x)],
// with both sides also compared in closed form. The scaled variant evaluates
// F and the variation at (rho_1 x1, rho_2 x2) along (rho_1 g1, rho_2 g2).
VerifierResult verify_parts_basic(const DiscreteMeasure& f, const OperatorPair& ops,
                                  const DirectionPair& dirs, const FunctionSpace& space,
                                  const BatchOptions& options, double z_max,
                                  double closed_tolerance);
VerifierResult verify_parts_scaled(const DiscreteMeasure& f, const OperatorPair& ops,
                                   const DirectionPair& dirs, double rho1, double rho2,
                                   const FunctionSpace& space, const BatchOptions& options,
                                   double z_max, double closed_tolerance);

// J(lambda) by simulation at real lambda > 0 against the closed form, plus
// the exact equality analytic_J(-i q) = feynman_integral on the ray.
struct ContinuationResult {
    std::vector<StatReport> lambda_checks;
    IdentityReport ray_check;
};

ContinuationResult verify_continuation(const DiscreteMeasure& f, const OperatorPair& ops,
                                       const FeynmanParams& params,
                                       const std::vector<std::pair<double, double>>& lambdas,
                                       const FunctionSpace& space, const BatchOptions& options,
                                       double z_max);

} // namespace gbfi
