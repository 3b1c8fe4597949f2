#include "gbfi/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace gbfi {

namespace {

constexpr std::size_t kBlock = 256;

int resolve_threads(int requested) {
    if (requested > 0)
        return requested;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0)
        hw = 1;
    return static_cast<int>(hw > 8 ? 8 : hw);
}

double component_z(double mean, double reference, double se) {
    double diff = std::abs(mean - reference);
    if (se > 0.0)
        return diff / se;
    return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

} // namespace

McEstimate SlotStats::estimate(std::uint64_t seed) const {
    McEstimate out;
    out.mean = mean;
    out.n = n;
    out.seed = seed;
    if (n > 0) {
        out.stderr_re = std::sqrt(var_re / static_cast<double>(n));
        out.stderr_im = std::sqrt(var_im / static_cast<double>(n));
    }
    return out;
}

StatReport make_stat_report(std::string name, McEstimate estimate, Complex reference,
                            double z_max) {
    StatReport report;
    report.name = std::move(name);
    report.estimate = estimate;
    report.reference = reference;
    report.z_max = z_max;
    double z_re = component_z(estimate.mean.real(), reference.real(), estimate.stderr_re);
    double z_im = component_z(estimate.mean.imag(), reference.imag(), estimate.stderr_im);
    report.z = z_re > z_im ? z_re : z_im;
    report.pass = report.z <= z_max;
    return report;
}

std::vector<SlotStats> run_pair_batch(
    const FunctionSpace& space, const BatchOptions& options, int n_slots, bool need_second_path,
    const std::function<void(std::size_t, const SamplePath&, const SamplePath&, Complex*)>& kernel,
    const PathGenerator& generator) {
    if (options.n_paths == 0)
        throw InvalidParameter("Monte-Carlo batch needs at least one draw");
    if (n_slots <= 0)
        throw InvalidParameter("Monte-Carlo batch needs at least one slot");
    const std::size_t n = options.n_paths;
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    const std::size_t stride = static_cast<std::size_t>(n_slots) * 4;
    std::vector<double> partials(n_blocks * stride, 0.0);

    PathGenerator gen = generator;
    if (!gen)
        gen = [](const FunctionSpace& sp, RngConfig rng) { return sample_path_increments(sp, rng); };

    std::atomic<std::size_t> next_block{0};
    auto work = [&]() {
        std::vector<Complex> slots(static_cast<std::size_t>(n_slots));
        SamplePath empty{space.grid(),
                         std::vector<double>(static_cast<std::size_t>(space.cells()) + 1, 0.0)};
        for (std::size_t blk = next_block.fetch_add(1); blk < n_blocks;
             blk = next_block.fetch_add(1)) {
            double* acc = partials.data() + blk * stride;
            const std::size_t lo = blk * kBlock;
            const std::size_t hi = std::min(n, lo + kBlock);
            for (std::size_t i = lo; i < hi; ++i) {
                SamplePath x1 = gen(space, RngConfig{options.seed, 2 * i});
                if (need_second_path) {
                    SamplePath x2 = gen(space, RngConfig{options.seed, 2 * i + 1});
                    kernel(i, x1, x2, slots.data());
                } else {
                    kernel(i, x1, empty, slots.data());
                }
                for (int s = 0; s < n_slots; ++s) {
                    double re = slots[static_cast<std::size_t>(s)].real();
                    double im = slots[static_cast<std::size_t>(s)].imag();
                    acc[static_cast<std::size_t>(s) * 4 + 0] += re;
                    acc[static_cast<std::size_t>(s) * 4 + 1] += im;
                    acc[static_cast<std::size_t>(s) * 4 + 2] += re * re;
                    acc[static_cast<std::size_t>(s) * 4 + 3] += im * im;
                }
            }
        }
    };

    int n_threads = resolve_threads(options.threads);
    if (static_cast<std::size_t>(n_threads) > n_blocks)
        n_threads = static_cast<int>(n_blocks);
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(work);
        for (std::thread& t : pool)
            t.join();
    }

    // reduce block partials in block order: independent of thread schedule
    std::vector<SlotStats> out(static_cast<std::size_t>(n_slots));
    for (int s = 0; s < n_slots; ++s) {
        double sum_re = 0.0, sum_im = 0.0, sq_re = 0.0, sq_im = 0.0;
        for (std::size_t blk = 0; blk < n_blocks; ++blk) {
            const double* acc = partials.data() + blk * stride + static_cast<std::size_t>(s) * 4;
            sum_re += acc[0];
            sum_im += acc[1];
            sq_re += acc[2];
            sq_im += acc[3];
        }
        SlotStats& stats = out[static_cast<std::size_t>(s)];
        stats.n = n;
        double dn = static_cast<double>(n);
        stats.mean = Complex(sum_re / dn, sum_im / dn);
        if (n > 1) {
            stats.var_re = std::max(0.0, (sq_re - dn * stats.mean.real() * stats.mean.real()) /
                                             (dn - 1.0));
            stats.var_im = std::max(0.0, (sq_im - dn * stats.mean.imag() * stats.mean.imag()) /
                                             (dn - 1.0));
        }
    }
    return out;
}

McEstimate mc_expectation(
    const FunctionSpace& space, const BatchOptions& options, bool need_second_path,
    const std::function<Complex(std::size_t, const SamplePath&, const SamplePath&)>& functional) {
    auto stats = run_pair_batch(space, options, 1, need_second_path,
                                [&](std::size_t i, const SamplePath& x1, const SamplePath& x2,
                                    Complex* slots) { slots[0] = functional(i, x1, x2); });
    return stats[0].estimate(options.seed);
}

StatReport verify_pwz_law(const HPrimeElement& w, const FunctionSpace& space,
                          const BatchOptions& options, double z_max) {
    std::vector<double> table = space.density_mid(w);
    auto stats = run_pair_batch(space, options, 1, false,
                                [&](std::size_t, const SamplePath& x1, const SamplePath&,
                                    Complex* slots) {
                                    slots[0] = Complex(space.pwz_table(table, x1), 0.0);
                                });
    const SlotStats& s = stats[0];
    double mean_ref = space.pair_with_mean(w);
    double var_ref = space.norm_sq(w);
    // component 1: sample mean; component 2: sample variance with its
    // Gaussian standard error s^2 sqrt(2 / (n - 1))
    McEstimate packed;
    packed.mean = Complex(s.mean.real(), s.var_re);
    packed.stderr_re = std::sqrt(s.var_re / static_cast<double>(s.n));
    packed.stderr_im = s.var_re * std::sqrt(2.0 / (static_cast<double>(s.n) - 1.0));
    packed.n = s.n;
    packed.seed = options.seed;
    return make_stat_report("pwz-law", packed, Complex(mean_ref, var_ref), z_max);
}

namespace {

struct AtomTable {
    Complex weight;
    std::vector<double> v1, v2; // A_j^{1/2} w_k at the midpoints
    double norm1 = 0.0, norm2 = 0.0;
    double mean1 = 0.0, mean2 = 0.0;   // (v_jk, a)
    double cross1 = 0.0, cross2 = 0.0; // (v_jk, g_j)
};

std::vector<AtomTable> build_tables(const DiscreteMeasure& f, const OperatorPair& ops,
                                    const DirectionPair* dirs, const FunctionSpace& space) {
    std::vector<AtomTable> tables;
    tables.reserve(f.atoms.size());
    const HPrimeElement& a = space.mean_element();
    for (const DiscreteMeasure::Atom& atom : f.atoms) {
        AtomTable t;
        t.weight = atom.weight;
        HPrimeElement v1 = ops.a1.root.apply(atom.element);
        HPrimeElement v2 = ops.a2.root.apply(atom.element);
        t.v1 = space.density_mid(v1);
        t.v2 = space.density_mid(v2);
        t.norm1 = space.norm_sq(v1);
        t.norm2 = space.norm_sq(v2);
        t.mean1 = space.inner(v1, a);
        t.mean2 = space.inner(v2, a);
        if (dirs != nullptr) {
            t.cross1 = space.inner(v1, dirs->g1);
            t.cross2 = space.inner(v2, dirs->g2);
        }
        tables.push_back(std::move(t));
    }
    return tables;
}

} // namespace

VerifierResult verify_translation(const DiscreteMeasure& f, const OperatorPair& ops,
                                  const HPrimeElement& w0, const FunctionSpace& space,
                                  const BatchOptions& options, double z_max,
                                  double closed_tolerance) {
    std::vector<AtomTable> atoms = build_tables(f, ops, nullptr, space);
    std::vector<double> w0_table = space.density_mid(w0);
    std::vector<double> w0_nodes = space.element_nodes(w0);
    double w0_norm = space.norm_sq(w0);
    double w0_mean = space.pair_with_mean(w0);
    double factor_exp = -0.5 * w0_norm - w0_mean;
    double factor = std::exp(factor_exp);
    std::vector<double> shift_pair(atoms.size()); // (v_k, w0)
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        double acc = 0.0;
        for (int j = 0; j < space.cells(); ++j)
            acc += atoms[k].v1[static_cast<std::size_t>(j)] *
                   w0.density.value(space.mid(j)) * space.db(j);
        shift_pair[k] = acc;
    }

    auto stats = run_pair_batch(
        space, options, 3, false,
        [&](std::size_t, const SamplePath& x1, const SamplePath&, Complex* slots) {
            SamplePath shifted{x1.grid, x1.values};
            for (std::size_t j = 0; j < shifted.values.size(); ++j)
                shifted.values[j] += w0_nodes[j];
            Complex lhs(0.0, 0.0), plain(0.0, 0.0);
            for (const AtomTable& t : atoms) {
                lhs += t.weight * std::exp(Complex(0.0, space.pwz_table(t.v1, shifted)));
                plain += t.weight * std::exp(Complex(0.0, space.pwz_table(t.v1, x1)));
            }
            Complex rhs = factor * plain * std::exp(space.pwz_table(w0_table, x1));
            slots[0] = lhs;
            slots[1] = rhs;
            slots[2] = lhs - rhs;
        });

    VerifierResult out;
    out.stat = make_stat_report("translation", stats[2].estimate(options.seed),
                                Complex(0.0, 0.0), z_max);

    // closed forms of both sides under the Gaussian law of the grid process
    Complex closed_lhs(0.0, 0.0), closed_rhs(0.0, 0.0);
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const AtomTable& t = atoms[k];
        Complex phi = std::exp(Complex(-0.5 * t.norm1, t.mean1 + shift_pair[k]));
        closed_lhs += t.weight * phi;
        closed_rhs += t.weight * factor *
                      std::exp(Complex(w0_mean + 0.5 * w0_norm - 0.5 * t.norm1,
                                       t.mean1 + shift_pair[k]));
    }
    out.closed_form =
        make_identity_report("translation-closed", closed_lhs, closed_rhs, closed_tolerance);
    return out;
}

VerifierResult verify_parts_scaled(const DiscreteMeasure& f, const OperatorPair& ops,
                                   const DirectionPair& dirs, double rho1, double rho2,
                                   const FunctionSpace& space, const BatchOptions& options,
                                   double z_max, double closed_tolerance) {
    if (!std::isfinite(rho1) || !std::isfinite(rho2))
        throw InvalidParameter("scaling factors must be finite");
    std::vector<AtomTable> atoms = build_tables(f, ops, &dirs, space);
    std::vector<double> g1_table = space.density_mid(dirs.g1);
    std::vector<double> g2_table = space.density_mid(dirs.g2);
    double g1_mean = space.pair_with_mean(dirs.g1);
    double g2_mean = space.pair_with_mean(dirs.g2);
    double mean_term = g1_mean + g2_mean;

    auto stats = run_pair_batch(
        space, options, 3, true,
        [&](std::size_t, const SamplePath& x1, const SamplePath& x2, Complex* slots) {
            Complex value(0.0, 0.0), variation(0.0, 0.0);
            for (const AtomTable& t : atoms) {
                double y1 = space.pwz_table(t.v1, x1);
                double y2 = space.pwz_table(t.v2, x2);
                Complex ek = std::exp(Complex(0.0, rho1 * y1 + rho2 * y2));
                value += t.weight * ek;
                variation += t.weight * Complex(0.0, rho1 * t.cross1 + rho2 * t.cross2) * ek;
            }
            double linear = space.pwz_table(g1_table, x1) + space.pwz_table(g2_table, x2);
            Complex rhs = value * linear - mean_term * value;
            slots[0] = variation;
            slots[1] = rhs;
            slots[2] = variation - rhs;
        });

    VerifierResult out;
    std::string name = (rho1 == 1.0 && rho2 == 1.0) ? "parts" : "parts-scaled";
    out.stat =
        make_stat_report(name, stats[2].estimate(options.seed), Complex(0.0, 0.0), z_max);

    // closed forms: E[e^{iY}] with Y = rho1 <v1,x1> + rho2 <v2,x2> and the
    // Gaussian moment identity E[Z e^{iY}] = (E[Z] + i Cov(Y, Z)) E[e^{iY}]
    Complex closed_lhs(0.0, 0.0), closed_rhs(0.0, 0.0);
    for (const AtomTable& t : atoms) {
        Complex phi = std::exp(Complex(-0.5 * (rho1 * rho1 * t.norm1 + rho2 * rho2 * t.norm2),
                                       rho1 * t.mean1 + rho2 * t.mean2));
        Complex slope(0.0, rho1 * t.cross1 + rho2 * t.cross2);
        closed_lhs += t.weight * slope * phi;
        closed_rhs += t.weight * (mean_term + slope) * phi - t.weight * mean_term * phi;
    }
    out.closed_form = make_identity_report(name + "-closed", closed_lhs, closed_rhs,
                                           closed_tolerance);
    return out;
}

VerifierResult verify_parts_basic(const DiscreteMeasure& f, const OperatorPair& ops,
                                  const DirectionPair& dirs, const FunctionSpace& space,
                                  const BatchOptions& options, double z_max,
                                  double closed_tolerance) {
    return verify_parts_scaled(f, ops, dirs, 1.0, 1.0, space, options, z_max, closed_tolerance);
}

ContinuationResult verify_continuation(const DiscreteMeasure& f, const OperatorPair& ops,
                                       const FeynmanParams& params,
                                       const std::vector<std::pair<double, double>>& lambdas,
                                       const FunctionSpace& space, const BatchOptions& options,
                                       double z_max) {
    validate_params(params);
    if (lambdas.empty())
        throw InvalidParameter("continuation check needs at least one lambda pair");
    for (const auto& [l1, l2] : lambdas)
        if (!(l1 > 0.0) || !(l2 > 0.0))
            throw InvalidParameter("continuation lambdas must be positive reals");

    std::vector<AtomTable> atoms = build_tables(f, ops, nullptr, space);
    const int n_lambda = static_cast<int>(lambdas.size());
    std::vector<double> r1(lambdas.size()), r2(lambdas.size());
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        r1[l] = 1.0 / std::sqrt(lambdas[l].first);
        r2[l] = 1.0 / std::sqrt(lambdas[l].second);
    }

    auto stats = run_pair_batch(
        space, options, n_lambda, true,
        [&](std::size_t, const SamplePath& x1, const SamplePath& x2, Complex* slots) {
            for (int l = 0; l < n_lambda; ++l)
                slots[l] = Complex(0.0, 0.0);
            for (const AtomTable& t : atoms) {
                double y1 = space.pwz_table(t.v1, x1);
                double y2 = space.pwz_table(t.v2, x2);
                for (int l = 0; l < n_lambda; ++l) {
                    std::size_t ul = static_cast<std::size_t>(l);
                    slots[l] += t.weight * std::exp(Complex(0.0, r1[ul] * y1 + r2[ul] * y2));
                }
            }
        });

    ContinuationResult out;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        Complex reference = analytic_J(f, ops, Complex(lambdas[l].first, 0.0),
                                       Complex(lambdas[l].second, 0.0), space);
        std::string name = "continuation(" + std::to_string(lambdas[l].first) + "," +
                           std::to_string(lambdas[l].second) + ")";
        out.lambda_checks.push_back(
            make_stat_report(std::move(name), stats[l].estimate(options.seed), reference, z_max));
    }
    Complex ray = analytic_J(f, ops, Complex(0.0, -params.q1), Complex(0.0, -params.q2), space);
    Complex direct = feynman_integral(f, ops, params, space);
    out.ray_check = make_identity_report("continuation-ray", ray, direct, 1e-12);
    return out;
}

} // namespace gbfi
