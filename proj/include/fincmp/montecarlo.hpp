#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fincmp/estimators.hpp"
#include "fincmp/model.hpp"
#include "fincmp/student_t.hpp"

namespace fincmp {

/// Thrown when a statistic is undefined for the given input (e.g. a t test
/// over identical differences), so that the condition is reported instead of
/// silently mapped to a value.
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Which sample variance the simulation reports.
enum class VarianceTarget {
    /// Pool all n * N evaluations of g_i^2(z) and H_i(z) and take their
    /// sample variances.
    PerObservation,
    /// Compute the two estimators per replicate and take sample variances
    /// across the N replicates, scaled by n (the CLT normalization).
    EstimatorAcrossReplicates,
};

struct SimulationConfig {
    int n = 100;              ///< samples per replicate
    int n_replicates = 200;   ///< replicates per simulation
    int n_trials = 50;        ///< simulations per t test
    std::uint64_t master_seed = 1;
    VarianceTarget variance_target = VarianceTarget::PerObservation;

    void validate() const {
        if (n < 2 || n_replicates < 2 || n_trials < 2) {
            throw std::invalid_argument(
                "SimulationConfig: n, n_replicates and n_trials must all be >= 2");
        }
    }
};

struct SimulationResult {
    double var_e_g2 = 0.0;
    double var_e_h = 0.0;
    double diff = 0.0;                  ///< var_e_g2 - var_e_h
    std::optional<double> ratio;        ///< var_e_g2 / var_e_h, absent when var_e_h == 0
    std::optional<double> p_value;      ///< one-sided t test, full experiments only
    std::vector<double> per_trial_diffs;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> seeds_used;  ///< derived seeds, one per unit of work
};

// --- Seed derivation ---------------------------------------------------------

namespace detail {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Splittable hash of (base, index): independent streams for parallel units,
/// reproducible from the master seed alone.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t base,
                                                  std::uint64_t index) noexcept {
    return detail::splitmix64(detail::splitmix64(base) + index);
}

// --- Sample variance ----------------------------------------------------------

/// Streaming mean/variance accumulator (Welford update). The update is exact
/// for constant input, so a constant stream reports a sample variance of
/// exactly zero.
class RunningVariance {
public:
    void add(double x) noexcept {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    [[nodiscard]] std::int64_t count() const noexcept { return count_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }

    /// Unbiased sample variance with divisor count - 1.
    [[nodiscard]] double sample_variance() const {
        if (count_ < 2) {
            throw std::invalid_argument("RunningVariance: need at least 2 values, got " +
                                        std::to_string(count_));
        }
        return m2_ / static_cast<double>(count_ - 1);
    }

private:
    std::int64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Unbiased sample variance with divisor n - 1.
/// @throws std::invalid_argument for fewer than 2 values
[[nodiscard]] inline double sample_variance(std::span<const double> xs) {
    RunningVariance acc;
    for (double x : xs) acc.add(x);
    return acc.sample_variance();
}

// --- Hypothesis test ----------------------------------------------------------

/**
 * @brief One-sample, one-sided t test of H0: mean <= 0 against H1: mean > 0.
 *
 * Returns the p value 1 - CDF_t(mean / (sd / sqrt(m)); m - 1).
 *
 * @throws std::invalid_argument for fewer than 2 differences
 * @throws DegenerateInputError when all differences are identical
 */
[[nodiscard]] inline double one_sided_t_test(std::span<const double> diffs) {
    if (diffs.size() < 2) {
        throw std::invalid_argument("one_sided_t_test: need at least 2 differences, got " +
                                    std::to_string(diffs.size()));
    }
    RunningVariance acc;
    for (double d : diffs) acc.add(d);
    const double var = acc.sample_variance();
    if (var == 0.0) {
        throw DegenerateInputError(
            "one_sided_t_test: all differences are identical, the t statistic is undefined");
    }
    const double m = static_cast<double>(diffs.size());
    const double t = acc.mean() / std::sqrt(var / m);
    return student_t_upper_tail(t, m - 1.0);
}

// --- Simulations ---------------------------------------------------------------

namespace detail {

inline void require_model_shape(const Model& model, const SimulationConfig& cfg) {
    if (model.n_obs() != cfg.n) {
        throw std::invalid_argument("run_simulation: model has n_obs " +
                                    std::to_string(model.n_obs()) + " but config asks for n " +
                                    std::to_string(cfg.n));
    }
}

// One simulation: N replicates of n samples drawn from seeds derived off
// base_seed, reported per cfg.variance_target.
[[nodiscard]] inline SimulationResult simulate_with_base(const Model& model,
                                                         const SimulationConfig& cfg,
                                                         std::uint64_t base_seed) {
    const int n = cfg.n;
    std::vector<double> buf(static_cast<std::size_t>(n));

    SimulationResult result;
    result.master_seed = cfg.master_seed;
    result.seeds_used.reserve(static_cast<std::size_t>(cfg.n_replicates));

    RunningVariance acc_g2;
    RunningVariance acc_h;
    for (int rep = 0; rep < cfg.n_replicates; ++rep) {
        const std::uint64_t seed = derive_seed(base_seed, static_cast<std::uint64_t>(rep));
        result.seeds_used.push_back(seed);
        std::mt19937_64 rng(seed);
        model.sample(rng, buf);

        if (cfg.variance_target == VarianceTarget::PerObservation) {
            for (int i = 0; i < n; ++i) {
                const double g = model.score(i, buf[static_cast<std::size_t>(i)]);
                acc_g2.add(g * g);
                acc_h.add(model.hessian(i, buf[static_cast<std::size_t>(i)]));
            }
        } else {
            acc_g2.add(g_bar(model, buf));
            acc_h.add(h_bar(model, buf));
        }
    }

    const double scale =
        cfg.variance_target == VarianceTarget::EstimatorAcrossReplicates ? n : 1.0;
    result.var_e_g2 = scale * acc_g2.sample_variance();
    result.var_e_h = scale * acc_h.sample_variance();
    result.diff = result.var_e_g2 - result.var_e_h;
    if (result.var_e_h > 0.0) result.ratio = result.var_e_g2 / result.var_e_h;
    return result;
}

}  // namespace detail

/**
 * @brief One simulation: n_replicates datasets of n samples, sample variances
 * of the two statistics per cfg.variance_target, their difference and (when
 * defined) ratio. Deterministic given (model, cfg).
 */
[[nodiscard]] inline SimulationResult run_simulation(const Model& model,
                                                     const SimulationConfig& cfg) {
    cfg.validate();
    detail::require_model_shape(model, cfg);
    return detail::simulate_with_base(model, cfg, cfg.master_seed);
}

/**
 * @brief The full protocol: n_trials independent simulations with seeds
 * derived from the master seed, a one-sided t test over the trial
 * differences, and trial-averaged variances.
 *
 * @throws DegenerateInputError if the trial differences are all identical
 */
[[nodiscard]] inline SimulationResult run_full_experiment(const Model& model,
                                                          const SimulationConfig& cfg) {
    cfg.validate();
    detail::require_model_shape(model, cfg);

    SimulationResult result;
    result.master_seed = cfg.master_seed;
    result.per_trial_diffs.reserve(static_cast<std::size_t>(cfg.n_trials));
    result.seeds_used.reserve(static_cast<std::size_t>(cfg.n_trials));

    double sum_g2 = 0.0;
    double sum_h = 0.0;
    for (int k = 0; k < cfg.n_trials; ++k) {
        const std::uint64_t trial_seed =
            derive_seed(cfg.master_seed, static_cast<std::uint64_t>(k));
        result.seeds_used.push_back(trial_seed);
        const SimulationResult trial = detail::simulate_with_base(model, cfg, trial_seed);
        result.per_trial_diffs.push_back(trial.diff);
        sum_g2 += trial.var_e_g2;
        sum_h += trial.var_e_h;
    }

    result.var_e_g2 = sum_g2 / cfg.n_trials;
    result.var_e_h = sum_h / cfg.n_trials;
    result.diff = result.var_e_g2 - result.var_e_h;
    if (result.var_e_h > 0.0) result.ratio = result.var_e_g2 / result.var_e_h;

    try {
        result.p_value = one_sided_t_test(result.per_trial_diffs);
    } catch (const DegenerateInputError& e) {
        throw DegenerateInputError("run_full_experiment: " + std::string(e.what()));
    }
    return result;
}

}  // namespace fincmp
