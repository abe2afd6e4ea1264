#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fincmp/moments.hpp"

namespace fincmp {

/// Score and Hessian z-derivatives evaluated at an observation's mean:
/// g(mu), g'(mu), g''(mu) and H(mu), H'(mu), H''(mu).
struct DerivBundle {
    double g0 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    double h0 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;

    [[nodiscard]] bool all_finite() const {
        return std::isfinite(g0) && std::isfinite(g1) && std::isfinite(g2) &&
               std::isfinite(h0) && std::isfinite(h1) && std::isfinite(h2);
    }
};

/**
 * @brief A scalar-parameter model for n independent observations.
 *
 * Observations are indexed 0..n_obs()-1. Every per-observation accessor is
 * evaluated at the true parameter value unless a theta argument says
 * otherwise. Instances are immutable after construction and safe to share
 * across threads; samplers take the caller's generator so each worker owns
 * its own stream.
 */
class Model {
public:
    Model(double theta_true, int n_obs, bool iid, bool symmetric)
        : theta_(theta_true), n_(n_obs), iid_(iid), symmetric_(symmetric) {
        if (n_obs < 1) {
            throw std::domain_error("Model: n_obs must be >= 1, got " + std::to_string(n_obs));
        }
    }
    virtual ~Model() = default;

    [[nodiscard]] double theta_true() const noexcept { return theta_; }
    [[nodiscard]] int n_obs() const noexcept { return n_; }
    [[nodiscard]] bool iid() const noexcept { return iid_; }
    [[nodiscard]] bool symmetric() const noexcept { return symmetric_; }

    /// E[z_i].
    [[nodiscard]] virtual double mean(int i) const = 0;
    /// Central moments of z_i through order 8.
    [[nodiscard]] virtual CentralMoments moments(int i) const = 0;
    /// log p_i(z | theta).
    [[nodiscard]] virtual double log_density(int i, double z, double theta) const = 0;
    /// d log p_i / d theta.
    [[nodiscard]] virtual double score_at(int i, double z, double theta) const = 0;
    /// d^2 log p_i / d theta^2.
    [[nodiscard]] virtual double hessian_at(int i, double z, double theta) const = 0;
    /// Score/Hessian z-derivative bundle at z = mean(i), theta = theta_true().
    [[nodiscard]] virtual DerivBundle derivs_at_mean(int i) const = 0;
    /// Draws one value per observation, in index order, into out (size n_obs()).
    virtual void sample(std::mt19937_64& rng, std::span<double> out) const = 0;

    [[nodiscard]] double score(int i, double z) const { return score_at(i, z, theta_); }
    [[nodiscard]] double hessian(int i, double z) const { return hessian_at(i, z, theta_); }

    /// Closed-form Fisher information number, when the family has one.
    [[nodiscard]] virtual std::optional<double> closed_form_fin() const { return std::nullopt; }

    /// Characteristic length scale of log p_i in the theta direction, used to
    /// size finite-difference steps for observation i.
    [[nodiscard]] virtual double theta_scale(int i) const {
        const double s = std::abs(theta_);
        return s > 0.0 ? s : std::sqrt(moments(i).m2);
    }

    [[nodiscard]] virtual std::string family_name() const = 0;

private:
    double theta_;
    int n_;
    bool iid_;
    bool symmetric_;
};

// --- Builtin families -------------------------------------------------------

/// N(mu, sigma2), theta = mu, sigma2 known.
struct NormalMean {
    double mu = 0.0;
    double sigma2 = 1.0;
};

/// N(mu, sigma2), theta = sigma2, mu known.
struct NormalVariance {
    double mu = 0.0;
    double sigma2 = 1.0;
};

/// z_i ~ N(0, sigma2 + q_i) with the cyclic offset q_i; theta = sigma2.
struct SignalPlusNoise {
    double sigma2 = 1.0;
};

using BuiltinFamily = std::variant<NormalMean, NormalVariance, SignalPlusNoise>;

/// Deterministic nuisance offset q_i = 0.1 (i - 10 floor(i/10)) for 1-based i;
/// cycles through {0.1, ..., 0.9, 0.0} with period 10.
[[nodiscard]] constexpr double signal_offset(int i_one_based) noexcept {
    return 0.1 * static_cast<double>(i_one_based % 10);
}

namespace detail {

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 log(2 pi)

// Observation z ~ N(mu, v) where the unknown parameter is the variance v
// itself (possibly shifted by a known offset). Derivatives are with respect
// to v.
[[nodiscard]] inline double var_param_log_density(double z, double mu, double v) {
    const double d = z - mu;
    return -kHalfLog2Pi - 0.5 * std::log(v) - d * d / (2.0 * v);
}

[[nodiscard]] inline double var_param_score(double z, double mu, double v) {
    const double d = z - mu;
    return -1.0 / (2.0 * v) + d * d / (2.0 * v * v);
}

[[nodiscard]] inline double var_param_hessian(double z, double mu, double v) {
    const double d = z - mu;
    return 1.0 / (2.0 * v * v) - d * d / (v * v * v);
}

[[nodiscard]] inline DerivBundle var_param_bundle(double v) {
    DerivBundle b;
    b.g0 = -1.0 / (2.0 * v);
    b.g1 = 0.0;
    b.g2 = 1.0 / (v * v);
    b.h0 = 1.0 / (2.0 * v * v);
    b.h1 = 0.0;
    b.h2 = -2.0 / (v * v * v);
    return b;
}

inline void require_positive_variance(double sigma2, const char* family) {
    if (!(sigma2 > 0.0)) {
        throw std::domain_error(std::string(family) + ": sigma2 must be positive, got " +
                                std::to_string(sigma2));
    }
}

}  // namespace detail

class NormalMeanModel final : public Model {
public:
    NormalMeanModel(double mu, double sigma2, int n_obs)
        : Model(mu, n_obs, /*iid=*/true, /*symmetric=*/true), mu_(mu), sigma2_(sigma2) {
        detail::require_positive_variance(sigma2, "NormalMean");
    }

    [[nodiscard]] double mean(int) const override { return mu_; }
    [[nodiscard]] CentralMoments moments(int) const override { return gaussian_moments(sigma2_); }

    [[nodiscard]] double log_density(int, double z, double theta) const override {
        const double d = z - theta;
        return -detail::kHalfLog2Pi - 0.5 * std::log(sigma2_) - d * d / (2.0 * sigma2_);
    }
    [[nodiscard]] double score_at(int, double z, double theta) const override {
        return (z - theta) / sigma2_;
    }
    [[nodiscard]] double hessian_at(int, double, double) const override { return -1.0 / sigma2_; }

    [[nodiscard]] DerivBundle derivs_at_mean(int) const override {
        DerivBundle b;
        b.g0 = 0.0;  // score vanishes at z = mu when evaluated at the true mean
        b.g1 = 1.0 / sigma2_;
        b.g2 = 0.0;
        b.h0 = -1.0 / sigma2_;
        b.h1 = 0.0;
        b.h2 = 0.0;
        return b;
    }

    void sample(std::mt19937_64& rng, std::span<double> out) const override {
        std::normal_distribution<double> norm(mu_, std::sqrt(sigma2_));
        for (double& z : out) z = norm(rng);
    }

    [[nodiscard]] std::optional<double> closed_form_fin() const override {
        return static_cast<double>(n_obs()) / sigma2_;
    }
    [[nodiscard]] double theta_scale(int) const override { return std::sqrt(sigma2_); }
    [[nodiscard]] std::string family_name() const override { return "normal_mean"; }

private:
    double mu_;
    double sigma2_;
};

class NormalVarianceModel final : public Model {
public:
    NormalVarianceModel(double mu, double sigma2, int n_obs)
        : Model(sigma2, n_obs, /*iid=*/true, /*symmetric=*/true), mu_(mu), sigma2_(sigma2) {
        detail::require_positive_variance(sigma2, "NormalVariance");
    }

    [[nodiscard]] double mean(int) const override { return mu_; }
    [[nodiscard]] CentralMoments moments(int) const override { return gaussian_moments(sigma2_); }

    [[nodiscard]] double log_density(int, double z, double theta) const override {
        return detail::var_param_log_density(z, mu_, theta);
    }
    [[nodiscard]] double score_at(int, double z, double theta) const override {
        return detail::var_param_score(z, mu_, theta);
    }
    [[nodiscard]] double hessian_at(int, double z, double theta) const override {
        return detail::var_param_hessian(z, mu_, theta);
    }

    [[nodiscard]] DerivBundle derivs_at_mean(int) const override {
        return detail::var_param_bundle(sigma2_);
    }

    void sample(std::mt19937_64& rng, std::span<double> out) const override {
        std::normal_distribution<double> norm(mu_, std::sqrt(sigma2_));
        for (double& z : out) z = norm(rng);
    }

    [[nodiscard]] std::optional<double> closed_form_fin() const override {
        return static_cast<double>(n_obs()) / (2.0 * sigma2_ * sigma2_);
    }
    [[nodiscard]] std::string family_name() const override { return "normal_variance"; }

private:
    double mu_;
    double sigma2_;
};

class SignalPlusNoiseModel final : public Model {
public:
    SignalPlusNoiseModel(double sigma2, int n_obs)
        : Model(sigma2, n_obs, /*iid=*/false, /*symmetric=*/true), sigma2_(sigma2) {
        detail::require_positive_variance(sigma2, "SignalPlusNoise");
    }

    /// Per-observation variance sigma2 + q_i (0-based index).
    [[nodiscard]] double obs_variance(int i) const { return sigma2_ + signal_offset(i + 1); }

    [[nodiscard]] double mean(int) const override { return 0.0; }
    [[nodiscard]] CentralMoments moments(int i) const override {
        return gaussian_moments(obs_variance(i));
    }

    [[nodiscard]] double log_density(int i, double z, double theta) const override {
        return detail::var_param_log_density(z, 0.0, theta + signal_offset(i + 1));
    }
    [[nodiscard]] double score_at(int i, double z, double theta) const override {
        return detail::var_param_score(z, 0.0, theta + signal_offset(i + 1));
    }
    [[nodiscard]] double hessian_at(int i, double z, double theta) const override {
        return detail::var_param_hessian(z, 0.0, theta + signal_offset(i + 1));
    }

    [[nodiscard]] DerivBundle derivs_at_mean(int i) const override {
        return detail::var_param_bundle(obs_variance(i));
    }

    void sample(std::mt19937_64& rng, std::span<double> out) const override {
        std::normal_distribution<double> norm(0.0, 1.0);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = std::sqrt(obs_variance(static_cast<int>(i))) * norm(rng);
        }
    }

    [[nodiscard]] std::optional<double> closed_form_fin() const override {
        double fin = 0.0;
        for (int i = 0; i < n_obs(); ++i) {
            const double v = obs_variance(i);
            fin += 1.0 / (2.0 * v * v);
        }
        return fin;
    }
    [[nodiscard]] double theta_scale(int i) const override { return obs_variance(i); }
    [[nodiscard]] std::string family_name() const override { return "signal_plus_noise"; }

private:
    double sigma2_;
};

/// Builds the model for a builtin family with n_obs observations.
[[nodiscard]] inline std::unique_ptr<const Model> build_model(const BuiltinFamily& family,
                                                              int n_obs) {
    return std::visit(
        [n_obs](const auto& f) -> std::unique_ptr<const Model> {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, NormalMean>) {
                return std::make_unique<NormalMeanModel>(f.mu, f.sigma2, n_obs);
            } else if constexpr (std::is_same_v<F, NormalVariance>) {
                return std::make_unique<NormalVarianceModel>(f.mu, f.sigma2, n_obs);
            } else {
                return std::make_unique<SignalPlusNoiseModel>(f.sigma2, n_obs);
            }
        },
        family);
}

/// One dataset draw: z_i for i = 0..n_obs-1, deterministic given the stream.
[[nodiscard]] inline std::vector<double> sample(const Model& model, std::mt19937_64& rng) {
    std::vector<double> out(static_cast<std::size_t>(model.n_obs()));
    model.sample(rng, out);
    return out;
}

/// True Fisher information number F_n(theta).
/// @throws std::invalid_argument when the family has no closed form
[[nodiscard]] inline double true_fin(const Model& model) {
    if (auto f = model.closed_form_fin()) return *f;
    throw std::invalid_argument("true_fin: family '" + model.family_name() +
                                "' has no closed-form Fisher information");
}

// --- Finite-difference verification -----------------------------------------

struct DerivativeCheck {
    std::string quantity;
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
    bool pass = false;
};

struct DerivativeReport {
    std::vector<DerivativeCheck> checks;
    double max_rel_error = 0.0;
    double tol = 0.0;
    bool pass = false;
};

namespace detail {

// Step sizes: 1e-5 * scale for first differences, 3e-4 * scale for second
// differences. Second differences need the larger step: their rounding error
// grows like eps/h^2, and a 1e-5 step would leave it above the 1e-6
// verification tolerance at desk parameter scales.
inline constexpr double kFdStep1 = 1e-5;
inline constexpr double kFdStep2 = 3e-4;

inline void require_valid_step(double x, double h) {
    if (!(h > 0.0) || x + h == x) {
        throw std::runtime_error(
            "verify_derivatives: finite-difference step underflow (scale too small "
            "relative to the evaluation point)");
    }
}

template <typename F>
[[nodiscard]] double central_diff1(F&& f, double x, double h) {
    require_valid_step(x, h);
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <typename F>
[[nodiscard]] double central_diff2(F&& f, double x, double h) {
    require_valid_step(x, h);
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

inline void add_check(DerivativeReport& report, const std::string& quantity, double analytic,
                      double numeric, double magnitude, double tol) {
    double denom = std::max(std::abs(analytic), magnitude);
    if (denom == 0.0) denom = 1.0;
    const double err = std::abs(numeric - analytic) / denom;
    report.checks.push_back({quantity, analytic, numeric, err, err <= tol});
    report.max_rel_error = std::max(report.max_rel_error, err);
}

}  // namespace detail

/**
 * @brief Checks every analytic derivative against central finite differences.
 *
 * In the theta direction, differences of log_density reproduce the score, and
 * both a second difference of log_density and a first difference of the score
 * reproduce the Hessian at z_probe. In the z direction, differences of score
 * and hessian at the observation mean reproduce the four bundle derivatives.
 * Observations checked: all of them for small n, else an evenly spaced
 * subset.
 *
 * Errors are relative to the larger of the analytic value and the quantity's
 * natural magnitude at the observation (|g(mu)| + |g'(mu)| sd + |g''(mu)|
 * sd^2 / 2 for score-type quantities, divided by the matching power of sd for
 * z-derivatives; similarly for Hessian-type quantities). This keeps checks of
 * values near an incidental zero crossing meaningful.
 *
 * @throws std::runtime_error on step underflow
 */
[[nodiscard]] inline DerivativeReport verify_derivatives(const Model& model, double z_probe,
                                                         double tol) {
    if (!(tol > 0.0)) {
        throw std::domain_error("verify_derivatives: tol must be positive");
    }
    DerivativeReport report;
    report.tol = tol;

    const int n = model.n_obs();
    std::vector<int> indices;
    if (n <= 8) {
        for (int i = 0; i < n; ++i) indices.push_back(i);
    } else {
        for (int k = 0; k < 8; ++k) indices.push_back(k * (n - 1) / 7);
    }

    const double theta = model.theta_true();

    for (int i : indices) {
        const std::string tag = "[i=" + std::to_string(i) + "] ";
        const double h_theta1 = detail::kFdStep1 * model.theta_scale(i);
        const double h_theta2 = detail::kFdStep2 * model.theta_scale(i);

        const DerivBundle b = model.derivs_at_mean(i);
        const double mu = model.mean(i);
        const double sd = std::sqrt(model.moments(i).m2);
        const double g_mag = std::abs(b.g0) + std::abs(b.g1) * sd + 0.5 * std::abs(b.g2) * sd * sd;
        const double h_mag = std::abs(b.h0) + std::abs(b.h1) * sd + 0.5 * std::abs(b.h2) * sd * sd;

        // theta direction at z_probe
        const double fd_score = detail::central_diff1(
            [&](double th) { return model.log_density(i, z_probe, th); }, theta, h_theta1);
        detail::add_check(report, tag + "score vs d/dtheta log_density",
                          model.score(i, z_probe), fd_score, g_mag, tol);

        const double fd_hess_lp = detail::central_diff2(
            [&](double th) { return model.log_density(i, z_probe, th); }, theta, h_theta2);
        detail::add_check(report, tag + "hessian vs d2/dtheta2 log_density",
                          model.hessian(i, z_probe), fd_hess_lp, h_mag, tol);

        const double fd_hess_score = detail::central_diff1(
            [&](double th) { return model.score_at(i, z_probe, th); }, theta, h_theta1);
        detail::add_check(report, tag + "hessian vs d/dtheta score",
                          model.hessian(i, z_probe), fd_hess_score, h_mag, tol);

        // z direction at the observation mean
        const double z_scale = std::max({1.0, std::abs(mu), sd});
        const double hz1 = detail::kFdStep1 * z_scale;
        const double hz2 = detail::kFdStep2 * z_scale;

        detail::add_check(report, tag + "g(mu)", b.g0, model.score(i, mu), g_mag, tol);
        detail::add_check(report, tag + "H(mu)", b.h0, model.hessian(i, mu), h_mag, tol);
        detail::add_check(
            report, tag + "g'(mu)", b.g1,
            detail::central_diff1([&](double z) { return model.score(i, z); }, mu, hz1),
            g_mag / sd, tol);
        detail::add_check(
            report, tag + "g''(mu)", b.g2,
            detail::central_diff2([&](double z) { return model.score(i, z); }, mu, hz2),
            g_mag / (sd * sd), tol);
        detail::add_check(
            report, tag + "H'(mu)", b.h1,
            detail::central_diff1([&](double z) { return model.hessian(i, z); }, mu, hz1),
            h_mag / sd, tol);
        detail::add_check(
            report, tag + "H''(mu)", b.h2,
            detail::central_diff2([&](double z) { return model.hessian(i, z); }, mu, hz2),
            h_mag / (sd * sd), tol);
    }

    report.pass = report.max_rel_error <= tol;
    return report;
}

}  // namespace fincmp
