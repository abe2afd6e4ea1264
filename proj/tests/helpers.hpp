#pragma once

// Shared test utilities: quadrature and batching oracles, random generators
// for valid moment/derivative inputs, and a minimal non-symmetric model used
// to exercise the abstract interface.

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "fincmp/fincmp.hpp"

namespace testutil {

// Composite Simpson rule; panels must be even.
template <typename F>
[[nodiscard]] double simpson(F&& f, double lo, double hi, int panels) {
    const double h = (hi - lo) / panels;
    double acc = f(lo) + f(hi);
    for (int k = 1; k < panels; ++k) {
        acc += f(lo + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

// Brute-force k-th central moment of N(mu, sigma2) by quadrature over +-12 sd.
[[nodiscard]] inline double gaussian_moment_quadrature(int k, double mu, double sigma2) {
    const double sd = std::sqrt(sigma2);
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * sigma2);
    auto integrand = [&](double z) {
        const double d = z - mu;
        return std::pow(d, k) * norm * std::exp(-d * d / (2.0 * sigma2));
    };
    return simpson(integrand, mu - 12.0 * sd, mu + 12.0 * sd, 40000);
}

struct BatchStat {
    double mean = 0.0;
    double se = 0.0;
};

// Statistic recomputed on equal batches; se is the standard error of the
// batch means.
template <typename F>
[[nodiscard]] BatchStat batch_statistic(std::span<const double> xs, int n_batches, F&& stat) {
    const std::size_t per = xs.size() / static_cast<std::size_t>(n_batches);
    fincmp::RunningVariance acc;
    for (int b = 0; b < n_batches; ++b) {
        acc.add(stat(xs.subspan(static_cast<std::size_t>(b) * per, per)));
    }
    return {acc.mean(), std::sqrt(acc.sample_variance() / n_batches)};
}

[[nodiscard]] inline double mean_of(std::span<const double> xs) {
    double m = 0.0;
    std::size_t k = 0;
    for (double x : xs) m += (x - m) / static_cast<double>(++k);
    return m;
}

// Valid symmetric moments: Gaussian shape rescaled so that every type
// invariant still holds while the sign of m6 - m2 m4 varies.
[[nodiscard]] inline fincmp::CentralMoments random_symmetric_moments(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double sigma2 = std::exp(4.6 * unit(rng) - 2.3);
    fincmp::CentralMoments m = fincmp::gaussian_moments(sigma2);
    m.m4 *= 0.4 + 2.6 * unit(rng);   // keeps m4 >= m2^2 and m8 >= m4^2
    m.m6 *= 0.05 + 1.95 * unit(rng);  // lets m6 - m2 m4 take either sign
    m.m8 *= 1.0 + unit(rng);
    return m;
}

// Random derivative bundle. With favor_conditions the Hessian derivatives are
// sized against the score terms so that the sufficient conditions hold with
// useful frequency.
[[nodiscard]] inline fincmp::DerivBundle random_bundle(std::mt19937_64& rng,
                                                       bool favor_conditions) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    fincmp::DerivBundle d;
    d.g0 = u(rng);
    d.g1 = u(rng);
    d.g2 = u(rng);
    d.h0 = u(rng);
    d.h1 = u(rng);
    d.h2 = u(rng);
    if (favor_conditions) {
        d.g2 = std::copysign(d.g2, d.g0);
        const double sign1 = unit(rng) < 0.5 ? -1.0 : 1.0;
        const double sign2 = unit(rng) < 0.5 ? -1.0 : 1.0;
        d.h1 = sign1 * 1.5 * unit(rng) * 2.0 * std::abs(d.g0 * d.g1);
        d.h2 = sign2 * 1.5 * unit(rng) * 2.0 * std::abs(d.g1 * d.g1 + d.g0 * d.g2);
    }
    return d;
}

// Exponential observations with unknown rate: the simplest non-symmetric
// family with closed-form score and Hessian. Central moments of the unit
// exponential are the subfactorials 1, 2, 9, 44, 265, 1854, 14833.
class ExponentialRateModel : public fincmp::Model {
public:
    ExponentialRateModel(double rate, int n_obs)
        : Model(rate, n_obs, /*iid=*/true, /*symmetric=*/false), rate_(rate) {}

    [[nodiscard]] double mean(int) const override { return 1.0 / rate_; }

    [[nodiscard]] fincmp::CentralMoments moments(int) const override {
        fincmp::CentralMoments m;
        m.m2 = 1.0 / std::pow(rate_, 2);
        m.m3 = 2.0 / std::pow(rate_, 3);
        m.m4 = 9.0 / std::pow(rate_, 4);
        m.m5 = 44.0 / std::pow(rate_, 5);
        m.m6 = 265.0 / std::pow(rate_, 6);
        m.m7 = 1854.0 / std::pow(rate_, 7);
        m.m8 = 14833.0 / std::pow(rate_, 8);
        return m;
    }

    [[nodiscard]] double log_density(int, double z, double theta) const override {
        return std::log(theta) - theta * z;
    }
    [[nodiscard]] double score_at(int, double z, double theta) const override {
        return 1.0 / theta - z;
    }
    [[nodiscard]] double hessian_at(int, double, double theta) const override {
        return -1.0 / (theta * theta);
    }

    [[nodiscard]] fincmp::DerivBundle derivs_at_mean(int) const override {
        fincmp::DerivBundle b;
        b.g0 = 0.0;  // 1/rate - mean
        b.g1 = -1.0;
        b.g2 = 0.0;
        b.h0 = -1.0 / (rate_ * rate_);
        b.h1 = 0.0;
        b.h2 = 0.0;
        return b;
    }

    void sample(std::mt19937_64& rng, std::span<double> out) const override {
        std::exponential_distribution<double> exp_dist(rate_);
        for (double& z : out) z = exp_dist(rng);
    }

    [[nodiscard]] std::string family_name() const override { return "exponential_rate"; }

private:
    double rate_;
};

// Model defined directly by a bundle and a moment set; only the closed-form
// side is usable (no sampler).
class SyntheticModel final : public fincmp::Model {
public:
    SyntheticModel(const fincmp::DerivBundle& bundle, const fincmp::CentralMoments& moments,
                   bool symmetric)
        : Model(/*theta_true=*/1.0, /*n_obs=*/1, /*iid=*/true, symmetric),
          bundle_(bundle),
          moments_(moments) {}

    [[nodiscard]] double mean(int) const override { return 0.0; }
    [[nodiscard]] fincmp::CentralMoments moments(int) const override { return moments_; }
    [[nodiscard]] double log_density(int, double, double) const override {
        throw std::logic_error("SyntheticModel has no density");
    }
    [[nodiscard]] double score_at(int, double, double) const override {
        throw std::logic_error("SyntheticModel has no score");
    }
    [[nodiscard]] double hessian_at(int, double, double) const override {
        throw std::logic_error("SyntheticModel has no hessian");
    }
    [[nodiscard]] fincmp::DerivBundle derivs_at_mean(int) const override { return bundle_; }
    void sample(std::mt19937_64&, std::span<double>) const override {
        throw std::logic_error("SyntheticModel has no sampler");
    }
    [[nodiscard]] std::string family_name() const override { return "synthetic"; }

private:
    fincmp::DerivBundle bundle_;
    fincmp::CentralMoments moments_;
};

}  // namespace testutil
