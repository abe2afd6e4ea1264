#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace fincmp {

/**
 * @brief Central moments E[(z - mu)^k] of a single scalar observation, k = 2..8.
 *
 * m2 is the variance sigma^2. Order 8 is the highest moment any of the
 * variance approximations needs (it enters through var[(z - mu)^4]), so the
 * type stops there. Symmetric densities have m3 = m5 = m7 = 0.
 */
struct CentralMoments {
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    double m5 = 0.0;
    double m6 = 0.0;
    double m7 = 0.0;
    double m8 = 0.0;

    /// Moment of order k, k in [2, 8]. Orders outside the cap are rejected.
    [[nodiscard]] double central(int k) const {
        switch (k) {
            case 2: return m2;
            case 3: return m3;
            case 4: return m4;
            case 5: return m5;
            case 6: return m6;
            case 7: return m7;
            case 8: return m8;
            default:
                throw std::domain_error("CentralMoments: order " + std::to_string(k) +
                                        " outside supported range [2, 8]");
        }
    }

    [[nodiscard]] bool all_finite() const {
        return std::isfinite(m2) && std::isfinite(m3) && std::isfinite(m4) &&
               std::isfinite(m5) && std::isfinite(m6) && std::isfinite(m7) &&
               std::isfinite(m8);
    }
};

/// a!! = a(a-2)(a-4)...; returns 1 for a in {0, 1}.
[[nodiscard]] constexpr std::uint64_t double_factorial(unsigned a) noexcept {
    std::uint64_t p = 1;
    for (unsigned k = a; k > 1; k -= 2) p *= k;
    return p;
}

/**
 * @brief Central moments of N(mu, sigma2): m_{2k} = (2k-1)!! sigma2^k, odd moments 0.
 * @throws std::domain_error if sigma2 <= 0
 */
[[nodiscard]] inline CentralMoments gaussian_moments(double sigma2) {
    if (!(sigma2 > 0.0)) {
        throw std::domain_error("gaussian_moments: sigma2 must be positive, got " +
                                std::to_string(sigma2));
    }
    const double s4 = sigma2 * sigma2;
    const double s6 = s4 * sigma2;
    const double s8 = s6 * sigma2;
    CentralMoments m;
    m.m2 = sigma2;
    m.m4 = static_cast<double>(double_factorial(3)) * s4;
    m.m6 = static_cast<double>(double_factorial(5)) * s6;
    m.m8 = static_cast<double>(double_factorial(7)) * s8;
    return m;
}

/**
 * @brief Sample central moments around the sample mean.
 *
 * m2 uses the unbiased divisor n-1; orders 3..8 use divisor n. Intended as a
 * large-sample verification oracle for closed-form moments, not as input to
 * the variance approximations.
 *
 * @throws std::invalid_argument if fewer than 2 samples
 */
[[nodiscard]] inline CentralMoments empirical_moments(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) {
        throw std::invalid_argument("empirical_moments: need at least 2 samples, got " +
                                    std::to_string(n));
    }
    // Running-update mean: exact for constant input, so a degenerate sample
    // yields exactly zero moments.
    double mean = 0.0;
    std::size_t k = 0;
    for (double x : samples) mean += (x - mean) / static_cast<double>(++k);

    double s2 = 0, s3 = 0, s4 = 0, s5 = 0, s6 = 0, s7 = 0, s8 = 0;
    for (double x : samples) {
        const double d = x - mean;
        const double d2 = d * d;
        const double d3 = d2 * d;
        const double d4 = d2 * d2;
        s2 += d2;
        s3 += d3;
        s4 += d4;
        s5 += d4 * d;
        s6 += d4 * d2;
        s7 += d4 * d3;
        s8 += d4 * d4;
    }
    const double nn = static_cast<double>(n);
    CentralMoments m;
    m.m2 = s2 / (nn - 1.0);
    m.m3 = s3 / nn;
    m.m4 = s4 / nn;
    m.m5 = s5 / nn;
    m.m6 = s6 / nn;
    m.m7 = s7 / nn;
    m.m8 = s8 / nn;
    return m;
}

/**
 * @brief var[(z - mu)^k] = m_{2k} - m_k^2 for k in {2, 3, 4}.
 * @throws std::domain_error for k outside {2, 3, 4}
 */
[[nodiscard]] inline double var_of_centered_power(const CentralMoments& m, int k) {
    if (k < 2 || k > 4) {
        throw std::domain_error("var_of_centered_power: k must be 2, 3 or 4, got " +
                                std::to_string(k));
    }
    const double mk = m.central(k);
    return m.central(2 * k) - mk * mk;
}

}  // namespace fincmp
