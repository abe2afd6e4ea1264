#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "fincmp/model.hpp"

namespace fincmp {

/// The two estimators of the averaged Fisher information number F_n(theta)/n.
enum class EstimatorKind {
    GradientSquared,  ///< mean of squared scores, (1/n) sum g_i^2(z_i)
    NegativeHessian,  ///< negated mean of Hessians, -(1/n) sum H_i(z_i)
};

namespace detail {

inline void require_data_shape(const Model& model, std::span<const double> data,
                               const char* where) {
    if (static_cast<int>(data.size()) != model.n_obs()) {
        throw std::invalid_argument(std::string(where) + ": data length " +
                                    std::to_string(data.size()) + " does not match n_obs " +
                                    std::to_string(model.n_obs()));
    }
}

}  // namespace detail

/// Averaged squared score (1/n) sum g_i^2(z_i); non-negative by construction.
/// @throws std::invalid_argument on length mismatch
[[nodiscard]] inline double g_bar(const Model& model, std::span<const double> data) {
    detail::require_data_shape(model, data, "g_bar");
    long double acc = 0.0L;
    for (int i = 0; i < model.n_obs(); ++i) {
        const double g = model.score(i, data[static_cast<std::size_t>(i)]);
        acc += static_cast<long double>(g) * g;
    }
    return static_cast<double>(acc / model.n_obs());
}

/// Averaged negated Hessian -(1/n) sum H_i(z_i).
/// @throws std::invalid_argument on length mismatch
[[nodiscard]] inline double h_bar(const Model& model, std::span<const double> data) {
    detail::require_data_shape(model, data, "h_bar");
    long double acc = 0.0L;
    for (int i = 0; i < model.n_obs(); ++i) {
        acc += model.hessian(i, data[static_cast<std::size_t>(i)]);
    }
    return static_cast<double>(-acc / model.n_obs());
}

}  // namespace fincmp
