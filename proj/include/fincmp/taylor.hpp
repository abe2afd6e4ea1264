#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fincmp/model.hpp"
#include "fincmp/moments.hpp"

namespace fincmp {

/// Approximate variances of the two per-observation statistics and their
/// difference. diff is always the literal subtraction var_g2 - var_h.
struct TaylorTriple {
    double var_g2 = 0.0;
    double var_h = 0.0;
    double diff = 0.0;
};

/// Per-observation triples plus their sums over all observations. For an
/// identically distributed model the aggregate is exactly n times the
/// single-observation triple.
struct TaylorVariances {
    std::vector<TaylorTriple> per_obs;
    TaylorTriple aggregate;
};

namespace detail {

inline void require_usable(const DerivBundle& d, const CentralMoments& m, const char* where) {
    if (!d.all_finite()) {
        throw std::domain_error(std::string(where) + ": derivative bundle has non-finite entries");
    }
    if (!m.all_finite()) {
        throw std::domain_error(std::string(where) + ": central moments missing or non-finite");
    }
}

}  // namespace detail

/**
 * @brief Second-order approximation of var[g^2(z)] for one observation.
 *
 * The score is expanded to second order in z around the mean and squared
 * before taking the variance, giving the full ten-term sum; the cross terms
 * collapse to the differences m6 - m2 m4, m5 - m2 m3 and m7 - m4 m3. Needs
 * moments through order 8 (order 8 enters via var[(z - mu)^4]). Exact when
 * the score is at most quadratic in z.
 *
 * @throws std::domain_error on non-finite inputs
 */
[[nodiscard]] inline double taylor_var_g2(const DerivBundle& d, const CentralMoments& m) {
    detail::require_usable(d, m, "taylor_var_g2");
    const double a = d.g1 * d.g1 + d.g0 * d.g2;  // coefficient of the (z-mu)^2 deviation
    const double g2sq = d.g2 * d.g2;

    double v = 4.0 * d.g0 * d.g0 * d.g1 * d.g1 * m.m2;
    v += a * a * var_of_centered_power(m, 2);
    v += (1.0 / 16.0) * g2sq * g2sq * var_of_centered_power(m, 4);
    v += d.g1 * d.g1 * g2sq * var_of_centered_power(m, 3);
    v += 4.0 * d.g0 * d.g1 * a * m.m3;
    v += d.g0 * d.g1 * g2sq * m.m5;
    v += 4.0 * d.g0 * d.g1 * d.g1 * d.g2 * m.m4;
    v += 0.5 * g2sq * a * (m.m6 - m.m2 * m.m4);
    v += 2.0 * d.g1 * d.g2 * a * (m.m5 - m.m2 * m.m3);
    v += 0.5 * d.g1 * g2sq * d.g2 * (m.m7 - m.m4 * m.m3);
    return v;
}

/**
 * @brief Second-order approximation of var[H(z)] for one observation:
 * [H']^2 sigma^2 + [H'']^2 var[(z-mu)^2] / 4 + H' H'' m3.
 * Exact when the Hessian is at most quadratic in z.
 */
[[nodiscard]] inline double taylor_var_h(const DerivBundle& d, const CentralMoments& m) {
    detail::require_usable(d, m, "taylor_var_h");
    double v = d.h1 * d.h1 * m.m2;
    v += 0.25 * d.h2 * d.h2 * var_of_centered_power(m, 2);
    v += d.h1 * d.h2 * m.m3;
    return v;
}

/**
 * @brief Approximate var[g^2(z)] - var[H(z)] for one observation.
 *
 * With symmetric = true the six-term grouped form for symmetric densities is
 * evaluated (and cross-checked against the literal subtraction, which it
 * equals up to rounding); otherwise the subtraction itself is returned.
 * Passing symmetric = true with non-vanishing odd moments violates the
 * precondition and is caught by the cross-check.
 *
 * @throws std::logic_error if the grouped form disagrees with the subtraction
 */
[[nodiscard]] inline double taylor_diff(const DerivBundle& d, const CentralMoments& m,
                                        bool symmetric) {
    const double vg = taylor_var_g2(d, m);
    const double vh = taylor_var_h(d, m);
    if (!symmetric) return vg - vh;

    const double a = d.g1 * d.g1 + d.g0 * d.g2;
    const double g2sq = d.g2 * d.g2;
    double v = (4.0 * d.g0 * d.g0 * d.g1 * d.g1 - d.h1 * d.h1) * m.m2;
    v += (a * a - 0.25 * d.h2 * d.h2) * var_of_centered_power(m, 2);
    v += (1.0 / 16.0) * g2sq * g2sq * var_of_centered_power(m, 4);
    v += d.g1 * d.g1 * g2sq * var_of_centered_power(m, 3);
    v += 4.0 * d.g0 * d.g1 * d.g1 * d.g2 * m.m4;
    v += 0.5 * g2sq * a * (m.m6 - m.m2 * m.m4);

    const double scale = std::max(1.0, std::abs(vg) + std::abs(vh));
    if (std::abs(v - (vg - vh)) > 1e-6 * scale) {
        throw std::logic_error(
            "taylor_diff: symmetric form disagrees with var_g2 - var_h; the model's odd "
            "central moments are probably not zero");
    }
    return v;
}

/**
 * @brief The deliberately wrong contrast: expand g^2 directly instead of
 * expanding g and squaring.
 *
 * Chain rule gives (g^2)' = 2 g g' and (g^2)'' = 2(g'^2 + g g''), so the
 * three-term variance pattern applied to g^2 keeps only the first-order
 * content and drops every term the squared expansion contributes. Diagnostic
 * only; never used by the condition checker or the recommendation.
 */
[[nodiscard]] inline double taylor_var_g2_naive(const DerivBundle& d, const CentralMoments& m) {
    detail::require_usable(d, m, "taylor_var_g2_naive");
    const double u1 = 2.0 * d.g0 * d.g1;              // (g^2)'(mu)
    const double u2 = 2.0 * (d.g1 * d.g1 + d.g0 * d.g2);  // (g^2)''(mu)
    double v = u1 * u1 * m.m2;
    v += 0.25 * u2 * u2 * var_of_centered_power(m, 2);
    v += u1 * u2 * m.m3;
    return v;
}

/**
 * @brief Per-observation Taylor triples and their sums over the model.
 *
 * Identically distributed models take the exact n-times-one-observation path;
 * otherwise per-observation values are summed in index order.
 */
[[nodiscard]] inline TaylorVariances taylor_aggregate(const Model& model) {
    TaylorVariances out;
    const int n = model.n_obs();
    out.per_obs.reserve(static_cast<std::size_t>(n));

    if (model.iid()) {
        const DerivBundle d = model.derivs_at_mean(0);
        const CentralMoments m = model.moments(0);
        TaylorTriple t;
        t.var_g2 = taylor_var_g2(d, m);
        t.var_h = taylor_var_h(d, m);
        t.diff = t.var_g2 - t.var_h;
        out.per_obs.assign(static_cast<std::size_t>(n), t);
        out.aggregate.var_g2 = n * t.var_g2;
        out.aggregate.var_h = n * t.var_h;
        out.aggregate.diff = out.aggregate.var_g2 - out.aggregate.var_h;
        return out;
    }

    double sum_g2 = 0.0;
    double sum_h = 0.0;
    for (int i = 0; i < n; ++i) {
        const DerivBundle d = model.derivs_at_mean(i);
        const CentralMoments m = model.moments(i);
        TaylorTriple t;
        t.var_g2 = taylor_var_g2(d, m);
        t.var_h = taylor_var_h(d, m);
        t.diff = t.var_g2 - t.var_h;
        out.per_obs.push_back(t);
        sum_g2 += t.var_g2;
        sum_h += t.var_h;
    }
    out.aggregate.var_g2 = sum_g2;
    out.aggregate.var_h = sum_h;
    out.aggregate.diff = sum_g2 - sum_h;
    return out;
}

}  // namespace fincmp
