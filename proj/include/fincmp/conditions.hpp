#pragma once

#include <string>
#include <vector>

#include "fincmp/taylor.hpp"

namespace fincmp {

enum class Verdict {
    SituationI,     ///< every sufficient condition holds for every observation
    Indeterminate,  ///< conditions fail or do not apply; sign decided numerically
};

enum class Recommendation {
    NegativeHessian,
    GradientSquared,
    Undecided,
};

/// Evaluated sufficient-condition quantities for one observation. Zero counts
/// as passing: the conditions are non-strict inequalities, and exact zeros
/// are routine (location families have H'(mu) = 0 identically).
struct ConditionRecord {
    double c1 = 0.0;  ///< 4 g^2(mu) [g'(mu)]^2 - [H'(mu)]^2
    double c2 = 0.0;  ///< ([g'(mu)]^2 + g(mu) g''(mu))^2 - [H''(mu)]^2 / 4
    double c3 = 0.0;  ///< g(mu) g''(mu)
    double c4_bundle = 0.0;   ///< [g'(mu)]^2 + g(mu) g''(mu)
    double c4_moments = 0.0;  ///< m6 - sigma^2 m4
    bool pass1 = false;
    bool pass2 = false;
    bool pass3 = false;
    bool pass4 = false;  ///< sign agreement: c4_bundle * c4_moments >= 0

    [[nodiscard]] bool all_pass() const { return pass1 && pass2 && pass3 && pass4; }
};

struct ConditionReport {
    std::vector<ConditionRecord> per_obs;
    Verdict verdict = Verdict::Indeterminate;
    /// Aggregate Taylor difference backing the recommendation (the grouped
    /// symmetric form when applicable, the literal subtraction otherwise).
    double taylor_diff_value = 0.0;
    Recommendation recommendation = Recommendation::Undecided;
    std::string notes;
};

/**
 * @brief Evaluates the sufficient conditions under which the negated-Hessian
 * estimator is provably no worse, observation by observation.
 *
 * The conditions are stated for symmetric densities; an asymmetric model gets
 * an Indeterminate verdict with a note, and the recommendation falls back to
 * the sign of the aggregate Taylor difference. The same fallback applies when
 * any condition fails: the conditions are sufficient, not necessary, so a
 * failed check decides nothing by itself.
 */
[[nodiscard]] inline ConditionReport check_conditions(const Model& model) {
    ConditionReport report;
    const int n = model.n_obs();

    bool all_conditions_hold = true;
    bool score_vanishes_everywhere = true;
    double agg_diff = 0.0;

    for (int i = 0; i < n; ++i) {
        const DerivBundle d = model.derivs_at_mean(i);
        const CentralMoments m = model.moments(i);

        ConditionRecord rec;
        rec.c1 = 4.0 * d.g0 * d.g0 * d.g1 * d.g1 - d.h1 * d.h1;
        rec.c4_bundle = d.g1 * d.g1 + d.g0 * d.g2;
        rec.c2 = rec.c4_bundle * rec.c4_bundle - 0.25 * d.h2 * d.h2;
        rec.c3 = d.g0 * d.g2;
        rec.c4_moments = m.m6 - m.m2 * m.m4;
        rec.pass1 = rec.c1 >= 0.0;
        rec.pass2 = rec.c2 >= 0.0;
        rec.pass3 = rec.c3 >= 0.0;
        rec.pass4 = rec.c4_bundle * rec.c4_moments >= 0.0;
        all_conditions_hold = all_conditions_hold && rec.all_pass();
        score_vanishes_everywhere = score_vanishes_everywhere && d.g0 == 0.0;
        report.per_obs.push_back(rec);

        agg_diff += taylor_diff(d, m, model.symmetric());
    }
    report.taylor_diff_value = agg_diff;

    if (!model.symmetric()) {
        report.verdict = Verdict::Indeterminate;
        report.notes =
            "model is not symmetric: the sufficient conditions are stated for symmetric "
            "densities, so the verdict is indeterminate and the recommendation follows the "
            "sign of the aggregate Taylor difference. ";
    } else if (all_conditions_hold) {
        report.verdict = Verdict::SituationI;
    } else {
        report.verdict = Verdict::Indeterminate;
        report.notes =
            "at least one sufficient condition fails; the conditions are not necessary, so "
            "the recommendation falls back to the sign of the aggregate Taylor difference. ";
    }

    if (score_vanishes_everywhere) {
        report.notes +=
            "score at the observation mean is exactly 0 for every observation (true-parameter "
            "evaluation), so condition quantities built from g(mu) vanish rather than being "
            "strictly positive. ";
    }

    if (report.verdict == Verdict::SituationI) {
        report.recommendation = Recommendation::NegativeHessian;
    } else if (report.taylor_diff_value > 0.0) {
        report.recommendation = Recommendation::NegativeHessian;
    } else if (report.taylor_diff_value < 0.0) {
        report.recommendation = Recommendation::GradientSquared;
    } else {
        report.recommendation = Recommendation::Undecided;
        report.notes += "aggregate Taylor difference is exactly 0; no estimator is preferred. ";
    }
    return report;
}

[[nodiscard]] inline std::string to_string(Verdict v) {
    return v == Verdict::SituationI ? "situation_i" : "indeterminate";
}

[[nodiscard]] inline std::string to_string(Recommendation r) {
    switch (r) {
        case Recommendation::NegativeHessian: return "negative_hessian";
        case Recommendation::GradientSquared: return "gradient_squared";
        default: return "undecided";
    }
}

}  // namespace fincmp
