#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fincmp/conditions.hpp"
#include "fincmp/montecarlo.hpp"
#include "fincmp/taylor.hpp"

namespace fincmp {

inline constexpr std::string_view kFormatVersion = "1";

// --- Model configuration file -------------------------------------------------

/// The JSON model description consumed by the command-line tool:
/// {"family": "normal_mean" | "normal_variance" | "signal_plus_noise",
///  "mu": number, "sigma2": number, "n": integer}. Unknown keys are rejected.
struct ModelConfig {
    std::string family;
    double mu = 0.0;
    double sigma2 = 1.0;
    int n = 100;
};

[[nodiscard]] inline ModelConfig parse_model_config(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("model config: expected a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "family" && key != "mu" && key != "sigma2" && key != "n") {
            throw std::invalid_argument("model config: unknown key '" + key + "'");
        }
    }
    if (!j.contains("family") || !j.at("family").is_string()) {
        throw std::invalid_argument("model config: 'family' is required and must be a string");
    }
    ModelConfig cfg;
    cfg.family = j.at("family").get<std::string>();
    if (cfg.family != "normal_mean" && cfg.family != "normal_variance" &&
        cfg.family != "signal_plus_noise") {
        throw std::invalid_argument("model config: unsupported family '" + cfg.family + "'");
    }
    if (j.contains("mu")) {
        if (!j.at("mu").is_number()) {
            throw std::invalid_argument("model config: 'mu' must be a number");
        }
        cfg.mu = j.at("mu").get<double>();
    }
    if (!j.contains("sigma2") || !j.at("sigma2").is_number()) {
        throw std::invalid_argument("model config: 'sigma2' is required and must be a number");
    }
    cfg.sigma2 = j.at("sigma2").get<double>();
    if (!(cfg.sigma2 > 0.0)) {
        throw std::invalid_argument("model config: 'sigma2' must be positive");
    }
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer()) {
            throw std::invalid_argument("model config: 'n' must be an integer");
        }
        cfg.n = j.at("n").get<int>();
        if (cfg.n < 1) throw std::invalid_argument("model config: 'n' must be >= 1");
    }
    if (cfg.family == "signal_plus_noise" && cfg.mu != 0.0) {
        throw std::invalid_argument(
            "model config: signal_plus_noise observations have mean 0; 'mu' must be 0 or absent");
    }
    return cfg;
}

[[nodiscard]] inline ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("model config: cannot open '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("model config: '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_model_config(j);
}

[[nodiscard]] inline BuiltinFamily family_from_config(const ModelConfig& cfg) {
    if (cfg.family == "normal_mean") return NormalMean{cfg.mu, cfg.sigma2};
    if (cfg.family == "normal_variance") return NormalVariance{cfg.mu, cfg.sigma2};
    return SignalPlusNoise{cfg.sigma2};
}

[[nodiscard]] inline std::unique_ptr<const Model> model_from_config(const ModelConfig& cfg) {
    return build_model(family_from_config(cfg), cfg.n);
}

// --- Analysis report ------------------------------------------------------------

/// Aggregates everything the closed-form side produces for one model: true
/// FIN, Taylor variances, condition verdict and recommendation, plus the
/// optional wrong-expansion contrast.
struct AnalysisReport {
    std::string format_version{kFormatVersion};
    ModelConfig config;
    double theta_true = 0.0;
    double true_fin = 0.0;
    TaylorVariances taylor;
    ConditionReport conditions;
    Recommendation recommendation = Recommendation::Undecided;

    struct NaiveContrast {
        std::vector<double> per_obs_naive;
        double naive_sum = 0.0;
        double full_sum = 0.0;
        double gap = 0.0;  ///< full_sum - naive_sum
    };
    std::optional<NaiveContrast> naive_contrast;
};

[[nodiscard]] inline AnalysisReport analyze(const Model& model, const ModelConfig& config,
                                            bool include_naive = false) {
    AnalysisReport report;
    report.config = config;
    report.theta_true = model.theta_true();
    report.true_fin = true_fin(model);
    report.taylor = taylor_aggregate(model);
    report.conditions = check_conditions(model);
    report.recommendation = report.conditions.recommendation;

    if (include_naive) {
        AnalysisReport::NaiveContrast naive;
        double naive_sum = 0.0;
        for (int i = 0; i < model.n_obs(); ++i) {
            const double v = taylor_var_g2_naive(model.derivs_at_mean(i), model.moments(i));
            naive.per_obs_naive.push_back(v);
            naive_sum += v;
        }
        naive.naive_sum = naive_sum;
        naive.full_sum = report.taylor.aggregate.var_g2;
        naive.gap = naive.full_sum - naive.naive_sum;
        report.naive_contrast = naive;
    }
    return report;
}

// --- Verification ----------------------------------------------------------------

/// Derivative checks plus the two Monte Carlo identities: pooled score mean
/// near 0 and both information estimates near the closed-form FIN, all at 4
/// standard errors.
struct VerificationOutcome {
    DerivativeReport derivatives;
    double score_mean = 0.0;
    double score_limit = 0.0;  ///< 4 standard errors of the pooled score mean
    bool score_zero_mean_pass = false;
    double fin_true = 0.0;
    double fin_mc_g2 = 0.0;
    double fin_mc_g2_limit = 0.0;
    bool fin_g2_pass = false;
    double fin_mc_h = 0.0;
    double fin_mc_h_limit = 0.0;
    bool fin_h_pass = false;
    double identity_gap = 0.0;  ///< |MC estimate of sum E[g^2] + sum E[H]|
    double identity_limit = 0.0;
    bool identity_pass = false;
    bool pass = false;
};

[[nodiscard]] inline VerificationOutcome run_verification(const Model& model,
                                                          std::uint64_t seed = 20240901,
                                                          double deriv_tol = 1e-6) {
    VerificationOutcome out;

    // Finite-difference derivative checks at five probes around the first
    // observation's mean.
    const double mu0 = model.mean(0);
    const double sd0 = std::sqrt(model.moments(0).m2);
    const double offsets[] = {-2.0, -1.0, 0.5, 1.0, 2.0};
    out.derivatives.tol = deriv_tol;
    out.derivatives.pass = true;
    for (double c : offsets) {
        DerivativeReport r = verify_derivatives(model, mu0 + c * sd0, deriv_tol);
        out.derivatives.max_rel_error = std::max(out.derivatives.max_rel_error, r.max_rel_error);
        for (auto& chk : r.checks) out.derivatives.checks.push_back(std::move(chk));
    }
    out.derivatives.pass = out.derivatives.max_rel_error <= deriv_tol;

    // Monte Carlo identities over >= 2 * 10^5 pooled draws.
    const int n = model.n_obs();
    const int replicates = std::max(2, 200000 / n + 1);
    RunningVariance acc_g;
    RunningVariance acc_g2;
    RunningVariance acc_h;
    RunningVariance acc_identity;  // g^2 + H, zero-mean under the identity
    std::vector<double> buf(static_cast<std::size_t>(n));
    for (int rep = 0; rep < replicates; ++rep) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
        model.sample(rng, buf);
        for (int i = 0; i < n; ++i) {
            const double z = buf[static_cast<std::size_t>(i)];
            const double g = model.score(i, z);
            const double h = model.hessian(i, z);
            acc_g.add(g);
            acc_g2.add(g * g);
            acc_h.add(h);
            acc_identity.add(g * g + h);
        }
    }
    const double total = static_cast<double>(acc_g.count());
    const auto se_of = [total](const RunningVariance& acc) {
        return std::sqrt(acc.sample_variance() / total);
    };

    out.score_mean = acc_g.mean();
    out.score_limit = 4.0 * se_of(acc_g);
    out.score_zero_mean_pass = std::abs(out.score_mean) <= out.score_limit;

    out.fin_true = true_fin(model);
    out.fin_mc_g2 = n * acc_g2.mean();
    out.fin_mc_g2_limit = 4.0 * n * se_of(acc_g2);
    out.fin_g2_pass = std::abs(out.fin_mc_g2 - out.fin_true) <= out.fin_mc_g2_limit;

    out.fin_mc_h = -n * acc_h.mean();
    out.fin_mc_h_limit = 4.0 * n * se_of(acc_h);
    out.fin_h_pass = std::abs(out.fin_mc_h - out.fin_true) <= out.fin_mc_h_limit;

    out.identity_gap = std::abs(n * acc_identity.mean());
    // The Hessian can be constant (zero variance), so guard the SE.
    const double id_var = acc_identity.sample_variance();
    out.identity_limit = 4.0 * n * std::sqrt(id_var / total);
    out.identity_pass = id_var == 0.0 ? out.identity_gap == 0.0
                                      : out.identity_gap <= out.identity_limit;

    out.pass = out.derivatives.pass && out.score_zero_mean_pass && out.fin_g2_pass &&
               out.fin_h_pass && out.identity_pass;
    return out;
}

// --- Formatting helpers -----------------------------------------------------------

namespace detail {

[[nodiscard]] inline std::string fmt_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

[[nodiscard]] inline std::string fmt_sig6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

[[nodiscard]] inline const char* pass_str(bool b) { return b ? "pass" : "FAIL"; }

}  // namespace detail

[[nodiscard]] inline std::string to_string(VarianceTarget t) {
    return t == VarianceTarget::PerObservation ? "per-observation" : "estimator";
}

[[nodiscard]] inline VarianceTarget variance_target_from_string(const std::string& s) {
    if (s == "per-observation") return VarianceTarget::PerObservation;
    if (s == "estimator") return VarianceTarget::EstimatorAcrossReplicates;
    throw std::invalid_argument("unknown variance mode '" + s +
                                "' (expected 'per-observation' or 'estimator')");
}

namespace detail {

[[nodiscard]] inline nlohmann::json model_json(const ModelConfig& cfg) {
    return {{"family", cfg.family}, {"mu", cfg.mu}, {"sigma2", cfg.sigma2}, {"n", cfg.n}};
}

}  // namespace detail

// --- Analysis serialization ---------------------------------------------------------

[[nodiscard]] inline nlohmann::json to_json(const AnalysisReport& r) {
    nlohmann::json j;
    j["format_version"] = r.format_version;
    j["kind"] = "analysis";
    j["model"] = detail::model_json(r.config);
    j["model"]["theta"] = r.theta_true;
    j["true_fin"] = r.true_fin;

    nlohmann::json per = nlohmann::json::array();
    for (std::size_t i = 0; i < r.taylor.per_obs.size(); ++i) {
        const auto& t = r.taylor.per_obs[i];
        per.push_back({{"i", i + 1},
                       {"var_g2", t.var_g2},
                       {"var_h", t.var_h},
                       {"diff", t.diff}});
    }
    const int n = r.config.n;
    j["taylor"] = {{"per_obs", per},
                   {"aggregate",
                    {{"var_g2", r.taylor.aggregate.var_g2},
                     {"var_h", r.taylor.aggregate.var_h},
                     {"diff", r.taylor.aggregate.diff}}},
                   {"asymptotic",
                    {{"v_g", r.taylor.aggregate.var_g2 / n},
                     {"v_h", r.taylor.aggregate.var_h / n}}}};

    nlohmann::json cper = nlohmann::json::array();
    for (std::size_t i = 0; i < r.conditions.per_obs.size(); ++i) {
        const auto& c = r.conditions.per_obs[i];
        cper.push_back({{"i", i + 1},
                        {"c1", c.c1},
                        {"c2", c.c2},
                        {"c3", c.c3},
                        {"c4_bundle", c.c4_bundle},
                        {"c4_moments", c.c4_moments},
                        {"pass", {c.pass1, c.pass2, c.pass3, c.pass4}}});
    }
    j["conditions"] = {{"verdict", to_string(r.conditions.verdict)},
                       {"taylor_diff_value", r.conditions.taylor_diff_value},
                       {"notes", r.conditions.notes},
                       {"per_obs", cper}};
    j["recommendation"] = to_string(r.recommendation);

    if (r.naive_contrast) {
        j["naive_contrast"] = {{"per_obs_naive", r.naive_contrast->per_obs_naive},
                               {"naive_sum", r.naive_contrast->naive_sum},
                               {"full_sum", r.naive_contrast->full_sum},
                               {"gap", r.naive_contrast->gap}};
    }
    return j;
}

[[nodiscard]] inline std::string to_csv(const AnalysisReport& r) {
    std::ostringstream os;
    os << "format_version,kind,family,mu,sigma2,n,row,i,var_g2,var_h,diff,"
          "c1,c2,c3,c4_bundle,c4_moments,conditions_pass,verdict,recommendation\n";
    const auto prefix = [&]() {
        os << r.format_version << ",analysis," << r.config.family << ','
           << detail::fmt_full(r.config.mu) << ',' << detail::fmt_full(r.config.sigma2) << ','
           << r.config.n << ',';
    };
    for (std::size_t i = 0; i < r.taylor.per_obs.size(); ++i) {
        const auto& t = r.taylor.per_obs[i];
        const auto& c = r.conditions.per_obs[i];
        prefix();
        os << "obs," << i + 1 << ',' << detail::fmt_full(t.var_g2) << ','
           << detail::fmt_full(t.var_h) << ',' << detail::fmt_full(t.diff) << ','
           << detail::fmt_full(c.c1) << ',' << detail::fmt_full(c.c2) << ','
           << detail::fmt_full(c.c3) << ',' << detail::fmt_full(c.c4_bundle) << ','
           << detail::fmt_full(c.c4_moments) << ',' << (c.all_pass() ? "true" : "false")
           << ",,\n";
    }
    prefix();
    os << "aggregate,," << detail::fmt_full(r.taylor.aggregate.var_g2) << ','
       << detail::fmt_full(r.taylor.aggregate.var_h) << ','
       << detail::fmt_full(r.taylor.aggregate.diff) << ",,,,,,,"
       << to_string(r.conditions.verdict) << ',' << to_string(r.recommendation) << '\n';
    return os.str();
}

[[nodiscard]] inline std::string to_table(const AnalysisReport& r) {
    std::ostringstream os;
    os << "model:           " << r.config.family << " (mu=" << detail::fmt_sig6(r.config.mu)
       << ", sigma2=" << detail::fmt_sig6(r.config.sigma2) << ", n=" << r.config.n
       << ", theta=" << detail::fmt_sig6(r.theta_true) << ")\n";
    os << "true FIN:        " << detail::fmt_sig6(r.true_fin) << "\n\n";

    os << "Taylor variance approximations\n";
    os << "  " << "obs i" << "    var[g^2]      var[H]        diff\n";
    const std::size_t n_rows = r.taylor.per_obs.size();
    const std::size_t show = n_rows <= 12 ? n_rows : 10;
    for (std::size_t i = 0; i < show; ++i) {
        const auto& t = r.taylor.per_obs[i];
        char line[160];
        std::snprintf(line, sizeof(line), "  %5zu    %-12s  %-12s  %-12s\n", i + 1,
                      detail::fmt_sig6(t.var_g2).c_str(), detail::fmt_sig6(t.var_h).c_str(),
                      detail::fmt_sig6(t.diff).c_str());
        os << line;
    }
    if (show < n_rows) {
        os << "  ... (" << n_rows - show << " more observations)\n";
    }
    {
        char line[160];
        const auto& a = r.taylor.aggregate;
        std::snprintf(line, sizeof(line), "  %5s    %-12s  %-12s  %-12s\n", "sum",
                      detail::fmt_sig6(a.var_g2).c_str(), detail::fmt_sig6(a.var_h).c_str(),
                      detail::fmt_sig6(a.diff).c_str());
        os << line;
        std::snprintf(line, sizeof(line), "  %5s    %-12s  %-12s\n", "sum/n",
                      detail::fmt_sig6(a.var_g2 / r.config.n).c_str(),
                      detail::fmt_sig6(a.var_h / r.config.n).c_str());
        os << line;
    }

    os << "\nsufficient conditions (first observation shown";
    os << (r.taylor.per_obs.size() > 1 ? ", remaining observations analogous)\n" : ")\n");
    if (!r.conditions.per_obs.empty()) {
        const auto& c = r.conditions.per_obs.front();
        os << "  (i)   4 g^2 g'^2 - H'^2        = " << detail::fmt_sig6(c.c1) << "  ["
           << detail::pass_str(c.pass1) << "]\n";
        os << "  (ii)  (g'^2 + g g'')^2 - H''^2/4 = " << detail::fmt_sig6(c.c2) << "  ["
           << detail::pass_str(c.pass2) << "]\n";
        os << "  (iii) g g''                    = " << detail::fmt_sig6(c.c3) << "  ["
           << detail::pass_str(c.pass3) << "]\n";
        os << "  (iv)  sign match of " << detail::fmt_sig6(c.c4_bundle) << " and "
           << detail::fmt_sig6(c.c4_moments) << "  [" << detail::pass_str(c.pass4) << "]\n";
    }
    os << "verdict:         " << to_string(r.conditions.verdict) << '\n';
    os << "taylor diff:     " << detail::fmt_sig6(r.conditions.taylor_diff_value) << '\n';
    os << "recommendation:  " << to_string(r.recommendation) << '\n';
    if (!r.conditions.notes.empty()) {
        os << "notes:           " << r.conditions.notes << '\n';
    }
    if (r.naive_contrast) {
        os << "\nwrong-expansion contrast (expanding g^2 directly)\n";
        os << "  naive sum:     " << detail::fmt_sig6(r.naive_contrast->naive_sum) << '\n';
        os << "  full sum:      " << detail::fmt_sig6(r.naive_contrast->full_sum) << '\n';
        os << "  gap:           " << detail::fmt_sig6(r.naive_contrast->gap)
           << "  (variance mass the direct expansion drops)\n";
    }
    return os.str();
}

// --- Simulation serialization ---------------------------------------------------

[[nodiscard]] inline nlohmann::json to_json(const SimulationResult& r, const ModelConfig& model,
                                            const SimulationConfig& cfg) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "simulation";
    j["model"] = detail::model_json(model);
    j["config"] = {{"n", cfg.n},
                   {"replicates", cfg.n_replicates},
                   {"trials", cfg.n_trials},
                   {"seed", cfg.master_seed},
                   {"mode", to_string(cfg.variance_target)}};
    j["var_e_g2"] = r.var_e_g2;
    j["var_e_h"] = r.var_e_h;
    j["diff"] = r.diff;
    if (r.ratio) j["ratio"] = *r.ratio;
    if (r.p_value) j["p_value"] = *r.p_value;
    j["per_trial_diffs"] = r.per_trial_diffs;
    j["seeds_used"] = r.seeds_used;
    return j;
}

[[nodiscard]] inline std::string to_csv(const SimulationResult& r, const ModelConfig& model,
                                        const SimulationConfig& cfg) {
    std::ostringstream os;
    os << "format_version,kind,family,mu,sigma2,n,replicates,trials,seed,mode,"
          "var_e_g2,var_e_h,diff,ratio,p_value\n";
    os << kFormatVersion << ",simulation," << model.family << ',' << detail::fmt_full(model.mu)
       << ',' << detail::fmt_full(model.sigma2) << ',' << cfg.n << ',' << cfg.n_replicates << ','
       << cfg.n_trials << ',' << cfg.master_seed << ',' << to_string(cfg.variance_target) << ','
       << detail::fmt_full(r.var_e_g2) << ',' << detail::fmt_full(r.var_e_h) << ','
       << detail::fmt_full(r.diff) << ',' << (r.ratio ? detail::fmt_full(*r.ratio) : "") << ','
       << (r.p_value ? detail::fmt_full(*r.p_value) : "") << '\n';
    return os.str();
}

[[nodiscard]] inline std::string to_table(const SimulationResult& r, const ModelConfig& model,
                                          const SimulationConfig& cfg) {
    std::ostringstream os;
    os << "model:           " << model.family << " (mu=" << detail::fmt_sig6(model.mu)
       << ", sigma2=" << detail::fmt_sig6(model.sigma2) << ", n=" << cfg.n << ")\n";
    os << "protocol:        N=" << cfg.n_replicates << " replicates, m=" << cfg.n_trials
       << " trials, seed=" << cfg.master_seed << ", mode=" << to_string(cfg.variance_target)
       << "\n\n";
    os << "var_e[g^2]:      " << detail::fmt_sig6(r.var_e_g2) << '\n';
    os << "var_e[H]:        " << detail::fmt_sig6(r.var_e_h) << '\n';
    os << "difference:      " << detail::fmt_sig6(r.diff) << '\n';
    if (r.ratio) {
        os << "ratio:           " << detail::fmt_sig6(*r.ratio) << '\n';
    } else {
        os << "ratio:           (omitted: var_e[H] is exactly 0)\n";
    }
    if (r.p_value) {
        os << "p value:         " << detail::fmt_sig6(*r.p_value)
           << "  (one-sided t test over " << r.per_trial_diffs.size() << " trial differences)\n";
    }
    return os.str();
}

// --- Verification serialization ----------------------------------------------------

[[nodiscard]] inline nlohmann::json to_json(const VerificationOutcome& v,
                                            const ModelConfig& model) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : v.derivatives.checks) {
        checks.push_back({{"quantity", c.quantity},
                          {"analytic", c.analytic},
                          {"numeric", c.numeric},
                          {"rel_error", c.rel_error},
                          {"pass", c.pass}});
    }
    return {{"format_version", kFormatVersion},
            {"kind", "verification"},
            {"model", detail::model_json(model)},
            {"derivatives",
             {{"max_rel_error", v.derivatives.max_rel_error},
              {"tol", v.derivatives.tol},
              {"pass", v.derivatives.pass},
              {"checks", checks}}},
            {"score_zero_mean",
             {{"mean", v.score_mean}, {"limit", v.score_limit}, {"pass", v.score_zero_mean_pass}}},
            {"information_identity",
             {{"fin_true", v.fin_true},
              {"mc_g2", v.fin_mc_g2},
              {"mc_g2_limit", v.fin_mc_g2_limit},
              {"mc_g2_pass", v.fin_g2_pass},
              {"mc_h", v.fin_mc_h},
              {"mc_h_limit", v.fin_mc_h_limit},
              {"mc_h_pass", v.fin_h_pass},
              {"gap", v.identity_gap},
              {"gap_limit", v.identity_limit},
              {"gap_pass", v.identity_pass}}},
            {"pass", v.pass}};
}

[[nodiscard]] inline std::string to_table(const VerificationOutcome& v, const ModelConfig& model) {
    std::ostringstream os;
    os << "model:                 " << model.family << " (mu=" << detail::fmt_sig6(model.mu)
       << ", sigma2=" << detail::fmt_sig6(model.sigma2) << ", n=" << model.n << ")\n";
    os << "derivative checks:     max rel err " << detail::fmt_sig6(v.derivatives.max_rel_error)
       << " vs tol " << detail::fmt_sig6(v.derivatives.tol) << "  ["
       << detail::pass_str(v.derivatives.pass) << "]\n";
    os << "score zero mean:       |" << detail::fmt_sig6(v.score_mean) << "| <= "
       << detail::fmt_sig6(v.score_limit) << " (4 SE)  ["
       << detail::pass_str(v.score_zero_mean_pass) << "]\n";
    os << "FIN via E[g^2]:        " << detail::fmt_sig6(v.fin_mc_g2) << " vs "
       << detail::fmt_sig6(v.fin_true) << " within " << detail::fmt_sig6(v.fin_mc_g2_limit)
       << "  [" << detail::pass_str(v.fin_g2_pass) << "]\n";
    os << "FIN via -E[H]:         " << detail::fmt_sig6(v.fin_mc_h) << " vs "
       << detail::fmt_sig6(v.fin_true) << " within " << detail::fmt_sig6(v.fin_mc_h_limit)
       << "  [" << detail::pass_str(v.fin_h_pass) << "]\n";
    os << "identity gap:          " << detail::fmt_sig6(v.identity_gap) << " within "
       << detail::fmt_sig6(v.identity_limit) << "  [" << detail::pass_str(v.identity_pass)
       << "]\n";
    os << "overall:               " << (v.pass ? "pass" : "FAIL") << '\n';
    return os.str();
}

}  // namespace fincmp
