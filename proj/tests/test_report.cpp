#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "fincmp/report.hpp"
#include "helpers.hpp"

using Catch::Approx;
using namespace fincmp;
using nlohmann::json;

TEST_CASE("model config parsing", "[report]") {
    SECTION("all families parse with defaults") {
        const ModelConfig a = parse_model_config(
            json{{"family", "normal_mean"}, {"mu", 1.0}, {"sigma2", 0.01}, {"n", 50}});
        CHECK(a.family == "normal_mean");
        CHECK(a.mu == 1.0);
        CHECK(a.n == 50);

        const ModelConfig b = parse_model_config(json{{"family", "normal_variance"},
                                                      {"sigma2", 2.0}});
        CHECK(b.mu == 0.0);
        CHECK(b.n == 100);

        const ModelConfig c = parse_model_config(json{{"family", "signal_plus_noise"},
                                                      {"sigma2", 1.0}, {"mu", 0.0}});
        CHECK(c.family == "signal_plus_noise");
    }
    SECTION("unknown keys are rejected") {
        CHECK_THROWS_AS(parse_model_config(json{{"family", "normal_mean"},
                                                {"sigma2", 1.0},
                                                {"sigma", 1.0}}),
                        std::invalid_argument);
    }
    SECTION("missing or malformed fields are rejected") {
        CHECK_THROWS_AS(parse_model_config(json{{"sigma2", 1.0}}), std::invalid_argument);
        CHECK_THROWS_AS(parse_model_config(json{{"family", "cauchy"}, {"sigma2", 1.0}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_model_config(json{{"family", "normal_mean"}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_model_config(json{{"family", "normal_mean"}, {"sigma2", -1.0}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_model_config(json{{"family", "normal_mean"},
                                                {"sigma2", 1.0},
                                                {"n", 2.5}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_model_config(json::array()), std::invalid_argument);
    }
    SECTION("signal_plus_noise pins the mean at zero") {
        CHECK_THROWS_AS(parse_model_config(json{{"family", "signal_plus_noise"},
                                                {"sigma2", 1.0},
                                                {"mu", 0.5}}),
                        std::invalid_argument);
    }
}

namespace {

ModelConfig make_config(const std::string& family, double mu, double sigma2, int n) {
    ModelConfig cfg;
    cfg.family = family;
    cfg.mu = mu;
    cfg.sigma2 = sigma2;
    cfg.n = n;
    return cfg;
}

}  // namespace

TEST_CASE("analysis aggregates the closed-form pipeline", "[report]") {
    SECTION("normal variance") {
        const ModelConfig cfg = make_config("normal_variance", 0.0, 1.0, 100);
        const auto model = model_from_config(cfg);
        const AnalysisReport r = analyze(*model, cfg);
        CHECK(r.true_fin == 50.0);
        CHECK(r.taylor.aggregate.diff == 150.0);
        CHECK(r.recommendation == r.conditions.recommendation);
        CHECK(r.recommendation == Recommendation::NegativeHessian);
        CHECK_FALSE(r.naive_contrast.has_value());
    }
    SECTION("normal mean is situation I with a zero Hessian variance") {
        const ModelConfig cfg = make_config("normal_mean", 0.0, 1.0, 100);
        const auto model = model_from_config(cfg);
        const AnalysisReport r = analyze(*model, cfg);
        CHECK(r.taylor.aggregate.var_h == 0.0);
        CHECK(r.conditions.verdict == Verdict::SituationI);
    }
    SECTION("signal-plus-noise differences decrease in the offset") {
        const ModelConfig cfg = make_config("signal_plus_noise", 0.0, 1.0, 10);
        const auto model = model_from_config(cfg);
        const AnalysisReport r = analyze(*model, cfg);
        std::vector<std::pair<double, double>> by_q;
        for (int i = 0; i < 10; ++i) {
            by_q.emplace_back(signal_offset(i + 1), r.taylor.per_obs[i].diff);
        }
        std::sort(by_q.begin(), by_q.end());
        for (std::size_t k = 1; k < by_q.size(); ++k) {
            CHECK(by_q[k].second < by_q[k - 1].second);
        }
    }
    SECTION("naive contrast on request") {
        const ModelConfig cfg = make_config("normal_variance", 0.0, 1.0, 1);
        const auto model = model_from_config(cfg);
        const AnalysisReport r = analyze(*model, cfg, /*include_naive=*/true);
        REQUIRE(r.naive_contrast.has_value());
        CHECK(r.naive_contrast->naive_sum == 0.5);
        CHECK(r.naive_contrast->full_sum == 3.5);
        CHECK(r.naive_contrast->gap == 3.0);
    }
}

TEST_CASE("analysis serialization round-trips", "[report]") {
    const ModelConfig cfg = make_config("signal_plus_noise", 0.0, 1.0, 10);
    const auto model = model_from_config(cfg);
    const AnalysisReport r = analyze(*model, cfg, true);

    SECTION("json survives dump/parse bit-exactly") {
        const json j = to_json(r);
        const json reparsed = json::parse(j.dump());
        CHECK(reparsed == j);
        CHECK(reparsed.at("format_version").get<std::string>() == kFormatVersion);
        CHECK(reparsed.at("taylor").at("aggregate").at("diff").get<double>() ==
              r.taylor.aggregate.diff);
        CHECK(reparsed.at("recommendation").get<std::string>() == "negative_hessian");
        CHECK(reparsed.at("taylor").at("per_obs").size() == 10);
    }
    SECTION("csv has the fixed header, one row per observation plus aggregate") {
        const std::string csv = to_csv(r);
        std::istringstream lines(csv);
        std::string header;
        std::getline(lines, header);
        CHECK(header ==
              "format_version,kind,family,mu,sigma2,n,row,i,var_g2,var_h,diff,"
              "c1,c2,c3,c4_bundle,c4_moments,conditions_pass,verdict,recommendation");
        int rows = 0;
        std::string line;
        std::string first_row;
        while (std::getline(lines, line)) {
            if (rows == 0) first_row = line;
            ++rows;
        }
        CHECK(rows == 11);
        CHECK(csv.find("aggregate") != std::string::npos);
        CHECK(first_row.rfind("1,analysis,signal_plus_noise", 0) == 0);

        // every row has the header's column count
        const auto commas = [](const std::string& s) {
            return std::count(s.begin(), s.end(), ',');
        };
        std::istringstream again(csv);
        std::string row;
        while (std::getline(again, row)) CHECK(commas(row) == commas(header));
    }
    SECTION("table shows the same values rounded to six significant figures") {
        const json j = to_json(r);
        const std::string table = to_table(r);
        char expected[64];
        std::snprintf(expected, sizeof(expected), "%.6g",
                      j.at("taylor").at("aggregate").at("diff").get<double>());
        CHECK(table.find(expected) != std::string::npos);
        CHECK(table.find("recommendation:  negative_hessian") != std::string::npos);
    }
}

TEST_CASE("simulation serialization", "[report]") {
    const ModelConfig cfg = make_config("normal_mean", 0.0, 1.0, 20);
    const auto model = model_from_config(cfg);
    SimulationConfig sc;
    sc.n = 20;
    sc.n_replicates = 30;
    sc.n_trials = 5;
    sc.master_seed = 17;
    const SimulationResult r = run_full_experiment(*model, sc);

    SECTION("ratio is omitted when the Hessian variance is exactly zero") {
        REQUIRE(r.var_e_h == 0.0);
        const json j = to_json(r, cfg, sc);
        CHECK_FALSE(j.contains("ratio"));
        CHECK(j.at("p_value").get<double>() == *r.p_value);
        CHECK(j.at("config").at("seed").get<std::uint64_t>() == 17);

        const std::string csv = to_csv(r, cfg, sc);
        CHECK(csv.find(",,") != std::string::npos);  // empty ratio field
        const std::string table = to_table(r, cfg, sc);
        CHECK(table.find("omitted") != std::string::npos);
    }
    SECTION("json round-trip") {
        const json j = to_json(r, cfg, sc);
        CHECK(json::parse(j.dump()) == j);
    }
}

TEST_CASE("verification passes for every builtin family", "[report]") {
    for (const auto& cfg : {make_config("normal_mean", 1.0, 0.01, 40),
                            make_config("normal_variance", 0.0, 1.0, 40),
                            make_config("signal_plus_noise", 0.0, 1.0, 40)}) {
        const auto model = model_from_config(cfg);
        const VerificationOutcome v = run_verification(*model, 1234);
        INFO(cfg.family);
        CHECK(v.derivatives.pass);
        CHECK(v.score_zero_mean_pass);
        CHECK(v.fin_g2_pass);
        CHECK(v.fin_h_pass);
        CHECK(v.identity_pass);
        REQUIRE(v.pass);

        const json j = to_json(v, cfg);
        CHECK(j.at("pass").get<bool>());
        CHECK(json::parse(j.dump()) == j);
        const std::string table = to_table(v, cfg);
        CHECK(table.find("overall:               pass") != std::string::npos);
    }
}
