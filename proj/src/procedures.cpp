#include "jumpbreak/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace jumpbreak {

std::string to_string(TestMethod method) {
    switch (method) {
        case TestMethod::kscp1: return "kscp1";
        case TestMethod::kscp2: return "kscp2";
        case TestMethod::cp: return "cp";
    }
    throw std::logic_error("unknown test method");
}

TestMethod parse_test_method(const std::string& name) {
    if (name == "kscp1") return TestMethod::kscp1;
    if (name == "kscp2") return TestMethod::kscp2;
    if (name == "cp") return TestMethod::cp;
    throw std::invalid_argument("unknown test method: " + name);
}

nlohmann::json to_json(const TestOutcome& outcome) {
    nlohmann::json j{
        {"method", to_string(outcome.method)},
        {"statistic", outcome.statistic},
        {"critical_value", outcome.critical_value},
        {"alpha", outcome.alpha},
        {"reject", outcome.reject},
        {"degenerate", outcome.degenerate},
        {"replicates", outcome.replicates},
        {"law", to_string(outcome.law)},
        {"seed", outcome.seed},
    };
    if (outcome.p_value) j["p_value"] = *outcome.p_value;
    if (outcome.z0) j["z0"] = *outcome.z0;
    if (outcome.grid_size) j["grid_size"] = *outcome.grid_size;
    return j;
}

TestOutcome outcome_from_json(const nlohmann::json& j) {
    TestOutcome outcome;
    outcome.method = parse_test_method(j.at("method").get<std::string>());
    outcome.statistic = j.at("statistic").get<double>();
    outcome.critical_value = j.at("critical_value").get<double>();
    outcome.alpha = j.at("alpha").get<double>();
    outcome.reject = j.at("reject").get<bool>();
    outcome.degenerate = j.at("degenerate").get<bool>();
    outcome.replicates = j.at("replicates").get<std::size_t>();
    if (j.contains("law"))
        outcome.law = parse_multiplier_law(j.at("law").get<std::string>());
    outcome.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("p_value")) outcome.p_value = j.at("p_value").get<double>();
    if (j.contains("z0")) outcome.z0 = j.at("z0").get<double>();
    if (j.contains("grid_size"))
        outcome.grid_size = j.at("grid_size").get<std::size_t>();
    return outcome;
}

std::string to_string(EstimateMode mode) {
    switch (mode) {
        case EstimateMode::sup_over_grid: return "sup-over-grid";
        case EstimateMode::fixed_z0: return "fixed-z0";
    }
    throw std::logic_error("unknown estimate mode");
}

nlohmann::json to_json(const ChangePointEstimate& estimate) {
    return nlohmann::json{
        {"theta_hat", estimate.theta_hat},
        {"arg_j", estimate.arg_j},
        {"mode", to_string(estimate.mode)},
        {"achieved_value", estimate.achieved_value},
        {"degenerate", estimate.degenerate},
    };
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");
}

bool decide(double statistic, double critical_value) {
    return statistic >= critical_value && statistic > 0.0;
}

double draw_fraction_at_or_above(const std::vector<double>& draws,
                                 double statistic) {
    std::size_t count = 0;
    for (double d : draws)
        if (d >= statistic) ++count;
    return static_cast<double>(count) / static_cast<double>(draws.size());
}

}  // namespace

TestOutcome kscp_test1(const IncrementSeries& series, double z0,
                       double alpha) {
    validate(series);
    check_alpha(alpha);
    if (!(z0 > 0.0)) throw std::invalid_argument("z0 must be positive");
    TestOutcome outcome;
    outcome.method = TestMethod::kscp1;
    outcome.alpha = alpha;
    outcome.z0 = z0;
    outcome.statistic = v_stat(series, z0);
    outcome.critical_value = ks_quantile(1.0 - alpha);
    outcome.p_value = 1.0 - ks_cdf(outcome.statistic);
    outcome.degenerate = empirical_tail(series, 1, series.n(), z0) == 0.0;
    outcome.reject = decide(outcome.statistic, outcome.critical_value);
    return outcome;
}

TestOutcome kscp_test2(const IncrementSeries& series, double z0, double alpha,
                       const BootstrapConfig& config) {
    validate(series);
    check_alpha(alpha);
    if (!(z0 > 0.0)) throw std::invalid_argument("z0 must be positive");
    TestOutcome outcome;
    outcome.method = TestMethod::kscp2;
    outcome.alpha = alpha;
    outcome.z0 = z0;
    outcome.replicates = config.replicates;
    outcome.law = config.law;
    outcome.seed = config.seed;
    outcome.statistic = w_stat(series, z0);
    const auto draws = bootstrap_sup_samples(series, z0, config);
    outcome.critical_value = sample_quantile(draws, 1.0 - alpha);
    outcome.p_value = draw_fraction_at_or_above(draws, outcome.statistic);
    outcome.degenerate = empirical_tail(series, 1, series.n(), z0) == 0.0;
    outcome.reject = decide(outcome.statistic, outcome.critical_value);
    return outcome;
}

TestOutcome cp_test(const IncrementSeries& series, const ZGrid& grid,
                    double alpha, const BootstrapConfig& config,
                    ZSupMode mode) {
    validate(series);
    validate(grid);
    check_alpha(alpha);
    TestOutcome outcome;
    outcome.method = TestMethod::cp;
    outcome.alpha = alpha;
    outcome.replicates = config.replicates;
    outcome.law = config.law;
    outcome.seed = config.seed;

    ZGrid effective = grid;
    if (mode == ZSupMode::observed) {
        std::vector<double> levels;
        for (double v : series.values)
            if (v >= grid.eps()) levels.push_back(v);
        if (levels.empty()) {
            outcome.grid_size = grid.size();
            outcome.degenerate = true;
            outcome.p_value = 1.0;
            return outcome;  // statistic 0, critical value 0, no rejection
        }
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        effective = ZGrid::from_points(levels);
    }
    outcome.grid_size = effective.size();
    outcome.statistic = sup_stat(series, effective, ZSupMode::grid);
    const auto draws = bootstrap_sup_samples(series, effective, config);
    outcome.critical_value = sample_quantile(draws, 1.0 - alpha);
    outcome.p_value = draw_fraction_at_or_above(draws, outcome.statistic);
    outcome.degenerate =
        empirical_tail(series, 1, series.n(), effective.eps()) == 0.0;
    outcome.reject = decide(outcome.statistic, outcome.critical_value);
    return outcome;
}

ChangePointEstimate estimate_changepoint(const IncrementSeries& series,
                                         const ZGrid& grid, ZSupMode mode) {
    const auto sup = grid_sup(series, grid, mode);
    ChangePointEstimate est;
    est.mode = EstimateMode::sup_over_grid;
    est.achieved_value = sup.value;
    est.degenerate = sup.value == 0.0;
    est.arg_j = est.degenerate ? 0 : sup.arg_j;
    est.theta_hat = static_cast<double>(est.arg_j) /
                    static_cast<double>(series.n());
    return est;
}

ChangePointEstimate estimate_changepoint(const IncrementSeries& series,
                                         double z0) {
    const auto sup = point_sup(series, z0);
    ChangePointEstimate est;
    est.mode = EstimateMode::fixed_z0;
    est.achieved_value = sup.value;
    est.degenerate = sup.value == 0.0;
    est.arg_j = est.degenerate ? 0 : sup.arg_j;
    est.theta_hat = static_cast<double>(est.arg_j) /
                    static_cast<double>(series.n());
    return est;
}

}  // namespace jumpbreak
