// Level-alpha tests for a break in the jump tail and the associated
// change-point estimator.
#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "json.hpp"
#include "jumpbreak/bootstrap.hpp"
#include "jumpbreak/statistics.hpp"

namespace jumpbreak {

enum class TestMethod {
    kscp1,  // single level z0, analytic Kolmogorov critical value
    kscp2,  // single level z0, multiplier bootstrap critical value
    cp,     // sup over a z grid, multiplier bootstrap critical value
};

std::string to_string(TestMethod method);
TestMethod parse_test_method(const std::string& name);

struct TestOutcome {
    TestMethod method = TestMethod::kscp1;
    double statistic = 0.0;
    double critical_value = 0.0;
    double alpha = 0.0;
    bool reject = false;
    // True when no increment reaches the tested level(s); the statistic is
    // then 0 and the test never rejects.
    bool degenerate = false;
    // Analytic for kscp1; for the bootstrap tests the fraction of draws at
    // or above the statistic. The decision comes from critical_value alone.
    std::optional<double> p_value;
    std::size_t replicates = 0;  // bootstrap draws behind critical_value
    MultiplierLaw law = MultiplierLaw::gaussian;
    std::uint64_t seed = 0;
    std::optional<double> z0;
    std::optional<std::size_t> grid_size;
};

nlohmann::json to_json(const TestOutcome& outcome);
TestOutcome outcome_from_json(const nlohmann::json& j);

// Rejects when statistic >= critical_value and the statistic is positive;
// the second clause keeps a degenerate sample (statistic 0, all bootstrap
// draws 0) from rejecting.
TestOutcome kscp_test1(const IncrementSeries& series, double z0, double alpha);
TestOutcome kscp_test2(const IncrementSeries& series, double z0, double alpha,
                       const BootstrapConfig& config);
// In observed mode the grid is refined to the observed increment values at
// or above grid.eps() for both the statistic and the bootstrap draws, which
// makes the z-supremum exact at proportional extra cost.
TestOutcome cp_test(const IncrementSeries& series, const ZGrid& grid,
                    double alpha, const BootstrapConfig& config,
                    ZSupMode mode = ZSupMode::grid);

enum class EstimateMode {
    sup_over_grid,
    fixed_z0,
};

std::string to_string(EstimateMode mode);

struct ChangePointEstimate {
    double theta_hat = 0.0;
    std::size_t arg_j = 0;
    EstimateMode mode = EstimateMode::sup_over_grid;
    double achieved_value = 0.0;  // the attained supremum
    // True when the underlying statistic vanishes everywhere; theta_hat is
    // then reported as 0.
    bool degenerate = false;
};

nlohmann::json to_json(const ChangePointEstimate& estimate);

ChangePointEstimate estimate_changepoint(const IncrementSeries& series,
                                         const ZGrid& grid,
                                         ZSupMode mode = ZSupMode::grid);
ChangePointEstimate estimate_changepoint(const IncrementSeries& series,
                                         double z0);

}  // namespace jumpbreak
