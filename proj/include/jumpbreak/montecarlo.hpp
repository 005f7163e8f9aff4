// Simulation studies: rejection-rate tables, change-point estimator error,
// and validation checks for the bootstrap covariance and the small-time tail
// approximation.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "jumpbreak/procedures.hpp"
#include "jumpbreak/simulator.hpp"

namespace jumpbreak {

// One design cell. Replicate r derives its streams from `seed`: the path
// uses derive_stream(seed, 2r); bootstrap seeds come from
// base = derive_stream(seed, 2r+1), salted per procedure as
// derive_stream(base, 0) for the grid test and derive_stream(base, i+1) for
// the level test at z0_levels[i], so adding or removing procedures never
// shifts the draws of the others. bootstrap.seed and sampler.seed are
// ignored here.
struct ExperimentConfig {
    std::size_t n = 22500;
    double delta_n = 1.0 / 450.0;
    double drift = 0.0;
    double sigma = 0.0;
    double beta_pre = 1.0;
    std::optional<double> beta_post;  // set for a break at theta0
    double theta0 = 0.5;
    std::size_t replicates = 500;
    double alpha = 0.05;
    BootstrapConfig bootstrap;
    std::vector<double> z0_levels;
    bool brownian_grid = false;  // grid scales with sqrt(delta_n)
    bool coarse_grid = true;
    bool run_kscp1 = true;
    bool run_kscp2 = true;
    bool run_cp = true;
    SamplerConfig sampler;
    std::uint64_t seed = 1;

    double k_n() const { return static_cast<double>(n) * delta_n; }
    ZGrid grid() const;
    ProcessSpec process() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct RateRow {
    TestMethod method = TestMethod::kscp1;
    std::optional<double> z0;
    std::size_t trials = 0;
    std::size_t rejections = 0;
    std::size_t degenerate = 0;
    double rate() const {
        return trials == 0 ? 0.0
                           : static_cast<double>(rejections) /
                                 static_cast<double>(trials);
    }
};

struct RejectionTable {
    ExperimentConfig config;
    std::vector<RateRow> rows;
};

RejectionTable run_experiment(const ExperimentConfig& config);
void write_csv(const RejectionTable& table, std::ostream& out);

struct EstimatorStudy {
    double theta0 = 0.0;
    double z0 = 0.0;
    std::vector<double> grid_estimates;   // argmax over the full grid
    std::vector<double> point_estimates;  // argmax at the single level z0
    std::size_t grid_degenerate = 0;
    std::size_t point_degenerate = 0;
    double grid_mae() const;
    double point_mae() const;
};

// Break designs only; replicate r simulates from derive_stream(seed, 2r), so
// paths match run_experiment replicate for replicate.
EstimatorStudy run_estimator_study(const ExperimentConfig& config, double z0);
void write_csv(const EstimatorStudy& study, std::ostream& out);

struct CovarianceCheck {
    double theta1 = 0.0, z1 = 0.0, theta2 = 0.0, z2 = 0.0;
    double limit = 0.0;     // population limit of the conditional covariance
    double estimate = 0.0;  // mean of the exact per-path conditional covariance
    double se = 0.0;        // jackknife standard error over paths
    double zscore() const { return se == 0.0 ? 0.0 : (estimate - limit) / se; }
};

// Exact conditional bootstrap covariances (no multiplier noise) averaged
// over `paths` simulated no-break paths. centered = true checks the
// tail-comparison process against {min(theta)-theta1 theta2} U(max z);
// centered = false checks the sequential process against min(theta) U(max z).
std::vector<CovarianceCheck> validate_covariance(
    const ExperimentConfig& config,
    const std::vector<std::array<double, 4>>& pairs, std::size_t paths,
    bool centered);

struct SmallTimeStudy {
    double z = 0.0;
    std::vector<double> times;
    std::vector<double> p_hat;      // simulated P(increment >= z) at each t
    std::vector<double> se;         // binomial standard errors
    std::vector<double> remainder;  // p_hat - t U(z)
    double slope = 0.0;     // OLS slope of log|remainder| on log t
    double slope_se = 0.0;  // its regression standard error
};

// Simulates the no-break spec at each horizon and regresses the log absolute
// remainder of the first-order tail approximation on log t.
SmallTimeStudy small_time_study(const ProcessSpec& spec, double z,
                                std::span<const double> times,
                                std::size_t replicates, std::uint64_t seed);

// One study per level; level i uses streams derived from (seed, i).
std::vector<SmallTimeStudy> validate_small_time(const ProcessSpec& spec,
                                                std::span<const double> z_list,
                                                std::span<const double> times,
                                                std::size_t replicates,
                                                std::uint64_t seed);

// P(J_t >= z) for the exact pure power-law increment at horizon t:
// erf((t/2) sqrt(beta/z)); first-order term is t U(z), remainder O(t^3).
double exact_small_time_tail(double beta, double t, double z);

// Least-squares slope of y on x; sizes must match, at least two points.
double ols_slope(std::span<const double> x, std::span<const double> y);
// Standard error of that slope (residual-based; 0 when fewer than 3 points).
double ols_slope_se(std::span<const double> x, std::span<const double> y);

// Pool-adjacent-violators fit: nondecreasing values minimizing the weighted
// squared distance to y. Empty weights mean equal weights.
std::vector<double> isotonic_fit(const std::vector<double>& y,
                                 const std::vector<double>& weights = {});

}  // namespace jumpbreak
