// Multiplier bootstrap for the tail-comparison statistics. Each replicate
// reweights the observed exceedances with iid mean-zero variance-one
// multipliers and recomputes the supremum statistic; quantiles of those
// draws calibrate the tests.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jumpbreak/empirical.hpp"
#include "jumpbreak/rng.hpp"

namespace jumpbreak {

enum class MultiplierLaw {
    gaussian,
    rademacher,
};

std::string to_string(MultiplierLaw law);
MultiplierLaw parse_multiplier_law(const std::string& name);

struct BootstrapConfig {
    std::size_t replicates = 250;
    MultiplierLaw law = MultiplierLaw::gaussian;
    std::uint64_t seed = 0;
};

// One multiplier per increment, in increment order. Gaussian draws use
// normal(); rademacher draws map uniform01() < 0.5 to -1 and else to +1.
std::vector<double> draw_multipliers(std::size_t n, MultiplierLaw law,
                                     Rng& rng);

// Bootstrap analogue of the tail-comparison process at (theta, z):
// G(theta) - (m/n) G(1) with G(theta) = k_n^{-1/2} sum_{j<=m} xi_j
// {1(dX_j >= z) - eta_n(z)}. Evaluated as
// {S(m) - (P(m)/n) C(n)} - (m/n) {S(n) - (P(n)/n) C(n)} over sqrt(k_n),
// with P the multiplier prefix sums and S the multiplier-weighted exceedance
// prefix sums; this grouping makes constant multipliers give exactly 0 at
// theta = 1.
double bootstrap_t_process(const IncrementSeries& series,
                           std::span<const double> xi, double theta, double z);

// Bootstrap analogue of the sequential tail process alone:
// {S(m) - (P(m)/n) C(n)} / sqrt(k_n).
double bootstrap_g_process(const IncrementSeries& series,
                           std::span<const double> xi, double theta, double z);

// Conditional covariance of the bootstrap processes given the data, exact in
// the multipliers (variance-one, independent): centered = true gives
// Cov(T(theta1,z1), T(theta2,z2)), centered = false the same for the
// sequential process G.
double bootstrap_covariance(const IncrementSeries& series, double theta1,
                            double z1, double theta2, double z2,
                            bool centered);

// Sup over all prefixes and all grid levels of |bootstrap T|, one multiplier
// vector. Incremental O(n K) kernel.
double bootstrap_sup(const ExceedanceEvents& events,
                     std::span<const double> xi);

// Same value from explicit prefix-sum arrays; independent arithmetic order,
// used to cross-check the incremental kernel. O(n K) memory.
double bootstrap_sup_reference(const ExceedanceEvents& events,
                               std::span<const double> xi);

// B independent sup draws. Replicate b = 1..B draws its multipliers from the
// stream derived from (config.seed, b), so enlarging B extends the sample
// without changing earlier draws.
std::vector<double> bootstrap_sup_samples(const IncrementSeries& series,
                                          const ZGrid& grid,
                                          const BootstrapConfig& config);

// Single-level variant: sup over prefixes of |bootstrap T(., z0)|.
std::vector<double> bootstrap_sup_samples(const IncrementSeries& series,
                                          double z0,
                                          const BootstrapConfig& config);

// ceil(B level)-th order statistic of the draws; level in (0, 1].
double sample_quantile(std::vector<double> draws, double level);

// Diagnostic export, one row per replicate: "b,value".
void write_bootstrap_csv(const std::vector<double>& draws, std::ostream& out);

}  // namespace jumpbreak
