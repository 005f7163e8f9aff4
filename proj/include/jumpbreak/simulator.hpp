// Path simulation for one-dimensional processes with deterministic drift,
// Brownian part and one-sided jumps, observed as n increments at mesh delta_n.
// Jumps come either from a compound-Poisson truncation of the jump measure or,
// on the beta family, from the exact increment law (beta delta_n^2 / 2) / Z^2.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jumpbreak/jump_model.hpp"

namespace jumpbreak {

struct ProcessSpec {
    double drift = 0.0;
    double sigma = 0.0;
    JumpModel jump_pre = JumpModel::beta_family(1.0);
    // A break replaces the jump measure by jump_post from increment
    // floor(n theta0) + 1 on; both must be set together.
    std::optional<JumpModel> jump_post;
    std::optional<double> theta0;

    bool has_break() const { return jump_post.has_value(); }
};

void validate(const ProcessSpec& spec);

struct IncrementSeries {
    double delta_n = 0.0;
    std::vector<double> values;

    std::size_t n() const { return values.size(); }
    double horizon() const { return static_cast<double>(values.size()) * delta_n; }
};

void validate(const IncrementSeries& series);

enum class JumpSampler { truncated_cp, exact_stable };

std::string to_string(JumpSampler method);
JumpSampler parse_jump_sampler(const std::string& name);

struct SamplerConfig {
    JumpSampler method = JumpSampler::truncated_cp;
    // Truncation level for truncated_cp; jumps below eps_sim are replaced by
    // their mean when compensate_small is set (beta family only).
    double eps_sim = 1e-4;
    bool compensate_small = true;
    std::uint64_t seed = 0;
};

// Conventional truncation level for an analysis grid with smallest point
// grid_eps: a factor 1e-4 below the finest scale the statistics look at.
double default_eps_sim(double grid_eps);

IncrementSeries simulate_path(const ProcessSpec& spec, std::size_t n, double delta_n,
                              const SamplerConfig& cfg);

struct TailProbe {
    double p_hat = 0.0;
    double se = 0.0;
};

// Plain Monte Carlo estimate of P(X_t >= z) for a no-break spec: fraction of
// `reps` simulated horizon-t increments at or above z, with binomial standard
// error. The remainder against the first-order value t U(z) is of higher
// order in t, but resolving it numerically takes far more than the usual rep
// counts; see small_time_study.
TailProbe small_time_tail_probability(const ProcessSpec& spec, double t, double z,
                                      std::size_t reps, std::uint64_t seed);
// Same probe with an explicit sampler choice (the default picks exact-stable
// on the beta family). A truncated-cp config with eps_sim far above any
// relevant jump size and compensation off turns the jump part off entirely.
TailProbe small_time_tail_probability(const ProcessSpec& spec, double t, double z,
                                      std::size_t reps, std::uint64_t seed,
                                      const SamplerConfig& cfg);

// CSV layout: "# delta_n=<...> n=<...> seed=<...>" comment, then a
// "j,increment" header, then 1-based rows.
void write_increments_csv(const IncrementSeries& series, std::ostream& out,
                          std::uint64_t seed);
IncrementSeries read_increments_csv(std::istream& in);
IncrementSeries read_increments_csv_file(const std::string& path);

// Differences a t,price table into increments; observation times must be
// equidistant (relative tolerance 1e-6 on the spacing).
IncrementSeries series_from_prices(const std::vector<double>& times,
                                   const std::vector<double>& prices);
IncrementSeries read_prices_csv(std::istream& in);

}  // namespace jumpbreak
