// Rescaled comparisons of pre- and post-break empirical tails, their suprema
// over time and jump-size grids, the Kolmogorov distribution used for the
// analytic test, and the limiting covariances used for validation.
#pragma once

#include <cstddef>
#include <iosfwd>

#include "jumpbreak/empirical.hpp"
#include "jumpbreak/jump_model.hpp"

namespace jumpbreak {

// sqrt(n delta_n) lambda(theta) {U_{1:m}(z) - U_{m+1:n}(z)} with
// lambda(theta) = (m/n)(1 - m/n), m = floor(n theta); 0 when m is 0 or n.
// Algebraically equal to sqrt(n delta_n) {U_n(theta,z) - (m/n) U_n(1,z)},
// which t_process_prefix evaluates; the two agree to 1e-12 relative and the
// test suite enforces that.
double t_process(const IncrementSeries& series, double theta, double z);

// Identity form at an integer prefix m in 0..n:
// {C_m(z) - (m/n) C_n(z)} / sqrt(n delta_n) with C the exceedance counts.
double t_process_prefix(const IncrementSeries& series, std::size_t m, double z);

enum class ZSupMode {
    grid,      // sup over the given grid points
    observed,  // sup over observed increment values at or above grid.eps(),
               // the exact z-supremum since T is a step function in z
};

struct GridSup {
    double value = 0.0;     // sup over prefixes and z of |T|
    std::size_t arg_j = 0;  // smallest prefix attaining it (0 when T == 0)
};

GridSup grid_sup(const IncrementSeries& series, const ZGrid& grid,
                 ZSupMode mode = ZSupMode::grid);

// Max over prefixes and the grid of |T|; the full two-parameter statistic.
double sup_stat(const IncrementSeries& series, const ZGrid& grid,
                ZSupMode mode = ZSupMode::grid);

struct PointSup {
    double value = 0.0;
    std::size_t arg_j = 0;
};

PointSup point_sup(const IncrementSeries& series, double z0);

// Max over prefixes of |T(., z0)|.
double w_stat(const IncrementSeries& series, double z0);

// w_stat normalized by sqrt(U_{1:n}(z0)), which makes the null limit the
// Kolmogorov law; defined as 0 when no increment reaches z0 (the test built
// on it then never rejects).
double v_stat(const IncrementSeries& series, double z0);

// Kolmogorov distribution K(x) = P(sup |bridge| <= x), by its alternating
// series, terms truncated below 1e-12.
double ks_cdf(double x);
// Inverse by bisection to absolute tolerance 1e-9; p in (0,1).
double ks_quantile(double p);

// Limit covariance of the one-sample sequential tail process:
// min(theta1,theta2) U(max(z1,z2)).
double cov_limit_sequential(double theta1, double z1, double theta2, double z2,
                            const JumpModel& model);
// Limit covariance of T under no break:
// {min(theta1,theta2) - theta1 theta2} U(max(z1,z2)).
double cov_limit_t(double theta1, double z1, double theta2, double z2,
                   const JumpModel& model);

// Full surface j,theta,z,t for plotting; one row per (prefix, grid point).
void write_t_surface_csv(const IncrementSeries& series, const ZGrid& grid,
                         std::ostream& out);

}  // namespace jumpbreak
