// Empirical tail integrals of an increment series: averages of the closed
// exceedance indicator 1{increment >= z} over index windows, normalized by the
// mesh so they estimate the jump measure's tail U(z).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jumpbreak/simulator.hpp"

namespace jumpbreak {

struct ZGrid {
    std::vector<double> points;  // strictly increasing, all positive

    double eps() const { return points.front(); }
    std::size_t size() const { return points.size(); }

    // Fine grids used for full-resolution test statistics.
    static ZGrid pure_jump_fine();                  // 0.05 j, j = 1..200
    static ZGrid brownian_fine(double delta_n);     // (2 + 0.5 j) sqrt(delta_n), j = 0..196
    // Coarse grids for power studies, 20 points each.
    static ZGrid pure_jump_coarse();                 // 0.2 j, j = 1..20
    static ZGrid brownian_coarse(double delta_n);    // 2.5 sqrt(delta_n) j, j = 1..20

    static ZGrid from_points(std::vector<double> points);
    // One value per line; blank lines and '#' comments ignored.
    static ZGrid from_file(const std::string& path);
};

void validate(const ZGrid& grid);

// Average of 1{increment_j >= z} over the 1-based inclusive window l1..l2,
// divided by delta_n.
double empirical_tail(const IncrementSeries& series, std::size_t l1, std::size_t l2,
                      double z);

// Prefix variant: counts the first floor(n theta) increments and normalizes by
// the horizon n delta_n, so theta = 1 recovers empirical_tail over the whole
// sample. theta is floored exactly as given; integer callers should use
// prefix counts directly.
double sequential_tail(const IncrementSeries& series, double theta, double z);

// Plain exceedance fraction, the bootstrap centering term.
double exceedance_fraction(const IncrementSeries& series, double z);

// Sparse view of a series against a grid: only increments at or above the
// smallest grid point matter for any grid statistic, and each carries the
// number of grid points it covers. Built once, shared by the statistic and
// bootstrap kernels.
struct ExceedanceEvents {
    std::size_t n = 0;
    double delta_n = 0.0;
    std::vector<double> grid;
    std::vector<std::uint32_t> pos;    // 1-based indices with value >= grid[0], ascending
    std::vector<std::uint32_t> rank;   // rank[i] = #grid points <= value at pos[i], in 1..K
    std::vector<std::uint32_t> level_count;  // per grid point k: #increments >= grid[k]

    static ExceedanceEvents build(const IncrementSeries& series, const ZGrid& grid);
};

}  // namespace jumpbreak
