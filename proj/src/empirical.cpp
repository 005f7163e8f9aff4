#include "jumpbreak/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace jumpbreak {

void validate(const ZGrid& grid) {
    if (grid.points.empty()) throw std::invalid_argument("grid must not be empty");
    double prev = 0.0;
    for (double z : grid.points) {
        if (!(z > prev) || !std::isfinite(z)) {
            throw std::invalid_argument("grid points must be positive, finite and strictly increasing");
        }
        prev = z;
    }
}

ZGrid ZGrid::pure_jump_fine() {
    std::vector<double> p(200);
    for (int j = 1; j <= 200; ++j) p[j - 1] = 0.05 * j;
    return from_points(std::move(p));
}

ZGrid ZGrid::brownian_fine(double delta_n) {
    if (!(delta_n > 0.0)) throw std::domain_error("delta_n must be positive");
    const double s = std::sqrt(delta_n);
    std::vector<double> p(197);
    for (int j = 0; j <= 196; ++j) p[j] = (2.0 + 0.5 * j) * s;
    return from_points(std::move(p));
}

ZGrid ZGrid::pure_jump_coarse() {
    std::vector<double> p(20);
    for (int j = 1; j <= 20; ++j) p[j - 1] = 0.2 * j;
    return from_points(std::move(p));
}

ZGrid ZGrid::brownian_coarse(double delta_n) {
    if (!(delta_n > 0.0)) throw std::domain_error("delta_n must be positive");
    const double s = std::sqrt(delta_n);
    std::vector<double> p(20);
    for (int j = 1; j <= 20; ++j) p[j - 1] = 2.5 * s * j;
    return from_points(std::move(p));
}

ZGrid ZGrid::from_points(std::vector<double> points) {
    // Order is canonical: any permutation of the same point set builds the
    // same grid, so grid statistics are permutation invariant by construction.
    std::sort(points.begin(), points.end());
    ZGrid g{std::move(points)};
    validate(g);
    return g;
}

ZGrid ZGrid::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file: " + path);
    std::vector<double> p;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        try {
            p.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw std::runtime_error("grid file row " + std::to_string(row) + ": bad value '" + line + "'");
        }
    }
    return from_points(std::move(p));
}

namespace {

std::size_t count_at_or_above(const std::vector<double>& values, std::size_t first,
                              std::size_t last, double z) {
    std::size_t c = 0;
    for (std::size_t j = first; j < last; ++j) c += (values[j] >= z);
    return c;
}

}  // namespace

double empirical_tail(const IncrementSeries& series, std::size_t l1, std::size_t l2,
                      double z) {
    validate(series);
    if (!(z > 0.0)) throw std::domain_error("z must be positive");
    if (l1 < 1 || l1 > l2 || l2 > series.n()) throw std::out_of_range("window must satisfy 1 <= l1 <= l2 <= n");
    const std::size_t count = count_at_or_above(series.values, l1 - 1, l2, z);
    return static_cast<double>(count) /
           (static_cast<double>(l2 - l1 + 1) * series.delta_n);
}

double sequential_tail(const IncrementSeries& series, double theta, double z) {
    validate(series);
    if (!(z > 0.0)) throw std::domain_error("z must be positive");
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::domain_error("theta must lie in [0,1]");
    const auto m = static_cast<std::size_t>(
        std::floor(static_cast<double>(series.n()) * theta));
    const std::size_t count = count_at_or_above(series.values, 0, m, z);
    return static_cast<double>(count) / series.horizon();
}

double exceedance_fraction(const IncrementSeries& series, double z) {
    validate(series);
    if (!(z > 0.0)) throw std::domain_error("z must be positive");
    return static_cast<double>(count_at_or_above(series.values, 0, series.n(), z)) /
           static_cast<double>(series.n());
}

ExceedanceEvents ExceedanceEvents::build(const IncrementSeries& series, const ZGrid& grid) {
    validate(series);
    validate(grid);
    ExceedanceEvents ev;
    ev.n = series.n();
    ev.delta_n = series.delta_n;
    ev.grid = grid.points;
    const double zmin = grid.points.front();
    for (std::size_t j = 0; j < series.n(); ++j) {
        const double v = series.values[j];
        if (v < zmin) continue;
        const auto r = static_cast<std::uint32_t>(
            std::upper_bound(grid.points.begin(), grid.points.end(), v) - grid.points.begin());
        ev.pos.push_back(static_cast<std::uint32_t>(j + 1));
        ev.rank.push_back(r);
    }
    ev.level_count.assign(grid.size(), 0);
    for (std::uint32_t r : ev.rank) {
        // the event covers grid points 0..r-1
        if (r > 0) ++ev.level_count[r - 1];
    }
    for (std::size_t k = grid.size() - 1; k-- > 0;) ev.level_count[k] += ev.level_count[k + 1];
    return ev;
}

}  // namespace jumpbreak
