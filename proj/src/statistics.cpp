#include "jumpbreak/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace jumpbreak {

namespace {

void check_theta(double theta, const char* what) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

void check_z(double z) {
    if (!(z > 0.0)) throw std::domain_error("z must be positive");
}

}  // namespace

double t_process(const IncrementSeries& series, double theta, double z) {
    validate(series);
    check_theta(theta, "theta");
    check_z(z);
    const auto n = series.n();
    auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * theta));
    if (m > n) m = n;
    if (m == 0 || m == n) return 0.0;
    const double frac = static_cast<double>(m) / static_cast<double>(n);
    const double lambda = frac * (1.0 - frac);
    const double pre = empirical_tail(series, 1, m, z);
    const double post = empirical_tail(series, m + 1, n, z);
    return std::sqrt(series.horizon()) * lambda * (pre - post);
}

double t_process_prefix(const IncrementSeries& series, std::size_t m, double z) {
    validate(series);
    check_z(z);
    const auto n = series.n();
    if (m > n) throw std::out_of_range("prefix length exceeds sample size");
    std::size_t pre = 0, total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (series.values[j] >= z) {
            ++total;
            if (j < m) ++pre;
        }
    }
    const double frac = static_cast<double>(m) / static_cast<double>(n);
    const double centered =
        static_cast<double>(pre) - frac * static_cast<double>(total);
    return centered / std::sqrt(series.horizon());
}

namespace {

// Exact supremum of |C_m(z_k) - (m/n) C_n(z_k)| over all prefixes m and grid
// levels k. For fixed k the expression is piecewise linear in m with kinks
// only at exceedance positions, so the extremes over a constant-count run sit
// at its endpoints: the positions p and p-1 for each event p carry every
// candidate. Values at m = 0 and m = n are 0 and covered by the initial best.
GridSup sup_over_events(const ExceedanceEvents& ev) {
    GridSup best;
    const double n = static_cast<double>(ev.n);
    const std::size_t levels = ev.grid.size();
    for (std::size_t k = 0; k < levels; ++k) {
        const std::size_t cn = ev.level_count[k];
        if (cn == 0) continue;
        const double step = static_cast<double>(cn) / n;
        std::size_t c = 0;
        for (std::size_t e = 0; e < ev.pos.size(); ++e) {
            if (ev.rank[e] <= k) continue;
            const std::size_t p = ev.pos[e];
            const double before =
                static_cast<double>(c) - static_cast<double>(p - 1) * step;
            ++c;
            const double at =
                static_cast<double>(c) - static_cast<double>(p) * step;
            const double abs_before = std::fabs(before);
            const double abs_at = std::fabs(at);
            if (abs_before > best.value ||
                (abs_before == best.value && p - 1 < best.arg_j)) {
                best.value = abs_before;
                best.arg_j = p - 1;
            }
            if (abs_at > best.value ||
                (abs_at == best.value && p < best.arg_j)) {
                best.value = abs_at;
                best.arg_j = p;
            }
        }
    }
    best.value /= std::sqrt(ev.delta_n * n);
    return best;
}

}  // namespace

GridSup grid_sup(const IncrementSeries& series, const ZGrid& grid,
                 ZSupMode mode) {
    validate(series);
    validate(grid);
    if (mode == ZSupMode::grid)
        return sup_over_events(ExceedanceEvents::build(series, grid));
    std::vector<double> levels;
    for (double v : series.values)
        if (v >= grid.eps()) levels.push_back(v);
    if (levels.empty()) return GridSup{};
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return sup_over_events(
        ExceedanceEvents::build(series, ZGrid::from_points(levels)));
}

double sup_stat(const IncrementSeries& series, const ZGrid& grid,
                ZSupMode mode) {
    return grid_sup(series, grid, mode).value;
}

PointSup point_sup(const IncrementSeries& series, double z0) {
    validate(series);
    check_z(z0);
    const auto n = series.n();
    std::size_t cn = 0;
    for (double v : series.values)
        if (v >= z0) ++cn;
    PointSup best;
    if (cn == 0) return best;
    const double step = static_cast<double>(cn) / static_cast<double>(n);
    std::size_t c = 0;
    double raw = 0.0;
    for (std::size_t m = 1; m < n; ++m) {
        if (series.values[m - 1] >= z0) ++c;
        const double val = std::fabs(static_cast<double>(c) -
                                     static_cast<double>(m) * step);
        if (val > raw) {
            raw = val;
            best.arg_j = m;
        }
    }
    best.value = raw / std::sqrt(series.horizon());
    return best;
}

double w_stat(const IncrementSeries& series, double z0) {
    return point_sup(series, z0).value;
}

double v_stat(const IncrementSeries& series, double z0) {
    validate(series);
    check_z(z0);
    const double tail = empirical_tail(series, 1, series.n(), z0);
    if (tail == 0.0) return 0.0;
    return w_stat(series, z0) / std::sqrt(tail);
}

double ks_cdf(double x) {
    if (!(x > 0.0)) return 0.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1;; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        if (term < 1e-12) break;
        sum += sign * term;
        sign = -sign;
    }
    return std::clamp(1.0 - 2.0 * sum, 0.0, 1.0);
}

double ks_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("probability must lie in (0,1)");
    double lo = 0.0, hi = 5.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (ks_cdf(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double cov_limit_sequential(double theta1, double z1, double theta2, double z2,
                            const JumpModel& model) {
    check_theta(theta1, "theta1");
    check_theta(theta2, "theta2");
    check_z(z1);
    check_z(z2);
    return std::min(theta1, theta2) * model.tail(std::max(z1, z2));
}

double cov_limit_t(double theta1, double z1, double theta2, double z2,
                   const JumpModel& model) {
    check_theta(theta1, "theta1");
    check_theta(theta2, "theta2");
    check_z(z1);
    check_z(z2);
    return (std::min(theta1, theta2) - theta1 * theta2) *
           model.tail(std::max(z1, z2));
}

void write_t_surface_csv(const IncrementSeries& series, const ZGrid& grid,
                         std::ostream& out) {
    validate(series);
    validate(grid);
    const auto n = series.n();
    const auto levels = grid.size();
    const double root_kn = std::sqrt(series.horizon());
    std::vector<std::size_t> counts(levels, 0);
    std::vector<std::size_t> totals(levels, 0);
    for (double v : series.values) {
        const auto r = static_cast<std::size_t>(
            std::upper_bound(grid.points.begin(), grid.points.end(), v) -
            grid.points.begin());
        for (std::size_t k = 0; k < r; ++k) ++totals[k];
    }
    out << "j,theta,z,t\n";
    for (std::size_t j = 0; j <= n; ++j) {
        if (j > 0) {
            const auto r = static_cast<std::size_t>(
                std::upper_bound(grid.points.begin(), grid.points.end(),
                                 series.values[j - 1]) -
                grid.points.begin());
            for (std::size_t k = 0; k < r; ++k) ++counts[k];
        }
        const double frac = static_cast<double>(j) / static_cast<double>(n);
        for (std::size_t k = 0; k < levels; ++k) {
            const double t = (static_cast<double>(counts[k]) -
                              frac * static_cast<double>(totals[k])) /
                             root_kn;
            out << j << ',' << frac << ',' << grid.points[k] << ',' << t
                << '\n';
        }
    }
}

}  // namespace jumpbreak
