#include "jumpbreak/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace jumpbreak {

std::string to_string(MultiplierLaw law) {
    switch (law) {
        case MultiplierLaw::gaussian: return "gaussian";
        case MultiplierLaw::rademacher: return "rademacher";
    }
    throw std::logic_error("unknown multiplier law");
}

MultiplierLaw parse_multiplier_law(const std::string& name) {
    if (name == "gaussian") return MultiplierLaw::gaussian;
    if (name == "rademacher") return MultiplierLaw::rademacher;
    throw std::invalid_argument("unknown multiplier law: " + name);
}

std::vector<double> draw_multipliers(std::size_t n, MultiplierLaw law,
                                     Rng& rng) {
    std::vector<double> xi(n);
    if (law == MultiplierLaw::gaussian) {
        for (auto& x : xi) x = rng.normal();
    } else {
        for (auto& x : xi) x = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    }
    return xi;
}

double bootstrap_t_process(const IncrementSeries& series,
                           std::span<const double> xi, double theta,
                           double z) {
    validate(series);
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("theta must lie in [0,1]");
    if (!(z > 0.0)) throw std::invalid_argument("z must be positive");
    const auto n = series.n();
    if (xi.size() != n)
        throw std::invalid_argument("multiplier count must match sample size");
    auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * theta));
    if (m > n) m = n;
    double p_m = 0.0, p_n = 0.0, s_m = 0.0, s_n = 0.0;
    std::size_t c_n = 0;
    for (std::size_t j = 0; j < n; ++j) {
        p_n += xi[j];
        if (j < m) p_m += xi[j];
        if (series.values[j] >= z) {
            ++c_n;
            s_n += xi[j];
            if (j < m) s_m += xi[j];
        }
    }
    const double nd = static_cast<double>(n);
    const double cn = static_cast<double>(c_n);
    const double g_theta = s_m - (p_m / nd) * cn;
    const double g_one = s_n - (p_n / nd) * cn;
    const double frac = static_cast<double>(m) / nd;
    return (g_theta - frac * g_one) / std::sqrt(series.horizon());
}

double bootstrap_g_process(const IncrementSeries& series,
                           std::span<const double> xi, double theta,
                           double z) {
    validate(series);
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("theta must lie in [0,1]");
    if (!(z > 0.0)) throw std::invalid_argument("z must be positive");
    const auto n = series.n();
    if (xi.size() != n)
        throw std::invalid_argument("multiplier count must match sample size");
    auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * theta));
    if (m > n) m = n;
    double p_m = 0.0, s_m = 0.0;
    std::size_t c_n = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j < m) p_m += xi[j];
        if (series.values[j] >= z) {
            ++c_n;
            if (j < m) s_m += xi[j];
        }
    }
    const double g =
        s_m - (p_m / static_cast<double>(n)) * static_cast<double>(c_n);
    return g / std::sqrt(series.horizon());
}

double bootstrap_covariance(const IncrementSeries& series, double theta1,
                            double z1, double theta2, double z2,
                            bool centered) {
    validate(series);
    if (!(theta1 >= 0.0 && theta1 <= 1.0) || !(theta2 >= 0.0 && theta2 <= 1.0))
        throw std::invalid_argument("theta must lie in [0,1]");
    if (!(z1 > 0.0) || !(z2 > 0.0))
        throw std::invalid_argument("z must be positive");
    const auto n = series.n();
    const double nd = static_cast<double>(n);
    const auto m1 = static_cast<std::size_t>(std::floor(nd * theta1));
    const auto m2 = static_cast<std::size_t>(std::floor(nd * theta2));
    std::size_t c1 = 0, c2 = 0;
    for (double v : series.values) {
        if (v >= z1) ++c1;
        if (v >= z2) ++c2;
    }
    const double eta1 = static_cast<double>(c1) / nd;
    const double eta2 = static_cast<double>(c2) / nd;
    const double f1 = static_cast<double>(m1) / nd;
    const double f2 = static_cast<double>(m2) / nd;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = (series.values[j] >= z1 ? 1.0 : 0.0) - eta1;
        const double b = (series.values[j] >= z2 ? 1.0 : 0.0) - eta2;
        if (centered) {
            const double w1 = (j < m1 ? 1.0 : 0.0) - f1;
            const double w2 = (j < m2 ? 1.0 : 0.0) - f2;
            sum += w1 * a * w2 * b;
        } else if (j < std::min(m1, m2)) {
            sum += a * b;
        }
    }
    return sum / series.horizon();
}

double bootstrap_sup(const ExceedanceEvents& events,
                     std::span<const double> xi) {
    const std::size_t n = events.n;
    if (xi.size() != n)
        throw std::invalid_argument("multiplier count must match sample size");
    const std::size_t levels = events.grid.size();
    const double nd = static_cast<double>(n);

    // Per prefix m and level k the draw is
    //   |S_k(m) - (C_k(n)/n) P(m) - (d_k/n) m| / sqrt(k_n)
    // with P the multiplier prefix sum, S_k the multiplier sum over
    // exceedances of level k, and d_k = S_k(n) - (P(n)/n) C_k(n) the theta = 1
    // anchor. S_k is constant between the exceedances of level k, so each
    // level is scanned as a few long runs over m in which only the two shared
    // arrays P[m] and m vary; those runs vectorize. Levels nobody reaches
    // contribute exactly 0 and are skipped.
    std::vector<double> p(n + 1), md(n + 1);
    p[0] = 0.0;
    md[0] = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
        p[m] = p[m - 1] + xi[m - 1];
        md[m] = static_cast<double>(m);
    }
    const double p_scale = p[n] / nd;

    // Event positions per level (CSR). Event e covers levels 0..rank-1, and
    // walking the global list in position order keeps each level ascending.
    std::vector<std::size_t> offset(levels + 1, 0);
    for (std::size_t k = 0; k < levels; ++k)
        offset[k + 1] = offset[k] + events.level_count[k];
    std::vector<std::uint32_t> level_pos(offset[levels]);
    {
        std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
        for (std::size_t e = 0; e < events.pos.size(); ++e)
            for (std::size_t k = 0; k < events.rank[e]; ++k)
                level_pos[fill[k]++] = events.pos[e];
    }

    double best = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
        if (events.level_count[k] == 0) continue;
        const double ck = static_cast<double>(events.level_count[k]);
        const double a = ck / nd;
        double skn = 0.0;
        for (std::size_t i = offset[k]; i < offset[k + 1]; ++i)
            skn += xi[level_pos[i] - 1];
        const double b = (skn - p_scale * ck) / nd;

        double s = 0.0;
        std::size_t lo = 0;
        for (std::size_t i = offset[k]; i <= offset[k + 1]; ++i) {
            const std::size_t hi = i < offset[k + 1] ? level_pos[i] : n + 1;
            double run_best = 0.0;
#pragma omp simd reduction(max : run_best)
            for (std::size_t m = lo; m < hi; ++m) {
                const double v = std::fabs(s - a * p[m] - b * md[m]);
                run_best = v > run_best ? v : run_best;
            }
            if (run_best > best) best = run_best;
            if (i < offset[k + 1]) {
                s += xi[hi - 1];
                lo = hi;
            }
        }
    }
    return best / std::sqrt(events.delta_n * nd);
}

double bootstrap_sup_reference(const ExceedanceEvents& events,
                               std::span<const double> xi) {
    const std::size_t n = events.n;
    if (xi.size() != n)
        throw std::invalid_argument("multiplier count must match sample size");
    const std::size_t levels = events.grid.size();
    const double nd = static_cast<double>(n);

    std::vector<double> p(n + 1, 0.0);
    for (std::size_t m = 1; m <= n; ++m) p[m] = p[m - 1] + xi[m - 1];

    std::vector<double> s(levels * (n + 1), 0.0);
    for (std::size_t k = 0; k < levels; ++k) {
        double* row = s.data() + k * (n + 1);
        std::size_t e = 0;
        for (std::size_t m = 1; m <= n; ++m) {
            double add = 0.0;
            while (e < events.pos.size() && events.pos[e] == m) {
                if (events.rank[e] > k) add += xi[m - 1];
                ++e;
            }
            row[m] = row[m - 1] + add;
        }
    }

    double best = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
        const double* row = s.data() + k * (n + 1);
        const double ck = static_cast<double>(events.level_count[k]);
        const double anchor = row[n] - (p[n] / nd) * ck;
        for (std::size_t m = 0; m <= n; ++m) {
            const double frac = static_cast<double>(m) / nd;
            const double v =
                std::fabs(row[m] - (p[m] / nd) * ck - frac * anchor);
            if (v > best) best = v;
        }
    }
    return best / std::sqrt(events.delta_n * nd);
}

namespace {

std::vector<double> sup_samples(const ExceedanceEvents& events,
                                const BootstrapConfig& config) {
    if (config.replicates == 0)
        throw std::invalid_argument("replicate count must be positive");
    std::vector<double> draws;
    draws.reserve(config.replicates);
    for (std::size_t b = 1; b <= config.replicates; ++b) {
        Rng rng(derive_stream(config.seed, b));
        const auto xi = draw_multipliers(events.n, config.law, rng);
        draws.push_back(bootstrap_sup(events, xi));
    }
    return draws;
}

}  // namespace

std::vector<double> bootstrap_sup_samples(const IncrementSeries& series,
                                          const ZGrid& grid,
                                          const BootstrapConfig& config) {
    validate(series);
    validate(grid);
    return sup_samples(ExceedanceEvents::build(series, grid), config);
}

std::vector<double> bootstrap_sup_samples(const IncrementSeries& series,
                                          double z0,
                                          const BootstrapConfig& config) {
    validate(series);
    if (!(z0 > 0.0)) throw std::invalid_argument("z0 must be positive");
    return sup_samples(
        ExceedanceEvents::build(series, ZGrid::from_points({z0})), config);
}

double sample_quantile(std::vector<double> draws, double level) {
    if (draws.empty())
        throw std::invalid_argument("quantile of an empty sample");
    if (!(level > 0.0 && level <= 1.0))
        throw std::invalid_argument("quantile level must lie in (0,1]");
    auto idx = static_cast<std::size_t>(
        std::ceil(static_cast<double>(draws.size()) * level - 1e-9));
    if (idx == 0) idx = 1;
    if (idx > draws.size()) idx = draws.size();
    std::nth_element(draws.begin(), draws.begin() + (idx - 1), draws.end());
    return draws[idx - 1];
}

void write_bootstrap_csv(const std::vector<double>& draws, std::ostream& out) {
    out << "b,value\n";
    for (std::size_t b = 0; b < draws.size(); ++b)
        out << (b + 1) << ',' << draws[b] << '\n';
}

}  // namespace jumpbreak
