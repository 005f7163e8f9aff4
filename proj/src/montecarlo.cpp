#include "jumpbreak/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace jumpbreak {

ZGrid ExperimentConfig::grid() const {
    if (brownian_grid)
        return coarse_grid ? ZGrid::brownian_coarse(delta_n)
                           : ZGrid::brownian_fine(delta_n);
    return coarse_grid ? ZGrid::pure_jump_coarse() : ZGrid::pure_jump_fine();
}

ProcessSpec ExperimentConfig::process() const {
    ProcessSpec spec;
    spec.drift = drift;
    spec.sigma = sigma;
    spec.jump_pre = JumpModel::beta_family(beta_pre);
    if (beta_post) {
        spec.jump_post = JumpModel::beta_family(*beta_post);
        spec.theta0 = theta0;
    }
    return spec;
}

nlohmann::json to_json(const ExperimentConfig& config) {
    nlohmann::json j{
        {"n", config.n},
        {"delta_n", config.delta_n},
        {"drift", config.drift},
        {"sigma", config.sigma},
        {"beta_pre", config.beta_pre},
        {"beta_post", nullptr},
        {"theta0", config.theta0},
        {"replicates", config.replicates},
        {"alpha", config.alpha},
        {"bootstrap",
         {{"replicates", config.bootstrap.replicates},
          {"law", to_string(config.bootstrap.law)}}},
        {"z0_levels", config.z0_levels},
        {"brownian_grid", config.brownian_grid},
        {"coarse_grid", config.coarse_grid},
        {"run_kscp1", config.run_kscp1},
        {"run_kscp2", config.run_kscp2},
        {"run_cp", config.run_cp},
        {"sampler",
         {{"method", to_string(config.sampler.method)},
          {"eps_sim", config.sampler.eps_sim},
          {"compensate_small", config.sampler.compensate_small}}},
        {"seed", config.seed},
    };
    if (config.beta_post) j["beta_post"] = *config.beta_post;
    return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.n = j.value("n", c.n);
    c.delta_n = j.value("delta_n", c.delta_n);
    c.drift = j.value("drift", c.drift);
    c.sigma = j.value("sigma", c.sigma);
    c.beta_pre = j.value("beta_pre", c.beta_pre);
    if (j.contains("beta_post") && !j.at("beta_post").is_null())
        c.beta_post = j.at("beta_post").get<double>();
    c.theta0 = j.value("theta0", c.theta0);
    c.replicates = j.value("replicates", c.replicates);
    c.alpha = j.value("alpha", c.alpha);
    if (j.contains("bootstrap")) {
        const auto& b = j.at("bootstrap");
        c.bootstrap.replicates = b.value("replicates", c.bootstrap.replicates);
        if (b.contains("law"))
            c.bootstrap.law = parse_multiplier_law(b.at("law").get<std::string>());
    }
    if (j.contains("z0_levels"))
        c.z0_levels = j.at("z0_levels").get<std::vector<double>>();
    c.brownian_grid = j.value("brownian_grid", c.brownian_grid);
    c.coarse_grid = j.value("coarse_grid", c.coarse_grid);
    c.run_kscp1 = j.value("run_kscp1", c.run_kscp1);
    c.run_kscp2 = j.value("run_kscp2", c.run_kscp2);
    c.run_cp = j.value("run_cp", c.run_cp);
    if (j.contains("sampler")) {
        const auto& s = j.at("sampler");
        if (s.contains("method"))
            c.sampler.method = parse_jump_sampler(s.at("method").get<std::string>());
        c.sampler.eps_sim = s.value("eps_sim", c.sampler.eps_sim);
        c.sampler.compensate_small =
            s.value("compensate_small", c.sampler.compensate_small);
    }
    c.seed = j.value("seed", c.seed);
    return c;
}

RejectionTable run_experiment(const ExperimentConfig& config) {
    if (config.replicates == 0)
        throw std::invalid_argument("replicate count must be positive");
    RejectionTable table;
    table.config = config;

    std::size_t cp_row = std::numeric_limits<std::size_t>::max();
    if (config.run_cp) {
        cp_row = table.rows.size();
        RateRow row;
        row.method = TestMethod::cp;
        table.rows.push_back(row);
    }
    std::vector<std::size_t> k1_rows, k2_rows;
    for (double z0 : config.z0_levels) {
        if (config.run_kscp1) {
            k1_rows.push_back(table.rows.size());
            RateRow row;
            row.method = TestMethod::kscp1;
            row.z0 = z0;
            table.rows.push_back(row);
        }
        if (config.run_kscp2) {
            k2_rows.push_back(table.rows.size());
            RateRow row;
            row.method = TestMethod::kscp2;
            row.z0 = z0;
            table.rows.push_back(row);
        }
    }

    const auto spec = config.process();
    const auto grid = config.run_cp ? config.grid() : ZGrid::from_points({1.0});
    auto tally = [&table](std::size_t row, const TestOutcome& outcome) {
        auto& r = table.rows[row];
        ++r.trials;
        if (outcome.reject) ++r.rejections;
        if (outcome.degenerate) ++r.degenerate;
    };

    for (std::size_t r = 0; r < config.replicates; ++r) {
        SamplerConfig scfg = config.sampler;
        scfg.seed = derive_stream(config.seed, 2 * r);
        const auto series = simulate_path(spec, config.n, config.delta_n, scfg);
        const std::uint64_t boot_base = derive_stream(config.seed, 2 * r + 1);

        if (config.run_cp) {
            BootstrapConfig bc = config.bootstrap;
            bc.seed = derive_stream(boot_base, 0);
            tally(cp_row, cp_test(series, grid, config.alpha, bc));
        }
        std::size_t k1 = 0, k2 = 0;
        for (std::size_t i = 0; i < config.z0_levels.size(); ++i) {
            const double z0 = config.z0_levels[i];
            if (config.run_kscp1)
                tally(k1_rows[k1++], kscp_test1(series, z0, config.alpha));
            if (config.run_kscp2) {
                BootstrapConfig bc = config.bootstrap;
                bc.seed = derive_stream(boot_base, i + 1);
                tally(k2_rows[k2++], kscp_test2(series, z0, config.alpha, bc));
            }
        }
    }
    return table;
}

namespace {

void write_config_comment(const ExperimentConfig& c, std::ostream& out) {
    out << "# n=" << c.n << " delta_n=" << c.delta_n << " k_n=" << c.k_n()
        << " drift=" << c.drift << " sigma=" << c.sigma
        << " beta_pre=" << c.beta_pre << " beta_post=";
    if (c.beta_post)
        out << *c.beta_post << " theta0=" << c.theta0;
    else
        out << "none";
    out << " alpha=" << c.alpha << " replicates=" << c.replicates
        << " B=" << c.bootstrap.replicates << " law="
        << to_string(c.bootstrap.law) << " sampler="
        << to_string(c.sampler.method) << " eps_sim=" << c.sampler.eps_sim
        << " seed=" << c.seed << '\n';
}

}  // namespace

void write_csv(const RejectionTable& table, std::ostream& out) {
    write_config_comment(table.config, out);
    out << "method,z0,trials,rejections,rate,degenerate\n";
    for (const auto& row : table.rows) {
        out << to_string(row.method) << ',';
        if (row.z0) out << *row.z0;
        out << ',' << row.trials << ',' << row.rejections << ',' << row.rate()
            << ',' << row.degenerate << '\n';
    }
}

namespace {

double mean_abs_error(const std::vector<double>& estimates, double theta0) {
    if (estimates.empty()) return 0.0;
    double sum = 0.0;
    for (double t : estimates) sum += std::fabs(t - theta0);
    return sum / static_cast<double>(estimates.size());
}

}  // namespace

double EstimatorStudy::grid_mae() const {
    return mean_abs_error(grid_estimates, theta0);
}

double EstimatorStudy::point_mae() const {
    return mean_abs_error(point_estimates, theta0);
}

EstimatorStudy run_estimator_study(const ExperimentConfig& config, double z0) {
    if (config.replicates == 0)
        throw std::invalid_argument("replicate count must be positive");
    if (!config.beta_post)
        throw std::invalid_argument("estimator study needs a break design");
    EstimatorStudy study;
    study.theta0 = config.theta0;
    study.z0 = z0;
    const auto spec = config.process();
    const auto grid = config.grid();
    for (std::size_t r = 0; r < config.replicates; ++r) {
        SamplerConfig scfg = config.sampler;
        scfg.seed = derive_stream(config.seed, 2 * r);
        const auto series = simulate_path(spec, config.n, config.delta_n, scfg);
        const auto as_grid = estimate_changepoint(series, grid);
        const auto as_point = estimate_changepoint(series, z0);
        study.grid_estimates.push_back(as_grid.theta_hat);
        study.point_estimates.push_back(as_point.theta_hat);
        if (as_grid.degenerate) ++study.grid_degenerate;
        if (as_point.degenerate) ++study.point_degenerate;
    }
    return study;
}

void write_csv(const EstimatorStudy& study, std::ostream& out) {
    out << "# theta0=" << study.theta0 << " z0=" << study.z0
        << " grid_mae=" << study.grid_mae() << " point_mae="
        << study.point_mae() << " grid_degenerate=" << study.grid_degenerate
        << " point_degenerate=" << study.point_degenerate << '\n';
    out << "replicate,theta_hat,mode\n";
    for (std::size_t r = 0; r < study.grid_estimates.size(); ++r) {
        out << r << ',' << study.grid_estimates[r] << ",sup-over-grid\n";
        out << r << ',' << study.point_estimates[r] << ",fixed-z0\n";
    }
}

std::vector<CovarianceCheck> validate_covariance(
    const ExperimentConfig& config,
    const std::vector<std::array<double, 4>>& pairs, std::size_t paths,
    bool centered) {
    if (paths < 2)
        throw std::invalid_argument("need at least two paths");
    const auto spec = config.process();
    if (spec.has_break())
        throw std::invalid_argument(
            "covariance validation needs a no-break design");
    std::vector<std::vector<double>> per_pair(pairs.size());
    for (std::size_t p = 0; p < paths; ++p) {
        SamplerConfig scfg = config.sampler;
        scfg.seed = derive_stream(config.seed, 2 * p);
        const auto series = simulate_path(spec, config.n, config.delta_n, scfg);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& q = pairs[i];
            per_pair[i].push_back(
                bootstrap_covariance(series, q[0], q[1], q[2], q[3], centered));
        }
    }
    const auto model = JumpModel::beta_family(config.beta_pre);
    std::vector<CovarianceCheck> checks;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& q = pairs[i];
        CovarianceCheck c;
        c.theta1 = q[0];
        c.z1 = q[1];
        c.theta2 = q[2];
        c.z2 = q[3];
        c.limit = centered
                      ? cov_limit_t(q[0], q[1], q[2], q[3], model)
                      : cov_limit_sequential(q[0], q[1], q[2], q[3], model);
        double mean = 0.0;
        for (double v : per_pair[i]) mean += v;
        mean /= static_cast<double>(paths);
        double var = 0.0;
        for (double v : per_pair[i]) var += (v - mean) * (v - mean);
        var /= static_cast<double>(paths - 1);
        c.estimate = mean;
        c.se = std::sqrt(var / static_cast<double>(paths));
        checks.push_back(c);
    }
    return checks;
}

SmallTimeStudy small_time_study(const ProcessSpec& spec, double z,
                                std::span<const double> times,
                                std::size_t replicates, std::uint64_t seed) {
    validate(spec);
    if (spec.has_break())
        throw std::invalid_argument("small-time study needs a no-break design");
    if (!(z > 0.0)) throw std::invalid_argument("z must be positive");
    if (times.size() < 2)
        throw std::invalid_argument("need at least two horizons");
    SmallTimeStudy study;
    study.z = z;
    const double u = spec.jump_pre.tail(z);
    std::vector<double> log_t, log_r;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (!(t > 0.0)) throw std::invalid_argument("horizons must be positive");
        const auto probe = small_time_tail_probability(spec, t, z, replicates,
                                                       derive_stream(seed, i));
        study.times.push_back(t);
        study.p_hat.push_back(probe.p_hat);
        study.se.push_back(probe.se);
        const double rem = probe.p_hat - t * u;
        study.remainder.push_back(rem);
        if (rem != 0.0) {
            log_t.push_back(std::log(t));
            log_r.push_back(std::log(std::fabs(rem)));
        }
    }
    if (log_t.size() >= 2) {
        study.slope = ols_slope(log_t, log_r);
        study.slope_se = ols_slope_se(log_t, log_r);
    } else {
        study.slope = std::numeric_limits<double>::quiet_NaN();
        study.slope_se = std::numeric_limits<double>::quiet_NaN();
    }
    return study;
}

std::vector<SmallTimeStudy> validate_small_time(const ProcessSpec& spec,
                                                std::span<const double> z_list,
                                                std::span<const double> times,
                                                std::size_t replicates,
                                                std::uint64_t seed) {
    std::vector<SmallTimeStudy> studies;
    studies.reserve(z_list.size());
    for (std::size_t i = 0; i < z_list.size(); ++i)
        studies.push_back(small_time_study(spec, z_list[i], times, replicates,
                                           derive_stream(seed, i)));
    return studies;
}

double exact_small_time_tail(double beta, double t, double z) {
    if (!(beta > 0.0) || !(t > 0.0) || !(z > 0.0))
        throw std::invalid_argument("beta, t and z must be positive");
    return std::erf(0.5 * t * std::sqrt(beta / z));
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("need matching samples of size at least 2");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("regressor is constant");
    return sxy / sxx;
}

double ols_slope_se(std::span<const double> x, std::span<const double> y) {
    const double slope = ols_slope(x, y);
    const auto n = x.size();
    if (n < 3) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double rss = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (y[i] - my) - slope * (x[i] - mx);
        rss += r * r;
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx);
}

std::vector<double> isotonic_fit(const std::vector<double>& y,
                                 const std::vector<double>& weights) {
    if (!weights.empty() && weights.size() != y.size())
        throw std::invalid_argument("weight count must match sample size");
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    struct Block {
        double weight;
        double mean;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        blocks.push_back({w, y[i], 1});
        while (blocks.size() >= 2 &&
               blocks[blocks.size() - 2].mean >= blocks.back().mean) {
            const Block top = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            const double w_sum = prev.weight + top.weight;
            prev.mean = (prev.weight * prev.mean + top.weight * top.mean) / w_sum;
            prev.weight = w_sum;
            prev.count += top.count;
        }
    }
    std::vector<double> fit;
    fit.reserve(y.size());
    for (const auto& b : blocks)
        fit.insert(fit.end(), b.count, b.mean);
    return fit;
}

}  // namespace jumpbreak
