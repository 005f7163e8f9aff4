#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "jumpbreak/montecarlo.hpp"

using namespace jumpbreak;

namespace {

ExperimentConfig small_null_config() {
    ExperimentConfig cfg;
    cfg.n = 2250;
    cfg.delta_n = 1.0 / 225.0;  // k_n = 10, deliberately tiny
    cfg.replicates = 20;
    cfg.bootstrap.replicates = 25;
    cfg.z0_levels = {0.25, 1.0};
    cfg.seed = 2024;
    return cfg;
}

}  // namespace

TEST_CASE("experiment config JSON round trip") {
    ExperimentConfig cfg = small_null_config();
    cfg.beta_post = 3.5;
    cfg.theta0 = 0.25;
    cfg.drift = 1.0;
    cfg.sigma = 1.0;
    cfg.brownian_grid = true;
    cfg.coarse_grid = false;
    cfg.run_kscp1 = false;
    cfg.bootstrap.law = MultiplierLaw::rademacher;
    cfg.sampler.method = JumpSampler::truncated_cp;
    cfg.sampler.eps_sim = 1e-5;

    auto j = to_json(cfg);
    auto back = experiment_config_from_json(j);
    CHECK(back.n == cfg.n);
    CHECK(back.delta_n == cfg.delta_n);
    CHECK(back.drift == cfg.drift);
    CHECK(back.sigma == cfg.sigma);
    CHECK(back.beta_pre == cfg.beta_pre);
    REQUIRE(back.beta_post.has_value());
    CHECK(*back.beta_post == 3.5);
    CHECK(back.theta0 == cfg.theta0);
    CHECK(back.replicates == cfg.replicates);
    CHECK(back.alpha == cfg.alpha);
    CHECK(back.bootstrap.replicates == cfg.bootstrap.replicates);
    CHECK(back.bootstrap.law == cfg.bootstrap.law);
    CHECK(back.z0_levels == cfg.z0_levels);
    CHECK(back.brownian_grid == cfg.brownian_grid);
    CHECK(back.coarse_grid == cfg.coarse_grid);
    CHECK(back.run_kscp1 == cfg.run_kscp1);
    CHECK(back.run_kscp2 == cfg.run_kscp2);
    CHECK(back.run_cp == cfg.run_cp);
    CHECK(back.sampler.method == cfg.sampler.method);
    CHECK(back.sampler.eps_sim == cfg.sampler.eps_sim);
    CHECK(back.seed == cfg.seed);

    // Null beta_post survives the trip too.
    ExperimentConfig h0 = small_null_config();
    auto jh = to_json(h0);
    auto bh = experiment_config_from_json(jh);
    CHECK_FALSE(bh.beta_post.has_value());
}

TEST_CASE("config derives grid and process") {
    ExperimentConfig cfg = small_null_config();
    CHECK(cfg.k_n() == doctest::Approx(10.0));
    CHECK(cfg.grid().size() == 20);
    CHECK(cfg.grid().eps() == doctest::Approx(0.2));
    cfg.coarse_grid = false;
    CHECK(cfg.grid().size() == 200);
    cfg.brownian_grid = true;
    CHECK(cfg.grid().eps() == doctest::Approx(2.0 * std::sqrt(cfg.delta_n)));
    CHECK(cfg.grid().size() == 197);
    cfg.coarse_grid = true;
    CHECK(cfg.grid().size() == 20);
    CHECK(cfg.grid().eps() == doctest::Approx(2.5 * std::sqrt(cfg.delta_n)));

    auto h0 = cfg.process();
    CHECK_FALSE(h0.has_break());
    cfg.beta_post = 2.0;
    cfg.theta0 = 0.3;
    auto h1 = cfg.process();
    REQUIRE(h1.has_break());
    CHECK(*h1.theta0 == 0.3);
}

TEST_CASE("rate tables are bit-reproducible and well formed") {
    ExperimentConfig cfg = small_null_config();
    auto t1 = run_experiment(cfg);
    auto t2 = run_experiment(cfg);
    std::ostringstream a, b;
    write_csv(t1, a);
    write_csv(t2, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("method,z0,trials,rejections,rate,degenerate") != std::string::npos);
    CHECK(a.str().find("# n=") == 0);

    // One cp row plus one kscp1 and one kscp2 row per level.
    REQUIRE(t1.rows.size() == 1 + 2 * cfg.z0_levels.size());
    CHECK(t1.rows[0].method == TestMethod::cp);
    for (const auto& row : t1.rows) {
        CHECK(row.trials == cfg.replicates);
        CHECK(row.rejections <= row.trials);
        // rate * trials recovers the integer rejection count.
        CHECK(row.rate() * double(row.trials) == doctest::Approx(double(row.rejections)).epsilon(1e-12));
    }

    // A different seed changes the table.
    cfg.seed = 999;
    auto t3 = run_experiment(cfg);
    std::ostringstream c;
    write_csv(t3, c);
    CHECK(c.str() != a.str());
}

TEST_CASE("method toggles select rows") {
    ExperimentConfig cfg = small_null_config();
    cfg.run_cp = false;
    cfg.run_kscp1 = false;
    auto t = run_experiment(cfg);
    REQUIRE(t.rows.size() == cfg.z0_levels.size());
    for (const auto& row : t.rows) CHECK(row.method == TestMethod::kscp2);

    cfg.run_kscp2 = false;
    cfg.run_cp = true;
    cfg.z0_levels.clear();
    auto tc = run_experiment(cfg);
    REQUIRE(tc.rows.size() == 1);
    CHECK(tc.rows[0].method == TestMethod::cp);
}

TEST_CASE("estimator study under a strong break") {
    ExperimentConfig cfg;
    cfg.n = 22500;
    cfg.delta_n = 1.0 / 90.0;  // k_n = 250
    cfg.drift = 1.0;
    cfg.sigma = 1.0;
    cfg.beta_pre = 1.0;
    cfg.beta_post = 4.0;
    cfg.theta0 = 0.5;
    cfg.replicates = 50;
    cfg.seed = 31;
    const double z0 = 5.0 * std::sqrt(cfg.delta_n);
    auto study = run_estimator_study(cfg, z0);
    CHECK(study.theta0 == 0.5);
    CHECK(study.z0 == z0);
    REQUIRE(study.grid_estimates.size() == 50);
    REQUIRE(study.point_estimates.size() == 50);
    CHECK(study.grid_mae() < 0.08);
    CHECK(study.point_mae() < 0.08);

    std::ostringstream out;
    write_csv(study, out);
    CHECK(out.str().find("replicate,theta_hat,mode") != std::string::npos);

    // H0 configs are rejected: the study needs a break design.
    ExperimentConfig h0 = small_null_config();
    CHECK_THROWS(run_estimator_study(h0, 0.5));
}

TEST_CASE("covariance validation agrees with worked limits") {
    // The per-path conditional covariance carries a -delta_n U(z1)U(z2)
    // centering term, so the horizon is split finely to push it inside the
    // noise band while k_n stays at 250.
    ExperimentConfig cfg;
    cfg.n = 90000;
    cfg.delta_n = 1.0 / 360.0;
    cfg.seed = 64;
    const double zp = 1.0 / std::numbers::pi;
    std::vector<std::array<double, 4>> pairs{
        {1.0, 0.5, 1.0, 0.5},
        {0.5, zp, 0.5, zp},
        {0.3, 0.25, 0.7, 1.0},
    };
    auto checks = validate_covariance(cfg, pairs, 16, true);
    REQUIRE(checks.size() == 3);
    CHECK(checks[0].limit == 0.0);
    CHECK(std::abs(checks[0].estimate) < 1e-12);
    CHECK(checks[1].limit == doctest::Approx(0.25).epsilon(1e-13));
    for (const auto& c : checks) {
        CHECK(std::abs(c.zscore()) < 4.0);
    }

    // The sequential (uncentered) limit at theta = 1 is U itself.
    std::vector<std::array<double, 4>> seq_pairs{{1.0, 0.5, 1.0, 0.5}};
    auto seq = validate_covariance(cfg, seq_pairs, 16, false);
    auto model = JumpModel::beta_family(1.0);
    CHECK(seq[0].limit == doctest::Approx(model.tail(0.5)).epsilon(1e-13));
    CHECK(std::abs(seq[0].zscore()) < 4.0);

    CHECK_THROWS(validate_covariance(cfg, pairs, 1, true));
    ExperimentConfig broken = cfg;
    broken.beta_post = 2.0;
    CHECK_THROWS(validate_covariance(broken, pairs, 8, true));
}

TEST_CASE("exact small-time tail and its first-order remainder") {
    // erf((t/2) sqrt(beta/z)) against an independently computed value.
    CHECK(exact_small_time_tail(2.0, 1.0, 0.5) ==
          doctest::Approx(std::erf(1.0)).epsilon(1e-15));
    const double u1 = std::sqrt(1.0 / std::numbers::pi);
    // Analytic remainder slope over the dyadic horizons is 3 up to the
    // next order; the regression over t = 2^-4 .. 2^-9 gives 2.99993.
    std::vector<double> lx, ly;
    for (int p = 4; p <= 9; ++p) {
        double t = std::ldexp(1.0, -p);
        double rem = exact_small_time_tail(1.0, t, 1.0) - t * u1;
        lx.push_back(std::log(t));
        ly.push_back(std::log(std::abs(rem)));
    }
    double slope = ols_slope(lx, ly);
    CHECK(slope == doctest::Approx(2.9999302020572705).epsilon(1e-10));
    CHECK(slope >= 1.7);
    CHECK(ols_slope_se(lx, ly) < 0.15);
}

TEST_CASE("least squares helpers") {
    std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    std::vector<double> y{2.0, 4.0, 6.0, 8.0};
    CHECK(ols_slope(x, y) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ols_slope_se(x, y) == doctest::Approx(0.0).epsilon(1e-12));
    std::vector<double> y2{2.1, 3.8, 6.2, 7.9};
    CHECK(ols_slope(x, y2) == doctest::Approx(1.98).epsilon(1e-12));
    CHECK(ols_slope_se(x, y2) > 0.0);
    CHECK_THROWS(ols_slope(std::vector<double>{1.0}, std::vector<double>{2.0}));
    CHECK_THROWS(ols_slope(x, std::vector<double>{1.0, 2.0}));
}

TEST_CASE("isotonic fit pools adjacent violators") {
    CHECK(isotonic_fit({3.0, 1.0, 2.0}) == std::vector<double>{2.0, 2.0, 2.0});
    CHECK(isotonic_fit({1.0, 2.0, 3.0}) == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(isotonic_fit({2.0, 1.0}) == std::vector<double>{1.5, 1.5});
    auto w = isotonic_fit({3.0, 1.0}, {3.0, 1.0});
    CHECK(w[0] == doctest::Approx(2.5));
    CHECK(w[1] == doctest::Approx(2.5));
    auto fit = isotonic_fit({0.05, 0.21, 0.18, 0.44, 0.97});
    for (std::size_t i = 1; i < fit.size(); ++i) CHECK(fit[i] >= fit[i - 1]);
}

TEST_CASE("small-time study wiring") {
    ProcessSpec spec;
    spec.jump_pre = JumpModel::beta_family(1.0);
    std::vector<double> times{1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0};
    auto study = small_time_study(spec, 1.0, times, 20000, 11);
    REQUIRE(study.p_hat.size() == 3);
    REQUIRE(study.remainder.size() == 3);
    CHECK(study.z == 1.0);
    const double u1 = std::sqrt(1.0 / std::numbers::pi);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(study.p_hat[i] == doctest::Approx(times[i] * u1).epsilon(0.25));
        CHECK(study.remainder[i] == doctest::Approx(study.p_hat[i] - times[i] * u1).epsilon(1e-12));
        CHECK(study.se[i] > 0.0);
    }
    // Same seed reproduces the study bit for bit.
    auto again = small_time_study(spec, 1.0, times, 20000, 11);
    CHECK(again.p_hat == study.p_hat);
    CHECK(again.slope == study.slope);

    auto multi = validate_small_time(spec, std::vector<double>{0.5, 1.0}, times, 5000, 3);
    REQUIRE(multi.size() == 2);
    CHECK(multi[0].z == 0.5);
    CHECK(multi[1].z == 1.0);
}
