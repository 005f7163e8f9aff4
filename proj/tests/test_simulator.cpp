#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jumpbreak/simulator.hpp"
#include "jumpbreak/statistics.hpp"

using namespace jumpbreak;

namespace {

ProcessSpec pure_jump(double beta) {
    ProcessSpec spec;
    spec.jump_pre = JumpModel::beta_family(beta);
    return spec;
}

// Two-sample Kolmogorov-Smirnov distance and asymptotic p-value.
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i; else ++j;
        double fa = double(i) / double(a.size());
        double fb = double(j) / double(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

double ks_two_sample_pvalue(const std::vector<double>& a, const std::vector<double>& b) {
    double d = ks_two_sample(a, b);
    double ne = double(a.size()) * double(b.size()) / double(a.size() + b.size());
    return 1.0 - ks_cdf(std::sqrt(ne) * d);
}

}  // namespace

TEST_CASE("sampler names round-trip") {
    CHECK(to_string(JumpSampler::truncated_cp) == "truncated-cp");
    CHECK(to_string(JumpSampler::exact_stable) == "exact-stable");
    CHECK(parse_jump_sampler("truncated-cp") == JumpSampler::truncated_cp);
    CHECK(parse_jump_sampler("exact-stable") == JumpSampler::exact_stable);
    CHECK_THROWS_AS(parse_jump_sampler("bogus"), std::invalid_argument);
}

TEST_CASE("identical inputs give bit-identical series") {
    ProcessSpec spec = pure_jump(1.5);
    spec.drift = 0.4;
    spec.sigma = 1.0;
    SamplerConfig cfg;
    cfg.method = JumpSampler::exact_stable;
    cfg.seed = 99;
    auto a = simulate_path(spec, 5000, 1.0 / 225.0, cfg);
    auto b = simulate_path(spec, 5000, 1.0 / 225.0, cfg);
    REQUIRE(a.n() == b.n());
    CHECK(a.delta_n == b.delta_n);
    for (std::size_t i = 0; i < a.n(); ++i) REQUIRE(a.values[i] == b.values[i]);
    cfg.seed = 100;
    auto c = simulate_path(spec, 5000, 1.0 / 225.0, cfg);
    CHECK(c.values != a.values);
}

TEST_CASE("subordinator increments are positive under both samplers") {
    ProcessSpec spec = pure_jump(1.0);
    SamplerConfig cfg;
    cfg.method = JumpSampler::exact_stable;
    cfg.seed = 3;
    auto a = simulate_path(spec, 20000, 1.0 / 90.0, cfg);
    CHECK(*std::min_element(a.values.begin(), a.values.end()) > 0.0);
    cfg.method = JumpSampler::truncated_cp;
    auto b = simulate_path(spec, 20000, 1.0 / 90.0, cfg);
    CHECK(*std::min_element(b.values.begin(), b.values.end()) > 0.0);
}

TEST_CASE("exact sampler matches the closed-form increment tail") {
    // P(J >= z) = erf((1/2)sqrt(beta dt^2 / z)) for one increment; frozen
    // reference values below.
    SamplerConfig cfg;
    cfg.method = JumpSampler::exact_stable;
    cfg.seed = 20240817;
    {
        auto s = simulate_path(pure_jump(2.0), 200000, 0.1, cfg);
        double p = double(std::count_if(s.values.begin(), s.values.end(),
                                        [](double v) { return v >= 0.5; })) / double(s.n());
        const double truth = 0.112462916018284892;
        double se = std::sqrt(truth * (1.0 - truth) / double(s.n()));
        CHECK(std::abs(p - truth) < 4.0 * se);
    }
    {
        auto s = simulate_path(pure_jump(1.0), 200000, 1.0 / 90.0, cfg);
        double p = double(std::count_if(s.values.begin(), s.values.end(),
                                        [](double v) { return v >= 1.0; })) / double(s.n());
        const double truth = 0.00626870865757685215;
        double se = std::sqrt(truth * (1.0 - truth) / double(s.n()));
        CHECK(std::abs(p - truth) < 4.0 * se);
    }
}

TEST_CASE("truncated sampler agrees with the exact law in distribution") {
    SamplerConfig exact;
    exact.method = JumpSampler::exact_stable;
    exact.seed = 11;
    SamplerConfig trunc;
    trunc.method = JumpSampler::truncated_cp;
    trunc.eps_sim = 1e-4;
    trunc.compensate_small = true;
    trunc.seed = 12;
    const std::size_t n = 100000;
    auto a = simulate_path(pure_jump(1.0), n, 1.0 / 90.0, exact);
    auto b = simulate_path(pure_jump(1.0), n, 1.0 / 90.0, trunc);

    // Means agree within Monte Carlo error. The increment law is heavy
    // tailed, so the standard errors themselves are noisy; the 3-se band is
    // wide enough in practice.
    auto mean_se = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= double(v.size());
        double s2 = 0.0;
        for (double x : v) s2 += (x - m) * (x - m);
        return std::pair<double, double>(m, std::sqrt(s2 / double(v.size() - 1) / double(v.size())));
    };
    auto [ma, sa] = mean_se(a.values);
    auto [mb, sb] = mean_se(b.values);
    CHECK(std::abs(ma - mb) < 3.0 * std::sqrt(sa * sa + sb * sb));

    // Above the truncation level the laws agree; the visible gap is the mass
    // the compensated sampler leaves at the atom, so compare upper tails.
    double p_half_a = double(std::count_if(a.values.begin(), a.values.end(),
                                           [](double v) { return v >= 0.01; })) / double(n);
    double p_half_b = double(std::count_if(b.values.begin(), b.values.end(),
                                           [](double v) { return v >= 0.01; })) / double(n);
    CHECK(std::abs(p_half_a - p_half_b) < 4.0 * std::sqrt(p_half_a * (1 - p_half_a) / n + p_half_b * (1 - p_half_b) / n));
}

TEST_CASE("a break spec with identical regimes looks like the no-break spec") {
    ProcessSpec h0 = pure_jump(1.0);
    ProcessSpec h1 = pure_jump(1.0);
    h1.jump_post = JumpModel::beta_family(1.0);
    h1.theta0 = 0.5;
    SamplerConfig cfg;
    cfg.method = JumpSampler::exact_stable;
    cfg.seed = 71;
    const std::size_t n = 100000;
    auto a = simulate_path(h0, n, 1.0 / 225.0, cfg);
    cfg.seed = 72;
    auto b = simulate_path(h1, n, 1.0 / 225.0, cfg);
    CHECK(ks_two_sample_pvalue(a.values, b.values) > 0.01);
}

TEST_CASE("increments are serially uncorrelated") {
    SamplerConfig cfg;
    cfg.method = JumpSampler::truncated_cp;
    cfg.eps_sim = 1e-3;
    cfg.seed = 5;
    ProcessSpec spec = pure_jump(1.0);
    spec.sigma = 1.0;
    const std::size_t n = 50000;
    auto s = simulate_path(spec, n, 1.0 / 225.0, cfg);
    double m = 0.0;
    for (double x : s.values) m += x;
    m /= double(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = s.values[i] - m;
        den += d * d;
        if (i + 1 < n) num += d * (s.values[i + 1] - m);
    }
    CHECK(std::abs(num / den) < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("small-time probe: first-order tail and pure drift") {
    ProcessSpec spec = pure_jump(1.0);
    const double u1 = 0.564189583547756287;  // U(1) for beta=1
    for (double t : {1.0 / 64.0, 1.0 / 256.0}) {
        auto probe = small_time_tail_probability(spec, t, 1.0, 200000, 31);
        CHECK(std::abs(probe.p_hat / t - u1) < 4.0 * probe.se / t + 0.05 * u1);
        CHECK(probe.se > 0.0);
    }

    ProcessSpec drift_only;
    drift_only.drift = 1.0;
    drift_only.jump_pre = JumpModel::beta_family(1.0);
    SamplerConfig no_jumps;
    no_jumps.method = JumpSampler::truncated_cp;
    no_jumps.eps_sim = 1e24;  // expected jump count over the probe ~ 5e-9
    no_jumps.compensate_small = false;
    auto probe = small_time_tail_probability(drift_only, 1.0, 2.0, 10000, 7, no_jumps);
    CHECK(probe.p_hat == 0.0);
    CHECK(probe.se == 0.0);

    ProcessSpec broken = drift_only;
    broken.jump_post = JumpModel::beta_family(2.0);
    broken.theta0 = 0.5;
    CHECK_THROWS_AS(small_time_tail_probability(broken, 0.1, 1.0, 100, 1), std::invalid_argument);
}

TEST_CASE("pure drift via a huge truncation level") {
    ProcessSpec spec;
    spec.drift = 1.0;
    spec.jump_pre = JumpModel::beta_family(1.0);
    SamplerConfig cfg;
    cfg.method = JumpSampler::truncated_cp;
    cfg.eps_sim = 1e24;
    cfg.compensate_small = false;
    cfg.seed = 2;
    const double dn = 1.0 / 450.0;
    auto s = simulate_path(spec, 1000, dn, cfg);
    for (double v : s.values) REQUIRE(v == doctest::Approx(dn).epsilon(1e-12));
}

TEST_CASE("spec validation") {
    ProcessSpec spec = pure_jump(1.0);
    spec.sigma = -1.0;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec.sigma = 0.0;
    spec.theta0 = 0.5;  // theta0 without jump_post
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec.theta0.reset();
    spec.jump_post = JumpModel::beta_family(2.0);  // jump_post without theta0
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec.theta0 = 1.5;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec.theta0 = 0.5;
    CHECK_NOTHROW(validate(spec));

    SamplerConfig cfg;
    cfg.method = JumpSampler::exact_stable;
    auto tab = JumpModel::tabulated({1.0, 2.0}, {0.5, 0.25});
    ProcessSpec tspec;
    tspec.jump_pre = tab;
    CHECK_THROWS(simulate_path(tspec, 10, 0.1, cfg));

    cfg.method = JumpSampler::truncated_cp;
    cfg.eps_sim = 0.0;
    CHECK_THROWS(simulate_path(pure_jump(1.0), 10, 0.1, cfg));
}

TEST_CASE("increment CSV round trip and diagnostics") {
    SamplerConfig cfg;
    cfg.method = JumpSampler::exact_stable;
    cfg.seed = 8;
    auto s = simulate_path(pure_jump(1.0), 500, 1.0 / 225.0, cfg);
    std::ostringstream out;
    write_increments_csv(s, out, cfg.seed);
    std::string text = out.str();
    CHECK(text.find("# delta_n=") == 0);
    CHECK(text.find("j,increment") != std::string::npos);

    std::istringstream in(text);
    auto back = read_increments_csv(in);
    REQUIRE(back.n() == s.n());
    CHECK(back.delta_n == s.delta_n);
    for (std::size_t i = 0; i < s.n(); ++i) REQUIRE(back.values[i] == s.values[i]);

    std::istringstream bad("# delta_n=0.1 n=2 seed=0\nj,increment\n1,0.5\n2,oops\n");
    try {
        read_increments_csv(bad);
        CHECK(false);
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("row 4") != std::string::npos);
    }

    std::istringstream nan_row("# delta_n=0.1 n=2 seed=0\nj,increment\n1,0.5\n2,nan\n");
    CHECK_THROWS_AS(read_increments_csv(nan_row), std::runtime_error);

    std::istringstream no_meta("j,increment\n1,0.5\n2,0.25\n");
    CHECK_THROWS_AS(read_increments_csv(no_meta), std::runtime_error);
}

TEST_CASE("price series difference to increments") {
    std::vector<double> times{0.0, 0.25, 0.5, 0.75};
    std::vector<double> prices{10.0, 10.5, 10.25, 11.0};
    auto s = series_from_prices(times, prices);
    REQUIRE(s.n() == 3);
    CHECK(s.delta_n == doctest::Approx(0.25));
    CHECK(s.values[0] == doctest::Approx(0.5));
    CHECK(s.values[1] == doctest::Approx(-0.25));
    CHECK(s.values[2] == doctest::Approx(0.75));

    std::vector<double> uneven{0.0, 0.25, 0.6, 0.75};
    CHECK_THROWS_AS(series_from_prices(uneven, prices), std::invalid_argument);
}
