#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "jumpbreak/rng.hpp"

using jumpbreak::Rng;
using jumpbreak::derive_stream;

TEST_CASE("same seed reproduces the same draw sequence") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.uniform01() == b.uniform01());
    Rng c(42), d(43);
    bool all_equal = true;
    for (int i = 0; i < 64; ++i) {
        if (c.uniform01() != d.uniform01()) all_equal = false;
    }
    CHECK_FALSE(all_equal);
}

TEST_CASE("derive_stream is deterministic and spreads indices apart") {
    CHECK(derive_stream(7, 3) == derive_stream(7, 3));
    std::vector<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 256; ++i) seen.push_back(derive_stream(123456789ULL, i));
    for (std::size_t i = 0; i < seen.size(); ++i) {
        for (std::size_t j = i + 1; j < seen.size(); ++j) CHECK(seen[i] != seen[j]);
    }
    CHECK(derive_stream(1, 0) != derive_stream(2, 0));
}

TEST_CASE("uniform01 lies strictly inside (0,1) with mean near 1/2") {
    Rng rng(2024);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform01();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // se of the mean is 1/sqrt(12 n) ~ 6.5e-4
    CHECK(std::abs(sum / n - 0.5) < 4e-3);
}

TEST_CASE("normal has mean 0 and variance 1") {
    Rng rng(7);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        s1 += x;
        s2 += x * x;
    }
    double mean = s1 / n;
    double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));
}

TEST_CASE("exponential has mean 1") {
    Rng rng(11);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = rng.exponential();
        REQUIRE(x >= 0.0);
        sum += x;
    }
    CHECK(std::abs(sum / n - 1.0) < 4.0 / std::sqrt(double(n)));
}

TEST_CASE("poisson matches mean and variance, zero mean gives zero") {
    Rng rng(5);
    CHECK(rng.poisson(0.0) == 0);
    const int n = 100000;
    const double lambda = 3.7;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double k = double(rng.poisson(lambda));
        s1 += k;
        s2 += k * k;
    }
    double mean = s1 / n;
    double var = s2 / n - mean * mean;
    double se = std::sqrt(lambda / n);
    CHECK(std::abs(mean - lambda) < 4.0 * se);
    CHECK(std::abs(var - lambda) < 0.15);
}
