#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spdelab/field.hpp"
#include "spdelab/noise.hpp"
#include "spdelab/norms.hpp"

using namespace spdelab;

TEST_CASE("sampling is deterministic in (seed, index)") {
  const NoiseDriver driver{123456789, 3};
  const auto a = sample_increments(driver, 17, 64, 0.01);
  const auto b = sample_increments(driver, 17, 64, 0.01);
  CHECK(a.table == b.table);
  const auto c = sample_increments(driver, 18, 64, 0.01);
  CHECK(a.table != c.table);
  CHECK_THROWS_AS(sample_increments(driver, 0, 0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(sample_increments(driver, 0, 8, 0.0), std::invalid_argument);
}

TEST_CASE("increments carry N(0, dt) statistics") {
  const std::size_t n = 1 << 16;
  const double dt = 0.25;
  const NoiseDriver driver{2024, 1};
  const auto incs = sample_increments(driver, 0, n, dt);
  double sum = 0.0, sumsq = 0.0;
  for (double v : incs.component(0)) {
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  const double sigma = std::sqrt(dt);
  CHECK(std::abs(mean) < 4.0 * sigma / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - dt) < 0.05 * dt);
}

TEST_CASE("distinct sample indices decorrelate") {
  const std::size_t n = 1 << 16;
  const NoiseDriver driver{77, 1};
  const auto a = sample_increments(driver, 0, n, 1.0);
  const auto b = sample_increments(driver, 1, n, 1.0);
  double cross = 0.0;
  for (std::size_t j = 0; j < n; ++j) cross += a.at(0, j) * b.at(0, j);
  cross /= static_cast<double>(n);
  CHECK(std::abs(cross) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("chunked sampling matches one block, entry for entry") {
  const NoiseDriver driver{9, 2};
  const auto whole = sample_increments(driver, 4, 64, 0.125, 0);
  const auto first = sample_increments(driver, 4, 32, 0.125, 0);
  const auto second = sample_increments(driver, 4, 32, 0.125, 32);
  for (int c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < 32; ++j) {
      CHECK(whole.at(c, j) == first.at(c, j));
      CHECK(whole.at(c, 32 + j) == second.at(c, j));
    }
  const auto sliced = whole.slice(16, 16);
  for (int c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < 16; ++j)
      CHECK(sliced.at(c, j) == whole.at(c, 16 + j));
}

TEST_CASE("increments scale as sqrt(dt) in distribution") {
  const std::size_t n = 1 << 15;
  const NoiseDriver driver{5150, 1};
  const auto unit = sample_increments(driver, 0, n, 1.0);
  const auto fine = sample_increments(driver, 1, n, 0.01);
  auto variance = [n](const BrownianIncrements& incs) {
    double s = 0.0;
    for (double v : incs.component(0)) s += v * v;
    return s / static_cast<double>(n);
  };
  CHECK(variance(fine) / variance(unit) == doctest::Approx(0.01).epsilon(0.1));
}

TEST_CASE("gamma norm realization") {
  const TorusGrid g = make_grid(1, 8, 8);

  SUBCASE("examples") {
    std::vector<SpectralField> zeros = {zero_field(g), zero_field(g)};
    CHECK(gamma_norm(zeros, 2.0) == 0.0);
    std::vector<SpectralField> single = {random_smooth_field(g, 1.0, 1.0, 2)};
    CHECK(gamma_norm(single, 3.0) ==
          doctest::Approx(norm_lp(single[0], 3.0)).epsilon(1e-14));
    std::vector<SpectralField> pair = {constant_field(g, 3.0),
                                       constant_field(g, 4.0)};
    CHECK(gamma_norm(pair, 2.0) ==
          doctest::Approx(std::sqrt(25.0 * 2.0 * std::numbers::pi))
              .epsilon(1e-14));
    std::vector<SpectralField> none;
    CHECK_THROWS_AS(gamma_norm(none, 2.0), std::invalid_argument);
  }

  SUBCASE("triangle inequality and homogeneity") {
    for (unsigned trial = 0; trial < 16; ++trial) {
      std::vector<SpectralField> a = {
          random_smooth_field(g, 0.7, 1.0, 100 + trial),
          random_smooth_field(g, 1.3, 0.8, 200 + trial)};
      std::vector<SpectralField> b = {
          random_smooth_field(g, 0.9, 1.1, 300 + trial),
          random_smooth_field(g, 0.4, 1.4, 400 + trial)};
      std::vector<SpectralField> sum = {a[0] + b[0], a[1] + b[1]};
      CHECK(gamma_norm(sum, 2.0) <=
            gamma_norm(a, 2.0) + gamma_norm(b, 2.0) + 1e-12);
      std::vector<SpectralField> scaled = {2.5 * a[0], 2.5 * a[1]};
      CHECK(gamma_norm(scaled, 2.0) ==
            doctest::Approx(2.5 * gamma_norm(a, 2.0)).epsilon(1e-13));
    }
  }
}

TEST_CASE("increment dump layout") {
  const NoiseDriver driver{1, 2};
  const auto incs = sample_increments(driver, 0, 4, 0.5);
  std::ostringstream os;
  write_increments_csv(os, incs);
  const std::string text = os.str();
  CHECK(text.find("step,component,value") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3 + 8);
}
