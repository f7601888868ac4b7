#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spdelab {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

/// Sum in a fixed pairwise tree; independent of thread count and summation
/// chunking, so reductions stay bit-reproducible.
double tree_sum(std::span<const double> values);

/// Mean and standard error via the pairwise tree.
MeanSe mean_se(std::span<const double> values);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index owns its
/// output slot, so results do not depend on scheduling. Exceptions are
/// collected and the first one rethrown after the pool joins.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Weighted least squares line through (x_i, y_i) with standard errors se_i
/// (se_i <= 0 means unit weight). slope_se comes from the weight matrix.
LineFit weighted_line_fit(std::span<const double> xs, std::span<const double> ys,
                          std::span<const double> ses);

/// Kolmogorov-Smirnov distance of `standardized` samples against the standard
/// normal CDF, scaled by sqrt(n).
double ks_statistic_normal(std::vector<double> standardized);

/// Asymptotic Kolmogorov distribution tail: P(sqrt(n) D > x).
double ks_pvalue(double x);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace spdelab
