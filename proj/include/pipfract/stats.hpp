// Copyright 2026 The pipfract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// @file stats.hpp
/// Statistics over daleth series: rolling moments, correlation and linear
/// regression, distribution fits, histogram periodicity, zero densities and
/// the sign-outlier census.
///
/// Estimators that cannot be evaluated on the given sample (constant data,
/// too few points) throw DegenerateSampleError.

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pipfract/daleth.hpp"

namespace pipfract {

struct RollingRow {
  std::uint64_t i;  // index of the window's last element
  double mean;
  double variance;
};

struct RollingMoments {
  std::uint64_t sample_size;  // T
  std::uint64_t width;        // w
  std::uint64_t step;         // y
  std::vector<RollingRow> rows;
};

/// Windows end at positions w, w + y, ..., w + floor((T - w) / y) y of the
/// series; variance uses the 1/(w - 1) convention. Sums are exact for
/// integer data.
RollingMoments rolling_moments(const Series& series, std::uint64_t w, std::uint64_t y);

double pearson(std::span<const std::int64_t> x, std::span<const std::int64_t> y);
double pearson(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double intercept;  // a0
  double slope;      // a1
  double r;          // Pearson r of the pair
};

/// Least squares y = a0 + a1 x.
LinearFit ols_fit(std::span<const std::int64_t> x, std::span<const std::int64_t> y);
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

using Matrix = std::vector<std::vector<double>>;

/// Pairwise Pearson matrix of equal-length series.
Matrix corr_matrix(std::span<const Series> series);

/// Computes daleth(spec) over i = 1..T for every spec, then the matrix.
Matrix corr_matrix(const PrimeEngine& engine, std::span<const DalethSpec> specs,
                   std::uint64_t T);

/// The three monotone trends of a correlation matrix indexed by increasing k:
/// moving right from the diagonal along a row r falls, moving up from the
/// diagonal along a column r falls, and r(k, k+1) rises with k.
struct CorrTrends {
  bool rows_decrease;
  bool columns_decrease;
  bool superdiagonal_increases;
};
CorrTrends corr_trends(const Matrix& m);

enum class Normalization { counts, pdf };

struct HistogramBin {
  double left;    // bins are [left, left + width)
  double center;
  double count;   // raw count or density, per normalization
};

struct Histogram {
  double bin_width;
  double origin;  // left edge of the bin containing 0
  Normalization normalization;
  std::uint64_t total;  // values that fell inside [lo, hi)
  std::vector<HistogramBin> bins;

  /// Bin whose left edge is `left`, or nullptr.
  const HistogramBin* bin_at(double left) const;
};

/// Half-open, left-closed bins of the given width with an edge at 0,
/// covering [lo, hi). Values outside [lo, hi) are not counted.
Histogram histogram(std::span<const std::int64_t> values, double bin_width,
                    double lo, double hi, Normalization norm = Normalization::counts);

struct LaplaceFit {
  double mu;  // sample median
  double b;   // mean absolute deviation about mu
  double log_likelihood;
};
LaplaceFit fit_laplace(std::span<const std::int64_t> values);
LaplaceFit fit_laplace(std::span<const double> values);

struct GaussianFit {
  double mu;
  double sigma;  // 1/(N - 1) convention
  double log_likelihood;
};
GaussianFit fit_gaussian(std::span<const std::int64_t> values);
GaussianFit fit_gaussian(std::span<const double> values);

double laplace_log_likelihood(std::span<const double> values, double mu, double b);
double gaussian_log_likelihood(std::span<const double> values, double mu, double sigma);

/// m4 / m2^2 - 3 with central sample moments.
double excess_kurtosis(std::span<const std::int64_t> values);
double excess_kurtosis(std::span<const double> values);

/// Fraction of nonzero multiples m of 6 in the histogram whose bin count is
/// strictly below both neighbouring populated bins. Requires unit-width bins
/// covering [-48, 48].
double mod6_dip_score(const Histogram& hist);

/// Number of i in 1..T where daleth(spec) is zero.
std::uint64_t count_zeros(const PrimeEngine& engine, const DalethSpec& spec,
                          std::uint64_t T);

struct ExponentialFit {
  double amplitude;  // A
  double rate;       // B, in y = A exp(B x)
  double r2_log;     // R^2 of the straight-line fit to log y
  double r2_linear;  // R^2 of A exp(B x) against y
  std::vector<double> dropped_x;  // points with y <= 0, excluded
};

/// Least squares on log y. Needs at least three points with y > 0.
ExponentialFit fit_exponential(std::span<const double> x, std::span<const double> y);

struct ZeroDensity {
  unsigned k;
  std::uint64_t sample_size;
  std::uint64_t zeros;
  double density;  // zeros / sample_size
};

struct ZeroDensityFit {
  std::vector<ZeroDensity> points;
  ExponentialFit fit;
};

/// density(k) = count_zeros / T_k for each k, fitted as A exp(B k).
/// `base` supplies h and s; its order fields are overridden.
ZeroDensityFit zero_density_fit(const PrimeEngine& engine, unsigned n,
                                std::span<const unsigned> k_values,
                                std::span<const std::uint64_t> T_per_k,
                                const DalethSpec& base = {});

struct OutlierCensus {
  std::uint64_t total;
  std::vector<std::pair<std::uint64_t, unsigned>> positions;  // (i, k)
};

/// grid[c][r] holds the value at row i = first_i + r for order k = k_min + c.
/// Each row votes by majority sign over its nonzero entries; nonzero entries
/// against the majority are outliers; tied rows contribute none.
OutlierCensus outlier_census(const std::vector<std::vector<std::int64_t>>& grid,
                             unsigned k_min, std::uint64_t first_i = 1);

/// Census over i = 1..i_max and k = k_min..k_max of daleth(spec_base with k).
OutlierCensus outlier_census(const PrimeEngine& engine, std::uint64_t i_max,
                             unsigned k_min, unsigned k_max,
                             const DalethSpec& spec_base);

}  // namespace pipfract
