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

#include "pipfract/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pipfract/error.hpp"

namespace pipfract {

namespace {

std::vector<double> to_double(std::span<const std::int64_t> v) {
  return {v.begin(), v.end()};
}

double mean_of(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("series lengths differ");
  if (x.size() < 2) throw DegenerateSampleError("need at least two points");
}

struct Centered {
  double sxx = 0, syy = 0, sxy = 0, mx = 0, my = 0;
};

Centered centered_sums(std::span<const double> x, std::span<const double> y) {
  Centered c;
  c.mx = mean_of(x);
  c.my = mean_of(y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - c.mx;
    const double dy = y[i] - c.my;
    c.sxx += dx * dx;
    c.syy += dy * dy;
    c.sxy += dx * dy;
  }
  return c;
}

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  const double upper = v[n / 2];
  if (n % 2) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + n / 2);
  return 0.5 * (lower + upper);
}

}  // namespace

RollingMoments rolling_moments(const Series& series, std::uint64_t w, std::uint64_t y) {
  if (w < 2) throw std::invalid_argument("rolling_moments: window must be >= 2");
  if (y < 1) throw std::invalid_argument("rolling_moments: step must be >= 1");
  const std::uint64_t T = series.size();
  if (w > T) {
    throw std::invalid_argument("rolling_moments: window " + std::to_string(w) +
                                " exceeds series length " + std::to_string(T));
  }
  RollingMoments out{T, w, y, {}};
  out.rows.reserve((T - w) / y + 1);
  const auto& v = series.values;
  // Exact integer sums over the current window [begin, end).
  __int128 s1 = 0, s2 = 0;
  std::uint64_t begin = 0, end = 0;
  for (std::uint64_t pos = w; pos <= T; pos += y) {
    if (pos - w >= end) {
      s1 = s2 = 0;
      begin = end = pos - w;
    }
    for (; end < pos; ++end) {
      const __int128 a = v[end];
      s1 += a;
      s2 += a * a;
    }
    for (; begin < pos - w; ++begin) {
      const __int128 a = v[begin];
      s1 -= a;
      s2 -= a * a;
    }
    const __int128 W = static_cast<__int128>(w);
    const __int128 num = W * s2 - s1 * s1;  // w (w - 1) * variance
    const double mean = static_cast<double>(s1) / static_cast<double>(w);
    const double var = static_cast<double>(num) / (static_cast<double>(w) * (w - 1));
    out.rows.push_back({series.start + pos - 1, mean, var});
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const Centered c = centered_sums(x, y);
  if (c.sxx == 0 || c.syy == 0) {
    throw DegenerateSampleError("pearson: constant input, r undefined");
  }
  return std::clamp(c.sxy / std::sqrt(c.sxx * c.syy), -1.0, 1.0);
}

double pearson(std::span<const std::int64_t> x, std::span<const std::int64_t> y) {
  const auto a = to_double(x);
  const auto b = to_double(y);
  return pearson(a, b);
}

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const Centered c = centered_sums(x, y);
  if (c.sxx == 0) throw DegenerateSampleError("ols_fit: constant x");
  const double slope = c.sxy / c.sxx;
  const double r = c.syy == 0 ? 0.0 : c.sxy / std::sqrt(c.sxx * c.syy);
  return {c.my - slope * c.mx, slope, r};
}

LinearFit ols_fit(std::span<const std::int64_t> x, std::span<const std::int64_t> y) {
  const auto a = to_double(x);
  const auto b = to_double(y);
  return ols_fit(a, b);
}

Matrix corr_matrix(std::span<const Series> series) {
  const std::size_t n = series.size();
  Matrix m(n, std::vector<double>(n, 1.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      m[a][b] = m[b][a] = pearson(series[a].values, series[b].values);
    }
  }
  return m;
}

Matrix corr_matrix(const PrimeEngine& engine, std::span<const DalethSpec> specs,
                   std::uint64_t T) {
  if (T < 2) throw std::invalid_argument("corr_matrix: T must be >= 2");
  std::vector<Series> series;
  series.reserve(specs.size());
  for (const DalethSpec& s : specs) series.push_back(daleth_range(engine, s, 1, T));
  return corr_matrix(series);
}

CorrTrends corr_trends(const Matrix& m) {
  const std::size_t n = m.size();
  CorrTrends t{true, true, true};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 2; b < n; ++b) {
      if (!(m[a][b] < m[a][b - 1])) t.rows_decrease = false;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a + 2 <= b; ++a) {
      if (!(m[a][b] < m[a + 1][b])) t.columns_decrease = false;
    }
  }
  for (std::size_t k = 0; k + 2 < n; ++k) {
    if (!(m[k + 1][k + 2] > m[k][k + 1])) t.superdiagonal_increases = false;
  }
  return t;
}

const HistogramBin* Histogram::bin_at(double left) const {
  if (bins.empty()) return nullptr;
  const double idx = std::round((left - bins.front().left) / bin_width);
  if (idx < 0 || idx >= static_cast<double>(bins.size())) return nullptr;
  const HistogramBin& b = bins[static_cast<std::size_t>(idx)];
  return std::abs(b.left - left) < 1e-9 * std::max(1.0, bin_width) ? &b : nullptr;
}

Histogram histogram(std::span<const std::int64_t> values, double bin_width,
                    double lo, double hi, Normalization norm) {
  if (!(bin_width > 0)) throw std::invalid_argument("histogram: bin width must be > 0");
  if (!(lo < hi)) throw std::invalid_argument("histogram: requires lo < hi");
  const auto first = static_cast<std::int64_t>(std::floor(lo / bin_width));
  const auto last = static_cast<std::int64_t>(std::ceil(hi / bin_width)) - 1;
  Histogram h{bin_width, 0.0, norm, 0, {}};
  h.bins.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t m = first; m <= last; ++m) {
    const double left = static_cast<double>(m) * bin_width;
    h.bins.push_back({left, left + 0.5 * bin_width, 0.0});
  }
  for (std::int64_t v : values) {
    const auto x = static_cast<double>(v);
    if (x < lo || x >= hi) continue;
    const auto m = static_cast<std::int64_t>(std::floor(x / bin_width));
    h.bins[static_cast<std::size_t>(m - first)].count += 1.0;
    ++h.total;
  }
  if (norm == Normalization::pdf && h.total > 0) {
    const double scale = 1.0 / (static_cast<double>(h.total) * bin_width);
    for (auto& b : h.bins) b.count *= scale;
  }
  return h;
}

double laplace_log_likelihood(std::span<const double> values, double mu, double b) {
  double ll = 0;
  for (double x : values) ll += -std::log(2 * b) - std::abs(x - mu) / b;
  return ll;
}

double gaussian_log_likelihood(std::span<const double> values, double mu, double sigma) {
  const double norm = -0.5 * std::log(2 * std::numbers::pi * sigma * sigma);
  double ll = 0;
  for (double x : values) {
    const double z = (x - mu) / sigma;
    ll += norm - 0.5 * z * z;
  }
  return ll;
}

LaplaceFit fit_laplace(std::span<const double> values) {
  if (values.size() < 2) throw DegenerateSampleError("fit_laplace: need >= 2 values");
  const double mu = median_of({values.begin(), values.end()});
  double dev = 0;
  for (double x : values) dev += std::abs(x - mu);
  const double b = dev / static_cast<double>(values.size());
  if (b == 0) throw DegenerateSampleError("fit_laplace: zero scale (constant sample)");
  return {mu, b, laplace_log_likelihood(values, mu, b)};
}

LaplaceFit fit_laplace(std::span<const std::int64_t> values) {
  return fit_laplace(to_double(values));
}

GaussianFit fit_gaussian(std::span<const double> values) {
  if (values.size() < 2) throw DegenerateSampleError("fit_gaussian: need >= 2 values");
  const double mu = mean_of(values);
  double ss = 0;
  for (double x : values) ss += (x - mu) * (x - mu);
  const double sigma = std::sqrt(ss / static_cast<double>(values.size() - 1));
  if (sigma == 0) throw DegenerateSampleError("fit_gaussian: zero variance");
  return {mu, sigma, gaussian_log_likelihood(values, mu, sigma)};
}

GaussianFit fit_gaussian(std::span<const std::int64_t> values) {
  return fit_gaussian(to_double(values));
}

double excess_kurtosis(std::span<const double> values) {
  if (values.size() < 4) throw DegenerateSampleError("excess_kurtosis: need >= 4 values");
  const double mu = mean_of(values);
  double m2 = 0, m4 = 0;
  for (double x : values) {
    const double d2 = (x - mu) * (x - mu);
    m2 += d2;
    m4 += d2 * d2;
  }
  const auto n = static_cast<double>(values.size());
  m2 /= n;
  m4 /= n;
  if (m2 == 0) throw DegenerateSampleError("excess_kurtosis: constant sample");
  return m4 / (m2 * m2) - 3.0;
}

double excess_kurtosis(std::span<const std::int64_t> values) {
  return excess_kurtosis(to_double(values));
}

double mod6_dip_score(const Histogram& hist) {
  if (std::abs(hist.bin_width - 1.0) > 1e-12) {
    throw std::invalid_argument("mod6_dip_score: requires unit bin width");
  }
  if (!hist.bin_at(-49) || !hist.bin_at(49)) {
    throw std::invalid_argument("mod6_dip_score: histogram must cover [-49, 49]");
  }
  const auto lo = static_cast<std::int64_t>(hist.bins.front().left);
  const auto hi = static_cast<std::int64_t>(hist.bins.back().left);
  auto count = [&](std::int64_t m) { return hist.bin_at(static_cast<double>(m))->count; };
  // Nearest populated bin strictly on one side of m; data on a coarser
  // lattice (e.g. even-only second differences of odd primes) leaves the
  // immediate neighbours empty.
  auto neighbour = [&](std::int64_t m, int dir, double& out) {
    for (std::int64_t j = m + dir; j >= lo && j <= hi; j += dir) {
      if (count(j) > 0) {
        out = count(j);
        return true;
      }
    }
    return false;
  };
  int candidates = 0;
  int dips = 0;
  for (std::int64_t m = (lo + 1) / 6 * 6; m < hi; m += 6) {
    if (m == 0 || m <= lo) continue;
    ++candidates;
    double left = 0, right = 0;
    if (neighbour(m, -1, left) && neighbour(m, +1, right) &&
        count(m) < std::min(left, right)) {
      ++dips;
    }
  }
  return candidates ? static_cast<double>(dips) / candidates : 0.0;
}

std::uint64_t count_zeros(const PrimeEngine& engine, const DalethSpec& spec,
                          std::uint64_t T) {
  if (T < 1) throw std::invalid_argument("count_zeros: T must be >= 1");
  const Series d = daleth_range(engine, spec, 1, T);
  return static_cast<std::uint64_t>(std::count(d.values.begin(), d.values.end(), 0));
}

ExponentialFit fit_exponential(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_exponential: length mismatch");
  ExponentialFit out{};
  std::vector<double> xs, ly, ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > 0) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
      ly.push_back(std::log(y[i]));
    } else {
      out.dropped_x.push_back(x[i]);
    }
  }
  if (xs.size() < 3) {
    throw DegenerateSampleError("fit_exponential: need at least three positive points");
  }
  const LinearFit lf = ols_fit(xs, ly);
  out.amplitude = std::exp(lf.intercept);
  out.rate = lf.slope;
  out.r2_log = lf.r * lf.r;
  const double my = mean_of(ys);
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = out.amplitude * std::exp(out.rate * xs[i]);
    ss_res += (ys[i] - f) * (ys[i] - f);
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  out.r2_linear = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

ZeroDensityFit zero_density_fit(const PrimeEngine& engine, unsigned n,
                                std::span<const unsigned> k_values,
                                std::span<const std::uint64_t> T_per_k,
                                const DalethSpec& base) {
  if (k_values.size() != T_per_k.size()) {
    throw std::invalid_argument("zero_density_fit: one T per k required");
  }
  if (k_values.size() < 3) {
    throw DegenerateSampleError("zero_density_fit: need at least three k values");
  }
  ZeroDensityFit out;
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < k_values.size(); ++j) {
    DalethSpec spec = base;
    spec.diff_order = n;
    spec.pip_order = k_values[j];
    const std::uint64_t zeros = count_zeros(engine, spec, T_per_k[j]);
    const double density = static_cast<double>(zeros) / static_cast<double>(T_per_k[j]);
    out.points.push_back({k_values[j], T_per_k[j], zeros, density});
    xs.push_back(k_values[j]);
    ys.push_back(density);
  }
  out.fit = fit_exponential(xs, ys);
  return out;
}

OutlierCensus outlier_census(const std::vector<std::vector<std::int64_t>>& grid,
                             unsigned k_min, std::uint64_t first_i) {
  OutlierCensus out{0, {}};
  if (grid.empty()) return out;
  const std::size_t rows = grid.front().size();
  for (const auto& col : grid) {
    if (col.size() != rows) throw std::invalid_argument("outlier_census: ragged grid");
  }
  for (std::size_t r = 0; r < rows; ++r) {
    int vote = 0;
    for (const auto& col : grid) vote += (col[r] > 0) - (col[r] < 0);
    if (vote == 0) continue;
    const int majority = vote > 0 ? 1 : -1;
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const std::int64_t v = grid[c][r];
      const int sign = (v > 0) - (v < 0);
      if (sign != 0 && sign != majority) {
        out.positions.emplace_back(first_i + r, k_min + static_cast<unsigned>(c));
      }
    }
  }
  out.total = out.positions.size();
  return out;
}

OutlierCensus outlier_census(const PrimeEngine& engine, std::uint64_t i_max,
                             unsigned k_min, unsigned k_max,
                             const DalethSpec& spec_base) {
  if (i_max < 1) throw std::invalid_argument("outlier_census: i_max must be >= 1");
  if (k_min > k_max) throw std::invalid_argument("outlier_census: k_min > k_max");
  std::vector<std::vector<std::int64_t>> grid;
  for (unsigned k = k_min; k <= k_max; ++k) {
    DalethSpec spec = spec_base;
    spec.pip_order = k;
    grid.push_back(daleth_range(engine, spec, 1, i_max).values);
  }
  return outlier_census(grid, k_min, 1);
}

}  // namespace pipfract
