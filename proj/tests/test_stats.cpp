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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "pipfract/error.hpp"
#include "pipfract/stats.hpp"

using namespace pipfract;
using V = std::vector<std::int64_t>;
using D = std::vector<double>;

namespace {

const PrimeEngine& engine() {
  static const PrimeEngine e;
  return e;
}

Series make_series(V values, std::uint64_t start = 1) {
  Series s;
  s.start = start;
  s.values = std::move(values);
  return s;
}

// Two-pass mean and variance over values[b, e).
std::pair<double, double> two_pass(const V& v, std::size_t b, std::size_t e) {
  double m = 0;
  for (std::size_t i = b; i < e; ++i) m += static_cast<double>(v[i]);
  m /= static_cast<double>(e - b);
  double ss = 0;
  for (std::size_t i = b; i < e; ++i) ss += (static_cast<double>(v[i]) - m) * (static_cast<double>(v[i]) - m);
  return {m, ss / static_cast<double>(e - b - 1)};
}

D laplace_sample(std::mt19937_64& rng, std::size_t n, double mu, double b) {
  std::exponential_distribution<double> ex(1.0 / b);
  D out(n);
  for (auto& x : out) x = mu + ex(rng) - ex(rng);
  return out;
}

}  // namespace

TEST_CASE("rolling_moments examples") {
  const RollingMoments alt = rolling_moments(make_series({1, -1, 1, -1}), 2, 1);
  CHECK(alt.sample_size == 4);
  CHECK(alt.width == 2);
  CHECK(alt.step == 1);
  REQUIRE(alt.rows.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(alt.rows[j].i == j + 2);
    CHECK(alt.rows[j].mean == 0.0);
    CHECK(alt.rows[j].variance == 2.0);
  }
  const RollingMoments flat = rolling_moments(make_series(V(50, 7)), 9, 4);
  CHECK(flat.rows.size() == 11);
  for (const auto& r : flat.rows) {
    CHECK(r.variance == 0.0);
    CHECK(r.mean == 7.0);
  }
  V pm(10000);
  for (std::size_t i = 0; i < pm.size(); ++i) pm[i] = i % 2 ? -1 : 1;
  const RollingMoments big = rolling_moments(make_series(pm), 100, 1);
  CHECK(big.rows.size() == 9901);
  for (const auto& r : big.rows) REQUIRE(r.variance == doctest::Approx(100.0 / 99.0).epsilon(1e-12));
  // Row indices are absolute.
  const RollingMoments off = rolling_moments(make_series({1, 2, 3, 4, 5}, 10), 3, 2);
  REQUIRE(off.rows.size() == 2);
  CHECK(off.rows[0].i == 12);
  CHECK(off.rows[1].i == 14);
  CHECK(off.rows[1].mean == 4.0);

  CHECK_THROWS_AS(rolling_moments(make_series({1, 2}), 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(rolling_moments(make_series({1, 2}), 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(rolling_moments(make_series({1, 2}), 2, 0), std::invalid_argument);
}

TEST_CASE("rolling_moments against a two-pass oracle") {
  std::mt19937_64 rng(0x57a7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t T = 2 + rng() % 400;
    std::uniform_int_distribution<std::int64_t> d(-100000, 100000);
    V v(T);
    for (auto& x : v) x = d(rng);
    const std::uint64_t w = 2 + rng() % (T - 1);
    const std::uint64_t y = 1 + rng() % (2 * w);
    const RollingMoments rm = rolling_moments(make_series(v), w, y);
    REQUIRE(rm.rows.size() == (T - w) / y + 1);
    for (std::size_t j = 0; j < rm.rows.size(); ++j) {
      const std::size_t end = w + j * y;
      const auto [m, var] = two_pass(v, end - w, end);
      REQUIRE(rm.rows[j].i == end);
      REQUIRE(rm.rows[j].mean == doctest::Approx(m).epsilon(1e-12));
      REQUIRE(rm.rows[j].variance == doctest::Approx(var).epsilon(1e-9));
    }
  }
}

TEST_CASE("pearson and ols") {
  const V x{1, 2, 3, 4, 7};
  V neg(x.size()), lin(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    neg[i] = -x[i];
    lin[i] = 2 * x[i] + 1;
  }
  CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-15));
  const LinearFit f = ols_fit(x, lin);
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  const LinearFit id = ols_fit(x, x);
  CHECK(id.intercept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(id.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id.r == doctest::Approx(1.0));

  CHECK_THROWS_AS(pearson(V{1, 1, 1}, V{1, 2, 3}), DegenerateSampleError);
  CHECK_THROWS_AS(pearson(V{1}, V{1}), DegenerateSampleError);
  CHECK_THROWS_AS(pearson(V{1, 2}, V{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(ols_fit(V{2, 2}, V{1, 2}), DegenerateSampleError);

  // Affine invariance and symmetry.
  std::mt19937_64 rng(0x57a8);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng() % 200;
    D a(n), b(n), a2(n), b2(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = nd(rng);
      b[i] = 0.5 * a[i] + nd(rng);
    }
    const double sa = 0.1 + std::abs(nd(rng)), sb = -(0.1 + std::abs(nd(rng)));
    const double oa = 10 * nd(rng), ob = 10 * nd(rng);
    for (std::size_t i = 0; i < n; ++i) {
      a2[i] = sa * a[i] + oa;
      b2[i] = sb * b[i] + ob;
    }
    const double r = pearson(a, b);
    REQUIRE(r >= -1.0);
    REQUIRE(r <= 1.0);
    REQUIRE(pearson(b, a) == doctest::Approx(r).epsilon(1e-12));
    REQUIRE(pearson(a2, b2) == doctest::Approx(-r).epsilon(1e-9));
    REQUIRE(ols_fit(a, b).r == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("corr_matrix and trends") {
  const DalethSpec one{1, 2, 0, 1};
  const Matrix single = corr_matrix(engine(), std::span(&one, 1), 100);
  REQUIRE(single.size() == 1);
  CHECK(single[0][0] == 1.0);

  std::vector<DalethSpec> specs;
  for (unsigned k = 1; k <= 3; ++k) specs.push_back({1, 2, 0, k});
  const Matrix m = corr_matrix(engine(), specs, 500);
  REQUIRE(m.size() == 3);
  std::vector<Series> series;
  for (const auto& s : specs) series.push_back(daleth_range(engine(), s, 1, 500));
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(m[a][a] == 1.0);
    for (std::size_t b = 0; b < 3; ++b) {
      CHECK(m[a][b] == m[b][a]);
      CHECK(m[a][b] == doctest::Approx(pearson(series[a].values, series[b].values)).epsilon(1e-12));
    }
  }
  CHECK(corr_matrix(series) == m);
  CHECK_THROWS_AS(corr_matrix(engine(), specs, 1), std::invalid_argument);

  const Matrix good{{1.0, 0.9, 0.8}, {0.9, 1.0, 0.95}, {0.8, 0.95, 1.0}};
  const CorrTrends t = corr_trends(good);
  CHECK(t.rows_decrease);
  CHECK(t.columns_decrease);
  CHECK(t.superdiagonal_increases);
  const Matrix bad{{1.0, 0.9, 0.95}, {0.9, 1.0, 0.85}, {0.95, 0.85, 1.0}};
  const CorrTrends u = corr_trends(bad);
  CHECK_FALSE(u.rows_decrease);
  CHECK_FALSE(u.columns_decrease);
  CHECK_FALSE(u.superdiagonal_increases);
}

TEST_CASE("histogram") {
  const Histogram h = histogram(V{1, 1, 2}, 1, 0, 3);
  REQUIRE(h.bins.size() == 3);
  CHECK(h.total == 3);
  CHECK(h.bin_at(0)->count == 0);
  CHECK(h.bin_at(1)->count == 2);
  CHECK(h.bin_at(2)->count == 1);
  CHECK(h.bin_at(2)->center == 2.5);
  CHECK(h.bin_at(3) == nullptr);
  CHECK(h.bin_at(0.5) == nullptr);

  // Out-of-range values are ignored; hi is exclusive.
  const Histogram e = histogram(V{-5, 0, 3, 9}, 1, 0, 3);
  CHECK(e.total == 1);

  // Edges align with 0 even when lo is not a multiple of the width.
  const Histogram w = histogram(V{-3, -1, 0, 1, 4}, 2, -3, 5);
  CHECK(w.bins.front().left == -4);
  CHECK(w.bins.back().left == 4);
  CHECK(w.bin_at(-4)->count == 1);
  CHECK(w.bin_at(-2)->count == 1);
  CHECK(w.bin_at(0)->count == 2);
  CHECK(w.bin_at(4)->count == 1);

  std::mt19937_64 rng(0x57a9);
  std::uniform_int_distribution<std::int64_t> d(-60, 60);
  V v(5000);
  for (auto& x : v) x = d(rng);
  for (double width : {1.0, 2.0, 3.0, 0.5}) {
    const Histogram c = histogram(v, width, -50, 51);
    const Histogram p = histogram(v, width, -50, 51, Normalization::pdf);
    const auto expect = static_cast<std::uint64_t>(
        std::count_if(v.begin(), v.end(), [](std::int64_t x) { return x >= -50 && x < 51; }));
    double sum = 0, area = 0;
    for (const auto& b : c.bins) sum += b.count;
    for (const auto& b : p.bins) area += b.count * width;
    CHECK(c.total == expect);
    CHECK(sum == static_cast<double>(expect));
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(histogram(v, 0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(histogram(v, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("laplace and gaussian fits") {
  const LaplaceFit l = fit_laplace(V{-1, 0, 1});
  CHECK(l.mu == 0.0);
  CHECK(l.b == doctest::Approx(2.0 / 3.0));
  CHECK(l.log_likelihood == doctest::Approx(-3 * std::log(4.0 / 3.0) - 3.0));
  CHECK(fit_laplace(V{-5, -2, 2, 5}).mu == 0.0);
  CHECK(fit_laplace(V{1, 2, 4, 10}).mu == 3.0);

  const GaussianFit g = fit_gaussian(V{-1, 1});
  CHECK(g.mu == 0.0);
  CHECK(g.sigma == doctest::Approx(std::sqrt(2.0)));
  CHECK(g.log_likelihood == doctest::Approx(-std::log(2 * std::numbers::pi * 2.0) - 0.5));
  CHECK_THROWS_AS(fit_gaussian(V{0, 0, 0, 0}), DegenerateSampleError);
  CHECK_THROWS_AS(fit_laplace(V{3, 3, 3}), DegenerateSampleError);
  CHECK_THROWS_AS(excess_kurtosis(V{3, 3, 3, 3}), DegenerateSampleError);

  const D xs{0.5, -1.5, 2.0};
  CHECK(laplace_log_likelihood(xs, 0.5, 2.0) ==
        doctest::Approx(-3 * std::log(4.0) - (0.0 + 2.0 + 1.5) / 2.0));
  CHECK(gaussian_log_likelihood(xs, 0.0, 1.0) ==
        doctest::Approx(-1.5 * std::log(2 * std::numbers::pi) - (0.25 + 2.25 + 4.0) / 2));

  std::mt19937_64 rng(0x57aa);
  std::normal_distribution<double> nd;
  D normal(100000);
  for (auto& x : normal) x = nd(rng);
  const GaussianFit gn = fit_gaussian(normal);
  CHECK(std::abs(gn.mu) < 0.02);
  CHECK(std::abs(gn.sigma - 1) < 0.02);
  CHECK(std::abs(excess_kurtosis(normal)) < 0.1);

  const D lap = laplace_sample(rng, 400000, 1.0, 2.0);
  CHECK(excess_kurtosis(lap) == doctest::Approx(3.0).epsilon(0.05));
  const LaplaceFit lf = fit_laplace(lap);
  CHECK(lf.mu == doctest::Approx(1.0).epsilon(0.02));
  CHECK(lf.b == doctest::Approx(2.0).epsilon(0.02));
  CHECK(lf.log_likelihood > fit_gaussian(lap).log_likelihood);
  CHECK(fit_gaussian(normal).log_likelihood > fit_laplace(normal).log_likelihood);
  // The MLE maximizes the likelihood.
  for (double dmu : {-0.05, 0.05}) {
    CHECK(laplace_log_likelihood(lap, lf.mu + dmu, lf.b) < lf.log_likelihood);
  }
  for (double db : {0.95, 1.05}) {
    CHECK(laplace_log_likelihood(lap, lf.mu, lf.b * db) < lf.log_likelihood);
  }
}

TEST_CASE("mod6_dip_score") {
  auto build = [](auto count_of) {
    V v;
    for (std::int64_t x = -50; x <= 50; ++x) {
      for (int c = 0; c < count_of(x); ++c) v.push_back(x);
    }
    return histogram(v, 1, -50, 51);
  };
  CHECK(mod6_dip_score(build([](std::int64_t) { return 5; })) == 0.0);
  CHECK(mod6_dip_score(build([](std::int64_t x) { return x % 6 == 0 ? 2 : 5; })) == 1.0);
  // Data on the even lattice: odd bins are empty and neighbours are two apart.
  CHECK(mod6_dip_score(build([](std::int64_t x) {
          if (x % 2) return 0;
          return x % 6 == 0 ? 3 : 9;
        })) == 1.0);
  // Spikes instead of dips.
  CHECK(mod6_dip_score(build([](std::int64_t x) { return x % 6 == 0 ? 9 : 3; })) == 0.0);
  // Only multiples of 12 dip: 8 of the 16 nonzero multiples of 6 in range.
  CHECK(mod6_dip_score(build([](std::int64_t x) { return x % 12 == 0 ? 1 : 4; })) == 0.5);
  CHECK_THROWS_AS(mod6_dip_score(histogram(V{1}, 2, -50, 51)), std::invalid_argument);
  CHECK_THROWS_AS(mod6_dip_score(histogram(V{1}, 1, -20, 21)), std::invalid_argument);
}

TEST_CASE("count_zeros") {
  // i = 2 is a zero (3, 5, 7).
  CHECK(daleth_range(engine(), {1, 2, 0, 1}, 2, 2).values == V{0});
  CHECK(count_zeros(engine(), {1, 2, 0, 0}, 300) == 300);
  const oracle::PrimeTable t(200'000);
  for (std::uint64_t T : {1, 2, 10, 100, 1000, 10000}) {
    std::uint64_t balanced = 0;
    for (std::uint64_t i = 1; i <= T; ++i) balanced += 2 * t.nth(i + 1) == t.nth(i) + t.nth(i + 2);
    CHECK(count_zeros(engine(), {1, 2, 0, 1}, T) == balanced);
  }
  std::uint64_t z2 = 0;
  for (std::uint64_t i = 1; i <= 1000; ++i) z2 += 2 * t.pip(2, 0, i + 1) == t.pip(2, 0, i) + t.pip(2, 0, i + 2);
  CHECK(count_zeros(engine(), {1, 2, 0, 2}, 1000) == z2);
  CHECK_THROWS_AS(count_zeros(engine(), {1, 2, 0, 1}, 0), std::invalid_argument);
}

TEST_CASE("fit_exponential and zero_density_fit") {
  const D x{1, 2, 3, 4};
  D y;
  for (double k : x) y.push_back(0.3 * std::exp(-0.7 * k));
  const ExponentialFit f = fit_exponential(x, y);
  CHECK(f.amplitude == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.rate == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(f.r2_log == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.r2_linear == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.dropped_x.empty());

  const ExponentialFit g = fit_exponential(D{1, 2, 3, 4}, D{0.5, 0.25, 0.0, 0.0625});
  CHECK(g.dropped_x == D{3});
  CHECK(g.rate == doctest::Approx(-std::log(2.0)));
  CHECK_THROWS_AS(fit_exponential(D{1, 2}, D{1, 2}), DegenerateSampleError);
  CHECK_THROWS_AS(fit_exponential(D{1, 2, 3}, D{1, 0, 2}), DegenerateSampleError);
  CHECK_THROWS_AS(fit_exponential(D{1, 2, 3}, D{1, 2}), std::invalid_argument);

  const std::vector<unsigned> ks{1, 2, 3};
  const std::vector<std::uint64_t> Ts{20000, 10000, 5000};
  const ZeroDensityFit z = zero_density_fit(engine(), 2, ks, Ts);
  REQUIRE(z.points.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(z.points[j].k == ks[j]);
    CHECK(z.points[j].sample_size == Ts[j]);
    CHECK(z.points[j].zeros == count_zeros(engine(), {1, 2, 0, ks[j]}, Ts[j]));
    CHECK(z.points[j].density == static_cast<double>(z.points[j].zeros) / static_cast<double>(Ts[j]));
  }
  CHECK(z.points[0].density > z.points[1].density);
  CHECK(z.fit.rate < 0);
  CHECK_THROWS_AS(zero_density_fit(engine(), 2, std::span(ks).first(2), std::span(Ts).first(2)),
                  DegenerateSampleError);
  CHECK_THROWS_AS(zero_density_fit(engine(), 2, ks, std::span(Ts).first(2)), std::invalid_argument);
}

TEST_CASE("outlier_census") {
  CHECK(outlier_census({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}, 1).total == 0);
  CHECK(outlier_census({{1, -2, 0}}, 3).total == 0);
  CHECK(outlier_census({}, 1).total == 0);
  // Rows 10 and 11 have one dissenter each; row 12 is tied; zeros do not vote.
  const OutlierCensus c = outlier_census({{1, 5, 1, 0}, {1, 6, -1, 0}, {-3, -7, 0, 4}}, 2, 10);
  CHECK(c.total == 2);
  using P = std::pair<std::uint64_t, unsigned>;
  CHECK(c.positions == std::vector<P>{{10, 4}, {11, 4}});
  CHECK_THROWS_AS(outlier_census({{1, 2}, {1}}, 1), std::invalid_argument);

  // Against the direct grid built from daleth values.
  const DalethSpec base{1, 2, 0, 1};
  const OutlierCensus e = outlier_census(engine(), 30, 1, 4, base);
  std::vector<V> grid;
  for (unsigned k = 1; k <= 4; ++k) grid.push_back(daleth_range(engine(), {1, 2, 0, k}, 1, 30).values);
  const OutlierCensus d = outlier_census(grid, 1, 1);
  CHECK(e.total == d.total);
  CHECK(e.positions == d.positions);
  CHECK(outlier_census(engine(), 50, 3, 3, base).total == 0);
  CHECK_THROWS_AS(outlier_census(engine(), 0, 1, 2, base), std::invalid_argument);
  CHECK_THROWS_AS(outlier_census(engine(), 10, 3, 2, base), std::invalid_argument);
}

TEST_CASE("sign-filtered rolling variance stays near one with wide windows") {
  // k = 5, 6 at this width would need PIPs past the default universe bound.
  const std::pair<unsigned, std::uint64_t> cases[] = {{1, 50000}, {2, 50000}, {3, 50000}, {4, 12000}};
  for (const auto& [k, T] : cases) {
    const Series s = sign_filter(daleth_range(engine(), {1, 2, 0, k}, 1, T));
    for (const auto& r : rolling_moments(s, 10000, 1000).rows) {
      INFO("k=" << k << " i=" << r.i);
      REQUIRE(r.variance >= 0.9);
      REQUIRE(r.variance <= 1.02);
    }
  }
}

TEST_CASE("fits on daleth data") {
  const Series d = daleth_range(engine(), {1, 2, 0, 2}, 1, 5001);
  const LaplaceFit l = fit_laplace(d.values);
  V sorted = d.values;
  std::sort(sorted.begin(), sorted.end());
  CHECK(l.mu == static_cast<double>(sorted[2500]));
  double ll = 0;
  for (const auto x : d.values) ll += -std::log(2 * l.b) - std::abs(static_cast<double>(x) - l.mu) / l.b;
  CHECK(l.log_likelihood == doctest::Approx(ll).epsilon(1e-6));

  const Histogram h = histogram(d.values, 7, static_cast<double>(sorted.front()),
                                static_cast<double>(sorted.back()) + 1);
  CHECK(h.total == d.size());
}
