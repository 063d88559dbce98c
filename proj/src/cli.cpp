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

#include "pipfract/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

#include "pipfract/config.hpp"
#include "pipfract/daleth.hpp"
#include "pipfract/error.hpp"
#include "pipfract/pip.hpp"
#include "pipfract/render.hpp"
#include "pipfract/stats.hpp"

namespace pipfract {

namespace {

using json = nlohmann::ordered_json;

struct GlobalOpts {
  std::string config_file;
  // Kept as text so flags accept the same number syntax as the config file.
  std::optional<std::string> universe_bound;
  std::optional<std::string> cache_path;
  std::optional<std::string> segment_span;
  std::optional<std::string> checkpoint_stride;
  std::optional<std::string> output_dir;
  std::optional<std::string> threads;
};

RunConfig resolve_config(const GlobalOpts& g) {
  RunConfig cfg;
  if (!g.config_file.empty()) apply_config_file(cfg, g.config_file);
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) cfg.cache_path = env;
  const std::pair<const char*, const std::optional<std::string>*> flags[] = {
      {"universe_bound", &g.universe_bound}, {"cache_path", &g.cache_path},
      {"segment_span", &g.segment_span},     {"checkpoint_stride", &g.checkpoint_stride},
      {"output_dir", &g.output_dir},         {"threads", &g.threads}};
  for (const auto& [key, value] : flags) {
    if (*value) apply_config_key(cfg, key, **value);
  }
  cfg.validate();
  return cfg;
}

/// Engine with the configured cache attached when the file exists.
PrimeEngine make_engine(const RunConfig& cfg, std::ostream& err) {
  PrimeEngine engine(cfg.engine());
  std::error_code ec;
  if (!cfg.cache_path.empty() && std::filesystem::exists(cfg.cache_path, ec)) {
    try {
      engine.load_cache(cfg.cache_path);
    } catch (const std::exception& e) {
      err << "warning: ignoring cache " << cfg.cache_path.string() << ": " << e.what() << "\n";
    }
  }
  return engine;
}

struct DiffOpts {
  std::uint64_t h = 1;
  unsigned n = 2;
  std::uint64_t s = 0;
};

void add_diff_opts(CLI::App* app, DiffOpts& d) {
  app->add_option("-h,--spacing", d.h, "finite-difference spacing h")->capture_default_str();
  app->add_option("-n,--order", d.n, "finite-difference order n")->capture_default_str();
  app->add_option("-s,--shift", d.s, "index-set shift s")->capture_default_str();
}

std::vector<unsigned> k_list(const std::string& range) {
  const auto [lo, hi] = parse_index_range(range);
  std::vector<unsigned> ks;
  for (std::uint64_t k = lo; k <= hi; ++k) ks.push_back(static_cast<unsigned>(k));
  return ks;
}

std::vector<std::uint64_t> u64_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_index_range(item).first);
  return out;
}

void emit_series(std::ostream& out, const Series& s, const std::string& format) {
  if (format == "json") {
    out << json(s.values).dump() << "\n";
    return;
  }
  out << "i,value\n";
  for (std::size_t j = 0; j < s.values.size(); ++j) {
    out << s.start + j << ',' << s.values[j] << '\n';
  }
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (const auto& row : m) a.push_back(row);
  return a;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pipfract: prime-indexed primes, their finite differences, statistics and gridplots"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  // Global options may also follow the subcommand.
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--config", g.config_file, "key = value config file");
  app.add_option("--universe-bound", g.universe_bound, "largest integer ever sieved");
  app.add_option("--cache", g.cache_path, "checkpoint cache path (env PIPFRACT_CACHE)");
  app.add_option("--segment-span", g.segment_span, "sieve segment span");
  app.add_option("--checkpoint-stride", g.checkpoint_stride, "primes between checkpoints");
  app.add_option("--output-dir", g.output_dir, "directory for rendered files");
  app.add_option("--threads", g.threads, "concurrent sieve segments");

  // cache
  auto* cache = app.add_subcommand("cache", "build the checkpoint cache");
  std::uint64_t cache_limit = 0;
  std::string cache_out;
  cache->add_option("--limit", cache_limit, "sieve limit")->required();
  cache->add_option("--path", cache_out, "output path (defaults to the configured cache path)");

  // pip
  auto* pipcmd = app.add_subcommand("pip", "prime-indexed primes q_s^k(i)");
  unsigned pip_k = 1;
  std::uint64_t pip_s = 0;
  std::string pip_range_text = "1:10";
  std::string format = "csv";
  pipcmd->add_option("-k,--pip-order", pip_k, "prime-index order k")->capture_default_str();
  pipcmd->add_option("-s,--shift", pip_s, "index-set shift s")->capture_default_str();
  pipcmd->add_option("-i,--index", pip_range_text, "inclusive index range lo:hi")->capture_default_str();
  pipcmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  // daleth
  auto* dal = app.add_subcommand("daleth", "finite differences of PIP sequences");
  DiffOpts dopt;
  unsigned dal_k = 1;
  std::string dal_range = "1:10";
  std::string filter = "none";
  add_diff_opts(dal, dopt);
  dal->add_option("-k,--pip-order", dal_k, "prime-index order k")->capture_default_str();
  dal->add_option("-i,--index", dal_range, "inclusive index range lo:hi")->capture_default_str();
  dal->add_option("--filter", filter)->check(CLI::IsMember({"none", "sign", "quant256"}))->capture_default_str();
  dal->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  // stats
  auto* stats = app.add_subcommand("stats", "statistical analyses of daleth series");
  stats->require_subcommand(1);
  DiffOpts sopt;
  unsigned st_k = 1;
  std::string st_krange = "1:6";
  std::uint64_t st_T = 2500;

  auto* rolling = stats->add_subcommand("rolling", "rolling-window mean and variance (CSV)");
  std::uint64_t roll_w = 500, roll_y = 100;
  std::string roll_filter = "none";
  add_diff_opts(rolling, sopt);
  rolling->add_option("-k,--pip-order", st_k)->capture_default_str();
  rolling->add_option("--T", st_T, "sample size")->capture_default_str();
  rolling->add_option("--w", roll_w, "window width")->capture_default_str();
  rolling->add_option("--y", roll_y, "step size")->capture_default_str();
  rolling->add_option("--filter", roll_filter)->check(CLI::IsMember({"none", "sign"}))->capture_default_str();

  auto* corr = stats->add_subcommand("corr", "pairwise Pearson matrix and OLS fits (JSON)");
  add_diff_opts(corr, sopt);
  corr->add_option("--k", st_krange, "k range lo:hi")->capture_default_str();
  corr->add_option("--T", st_T, "sample size")->capture_default_str();

  auto* hist = stats->add_subcommand("hist", "histogram and mod-6 dip score (JSON)");
  double hist_width = 1, hist_lo = -50, hist_hi = 51;
  bool hist_pdf = false;
  add_diff_opts(hist, sopt);
  hist->add_option("-k,--pip-order", st_k)->capture_default_str();
  hist->add_option("--T", st_T, "sample size")->capture_default_str();
  hist->add_option("--width", hist_width)->capture_default_str();
  hist->add_option("--lo", hist_lo, "left end (inclusive)")->capture_default_str();
  hist->add_option("--hi", hist_hi, "right end (exclusive)")->capture_default_str();
  hist->add_flag("--pdf", hist_pdf, "normalize to a density");

  auto* lap = stats->add_subcommand("laplace", "Laplace and Gaussian fits, excess kurtosis (JSON)");
  add_diff_opts(lap, sopt);
  lap->add_option("-k,--pip-order", st_k)->capture_default_str();
  lap->add_option("--T", st_T, "sample size")->capture_default_str();

  auto* zeros = stats->add_subcommand("zeros", "zero counts and exponential density fit (JSON)");
  std::string zeros_T = "2500";
  add_diff_opts(zeros, sopt);
  zeros->add_option("--k", st_krange, "k range lo:hi")->capture_default_str();
  zeros->add_option("--T", zeros_T, "sample size, or comma list with one per k")->capture_default_str();

  auto* outl = stats->add_subcommand("outliers", "sign-outlier census (JSON)");
  std::uint64_t imax = 50;
  std::string outl_k = "1:8";
  add_diff_opts(outl, sopt);
  outl->add_option("--imax", imax)->capture_default_str();
  outl->add_option("--k", outl_k, "k range lo:hi")->capture_default_str();

  // render
  auto* rend = app.add_subcommand("render", "fractal gridplot as binary PPM");
  DiffOpts ropt;
  std::string rend_k = "1:6", rend_i = "1:2500", style = "sign3", rend_out;
  GridGeometry geom;
  add_diff_opts(rend, ropt);
  rend->add_option("--k", rend_k, "k range lo:hi")->capture_default_str();
  rend->add_option("-i,--index", rend_i, "inclusive index range lo:hi")->capture_default_str();
  rend->add_option("--style", style)->check(CLI::IsMember({"sign3", "jet256"}))->capture_default_str();
  rend->add_option("--out", rend_out, "output file (default <output_dir>/gridplot.ppm)");
  rend->add_option("--band-width", geom.band_width)->capture_default_str();
  rend->add_option("--row-height", geom.row_height)->capture_default_str();
  rend->add_option("--gap", geom.gap)->capture_default_str();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code;
  }

  try {
    const RunConfig cfg = resolve_config(g);

    if (cache->parsed()) {
      PrimeEngine engine(cfg.engine());
      const std::filesystem::path path = cache_out.empty() ? cfg.cache_path : std::filesystem::path(cache_out);
      const CacheSummary s = engine.build_cache(cache_limit, path);
      out << json{{"count", s.prime_count}, {"max", s.max_prime},
                  {"checkpoints", s.checkpoints}, {"stride", cfg.checkpoint_stride},
                  {"path", path.string()}}.dump()
          << "\n";
      return 0;
    }

    const PrimeEngine engine = make_engine(cfg, err);

    if (pipcmd->parsed()) {
      const auto [lo, hi] = parse_index_range(pip_range_text);
      const PipSeries q = pip_range(engine, {pip_k, pip_s}, lo, hi);
      Series s{q.spec, q.start, {q.values.begin(), q.values.end()}};
      emit_series(out, s, format);
      return 0;
    }

    if (dal->parsed()) {
      const auto [lo, hi] = parse_index_range(dal_range);
      Series s = daleth_range(engine, {dopt.h, dopt.n, dopt.s, dal_k}, lo, hi);
      if (filter == "sign") s = sign_filter(s);
      if (filter == "quant256") s = quantize256(s);
      emit_series(out, s, format);
      return 0;
    }

    if (stats->parsed()) {
      const DalethSpec spec{sopt.h, sopt.n, sopt.s, st_k};
      if (rolling->parsed()) {
        Series s = daleth_range(engine, spec, 1, st_T);
        if (roll_filter == "sign") s = sign_filter(s);
        const RollingMoments rm = rolling_moments(s, roll_w, roll_y);
        out << "i,mean,variance\n";
        for (const auto& r : rm.rows) {
          out << r.i << ',' << json(r.mean).dump() << ',' << json(r.variance).dump() << '\n';
        }
        return 0;
      }
      if (corr->parsed()) {
        const auto ks = k_list(st_krange);
        std::vector<Series> series;
        for (unsigned k : ks) series.push_back(daleth_range(engine, {sopt.h, sopt.n, sopt.s, k}, 1, st_T));
        const Matrix m = corr_matrix(series);
        double mn = 1.0, mx = -1.0;
        json pairs = json::array();
        for (std::size_t a = 0; a < ks.size(); ++a) {
          for (std::size_t b = a + 1; b < ks.size(); ++b) {
            mn = std::min(mn, m[a][b]);
            mx = std::max(mx, m[a][b]);
            const LinearFit f = ols_fit(series[a].values, series[b].values);
            pairs.push_back({{"a", ks[a]}, {"b", ks[b]}, {"r", f.r},
                             {"a0", f.intercept}, {"a1", f.slope}});
          }
        }
        if (ks.size() == 1) mn = mx = 1.0;
        const CorrTrends t = corr_trends(m);
        out << json{{"k", ks}, {"T", st_T}, {"matrix", matrix_json(m)}, {"min", mn},
                    {"max_off_diagonal", mx},
                    {"trends", {{"rows_decrease", t.rows_decrease},
                                {"columns_decrease", t.columns_decrease},
                                {"superdiagonal_increases", t.superdiagonal_increases}}},
                    {"pairs", pairs}}.dump()
            << "\n";
        return 0;
      }
      if (hist->parsed()) {
        const Series s = daleth_range(engine, spec, 1, st_T);
        const Histogram h = histogram(s.values, hist_width, hist_lo, hist_hi,
                                      hist_pdf ? Normalization::pdf : Normalization::counts);
        json bins = json::array();
        for (const auto& b : h.bins) bins.push_back({{"left", b.left}, {"center", b.center}, {"count", b.count}});
        json j{{"k", st_k}, {"T", st_T}, {"bin_width", h.bin_width}, {"origin", h.origin},
               {"normalization", hist_pdf ? "pdf" : "counts"}, {"total", h.total}, {"bins", bins}};
        try {
          j["mod6_dip_score"] = mod6_dip_score(h);
        } catch (const std::invalid_argument&) {
          j["mod6_dip_score"] = nullptr;
        }
        out << j.dump() << "\n";
        return 0;
      }
      if (lap->parsed()) {
        const Series s = daleth_range(engine, spec, 1, st_T);
        const LaplaceFit l = fit_laplace(s.values);
        const GaussianFit gf = fit_gaussian(s.values);
        out << json{{"k", st_k}, {"T", st_T},
                    {"laplace", {{"mu", l.mu}, {"b", l.b}, {"log_likelihood", l.log_likelihood}}},
                    {"gaussian", {{"mu", gf.mu}, {"sigma", gf.sigma}, {"log_likelihood", gf.log_likelihood}}},
                    {"excess_kurtosis", excess_kurtosis(s.values)}}.dump()
            << "\n";
        return 0;
      }
      if (zeros->parsed()) {
        const auto ks = k_list(st_krange);
        auto Ts = u64_list(zeros_T);
        if (Ts.size() == 1) Ts.assign(ks.size(), Ts.front());
        if (Ts.size() != ks.size()) throw std::invalid_argument("--T needs one value or one per k");
        json points = json::array();
        if (ks.size() >= 3) {
          const ZeroDensityFit z = zero_density_fit(engine, sopt.n, ks, Ts, spec);
          for (const auto& p : z.points) {
            points.push_back({{"k", p.k}, {"T", p.sample_size}, {"zeros", p.zeros}, {"density", p.density}});
          }
          out << json{{"n", sopt.n}, {"points", points},
                      {"fit", {{"A", z.fit.amplitude}, {"B", z.fit.rate}, {"r2_log", z.fit.r2_log},
                               {"r2_linear", z.fit.r2_linear}, {"dropped_k", z.fit.dropped_x}}}}.dump()
              << "\n";
          return 0;
        }
        for (std::size_t j = 0; j < ks.size(); ++j) {
          const std::uint64_t c = count_zeros(engine, {sopt.h, sopt.n, sopt.s, ks[j]}, Ts[j]);
          points.push_back({{"k", ks[j]}, {"T", Ts[j]}, {"zeros", c},
                            {"density", static_cast<double>(c) / static_cast<double>(Ts[j])}});
        }
        out << json{{"n", sopt.n}, {"points", points}}.dump() << "\n";
        return 0;
      }
      if (outl->parsed()) {
        const auto [klo, khi] = parse_index_range(outl_k);
        const OutlierCensus c = outlier_census(engine, imax, static_cast<unsigned>(klo),
                                               static_cast<unsigned>(khi), spec);
        json pos = json::array();
        for (const auto& [i, k] : c.positions) pos.push_back({i, k});
        out << json{{"total", c.total}, {"positions", pos}}.dump() << "\n";
        return 0;
      }
    }

    if (rend->parsed()) {
      const auto ks = k_list(rend_k);
      const auto [ilo, ihi] = parse_index_range(rend_i);
      const std::uint64_t reach = std::uint64_t{ropt.n} * ropt.h;
      std::vector<GridRow> rows;
      for (unsigned k : ks) {
        PipSeries q;
        try {
          q = pip_range(engine, {k, ropt.s}, ilo, ihi + reach);
        } catch (const UniverseBoundError& e) {
          err << "error: row k=" << k << ": prime index " << e.index()
              << " exceeds universe bound " << e.bound() << "\n";
          return 1;
        }
        Series d{DalethSpec{ropt.h, ropt.n, ropt.s, k}, ilo,
                 finite_difference(std::vector<std::int64_t>(q.values.begin(), q.values.end()),
                                   ropt.n, ropt.h)};
        d = style == "sign3" ? sign_filter(d) : quantize256(d);
        rows.push_back({k, std::move(d.values), q.values.front(), q.values[ihi - ilo]});
      }
      const Colormap cmap{style == "sign3" ? ColormapKind::sign3 : ColormapKind::jet256};
      const GridImage img = render_gridplot(rows, cmap, geom);
      const std::filesystem::path path =
          rend_out.empty() ? cfg.output_dir / "gridplot.ppm" : std::filesystem::path(rend_out);
      write_ppm(img, path);
      json meta = json::array();
      for (const auto& m : img.meta) meta.push_back({{"k", m.k}, {"q_first", m.q_first}, {"q_last", m.q_last}});
      out << json{{"out", path.string()}, {"width", img.width}, {"height", img.height},
                  {"rows", meta}}.dump()
          << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace pipfract
