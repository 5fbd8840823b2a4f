// Command-line front end: estimate, grid, simulate, oracle, hull.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lpdens/errors.hpp"
#include "lpdens/hull2d.hpp"
#include "lpdens/io.hpp"
#include "lpdens/kernels.hpp"
#include "lpdens/parallel.hpp"
#include "lpdens/selection.hpp"
#include "lpdens/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lpdens;

namespace {

std::vector<double> parse_point(const std::string& s) {
  std::vector<double> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) {
        std::size_t pos = 0;
        out.push_back(std::stod(cur, &pos));
        cur.clear();
      }
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (out.empty()) throw IoError("empty point spec: '" + s + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_point(s)) out.push_back(static_cast<int>(v));
  return out;
}

//! "start:step:count" or a comma list of bandwidths.
std::vector<double> parse_h_grid(const std::string& s) {
  if (s.find(':') == std::string::npos) return parse_point(s);
  double start = 0, step = 0;
  int count = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &start, &step, &count) != 3 ||
      count < 1)
    throw IoError("bad bandwidth grid spec: '" + s + "'");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = start + step * i;
  return out;
}

MRule parse_m_rule(const std::string& s) {
  if (s == "simple") return MRule::simple_domain;
  if (s == "zero") return MRule::zero;
  if (s == "custom") return MRule::custom;
  throw IoError("unknown m-rule '" + s + "' (use simple|zero|custom)");
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

//! Applies config-file values to options the user did not pass on the
//! command line (precedence: flags > config file > defaults).
class ConfigLayer {
 public:
  ConfigLayer(CLI::App* cmd, std::string path) : cmd_(cmd) {
    if (path.empty()) return;
    json parsed = json::parse(read_text_file(path));
    if (parsed.contains("config")) parsed = parsed["config"];  // manifest rerun
    cfg_ = std::move(parsed);
  }

  template <class T>
  void apply(const std::string& flag, const std::string& key, T& var) const {
    if (cfg_.is_null() || !cfg_.contains(key)) return;
    const CLI::Option* opt = cmd_->get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) return;
    var = cfg_[key].get<T>();
  }

 private:
  CLI::App* cmd_;
  json cfg_;
};

struct ManifestInfo {
  std::string command;
  JsonVal config = JsonVal::object();
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& out_dir, const ManifestInfo& info) {
  JsonVal root = JsonVal::object();
  root.set("command", JsonVal::str(info.command));
  root.set("version", JsonVal::str(LPDENS_VERSION));
  root.set("kernel", JsonVal::str(kernels::active_kernel_name()));
  root.set("timestamp", JsonVal::str(timestamp_utc()));
  JsonVal outs = JsonVal::array();
  for (const auto& f : info.outputs) outs.push(JsonVal::str(f));
  root.set("outputs", std::move(outs));
  root.set("config", info.config);
  write_text_file(out_dir + "/manifest.json", root.dump());
}

void ensure_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory: " + out);
}

double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const double idx = p * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = idx - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

struct EstimateOpts {
  std::string domain_file, data_file, out = "lpdens_out", config_file;
  std::vector<std::string> t_specs;
  std::string t_grid;
  double delta = 2.0;
  double rho = 0.0;  // 0 = default for the domain
  std::string m_rule = "simple";
  std::string m_custom;
  bool clip_nonneg = false;
  bool no_fallback = false;
  int jobs = default_jobs();
};

int run_estimate(CLI::App* cmd, EstimateOpts& o) {
  ConfigLayer cfg(cmd, o.config_file);
  cfg.apply("--domain", "domain_file", o.domain_file);
  cfg.apply("--data", "data_file", o.data_file);
  cfg.apply("--t", "t", o.t_specs);
  cfg.apply("--t-grid", "t_grid", o.t_grid);
  cfg.apply("--delta", "delta", o.delta);
  cfg.apply("--rho", "rho", o.rho);
  cfg.apply("--m-rule", "m_rule", o.m_rule);
  cfg.apply("--m-custom", "m_custom", o.m_custom);
  cfg.apply("--clip-nonneg", "clip_nonneg", o.clip_nonneg);
  cfg.apply("--no-fallback", "no_fallback", o.no_fallback);
  cfg.apply("--out", "out", o.out);
  cfg.apply("--jobs", "jobs", o.jobs);
  if (o.domain_file.empty() || o.data_file.empty())
    throw IoError("estimate: --domain and --data are required");

  const Domain domain = domain_from_json_file(o.domain_file);
  const Sample sample = read_sample_csv(o.data_file);
  const double rho = o.rho > 0.0 ? o.rho : default_rho(domain);

  SelectionConfig scfg;
  scfg.delta = o.delta;
  scfg.m_rule = parse_m_rule(o.m_rule);
  if (!o.m_custom.empty()) scfg.custom_m = parse_int_list(o.m_custom);
  scfg.fallback_on_empty_grid = !o.no_fallback;

  std::vector<std::vector<double>> ts;
  for (const auto& spec : o.t_specs) ts.push_back(parse_point(spec));
  std::vector<std::string> grid_warnings;
  if (!o.t_grid.empty()) {
    const auto nxny = parse_int_list(o.t_grid);
    if (nxny.size() != 2 || nxny[0] < 2 || nxny[1] < 2)
      throw IoError("estimate: --t-grid needs NX,NY with both >= 2");
    const AxisBox& bb = domain.bounding_box();
    for (int iy = 0; iy < nxny[1]; ++iy) {
      for (int ix = 0; ix < nxny[0]; ++ix) {
        std::vector<double> t = {
            bb.lower[0] + (bb.upper[0] - bb.lower[0]) * ix / (nxny[0] - 1),
            bb.lower[1] + (bb.upper[1] - bb.lower[1]) * iy / (nxny[1] - 1)};
        if (domain.contains(t)) ts.push_back(std::move(t));
      }
    }
    if (ts.empty()) throw IoError("estimate: no grid point lies in the domain");
  }
  if (ts.empty()) throw IoError("estimate: give at least one --t or --t-grid");

  ensure_out_dir(o.out);
  ManifestInfo manifest;
  manifest.command = "estimate";

  std::vector<std::string> files(ts.size());
  std::vector<SelectionReport> reports(ts.size());
  parallel_for(ts.size(), o.jobs, [&](std::size_t i) {
    const EstimationContext ctx(domain, ts[i], rho);
    reports[i] = select(ctx, sample, scfg);
    if (o.clip_nonneg && reports[i].f_hat_adaptive < 0.0)
      reports[i].f_hat_adaptive = 0.0;
  });
  for (std::size_t i = 0; i < ts.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "report_%03zu.json", i);
    write_text_file(o.out + "/" + name, report_to_json(reports[i], ts[i]).dump());
    files[i] = name;
    manifest.outputs.push_back(name);
  }

  JsonVal c = JsonVal::object();
  c.set("domain_file", JsonVal::str(o.domain_file));
  c.set("data_file", JsonVal::str(o.data_file));
  JsonVal tarr = JsonVal::array();
  for (const auto& spec : o.t_specs) tarr.push(JsonVal::str(spec));
  c.set("t", std::move(tarr));
  c.set("t_grid", JsonVal::str(o.t_grid));
  c.set("delta", JsonVal::number(o.delta));
  c.set("rho", JsonVal::number(o.rho));
  c.set("m_rule", JsonVal::str(o.m_rule));
  c.set("m_custom", JsonVal::str(o.m_custom));
  c.set("clip_nonneg", JsonVal::boolean(o.clip_nonneg));
  c.set("no_fallback", JsonVal::boolean(o.no_fallback));
  c.set("out", JsonVal::str(o.out));
  c.set("jobs", JsonVal::integer(o.jobs));
  manifest.config = std::move(c);
  write_manifest(o.out, manifest);

  for (const auto& f : files) std::cout << o.out << "/" << f << "\n";
  std::cout << o.out << "/manifest.json\n";
  return 0;
}

// ---------------------------------------------------------------------------
// grid
// ---------------------------------------------------------------------------

struct GridOpts {
  std::string domain_file, out, config_file;
  std::string t_spec;
  std::size_t n = 0;
  double delta = 2.0;
  double rho = 0.0;
  std::string m_rule = "simple";
  std::string m_custom;
};

int run_grid(CLI::App* cmd, GridOpts& o) {
  ConfigLayer cfg(cmd, o.config_file);
  cfg.apply("--domain", "domain_file", o.domain_file);
  cfg.apply("--t", "t", o.t_spec);
  cfg.apply("--n", "n", o.n);
  cfg.apply("--delta", "delta", o.delta);
  cfg.apply("--rho", "rho", o.rho);
  cfg.apply("--m-rule", "m_rule", o.m_rule);
  cfg.apply("--m-custom", "m_custom", o.m_custom);
  cfg.apply("--out", "out", o.out);
  if (o.domain_file.empty() || o.t_spec.empty() || o.n < 2)
    throw IoError("grid: --domain, --t and --n (>= 2) are required");

  const Domain domain = domain_from_json_file(o.domain_file);
  const double rho = o.rho > 0.0 ? o.rho : default_rho(domain);
  const EstimationContext ctx(domain, parse_point(o.t_spec), rho);

  SelectionConfig scfg;
  scfg.delta = o.delta;
  scfg.m_rule = parse_m_rule(o.m_rule);
  if (!o.m_custom.empty()) scfg.custom_m = parse_int_list(o.m_custom);

  const auto rows = grid_ladder(ctx, o.n, scfg);
  std::string csv = "ell,m,h,W_h,lambda,qualifies\n";
  std::size_t qualifying = 0;
  for (const auto& r : rows) {
    csv += std::to_string(r.ell) + "," + std::to_string(r.m) + "," +
           fmt17(r.h) + "," + fmt17(r.W_h) + "," +
           (r.singular ? "nan" : fmt17(r.lambda)) + "," +
           (r.qualifies ? "1" : "0") + "\n";
    if (r.qualifies) ++qualifying;
  }
  std::cout << csv;
  if (qualifying == 0)
    std::cerr << "note: no level satisfies n h^d W_h >= (log n)^3; "
                 "estimation falls back to ell=1\n";

  if (!o.out.empty()) {
    ensure_out_dir(o.out);
    write_text_file(o.out + "/grid.csv", csv);
    ManifestInfo manifest;
    manifest.command = "grid";
    manifest.outputs.push_back("grid.csv");
    JsonVal c = JsonVal::object();
    c.set("domain_file", JsonVal::str(o.domain_file));
    c.set("t", JsonVal::str(o.t_spec));
    c.set("n", JsonVal::integer(static_cast<std::int64_t>(o.n)));
    c.set("delta", JsonVal::number(o.delta));
    c.set("rho", JsonVal::number(o.rho));
    c.set("m_rule", JsonVal::str(o.m_rule));
    c.set("m_custom", JsonVal::str(o.m_custom));
    c.set("out", JsonVal::str(o.out));
    manifest.config = std::move(c);
    write_manifest(o.out, manifest);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate / oracle
// ---------------------------------------------------------------------------

struct SimulateOpts {
  std::string density = "poly_fk";
  double k = 1.0;
  std::vector<std::size_t> n_list;
  std::size_t R = 200;
  std::uint64_t seed = 0;
  std::string t_spec = "0,0";
  double delta = 2.0;
  std::string m_rule = "zero";
  std::string m_custom;
  std::string degrees;  // oracle degree grid override
  std::string h_grid;   // oracle bandwidth grid override
  bool full = false;
  bool no_oracle_table = false;
  std::string out = "lpdens_out", config_file;
  int jobs = default_jobs();
};

TargetDensity density_by_name(const std::string& name, double k) {
  if (name == "poly_fk") return make_test_density(TestDensityKind::poly_fk, k);
  if (name == "gauss_gk") return make_test_density(TestDensityKind::gauss_gk, k);
  if (name == "uniform") return make_test_density(TestDensityKind::uniform, k);
  throw IoError("unknown density '" + name + "' (use poly_fk|gauss_gk|uniform)");
}

void apply_simulate_config(CLI::App* cmd, SimulateOpts& o) {
  ConfigLayer cfg(cmd, o.config_file);
  cfg.apply("--density", "density", o.density);
  cfg.apply("--k", "k", o.k);
  cfg.apply("--n", "n", o.n_list);
  cfg.apply("--R", "R", o.R);
  cfg.apply("--seed", "seed", o.seed);
  cfg.apply("--t", "t", o.t_spec);
  cfg.apply("--delta", "delta", o.delta);
  cfg.apply("--m-rule", "m_rule", o.m_rule);
  cfg.apply("--m-custom", "m_custom", o.m_custom);
  cfg.apply("--degrees", "degrees", o.degrees);
  cfg.apply("--h-grid", "h_grid", o.h_grid);
  cfg.apply("--full", "full", o.full);
  cfg.apply("--no-oracle-table", "no_oracle_table", o.no_oracle_table);
  cfg.apply("--out", "out", o.out);
  cfg.apply("--jobs", "jobs", o.jobs);
}

JsonVal simulate_config_json(const SimulateOpts& o, bool oracle_only) {
  JsonVal c = JsonVal::object();
  c.set("density", JsonVal::str(o.density));
  c.set("k", JsonVal::number(o.k));
  JsonVal ns = JsonVal::array();
  for (std::size_t n : o.n_list) ns.push(JsonVal::integer(static_cast<std::int64_t>(n)));
  c.set("n", std::move(ns));
  c.set("R", JsonVal::integer(static_cast<std::int64_t>(o.R)));
  c.set("seed", JsonVal::integer(static_cast<std::int64_t>(o.seed)));
  c.set("t", JsonVal::str(o.t_spec));
  c.set("delta", JsonVal::number(o.delta));
  c.set("m_rule", JsonVal::str(o.m_rule));
  c.set("m_custom", JsonVal::str(o.m_custom));
  c.set("degrees", JsonVal::str(o.degrees));
  c.set("h_grid", JsonVal::str(o.h_grid));
  c.set("full", JsonVal::boolean(o.full));
  if (!oracle_only) c.set("no_oracle_table", JsonVal::boolean(o.no_oracle_table));
  c.set("out", JsonVal::str(o.out));
  c.set("jobs", JsonVal::integer(o.jobs));
  return c;
}

std::string oracle_table_csv(const OracleResult& res) {
  std::string csv = "m,h,mse,se,n_fail\n";
  for (const auto& cell : res.table) {
    csv += std::to_string(cell.m) + "," + fmt17(cell.h) + "," +
           fmt17(cell.mse) + "," + fmt17(cell.se) + "," +
           std::to_string(cell.n_fail) + "\n";
  }
  return csv;
}

int run_simulate(CLI::App* cmd, SimulateOpts& o, bool oracle_only) {
  apply_simulate_config(cmd, o);
  if (o.full) {
    o.R = 5000;
    if (o.n_list.empty()) o.n_list = {200, 500, 1000, 2000};
  }
  if (o.n_list.empty()) o.n_list = {200};

  StudyConfig study;
  study.density = density_by_name(o.density, o.k);
  study.t = parse_point(o.t_spec);
  study.sample_sizes = o.n_list;
  study.replications = o.R;
  study.degree_grid =
      o.degrees.empty() ? default_degree_grid() : parse_int_list(o.degrees);
  study.bandwidth_grid =
      o.h_grid.empty() ? default_bandwidth_grid() : parse_h_grid(o.h_grid);
  study.seed = o.seed;
  study.jobs = o.jobs;

  SelectionConfig scfg;
  scfg.delta = o.delta;
  scfg.m_rule = parse_m_rule(o.m_rule);
  if (!o.m_custom.empty()) scfg.custom_m = parse_int_list(o.m_custom);

  ensure_out_dir(o.out);
  ManifestInfo manifest;
  manifest.command = oracle_only ? "oracle" : "simulate";
  manifest.config = simulate_config_json(o, oracle_only);

  const double f_true = study.density.pdf(study.t);
  JsonVal summary = JsonVal::object();
  summary.set("density", JsonVal::str(study.density.name));
  summary.set("t", [&] {
    JsonVal a = JsonVal::array();
    for (double v : study.t) a.push(JsonVal::number(v));
    return a;
  }());
  summary.set("f_true", JsonVal::number(f_true));
  summary.set("R", JsonVal::integer(static_cast<std::int64_t>(o.R)));
  summary.set("seed", JsonVal::integer(static_cast<std::int64_t>(o.seed)));
  JsonVal per_n = JsonVal::array();

  std::string replications_csv = "rep,n,f_hat,m_sel,h_sel\n";
  std::vector<double> log_n, log_rmse;

  for (const std::size_t n : o.n_list) {
    JsonVal block = JsonVal::object();
    block.set("n", JsonVal::integer(static_cast<std::int64_t>(n)));

    if (!oracle_only) {
      const auto reps = adaptive_replications(study, n, scfg);
      std::vector<double> values;
      values.reserve(reps.size());
      double sq = 0.0, mean = 0.0;
      for (const auto& r : reps) {
        replications_csv += std::to_string(r.rep) + "," + std::to_string(r.n) +
                            "," + fmt17(r.f_hat) + "," + std::to_string(r.m_sel) +
                            "," + fmt17(r.h_sel) + "\n";
        values.push_back(r.f_hat);
        mean += r.f_hat;
        sq += (r.f_hat - f_true) * (r.f_hat - f_true);
      }
      mean /= static_cast<double>(reps.size());
      const double rmse = std::sqrt(sq / static_cast<double>(reps.size()));
      JsonVal ad = JsonVal::object();
      ad.set("mean", JsonVal::number(mean));
      ad.set("rmse", JsonVal::number(rmse));
      ad.set("q25", JsonVal::number(percentile(values, 0.25)));
      ad.set("median", JsonVal::number(percentile(values, 0.50)));
      ad.set("q75", JsonVal::number(percentile(values, 0.75)));
      block.set("adaptive", std::move(ad));
      log_n.push_back(std::log(static_cast<double>(n)));
      log_rmse.push_back(std::log(std::max(rmse, 1e-300)));
    }

    if (oracle_only || !o.no_oracle_table) {
      const OracleResult res = oracle_search(study, n);
      const std::string fname = o.n_list.size() == 1
                                    ? "mse_table.csv"
                                    : "mse_table_n" + std::to_string(n) + ".csv";
      write_text_file(o.out + "/" + fname, oracle_table_csv(res));
      manifest.outputs.push_back(fname);
      double best_mse = 0.0, best_se = 0.0;
      for (const auto& cell : res.table) {
        if (cell.m == res.m_star && cell.h == res.h_star) {
          best_mse = cell.mse;
          best_se = cell.se;
        }
      }
      JsonVal orc = JsonVal::object();
      orc.set("m_star", JsonVal::integer(res.m_star));
      orc.set("h_star", JsonVal::number(res.h_star));
      orc.set("mse", JsonVal::number(best_mse));
      orc.set("se", JsonVal::number(best_se));
      block.set("oracle", std::move(orc));
    }
    per_n.push(std::move(block));
  }
  summary.set("per_n", std::move(per_n));

  if (!oracle_only) {
    write_text_file(o.out + "/replications.csv", replications_csv);
    manifest.outputs.push_back("replications.csv");
    const auto [mn, mx] =
        std::minmax_element(o.n_list.begin(), o.n_list.end());
    if (o.n_list.size() >= 3 &&
        static_cast<double>(*mx) >= 10.0 * static_cast<double>(*mn)) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double c = static_cast<double>(log_n.size());
      for (std::size_t i = 0; i < log_n.size(); ++i) {
        sx += log_n[i];
        sy += log_rmse[i];
        sxx += log_n[i] * log_n[i];
        sxy += log_n[i] * log_rmse[i];
      }
      summary.set("rate_slope",
                  JsonVal::number((c * sxy - sx * sy) / (c * sxx - sx * sx)));
    } else {
      summary.set("rate_slope", JsonVal::null());
    }
  }

  write_text_file(o.out + "/summary.json", summary.dump());
  manifest.outputs.push_back("summary.json");
  write_manifest(o.out, manifest);
  for (const auto& f : manifest.outputs) std::cout << o.out << "/" << f << "\n";
  std::cout << o.out << "/manifest.json\n";
  return 0;
}

// ---------------------------------------------------------------------------
// hull
// ---------------------------------------------------------------------------

struct HullOpts {
  std::string data_file, out = "lpdens_out", config_file;
  double alpha = 0.5;
  std::vector<std::string> t_specs;
  std::string t_grid;
  double delta = 2.0;
  std::string m_rule = "simple";
  bool no_fallback = false;
  int jobs = default_jobs();
};

int run_hull(CLI::App* cmd, HullOpts& o) {
  ConfigLayer cfg(cmd, o.config_file);
  cfg.apply("--data", "data_file", o.data_file);
  cfg.apply("--alpha", "alpha", o.alpha);
  cfg.apply("--t", "t", o.t_specs);
  cfg.apply("--t-grid", "t_grid", o.t_grid);
  cfg.apply("--delta", "delta", o.delta);
  cfg.apply("--m-rule", "m_rule", o.m_rule);
  cfg.apply("--no-fallback", "no_fallback", o.no_fallback);
  cfg.apply("--out", "out", o.out);
  cfg.apply("--jobs", "jobs", o.jobs);
  if (o.data_file.empty()) throw IoError("hull: --data is required");

  const Sample sample = read_sample_csv(o.data_file);
  if (sample.d != 2) throw IoError("hull: data must have 2 columns");

  SelectionConfig scfg;
  scfg.delta = o.delta;
  scfg.m_rule = parse_m_rule(o.m_rule);
  scfg.fallback_on_empty_grid = !o.no_fallback;

  std::vector<std::array<double, 2>> ts;
  for (const auto& spec : o.t_specs) {
    const auto p = parse_point(spec);
    if (p.size() != 2) throw IoError("hull: t must be 2-D");
    ts.push_back({p[0], p[1]});
  }
  int gx = 0, gy = 0;
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  if (!o.t_grid.empty()) {
    const auto nxny = parse_int_list(o.t_grid);
    if (nxny.size() != 2 || nxny[0] < 2 || nxny[1] < 2)
      throw IoError("hull: --t-grid needs NX,NY with both >= 2");
    gx = nxny[0];
    gy = nxny[1];
    x0 = *std::min_element(sample.cols[0].begin(), sample.cols[0].end());
    x1 = *std::max_element(sample.cols[0].begin(), sample.cols[0].end());
    y0 = *std::min_element(sample.cols[1].begin(), sample.cols[1].end());
    y1 = *std::max_element(sample.cols[1].begin(), sample.cols[1].end());
    for (int iy = 0; iy < gy; ++iy) {
      for (int ix = 0; ix < gx; ++ix) {
        ts.push_back({x0 + (x1 - x0) * ix / (gx - 1),
                      y0 + (y1 - y0) * iy / (gy - 1)});
      }
    }
  }
  if (ts.empty()) throw IoError("hull: give at least one --t or --t-grid");

  const HullEstimateResult result =
      estimate_unknown_domain(sample, o.alpha, ts, scfg, o.jobs);

  ensure_out_dir(o.out);
  std::string csv = "tx,ty,inside_hull,p_hat,f_hat\n";
  for (const auto& e : result.estimates) {
    csv += fmt17(e.tx) + "," + fmt17(e.ty) + "," + (e.inside_hull ? "1" : "0") +
           "," + fmt17(e.p_hat) + "," + fmt17(e.f_hat) + "\n";
  }
  write_text_file(o.out + "/hull_estimates.csv", csv);

  JsonVal summary = JsonVal::object();
  summary.set("n", JsonVal::integer(static_cast<std::int64_t>(sample.size())));
  summary.set("alpha", JsonVal::number(o.alpha));
  summary.set("first_part_size",
              JsonVal::integer(static_cast<std::int64_t>(result.split.first_part_size)));
  summary.set("second_part_size",
              JsonVal::integer(static_cast<std::int64_t>(result.split.second_part_size)));
  summary.set("p_hat", JsonVal::number(result.p_hat));
  JsonVal hull = JsonVal::array();
  for (const auto& v : result.hull) {
    JsonVal pt = JsonVal::array();
    pt.push(JsonVal::number(v[0]));
    pt.push(JsonVal::number(v[1]));
    hull.push(std::move(pt));
  }
  summary.set("hull", std::move(hull));
  // Trapezoid-summed L1 mass of the estimate over the evaluation grid.
  if (gx >= 2 && gy >= 2) {
    const std::size_t grid_start = result.estimates.size() -
                                   static_cast<std::size_t>(gx) * gy;
    const double dx = (x1 - x0) / (gx - 1);
    const double dy = (y1 - y0) / (gy - 1);
    double l1 = 0.0;
    for (int iy = 0; iy < gy; ++iy) {
      for (int ix = 0; ix < gx; ++ix) {
        const auto& e = result.estimates[grid_start + static_cast<std::size_t>(iy) * gx + ix];
        const double wx = (ix == 0 || ix == gx - 1) ? 0.5 : 1.0;
        const double wy = (iy == 0 || iy == gy - 1) ? 0.5 : 1.0;
        l1 += wx * wy * std::abs(e.f_hat);
      }
    }
    summary.set("l1_trapezoid", JsonVal::number(l1 * dx * dy));
  }
  JsonVal warns = JsonVal::array();
  for (const auto& w : result.warnings) warns.push(JsonVal::str(w));
  summary.set("warnings", std::move(warns));
  write_text_file(o.out + "/hull_summary.json", summary.dump());

  ManifestInfo manifest;
  manifest.command = "hull";
  manifest.outputs = {"hull_estimates.csv", "hull_summary.json"};
  JsonVal c = JsonVal::object();
  c.set("data_file", JsonVal::str(o.data_file));
  c.set("alpha", JsonVal::number(o.alpha));
  JsonVal tarr = JsonVal::array();
  for (const auto& spec : o.t_specs) tarr.push(JsonVal::str(spec));
  c.set("t", std::move(tarr));
  c.set("t_grid", JsonVal::str(o.t_grid));
  c.set("delta", JsonVal::number(o.delta));
  c.set("m_rule", JsonVal::str(o.m_rule));
  c.set("no_fallback", JsonVal::boolean(o.no_fallback));
  c.set("out", JsonVal::str(o.out));
  c.set("jobs", JsonVal::integer(o.jobs));
  manifest.config = std::move(c);
  write_manifest(o.out, manifest);

  std::cout << o.out << "/hull_estimates.csv\n"
            << o.out << "/hull_summary.json\n"
            << o.out << "/manifest.json\n";
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Pointwise local polynomial density estimation on known domains"};
  app.require_subcommand(1);

  EstimateOpts eo;
  CLI::App* est = app.add_subcommand("estimate",
                                     "Adaptive estimate at given points");
  est->add_option("--domain", eo.domain_file, "Domain JSON file");
  est->add_option("--data", eo.data_file, "Sample CSV file");
  est->add_option("--t", eo.t_specs, "Evaluation point 'x,y' (repeatable)");
  est->add_option("--t-grid", eo.t_grid, "Evaluation grid 'NX,NY' over the bounding box");
  est->add_option("--delta", eo.delta, "Penalty constant (> 1)");
  est->add_option("--rho", eo.rho, "Largest scale (default: domain-derived)");
  est->add_option("--m-rule", eo.m_rule, "Degree rule: simple|zero|custom");
  est->add_option("--m-custom", eo.m_custom, "Custom degree list 'm1,m2,...'");
  est->add_flag("--clip-nonneg", eo.clip_nonneg, "Clip the reported estimate at 0");
  est->add_flag("--no-fallback", eo.no_fallback, "Fail instead of falling back on an empty grid");
  est->add_option("--out", eo.out, "Output directory");
  est->add_option("--jobs", eo.jobs, "Worker threads");
  est->add_option("--config", eo.config_file, "JSON config (flags take precedence)");

  GridOpts go;
  CLI::App* grd = app.add_subcommand("grid", "Print the bandwidth ladder");
  grd->add_option("--domain", go.domain_file, "Domain JSON file");
  grd->add_option("--t", go.t_spec, "Evaluation point 'x,y'");
  grd->add_option("--n", go.n, "Sample size");
  grd->add_option("--delta", go.delta, "Penalty constant (> 1)");
  grd->add_option("--rho", go.rho, "Largest scale (default: domain-derived)");
  grd->add_option("--m-rule", go.m_rule, "Degree rule: simple|zero|custom");
  grd->add_option("--m-custom", go.m_custom, "Custom degree list");
  grd->add_option("--out", go.out, "Also write grid.csv + manifest here");
  grd->add_option("--config", go.config_file, "JSON config");

  SimulateOpts so;
  CLI::App* sim = app.add_subcommand("simulate",
                                     "Replication study: adaptive + oracle table");
  SimulateOpts oo;
  CLI::App* orc = app.add_subcommand("oracle", "Oracle (m, h) search only");
  for (auto [sub, opts] : {std::pair{sim, &so}, std::pair{orc, &oo}}) {
    sub->add_option("--density", opts->density, "poly_fk|gauss_gk|uniform");
    sub->add_option("--k", opts->k, "Sector exponent k (>= 1)");
    sub->add_option("--n", opts->n_list, "Sample size (repeatable)");
    sub->add_option("--R", opts->R, "Replications");
    sub->add_option("--seed", opts->seed, "RNG seed");
    sub->add_option("--t", opts->t_spec, "Evaluation point (default origin)");
    sub->add_option("--delta", opts->delta, "Penalty constant (> 1)");
    sub->add_option("--m-rule", opts->m_rule, "Degree rule for the adaptive ladder");
    sub->add_option("--m-custom", opts->m_custom, "Custom degree list");
    sub->add_option("--degrees", opts->degrees, "Oracle degree grid 'm0,m1,...'");
    sub->add_option("--h-grid", opts->h_grid, "Oracle bandwidths 'start:step:count'");
    sub->add_flag("--full", opts->full, "Paper-scale protocol (R=5000, n=200..2000)");
    sub->add_option("--out", opts->out, "Output directory");
    sub->add_option("--jobs", opts->jobs, "Worker threads");
    sub->add_option("--config", opts->config_file, "JSON config");
  }
  sim->add_flag("--no-oracle-table", so.no_oracle_table, "Skip the M x H table");

  HullOpts ho;
  CLI::App* hul = app.add_subcommand("hull", "Unknown convex support pipeline");
  hul->add_option("--data", ho.data_file, "Sample CSV file");
  hul->add_option("--alpha", ho.alpha, "Second-part proportion in (0, 1)");
  hul->add_option("--t", ho.t_specs, "Evaluation point 'x,y' (repeatable)");
  hul->add_option("--t-grid", ho.t_grid, "Evaluation grid 'NX,NY' over the data range");
  hul->add_option("--delta", ho.delta, "Penalty constant (> 1)");
  hul->add_option("--m-rule", ho.m_rule, "Degree rule: simple|zero|custom");
  hul->add_flag("--no-fallback", ho.no_fallback, "Fail instead of falling back on an empty grid");
  hul->add_option("--out", ho.out, "Output directory");
  hul->add_option("--jobs", ho.jobs, "Worker threads");
  hul->add_option("--config", ho.config_file, "JSON config");

  CLI11_PARSE(app, argc, argv);

  if (est->parsed()) return run_estimate(est, eo);
  if (grd->parsed()) return run_grid(grd, go);
  if (sim->parsed()) return run_simulate(sim, so, false);
  if (orc->parsed()) return run_simulate(orc, oo, true);
  if (hul->parsed()) return run_hull(hul, ho);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const EmptyGrid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const QuadratureFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const SingularGram& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const EnvelopeFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
