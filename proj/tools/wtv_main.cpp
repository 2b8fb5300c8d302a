#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wtv/core.hpp"
#include "wtv/csv.hpp"
#include "wtv/monitor.hpp"
#include "wtv/path.hpp"
#include "wtv/sim.hpp"
#include "wtv/stream.hpp"

using nlohmann::json;

namespace {

wtv::WindowSamples load_series(const std::string& path) {
  auto table = wtv::read_csv(path);
  if (!table.has_column("t") || !table.has_column("y"))
    throw wtv::CsvError(path + ": need columns t,y");
  return wtv::WindowSamples::from_yt(table.column("y"), table.column("t"));
}

int cmd_denoise(const std::string& input, const std::string& output,
                double lambda, bool auto_lambda, std::size_t q) {
  wtv::WindowSamples w = load_series(input);
  wtv::MergePath path = wtv::compute_merge_path(w);
  if (auto_lambda) {
    wtv::SelectorConfig cfg;
    cfg.q = q;
    lambda = wtv::select_lambda(path, w, cfg);
    std::printf("selected_lambda=%s\n", wtv::format_double(lambda).c_str());
  }
  wtv::Segmentation seg = wtv::solution_at_lambda(w, path, lambda);
  std::vector<double> u = seg.expand(w.size());
  std::vector<double> seg_id(w.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (j < seg.cut_boundaries.size() && i > seg.cut_boundaries[j]) ++j;
    seg_id[i] = double(j);
  }
  wtv::CsvTable out;
  out.headers = {"t", "y", "u_star", "segment_id"};
  out.columns = {w.t, w.y, u, seg_id};
  wtv::write_csv(output, out);
  return 0;
}

int cmd_monitor(const std::string& input, const std::string& output,
                std::size_t m, double baseline, std::size_t warmup,
                double threshold, std::size_t consecutive, std::size_t q) {
  wtv::WindowSamples series = load_series(input);
  const std::size_t n = series.size();
  if (n < m) throw wtv::ContractViolation("monitor: series shorter than window");

  wtv::WindowSamples w0 = wtv::WindowSamples::from_yt(
      {series.y.begin(), series.y.begin() + m},
      {series.t.begin(), series.t.begin() + m});
  wtv::StreamState st = wtv::make_stream(std::move(w0));
  wtv::SelectorConfig sel;
  sel.q = q;
  wtv::ShiftPolicy policy;
  policy.baseline_sigma = baseline > 0 ? baseline : 1.0;
  policy.ratio_threshold = threshold;
  policy.consecutive_windows = consecutive;

  std::vector<wtv::MonitorRecord> records;
  bool any_alert = false;
  for (std::size_t i = 0;; ++i) {
    if (warmup > 0 && i == warmup && baseline <= 0)
      policy.baseline_sigma = wtv::calibrate_baseline(
          {records.data(), records.size()});
    wtv::MonitorRecord rec =
        wtv::monitor_step(st, sel, policy, {records.data(), records.size()}, i);
    if (warmup > 0 && i < warmup) rec.shift_alert = false;
    records.push_back(rec);
    any_alert = any_alert || rec.shift_alert;
    if (i + m >= n) break;
    wtv::slide_update(st, series.y[i + m], series.t[i + m]);
  }

  wtv::CsvTable out;
  out.headers = {"start_index", "sigma_star", "lambda_used", "mad_sigma",
                 "shift_alert"};
  out.columns.assign(5, {});
  for (const auto& r : records) {
    out.columns[0].push_back(double(r.window_start_index));
    out.columns[1].push_back(r.sigma_star);
    out.columns[2].push_back(r.lambda_used);
    out.columns[3].push_back(r.mad_sigma);
    out.columns[4].push_back(r.shift_alert ? 1.0 : 0.0);
  }
  wtv::write_csv(output, out);
  return any_alert ? 2 : 0;
}

wtv::ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config parse error: " + std::string(e.what()));
  }
  wtv::ExperimentConfig cfg;
  std::vector<std::string> bad;
  auto get_uint = [&](const char* key, std::size_t& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_unsigned()) bad.push_back(key);
    else dst = j[key].get<std::size_t>();
  };
  auto get_double = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) bad.push_back(key);
    else dst = j[key].get<double>();
  };
  get_uint("m", cfg.m);
  get_uint("n", cfg.n);
  get_uint("repetitions", cfg.repetitions);
  get_double("dt", cfg.dt);
  get_uint("q", cfg.selector.q);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad.push_back("seed");
    else cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("noise_model")) {
    if (j["noise_model"].is_number_integer()) {
      int idx = j["noise_model"].get<int>();
      if (idx < 1 || idx > 4) bad.push_back("noise_model");
      else cfg.noise = wtv::NoiseModel::standard(idx);
    } else {
      bad.push_back("noise_model");
    }
  }
  if (j.contains("signal_steps")) {
    if (!j["signal_steps"].is_array()) bad.push_back("signal_steps");
    else {
      cfg.steps.clear();
      for (const auto& s : j["signal_steps"]) {
        if (!s.is_array() || s.size() != 2 || !s[0].is_number() ||
            !s[1].is_number()) {
          bad.push_back("signal_steps");
          break;
        }
        cfg.steps.push_back({s[0].get<double>(), s[1].get<double>()});
      }
    }
  }
  if (cfg.m < 4) bad.push_back("m (must be >= 4)");
  if (cfg.n < cfg.m) bad.push_back("n (must be >= m)");
  if (cfg.selector.q < 1) bad.push_back("q (must be >= 1)");
  if (!bad.empty()) {
    std::string msg = "invalid config fields:";
    for (const auto& f : bad) msg += " " + f;
    throw std::runtime_error(msg);
  }
  return cfg;
}

int cmd_simulate(const std::string& config_path, const std::string& report_csv,
                 const std::string& summary_json) {
  wtv::ExperimentConfig cfg = parse_config(config_path);
  wtv::ExperimentReport rep = wtv::run_experiment(cfg);

  wtv::CsvTable out;
  out.headers = {"repetition", "rve_ours", "bias_ours", "rve_mad", "bias_mad",
                 "mean_rewritten", "mean_slide_us", "max_nonright_len"};
  out.columns.assign(out.headers.size(), {});
  for (std::size_t i = 0; i < rep.reps.size(); ++i) {
    const auto& r = rep.reps[i];
    out.columns[0].push_back(double(i));
    out.columns[1].push_back(r.rve_ours);
    out.columns[2].push_back(r.bias_ours);
    out.columns[3].push_back(r.rve_mad);
    out.columns[4].push_back(r.bias_mad);
    out.columns[5].push_back(r.mean_rewritten);
    out.columns[6].push_back(r.mean_slide_us);
    out.columns[7].push_back(r.max_nonright_len);
  }
  wtv::write_csv(report_csv, out);

  json hist = json::array();
  for (std::size_t len = 0; len < rep.nonright_hist.size(); ++len)
    if (rep.nonright_hist[len] > 0)
      hist.push_back({{"length", len}, {"count", rep.nonright_hist[len]}});
  json summary = {
      {"m", cfg.m},
      {"n", cfg.n},
      {"repetitions", cfg.repetitions},
      {"seed", cfg.seed},
      {"median_rve_ours", rep.median_rve_ours()},
      {"median_rve_mad", rep.median_rve_mad()},
      {"nonright_length_histogram", hist},
  };
  std::ofstream sj(summary_json);
  sj << summary.dump(2) << "\n";
  std::printf("median_rve_ours=%g median_rve_mad=%g\n", rep.median_rve_ours(),
              rep.median_rve_mad());
  return 0;
}

int cmd_bench(const std::vector<std::size_t>& windows, std::size_t slides,
              std::uint64_t seed, const std::string& out_json) {
  auto results = wtv::run_bench(windows, slides, seed);
  json arr = json::array();
  for (const auto& r : results) {
    arr.push_back({{"m", r.m},
                   {"mean_slide_us", r.mean_slide_us},
                   {"mean_rewritten", r.mean_rewritten},
                   {"mean_nonright_len", r.mean_nonright_len}});
    std::printf("m=%zu mean_slide_us=%.2f mean_rewritten=%.1f\n", r.m,
                r.mean_slide_us, r.mean_rewritten);
  }
  if (!out_json.empty()) {
    std::ofstream out(out_json);
    out << arr.dump(2) << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Windowed total-variation denoising and noise variance monitor"};
  app.require_subcommand(1);

  std::string input, output = "out.csv";
  double lambda = -1;
  bool auto_lambda = false;
  std::size_t q = 10;

  auto* denoise = app.add_subcommand("denoise", "Denoise a t,y CSV series");
  denoise->add_option("input", input, "input CSV with columns t,y")->required();
  denoise->add_option("--lambda", lambda, "fixed regularization value");
  denoise->add_flag("--auto", auto_lambda, "select lambda automatically");
  denoise->add_option("--q", q, "selector derivative length");
  denoise->add_option("--out", output, "output CSV path");

  std::size_t m = 400, warmup = 0, consecutive = 5;
  double baseline = 0, threshold = 1.2;
  auto* monitor = app.add_subcommand("monitor", "Windowed variance monitoring");
  monitor->add_option("input", input, "input CSV with columns t,y")->required();
  monitor->add_option("--window", m, "window length m")->required();
  monitor->add_option("--baseline", baseline, "stable-regime sigma");
  monitor->add_option("--warmup", warmup, "calibrate baseline over k windows");
  monitor->add_option("--threshold", threshold, "alert ratio threshold");
  monitor->add_option("--consecutive", consecutive, "consecutive windows");
  monitor->add_option("--q", q, "selector derivative length");
  monitor->add_option("--out", output, "output CSV path");

  std::string config_path, summary_json = "summary.json";
  auto* simulate = app.add_subcommand("simulate", "Run the simulation study");
  simulate->add_option("--config", config_path, "JSON config")->required();
  simulate->add_option("--report", output, "per-repetition CSV report");
  simulate->add_option("--summary", summary_json, "JSON summary");

  std::vector<std::size_t> windows{100, 200, 400};
  std::size_t slides = 500;
  std::uint64_t seed = 1;
  std::string bench_json;
  auto* bench = app.add_subcommand("bench", "Per-slide timing benchmark");
  bench->add_option("--windows", windows, "window sizes");
  bench->add_option("--slides", slides, "slides per window size");
  bench->add_option("--seed", seed, "random seed");
  bench->add_option("--out", bench_json, "JSON output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (denoise->parsed()) {
      if (!auto_lambda && lambda < 0) {
        std::fprintf(stderr, "denoise: pass --lambda or --auto\n");
        return 1;
      }
      return cmd_denoise(input, output, lambda, auto_lambda, q);
    }
    if (monitor->parsed()) {
      if (baseline <= 0 && warmup == 0) {
        std::fprintf(stderr, "monitor: pass --baseline or --warmup\n");
        return 1;
      }
      return cmd_monitor(input, output, m, baseline, warmup, threshold,
                         consecutive, q);
    }
    if (simulate->parsed())
      return cmd_simulate(config_path, output, summary_json);
    if (bench->parsed()) return cmd_bench(windows, slides, seed, bench_json);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
