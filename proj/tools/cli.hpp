#pragma once

// Command implementations for the `lbf` executable. Kept in a header so the
// test suite can drive the commands in-process.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lbf/bench.hpp"
#include "lbf/data.hpp"
#include "lbf/io.hpp"
#include "lbf/lbf.hpp"
#include "lbf/metrics.hpp"
#include "lbf/modelsel.hpp"
#include "lbf/scale.hpp"

namespace lbf::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kIoOrParse = 1, kBadConfig = 2 };

struct InputOptions {
  std::string path;
  std::string format = "csv";  // csv | binary | trajectory
  std::string delimiter = ",";
  bool header = false;
};

struct ScaleFlags {
  std::optional<std::size_t> start;
  std::size_t step = 2;
  std::string mean_shift;  // "l,m"
  bool first_scale_min = false;
  std::size_t max_scale = 0;
};

struct ClusterOptions {
  InputOptions input;
  std::size_t dim = 0;
  std::size_t k = 0;
  std::string kind = "affine";
  std::optional<std::size_t> candidates;
  std::optional<std::size_t> passes;
  ScaleFlags scale;
  std::uint64_t seed = 0;
  std::string labels;
  std::string out;
  std::string format = "labels";  // labels | csv | jsonl
  std::string record;
  bool no_timing = false;
};

struct BenchCmdOptions {
  std::string suite = "affine";
  std::string setting = "2^2inR4";
  double outliers = 5.0;  // percent
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string method = "lbf";  // lbf | lbfms | kflats
  std::size_t restarts = 30;
  std::size_t samples = 250;
  double noise = 0.05;
  std::string json_path;
  bool per_trial = false;
  bool no_timing = false;
};

struct ModelSelCmdOptions {
  InputOptions input;
  std::size_t dim = 0;
  std::size_t kmax = 10;
  std::size_t restarts = kDefaultModelRestarts;
  std::string kind = "affine";
  std::uint64_t seed = 0;
  std::string out;
  bool no_timing = false;
};

struct GenerateOptions {
  std::string setting;
  std::string dims = "2,2";
  std::size_t ambient = 4;
  std::size_t samples = 250;
  double noise = 0.05;
  double outliers = 0.0;  // percent
  std::string outlier_rule = "inliers";  // inliers | total
  std::string kind = "affine";
  std::optional<double> min_angle;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

struct ScaleMapOptions {
  InputOptions input;
  std::size_t dim = 0;
  std::string kind = "affine";
  ScaleFlags scale;
  std::string out;
};

namespace detail {

inline FlatKind parse_kind(const std::string& s) {
  if (s == "affine") return FlatKind::Affine;
  if (s == "linear") return FlatKind::Linear;
  throw Error(ErrorKind::InvalidArgument, "unknown flat kind '" + s + "' (expected affine or linear)");
}

inline std::vector<std::size_t> parse_size_list(const std::string& s, const std::string& what) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(tok, &pos);
      if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "invalid " + what + " '" + s + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "invalid " + what + " '" + s + "'");
  return out;
}

inline char parse_delimiter(const std::string& s) {
  if (s == "tab" || s == "\\t") return '\t';
  if (s == "space" || s == "whitespace" || s == " ") return ' ';
  if (s.size() != 1) throw Error(ErrorKind::InvalidArgument, "delimiter must be a single character");
  return s[0];
}

inline PointCloud load_input(const InputOptions& in) {
  const io::TextOptions text{parse_delimiter(in.delimiter), in.header};
  if (in.format == "csv" || in.format == "text") return io::load_matrix(in.path, io::MatrixFormat::Delimited, text);
  if (in.format == "binary") return io::load_matrix(in.path, io::MatrixFormat::Binary);
  if (in.format == "trajectory") {
    return io::load_trajectories(in.path, {in.delimiter == "," ? ' ' : parse_delimiter(in.delimiter), in.header});
  }
  throw Error(ErrorKind::InvalidArgument, "unknown input format '" + in.format + "'");
}

inline ScaleConfig make_scale(const ScaleFlags& f, std::size_t d, FlatKind kind) {
  ScaleConfig cfg = ScaleConfig::defaults(d, kind);
  if (f.start) cfg.start_size = *f.start;
  cfg.step = f.step;
  cfg.allow_first_scale_min = f.first_scale_min;
  cfg.max_size = f.max_scale;
  if (!f.mean_shift.empty()) {
    const auto lm = parse_size_list(f.mean_shift, "mean-shift spec (expected l,m)");
    if (lm.size() != 2) throw Error(ErrorKind::InvalidArgument, "mean-shift spec must be l,m");
    cfg.mean_shift = true;
    cfg.mean_shift_neighbors = lm[0];
    cfg.mean_shift_iters = lm[1];
  }
  return cfg;
}

inline json scale_json(const ScaleConfig& s) {
  return {{"start_size", s.start_size},
          {"step", s.step},
          {"mean_shift", s.mean_shift},
          {"mean_shift_neighbors", s.mean_shift_neighbors},
          {"mean_shift_iters", s.mean_shift_iters},
          {"allow_first_scale_min", s.allow_first_scale_min},
          {"max_size", s.max_size}};
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline json timing_json(double seconds) { return {{"elapsed_seconds", seconds}, {"timestamp", utc_timestamp()}}; }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
}

}  // namespace detail

inline int cmd_cluster(const ClusterOptions& opt, std::ostream& out, std::ostream& err) {
  const FlatKind kind = detail::parse_kind(opt.kind);
  const PointCloud cloud = detail::load_input(opt.input);

  LbfConfig cfg = LbfConfig::defaults(opt.dim, opt.k, kind, opt.seed);
  if (opt.candidates) cfg.candidates = *opt.candidates;
  if (opt.passes) cfg.passes = *opt.passes;
  cfg.scale = detail::make_scale(opt.scale, opt.dim, kind);
  require(opt.dim < cloud.ambient_dim(), "dimension out of range: --dim " + std::to_string(opt.dim) +
                                             " must be < D=" + std::to_string(cloud.ambient_dim()));
  cfg.validate();

  std::optional<std::vector<int>> truth;
  if (!opt.labels.empty()) {
    truth = io::load_labels(opt.labels);
    if (truth->size() != cloud.size()) {
      throw Error(ErrorKind::Parse, opt.labels + ": " + std::to_string(truth->size()) + " labels for " +
                                        std::to_string(cloud.size()) + " points");
    }
  }

  const ClusteringResult result = lbf_cluster(cloud, cfg);

  json record = {{"command", "cluster"},
                 {"input", opt.input.path},
                 {"n", cloud.size()},
                 {"ambient_dim", cloud.ambient_dim()},
                 {"config",
                  {{"d", cfg.d},
                   {"K", cfg.K},
                   {"C", cfg.candidates},
                   {"p", cfg.passes},
                   {"kind", to_string(cfg.kind)},
                   {"scale", detail::scale_json(cfg.scale)}}},
                 {"seed", cfg.seed},
                 {"l1_energy", result.l1_energy},
                 {"l2_energy", result.l2_energy},
                 {"mean_l1", result.mean_l1()},
                 {"empty_cluster", result.has_empty_cluster}};
  if (truth) {
    const double error = misclassification_rate(result.labels, *truth);
    record["error_percent"] = error;
    err << "error: " << std::fixed << std::setprecision(2) << error << "%\n";
  }
  if (!opt.no_timing) record["timing"] = detail::timing_json(result.elapsed_seconds);

  if (!opt.out.empty()) {
    if (opt.format == "labels") {
      io::save_labels(opt.out, result.labels);
    } else if (opt.format == "csv") {
      io::save_result(opt.out, result, io::ResultFormat::Delimited);
    } else if (opt.format == "jsonl") {
      io::save_result(opt.out, result, io::ResultFormat::JsonLines);
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown output format '" + opt.format + "'");
    }
  }
  const std::string text = record.dump(2) + "\n";
  if (!opt.record.empty()) {
    detail::write_text(opt.record, text);
  } else {
    out << text;
  }
  return kOk;
}

inline int cmd_bench(const BenchCmdOptions& opt, std::ostream& out, std::ostream& err) {
  BenchOptions bench;
  const auto setting = find_setting(opt.setting);
  if (!setting) {
    err << "unknown setting '" << opt.setting << "'; valid settings: " << setting_names() << "\n";
    return kBadConfig;
  }
  bench.setting = *setting;
  bench.kind = detail::parse_kind(opt.suite);
  require(opt.outliers >= 0.0 && opt.outliers < 100.0, "--outliers must be a percentage in [0, 100)");
  bench.outlier_fraction = opt.outliers / 100.0;
  bench.trials = opt.trials;
  bench.seed = opt.seed;
  bench.restarts = opt.restarts;
  bench.samples_per_subspace = opt.samples;
  bench.noise_sigma = opt.noise;
  if (opt.method == "lbf") {
    bench.method = BenchMethod::Lbf;
  } else if (opt.method == "lbfms") {
    bench.method = BenchMethod::LbfMs;
  } else if (opt.method == "kflats") {
    bench.method = BenchMethod::KFlats;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown method '" + opt.method + "' (expected lbf, lbfms or kflats)");
  }

  const BenchSummary summary = run_benchmark(bench);

  out << std::setprecision(6);
  if (opt.per_trial) {
    out << "trial,data_seed,error_percent,l1_energy,l2_energy" << (opt.no_timing ? "" : ",seconds") << "\n";
    for (const auto& t : summary.trials) {
      out << t.trial << ',' << t.data_seed << ',' << t.error_percent << ',' << t.l1_energy << ',' << t.l2_energy;
      if (!opt.no_timing) out << ',' << t.seconds;
      out << '\n';
    }
  }
  out << "suite,setting,outliers_percent,method,trials,mean_error_percent,median_error_percent"
      << (opt.no_timing ? "" : ",mean_seconds") << "\n";
  out << opt.suite << ',' << opt.setting << ',' << opt.outliers << ',' << opt.method << ',' << opt.trials << ','
      << summary.mean_error << ',' << summary.median_error;
  if (!opt.no_timing) out << ',' << summary.mean_seconds;
  out << '\n';

  if (!opt.json_path.empty()) {
    json trials = json::array();
    for (const auto& t : summary.trials) {
      json row = {{"trial", t.trial},         {"data_seed", t.data_seed}, {"method_seed", t.method_seed},
                  {"error_percent", t.error_percent}, {"l1_energy", t.l1_energy}, {"l2_energy", t.l2_energy}};
      if (!opt.no_timing) row["seconds"] = t.seconds;
      trials.push_back(row);
    }
    json record = {{"command", "bench"},
                   {"config",
                    {{"suite", opt.suite},
                     {"setting", opt.setting},
                     {"outliers_percent", opt.outliers},
                     {"method", opt.method},
                     {"trials", opt.trials},
                     {"restarts", opt.restarts},
                     {"samples_per_subspace", opt.samples},
                     {"noise_sigma", opt.noise},
                     {"C_per_cluster", 70},
                     {"p_per_cluster", 3},
                     {"T", 2}}},
                   {"seed", opt.seed},
                   {"mean_error_percent", summary.mean_error},
                   {"median_error_percent", summary.median_error},
                   {"trials", trials}};
    if (!opt.no_timing) record["timing"] = detail::timing_json(summary.mean_seconds);
    detail::write_text(opt.json_path, record.dump(2) + "\n");
  }
  return kOk;
}

inline int cmd_modelsel(const ModelSelCmdOptions& opt, std::ostream& out, std::ostream&) {
  const FlatKind kind = detail::parse_kind(opt.kind);
  const PointCloud cloud = detail::load_input(opt.input);
  require(opt.dim < cloud.ambient_dim(), "dimension out of range: --dim must be < D");
  require(opt.kmax >= 3, "--kmax must be >= 3");
  require(opt.restarts >= 1, "--restarts must be >= 1");

  const auto start = std::chrono::steady_clock::now();
  const auto sel = select_model_order(cloud, opt.dim, opt.kmax, kind, opt.seed, opt.restarts);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream table;
  table << std::setprecision(17) << "k,W,sod\n";
  for (std::size_t i = 0; i < sel.curve.W.size(); ++i) {
    const std::size_t k = i + 1;
    table << k << ',' << sel.curve.W[i] << ',';
    if (k >= 2 && k + 1 <= sel.curve.W.size()) table << sel.elbow.sod[k - 2];
    table << '\n';
  }
  if (!opt.out.empty()) detail::write_text(opt.out, table.str());

  json record = {{"command", "modelsel"},
                 {"input", opt.input.path},
                 {"d", opt.dim},
                 {"k_max", opt.kmax},
                 {"restarts", opt.restarts},
                 {"kind", to_string(kind)},
                 {"seed", opt.seed},
                 {"W", sel.curve.W},
                 {"sod", sel.elbow.sod},
                 {"k_opt", sel.elbow.k_opt}};
  if (!opt.no_timing) record["timing"] = detail::timing_json(seconds);
  out << record.dump(2) << "\n";
  return kOk;
}

inline int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream&) {
  SyntheticSpec spec;
  if (!opt.setting.empty()) {
    const auto setting = find_setting(opt.setting);
    if (!setting) {
      throw Error(ErrorKind::InvalidArgument,
                  "unknown setting '" + opt.setting + "'; valid settings: " + setting_names());
    }
    spec.dims = setting->dims;
    spec.ambient = setting->ambient;
  } else {
    spec.dims = detail::parse_size_list(opt.dims, "--dims list");
    spec.ambient = opt.ambient;
  }
  spec.samples_per_subspace = opt.samples;
  spec.noise_sigma = opt.noise;
  require(opt.outliers >= 0.0 && opt.outliers < 100.0, "--outliers must be a percentage in [0, 100)");
  spec.outlier_fraction = opt.outliers / 100.0;
  if (opt.outlier_rule == "inliers") {
    spec.outlier_rule = OutlierRule::FractionOfInliers;
  } else if (opt.outlier_rule == "total") {
    spec.outlier_rule = OutlierRule::FractionOfTotal;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown outlier rule '" + opt.outlier_rule + "'");
  }
  spec.kind = detail::parse_kind(opt.kind);
  spec.min_angle = opt.min_angle;
  spec.seed = opt.seed;
  require(!opt.out.empty(), "--out prefix is required");

  const LabeledCloud data = generate(spec);
  std::string matrix_path;
  if (opt.format == "csv") {
    matrix_path = opt.out + ".csv";
    io::save_matrix(matrix_path, data.cloud.points(), io::MatrixFormat::Delimited);
  } else if (opt.format == "binary") {
    matrix_path = opt.out + ".bin";
    io::save_matrix(matrix_path, data.cloud.points(), io::MatrixFormat::Binary);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown matrix format '" + opt.format + "'");
  }
  io::save_labels(opt.out + ".labels", data.truth);

  json echo = {{"dims", spec.dims},
               {"ambient", spec.ambient},
               {"samples_per_subspace", spec.samples_per_subspace},
               {"noise_sigma", spec.noise_sigma},
               {"outlier_fraction", spec.outlier_fraction},
               {"outlier_rule", opt.outlier_rule},
               {"kind", to_string(spec.kind)},
               {"seed", spec.seed},
               {"n_inliers", spec.inlier_count()},
               {"n_outliers", spec.outlier_count()},
               {"n", data.cloud.size()},
               {"matrix", matrix_path},
               {"labels", opt.out + ".labels"}};
  echo["min_angle"] = spec.min_angle ? json(*spec.min_angle) : json(nullptr);
  detail::write_text(opt.out + ".spec.json", echo.dump(2) + "\n");
  out << echo.dump(2) << "\n";
  return kOk;
}

inline int cmd_scalemap(const ScaleMapOptions& opt, std::ostream& out, std::ostream&) {
  const FlatKind kind = detail::parse_kind(opt.kind);
  const PointCloud cloud = detail::load_input(opt.input);
  require(opt.dim < cloud.ambient_dim(), "dimension out of range: --dim must be < D");
  const ScaleConfig cfg = detail::make_scale(opt.scale, opt.dim, kind);

  std::vector<std::size_t> sizes(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    sizes[i] = select_neighborhood(cloud, cloud.point(i), opt.dim, cfg, kind).selected_size();
  });

  std::ostringstream table;
  table << std::setprecision(17);
  for (std::size_t c = 0; c < cloud.ambient_dim(); ++c) table << 'x' << c << ',';
  table << "size\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t c = 0; c < cloud.ambient_dim(); ++c) table << cloud.points()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) << ',';
    table << sizes[i] << '\n';
  }
  if (opt.out.empty()) {
    out << table.str();
  } else {
    detail::write_text(opt.out, table.str());
  }
  return kOk;
}

namespace detail {

inline void add_input(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("input", in.path, "Data matrix file")->required();
  cmd->add_option("--input-format", in.format, "csv, binary or trajectory")->capture_default_str();
  cmd->add_option("--delimiter", in.delimiter, "Text delimiter (single character, 'tab' or 'space')")
      ->capture_default_str();
  cmd->add_flag("--header", in.header, "Skip the first non-empty line of a text matrix");
}

inline void add_scale(CLI::App* cmd, ScaleFlags& s) {
  cmd->add_option("--start", s.start, "Start neighborhood size S (default d+2 affine, d+1 linear)");
  cmd->add_option("--step", s.step, "Neighborhood step T")->capture_default_str();
  cmd->add_option("--mean-shift", s.mean_shift, "Mean-shift seeds: l,m (neighbors, iterations)");
  cmd->add_flag("--first-scale-min", s.first_scale_min, "Let the first scale count as a local minimum");
  cmd->add_option("--max-scale", s.max_scale, "Largest neighborhood examined (0 = N)")->capture_default_str();
}

}  // namespace detail

/// Parses argv and dispatches to a command. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cluster points near a union of flats with local best-fit flats"};
  app.require_subcommand(1);

  ClusterOptions cluster;
  auto* c = app.add_subcommand("cluster", "Cluster a data file into K flats");
  detail::add_input(c, cluster.input);
  c->add_option("--dim", cluster.dim, "Flat dimension d")->required();
  c->add_option("--k", cluster.k, "Number of flats K")->required();
  c->add_option("--kind", cluster.kind, "affine or linear")->capture_default_str();
  c->add_option("--candidates", cluster.candidates, "Candidate count C (default 70K)");
  c->add_option("--passes", cluster.passes, "Greedy passes p (default 3K)");
  detail::add_scale(c, cluster.scale);
  c->add_option("--seed", cluster.seed, "RNG seed")->capture_default_str();
  c->add_option("--labels", cluster.labels, "Ground-truth labels (one per line, -1 = outlier)");
  c->add_option("--out", cluster.out, "Write per-point output here");
  c->add_option("--format", cluster.format, "Output format: labels, csv or jsonl")->capture_default_str();
  c->add_option("--record", cluster.record, "Write the JSON run record here instead of stdout");
  c->add_flag("--no-timing", cluster.no_timing, "Omit timing fields (byte-stable output)");

  BenchCmdOptions bench;
  auto* b = app.add_subcommand("bench", "Synthetic benchmark: generate and cluster repeated trials");
  b->add_option("--suite", bench.suite, "affine or linear")->capture_default_str();
  b->add_option("--setting", bench.setting, "One of: " + setting_names())->capture_default_str();
  b->add_option("--outliers", bench.outliers, "Outlier percentage")->capture_default_str();
  b->add_option("--trials", bench.trials, "Number of trials")->capture_default_str();
  b->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
  b->add_option("--method", bench.method, "lbf, lbfms or kflats")->capture_default_str();
  b->add_option("--restarts", bench.restarts, "K-flats restarts")->capture_default_str();
  b->add_option("--samples", bench.samples, "Samples per subspace")->capture_default_str();
  b->add_option("--noise", bench.noise, "Gaussian noise sigma")->capture_default_str();
  b->add_option("--json", bench.json_path, "Write a JSON record with per-trial results");
  b->add_flag("--per-trial", bench.per_trial, "Also print one CSV row per trial");
  b->add_flag("--no-timing", bench.no_timing, "Omit timing fields (byte-stable output)");

  ModelSelCmdOptions modelsel;
  auto* m = app.add_subcommand("modelsel", "Estimate the number of flats by the SOD elbow of ln W_k");
  detail::add_input(m, modelsel.input);
  m->add_option("--dim", modelsel.dim, "Flat dimension d")->required();
  m->add_option("--kmax", modelsel.kmax, "Largest K tried")->capture_default_str();
  m->add_option("--restarts", modelsel.restarts, "LBF runs per K; W_k is the lowest")->capture_default_str();
  m->add_option("--kind", modelsel.kind, "affine or linear")->capture_default_str();
  m->add_option("--seed", modelsel.seed, "Master seed")->capture_default_str();
  m->add_option("--out", modelsel.out, "Write the k,W,sod table here");
  m->add_flag("--no-timing", modelsel.no_timing, "Omit timing fields (byte-stable output)");

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Sample a synthetic hybrid linear data set");
  g->add_option("--setting", gen.setting, "Named setting (overrides --dims/--ambient): " + setting_names());
  g->add_option("--dims", gen.dims, "Comma-separated subspace dimensions")->capture_default_str();
  g->add_option("--ambient", gen.ambient, "Ambient dimension D")->capture_default_str();
  g->add_option("--samples", gen.samples, "Samples per subspace")->capture_default_str();
  g->add_option("--noise", gen.noise, "Gaussian noise sigma")->capture_default_str();
  g->add_option("--outliers", gen.outliers, "Outlier percentage")->capture_default_str();
  g->add_option("--outlier-rule", gen.outlier_rule, "inliers: pct of inliers; total: pct of final set")
      ->capture_default_str();
  g->add_option("--kind", gen.kind, "affine or linear")->capture_default_str();
  g->add_option("--min-angle", gen.min_angle, "Minimum separation angle between subspaces (radians)");
  g->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  g->add_option("--out", gen.out, "Output prefix")->required();
  g->add_option("--format", gen.format, "Matrix format: csv or binary")->capture_default_str();

  ScaleMapOptions scalemap;
  auto* s = app.add_subcommand("scalemap", "Selected neighborhood size for every point");
  detail::add_input(s, scalemap.input);
  s->add_option("--dim", scalemap.dim, "Flat dimension d")->required();
  s->add_option("--kind", scalemap.kind, "affine or linear")->capture_default_str();
  detail::add_scale(s, scalemap.scale);
  s->add_option("--out", scalemap.out, "Write the CSV here instead of stdout");

  std::vector<const char*> argv{"lbf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIoOrParse;
  }

  try {
    if (c->parsed()) return cmd_cluster(cluster, out, err);
    if (b->parsed()) return cmd_bench(bench, out, err);
    if (m->parsed()) return cmd_modelsel(modelsel, out, err);
    if (g->parsed()) return cmd_generate(gen, out, err);
    if (s->parsed()) return cmd_scalemap(scalemap, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::Io ? kIoOrParse : kBadConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoOrParse;
  }
  return kBadConfig;
}

}  // namespace lbf::cli
