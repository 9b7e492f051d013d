#include "hollowpca/experiments/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

namespace hollowpca::experiments {

namespace {

constexpr const char* kCsvVersion = "# hollowpca-results v1";

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool recordable(ErrorKind kind) {
  return kind != ErrorKind::InvalidParameter && kind != ErrorKind::IndexOutOfRange;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string grid_prefix(const ExperimentResult& r, const GridPoint& p) {
  std::string s = r.config.name + "," + std::to_string(p.index);
  for (const auto& [_, v] : p.values) s += "," + fmt(v);
  return s;
}

}  // namespace

Index ExperimentResult::failures() const {
  return std::count_if(records.begin(), records.end(), [](const Record& r) { return r.status != "ok"; });
}

std::size_t ExperimentResult::metric_index(const std::string& metric) const {
  const auto it = std::find(metric_columns.begin(), metric_columns.end(), metric);
  if (it == metric_columns.end()) throw std::out_of_range("no metric column '" + metric + "'");
  return static_cast<std::size_t>(it - metric_columns.begin());
}

std::vector<double> ExperimentResult::column(Index grid_index, const std::string& metric) const {
  const std::size_t m = metric_index(metric);
  std::vector<double> out;
  for (const auto& r : records)
    if (r.grid_index == grid_index && r.status == "ok") out.push_back(r.metrics[m]);
  return out;
}

const ExperimentSpec& spec_for(ExperimentKind kind) {
  for (const auto& s : catalog())
    if (s.kind == kind) return s;
  throw std::logic_error("experiment missing from the catalog");
}

Seed replicate_seed(const ExperimentConfig& cfg, const GridPoint& point, Index rep) {
  return Seed(cfg.seed, {static_cast<std::uint64_t>(point.stream), static_cast<std::uint64_t>(rep)});
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  const ExperimentSpec& spec = spec_for(cfg.experiment);

  ExperimentResult result;
  result.config = cfg;
  result.points = expand_grid(cfg);
  for (const auto& [name, _] : result.points.front().values) result.param_columns.push_back(name);
  result.metric_columns = spec.metrics;
  result.artifact_columns = spec.artifact_columns;

  const auto n_points = static_cast<Index>(result.points.size());
  const Index reps = cfg.replicates;
  const Index tasks = n_points * reps;
  result.records.resize(static_cast<std::size_t>(tasks));
  result.artifacts.resize(static_cast<std::size_t>(n_points));
  std::vector<std::exception_ptr> fatal(static_cast<std::size_t>(tasks));
  const bool wants_artifact = !spec.artifact_columns.empty();
  const int workers = opts.workers > 0 ? opts.workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (Index t = 0; t < tasks; ++t) {
    const GridPoint& point = result.points[static_cast<std::size_t>(t / reps)];
    Record& rec = result.records[static_cast<std::size_t>(t)];
    rec.grid_index = point.index;
    rec.replicate = t % reps;
    const Seed seed = replicate_seed(cfg, point, rec.replicate);
    rec.seed_stream = seed.to_string();
    const auto start = std::chrono::steady_clock::now();
    try {
      ReplicateOutput out = spec.run(point, seed, wants_artifact && rec.replicate == 0);
      if (out.metrics.size() != spec.metrics.size()) throw std::logic_error("metric count mismatch");
      rec.metrics = std::move(out.metrics);
      if (rec.replicate == 0) result.artifacts[static_cast<std::size_t>(point.index)] = std::move(out.artifact);
    } catch (const Error& e) {
      if (recordable(e.kind())) {
        rec.status = std::string(to_string(e.kind()));
        rec.metrics.assign(spec.metrics.size(), std::numeric_limits<double>::quiet_NaN());
      } else {
        fatal[static_cast<std::size_t>(t)] = std::current_exception();
      }
    } catch (...) {
      fatal[static_cast<std::size_t>(t)] = std::current_exception();
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  for (const auto& e : fatal)
    if (e) std::rethrow_exception(e);
  return result;
}

std::string format_csv(const ExperimentResult& r, bool include_wall_time) {
  std::string s = std::string(kCsvVersion) + " experiment=" + std::string(to_string(r.config.experiment)) + "\n";
  s += "experiment,grid_index";
  for (const auto& c : r.param_columns) s += "," + c;
  s += ",replicate,seed_stream,status";
  for (const auto& c : r.metric_columns) s += "," + c;
  if (include_wall_time) s += ",wall_time";
  s += "\n";
  for (const auto& rec : r.records) {
    s += grid_prefix(r, r.points[static_cast<std::size_t>(rec.grid_index)]);
    s += "," + std::to_string(rec.replicate) + "," + rec.seed_stream + "," + rec.status;
    for (double m : rec.metrics) s += "," + fmt(m);
    if (include_wall_time) {
      char buf[32];
      std::snprintf(buf, sizeof buf, ",%.6f", rec.wall_time);
      s += buf;
    }
    s += "\n";
  }
  return s;
}

std::string format_summary_csv(const ExperimentResult& r) {
  std::string s = std::string(kCsvVersion) + " summary experiment=" +
                  std::string(to_string(r.config.experiment)) + "\n";
  s += "experiment,grid_index";
  for (const auto& c : r.param_columns) s += "," + c;
  s += ",replicates_ok,replicates_failed";
  for (const auto& c : r.metric_columns) s += ",mean_" + c + ",median_" + c;
  s += "\n";
  for (const auto& p : r.points) {
    const auto ok = static_cast<Index>(r.column(p.index, r.metric_columns.front()).size());
    s += grid_prefix(r, p) + "," + std::to_string(ok) + "," + std::to_string(r.config.replicates - ok);
    for (const auto& c : r.metric_columns) {
      const auto v = r.column(p.index, c);
      s += "," + fmt(mean(v)) + "," + fmt(median(v));
    }
    s += "\n";
  }
  return s;
}

std::string format_artifacts_csv(const ExperimentResult& r) {
  std::string s = std::string(kCsvVersion) + " artifacts experiment=" +
                  std::string(to_string(r.config.experiment)) + "\n";
  s += "experiment,grid_index,row";
  for (const auto& c : r.artifact_columns) s += "," + c;
  s += "\n";
  for (const auto& p : r.points) {
    const Matrix& a = r.artifacts[static_cast<std::size_t>(p.index)];
    for (Index i = 0; i < a.rows(); ++i) {
      s += r.config.name + "," + std::to_string(p.index) + "," + std::to_string(i);
      for (Index j = 0; j < a.cols(); ++j) s += "," + fmt(a(i, j));
      s += "\n";
    }
  }
  return s;
}

std::vector<std::string> write_outputs(const ExperimentResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base = fs::path(dir) / r.config.name;
  std::vector<std::string> written;
  auto emit = [&](const std::string& suffix, const std::string& text) {
    const fs::path path = base.string() + suffix;
    write_file(path, text);
    written.push_back(path.string());
  };
  emit(".csv", format_csv(r));
  emit("_summary.csv", format_summary_csv(r));

  const ExperimentSpec& spec = spec_for(r.config.experiment);
  json summary;
  summary["experiment"] = std::string(to_string(r.config.experiment));
  summary["records"] = r.records.size();
  summary["failures"] = r.failures();
  summary["details"] = spec.summarize ? spec.summarize(r) : json::object();
  emit("_summary.json", summary.dump(2) + "\n");
  emit(".config.json", resolved_config(r.config).dump(2) + "\n");
  if (std::any_of(r.artifacts.begin(), r.artifacts.end(), [](const Matrix& m) { return m.size() > 0; }))
    emit("_artifacts.csv", format_artifacts_csv(r));
  return written;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace hollowpca::experiments
