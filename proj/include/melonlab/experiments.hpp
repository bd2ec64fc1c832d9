#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "melonlab/env.hpp"

namespace melonlab {

enum class Measurement { kX, kY, kTf, kStrip, kConstruct, kZ };

std::string_view measurement_name(Measurement m);
Measurement parse_measurement(std::string_view name);

struct ExperimentConfig {
  DistributionSpec dist = DistributionSpec::exponential();
  std::vector<int> n_list;
  std::vector<int> k_list;
  int trials = 1;
  std::uint64_t seed = 1;
  std::vector<Measurement> measurements{Measurement::kX};
  int workers = 1;
  std::string out;
  std::optional<std::uint64_t> jitter;
  double c3 = 4.0;
  std::vector<double> deltas;
  int m = 0;  // construction curve count; 0 means m = k

  bool wants(Measurement m) const;
  void validate() const;
};

// Flat "key = value" text, '#' starts a comment. Keys are the field names
// above; lists are comma or space separated. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
// Applies one key=value pair on top of an existing config.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);
// Canonical key=value echo in a fixed key order; the manifest hashes this.
std::string canonical_text(const ExperimentConfig& config);

struct ResultRecord {
  int n = 0;
  int k = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string stat;
  double value = 0.0;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

// Environment seed of trial t at side n; shared by every k so that the
// profile X_n^1..X_n^K of one trial lives on one environment.
std::uint64_t trial_seed(std::uint64_t base, int n, int trial);

struct SkippedCell {
  int n = 0;
  int k = 0;
  std::string measurement;
  std::string reason;
};

struct RunReport {
  std::size_t records = 0;
  std::vector<SkippedCell> skipped;
};

// Runs every (n, trial) task on a pool of config.workers threads. Records
// reach the sink from a single thread, in task order, so the stream is
// independent of scheduling.
RunReport run(const ExperimentConfig& config, const std::function<void(const ResultRecord&)>& sink);
std::vector<ResultRecord> run_collect(const ExperimentConfig& config, RunReport* report = nullptr);

std::string csv_header();
std::string csv_line(const ResultRecord& record);

struct CellStats {
  int n = 0;
  int k = 0;
  std::string stat;
  double mean = 0.0;
  double var = 0.0;  // unbiased; 0 for a single sample
  int count = 0;
};

// Per (n, k, stat) means, sorted by stat, n, k.
std::vector<CellStats> summarize(std::span<const ResultRecord> records);

enum class Axis { kLogK, kLogN };

struct SlopeFit {
  std::string abscissa;
  std::string ordinate;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of the log-log residuals
  int count = 0;          // cells used
  std::vector<std::string> excluded;  // cells dropped for a nonpositive mean
};

// Least squares of log(cell mean) against log k (n fixed) or log n (k fixed).
// `fixed` selects the other coordinate; without it the records must carry a
// single value of it. Needs at least three distinct abscissae after
// excluding nonpositive cells; throws InvalidArgument otherwise.
SlopeFit fit_slope(std::span<const ResultRecord> records, std::string_view stat, Axis axis,
                   std::optional<int> fixed = std::nullopt);
SlopeFit fit_points(std::span<const double> x, std::span<const double> y);

struct StripProbe {
  double threshold = 0.0;          // mu n - C3 k^(2/3) n^(1/3), real units
  std::vector<double> deltas;
  std::vector<int> widths;         // max(min_strip_width, floor(delta k^(1/3) n^(2/3))), at most n - 1
  std::vector<double> lightest;    // lightest curve of the strip melon, real units
  std::vector<bool> witnessed;     // this strip's melon clears the threshold
  std::vector<bool> event;         // some strip at least as narrow witnessed it
};

// The event "k disjoint paths in the strip, each of weight at least the
// threshold" is witnessed by the strip melon; `event` accumulates witnesses
// over increasing delta since a narrower witness also lies in a wider strip.
StripProbe strip_probe(const Environment& env, int k, std::span<const double> deltas, double c3);

// Writes <out>, <out>.manifest.json and <out>.summary.json.
RunReport run_to_files(const ExperimentConfig& config);

// "blob <len>\0<text>" SHA-1, hex.
std::string content_hash(std::string_view text);

}  // namespace melonlab
