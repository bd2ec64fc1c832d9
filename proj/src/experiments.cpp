#include "melonlab/experiments.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "melonlab/construction.hpp"
#include "melonlab/error.hpp"
#include "melonlab/rng.hpp"
#include "melonlab/solver.hpp"

namespace melonlab {

namespace {

constexpr Measurement kAllMeasurements[] = {Measurement::kX,     Measurement::kY,
                                            Measurement::kTf,    Measurement::kStrip,
                                            Measurement::kConstruct, Measurement::kZ};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : value) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError("bad value '" + s + "' for " + std::string(key));
  }
  return v;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& items, const std::function<std::string(const T&)>& show) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += show(items[i]);
  }
  return out;
}

}  // namespace

std::string_view measurement_name(Measurement m) {
  switch (m) {
    case Measurement::kX:
      return "X";
    case Measurement::kY:
      return "Y";
    case Measurement::kTf:
      return "tf";
    case Measurement::kStrip:
      return "strip";
    case Measurement::kConstruct:
      return "construct";
    case Measurement::kZ:
      return "Z";
  }
  return "?";
}

Measurement parse_measurement(std::string_view name) {
  for (Measurement m : kAllMeasurements) {
    if (measurement_name(m) == name) return m;
  }
  throw ConfigError("unknown measurement '" + std::string(name) + "' (expected X, Y, tf, strip, construct, Z)");
}

bool ExperimentConfig::wants(Measurement m) const {
  return std::find(measurements.begin(), measurements.end(), m) != measurements.end();
}

void ExperimentConfig::validate() const {
  if (dist.kind == DistKind::kFile) throw ConfigError("experiments need a generated distribution");
  if (n_list.empty()) throw ConfigError("n_list is empty");
  if (k_list.empty()) throw ConfigError("k_list is empty");
  for (int n : n_list) {
    if (n < 1) throw ConfigError("n_list entries must be positive");
  }
  for (int k : k_list) {
    if (k < 1) throw ConfigError("k_list entries must be positive");
  }
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (measurements.empty()) throw ConfigError("no measurements requested");
  if (m < 0) throw ConfigError("m must be nonnegative");
  if (wants(Measurement::kStrip)) {
    if (deltas.empty()) throw ConfigError("strip measurement needs deltas");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (!(deltas[i] > 0.0) || (i > 0 && deltas[i] <= deltas[i - 1])) {
        throw ConfigError("deltas must be positive and strictly increasing");
      }
    }
  }
}

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  if (key == "dist") {
    try {
      c.dist = DistributionSpec::parse(value);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "n_list" || key == "k_list") {
    std::vector<int> list;
    for (const auto& item : split_list(value)) list.push_back(parse_number<int>(key, item));
    (key == "n_list" ? c.n_list : c.k_list) = list;
  } else if (key == "trials") {
    c.trials = parse_number<int>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "measurements") {
    c.measurements.clear();
    for (const auto& item : split_list(value)) {
      const Measurement m = parse_measurement(item);
      if (!c.wants(m)) c.measurements.push_back(m);
    }
  } else if (key == "workers") {
    c.workers = parse_number<int>(key, value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "jitter") {
    if (value.empty() || value == "none") {
      c.jitter.reset();
    } else {
      c.jitter = parse_number<std::uint64_t>(key, value);
    }
  } else if (key == "c3") {
    c.c3 = parse_real(key, value);
  } else if (key == "deltas") {
    c.deltas.clear();
    for (const auto& item : split_list(value)) c.deltas.push_back(parse_real(key, item));
  } else if (key == "m") {
    c.m = parse_number<int>(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(config, trim(std::string_view(body).substr(0, eq)),
                     std::string_view(body).substr(eq + 1));
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "dist=" << c.dist.tag() << "\n";
  out << "n_list=" << join<int>(c.n_list, [](const int& v) { return std::to_string(v); }) << "\n";
  out << "k_list=" << join<int>(c.k_list, [](const int& v) { return std::to_string(v); }) << "\n";
  out << "trials=" << c.trials << "\n";
  out << "seed=" << c.seed << "\n";
  out << "measurements="
      << join<Measurement>(c.measurements, [](const Measurement& m) { return std::string(measurement_name(m)); })
      << "\n";
  out << "jitter=" << (c.jitter ? std::to_string(*c.jitter) : std::string("none")) << "\n";
  out << "c3=" << format_real(c.c3) << "\n";
  out << "deltas=" << join<double>(c.deltas, [](const double& v) { return format_real(v); }) << "\n";
  out << "m=" << c.m << "\n";
  return out.str();
}

std::uint64_t trial_seed(std::uint64_t base, int n, int trial) {
  return rng::hash(base, rng::Stream::kTrial, static_cast<std::uint64_t>(n),
                   static_cast<std::uint64_t>(trial));
}

std::string csv_header() { return "n,k,trial,seed,stat,value"; }

std::string csv_line(const ResultRecord& r) {
  return std::to_string(r.n) + "," + std::to_string(r.k) + "," + std::to_string(r.trial) + "," +
         std::to_string(r.seed) + "," + r.stat + "," + format_real(r.value);
}

StripProbe strip_probe(const Environment& env, int k, std::span<const double> deltas, double c3) {
  const double mu = mu_of(env.dist());
  if (std::isnan(mu)) throw InvalidArgument("strip probe needs a distribution with known mu");
  const int n = env.n();
  StripProbe probe;
  const double nd = n, kd = k;
  probe.threshold = mu * nd - c3 * std::cbrt(kd * kd * nd);
  const double scale = std::cbrt(kd * nd * nd);
  bool seen = false;
  int last_width = -1;
  double last_lightest = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0) || (i > 0 && deltas[i] <= deltas[i - 1])) {
      throw InvalidArgument("strip probe deltas must be positive and strictly increasing");
    }
    const int w = std::min(n - 1, std::max(min_strip_width(n, k), static_cast<int>(std::floor(deltas[i] * scale))));
    if (w != last_width) {
      const Watermelon melon = solve_strip(env, k, w);
      last_lightest = melon.real(melon.lightest_curve());
      last_width = w;
    }
    const bool hit = last_lightest >= probe.threshold;
    seen = seen || hit;
    probe.deltas.push_back(deltas[i]);
    probe.widths.push_back(w);
    probe.lightest.push_back(last_lightest);
    probe.witnessed.push_back(hit);
    probe.event.push_back(seen);
  }
  return probe;
}

namespace {

struct Task {
  int n = 0;
  int trial = 0;
};

struct TaskOutput {
  std::vector<ResultRecord> records;
  std::vector<SkippedCell> skipped;
};

class Runner {
 public:
  explicit Runner(const ExperimentConfig& config) : c_(config) {
    c_.validate();
    for (int n : c_.n_list) {
      for (int k : c_.k_list) {
        if (k > n) {
          skipped_.push_back({n, k, "*", "k exceeds n"});
          continue;
        }
        if (c_.wants(Measurement::kConstruct)) {
          try {
            plans_.emplace(std::make_pair(n, k), plan(n, k, c_.m == 0 ? k : c_.m));
          } catch (const Error& e) {
            skipped_.push_back({n, k, "construct", e.what()});
          }
        }
      }
    }
  }

  const std::vector<SkippedCell>& pre_skipped() const { return skipped_; }

  TaskOutput execute(const Task& task) const {
    TaskOutput out;
    const int n = task.n;
    const std::uint64_t seed = trial_seed(c_.seed, n, task.trial);
    const double mu = mu_of(c_.dist);
    std::vector<int> ks;
    for (int k : c_.k_list) {
      if (k <= n) ks.push_back(k);
    }
    if (ks.empty()) return out;
    const int kmax = *std::max_element(ks.begin(), ks.end());
    const auto emit = [&](int k, std::string stat, double value) {
      out.records.push_back({n, k, task.trial, seed, std::move(stat), value});
    };
    const auto skip = [&](int k, Measurement m, const std::string& why) {
      out.skipped.push_back({n, k, std::string(measurement_name(m)), why});
    };

    // The Z domain needs side 2n - 1; its [1,n]^2 corner is the same
    // environment the other measurements use.
    const bool need_z = c_.wants(Measurement::kZ);
    Environment base = generate(need_z ? 2 * n - 1 : n, c_.dist, seed);
    if (c_.jitter) {
      base = base.jittered(rng::hash(*c_.jitter, rng::Stream::kJitter, static_cast<std::uint64_t>(n),
                                     static_cast<std::uint64_t>(task.trial)));
    }
    const Environment env = need_z ? base.subgrid(n) : base;

    std::optional<ProfileResult> profile;
    const bool need_profile =
        c_.wants(Measurement::kX) || c_.wants(Measurement::kY) || c_.wants(Measurement::kTf);
    if (need_profile) {
      try {
        profile = solve_profile(env, kmax, {}, c_.wants(Measurement::kTf));
      } catch (const Error& e) {
        for (int k : ks) skip(k, Measurement::kX, e.what());
      }
    }

    for (int k : ks) {
      const double nk = static_cast<double>(n) * k;
      if (profile) {
        const auto& prof = profile->profile;
        const double scale = std::ldexp(1.0, -prof.scale_bits);
        if (c_.wants(Measurement::kX)) {
          const double x = static_cast<double>(prof.x(k)) * scale;
          emit(k, "X", x);
          emit(k, "X_shortfall", mu * nk - x);
        }
        if (c_.wants(Measurement::kY)) {
          const double y = static_cast<double>(prof.y(k)) * scale;
          emit(k, "Y", y);
          emit(k, "Y_shortfall", mu * n - y);
        }
        if (c_.wants(Measurement::kTf)) {
          emit(k, "tf_raw", profile->melons[static_cast<std::size_t>(k - 1)].fluctuation().raw);
        }
      }
      if (c_.wants(Measurement::kZ)) {
        try {
          const Watermelon z = solve_point_to_line(base, n, k);
          emit(k, "Z", z.real_weight());
        } catch (const Error& e) {
          skip(k, Measurement::kZ, e.what());
        }
      }
      if (c_.wants(Measurement::kConstruct)) {
        const auto it = plans_.find({n, k});
        if (it != plans_.end()) {
          try {
            const Construction built = build(env, it->second);
            const double m = it->second.m;
            const double w = built.melon.real_weight();
            emit(k, "construct_weight", w);
            emit(k, "construct_ratio",
                 (mu * n * m - w) / (m * std::cbrt(static_cast<double>(k) * k * n)));
            emit(k, "construct_tf_raw", built.tf_raw);
          } catch (const Error& e) {
            skip(k, Measurement::kConstruct, e.what());
          }
        }
      }
      if (c_.wants(Measurement::kStrip)) {
        try {
          const StripProbe probe = strip_probe(env, k, c_.deltas, c_.c3);
          for (std::size_t i = 0; i < probe.deltas.size(); ++i) {
            emit(k, "strip_event_d" + short_real(probe.deltas[i]), probe.event[i] ? 1.0 : 0.0);
          }
        } catch (const Error& e) {
          skip(k, Measurement::kStrip, e.what());
        }
      }
    }
    return out;
  }

 private:
  ExperimentConfig c_;
  std::map<std::pair<int, int>, CorridorPlan> plans_;
  std::vector<SkippedCell> skipped_;
};

void note_skip(RunReport& report, std::set<std::tuple<int, int, std::string>>& seen, const SkippedCell& s) {
  if (seen.insert({s.n, s.k, s.measurement}).second) {
    std::cerr << "melonlab: skipping n=" << s.n << " k=" << s.k << " (" << s.measurement << "): " << s.reason
              << "\n";
    report.skipped.push_back(s);
  }
}

}  // namespace

RunReport run(const ExperimentConfig& config, const std::function<void(const ResultRecord&)>& sink) {
  const Runner runner(config);
  RunReport report;
  std::set<std::tuple<int, int, std::string>> seen;
  for (const auto& s : runner.pre_skipped()) note_skip(report, seen, s);

  std::vector<Task> tasks;
  for (int n : config.n_list) {
    for (int t = 0; t < config.trials; ++t) tasks.push_back({n, t});
  }

  std::mutex mutex;
  std::condition_variable ready;
  std::map<std::size_t, TaskOutput> finished;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      TaskOutput out;
      try {
        out = runner.execute(tasks[i]);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
      }
      {
        std::lock_guard lock(mutex);
        finished.emplace(i, std::move(out));
      }
      ready.notify_one();
    }
  };

  const int threads = std::max(1, std::min<int>(config.workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);

  // Single writer: emit task outputs strictly in task order.
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    TaskOutput out;
    {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return finished.count(i) != 0; });
      out = std::move(finished.at(i));
      finished.erase(i);
    }
    if (!failure) {
      for (const auto& r : out.records) sink(r);
      report.records += out.records.size();
      for (const auto& s : out.skipped) note_skip(report, seen, s);
    }
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return report;
}

std::vector<ResultRecord> run_collect(const ExperimentConfig& config, RunReport* report) {
  std::vector<ResultRecord> records;
  RunReport r = run(config, [&](const ResultRecord& rec) { records.push_back(rec); });
  if (report) *report = std::move(r);
  return records;
}

std::vector<CellStats> summarize(std::span<const ResultRecord> records) {
  std::map<std::tuple<std::string, int, int>, std::vector<double>> groups;
  for (const auto& r : records) groups[{r.stat, r.n, r.k}].push_back(r.value);
  std::vector<CellStats> out;
  for (const auto& [key, values] : groups) {
    CellStats c;
    c.stat = std::get<0>(key);
    c.n = std::get<1>(key);
    c.k = std::get<2>(key);
    c.count = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    c.mean = sum / c.count;
    double ss = 0.0;
    for (double v : values) ss += (v - c.mean) * (v - c.mean);
    c.var = c.count > 1 ? ss / (c.count - 1) : 0.0;
    out.push_back(c);
  }
  return out;
}

SlopeFit fit_points(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit needs matching abscissae and ordinates");
  std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 3) throw InvalidArgument("slope fit needs at least 3 distinct abscissae");
  const double cnt = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= cnt;
  my /= cnt;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / cnt);
  fit.count = static_cast<int>(x.size());
  return fit;
}

SlopeFit fit_slope(std::span<const ResultRecord> records, std::string_view stat, Axis axis,
                   std::optional<int> fixed) {
  std::vector<ResultRecord> chosen;
  std::set<int> others;
  for (const auto& r : records) {
    if (r.stat != stat) continue;
    const int other = axis == Axis::kLogK ? r.n : r.k;
    if (fixed && other != *fixed) continue;
    others.insert(other);
    chosen.push_back(r);
  }
  if (others.size() > 1) {
    throw InvalidArgument(std::string("fit against ") + (axis == Axis::kLogK ? "log k" : "log n") +
                          " needs a single " + (axis == Axis::kLogK ? "n" : "k") + "; pass one explicitly");
  }
  std::vector<double> xs, ys;
  std::vector<std::string> excluded;
  for (const auto& cell : summarize(chosen)) {
    const int a = axis == Axis::kLogK ? cell.k : cell.n;
    if (!(cell.mean > 0.0)) {
      excluded.push_back("n=" + std::to_string(cell.n) + " k=" + std::to_string(cell.k) +
                         " mean=" + format_real(cell.mean));
      continue;
    }
    xs.push_back(std::log(static_cast<double>(a)));
    ys.push_back(std::log(cell.mean));
  }
  SlopeFit fit;
  try {
    fit = fit_points(xs, ys);
  } catch (const InvalidArgument& e) {
    std::string msg = std::string(e.what()) + " for " + std::string(stat);
    if (!excluded.empty()) msg += " (" + std::to_string(excluded.size()) + " nonpositive cells excluded)";
    throw InvalidArgument(msg);
  }
  fit.abscissa = axis == Axis::kLogK ? "log k" : "log n";
  fit.ordinate = "log " + std::string(stat);
  fit.excluded = std::move(excluded);
  return fit;
}

std::string content_hash(std::string_view text) {
  const std::string blob = "blob " + std::to_string(text.size()) + std::string(1, '\0') + std::string(text);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
    throw InternalError("SHA-1 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

RunReport run_to_files(const ExperimentConfig& config) {
  if (config.out.empty()) throw ConfigError("experiment needs an output path (out)");
  std::ofstream csv(config.out, std::ios::binary);
  if (!csv) throw InvalidArgument("cannot write " + config.out);
  csv << csv_header() << "\n";
  std::vector<ResultRecord> records;
  const RunReport report = run(config, [&](const ResultRecord& r) {
    csv << csv_line(r) << "\n";
    csv.flush();
    records.push_back(r);
  });

  using nlohmann::ordered_json;
  const std::string canon = canonical_text(config);
  ordered_json manifest;
  ordered_json echo = ordered_json::object();
  std::istringstream lines(canon);
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    echo[line.substr(0, eq)] = line.substr(eq + 1);
  }
  manifest["config"] = echo;
  manifest["config_hash"] = content_hash(canon);
  manifest["csv"] = config.out;
  manifest["records"] = report.records;
  std::ofstream(config.out + ".manifest.json", std::ios::binary) << manifest.dump(2) << "\n";

  ordered_json summary;
  summary["config_hash"] = manifest["config_hash"];
  summary["cells"] = ordered_json::array();
  for (const auto& c : summarize(records)) {
    summary["cells"].push_back(
        {{"n", c.n}, {"k", c.k}, {"stat", c.stat}, {"mean", c.mean}, {"var", c.var}, {"count", c.count}});
  }
  summary["fits"] = ordered_json::array();
  const auto add_fit = [&](std::string_view stat, Axis axis, int fixed) {
    try {
      const SlopeFit f = fit_slope(records, stat, axis, fixed);
      summary["fits"].push_back({{"abscissa", f.abscissa},
                                 {"ordinate", f.ordinate},
                                 {axis == Axis::kLogK ? "n" : "k", fixed},
                                 {"slope", f.slope},
                                 {"intercept", f.intercept},
                                 {"residual", f.residual},
                                 {"count", f.count},
                                 {"excluded", f.excluded}});
    } catch (const InvalidArgument&) {
      // Not enough distinct cells for this fit.
    }
  };
  for (const char* stat : {"X_shortfall", "Y_shortfall", "tf_raw", "construct_ratio"}) {
    for (int n : config.n_list) add_fit(stat, Axis::kLogK, n);
    for (int k : config.k_list) add_fit(stat, Axis::kLogN, k);
  }
  summary["skipped"] = ordered_json::array();
  for (const auto& s : report.skipped) {
    summary["skipped"].push_back({{"n", s.n}, {"k", s.k}, {"measurement", s.measurement}, {"reason", s.reason}});
  }
  std::ofstream(config.out + ".summary.json", std::ios::binary) << summary.dump(2) << "\n";
  return report;
}

}  // namespace melonlab
