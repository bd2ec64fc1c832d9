#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "melonlab/error.hpp"
#include "melonlab/experiments.hpp"
#include "melonlab/solver.hpp"

using namespace melonlab;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<ResultRecord> synthetic(const std::vector<int>& ks, double (*f)(double)) {
  std::vector<ResultRecord> out;
  for (int k : ks) out.push_back({100, k, 0, 0, "s", f(k)});
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse(
      "# sweep\n"
      "dist = geom:0.5\n"
      "n_list = 16, 32 64\n"
      "k_list = 1,2\n"
      "trials = 3   # per cell\n"
      "seed = 18446744073709551615\n"
      "measurements = X, Y, tf, X\n"
      "jitter = 9\n"
      "deltas = 0.1 0.5\n"
      "c3 = 2.5\n");
  CHECK(c.dist == DistributionSpec::geometric(0.5));
  CHECK(c.n_list == std::vector<int>{16, 32, 64});
  CHECK(c.k_list == std::vector<int>{1, 2});
  CHECK(c.trials == 3);
  CHECK(c.seed == 18446744073709551615ull);
  CHECK(c.measurements.size() == 3);
  CHECK(c.wants(Measurement::kTf));
  CHECK_FALSE(c.wants(Measurement::kZ));
  CHECK(c.jitter == 9u);
  CHECK(c.deltas == std::vector<double>{0.1, 0.5});
  CHECK(c.c3 == 2.5);
  CHECK_NOTHROW(c.validate());

  CHECK_THROWS_AS(parse("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse("trials = many\n"), ConfigError);
  CHECK_THROWS_AS(parse("trials 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("dist = cauchy\n"), ConfigError);
  CHECK_THROWS_AS(parse("measurements = X, W\n"), ConfigError);
  CHECK_THROWS_AS(parse("n_list = 4\nk_list = 1\ntrials = 0\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("n_list = 4\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("n_list = 4\nk_list = 1\nmeasurements = strip\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("n_list = 4\nk_list = 1\nmeasurements = strip\ndeltas = 0.5 0.2\n").validate(),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), ConfigError);
}

TEST_CASE("canonical text round-trips") {
  auto c = parse("n_list = 8\nk_list = 1 2\nmeasurements = X Z\ndeltas = 0.25\n");
  const std::string text = canonical_text(c);
  CHECK(text.find("measurements=X,Z\n") != std::string::npos);
  const auto again = parse(text);
  CHECK(canonical_text(again) == text);
  set_config_value(c, "seed", "5");
  CHECK(canonical_text(c) != text);
  CHECK(measurement_name(parse_measurement("construct")) == "construct");
}

TEST_CASE("all-ones sweep gives exact vertex counts") {
  auto c = parse("dist = ones\nn_list = 6 9\nk_list = 1 3 6\nmeasurements = X Y\n");
  const auto records = run_collect(c);
  int seen = 0;
  for (const auto& r : records) {
    if (r.stat == "X") {
      CHECK(r.value == r.k * (2 * r.n - r.k));
      ++seen;
    }
    if (r.stat == "Y" && r.k == 3) CHECK(r.value == 2 * r.n - 5);  // X^3 - X^2 = 2n - 5
    if (r.stat == "X_shortfall") CHECK(r.value == 2.0 * r.n * r.k - r.k * (2 * r.n - r.k));
  }
  CHECK(seen == 6);
}

TEST_CASE("trial seeds") {
  CHECK(trial_seed(1, 64, 0) == 11636710769608130179ull);
  CHECK(trial_seed(1, 64, 1) != trial_seed(1, 64, 0));
  CHECK(trial_seed(1, 65, 0) != trial_seed(1, 64, 0));
  auto c = parse("dist = exp\nn_list = 12\nk_list = 1 2\ntrials = 2\n");
  const auto records = run_collect(c);
  for (const auto& r : records) {
    CHECK(r.seed == trial_seed(1, 12, r.trial));
    if (r.stat == "X") {
      const auto env = generate(12, DistributionSpec::exponential(), r.seed);
      CHECK(r.value == solve_melon(env, r.k).real_weight());
    }
  }
}

TEST_CASE("records do not depend on the worker count") {
  auto c = parse("dist = exp\nn_list = 16 24\nk_list = 1 2 4\ntrials = 4\n"
                 "measurements = X Y tf Z strip\ndeltas = 0.3 1 4\njitter = 3\n");
  c.workers = 1;
  const auto one = run_collect(c);
  c.workers = 3;
  const auto three = run_collect(c);
  CHECK(one == three);
  CHECK_FALSE(one.empty());
  for (const auto& r : one) {
    CHECK(std::isfinite(r.value));
    if (r.stat == "Z") {
      const auto x = std::find_if(one.begin(), one.end(), [&](const ResultRecord& o) {
        return o.stat == "X" && o.n == r.n && o.k == r.k && o.trial == r.trial;
      });
      REQUIRE(x != one.end());
      CHECK(r.value >= x->value);
    }
  }
}

TEST_CASE("infeasible cells are skipped with a reason") {
  auto c = parse("dist = ones\nn_list = 4\nk_list = 2 8\nmeasurements = X construct\n");
  RunReport report;
  const auto records = run_collect(c, &report);
  bool k_too_big = false, guard = false;
  for (const auto& s : report.skipped) {
    if (s.k == 8 && s.reason == "k exceeds n") k_too_big = true;
    if (s.k == 2 && s.measurement == "construct" && s.reason.find("construction guard") != std::string::npos) {
      guard = true;
    }
  }
  CHECK(k_too_big);
  CHECK(guard);
  CHECK(records.size() == 2);  // X and X_shortfall at k = 2
}

TEST_CASE("slope fits") {
  const auto exact = synthetic({1, 2, 4, 8, 16}, [](double k) { return 7.0 * std::pow(k, 5.0 / 3.0); });
  const auto f = fit_slope(exact, "s", Axis::kLogK);
  CHECK(std::abs(f.slope - 5.0 / 3.0) < 1e-12);
  CHECK(std::exp(f.intercept) == doctest::Approx(7.0));
  CHECK(f.residual < 1e-12);
  CHECK(f.count == 5);
  CHECK(f.abscissa == "log k");

  const auto flat = synthetic({2, 3, 5}, [](double) { return 4.0; });
  CHECK(std::abs(fit_slope(flat, "s", Axis::kLogK).slope) < 1e-12);

  auto mixed = synthetic({1, 2, 4, 8}, [](double k) { return k; });
  mixed[0].value = -1.0;
  const auto g = fit_slope(mixed, "s", Axis::kLogK);
  CHECK(g.count == 3);
  CHECK(g.excluded.size() == 1);
  CHECK(g.slope == doctest::Approx(1.0));

  CHECK_THROWS_AS(fit_slope(synthetic({1, 2}, [](double k) { return k; }), "s", Axis::kLogK), InvalidArgument);
  CHECK_THROWS_AS(fit_slope(mixed, "missing", Axis::kLogK), InvalidArgument);

  std::vector<ResultRecord> by_n;
  for (int n : {64, 128, 256}) {
    for (int t = 0; t < 2; ++t) by_n.push_back({n, 4, t, 0, "s", std::pow(n, 2.0 / 3.0) * (t ? 3.0 : 1.0)});
  }
  CHECK(fit_slope(by_n, "s", Axis::kLogN, 4).slope == doctest::Approx(2.0 / 3.0));

  const double xs[] = {0, 1, 2}, ys[] = {1, 3, 5};
  CHECK(fit_points(xs, ys).slope == doctest::Approx(2.0));
}

TEST_CASE("summaries") {
  std::vector<ResultRecord> r{{8, 1, 0, 0, "X", 2.0}, {8, 1, 1, 0, "X", 4.0}, {8, 2, 0, 0, "X", 5.0}};
  const auto cells = summarize(r);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].mean == 3.0);
  CHECK(cells[0].var == 2.0);
  CHECK(cells[0].count == 2);
  CHECK(cells[1].var == 0.0);
  CHECK(csv_header() == "n,k,trial,seed,stat,value");
  CHECK(csv_line({8, 2, 1, 42, "X", 0.1}) == "8,2,1,42,X,0.10000000000000001");
}

TEST_CASE("strip probe") {
  const auto env = generate(64, DistributionSpec::exponential(), 21);
  const double deltas[] = {0.05, 0.2, 0.5, 1.0, 100.0};
  const auto probe = strip_probe(env, 4, deltas, 4.0);
  CHECK(probe.threshold == doctest::Approx(4.0 * 64 - 4.0 * std::cbrt(16.0 * 64)));
  REQUIRE(probe.widths.size() == 5);
  CHECK(probe.widths[0] == min_strip_width(64, 4));
  CHECK(probe.widths[4] == 63);
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(probe.widths[i] >= probe.widths[i - 1]);
    CHECK((!probe.event[i - 1] || probe.event[i]));
  }
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(probe.witnessed[i] == (probe.lightest[i] >= probe.threshold));
    const auto m = solve_strip(env, 4, probe.widths[i]);
    CHECK(probe.lightest[i] == m.real(m.lightest_curve()));
  }
  // A hopeless threshold is never met, a vacuous one always.
  const auto never = strip_probe(env, 4, deltas, -1e9);
  for (bool e : never.event) CHECK_FALSE(e);
  const auto always = strip_probe(env, 4, deltas, 1e9);
  for (bool e : always.event) CHECK(e);

  const double bad[] = {0.5, 0.1};
  CHECK_THROWS_AS(strip_probe(env, 4, bad, 4.0), InvalidArgument);
  CHECK_THROWS_AS(strip_probe(make_environment(2, {1, 1, 1, 1}), 1, deltas, 4.0), InvalidArgument);
}

TEST_CASE("content hash matches git blob ids") {
  CHECK(content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("run_to_files writes csv, manifest and summary") {
  const auto dir = std::filesystem::temp_directory_path() / "melonlab_test_experiments";
  std::filesystem::create_directories(dir);
  auto c = parse("dist = exp\nn_list = 8 16 32\nk_list = 1 2 4\ntrials = 2\nmeasurements = X tf\n");
  c.out = (dir / "run.csv").string();
  const auto report = run_to_files(c);
  const std::string csv = slurp(c.out);
  CHECK(csv.rfind(csv_header() + "\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == report.records + 1);

  const auto manifest = nlohmann::json::parse(slurp(c.out + ".manifest.json"));
  CHECK(manifest["config_hash"] == content_hash(canonical_text(c)));
  CHECK(manifest["records"] == report.records);
  CHECK(manifest["config"]["k_list"] == "1,2,4");

  const auto summary = nlohmann::json::parse(slurp(c.out + ".summary.json"));
  CHECK(summary["cells"].size() == 3 * 3 * 3);
  CHECK_FALSE(summary["fits"].empty());

  run_to_files(c);
  CHECK(slurp(c.out) == csv);
  std::filesystem::remove_all(dir);
  c.out.clear();
  CHECK_THROWS_AS(run_to_files(c), ConfigError);
}
