// melonlab: generate environments, solve and verify watermelons, run the
// construction and Monte Carlo sweeps. Exit codes: 0 ok, 1 domain error,
// 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "melonlab/construction.hpp"
#include "melonlab/env.hpp"
#include "melonlab/error.hpp"
#include "melonlab/experiments.hpp"
#include "melonlab/io.hpp"
#include "melonlab/kernels.hpp"
#include "melonlab/melon.hpp"
#include "melonlab/solver.hpp"

using namespace melonlab;
using nlohmann::ordered_json;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnvFlags {
  int n = 0;
  std::string dist = "exp";
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> jitter;
  std::string env_path;

  void attach(CLI::App* app, bool with_env_file = true) {
    app->add_option("--n", n, "Grid side length")->check(CLI::PositiveNumber);
    app->add_option("--dist", dist, "Weight law: exp | geom:<p> | ones")->check(dist_validator());
    app->add_option("--seed", seed, "64-bit seed");
    app->add_option("--jitter", jitter, "Tie-breaking jitter sub-seed");
    if (with_env_file) app->add_option("--env", env_path, "Read the environment from a file instead");
  }

  static CLI::Validator dist_validator() {
    return CLI::Validator(
        [](std::string& text) -> std::string {
          try {
            const auto d = DistributionSpec::parse(text);
            if (d.kind == DistKind::kFile) return "dist must be exp, geom:<p> or ones";
          } catch (const Error& e) {
            return e.what();
          }
          return {};
        },
        "DIST");
  }

  // Side used when generating; the point-to-line domain asks for 2n - 1.
  // A file given with --env wins over the side.
  Environment environment(int side) const {
    Environment env = env_path.empty() ? generate(side, DistributionSpec::parse(dist), seed) : load_file(env_path);
    if (jitter) env = env.jittered(*jitter);
    return env;
  }

  Environment environment() const {
    if (env_path.empty() && n < 1) throw Usage("--n or --env is required");
    return environment(n);
  }
};

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw InvalidArgument("cannot write " + out);
  file << text;
}

std::string point(Point p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

int run_verify(const std::string& small_path, const std::string& big_path, const std::string& melon_path,
               const std::string& profile_path, const std::vector<std::string>& melon_list,
               const std::string& env_path, const std::string& out) {
  ordered_json report;
  report["checks"] = ordered_json::array();
  bool any = false;
  std::optional<Environment> env;
  if (!env_path.empty()) env = load_file(env_path);

  const auto add = [&](const std::string& name, bool pass, ordered_json detail) {
    ordered_json entry{{"check", name}, {"pass", pass}};
    if (!detail.is_null()) entry["witness"] = std::move(detail);
    report["checks"].push_back(std::move(entry));
    any = true;
  };

  if (!small_path.empty() || !big_path.empty()) {
    if (small_path.empty() || big_path.empty()) throw Usage("--melon-small and --melon-big go together");
    const Watermelon small = melon_from_json(read_json_file(small_path));
    const Watermelon big = melon_from_json(read_json_file(big_path));
    const InterlaceReport r = is_interlaced(small, big);
    std::cout << "interlaced: " << (r.ok ? "true" : "false") << "\n";
    ordered_json w;
    if (r.witness) {
      const auto& v = *r.witness;
      std::cout << "witness: curve " << v.curve << " t=" << v.t << " small " << point(v.small_vertex) << " big "
                << point(v.big_vertex) << " (" << (v.against_left ? "big[i] <= small[i]" : "small[i] <= big[i+1]")
                << " fails)\n";
      w = {{"curve", v.curve},
           {"t", v.t},
           {"relation", v.against_left ? "big[i] <= small[i]" : "small[i] <= big[i+1]"},
           {"small_vertex", {v.small_vertex.x, v.small_vertex.y}},
           {"big_vertex", {v.big_vertex.x, v.big_vertex.y}}};
    }
    add("interlaced", r.ok, w);
  }

  if (!melon_path.empty()) {
    const Watermelon melon = melon_from_json(read_json_file(melon_path));
    const MelonAudit audit = audit_melon(melon, EndpointRule::kSquare, env ? &*env : nullptr);
    std::cout << "melon: " << (audit.ok() ? "true" : "false") << "\n";
    for (const auto& f : audit.failures) std::cout << "  " << f << "\n";
    add("disjoint", audit.disjoint, nullptr);
    add("ordered", audit.ordered, nullptr);
    add("anchored", audit.anchored, nullptr);
    add("weights_consistent", audit.weights_consistent, audit.failures.empty() ? ordered_json() : ordered_json(audit.failures));
  }

  if (!profile_path.empty()) {
    const MelonProfile profile = profile_from_json(read_json_file(profile_path));
    const MonotoneReport mono = check_monotone(profile);
    std::cout << "monotone: " << (mono.ok ? "true" : "false") << "\n";
    ordered_json w;
    if (mono.first_violation) {
      std::cout << "witness: Y_" << *mono.first_violation << " > Y_" << *mono.first_violation - 1 << "\n";
      w = {{"k", *mono.first_violation}};
    }
    add("monotone", mono.ok, w);
    add("strictly_decreasing", mono.strict, mono.first_tie ? ordered_json{{"k", *mono.first_tie}} : ordered_json());
    if (!melon_list.empty()) {
      std::vector<Watermelon> melons;
      for (const auto& p : melon_list) melons.push_back(melon_from_json(read_json_file(p)));
      const AveragingReport avg = check_averaging(profile, melons);
      std::cout << "averaging: " << (avg.ok ? "true" : "false") << "\n";
      add("averaging", avg.ok, avg.first_violation ? ordered_json{{"j", *avg.first_violation}} : ordered_json());
    }
  } else if (!melon_list.empty()) {
    throw Usage("--melons needs --profile");
  }

  if (!any) throw Usage("verify needs --melon-small/--melon-big, --melon or --profile");
  bool all = true;
  for (const auto& c : report["checks"]) all = all && c["pass"].get<bool>();
  report["pass"] = all;
  if (!out.empty()) emit(out, report.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and Monte Carlo laboratory for geodesic watermelons in last passage percolation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "melonlab 1.0");

  EnvFlags gen_env, solve_env, profile_env, construct_env, p2l_env;
  std::string out;
  int k = 0, m = 0;
  std::optional<int> width;
  bool plan_only = false;

  auto* gen = app.add_subcommand("gen", "Generate an environment file");
  gen_env.attach(gen, false);
  gen->add_option("--out", out, "Output path (stdout if omitted)");

  auto* solve = app.add_subcommand("solve", "Solve the k-melon (optionally inside the strip |x-y| <= width)");
  solve_env.attach(solve);
  solve->add_option("--k", k, "Number of curves")->required()->check(CLI::PositiveNumber);
  solve->add_option("--width", width, "Strip half-width w (raw |x-y| units)")->check(CLI::NonNegativeNumber);
  solve->add_option("--out", out, "Melon JSON path (stdout if omitted)");

  auto* profile = app.add_subcommand("profile", "X_n^1..X_n^K and increments on one environment");
  profile_env.attach(profile);
  profile->add_option("--k", k, "Largest curve count K")->required()->check(CLI::PositiveNumber);
  profile->add_option("--out", out, "Profile JSON path (stdout if omitted)");

  auto* construct = app.add_subcommand("construct", "Build the m-curve flight-corridor construction");
  construct_env.attach(construct);
  construct->add_option("--k", k, "Scale parameter k")->required()->check(CLI::PositiveNumber);
  construct->add_option("--m", m, "Number of curves (default k)")->check(CLI::PositiveNumber);
  construct->add_flag("--plan", plan_only, "Only print the corridor plan");
  construct->add_option("--out", out, "Output JSON path (stdout if omitted)");

  std::string small_path, big_path, melon_path, profile_path, verify_env;
  std::vector<std::string> melon_list;
  auto* verify = app.add_subcommand("verify", "Check interlacing, melon structure, monotonicity and averaging");
  verify->add_option("--melon-small", small_path, "k-melon JSON");
  verify->add_option("--melon-big", big_path, "(k+1)-melon JSON");
  verify->add_option("--melon", melon_path, "Melon JSON to audit");
  verify->add_option("--profile", profile_path, "Profile JSON");
  verify->add_option("--melons", melon_list, "j-melon JSONs (j = 1..) for the averaging check");
  verify->add_option("--env", verify_env, "Environment file to re-weigh --melon against");
  verify->add_option("--out", out, "Report JSON path");

  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string x_n, x_k, x_dist, x_seed, x_jitter, x_c3, x_workers, x_m, x_trials, x_meas, x_deltas;
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo sweep to CSV with manifest and summary");
  experiment->add_option("--config", config_path, "Flat key=value config file");
  experiment->add_option("--n", x_n, "n_list override (comma separated)");
  experiment->add_option("--k", x_k, "k_list override (comma separated)");
  experiment->add_option("--dist", x_dist, "Weight law")->check(EnvFlags::dist_validator());
  experiment->add_option("--seed", x_seed, "Base seed");
  experiment->add_option("--jitter", x_jitter, "Jitter sub-seed");
  experiment->add_option("--c3", x_c3, "Strip-probe constant C3");
  experiment->add_option("--workers", x_workers, "Worker threads");
  experiment->add_option("--m", x_m, "Construction curve count");
  experiment->add_option("--trials", x_trials, "Trials per cell");
  experiment->add_option("--measurements", x_meas, "X,Y,tf,strip,construct,Z");
  experiment->add_option("--deltas", x_deltas, "Strip-probe delta grid");
  experiment->add_option("--out", out, "CSV output path");

  auto* p2l = app.add_subcommand("p2l", "Point-to-line melon Z_n^k on the triangle x + y <= 2n");
  p2l_env.attach(p2l);
  p2l->add_option("--k", k, "Number of curves")->required()->check(CLI::PositiveNumber);
  p2l->add_option("--out", out, "Melon JSON path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      if (gen_env.n < 1) throw Usage("--n is required");
      std::ostringstream text;
      save(gen_env.environment(), text);
      emit(out, text.str());
    } else if (*solve) {
      const Environment env = solve_env.environment();
      const Watermelon melon = width ? solve_strip(env, k, *width) : solve_melon(env, k);
      emit(out, melon_to_json(melon, provenance_of(env)).dump() + "\n");
    } else if (*profile) {
      const Environment env = profile_env.environment();
      const ProfileResult result = solve_profile(env, k, {}, false);
      ordered_json j = profile_to_json(result.profile, provenance_of(env));
      const MonotoneReport mono = check_monotone(result.profile);
      j["monotone"] = mono.ok;
      j["strictly_decreasing"] = mono.strict;
      emit(out, j.dump(2) + "\n");
    } else if (*construct) {
      if (construct_env.env_path.empty() && construct_env.n < 1) throw Usage("--n or --env is required");
      const int curves = m == 0 ? k : m;
      if (plan_only) {
        if (construct_env.n < 1) throw Usage("--plan needs --n");
        emit(out, plan_to_json(plan(construct_env.n, k, curves)).dump(2) + "\n");
      } else {
        const Environment env = construct_env.environment();
        const CorridorPlan geometry = plan(env.n(), k, curves);
        const Construction built = build(env, geometry);
        ordered_json j;
        j["n"] = env.n();
        j["k"] = k;
        j["m"] = curves;
        j["weight"] = built.melon.real_weight();
        ordered_json phases;
        for (int p = 0; p < kPhaseCount; ++p) {
          phases[phase_name(static_cast<Phase>(p))] = built.melon.real(built.phase_weight[static_cast<std::size_t>(p)]);
        }
        j["phase_weight"] = phases;
        j["tf_raw"] = built.tf_raw;
        j["tf_bound"] = geometry.tf_bound;
        j["tf_within_bound"] = built.tf_within_bound;
        const double mu = mu_of(env.dist());
        if (!std::isnan(mu)) {
          j["shortfall_ratio"] = (mu * env.n() * curves - built.melon.real_weight()) /
                                 (curves * std::cbrt(static_cast<double>(k) * k * env.n()));
        }
        j["melon"] = melon_to_json(built.melon, provenance_of(env));
        emit(out, j.dump() + "\n");
      }
    } else if (*verify) {
      return run_verify(small_path, big_path, melon_path, profile_path, melon_list, verify_env, out);
    } else if (*experiment) {
      ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
      const std::pair<const char*, std::string*> flags[] = {
          {"n_list", &x_n},     {"k_list", &x_k},     {"dist", &x_dist},      {"seed", &x_seed},
          {"jitter", &x_jitter}, {"c3", &x_c3},        {"workers", &x_workers}, {"m", &x_m},
          {"trials", &x_trials}, {"measurements", &x_meas}, {"deltas", &x_deltas}, {"out", &out}};
      for (const auto& [key, value] : flags) {
        if (!value->empty()) set_config_value(config, key, *value);
      }
      config.validate();
      const RunReport report = run_to_files(config);
      std::cerr << "melonlab: " << report.records << " records to " << config.out << " ("
                << kernels::isa_name(kernels::active_isa()) << " kernels)\n";
    } else if (*p2l) {
      int n_line = p2l_env.n;
      if (p2l_env.env_path.empty() && n_line < 1) throw Usage("--n or --env is required");
      // The side argument only matters when generating.
      const Environment env = p2l_env.environment(2 * n_line - 1);
      if (n_line < 1) n_line = (env.n() + 1) / 2;
      const Watermelon melon = solve_point_to_line(env, n_line, k);
      emit(out, melon_to_json(melon, provenance_of(env)).dump() + "\n");
    }
  } catch (const Usage& e) {
    std::cerr << "melonlab: usage: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "melonlab: config: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "melonlab: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
