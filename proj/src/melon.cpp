#include "melonlab/melon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "melonlab/error.hpp"

namespace melonlab {

namespace {

std::string pt(Point p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

// First t in the shared range where `pred` fails, if any.
template <typename Pred>
std::optional<int> first_failure(const UprightPath& a, const UprightPath& b, Pred pred) {
  const int lo = std::max(a.t_min(), b.t_min());
  const int hi = std::min(a.t_max(), b.t_max());
  for (int t = lo; t <= hi; ++t) {
    if (!pred(a.antidiag_at(t), b.antidiag_at(t))) return t;
  }
  return std::nullopt;
}

}  // namespace

double Watermelon::real(std::int64_t raw) const {
  return std::ldexp(static_cast<double>(raw), -scale_bits);
}

std::int64_t Watermelon::lightest_curve() const {
  if (per_curve_weight.empty()) throw InvalidArgument("melon has no curves");
  return *std::min_element(per_curve_weight.begin(), per_curve_weight.end());
}

Watermelon make_watermelon(const Environment& env, std::vector<UprightPath> curves) {
  Watermelon melon;
  melon.n = env.n();
  melon.k = static_cast<int>(curves.size());
  melon.scale_bits = env.scale_bits();
  melon.curves = order_curves(std::move(curves));
  for (const auto& c : melon.curves) melon.per_curve_weight.push_back(path_weight(env, c));
  melon.weight =
      std::accumulate(melon.per_curve_weight.begin(), melon.per_curve_weight.end(), std::int64_t{0});
  return melon;
}

std::vector<UprightPath> order_curves(std::vector<UprightPath> paths) {
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      const auto ab = precedes(paths[i], paths[j]);
      if (ab == Order::kIncomparable) {
        throw InvalidArgument("paths " + std::to_string(i) + " and " + std::to_string(j) +
                              " have disjoint time ranges; cannot order");
      }
      if (ab == Order::kStrictlyLeft) continue;
      if (precedes(paths[j], paths[i]) == Order::kStrictlyLeft) continue;
      throw InvalidArgument("paths " + std::to_string(i) + " and " + std::to_string(j) +
                            " share a vertex or cross");
    }
  }
  std::sort(paths.begin(), paths.end(), [](const UprightPath& a, const UprightPath& b) {
    return precedes(a, b) == Order::kStrictlyLeft;
  });
  return paths;
}

std::vector<std::int64_t> MelonProfile::increments() const {
  std::vector<std::int64_t> y(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) y[i] = i == 0 ? X[0] : X[i] - X[i - 1];
  return y;
}

MonotoneReport check_monotone(const MelonProfile& profile) {
  MonotoneReport report;
  const auto y = profile.increments();
  for (std::size_t i = 1; i < y.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    if (y[i] > y[i - 1]) {
      report.ok = false;
      report.strict = false;
      if (!report.first_violation) report.first_violation = k;
    } else if (y[i] == y[i - 1]) {
      report.strict = false;
      if (!report.first_tie) report.first_tie = k;
    }
  }
  return report;
}

InterlaceReport is_interlaced(const Watermelon& small, const Watermelon& big) {
  if (big.k != small.k + 1 || static_cast<int>(small.curves.size()) != small.k ||
      static_cast<int>(big.curves.size()) != big.k) {
    throw InvalidArgument("interlacing compares a k-melon with a (k+1)-melon; got k = " +
                          std::to_string(small.k) + " and " + std::to_string(big.k));
  }
  const auto le = [](int a, int b) { return a <= b; };
  for (int i = 0; i < small.k; ++i) {
    const auto& s = small.curves[static_cast<std::size_t>(i)];
    const auto& left = big.curves[static_cast<std::size_t>(i)];
    const auto& right = big.curves[static_cast<std::size_t>(i + 1)];
    if (auto t = first_failure(left, s, le)) {
      return {false, InterlaceWitness{i + 1, true, *t, s.at_time(*t), left.at_time(*t)}};
    }
    if (auto t = first_failure(s, right, le)) {
      return {false, InterlaceWitness{i + 1, false, *t, s.at_time(*t), right.at_time(*t)}};
    }
  }
  return {};
}

AveragingReport check_averaging(const MelonProfile& profile,
                                std::span<const std::vector<std::int64_t>> per_curve_by_j) {
  AveragingReport report;
  const auto limit = std::min<std::size_t>(per_curve_by_j.size(), profile.X.size());
  for (std::size_t i = 0; i < limit; ++i) {
    const auto& w = per_curve_by_j[i];
    if (w.empty()) throw InvalidArgument("melon without curves in averaging check");
    const int j = static_cast<int>(i) + 1;
    const auto lightest = *std::min_element(w.begin(), w.end());
    if (lightest < profile.y(j)) {
      report.ok = false;
      report.first_violation = j;
      break;
    }
  }
  return report;
}

AveragingReport check_averaging(const MelonProfile& profile, std::span<const Watermelon> melons) {
  std::vector<std::vector<std::int64_t>> weights;
  weights.reserve(melons.size());
  for (const auto& m : melons) weights.push_back(m.per_curve_weight);
  return check_averaging(profile, weights);
}

MelonAudit audit_melon(const Watermelon& melon, EndpointRule rule, const Environment* env) {
  MelonAudit audit;
  if (static_cast<int>(melon.curves.size()) != melon.k) {
    audit.failures.push_back("melon declares k = " + std::to_string(melon.k) + " but has " +
                             std::to_string(melon.curves.size()) + " curves");
  }

  std::set<Point> seen;
  for (std::size_t i = 0; i < melon.curves.size(); ++i) {
    for (const auto& v : melon.curves[i].vertices()) {
      if (v.x < 1 || v.y < 1 || (rule == EndpointRule::kSquare && (v.x > melon.n || v.y > melon.n))) {
        audit.failures.push_back("curve " + std::to_string(i + 1) + " leaves the domain at " +
                                 pt(v));
      }
      if (!seen.insert(v).second) {
        audit.disjoint = false;
        audit.failures.push_back("vertex " + pt(v) + " is used twice (curve " +
                                 std::to_string(i + 1) + ")");
      }
    }
  }

  for (std::size_t i = 0; i + 1 < melon.curves.size(); ++i) {
    if (precedes(melon.curves[i], melon.curves[i + 1]) != Order::kStrictlyLeft) {
      audit.ordered = false;
      audit.failures.push_back("curve " + std::to_string(i + 1) + " is not strictly left of curve " +
                               std::to_string(i + 2));
    }
  }

  if (rule != EndpointRule::kNone) {
    const int k = melon.k;
    for (std::size_t i = 0; i < melon.curves.size(); ++i) {
      const auto& c = melon.curves[i];
      const int idx = static_cast<int>(i) + 1;
      const Point start{1, k - idx + 1};
      if (c.front() != start) {
        audit.anchored = false;
        audit.failures.push_back("curve " + std::to_string(idx) + " starts at " + pt(c.front()) +
                                 ", expected " + pt(start));
      }
      if (rule == EndpointRule::kSquare) {
        const Point end{melon.n, melon.n - idx + 1};
        if (c.back() != end) {
          audit.anchored = false;
          audit.failures.push_back("curve " + std::to_string(idx) + " ends at " + pt(c.back()) +
                                   ", expected " + pt(end));
        }
      } else if (c.back().time() != 2 * melon.n) {
        audit.anchored = false;
        audit.failures.push_back("curve " + std::to_string(idx) + " ends at " + pt(c.back()) +
                                 ", off the line x+y = " + std::to_string(2 * melon.n));
      }
    }
  }

  if (melon.per_curve_weight.size() != melon.curves.size()) {
    audit.weights_consistent = false;
    audit.failures.push_back("per-curve weight count does not match curve count");
  } else {
    const auto sum = std::accumulate(melon.per_curve_weight.begin(), melon.per_curve_weight.end(),
                                     std::int64_t{0});
    if (sum != melon.weight) {
      audit.weights_consistent = false;
      audit.failures.push_back("total weight " + std::to_string(melon.weight) +
                               " differs from per-curve sum " + std::to_string(sum));
    }
    if (env != nullptr) {
      for (std::size_t i = 0; i < melon.curves.size(); ++i) {
        bool inside = true;
        for (const auto& v : melon.curves[i].vertices()) inside = inside && env->contains(v);
        if (!inside) continue;
        const auto w = path_weight(*env, melon.curves[i]);
        if (w != melon.per_curve_weight[i]) {
          audit.weights_consistent = false;
          audit.failures.push_back("curve " + std::to_string(i + 1) + " weighs " +
                                   std::to_string(w) + " in the environment, melon records " +
                                   std::to_string(melon.per_curve_weight[i]));
        }
      }
    }
  }
  return audit;
}

}  // namespace melonlab
