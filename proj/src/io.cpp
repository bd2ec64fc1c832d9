#include "melonlab/io.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "melonlab/error.hpp"

namespace melonlab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json provenance_json(const Provenance& p) {
  ordered_json j;
  j["dist"] = p.dist;
  j["seed"] = p.seed;
  if (p.jitter) j["jitter"] = *p.jitter;
  return j;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("field '") + key + "' has the wrong type");
  }
}

std::int64_t to_raw(double real, int scale_bits) {
  return static_cast<std::int64_t>(std::llround(std::ldexp(real, scale_bits)));
}

ordered_json corners(const Segment& seg) {
  // Corner points of the parallelogram in lattice coordinates (possibly
  // half-integral): a = a_end_point +/- 2 * half_width at each end.
  ordered_json out = ordered_json::array();
  const auto corner = [](Point p, int offset) {
    const double t = p.time();
    const double a = p.antidiag() + offset;
    return ordered_json::array({(t + a) / 2.0, (t - a) / 2.0});
  };
  const int r = 2 * seg.half_width;
  out.push_back(corner(seg.start, -r));
  out.push_back(corner(seg.start, r));
  out.push_back(corner(seg.end, r));
  out.push_back(corner(seg.end, -r));
  return out;
}

ordered_json segments_json(const std::vector<Segment>& segs) {
  ordered_json out = ordered_json::array();
  for (const auto& s : segs) {
    out.push_back({{"start", {s.start.x, s.start.y}},
                   {"end", {s.end.x, s.end.y}},
                   {"half_width", s.half_width},
                   {"corners", corners(s)}});
  }
  return out;
}

ordered_json points_json(const std::vector<Point>& pts) {
  ordered_json out = ordered_json::array();
  for (const auto& p : pts) out.push_back({p.x, p.y});
  return out;
}

}  // namespace

Provenance provenance_of(const Environment& env) {
  return {env.dist().tag(), env.seed(), env.jitter_seed()};
}

ordered_json melon_to_json(const Watermelon& melon, const std::optional<Provenance>& source) {
  ordered_json j;
  j["n"] = melon.n;
  j["k"] = melon.k;
  j["weight"] = melon.real_weight();
  ordered_json curves = ordered_json::array();
  for (const auto& c : melon.curves) {
    ordered_json pts = ordered_json::array();
    for (const auto& v : c.vertices()) pts.push_back({v.x, v.y});
    curves.push_back(std::move(pts));
  }
  j["curves"] = std::move(curves);
  ordered_json per = ordered_json::array();
  for (auto w : melon.per_curve_weight) per.push_back(melon.real(w));
  j["per_curve_weight"] = std::move(per);
  j["scale_bits"] = melon.scale_bits;
  j["weight_raw"] = melon.weight;
  j["per_curve_weight_raw"] = melon.per_curve_weight;
  if (source) j["source"] = provenance_json(*source);
  return j;
}

Watermelon melon_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("melon JSON must be an object");
  Watermelon m;
  m.n = field<int>(j, "n");
  m.k = field<int>(j, "k");
  m.scale_bits = j.contains("scale_bits") ? field<int>(j, "scale_bits") : 0;
  const json& curves = j.contains("curves") ? j.at("curves") : throw FormatError("missing field 'curves'");
  if (!curves.is_array()) throw FormatError("'curves' must be an array");
  for (const auto& c : curves) {
    std::vector<Point> pts;
    if (!c.is_array()) throw FormatError("each curve must be an array of [x, y] pairs");
    for (const auto& v : c) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
        throw FormatError("curve vertices must be [x, y] integer pairs");
      }
      pts.push_back({v[0].get<int>(), v[1].get<int>()});
    }
    try {
      m.curves.emplace_back(std::move(pts));
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("invalid curve: ") + e.what());
    }
  }
  if (j.contains("per_curve_weight_raw")) {
    m.per_curve_weight = field<std::vector<std::int64_t>>(j, "per_curve_weight_raw");
  } else {
    for (double w : field<std::vector<double>>(j, "per_curve_weight")) m.per_curve_weight.push_back(to_raw(w, m.scale_bits));
  }
  m.weight = j.contains("weight_raw") ? field<std::int64_t>(j, "weight_raw")
                                      : to_raw(field<double>(j, "weight"), m.scale_bits);
  if (m.curves.size() != static_cast<std::size_t>(m.k) || m.per_curve_weight.size() != m.curves.size()) {
    throw FormatError("melon declares k = " + std::to_string(m.k) + " but carries " +
                      std::to_string(m.curves.size()) + " curves and " +
                      std::to_string(m.per_curve_weight.size()) + " curve weights");
  }
  return m;
}

ordered_json profile_to_json(const MelonProfile& p, const std::optional<Provenance>& source) {
  ordered_json j;
  j["n"] = p.n;
  j["K"] = p.K();
  const double scale = std::ldexp(1.0, -p.scale_bits);
  ordered_json x = ordered_json::array(), y = ordered_json::array();
  for (int k = 1; k <= p.K(); ++k) {
    x.push_back(static_cast<double>(p.x(k)) * scale);
    y.push_back(static_cast<double>(p.y(k)) * scale);
  }
  j["X"] = std::move(x);
  j["Y"] = std::move(y);
  j["scale_bits"] = p.scale_bits;
  j["X_raw"] = p.X;
  if (source) j["source"] = provenance_json(*source);
  return j;
}

MelonProfile profile_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("profile JSON must be an object");
  MelonProfile p;
  p.n = field<int>(j, "n");
  p.scale_bits = j.contains("scale_bits") ? field<int>(j, "scale_bits") : 0;
  if (j.contains("X_raw")) {
    p.X = field<std::vector<std::int64_t>>(j, "X_raw");
  } else {
    for (double x : field<std::vector<double>>(j, "X")) p.X.push_back(to_raw(x, p.scale_bits));
  }
  if (p.X.empty()) throw FormatError("profile has no X values");
  return p;
}

ordered_json plan_to_json(const CorridorPlan& plan) {
  ordered_json j;
  j["n"] = plan.n;
  j["k"] = plan.k;
  j["m"] = plan.m;
  j["c1"] = plan.c1;
  j["s0"] = plan.s0;
  j["N"] = plan.N;
  j["climb_skipped"] = plan.climb_skipped;
  j["ell"] = plan.ell;
  j["sep"] = plan.sep;
  j["pos"] = plan.pos;
  j["h"] = plan.h;
  j["cruise_levels"] = plan.cruise_levels;
  j["tf_bound"] = plan.tf_bound;
  ordered_json curves = ordered_json::array();
  for (std::size_t i = 0; i < plan.curves.size(); ++i) {
    const auto& c = plan.curves[i];
    curves.push_back({{"i", i + 1},
                      {"take_off", points_json(c.take_off)},
                      {"climb", segments_json(c.climb)},
                      {"cruise", segments_json(c.cruise)},
                      {"descent", segments_json(c.descent)},
                      {"landing", points_json(c.landing)}});
  }
  j["curves"] = std::move(curves);
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace melonlab
