#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "melonlab/construction.hpp"
#include "melonlab/env.hpp"
#include "melonlab/melon.hpp"

namespace melonlab {

// Where a melon came from, so that the file alone regenerates it.
struct Provenance {
  std::string dist;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> jitter;
};

Provenance provenance_of(const Environment& env);

// {n, k, weight, curves: [[[x,y],...]], per_curve_weight} in real units, plus
// exact raw integers (weight_raw, per_curve_weight_raw, scale_bits) and the
// source provenance.
nlohmann::ordered_json melon_to_json(const Watermelon& melon,
                                     const std::optional<Provenance>& source = std::nullopt);
// Reads the exact raw fields when present, otherwise rescales the real ones.
// Throws FormatError on schema mismatch.
Watermelon melon_from_json(const nlohmann::json& j);

nlohmann::ordered_json profile_to_json(const MelonProfile& profile,
                                       const std::optional<Provenance>& source = std::nullopt);
MelonProfile profile_from_json(const nlohmann::json& j);

nlohmann::ordered_json plan_to_json(const CorridorPlan& plan);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace melonlab
