#pragma once

#include "wpt/channel.hpp"
#include "wpt/region.hpp"
#include "wpt/types.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace wpt {

using json = nlohmann::json;

inline constexpr const char* kRegionCsvHeader = "scheme,xi1,e1_watts,e2_watts,n_ok_realizations";

// Complex vectors are arrays of [re, im] pairs.
json complex_vector_to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd complex_vector_from_json(const json& j);

SaturationRegion region_from_label(const std::string& label);

json policy_to_json(const TwoPointPolicy& policy);
TwoPointPolicy policy_from_json(const json& j);

json region_point_to_json(const RegionPoint& point);

json channel_pair_to_json(const ChannelPair& channels);
ChannelPair channel_pair_from_json(const json& j);

// {"config": {...}, "realizations": [{"index": r, "g1": ..., "g2": ...}, ...]}
json channels_file(const ChannelConfig& config, int n_realizations);
// Channel pair stored under the given realization index.
ChannelPair channels_from_file(const json& file, std::uint64_t realization);

// Header plus one row per entry, sorted by (scheme, xi1).
std::string region_csv(std::vector<SweepRow> rows);
std::vector<SweepRow> parse_region_csv(const std::string& text);

// Per-cell policies and average powers for one power budget of a sweep.
json policies_json(const SweepResult& result, std::size_t budget);

json phi_curve_to_json(const PhiCurve& curve);

std::string read_text_file(const std::string& path);
// Throws std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace wpt
