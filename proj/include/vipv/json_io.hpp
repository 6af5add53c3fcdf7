#pragma once

#include "vipv/comparator.hpp"
#include "vipv/lca.hpp"
#include "vipv/powertrain.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace vipv {

// Fixed key order keeps serialized results diff-stable.
using Json = nlohmann::ordered_json;

/// FNV-1a 64-bit, hex-encoded. Used to pin input files in output provenance.
std::string fnv1a_hex(const std::string& bytes);
std::string file_checksum(const std::string& path);

Json to_json(const ImpactResult& r);
Json to_json(const std::vector<StageContribution>& contributions);
Json to_json(const DesignResult& r);
Json to_json(const ComparisonResult& r);

Json to_json(const VehicleParams& p);
Json to_json(const CellSpec& c);
Json to_json(const PerformanceReqs& r);
void overlay_from_json(const Json& j, VehicleParams& p);
void overlay_from_json(const Json& j, CellSpec& c);
void overlay_from_json(const Json& j, PerformanceReqs& r);

/// CSV with header area_m2,lifetime_km,relative_delta
std::string csv_sweep(const SweepResult& s);
/// CSV with header country,delta_kg,relative_delta,breakeven_km
std::string csv_country_map(const std::vector<CountryMapRow>& rows);

} // namespace vipv
