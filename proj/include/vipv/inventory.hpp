#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace vipv {

struct TechnosphereInput {
    std::string activity_id;
    double amount = 0.0; // per unit of output of the consuming activity
    std::string unit;
};

struct BiosphereOutput {
    std::string substance_id;
    double amount_kg = 0.0; // kg per unit of output, may be negative (uptake)
};

struct Activity {
    std::string id;
    std::string name;
    std::string location; // region code, may be empty for global supplies
    std::string unit;     // unit of one output (kg, m2, kWh, tkm, ...)
    std::vector<TechnosphereInput> technosphere_inputs;
    std::vector<BiosphereOutput> biosphere_outputs;
    bool is_stage = false;       // one of the production stages (Fig-style bars)
    bool is_root = false;        // functional-unit activity
    bool is_placeholder = false; // regional electricity slot, resolved later
    bool is_generated = false;   // materialized from a mix, not part of the file
};

struct Substance {
    std::string id;
    std::string name;
};

struct ElectricityMix {
    std::string region;
    std::vector<std::pair<std::string, double>> shares; // tech id -> fraction
    double intensity_g_per_kwh = 0.0;                   // derived from tech intensities
};

struct CountryProfile {
    std::string country;
    double carbon_intensity_g_per_kwh = 0.0;
    double k_hi = 0.0; // horizontal irradiation coefficient, in [0, 1]
    double annual_insolation_kwh_m2_yr = 0.0;
    double daily_light_hours = 0.0;
};

struct CharacterizationMethod {
    std::string name = "GWP100-midpoint";
    std::map<std::string, double> factors; // substance id -> kg CO2eq per kg
};

/// Immutable after load; safe to share across concurrent evaluations.
struct ProcessGraph {
    std::map<std::string, Activity> activities;
    std::map<std::string, Substance> substances;
    std::map<std::string, double> tech_intensities; // g CO2eq per kWh
    std::map<std::string, ElectricityMix> mixes;
    std::map<std::string, CountryProfile> countries;
    std::set<std::string> electricity_placeholder_ids;
    std::string root_id;

    const Activity& activity(const std::string& id) const;
    /// True when `id` names either a placeholder or a regional electricity
    /// activity, i.e. something resolve_region() may rewire.
    bool is_electricity_slot(const std::string& id) const;
};

/// Parse and fully validate an inventory file. Checks closure (no dangling
/// references), finite non-negative technosphere amounts, unique ids, mix
/// share normalization and the presence of a root activity.
ProcessGraph load_process_graph(const std::string& path);

/// Parse an inventory from an in-memory string ("<string>" is used as the
/// file name in diagnostics).
ProcessGraph parse_process_graph(const std::string& text,
                                 const std::string& origin = "<string>");

/// Canonical text form: sections and entries in sorted order, numbers at
/// full precision. serialize(load(p)) is a fixed point for valid inputs.
std::string serialize_process_graph(const ProcessGraph& graph);

/// Returns a new graph where each listed stage draws its electricity from
/// the given region's mix (materialized as activity "electricity-<REGION>").
/// The input graph is not modified.
ProcessGraph resolve_region(const ProcessGraph& graph,
                            const std::map<std::string, std::string>& stage_locations,
                            const std::map<std::string, ElectricityMix>& mixes);

/// Convenience overload using the mixes bundled in the graph itself.
ProcessGraph resolve_region(const ProcessGraph& graph,
                            const std::map<std::string, std::string>& stage_locations);

/// Resolve every stage to the region recorded in its `location` attribute.
ProcessGraph resolve_default_regions(const ProcessGraph& graph);

/// Build a regional electricity activity (unit kWh) from a mix.
Activity make_mix_activity(const ElectricityMix& mix);

/// CSV: country,carbon_intensity_g_per_kwh,k_hi,annual_insolation_kwh_m2_yr,daily_light_hours
std::map<std::string, CountryProfile> load_country_profiles(const std::string& path);

/// CSV: substance,factor_kgco2e_per_kg. Requires factor("co2") == 1.
CharacterizationMethod load_characterization_method(const std::string& path);

} // namespace vipv
