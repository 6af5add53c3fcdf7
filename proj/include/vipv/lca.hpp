#pragma once

#include "vipv/inventory.hpp"

#include <map>
#include <string>
#include <vector>

namespace vipv {

struct DemandVector {
    std::map<std::string, double> entries; // activity id -> amount, in activity units

    /// 1.0 of the graph's root activity (one square meter of panel).
    static DemandVector unit_root(const ProcessGraph& graph);
};

struct ImpactResult {
    double total_kgco2e_per_m2 = 0.0;
    std::map<std::string, double> per_stage;     // stage id -> kg CO2eq
    std::map<std::string, double> per_substance; // substance id -> kg CO2eq
    double transport_share = 0.0;                // fraction of total routed through t*km activities
};

struct StageContribution {
    std::string stage;
    double kgco2e = 0.0;
    double share = 0.0;
};

/// Total activity levels x solving (I - A) x = f, where A[i][j] is the amount
/// of activity i consumed per unit of activity j and f is the demand.
/// Handles cyclic graphs; rejects singular or non-productive systems.
std::map<std::string, double> cumulative_inventory(const ProcessGraph& graph,
                                                   const DemandVector& demand);

/// Characterized impact of the scaling vector x, with per-substance totals
/// and per-stage attribution. Supporting activities (materials, transport,
/// electricity) are attributed to the production stages that demand them,
/// split proportionally when shared.
ImpactResult characterize(const ProcessGraph& graph,
                          const std::map<std::string, double>& x,
                          const CharacterizationMethod& method);

/// Contributions sorted by descending impact; shares sum to 1.
std::vector<StageContribution> stage_contributions(const ImpactResult& result);

/// Converts a per-m2 impact into kg CO2eq per kWh produced over the panel
/// lifetime: I_p / (annual_insolation * PR * eta_module * lifetime_years)
/// with eta_module = power_density / 1000 W/m2.
double harmonize_per_kwh(double i_p_per_m2, double power_density_w_per_m2,
                         const CountryProfile& profile, double performance_ratio,
                         double panel_lifetime_years);

} // namespace vipv
