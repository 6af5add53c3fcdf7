#pragma once

#include "vipv/inventory.hpp"
#include "vipv/lca.hpp"
#include "vipv/powertrain.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vipv {

struct Scenario {
    std::map<std::string, std::string> production_locations; // stage id -> region
    CountryProfile use_country;
    double lifetime_km = 150e3;
    std::optional<double> panel_area_m2; // nullopt = let the solver size the panel
};

struct ComparisonResult {
    double i_p_kg = 0.0;      // panel manufacturing emissions for the installed area
    double i_o_vipv_kg = 0.0; // operation emissions, solar vehicle
    double i_o_bev_kg = 0.0;  // operation emissions, conventional BEV
    double delta_kg = 0.0;    // (I_p + I_o_vipv) - I_o_bev
    double relative_delta = 0.0;
    std::optional<double> breakeven_km; // nullopt = never

    double fv_bev_kwh_per_km = 0.0;
    double fv_vipv_kwh_per_km = 0.0;
    double panel_area_m2 = 0.0;
};

/// Everything a comparison needs besides the scenario itself. The graph is
/// the unresolved inventory; production locations are applied per scenario.
struct CompareContext {
    ProcessGraph graph;
    CharacterizationMethod method;
    DriveCycle cycle;
    VehicleParams params;
    CellSpec cell;
    PerformanceReqs reqs;
};

/// I_o = F_v * c * L with F_v in kWh/km, c in g CO2eq/kWh, L in km -> kg.
double operations_emissions(double fv_kwh_per_km, double c_g_per_kwh, double lifetime_km);

/// L* = I_p / ((F_v_bev - F_v_vipv) * c); nullopt when the solar vehicle
/// saves nothing. c in kg CO2eq/kWh.
std::optional<double> breakeven_lifetime(double i_p_kg, double fv_bev_kwh_per_km,
                                         double fv_vipv_kwh_per_km, double c_kg_per_kwh);

/// Cradle-to-gate impact per m2 for the scenario's production locations.
double panel_impact_per_m2(const CompareContext& ctx, const Scenario& scenario);

ComparisonResult compare(const Scenario& scenario, const CompareContext& ctx);

struct SweepResult {
    std::vector<double> areas_m2;
    std::vector<double> lifetimes_km;
    std::vector<std::vector<double>> relative_delta; // [area][lifetime]
    std::vector<std::optional<double>> tipping_km;   // per area column
};

/// Panel-area x lifetime sensitivity grid. Cells are independent; the BEV
/// baseline and the LCA are shared across the whole grid.
SweepResult sweep(const Scenario& scenario_template, const CompareContext& ctx,
                  const std::vector<double>& areas_m2, const std::vector<double>& lifetimes_km);

struct CountryMapRow {
    std::string country;
    double delta_kg = 0.0;
    double relative_delta = 0.0;
    std::optional<double> breakeven_km;
};

/// One comparison per country with a shared production scenario. Countries
/// are evaluated in parallel; output order follows the input order.
std::vector<CountryMapRow> country_map(const std::vector<CountryProfile>& countries,
                                       double lifetime_km, const Scenario& scenario_template,
                                       const CompareContext& ctx);

} // namespace vipv
