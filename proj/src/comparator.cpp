#include "vipv/comparator.hpp"
#include "vipv/errors.hpp"

#include <cmath>
#include <future>
#include <limits>

namespace vipv {

double operations_emissions(double fv_kwh_per_km, double c_g_per_kwh, double lifetime_km) {
    if (fv_kwh_per_km < 0.0 || c_g_per_kwh < 0.0 || lifetime_km < 0.0)
        throw ValidationError("operations_emissions: negative input");
    return fv_kwh_per_km * (c_g_per_kwh / 1000.0) * lifetime_km;
}

std::optional<double> breakeven_lifetime(double i_p_kg, double fv_bev_kwh_per_km,
                                         double fv_vipv_kwh_per_km, double c_kg_per_kwh) {
    if (c_kg_per_kwh <= 0.0)
        throw ValidationError("breakeven_lifetime: carbon intensity must be positive");
    if (i_p_kg == 0.0) return 0.0;
    const double savings = fv_bev_kwh_per_km - fv_vipv_kwh_per_km;
    if (savings <= 0.0) return std::nullopt;
    return i_p_kg / (savings * c_kg_per_kwh);
}

double panel_impact_per_m2(const CompareContext& ctx, const Scenario& scenario) {
    ProcessGraph resolved = scenario.production_locations.empty()
                                ? resolve_default_regions(ctx.graph)
                                : resolve_region(ctx.graph, scenario.production_locations);
    auto x = cumulative_inventory(resolved, DemandVector::unit_root(resolved));
    return characterize(resolved, x, ctx.method).total_kgco2e_per_m2;
}

namespace {

struct DesignPair {
    double fv_bev_j_per_m = 0.0;
    double fv_vipv_j_per_m = 0.0;
    double area_m2 = 0.0;
};

/// Shared assembly so that compare() and every sweep/map cell follow the
/// exact same arithmetic (the 1x1 sweep must reproduce compare() bitwise).
ComparisonResult assemble(double ip_per_m2, const DesignPair& d, const CountryProfile& profile,
                          double lifetime_km) {
    ComparisonResult r;
    r.fv_bev_kwh_per_km = d.fv_bev_j_per_m / 3600.0;
    r.fv_vipv_kwh_per_km = d.fv_vipv_j_per_m / 3600.0;
    r.panel_area_m2 = d.area_m2;
    r.i_p_kg = ip_per_m2 * d.area_m2;
    r.i_o_bev_kg =
        operations_emissions(r.fv_bev_kwh_per_km, profile.carbon_intensity_g_per_kwh, lifetime_km);
    r.i_o_vipv_kg =
        operations_emissions(r.fv_vipv_kwh_per_km, profile.carbon_intensity_g_per_kwh, lifetime_km);
    r.delta_kg = (r.i_p_kg + r.i_o_vipv_kg) - r.i_o_bev_kg;
    if (r.i_o_bev_kg != 0.0)
        r.relative_delta = r.delta_kg / r.i_o_bev_kg;
    else
        r.relative_delta = r.delta_kg == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    if (profile.carbon_intensity_g_per_kwh > 0.0)
        r.breakeven_km = breakeven_lifetime(r.i_p_kg, r.fv_bev_kwh_per_km, r.fv_vipv_kwh_per_km,
                                            profile.carbon_intensity_g_per_kwh / 1000.0);
    return r;
}

DesignResult solve_bev(const CompareContext& ctx, double k_hi) {
    return solve_design(
        build_design_problem(ctx.cycle, ctx.params, ctx.cell, ctx.reqs, k_hi, 0.0));
}

DesignResult solve_vipv(const CompareContext& ctx, double k_hi,
                        const std::optional<double>& panel_area_m2) {
    std::optional<double> fix;
    if (panel_area_m2) fix = *panel_area_m2 / ctx.cell.cell_area_m2;
    return solve_design(build_design_problem(ctx.cycle, ctx.params, ctx.cell, ctx.reqs, k_hi, fix));
}

void validate_scenario(const Scenario& s, const CompareContext& ctx) {
    if (s.lifetime_km <= 0.0) throw ValidationError("scenario: lifetime must be positive");
    if (s.panel_area_m2 && *s.panel_area_m2 > ctx.params.available_area_m2 + 1e-9)
        throw ValidationError("scenario: panel area exceeds available area");
}

} // namespace

ComparisonResult compare(const Scenario& scenario, const CompareContext& ctx) {
    validate_scenario(scenario, ctx);
    const double ip_per_m2 = panel_impact_per_m2(ctx, scenario);
    const DesignResult bev = solve_bev(ctx, scenario.use_country.k_hi);
    const DesignResult vipv = solve_vipv(ctx, scenario.use_country.k_hi, scenario.panel_area_m2);
    DesignPair d;
    d.fv_bev_j_per_m = bev.consumption_j_per_m;
    d.fv_vipv_j_per_m = vipv.consumption_j_per_m;
    d.area_m2 = vipv.vars.cell_count * ctx.cell.cell_area_m2;
    return assemble(ip_per_m2, d, scenario.use_country, scenario.lifetime_km);
}

SweepResult sweep(const Scenario& scenario_template, const CompareContext& ctx,
                  const std::vector<double>& areas_m2, const std::vector<double>& lifetimes_km) {
    if (areas_m2.empty() || lifetimes_km.empty())
        throw ValidationError("sweep: empty axis");
    Scenario probe = scenario_template;
    probe.panel_area_m2 = areas_m2.front();
    validate_scenario(probe, ctx);

    const double ip_per_m2 = panel_impact_per_m2(ctx, scenario_template);
    const DesignResult bev = solve_bev(ctx, scenario_template.use_country.k_hi);

    std::vector<std::future<DesignResult>> vipv_futures;
    vipv_futures.reserve(areas_m2.size());
    for (double area : areas_m2)
        vipv_futures.push_back(std::async(std::launch::async, [&, area]() {
            return solve_vipv(ctx, scenario_template.use_country.k_hi, area);
        }));

    SweepResult out;
    out.areas_m2 = areas_m2;
    out.lifetimes_km = lifetimes_km;
    for (size_t i = 0; i < areas_m2.size(); ++i) {
        const DesignResult vipv = vipv_futures[i].get();
        DesignPair d;
        d.fv_bev_j_per_m = bev.consumption_j_per_m;
        d.fv_vipv_j_per_m = vipv.consumption_j_per_m;
        d.area_m2 = vipv.vars.cell_count * ctx.cell.cell_area_m2;
        std::vector<double> row;
        row.reserve(lifetimes_km.size());
        std::optional<double> tip;
        for (double L : lifetimes_km) {
            ComparisonResult c = assemble(ip_per_m2, d, scenario_template.use_country, L);
            row.push_back(c.relative_delta);
            tip = c.breakeven_km;
        }
        out.relative_delta.push_back(std::move(row));
        out.tipping_km.push_back(tip);
    }
    return out;
}

std::vector<CountryMapRow> country_map(const std::vector<CountryProfile>& countries,
                                       double lifetime_km, const Scenario& scenario_template,
                                       const CompareContext& ctx) {
    if (countries.empty()) throw ValidationError("country_map: no countries");
    const double ip_per_m2 = panel_impact_per_m2(ctx, scenario_template);

    std::vector<std::future<CountryMapRow>> futures;
    futures.reserve(countries.size());
    for (const CountryProfile& profile : countries)
        futures.push_back(std::async(std::launch::async, [&, profile]() {
            const DesignResult bev = solve_bev(ctx, profile.k_hi);
            const DesignResult vipv = solve_vipv(ctx, profile.k_hi, scenario_template.panel_area_m2);
            DesignPair d;
            d.fv_bev_j_per_m = bev.consumption_j_per_m;
            d.fv_vipv_j_per_m = vipv.consumption_j_per_m;
            d.area_m2 = vipv.vars.cell_count * ctx.cell.cell_area_m2;
            ComparisonResult c = assemble(ip_per_m2, d, profile, lifetime_km);
            CountryMapRow row;
            row.country = profile.country;
            row.delta_kg = c.delta_kg;
            row.relative_delta = c.relative_delta;
            row.breakeven_km = c.breakeven_km;
            return row;
        }));

    std::vector<CountryMapRow> out;
    out.reserve(countries.size());
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

} // namespace vipv
