#include "vipv/json_io.hpp"
#include "vipv/errors.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vipv {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

template <class T>
void maybe(const Json& j, const char* key, T& field) {
    if (auto it = j.find(key); it != j.end()) field = it->get<T>();
}

} // namespace

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "fnv64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file '" + path + "' for checksum");
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a_hex(buf.str());
}

Json to_json(const ImpactResult& r) {
    Json j;
    j["total"] = r.total_kgco2e_per_m2;
    j["per_stage"] = Json::object();
    for (const auto& [k, v] : r.per_stage) j["per_stage"][k] = v;
    j["per_substance"] = Json::object();
    for (const auto& [k, v] : r.per_substance) j["per_substance"][k] = v;
    j["transport_share"] = r.transport_share;
    return j;
}

Json to_json(const std::vector<StageContribution>& contributions) {
    Json j = Json::array();
    for (const auto& c : contributions)
        j.push_back(Json{{"stage", c.stage}, {"kgco2e", c.kgco2e}, {"share", c.share}});
    return j;
}

Json to_json(const DesignResult& r) {
    Json j;
    j["sizing"] = {{"motor_scale", r.vars.motor_scale},
                   {"battery_scale", r.vars.battery_scale},
                   {"cell_count", r.vars.cell_count}};
    j["consumption_j_per_m"] = r.consumption_j_per_m;
    j["consumption_kwh_per_100km"] = r.consumption_kwh_per_100km();
    j["mass_kg"] = r.mass_kg;
    j["panel_power_w"] = r.panel_power_w;
    j["solver_status"] = r.solver_status;
    j["fixed_point_iterations"] = r.fixed_point_iterations;
    j["optimality_gap_rel"] = r.optimality_gap_rel;
    j["tightness"] = {{"max_inverter_slack_w", r.tightness.max_inverter_slack_w},
                      {"max_abs_battery_power_w", r.tightness.max_abs_battery_power_w}};
    j["active_constraints"] = {{"area", r.area_constraint_active},
                               {"acceleration", r.accel_constraint_active},
                               {"top_speed", r.top_speed_constraint_active},
                               {"range", r.range_constraint_active}};
    return j;
}

Json to_json(const ComparisonResult& r) {
    Json j;
    j["i_p_kg"] = r.i_p_kg;
    j["i_o_vipv_kg"] = r.i_o_vipv_kg;
    j["i_o_bev_kg"] = r.i_o_bev_kg;
    j["delta_kg"] = r.delta_kg;
    j["relative_delta"] = r.relative_delta;
    if (r.breakeven_km) j["breakeven_km"] = *r.breakeven_km;
    else j["breakeven_km"] = "never";
    j["fv_bev_kwh_per_km"] = r.fv_bev_kwh_per_km;
    j["fv_vipv_kwh_per_km"] = r.fv_vipv_kwh_per_km;
    j["panel_area_m2"] = r.panel_area_m2;
    return j;
}

Json to_json(const VehicleParams& p) {
    return Json{{"glider_mass_kg", p.glider_mass_kg},
                {"driver_mass_kg", p.driver_mass_kg},
                {"payload_mass_kg", p.payload_mass_kg},
                {"available_area_m2", p.available_area_m2},
                {"inverter_eff", p.inverter_eff},
                {"motor_ref_mass_kg", p.motor_ref_mass_kg},
                {"motor_ref_peak_w", p.motor_ref_peak_w},
                {"battery_ref_mass_kg", p.battery_ref_mass_kg},
                {"battery_ref_capacity_j", p.battery_ref_capacity_j},
                {"battery_usable_frac", p.battery_usable_frac},
                {"air_density_kg_m3", p.air_density_kg_m3},
                {"drag_coeff", p.drag_coeff},
                {"frontal_area_m2", p.frontal_area_m2},
                {"rolling_coeff", p.rolling_coeff},
                {"gravity_mps2", p.gravity_mps2},
                {"drivetrain_eff", p.drivetrain_eff},
                {"motor_loss_coeff", p.motor_loss_coeff},
                {"accel_power_margin", p.accel_power_margin},
                {"max_launch_accel_mps2", p.max_launch_accel_mps2}};
}

Json to_json(const CellSpec& c) {
    return Json{{"cell_mass_kg", c.cell_mass_kg},
                {"cell_peak_w", c.cell_peak_w},
                {"cell_area_m2", c.cell_area_m2}};
}

Json to_json(const PerformanceReqs& r) {
    return Json{{"min_range_m", r.min_range_m},
                {"min_top_speed_mps", r.min_top_speed_mps},
                {"max_accel_time_s", r.max_accel_time_s},
                {"aux_power_w", r.aux_power_w}};
}

void overlay_from_json(const Json& j, VehicleParams& p) {
    maybe(j, "glider_mass_kg", p.glider_mass_kg);
    maybe(j, "driver_mass_kg", p.driver_mass_kg);
    maybe(j, "payload_mass_kg", p.payload_mass_kg);
    maybe(j, "available_area_m2", p.available_area_m2);
    maybe(j, "inverter_eff", p.inverter_eff);
    maybe(j, "motor_ref_mass_kg", p.motor_ref_mass_kg);
    maybe(j, "motor_ref_peak_w", p.motor_ref_peak_w);
    maybe(j, "battery_ref_mass_kg", p.battery_ref_mass_kg);
    maybe(j, "battery_ref_capacity_j", p.battery_ref_capacity_j);
    maybe(j, "battery_usable_frac", p.battery_usable_frac);
    maybe(j, "air_density_kg_m3", p.air_density_kg_m3);
    maybe(j, "drag_coeff", p.drag_coeff);
    maybe(j, "frontal_area_m2", p.frontal_area_m2);
    maybe(j, "rolling_coeff", p.rolling_coeff);
    maybe(j, "gravity_mps2", p.gravity_mps2);
    maybe(j, "drivetrain_eff", p.drivetrain_eff);
    maybe(j, "motor_loss_coeff", p.motor_loss_coeff);
    maybe(j, "accel_power_margin", p.accel_power_margin);
    maybe(j, "max_launch_accel_mps2", p.max_launch_accel_mps2);
}

void overlay_from_json(const Json& j, CellSpec& c) {
    maybe(j, "cell_mass_kg", c.cell_mass_kg);
    maybe(j, "cell_peak_w", c.cell_peak_w);
    maybe(j, "cell_area_m2", c.cell_area_m2);
}

void overlay_from_json(const Json& j, PerformanceReqs& r) {
    maybe(j, "min_range_m", r.min_range_m);
    maybe(j, "min_top_speed_mps", r.min_top_speed_mps);
    maybe(j, "max_accel_time_s", r.max_accel_time_s);
    maybe(j, "aux_power_w", r.aux_power_w);
}

std::string csv_sweep(const SweepResult& s) {
    std::ostringstream out;
    for (size_t i = 0; i < s.areas_m2.size(); ++i) {
        out << "# tipping_km area=" << num(s.areas_m2[i]) << " ";
        if (i < s.tipping_km.size() && s.tipping_km[i]) out << num(*s.tipping_km[i]);
        else out << "never";
        out << "\n";
    }
    out << "area_m2,lifetime_km,relative_delta\n";
    for (size_t i = 0; i < s.areas_m2.size(); ++i)
        for (size_t j = 0; j < s.lifetimes_km.size(); ++j)
            out << num(s.areas_m2[i]) << "," << num(s.lifetimes_km[j]) << ","
                << num(s.relative_delta[i][j]) << "\n";
    return out.str();
}

std::string csv_country_map(const std::vector<CountryMapRow>& rows) {
    std::ostringstream out;
    out << "country,delta_kg,relative_delta,breakeven_km\n";
    for (const auto& r : rows) {
        out << r.country << "," << num(r.delta_kg) << "," << num(r.relative_delta) << ",";
        if (r.breakeven_km) out << num(*r.breakeven_km);
        else out << "never";
        out << "\n";
    }
    return out.str();
}

} // namespace vipv
