#pragma once

#include "vipv/drive_cycle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vipv {

/// Mono-crystalline silicon solar cell characteristics.
struct CellSpec {
    double cell_mass_kg = 0.28;  // m_c,o
    double cell_peak_w = 4.88;   // P_c max
    double cell_area_m2 = 0.0243;

    double power_density_w_per_m2() const { return cell_peak_w / cell_area_m2; }
};

struct VehicleParams {
    double glider_mass_kg = 850.0;
    double driver_mass_kg = 85.0;
    double payload_mass_kg = 0.0;
    double available_area_m2 = 3.0; // A_a, roof + hood area usable for cells
    double inverter_eff = 0.96;

    // Reference components for the linear sizing model. Not taken from any
    // published table; see the configuration docs.
    double motor_ref_mass_kg = 25.0;
    double motor_ref_peak_w = 32e3;
    double battery_ref_mass_kg = 110.0;
    double battery_ref_capacity_j = 7.2e7; // 20 kWh
    double battery_usable_frac = 0.9;      // zeta

    double air_density_kg_m3 = 1.2;
    double drag_coeff = 0.30;
    double frontal_area_m2 = 2.2;
    double rolling_coeff = 0.009;
    double gravity_mps2 = 9.81;
    double drivetrain_eff = 0.97;

    double motor_loss_coeff = 0.10;   // k_m in P_ac = P_mech + k_m P_mech^2 / (S_m P_m,o)
    double accel_power_margin = 1.15; // k_a in the convex acceleration power bound
    double max_launch_accel_mps2 = 4.0; // traction cap in the full-throttle check

    double base_mass_kg() const { return glider_mass_kg + driver_mass_kg + payload_mass_kg; }
};

struct PerformanceReqs {
    double min_range_m = 200e3;
    double min_top_speed_mps = 130.0 / 3.6;
    double max_accel_time_s = 15.0; // 0-100 km/h
    double aux_power_w = 500.0;
};

struct DesignVars {
    double motor_scale = 0.0;   // S_m
    double battery_scale = 0.0; // S_b
    double cell_count = 0.0;    // S_p, continuous
};

/// P_p = S_p * P_c * k_HI
double panel_power(double cell_count, const CellSpec& cell, double k_hi);

/// m = m_g + m_d + m_pl + m_m,o S_m + m_b,o S_b + m_c,o S_p
double vehicle_mass(const DesignVars& vars, const VehicleParams& params, const CellSpec& cell);

/// Description of the convex sizing program over a drive cycle: 3 sizing
/// variables plus per-step arrays (motor shaft power, motor input power,
/// battery power, battery energy state), power-balance and epigraph
/// constraints, and the performance constraints.
struct DesignProblem {
    DriveCycle cycle;
    VehicleParams params;
    CellSpec cell;
    PerformanceReqs reqs;
    double k_hi = 0.0;
    std::optional<double> fixed_cell_count; // 0 encodes the BEV baseline

    // Road load per step, affine in the vehicle mass:
    // P_req(t) = mass_coeff[t] * m + const_coeff[t]
    std::vector<double> mass_coeff;  // a(t) v(t) + c_rr g v(t)
    std::vector<double> const_coeff; // 1/2 rho c_d A_f v(t)^3

    int num_sizing_vars = 0;
    int num_step_arrays = 0; // P_mech, P_ac, P_b, battery energy
    int num_steps = 0;

    double max_cell_count() const { return params.available_area_m2 / cell.cell_area_m2; }
};

DesignProblem build_design_problem(const DriveCycle& cycle, const VehicleParams& params,
                                   const CellSpec& cell, const PerformanceReqs& reqs, double k_hi,
                                   std::optional<double> fix_cell_count = std::nullopt);

struct TightnessReport {
    double max_inverter_slack_w = 0.0; // worst slack of the active power-balance branch
    double max_abs_battery_power_w = 0.0;
};

struct DesignResult {
    DesignVars vars;
    double consumption_j_per_m = 0.0; // F_v at battery terminals
    double mass_kg = 0.0;
    double panel_power_w = 0.0;

    std::vector<double> motor_input_power_w; // P_ac(t)
    std::vector<double> battery_power_w;     // P_b(t)
    std::vector<double> battery_energy_j;    // state, starts at usable capacity

    std::string solver_status;
    TightnessReport tightness;
    int fixed_point_iterations = 0;
    double optimality_gap_rel = 0.0;

    bool area_constraint_active = false;
    bool accel_constraint_active = false;
    bool top_speed_constraint_active = false;
    bool range_constraint_active = false;

    double consumption_kwh_per_100km() const { return consumption_j_per_m / 36.0; }
};

/// Globally solves the convex program. The per-step variables are eliminated
/// in closed form (the epigraph chain collapses at the optimum), leaving a
/// convex problem in the sizing variables that is solved by certified
/// bracketing searches with the range constraint closed by a fixed point.
DesignResult solve_design(const DesignProblem& problem);

struct SimResult {
    double consumption_j_per_m = 0.0;
    bool feasible = false;
    std::string infeasibility; // constraint family, empty when feasible
    int first_bad_step = -1;
    double accel_time_s = 0.0;
};

/// Verification oracle: quasi-static per-step simulation with equalities in
/// place of the relaxed constraints, plus range / top-speed / full-throttle
/// acceleration checks.
SimResult forward_simulate(const DesignVars& vars, const DriveCycle& cycle,
                           const VehicleParams& params, const CellSpec& cell,
                           const PerformanceReqs& reqs, double k_hi);

struct GridSpec {
    double motor_lo = 0.0, motor_hi = 0.0;
    int motor_n = 0;
    double battery_lo = 0.0, battery_hi = 0.0;
    int battery_n = 0;
    std::vector<double> cell_counts;
};

struct GridSearchResult {
    DesignVars best;
    double consumption_j_per_m = 0.0;
    long feasible_points = 0;
    long total_points = 0;
};

/// Exhaustive forward simulation over the grid; best feasible point.
/// Throws SolveError when the feasible set on the grid is empty.
GridSearchResult grid_search_oracle(const DriveCycle& cycle, const VehicleParams& params,
                                    const CellSpec& cell, const PerformanceReqs& reqs, double k_hi,
                                    const GridSpec& grid);

} // namespace vipv
