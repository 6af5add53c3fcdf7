#include "vipv/powertrain.hpp"
#include "vipv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vipv {

double panel_power(double cell_count, const CellSpec& cell, double k_hi) {
    if (cell_count < 0.0) throw ValidationError("panel_power: negative cell count");
    if (k_hi < 0.0 || k_hi > 1.0) throw ValidationError("panel_power: k_HI outside [0,1]");
    return cell_count * cell.cell_peak_w * k_hi;
}

double vehicle_mass(const DesignVars& vars, const VehicleParams& params, const CellSpec& cell) {
    return params.base_mass_kg() + params.motor_ref_mass_kg * vars.motor_scale +
           params.battery_ref_mass_kg * vars.battery_scale + cell.cell_mass_kg * vars.cell_count;
}

DesignProblem build_design_problem(const DriveCycle& cycle, const VehicleParams& params,
                                   const CellSpec& cell, const PerformanceReqs& reqs, double k_hi,
                                   std::optional<double> fix_cell_count) {
    if (k_hi < 0.0 || k_hi > 1.0)
        throw ValidationError("build_design_problem: k_HI outside [0,1]");
    if (cycle.steps() == 0 || cycle.distance_m <= 0.0)
        throw ValidationError("build_design_problem: drive cycle covers no distance");
    DesignProblem pb;
    pb.cycle = cycle;
    pb.params = params;
    pb.cell = cell;
    pb.reqs = reqs;
    pb.k_hi = k_hi;
    pb.fixed_cell_count = fix_cell_count;
    if (fix_cell_count) {
        if (*fix_cell_count < 0.0)
            throw ValidationError("build_design_problem: negative fixed cell count");
        if (*fix_cell_count * cell.cell_area_m2 > params.available_area_m2 + 1e-9)
            throw ValidationError("build_design_problem: fixed panel exceeds available area");
    }

    pb.num_steps = cycle.steps();
    pb.mass_coeff.resize(pb.num_steps);
    pb.const_coeff.resize(pb.num_steps);
    const double aero = 0.5 * params.air_density_kg_m3 * params.drag_coeff * params.frontal_area_m2;
    for (int t = 0; t < pb.num_steps; ++t) {
        const double v = cycle.speed_mps[t];
        pb.mass_coeff[t] = (cycle.accel_mps2[t] + params.rolling_coeff * params.gravity_mps2) * v;
        pb.const_coeff[t] = aero * v * v * v;
    }
    pb.num_sizing_vars = fix_cell_count ? 2 : 3;
    pb.num_step_arrays = 4; // P_mech, P_ac, P_b, battery energy state
    return pb;
}

namespace {

constexpr double kInvPhi = 0.61803398874989484820;

struct GoldenResult {
    double x = 0.0;
    double fx = 0.0;
    double gap = 0.0; // certified bound on f(x) - min over the initial interval
};

/// Golden-section minimization of a convex function with a secant-based
/// lower bound used as an optimality certificate.
template <class F>
GoldenResult golden_min(F&& f, double a, double b, double xtol) {
    if (b <= a) return {a, f(a), 0.0};
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 300 && (b - a) > xtol; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    GoldenResult r;
    r.x = f1 <= f2 ? x1 : x2;
    r.fx = std::min(f1, f2);
    // Convex lower bound from the final bracket: supporting slopes at the
    // incumbent lie between the left and right secant slopes.
    const double fa = f(a), fb = f(b);
    double lb = r.fx;
    if (r.x > a) {
        const double s_left = (r.fx - fa) / (r.x - a);
        if (r.x < b) lb = std::min(lb, r.fx + s_left * (b - r.x));
    }
    if (r.x < b) {
        const double s_right = (fb - r.fx) / (b - r.x);
        if (r.x > a) lb = std::min(lb, r.fx + s_right * (a - r.x));
    }
    r.gap = std::max(0.0, r.fx - lb);
    return r;
}

/// Distance-specific consumption at battery terminals for fixed sizing,
/// with the per-step variables at their closed-form optimum (every epigraph
/// inequality tight). Caller guarantees the motor limit holds on traction.
double eval_consumption(const DesignProblem& pb, double sm, double sb, double sp,
                        DesignResult* out = nullptr) {
    const VehicleParams& p = pb.params;
    const DesignVars dv{sm, sb, sp};
    const double m = vehicle_mass(dv, p, pb.cell);
    const double pmax = std::max(sm, 1e-12) * p.motor_ref_peak_w;
    const double pp = panel_power(sp, pb.cell, pb.k_hi);
    const double km = p.motor_loss_coeff;
    const double eta_d = p.drivetrain_eff;
    const double eta_i = p.inverter_eff;

    double sum_pb = 0.0;
    double max_abs_pb = 0.0;
    if (out) {
        out->motor_input_power_w.assign(pb.num_steps, 0.0);
        out->battery_power_w.assign(pb.num_steps, 0.0);
        out->battery_energy_j.assign(pb.num_steps + 1, 0.0);
        out->battery_energy_j[0] = p.battery_usable_frac * sb * p.battery_ref_capacity_j;
    }
    for (int t = 0; t < pb.num_steps; ++t) {
        const double preq = pb.mass_coeff[t] * m + pb.const_coeff[t];
        double pmech = std::max(preq / eta_d, eta_d * preq);
        if (pmech < -pmax) pmech = -pmax; // friction brakes absorb the rest
        const double pac = pmech + km * pmech * pmech / pmax;
        const double pnet = pac - pp + pb.reqs.aux_power_w;
        const double pbat = std::max(pnet / eta_i, eta_i * pnet);
        sum_pb += pbat;
        max_abs_pb = std::max(max_abs_pb, std::abs(pbat));
        if (out) {
            out->motor_input_power_w[t] = pac;
            out->battery_power_w[t] = pbat;
            out->battery_energy_j[t + 1] = out->battery_energy_j[t] - pbat * pb.cycle.dt_s;
        }
    }
    const double fv = sum_pb * pb.cycle.dt_s / pb.cycle.distance_m;
    if (out) {
        out->vars = dv;
        out->consumption_j_per_m = fv;
        out->mass_kg = m;
        out->panel_power_w = pp;
        out->tightness.max_abs_battery_power_w = max_abs_pb;
    }
    return fv;
}

struct MotorBounds {
    double accel = 0.0;
    double top_speed = 0.0;
    double cycle_peak = 0.0;

    double overall() const { return std::max({accel, top_speed, cycle_peak, 1e-6}); }
};

/// Smallest motor scale satisfying the acceleration power bound, the
/// top-speed road load and the cycle peak demand, for given battery/panel
/// sizing. All three are affine in S_m after expanding the mass term.
MotorBounds motor_lower_bounds(const DesignProblem& pb, double sb, double sp) {
    const VehicleParams& p = pb.params;
    const double m_rest = p.base_mass_kg() + p.battery_ref_mass_kg * sb +
                          pb.cell.cell_mass_kg * sp;
    MotorBounds lb;

    const double v100 = 100.0 / 3.6;
    const double q = p.accel_power_margin * v100 * v100 / (2.0 * pb.reqs.max_accel_time_s);
    double denom = p.motor_ref_peak_w - q * p.motor_ref_mass_kg;
    if (denom <= 0.0)
        throw SolveError("infeasible: acceleration constraint unattainable with reference motor");
    lb.accel = q * m_rest / denom;

    const double vt = pb.reqs.min_top_speed_mps;
    const double rl_m = p.rolling_coeff * p.gravity_mps2 * vt;
    const double rl_c = 0.5 * p.air_density_kg_m3 * p.drag_coeff * p.frontal_area_m2 * vt * vt * vt;
    denom = p.drivetrain_eff * p.motor_ref_peak_w - p.motor_ref_mass_kg * rl_m;
    if (denom <= 0.0)
        throw SolveError("infeasible: top-speed constraint unattainable with reference motor");
    lb.top_speed = (m_rest * rl_m + rl_c) / denom;

    for (int t = 0; t < pb.num_steps; ++t) {
        const double mc = pb.mass_coeff[t];
        const double num = m_rest * mc + pb.const_coeff[t];
        denom = p.drivetrain_eff * p.motor_ref_peak_w - p.motor_ref_mass_kg * mc;
        if (denom <= 0.0) {
            if (num > 0.0)
                throw SolveError("infeasible: motor power limit on drive cycle at step " +
                                 std::to_string(t));
            continue;
        }
        if (num > 0.0) lb.cycle_peak = std::max(lb.cycle_peak, num / denom);
    }
    return lb;
}

struct InnerSolution {
    double sm = 0.0, sb = 0.0;
    double fv = 0.0;
    int iterations = 0;
    double gap_abs = 0.0;
    MotorBounds bounds;
};

/// For a fixed panel size, minimizes consumption over the motor scale and
/// closes the range constraint by a fixed point on the battery scale (the
/// constraint is active at the optimum: extra battery is pure mass).
InnerSolution solve_inner(const DesignProblem& pb, double sp, double sb_start) {
    const VehicleParams& p = pb.params;
    const double sb_coeff =
        pb.reqs.min_range_m / (p.battery_usable_frac * p.battery_ref_capacity_j);

    InnerSolution sol;
    sol.sb = std::max(sb_start, 1e-6);
    GoldenResult g;
    for (int it = 0; it < 100; ++it) {
        ++sol.iterations;
        sol.bounds = motor_lower_bounds(pb, sol.sb, sp);
        double sm_lo = sol.bounds.overall();
        double sm_hi = std::max(4.0 * sm_lo, sm_lo + 2.0);
        auto fv_of_sm = [&](double sm) { return eval_consumption(pb, sm, sol.sb, sp); };
        for (;;) {
            g = golden_min(fv_of_sm, sm_lo, sm_hi, 1e-10 * std::max(1.0, sm_hi));
            if (g.x < sm_hi - 1e-6 * (sm_hi - sm_lo) || sm_hi > 1e4) break;
            sm_hi *= 2.0; // objective still decreasing at the cap, enlarge
        }
        sol.sm = g.x;
        sol.fv = g.fx;
        const double sb_new = sol.fv * sb_coeff;
        const double mass_change = std::abs(sb_new - sol.sb) * p.battery_ref_mass_kg;
        sol.sb = sb_new;
        if (mass_change < 1e-4) break; // kg
    }
    sol.gap_abs = g.gap;
    return sol;
}

} // namespace

DesignResult solve_design(const DesignProblem& problem) {
    const double sp_max = problem.max_cell_count();

    double sp_opt = 0.0;
    double gap_sp = 0.0;
    double sb_warm = 1.0;
    if (problem.fixed_cell_count) {
        sp_opt = *problem.fixed_cell_count;
    } else {
        auto fv_of_sp = [&](double sp) {
            InnerSolution s = solve_inner(problem, sp, sb_warm);
            sb_warm = s.sb;
            return s.fv;
        };
        GoldenResult g = golden_min(fv_of_sp, 0.0, sp_max, 1e-9 * std::max(1.0, sp_max));
        sp_opt = g.x;
        gap_sp = g.gap;
        // A convex objective over an interval attains its minimum at the
        // boundary when the bracket collapses there; snap within tolerance.
        if (sp_max - sp_opt < 1e-6 * sp_max && fv_of_sp(sp_max) <= g.fx) sp_opt = sp_max;
        if (sp_opt < 1e-6 * sp_max && fv_of_sp(0.0) <= g.fx) sp_opt = 0.0;
    }

    InnerSolution inner = solve_inner(problem, sp_opt, sb_warm);

    DesignResult r;
    eval_consumption(problem, inner.sm, inner.sb, sp_opt, &r);
    r.solver_status = "optimal";
    r.fixed_point_iterations = inner.iterations;

    // Certified gap: motor-scale bracket bound, panel bracket bound, and the
    // residual of the battery fixed point mapped through a conservative
    // mass sensitivity of 0.5 J/m per kg.
    const double sb_residual_kg =
        std::abs(r.consumption_j_per_m * problem.reqs.min_range_m /
                     (problem.params.battery_usable_frac * problem.params.battery_ref_capacity_j) -
                 inner.sb) *
        problem.params.battery_ref_mass_kg;
    const double gap_abs = inner.gap_abs + gap_sp + 0.5 * sb_residual_kg;
    r.optimality_gap_rel = r.consumption_j_per_m > 0.0 ? gap_abs / r.consumption_j_per_m : 0.0;

    // Re-derive the power-balance slack from the stored trajectories.
    {
        const double pp = r.panel_power_w;
        const double eta_i = problem.params.inverter_eff;
        double worst = 0.0;
        for (int t = 0; t < problem.num_steps; ++t) {
            const double pnet = r.motor_input_power_w[t] - pp + problem.reqs.aux_power_w;
            const double active = std::max(pnet / eta_i, eta_i * pnet);
            worst = std::max(worst, std::abs(r.battery_power_w[t] - active));
        }
        r.tightness.max_inverter_slack_w = worst;
    }

    const double tol = 1e-6;
    r.area_constraint_active = sp_max - sp_opt <= tol * std::max(sp_max, 1.0);
    r.accel_constraint_active = inner.sm - inner.bounds.accel <= tol * std::max(inner.sm, 1.0);
    r.top_speed_constraint_active =
        inner.sm - inner.bounds.top_speed <= tol * std::max(inner.sm, 1.0);
    r.range_constraint_active = true;
    return r;
}

SimResult forward_simulate(const DesignVars& vars, const DriveCycle& cycle,
                           const VehicleParams& params, const CellSpec& cell,
                           const PerformanceReqs& reqs, double k_hi) {
    SimResult r;
    const double m = vehicle_mass(vars, params, cell);
    const double pmax = vars.motor_scale * params.motor_ref_peak_w;
    const double pp = panel_power(vars.cell_count, cell, k_hi);
    const double eta_d = params.drivetrain_eff;
    const double eta_i = params.inverter_eff;
    const double km = params.motor_loss_coeff;
    const double aero =
        0.5 * params.air_density_kg_m3 * params.drag_coeff * params.frontal_area_m2;
    const double roll = params.rolling_coeff * params.gravity_mps2;

    double sum_pb = 0.0;
    for (int t = 0; t < cycle.steps(); ++t) {
        const double v = cycle.speed_mps[t];
        const double preq = (cycle.accel_mps2[t] * v + roll * v) * m + aero * v * v * v;
        double pmech;
        if (preq >= 0.0) {
            pmech = preq / eta_d;
            if (pmech > pmax * (1.0 + 1e-9)) {
                r.infeasibility = "motor power limit";
                r.first_bad_step = t;
                return r;
            }
        } else {
            pmech = std::max(eta_d * preq, -pmax);
        }
        const double pac = pmax > 0.0 ? pmech + km * pmech * pmech / pmax : pmech;
        const double pnet = pac - pp + reqs.aux_power_w;
        sum_pb += std::max(pnet / eta_i, eta_i * pnet);
    }
    r.consumption_j_per_m = sum_pb * cycle.dt_s / cycle.distance_m;

    // Top speed: sustained road load at the required speed.
    {
        const double vt = reqs.min_top_speed_mps;
        if (eta_d * pmax < roll * vt * m + aero * vt * vt * vt) {
            r.infeasibility = "top speed";
            return r;
        }
    }

    // Full-throttle 0-100 km/h, traction-limited at launch.
    {
        const double v100 = 100.0 / 3.6;
        const double dt = 0.01;
        double v = 0.0, t = 0.0;
        while (v < v100 && t < 120.0) {
            const double f_trac =
                std::min(eta_d * pmax / std::max(v, 0.5), m * params.max_launch_accel_mps2);
            const double a = (f_trac - roll * m - aero * v * v) / m;
            if (a <= 1e-4) break;
            v += a * dt;
            t += dt;
        }
        r.accel_time_s = t;
        if (v < v100 || t > reqs.max_accel_time_s) {
            r.infeasibility = "acceleration";
            return r;
        }
    }

    if (r.consumption_j_per_m * reqs.min_range_m >
        params.battery_usable_frac * vars.battery_scale * params.battery_ref_capacity_j) {
        r.infeasibility = "range";
        return r;
    }
    r.feasible = true;
    return r;
}

GridSearchResult grid_search_oracle(const DriveCycle& cycle, const VehicleParams& params,
                                    const CellSpec& cell, const PerformanceReqs& reqs, double k_hi,
                                    const GridSpec& grid) {
    if (grid.motor_n < 1 || grid.battery_n < 1 || grid.cell_counts.empty())
        throw ValidationError("grid_search_oracle: empty grid");
    GridSearchResult best;
    best.consumption_j_per_m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.motor_n; ++i) {
        const double sm = grid.motor_n == 1
                              ? grid.motor_lo
                              : grid.motor_lo + (grid.motor_hi - grid.motor_lo) * i /
                                                    (grid.motor_n - 1);
        for (int j = 0; j < grid.battery_n; ++j) {
            const double sb = grid.battery_n == 1
                                  ? grid.battery_lo
                                  : grid.battery_lo + (grid.battery_hi - grid.battery_lo) * j /
                                                          (grid.battery_n - 1);
            for (double sp : grid.cell_counts) {
                ++best.total_points;
                DesignVars v{sm, sb, sp};
                SimResult sim = forward_simulate(v, cycle, params, cell, reqs, k_hi);
                if (!sim.feasible) continue;
                ++best.feasible_points;
                if (sim.consumption_j_per_m < best.consumption_j_per_m) {
                    best.consumption_j_per_m = sim.consumption_j_per_m;
                    best.best = v;
                }
            }
        }
    }
    if (best.feasible_points == 0)
        throw SolveError("grid_search_oracle: empty feasible set on grid");
    return best;
}

} // namespace vipv
