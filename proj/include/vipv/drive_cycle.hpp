#pragma once

#include <string>
#include <vector>

namespace vipv {

/// Quasi-static speed trace sampled on a uniform grid. Acceleration is the
/// forward difference of the speed trace.
struct DriveCycle {
    double dt_s = 1.0;
    std::vector<double> speed_mps;
    std::vector<double> accel_mps2;
    double distance_m = 0.0;

    int steps() const { return static_cast<int>(speed_mps.size()); }
    double duration_s() const { return steps() * dt_s; }

    static DriveCycle from_speeds(std::vector<double> speed_mps, double dt_s = 1.0);

    /// CSV with columns t_s,v_mps; dt is inferred and must be uniform.
    static DriveCycle load_csv(const std::string& path);
};

} // namespace vipv
