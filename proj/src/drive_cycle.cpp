#include "vipv/drive_cycle.hpp"
#include "vipv/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace vipv {

DriveCycle DriveCycle::from_speeds(std::vector<double> speed_mps, double dt_s) {
    if (speed_mps.empty()) throw ValidationError("drive cycle: empty speed trace");
    if (dt_s <= 0.0) throw ValidationError("drive cycle: dt must be positive");
    DriveCycle c;
    c.dt_s = dt_s;
    for (size_t i = 0; i < speed_mps.size(); ++i) {
        double v = speed_mps[i];
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError("drive cycle: invalid speed at step " + std::to_string(i));
        c.distance_m += v * dt_s;
    }
    c.speed_mps = std::move(speed_mps);
    c.accel_mps2.resize(c.speed_mps.size(), 0.0);
    for (size_t i = 0; i + 1 < c.speed_mps.size(); ++i)
        c.accel_mps2[i] = (c.speed_mps[i + 1] - c.speed_mps[i]) / dt_s;
    return c;
}

DriveCycle DriveCycle::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open drive cycle file '" + path + "'");
    std::vector<double> times, speeds;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::string ctx = path + ":" + std::to_string(lineno);
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ','))
            throw ValidationError(ctx + ": expected t_s,v_mps");
        if (a == "t_s") continue; // header
        try {
            times.push_back(std::stod(a));
            speeds.push_back(std::stod(b));
        } catch (const std::exception&) {
            throw ValidationError(ctx + ": malformed number");
        }
    }
    if (speeds.size() < 2) throw ValidationError(path + ": drive cycle needs at least 2 samples");
    double dt = times[1] - times[0];
    if (dt <= 0.0) throw ValidationError(path + ": non-increasing time stamps");
    for (size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - times[i - 1] - dt) > 1e-9)
            throw ValidationError(path + ": non-uniform sampling at row " + std::to_string(i + 1));
    return from_speeds(std::move(speeds), dt);
}

} // namespace vipv
