#include "vipv/lca.hpp"
#include "vipv/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace vipv {

namespace {

// Dense LU is fine for the bundled graphs; revisit if inventories ever
// approach the ~500-activity mark.
constexpr int kDenseCutoff = 500;

std::vector<std::string> activity_index(const ProcessGraph& g) {
    std::vector<std::string> ids;
    ids.reserve(g.activities.size());
    for (const auto& [id, a] : g.activities) ids.push_back(id);
    return ids;
}

} // namespace

DemandVector DemandVector::unit_root(const ProcessGraph& graph) {
    DemandVector d;
    d.entries[graph.root_id] = 1.0;
    return d;
}

std::map<std::string, double> cumulative_inventory(const ProcessGraph& graph,
                                                   const DemandVector& demand) {
    const auto ids = activity_index(graph);
    const int n = static_cast<int>(ids.size());
    if (n == 0) throw ValidationError("cumulative_inventory: empty graph");
    if (n > kDenseCutoff)
        throw ValidationError("cumulative_inventory: graph exceeds dense-solve cutoff of " +
                              std::to_string(kDenseCutoff) + " activities");

    std::map<std::string, int> pos;
    for (int i = 0; i < n; ++i) pos[ids[i]] = i;

    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n); // I - A
    for (int j = 0; j < n; ++j)
        for (const auto& in : graph.activity(ids[j]).technosphere_inputs)
            M(pos.at(in.activity_id), j) -= in.amount;

    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    for (const auto& [id, amount] : demand.entries) {
        auto it = pos.find(id);
        if (it == pos.end())
            throw ValidationError("cumulative_inventory: demand on unknown activity '" + id + "'");
        if (!std::isfinite(amount) || amount < 0.0)
            throw ValidationError("cumulative_inventory: invalid demand for '" + id + "'");
        f(it->second) = amount;
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible())
        throw SolveError("non-productive inventory");
    Eigen::VectorXd x = lu.solve(f);

    const double fnorm = f.lpNorm<Eigen::Infinity>();
    const double residual = (M * x - f).lpNorm<Eigen::Infinity>();
    if (residual > 1e-10 * std::max(fnorm, 1.0))
        throw SolveError("non-productive inventory");
    // A productive system with non-negative demand yields non-negative levels.
    if (x.minCoeff() < -1e-9 * std::max(fnorm, 1.0))
        throw SolveError("non-productive inventory");

    std::map<std::string, double> out;
    for (int i = 0; i < n; ++i) out[ids[i]] = x(i);
    return out;
}

ImpactResult characterize(const ProcessGraph& graph, const std::map<std::string, double>& x,
                          const CharacterizationMethod& method) {
    ImpactResult r;

    // Direct characterized impact per unit of each activity.
    std::map<std::string, double> direct;
    for (const auto& [id, a] : graph.activities) {
        double xa = 0.0;
        if (auto it = x.find(id); it != x.end()) xa = it->second;
        if (xa != 0.0 && a.is_placeholder)
            throw ValidationError("characterize: unresolved electricity placeholder '" + id +
                                  "'; call resolve_region first");
        double d = 0.0;
        for (const auto& em : a.biosphere_outputs) {
            auto fit = method.factors.find(em.substance_id);
            if (fit == method.factors.end()) {
                if (xa == 0.0) continue;
                throw ValidationError("characterize: no characterization factor for substance '" +
                                      em.substance_id + "'");
            }
            d += em.amount_kg * fit->second;
            r.per_substance[em.substance_id] += xa * em.amount_kg * fit->second;
        }
        direct[id] = d;
        r.total_kgco2e_per_m2 += xa * d;
    }

    // Stages carry their own direct impact plus the full chains of the
    // supporting (non-stage) activities they demand, split proportionally
    // to demand. Life-cycle intensity of the supporting sub-technosphere:
    // lambda = (I - A_nn)^-T d_n.
    std::vector<std::string> stage_ids, support_ids;
    for (const auto& [id, a] : graph.activities) {
        if (a.is_stage || a.is_root) stage_ids.push_back(id);
        else support_ids.push_back(id);
    }
    const int ns = static_cast<int>(support_ids.size());
    std::map<std::string, int> spos;
    for (int i = 0; i < ns; ++i) spos[support_ids[i]] = i;

    std::map<std::string, double> lambda; // support id -> life-cycle kgCO2eq per unit
    if (ns > 0) {
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(ns, ns);
        Eigen::VectorXd d = Eigen::VectorXd::Zero(ns);
        for (int j = 0; j < ns; ++j) {
            d(j) = direct.at(support_ids[j]);
            for (const auto& in : graph.activity(support_ids[j]).technosphere_inputs)
                if (auto it = spos.find(in.activity_id); it != spos.end())
                    M(it->second, j) -= in.amount;
        }
        Eigen::VectorXd lam = M.transpose().fullPivLu().solve(d);
        for (int i = 0; i < ns; ++i) lambda[support_ids[i]] = lam(i);
    }

    for (const auto& sid : stage_ids) {
        double xs = 0.0;
        if (auto it = x.find(sid); it != x.end()) xs = it->second;
        double kg = xs * direct.at(sid);
        for (const auto& in : graph.activity(sid).technosphere_inputs)
            if (auto it = lambda.find(in.activity_id); it != lambda.end())
                kg += xs * in.amount * it->second;
        r.per_stage[sid] = kg;
    }

    // Exogenous demand on supporting activities (possible for hand-built
    // graphs) is not reachable from any stage; keep the decomposition exact.
    double attributed = 0.0;
    for (const auto& [s, kg] : r.per_stage) attributed += kg;
    const double residual = r.total_kgco2e_per_m2 - attributed;
    if (std::abs(residual) > 1e-9 * std::max(std::abs(r.total_kgco2e_per_m2), 1.0))
        r.per_stage["(unattributed)"] = residual;

    double transport = 0.0;
    for (const auto& sid : support_ids) {
        const auto& a = graph.activity(sid);
        if (a.unit != "tkm") continue;
        double xa = 0.0;
        if (auto it = x.find(sid); it != x.end()) xa = it->second;
        transport += xa * lambda.at(sid);
    }
    r.transport_share = r.total_kgco2e_per_m2 != 0.0 ? transport / r.total_kgco2e_per_m2 : 0.0;
    return r;
}

std::vector<StageContribution> stage_contributions(const ImpactResult& result) {
    std::vector<StageContribution> out;
    for (const auto& [stage, kg] : result.per_stage) {
        StageContribution c;
        c.stage = stage;
        c.kgco2e = kg;
        c.share = result.total_kgco2e_per_m2 != 0.0 ? kg / result.total_kgco2e_per_m2 : 0.0;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.kgco2e > b.kgco2e; });
    return out;
}

double harmonize_per_kwh(double i_p_per_m2, double power_density_w_per_m2,
                         const CountryProfile& profile, double performance_ratio,
                         double panel_lifetime_years) {
    if (power_density_w_per_m2 <= 0.0 || performance_ratio <= 0.0)
        throw ValidationError("harmonize_per_kwh: power density and performance ratio must be positive");
    if (profile.annual_insolation_kwh_m2_yr <= 0.0 || panel_lifetime_years <= 0.0)
        throw ValidationError("harmonize_per_kwh: insolation and lifetime must be positive");
    const double eta_module = power_density_w_per_m2 / 1000.0;
    const double kwh_per_m2 = profile.annual_insolation_kwh_m2_yr * performance_ratio * eta_module *
                              panel_lifetime_years;
    return i_p_per_m2 / kwh_per_m2;
}

} // namespace vipv
