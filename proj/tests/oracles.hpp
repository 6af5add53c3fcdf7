#pragma once

// Independent reference implementations used to cross-check the library.
// These deliberately avoid the production code paths: the graph oracles use
// plain propagation / power series instead of a matrix factorization.

#include "vipv/inventory.hpp"
#include "vipv/lca.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracles {

inline std::string node_name(int i) { return "a" + std::to_string(i); }

/// Random acyclic graph: node j may only consume nodes with larger index,
/// so ascending index order is a reverse-topological order.
inline vipv::ProcessGraph random_acyclic(std::mt19937& rng, int max_nodes = 20) {
    std::uniform_int_distribution<int> nn(2, max_nodes);
    std::uniform_real_distribution<double> amt(0.0, 2.5);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int n = nn(rng);
    vipv::ProcessGraph g;
    for (int i = 0; i < n; ++i) {
        vipv::Activity a;
        a.id = node_name(i);
        a.name = a.id;
        a.unit = "kg";
        a.is_root = (i == 0);
        for (int j = i + 1; j < n; ++j)
            if (coin(rng) < 0.3) a.technosphere_inputs.push_back({node_name(j), amt(rng), "kg"});
        g.activities[a.id] = a;
    }
    g.root_id = node_name(0);
    return g;
}

/// Random cyclic graph with column sums < 0.9 so the Leontief series converges.
inline vipv::ProcessGraph random_cyclic(std::mt19937& rng, int max_nodes = 12) {
    std::uniform_int_distribution<int> nn(2, max_nodes);
    std::uniform_real_distribution<double> amt(0.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int n = nn(rng);
    vipv::ProcessGraph g;
    for (int j = 0; j < n; ++j) {
        vipv::Activity a;
        a.id = node_name(j);
        a.name = a.id;
        a.unit = "kg";
        a.is_root = (j == 0);
        double col = 0.0;
        std::vector<std::pair<int, double>> raw;
        for (int i = 0; i < n; ++i)
            if (coin(rng) < 0.4) {
                double v = amt(rng);
                raw.emplace_back(i, v);
                col += v;
            }
        const double scale = col > 0.0 ? 0.85 * coin(rng) / col : 0.0;
        for (auto& [i, v] : raw)
            a.technosphere_inputs.push_back({node_name(i), v * scale, "kg"});
        g.activities[a.id] = a;
    }
    g.root_id = node_name(0);
    return g;
}

/// Back-substitution for acyclic graphs: push demand down the supply chain.
inline std::map<std::string, double> topo_solve(const vipv::ProcessGraph& g,
                                                const std::map<std::string, double>& demand) {
    const int n = static_cast<int>(g.activities.size());
    std::map<std::string, double> x;
    for (const auto& [id, a] : g.activities) x[id] = 0.0;
    for (const auto& [id, amt] : demand) x[id] += amt;
    for (int j = 0; j < n; ++j) {
        const auto& a = g.activities.at(node_name(j));
        for (const auto& in : a.technosphere_inputs) x[in.activity_id] += in.amount * x[a.id];
    }
    return x;
}

/// Truncated Neumann series x = sum_k A^k f.
inline std::map<std::string, double> series_solve(const vipv::ProcessGraph& g,
                                                  const std::map<std::string, double>& demand,
                                                  int max_terms = 600) {
    std::map<std::string, double> x, term;
    for (const auto& [id, a] : g.activities) x[id] = term[id] = 0.0;
    for (const auto& [id, amt] : demand) x[id] = term[id] = amt;
    for (int k = 0; k < max_terms; ++k) {
        std::map<std::string, double> next;
        for (const auto& [id, a] : g.activities) next[id] = 0.0;
        double norm = 0.0;
        for (const auto& [id, a] : g.activities)
            for (const auto& in : a.technosphere_inputs) next[in.activity_id] += in.amount * term[id];
        for (auto& [id, v] : next) {
            x[id] += v;
            norm = std::max(norm, std::abs(v));
        }
        term = std::move(next);
        if (norm < 1e-15) break;
    }
    return x;
}

} // namespace oracles
