#pragma once

// Biclique as a constraint satisfaction problem with cardinality constraints.
//
// Variables are the vertices of a bipartite graph (left 0..nL-1, then right
// nL..nL+nR-1) over D = {0, 1, 2}. Each edge (l, r) contributes the constraint
// (a(l), a(r)) ∈ R = {(0,0), (1,0), (0,2)}. A solution takes value 1 exactly k
// times and value 2 exactly k times. With side domains (left {0,1}, right
// {0,2}) solutions correspond to K_{k,k} in the bipartite complement.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "biclique/graphs.hpp"

namespace biclique::ccsp {

using Value = std::uint8_t;
using Relation = std::vector<std::pair<Value, Value>>;

inline const Relation& edge_relation() {
    static const Relation r{{0, 0}, {1, 0}, {0, 2}};
    return r;
}

struct Constraint {
    std::pair<std::size_t, std::size_t> scope;
    Relation relation;
};

struct CcspInstance {
    std::size_t left_size = 0;
    std::size_t right_size = 0;
    std::vector<Constraint> constraints;
    /// Allowed values per variable, as a bit mask over D.
    std::vector<std::uint8_t> domains;
    std::size_t ones = 0;
    std::size_t twos = 0;

    std::size_t variables() const noexcept { return domains.size(); }
};

/// `side_domains = false` gives the bare encoding with every variable ranging over D.
inline CcspInstance encode_ccsp(const BipartiteGraph& g, std::size_t k, bool side_domains = true) {
    CcspInstance c;
    c.left_size = g.left_size();
    c.right_size = g.right_size();
    c.ones = c.twos = k;
    c.domains.assign(g.left_size(), side_domains ? 0b011 : 0b111);
    c.domains.resize(g.left_size() + g.right_size(), side_domains ? 0b101 : 0b111);
    for (auto [l, r] : g.edges()) c.constraints.push_back({{l, g.left_size() + r}, edge_relation()});
    return c;
}

inline bool satisfies(const CcspInstance& c, const std::vector<Value>& a) {
    if (a.size() != c.variables()) return false;
    std::size_t n1 = 0, n2 = 0;
    for (std::size_t v = 0; v < a.size(); ++v) {
        if (a[v] > 2 || !((c.domains[v] >> a[v]) & 1)) return false;
        n1 += a[v] == 1;
        n2 += a[v] == 2;
    }
    if (n1 != c.ones || n2 != c.twos) return false;
    for (const auto& con : c.constraints) {
        const std::pair<Value, Value> pr{a[con.scope.first], a[con.scope.second]};
        if (std::find(con.relation.begin(), con.relation.end(), pr) == con.relation.end()) return false;
    }
    return true;
}

/// Enumerates placements of the k ones, then the k twos, in lexicographic order
/// of position sets; returns the first satisfying assignment.
inline std::optional<std::vector<Value>> solve_brute_force(const CcspInstance& c) {
    const std::size_t n = c.variables();
    if (c.ones + c.twos > n) return std::nullopt;
    std::vector<Value> a(n, 0);
    std::optional<std::vector<Value>> found;

    auto place = [&](auto&& self, Value val, std::size_t need, std::size_t from) -> bool {
        if (need == 0) {
            if (val == 1) return self(self, 2, c.twos, 0);
            if (satisfies(c, a)) {
                found = a;
                return true;
            }
            return false;
        }
        for (std::size_t v = from; v + need <= n; ++v) {
            if (a[v] != 0 || !((c.domains[v] >> val) & 1)) continue;
            a[v] = val;
            if (self(self, val, need - 1, v + 1)) return true;
            a[v] = 0;
        }
        return false;
    };
    place(place, 1, c.ones, 0);
    return found;
}

inline nlohmann::json to_json(const CcspInstance& c) {
    nlohmann::json cons = nlohmann::json::array();
    for (const auto& con : c.constraints) {
        nlohmann::json rel = nlohmann::json::array();
        for (auto [x, y] : con.relation) rel.push_back({x, y});
        cons.push_back({{"scope", {con.scope.first, con.scope.second}}, {"relation", rel}});
    }
    nlohmann::json doms = nlohmann::json::array();
    for (auto m : c.domains) {
        nlohmann::json d = nlohmann::json::array();
        for (Value v = 0; v < 3; ++v)
            if ((m >> v) & 1) d.push_back(v);
        doms.push_back(d);
    }
    return {{"left_size", c.left_size},
            {"right_size", c.right_size},
            {"domain", {0, 1, 2}},
            {"variable_domains", doms},
            {"constraints", cons},
            {"cardinality", {{"1", c.ones}, {"2", c.twos}}}};
}

} // namespace biclique::ccsp
