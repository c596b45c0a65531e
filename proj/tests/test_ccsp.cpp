#include <gtest/gtest.h>

#include <random>

#include "biclique/ccsp.hpp"
#include "biclique/verify.hpp"
#include "oracles.hpp"

using namespace biclique;
using namespace biclique::ccsp;

namespace {

/// Every assignment in D^n, checked directly against the definition.
bool naive_satisfiable(const BipartiteGraph& g, std::size_t k, bool side_domains) {
    const std::size_t nl = g.left_size(), n = nl + g.right_size();
    std::vector<Value> a(n, 0);
    while (true) {
        std::size_t ones = 0, twos = 0;
        bool ok = true;
        for (std::size_t v = 0; v < n; ++v) {
            ones += a[v] == 1;
            twos += a[v] == 2;
            if (side_domains && ((v < nl && a[v] == 2) || (v >= nl && a[v] == 1))) ok = false;
        }
        ok = ok && ones == k && twos == k;
        for (auto [l, r] : g.edges()) {
            const Value x = a[l], y = a[nl + r];
            ok = ok && ((x == 0 && y == 0) || (x == 1 && y == 0) || (x == 0 && y == 2));
        }
        if (ok) return true;
        std::size_t i = 0;
        while (i < n && ++a[i] == 3) a[i++] = 0;
        if (i == n) return false;
    }
}

BipartiteGraph from_bits(std::size_t nl, std::size_t nr, std::uint32_t mask) {
    BipartiteGraph g(nl, nr);
    for (std::size_t l = 0; l < nl; ++l)
        for (std::size_t r = 0; r < nr; ++r)
            if ((mask >> (l * nr + r)) & 1) g.add_edge(l, r);
    return g;
}

} // namespace

TEST(EncodeCcsp, Shape) {
    auto g = from_bits(2, 3, 0b100101);
    auto c = encode_ccsp(g, 2);
    EXPECT_EQ(c.constraints.size(), g.edge_count());
    EXPECT_EQ(c.variables(), 5u);
    EXPECT_EQ(c.ones, 2u);
    EXPECT_EQ(c.twos, 2u);
    for (const auto& con : c.constraints) {
        EXPECT_EQ(con.relation, edge_relation());
        EXPECT_LT(con.scope.first, 2u);
        EXPECT_GE(con.scope.second, 2u);
    }
    EXPECT_EQ(edge_relation(), (Relation{{0, 0}, {1, 0}, {0, 2}}));
    auto j = to_json(c);
    EXPECT_EQ(j["constraints"].size(), g.edge_count());
}

TEST(EncodeCcsp, KnownCases) {
    // Single edge, k = 1: the complement is empty, so no K_{1,1}.
    auto edge = from_bits(1, 1, 1);
    auto c = encode_ccsp(edge, 1);
    EXPECT_EQ(c.constraints.size(), 1u);
    EXPECT_FALSE(solve_brute_force(c));
    EXPECT_FALSE(verify::find_biclique(bipartite_complement(edge), 1, 1));

    // Edgeless on 2 + 3 vertices: no constraints, complement is complete.
    auto empty = encode_ccsp(BipartiteGraph(2, 3), 1);
    EXPECT_TRUE(empty.constraints.empty());
    auto sol = solve_brute_force(empty);
    ASSERT_TRUE(sol);
    EXPECT_TRUE(satisfies(empty, *sol));

    // Complete bipartite: complement edgeless.
    EXPECT_FALSE(solve_brute_force(encode_ccsp(from_bits(2, 2, 0b1111), 1)));
}

TEST(EncodeCcsp, BareEncodingNeedsSideDomains) {
    // No left vertices: the complement has no K_{1,1}, but with every variable
    // over D the two right vertices can take 1 and 2 with no constraint between them.
    BipartiteGraph g(0, 2);
    EXPECT_FALSE(verify::find_biclique(bipartite_complement(g), 1, 1));
    EXPECT_FALSE(solve_brute_force(encode_ccsp(g, 1)));
    EXPECT_TRUE(solve_brute_force(encode_ccsp(g, 1, false)));
    EXPECT_TRUE(naive_satisfiable(g, 1, false));
}

TEST(EncodeCcsp, SolverAgreesWithNaiveEnumeration) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 150; ++trial) {
        auto g = oracle::random_bipartite(1 + trial % 4, 1 + (trial / 4) % 4, 0.5, rng);
        for (std::size_t k = 0; k <= 2; ++k)
            for (bool side : {true, false}) {
                auto c = encode_ccsp(g, k, side);
                auto sol = solve_brute_force(c);
                ASSERT_EQ(sol.has_value(), naive_satisfiable(g, k, side));
                if (sol) {
                    EXPECT_TRUE(satisfies(c, *sol));
                }
            }
    }
}

TEST(EncodeCcsp, EquivalentToComplementBicliqueSmallExhaustive) {
    for (std::size_t nl = 0; nl <= 3; ++nl)
        for (std::size_t nr = 0; nr <= 3; ++nr)
            for (std::uint32_t mask = 0; mask < (1u << (nl * nr)); ++mask) {
                auto g = from_bits(nl, nr, mask);
                auto comp = bipartite_complement(g);
                for (std::size_t k = 1; k <= 2; ++k) {
                    auto sol = solve_brute_force(encode_ccsp(g, k));
                    ASSERT_EQ(sol.has_value(), oracle::has_biclique(comp, k, k)) << nl << "+" << nr << " mask " << mask;
                    if (!sol) continue;
                    // The ones pick the left side, the twos the right side of the witness.
                    std::vector<Vertex> left, right;
                    for (std::size_t v = 0; v < sol->size(); ++v) {
                        if ((*sol)[v] == 1) left.push_back(v);
                        if ((*sol)[v] == 2) right.push_back(v - nl);
                    }
                    EXPECT_TRUE(is_biclique(comp, Witness{left, right}));
                }
            }
}

TEST(Satisfies, RejectsMalformedAssignments) {
    auto c = encode_ccsp(BipartiteGraph(1, 1), 1);
    EXPECT_TRUE(satisfies(c, {1, 2}));
    EXPECT_FALSE(satisfies(c, {2, 1}));
    EXPECT_FALSE(satisfies(c, {1}));
    EXPECT_FALSE(satisfies(c, {3, 0}));
    EXPECT_FALSE(satisfies(c, {1, 0}));
}
