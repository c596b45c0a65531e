#include <gtest/gtest.h>

#include <random>
#include <set>

#include "biclique/reduce.hpp"
#include "oracles.hpp"

using namespace biclique;
using namespace biclique::reduce;

namespace {

SimpleGraph complete_graph(std::size_t n) {
    SimpleGraph g(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

SimpleGraph cycle(std::size_t n) {
    SimpleGraph g(n);
    for (Vertex u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
    return g;
}

BipartiteGraph complete_bip(std::size_t a, std::size_t b) {
    BipartiteGraph g(a, b);
    for (std::size_t l = 0; l < a; ++l)
        for (std::size_t r = 0; r < b; ++r) g.add_edge(l, r);
    return g;
}

/// Certified toy threshold graph shared by the gap tests.
const CertifiedThreshold& toy() {
    static const CertifiedThreshold t = find_toy_threshold(ToyOptions{}, 1);
    return t;
}

/// Brute force over C(n, 2) pairs: does G have an edge between the blocks?
std::size_t count_pairs(const SimpleGraph& g, const PartitionedBipartite& F) {
    std::size_t count = 0;
    const auto n = F.graph().left_size();
    for (Vertex u1 = 0; u1 < n; ++u1)
        for (Vertex u2 = u1 + 1; u2 < n; ++u2) {
            const auto a = F.block_of(u1), b = F.block_of(u2);
            if (a < g.size() && b < g.size() && a != b && g.has_edge(a, b)) ++count;
        }
    return count;
}

} // namespace

TEST(DoubleCover, KnownCases) {
    SimpleGraph e(2);
    e.add_edge(0, 1);
    auto b = bipartite_double_cover(e);
    EXPECT_EQ(b.edge_count(), 2u);
    EXPECT_TRUE(b.has_edge(0, 1));
    EXPECT_TRUE(b.has_edge(1, 0));

    auto k3 = bipartite_double_cover(complete_graph(3));
    EXPECT_EQ(k3.edge_count(), 6u);
    EXPECT_TRUE(verify::find_biclique(k3, 1, 2));
    EXPECT_FALSE(verify::find_biclique(k3, 2, 2));

    // K_{2,2} as a simple graph: {0,1} vs {2,3}.
    SimpleGraph kk(4);
    for (Vertex u : {0u, 1u})
        for (Vertex v : {2u, 3u}) kk.add_edge(u, v);
    EXPECT_TRUE(verify::find_biclique(bipartite_double_cover(kk), 2, 2));
}

TEST(DoubleCover, PreservesBicliqueOracle) {
    // K_{k,k} in G (as two disjoint vertex sets) ⟺ K_{k,k} in B(G).
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = oracle::random_simple(2 + trial % 11, 0.6, rng);
        auto b = bipartite_double_cover(g);
        for (std::size_t k = 1; k <= 3; ++k) {
            bool in_g = false;
            oracle::for_each_subset(g.size(), k, [&](const auto& a) {
                std::vector<std::size_t> common;
                for (Vertex v = 0; v < g.size(); ++v) {
                    bool all = true;
                    for (auto u : a) all = all && g.has_edge(u, v);
                    if (all) common.push_back(v);
                }
                return in_g = common.size() >= k;
            });
            EXPECT_EQ(in_g, oracle::has_biclique(b, k, k));
        }
    }
}

TEST(Balance, KnownCases) {
    auto out = balance_biclique(complete_bip(1, 3), 1, 3);
    EXPECT_EQ(out.left_size(), 3u);
    EXPECT_TRUE(verify::find_biclique(out, 3, 3));

    std::mt19937_64 rng(2);
    auto g = oracle::random_bipartite(4, 5, 0.5, rng);
    EXPECT_EQ(balance_biclique(g, 3, 3), g);

    auto edgeless = balance_biclique(BipartiteGraph(3, 4), 1, 2);
    EXPECT_EQ(edgeless.left_size(), 4u);
    EXPECT_EQ(edgeless.row(3).count(), 4u);
    EXPECT_FALSE(verify::find_biclique(edgeless, 2, 2));
    EXPECT_THROW(balance_biclique(g, 3, 2), std::invalid_argument);
}

TEST(Balance, PreservesBicliqueOracle) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = oracle::random_bipartite(1 + trial % 8, 2 + trial % 11, 0.6, rng);
        for (std::size_t s = 1; s <= 3; ++s)
            for (std::size_t t = s; t <= 4; ++t)
                EXPECT_EQ(oracle::has_biclique(g, s, t), oracle::has_biclique(balance_biclique(g, s, t), t, t));
    }
}

TEST(PadClique, KnownCases) {
    std::mt19937_64 rng(3);
    auto g = oracle::random_simple(5, 0.5, rng);
    EXPECT_EQ(pad_clique_instance(g, 3, 3), g);

    auto p = pad_clique_instance(SimpleGraph(3), 1, 3);
    EXPECT_EQ(p.size(), 5u);
    EXPECT_TRUE(verify::find_clique(p, 3));

    auto c4 = pad_clique_instance(cycle(4), 3, 5);
    EXPECT_EQ(c4.size(), 6u);
    EXPECT_FALSE(verify::find_clique(c4, 5));
    EXPECT_TRUE(verify::find_clique(c4, 4));
    EXPECT_THROW(pad_clique_instance(g, 3, 2), std::invalid_argument);
}

TEST(PadClique, PreservesCliqueOracle) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = oracle::random_simple(3 + trial % 6, 0.5, rng);
        for (std::size_t k = 1; k <= 4; ++k)
            EXPECT_EQ(oracle::has_clique(g, k), oracle::has_clique(pad_clique_instance(g, k, k + trial % 3), k + trial % 3));
    }
}

TEST(ToyThreshold, IsCertifiedWithGap) {
    const auto& t = toy();
    EXPECT_EQ(t.graph.block_count(), 10u);
    EXPECT_TRUE(t.cert.holds());
    EXPECT_LT(t.cert.ell, t.cert.h);
    EXPECT_EQ(oracle::max_common(t.graph.graph(), 4), t.cert.max_common_over_k_plus_1);
    // Recomputing with a different job count gives the same graph.
    ToyOptions o;
    o.jobs = 3;
    EXPECT_EQ(find_toy_threshold(o, 1).graph, t.graph);
}

TEST(GapReduce, EdgelessGraph) {
    const auto& t = toy();
    GapParams gp{3, t.cert.ell, t.cert.h};
    auto out = gap_reduce(SimpleGraph(4), t.graph, gp, &t.cert);
    EXPECT_EQ(out.H.left_size(), 0u);
    EXPECT_EQ(out.H.right_size(), t.graph.graph().right_size());
    EXPECT_EQ(out.s_param, 3u);
    EXPECT_TRUE(out.gap);
}

TEST(GapReduce, TriangleHasRichTriple) {
    const auto& t = toy();
    GapParams gp{3, t.cert.ell, t.cert.h};
    auto out = gap_reduce(complete_graph(3), t.graph, gp, &t.cert);
    EXPECT_EQ(out.H.left_size(), 27u);
    auto w = verify::find_biclique(out.H, 3, t.cert.h);
    ASSERT_TRUE(w);
    // The triple stands for the three edges of the triangle.
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (auto e : w->left) {
        auto [u1, u2] = out.left_labels[e];
        edges.emplace(std::min(out.iota[u1], out.iota[u2]), std::max(out.iota[u1], out.iota[u2]));
    }
    EXPECT_EQ(edges.size(), 3u);
}

TEST(GapReduce, TriangleFreeStaysBelowEll) {
    const auto& t = toy();
    GapParams gp{3, t.cert.ell, t.cert.h};
    auto out = gap_reduce(cycle(5), t.graph, gp, &t.cert);
    EXPECT_EQ(out.H.left_size(), 45u);
    EXPECT_LE(verify::verify_t1(out.H, 2, SIZE_MAX).max_common, t.cert.ell);
    EXPECT_EQ(oracle::max_common(out.H, 3), verify::verify_t1(out.H, 2, SIZE_MAX).max_common);
}

TEST(GapReduce, LabelsAndRows) {
    const auto& t = toy();
    GapParams gp{3, t.cert.ell, t.cert.h};
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = oracle::random_simple(2 + trial % 9, 0.5, rng);
        auto out = gap_reduce(g, t.graph, gp, &t.cert);
        EXPECT_EQ(out.H.left_size(), count_pairs(g, t.graph));
        EXPECT_TRUE(std::is_sorted(out.left_labels.begin(), out.left_labels.end()));
        for (std::size_t e = 0; e < out.left_labels.size(); ++e) {
            auto [u1, u2] = out.left_labels[e];
            EXPECT_LT(u1, u2);
            EXPECT_TRUE(g.has_edge(out.iota[u1], out.iota[u2]));
            EXPECT_EQ(out.H.row(e), t.graph.graph().row(u1) & t.graph.graph().row(u2));
        }
    }
}

TEST(GapReduce, RejectsUncoveredThresholdGraph) {
    const auto& t = toy();
    GapParams gp{3, t.cert.ell, t.cert.h};
    EXPECT_THROW(gap_reduce(SimpleGraph(11), t.graph, gp, &t.cert), ValidationError);
    EXPECT_THROW(gap_reduce(SimpleGraph(3), t.graph, gp, nullptr), ValidationError);
    GapParams greedy{3, t.cert.ell - 1, t.cert.h};
    EXPECT_THROW(gap_reduce(SimpleGraph(3), t.graph, greedy, &t.cert), ValidationError);
    GapParams wrong_k{4, t.cert.ell, t.cert.h};
    EXPECT_THROW(gap_reduce(SimpleGraph(3), t.graph, wrong_k, &t.cert), ValidationError);
    GapParams trusted{3, t.cert.ell, t.cert.h, true};
    EXPECT_NO_THROW(gap_reduce(SimpleGraph(3), t.graph, trusted, nullptr));
    EXPECT_THROW(gap_reduce(SimpleGraph(3), t.graph, GapParams{1, 0, 1, true}), std::invalid_argument);
}

TEST(GapReduce, AgreesWithCliqueOracleOnSmallGraphs) {
    const auto& t = toy();
    GapParams gp{3, t.cert.ell, t.cert.h};
    for (std::size_t n = 3; n <= 5; ++n)
        for (const auto& g : oracle::nonisomorphic_graphs(n)) {
            auto out = gap_reduce(g, t.graph, gp, &t.cert);
            const bool rich = verify::find_biclique(out.H, 3, t.cert.h).has_value();
            EXPECT_EQ(rich, oracle::has_clique(g, 3));
            if (!rich) {
                EXPECT_TRUE(verify::verify_t1(out.H, 2, t.cert.ell).holds);
            }
        }
}

TEST(Pipeline, ToyTriangleWithIsolatedVertices) {
    SimpleGraph g(5);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    PipelineOptions o;
    o.seed = 7;
    auto res = full_pipeline(g, 3, o);
    EXPECT_TRUE(res.reduction.gap);
    EXPECT_EQ(res.graph.left_size() >= res.k2 && res.graph.right_size() >= res.k2, true);
    EXPECT_TRUE(verify::find_biclique(res.graph, res.k2, res.k2));
    EXPECT_EQ(res.provenance["mode"], "toy");
    EXPECT_EQ(res.provenance["k2"], res.k2);
    EXPECT_TRUE(res.provenance.contains("certificate"));
}

TEST(Pipeline, ToyFiveCycleHasNoWitness) {
    PipelineOptions o;
    o.seed = 7;
    auto res = full_pipeline(cycle(5), 3, o);
    EXPECT_TRUE(res.reduction.gap);
    EXPECT_FALSE(verify::find_biclique(res.graph, res.k2, res.k2));
}

TEST(Pipeline, ToyIsSeedDeterministic) {
    PipelineOptions o;
    o.seed = 11;
    auto a = full_pipeline(cycle(4), 3, o);
    o.jobs = 3;
    auto b = full_pipeline(cycle(4), 3, o);
    EXPECT_EQ(a.graph, b.graph);
    EXPECT_EQ(a.provenance, b.provenance);
}

TEST(Pipeline, ExplicitTwoVerticesKFive) {
    SimpleGraph g(2);
    g.add_edge(0, 1);
    PipelineOptions o;
    o.mode = Mode::explicit_paley;
    o.jobs = 2;
    auto res = full_pipeline(g, 5, o);
    EXPECT_EQ(res.provenance["recipe"]["q"], 729);
    EXPECT_EQ(res.provenance["k_padded"], 5);
    EXPECT_EQ(res.reduction.ell, 720u);
    EXPECT_EQ(res.reduction.h, 3u);
    EXPECT_FALSE(res.reduction.gap);
    EXPECT_EQ(res.k2, 721u);
    EXPECT_EQ(res.provenance["t1_basis"], "max left degree <= ell");
    // G has no K_5; G' has no K_{721,721} since no left vertex has 721 neighbours.
    EXPECT_FALSE(verify::find_biclique(res.graph, res.k2, res.k2));
}

TEST(Pipeline, StageErrorsKeepCategory) {
    PipelineOptions o;
    o.attempts = 1;
    o.toy.p = 0.0;
    try {
        full_pipeline(cycle(4), 3, o);
        FAIL();
    } catch (const ResourceError& e) {
        EXPECT_NE(std::string(e.what()).find("pipeline stage 'threshold'"), std::string::npos);
    }
    PipelineOptions ex;
    ex.mode = Mode::explicit_paley;
    ex.max_q = 100;
    EXPECT_THROW(full_pipeline(cycle(4), 3, ex), ResourceError);
    EXPECT_THROW(full_pipeline(cycle(4), 1, o), std::invalid_argument);
    EXPECT_EQ(parse_mode("random"), Mode::random);
    EXPECT_THROW(parse_mode("magic"), std::invalid_argument);
}
