#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>
#include <unistd.h>
#include <random>
#include <sstream>

#include "biclique/graph_io.hpp"
#include "biclique/graphs.hpp"
#include "biclique/paley.hpp"
#include "oracles.hpp"

using namespace biclique;

namespace {

BipartiteGraph complete(std::size_t a, std::size_t b) {
    BipartiteGraph g(a, b);
    for (std::size_t l = 0; l < a; ++l)
        for (std::size_t r = 0; r < b; ++r) g.add_edge(l, r);
    return g;
}

std::filesystem::path tmp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("biclique_test_" + std::to_string(::getpid()) + "_" + name);
}

} // namespace

TEST(BitRow, BasicOps) {
    BitRow a(130), b(130);
    a.set(0);
    a.set(64);
    a.set(129);
    b.set(64);
    b.set(100);
    EXPECT_EQ(a.count(), 3u);
    EXPECT_EQ(a.and_count(b), 1u);
    EXPECT_EQ((a & b).indices(), (std::vector<std::size_t>{64}));
    BitRow c(130);
    EXPECT_EQ(c.assign_and(a, b), 1u);
    EXPECT_TRUE(c.is_subset_of(a));
    c.set_all();
    EXPECT_EQ(c.count(), 130u);
    EXPECT_EQ(a.first_indices(2), (std::vector<std::size_t>{0, 64}));
}

TEST(SimpleGraph, Invariants) {
    SimpleGraph g(3);
    EXPECT_TRUE(g.add_edge(0, 1));
    EXPECT_FALSE(g.add_edge(1, 0));
    EXPECT_THROW(g.add_edge(2, 2), ValidationError);
    EXPECT_THROW(g.add_edge(0, 3), std::out_of_range);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}}));
}

TEST(CommonNeighbors, KnownCases) {
    auto k33 = complete(3, 3);
    std::vector<Vertex> all{0, 1, 2};
    EXPECT_EQ(common_neighbors(k33, all).indices(), all);

    BipartiteGraph empty(3, 3);
    EXPECT_TRUE(common_neighbors(empty, std::vector<Vertex>{0, 2}).none());

    EXPECT_THROW(common_neighbors(k33, std::vector<Vertex>{}), std::invalid_argument);
}

TEST(CommonNeighbors, PaleyG73ElementTwo) {
    // Vertex i is g^i; translate elements to vertices and back.
    auto ctx = field::FieldCtx::of_order(7);
    auto g = paley::build_paley(ctx, 3);
    const Vertex v = paley::vertex_of(ctx, field::Elem{2});
    std::vector<std::uint32_t> elems;
    for (auto r : common_neighbors(g, std::vector<Vertex>{v}).indices()) elems.push_back(paley::element_of(ctx, r).code);
    std::sort(elems.begin(), elems.end());
    EXPECT_EQ(elems, (std::vector<std::uint32_t>{4, 6}));
}

TEST(CommonNeighbors, SingletonIsRowAndAntitone) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = oracle::random_bipartite(12, 20, 0.6, rng);
        for (Vertex v = 0; v < 12; ++v) EXPECT_EQ(common_neighbors(g, std::vector<Vertex>{v}), g.row(v));
        std::vector<Vertex> perm(12);
        std::iota(perm.begin(), perm.end(), Vertex{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t a = 1; a < 12; ++a) {
            std::span<const Vertex> small(perm.data(), a), big(perm.data(), a + 1);
            EXPECT_TRUE(common_neighbors(g, big).is_subset_of(common_neighbors(g, small)));
            std::vector<Vertex> sv(small.begin(), small.end());
            EXPECT_EQ(common_neighbors(g, small).indices(), oracle::common(g, sv));
        }
    }
}

TEST(Partition, RejectsInvalidBlocks) {
    BipartiteGraph g(4, 2);
    EXPECT_NO_THROW(PartitionedBipartite(g, {{0, 1}, {2, 3}}));
    EXPECT_THROW(PartitionedBipartite(g, {{0, 1}, {1, 2, 3}}), ValidationError); // overlap
    EXPECT_THROW(PartitionedBipartite(g, {{0, 1}, {2}}), ValidationError);        // 3 uncovered
    EXPECT_THROW(PartitionedBipartite(g, {{0, 1, 2, 3}, {}}), ValidationError);   // empty block
    EXPECT_THROW(PartitionedBipartite(g, {{0, 1, 2, 3, 4}}), ValidationError);    // not a left vertex
}

TEST(EdgeList, TriangleParses) {
    std::istringstream in("3\n0 1\n1 2\n0 2\n");
    auto g = std::get<SimpleGraph>(read_edge_list(in));
    EXPECT_EQ(g.size(), 3u);
    EXPECT_EQ(g.edge_count(), 3u);
}

TEST(EdgeList, ErrorsCarryLineNumbers) {
    auto expect_line = [](const std::string& text, std::size_t line, const std::string& fragment) {
        std::istringstream in(text);
        try {
            read_edge_list(in);
            ADD_FAILURE() << "no error for: " << text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), line) << e.what();
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
        }
    };
    expect_line("3\n0 5\n", 2, "out of range");
    expect_line("3\n0 1\n0 x\n", 3, "expected two");
    expect_line("3\n# comment\n\n1 1\n", 4, "self-loop");
    expect_line("2 2\n0 1\n0 1\n", 3, "duplicate");
    expect_line("a b c\n", 1, "header");
    expect_line("2 2\n1 2\n", 2, "out of range");
}

TEST(Io, RoundTripAllKinds) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto sg = oracle::random_simple(9, 0.4, rng);
        auto bg = oracle::random_bipartite(7, 11, 0.3, rng);
        PartitionedBipartite pg(bg, {{0, 3}, {1, 2, 4}, {5, 6}}, {{"seed", trial}});
        for (auto ext : {".txt", ".json"}) {
            auto ps = tmp_file(std::string("s") + ext), pb = tmp_file(std::string("b") + ext);
            write_graph(ps, sg);
            write_graph(pb, bg);
            EXPECT_EQ(std::get<SimpleGraph>(read_graph(ps)), sg);
            EXPECT_EQ(std::get<BipartiteGraph>(read_graph(pb)), bg);
            std::filesystem::remove(ps);
            std::filesystem::remove(pb);
        }
        auto pp = tmp_file("p.json");
        write_graph(pp, pg);
        EXPECT_EQ(std::get<PartitionedBipartite>(read_graph(pp)), pg);
        std::filesystem::remove(pp);
    }
}

TEST(Io, PartitionNeedsJson) {
    PartitionedBipartite pg(BipartiteGraph(1, 1), {{0}});
    std::ostringstream out;
    EXPECT_THROW(write_graph(out, pg, GraphFormat::edge_list), std::invalid_argument);
}

TEST(Io, JsonValidation) {
    auto bad_block = nlohmann::json::parse(
        R"({"kind":"partitioned_bipartite","left_size":2,"right_size":1,"edges":[],"blocks":[[0],[0,1]]})");
    EXPECT_THROW(graph_from_json(bad_block), ValidationError);
    auto bad_edge = nlohmann::json::parse(R"({"kind":"simple","n":3,"edges":[[0,5]]})");
    EXPECT_THROW(graph_from_json(bad_edge), ValidationError);
    EXPECT_THROW(graph_from_json(nlohmann::json::parse(R"({"kind":"hyper"})")), ValidationError);
    try {
        parse_json_text("{\n\"kind\":\n}");
        ADD_FAILURE();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Transforms, TransposeAndComplement) {
    std::mt19937_64 rng(9);
    auto g = oracle::random_bipartite(5, 8, 0.5, rng);
    EXPECT_EQ(transpose(transpose(g)), g);
    auto c = bipartite_complement(g);
    EXPECT_EQ(c.edge_count() + g.edge_count(), 40u);
    for (Vertex l = 0; l < 5; ++l)
        for (Vertex r = 0; r < 8; ++r) EXPECT_NE(c.has_edge(l, r), g.has_edge(l, r));
}
