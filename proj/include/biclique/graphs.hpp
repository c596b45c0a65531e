#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "biclique/bits.hpp"
#include "biclique/errors.hpp"

namespace biclique {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Undirected graph without loops or parallel edges, stored as symmetric bit rows.
class SimpleGraph {
  public:
    SimpleGraph() = default;
    explicit SimpleGraph(std::size_t n) : adj_(n, BitRow(n)) {}

    std::size_t size() const noexcept { return adj_.size(); }

    /// Returns false if the edge was already present.
    bool add_edge(Vertex u, Vertex v) {
        check(u);
        check(v);
        if (u == v) throw ValidationError("SimpleGraph: self-loop at vertex " + std::to_string(u));
        if (adj_[u].test(v)) return false;
        adj_[u].set(v);
        adj_[v].set(u);
        ++edges_;
        return true;
    }

    bool has_edge(Vertex u, Vertex v) const {
        check(u);
        check(v);
        return adj_[u].test(v);
    }

    const BitRow& neighbors(Vertex v) const {
        check(v);
        return adj_[v];
    }

    std::size_t edge_count() const noexcept { return edges_; }

    /// Edges (u, v) with u < v, lexicographically sorted.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edges_);
        for (Vertex u = 0; u < size(); ++u)
            adj_[u].for_each_set([&](std::size_t v) {
                if (u < v) out.emplace_back(u, v);
            });
        return out;
    }

    friend bool operator==(const SimpleGraph&, const SimpleGraph&) = default;

  private:
    void check(Vertex v) const {
        if (v >= size())
            throw std::out_of_range("SimpleGraph: vertex " + std::to_string(v) + " out of range [0, " +
                                    std::to_string(size()) + ")");
    }

    std::vector<BitRow> adj_;
    std::size_t edges_ = 0;
};

/// Bipartite graph A ∪ B with one bit row (over B) per left vertex.
class BipartiteGraph {
  public:
    BipartiteGraph() = default;
    BipartiteGraph(std::size_t left_size, std::size_t right_size)
        : right_size_(right_size), rows_(left_size, BitRow(right_size)) {}

    std::size_t left_size() const noexcept { return rows_.size(); }
    std::size_t right_size() const noexcept { return right_size_; }

    void add_edge(Vertex l, Vertex r) {
        check(l, r);
        rows_[l].set(r);
    }
    bool has_edge(Vertex l, Vertex r) const {
        check(l, r);
        return rows_[l].test(r);
    }

    const BitRow& row(Vertex l) const {
        check(l, 0, true);
        return rows_[l];
    }
    std::span<const BitRow> rows() const noexcept { return rows_; }

    /// Appends a left vertex with the given row.
    Vertex add_left(BitRow row) {
        if (row.size() != right_size_) throw ValidationError("BipartiteGraph: row width != right_size");
        rows_.push_back(std::move(row));
        return rows_.size() - 1;
    }

    std::size_t edge_count() const noexcept {
        std::size_t c = 0;
        for (const auto& r : rows_) c += r.count();
        return c;
    }

    /// Edges (l, r) sorted by l then r.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (Vertex l = 0; l < rows_.size(); ++l) rows_[l].for_each_set([&](std::size_t r) { out.emplace_back(l, r); });
        return out;
    }

    friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

  private:
    void check(Vertex l, Vertex r, bool left_only = false) const {
        if (l >= rows_.size())
            throw std::out_of_range("BipartiteGraph: left vertex " + std::to_string(l) + " out of range [0, " +
                                    std::to_string(rows_.size()) + ")");
        if (!left_only && r >= right_size_)
            throw std::out_of_range("BipartiteGraph: right vertex " + std::to_string(r) + " out of range [0, " +
                                    std::to_string(right_size_) + ")");
    }

    std::size_t right_size_ = 0;
    std::vector<BitRow> rows_;
};

/// A bipartite graph whose left side is split into blocks V_1..V_n (stored 0-based).
/// Blocks are disjoint, nonempty, and cover the left side.
class PartitionedBipartite {
  public:
    PartitionedBipartite() = default;
    PartitionedBipartite(BipartiteGraph graph, std::vector<std::vector<Vertex>> blocks,
                         nlohmann::json metadata = nlohmann::json::object())
        : graph_(std::move(graph)), blocks_(std::move(blocks)), metadata_(std::move(metadata)),
          block_of_(graph_.left_size(), npos) {
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            if (blocks_[b].empty()) throw ValidationError("partition: block " + std::to_string(b) + " is empty");
            for (auto v : blocks_[b]) {
                if (v >= graph_.left_size())
                    throw ValidationError("partition: vertex " + std::to_string(v) + " in block " + std::to_string(b) +
                                          " is not a left vertex");
                if (block_of_[v] != npos)
                    throw ValidationError("partition: vertex " + std::to_string(v) + " appears in blocks " +
                                          std::to_string(block_of_[v]) + " and " + std::to_string(b));
                block_of_[v] = b;
            }
        }
        for (Vertex v = 0; v < block_of_.size(); ++v)
            if (block_of_[v] == npos)
                throw ValidationError("partition: left vertex " + std::to_string(v) + " is in no block");
    }

    const BipartiteGraph& graph() const noexcept { return graph_; }
    const std::vector<std::vector<Vertex>>& blocks() const noexcept { return blocks_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    std::size_t block_of(Vertex v) const { return block_of_.at(v); }
    const nlohmann::json& metadata() const noexcept { return metadata_; }
    nlohmann::json& metadata() noexcept { return metadata_; }

    friend bool operator==(const PartitionedBipartite& a, const PartitionedBipartite& b) {
        return a.graph_ == b.graph_ && a.blocks_ == b.blocks_ && a.metadata_ == b.metadata_;
    }

  private:
    BipartiteGraph graph_;
    std::vector<std::vector<Vertex>> blocks_;
    nlohmann::json metadata_;
    std::vector<std::size_t> block_of_;
};

/// Left and right vertex sets; a biclique witness when every pair is an edge.
struct Witness {
    std::vector<Vertex> left;
    std::vector<Vertex> right;
    friend bool operator==(const Witness&, const Witness&) = default;
};

/// Γ(S) = ∩_{v ∈ S} N(v). Γ(∅) is left undefined and rejected.
inline BitRow common_neighbors(const BipartiteGraph& g, std::span<const Vertex> left_set) {
    if (left_set.empty()) throw std::invalid_argument("common_neighbors: left set must be nonempty");
    BitRow acc = g.row(left_set[0]);
    for (auto v : left_set.subspan(1)) acc &= g.row(v);
    return acc;
}

inline bool is_biclique(const BipartiteGraph& g, const Witness& w) {
    for (auto l : w.left)
        for (auto r : w.right)
            if (!g.has_edge(l, r)) return false;
    return true;
}

/// Swaps the two sides.
inline BipartiteGraph transpose(const BipartiteGraph& g) {
    BipartiteGraph out(g.right_size(), g.left_size());
    for (Vertex l = 0; l < g.left_size(); ++l) g.row(l).for_each_set([&](std::size_t r) { out.add_edge(r, l); });
    return out;
}

/// Same sides, complemented edge set.
inline BipartiteGraph bipartite_complement(const BipartiteGraph& g) {
    BipartiteGraph out(g.left_size(), g.right_size());
    for (Vertex l = 0; l < g.left_size(); ++l)
        for (Vertex r = 0; r < g.right_size(); ++r)
            if (!g.has_edge(l, r)) out.add_edge(l, r);
    return out;
}

/// Induced subgraph on the given left vertices (in the given order), all right vertices kept.
inline BipartiteGraph left_subgraph(const BipartiteGraph& g, std::span<const Vertex> left) {
    BipartiteGraph out(0, g.right_size());
    for (auto v : left) out.add_left(g.row(v));
    return out;
}

} // namespace biclique
