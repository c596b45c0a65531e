#pragma once

// Paley-type bipartite graphs G(q, d) and the explicit threshold-graph recipe.
//
// Vertex labelling: on both sides vertex i is the element g^i, so a vertex
// index is the discrete log of its element.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "biclique/detail/search.hpp"
#include "biclique/field.hpp"
#include "biclique/graphs.hpp"

namespace biclique::paley {

using field::Elem;
using field::FieldCtx;

inline Vertex vertex_of(const FieldCtx& ctx, Elem x) { return ctx.dlog(x); }
inline Elem element_of(const FieldCtx& ctx, Vertex v) { return ctx.exp(v); }

struct PaleyParams {
    std::uint32_t q = 0;
    std::uint32_t d = 0;
    std::uint32_t s = 0;
    std::uint32_t r = 0;
};

/// G(q, d): x ~ y iff x + y is a nonzero d-th power, i.e. dlog(x + y) ≡ 0 (mod d).
inline BipartiteGraph build_paley(const FieldCtx& ctx, std::uint32_t d, std::size_t jobs = 1) {
    field::require_divides_group_order(ctx, d, "build_paley");
    const std::uint32_t n = ctx.group_order();
    std::vector<BitRow> rows(n, BitRow(n));
    jobs = std::max<std::size_t>(1, std::min<std::size_t>(jobs, n));
    detail::run_workers(jobs, [&](std::size_t w) {
        for (std::uint32_t i = static_cast<std::uint32_t>(w); i < n; i += static_cast<std::uint32_t>(jobs)) {
            const Elem x = ctx.exp(i);
            for (std::uint32_t j = 0; j < n; ++j) {
                const Elem sum = ctx.add(x, ctx.exp(j));
                if (sum.code != 0 && ctx.dlog(sum) % d == 0) rows[i].set(j);
            }
        }
    });
    BipartiteGraph g(0, n);
    for (auto& r : rows) g.add_left(std::move(r));
    return g;
}

/// Splits the left side of G(q, ·) into V_1..V_s, V_i = {g^{i+js} : j = 1..r}
/// (stored 0-based, members in the order j = 1..r).
inline PartitionedBipartite partition_blocks(const FieldCtx& ctx, BipartiteGraph g, std::uint32_t s,
                                             nlohmann::json metadata = nlohmann::json::object()) {
    field::require_divides_group_order(ctx, s, "partition_blocks");
    if (g.left_size() != ctx.group_order())
        throw ValidationError("partition_blocks: graph left side has " + std::to_string(g.left_size()) +
                              " vertices, expected q-1 = " + std::to_string(ctx.group_order()));
    std::vector<std::vector<Vertex>> blocks(s);
    for (std::uint32_t i = 1; i <= s; ++i)
        for (auto x : field::coset_block(ctx, s, i)) blocks[i - 1].push_back(ctx.dlog(x));
    metadata["field"] = field::to_json(ctx);
    metadata["s"] = s;
    metadata["r"] = ctx.group_order() / s;
    return PartitionedBipartite(std::move(g), std::move(blocks), std::move(metadata));
}

/// Smallest k' >= k with k' ≡ 5 (mod 6).
inline std::uint64_t pad_parameter(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("pad_parameter: k must be >= 1");
    return k + (11 - k % 6) % 6;
}

/// Parameters of the explicit construction for (n, k), k = 6·l_exp − 1.
struct ThresholdRecipe {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    std::uint32_t l_exp = 0;   ///< (k+1)/6
    std::uint64_t root = 0;    ///< ⌈(n+1)^{1/l_exp}⌉
    std::uint32_t p = 0;       ///< smallest prime >= root
    std::uint64_t q = 0;       ///< p^{k+1}
    std::uint32_t d = 0;       ///< p − 1
    std::uint64_t s = 0;       ///< p^{l_exp} − 1
    std::uint64_t r = 0;       ///< (q − 1)/s
    std::optional<std::uint64_t> ell_thr; ///< (k+1)!, nullopt if it overflows 64 bits
    std::uint64_t h = 0;       ///< ⌈(n+1)^{6/(k+1)}⌉, equal to root
    bool gap_guaranteed = false; ///< h > ℓ_thr

    nlohmann::json to_json() const {
        return {{"n", n},     {"k", k},         {"l_exp", l_exp}, {"root", root},
                {"p", p},     {"q", q},         {"d", d},         {"s", s},
                {"r", r},     {"ell_thr", ell_thr ? nlohmann::json(*ell_thr) : nlohmann::json(nullptr)},
                {"h", h},     {"gap_guaranteed", gap_guaranteed}};
    }
};

/// ⌈m^{1/e}⌉ by exact integer search.
inline std::uint64_t ceil_root(std::uint64_t m, std::uint32_t e) {
    std::uint64_t x = 1;
    while (true) {
        auto pw = field::checked_pow(x, e);
        if (!pw || *pw >= m) return x;
        ++x;
    }
}

inline std::optional<std::uint64_t> factorial(std::uint64_t m) {
    std::uint64_t f = 1;
    for (std::uint64_t i = 2; i <= m; ++i) {
        if (f > UINT64_MAX / i) return std::nullopt;
        f *= i;
    }
    return f;
}

/// Recipe arithmetic only; no field is built.
inline ThresholdRecipe threshold_recipe(std::uint64_t n, std::uint64_t k) {
    if (n == 0) throw std::invalid_argument("threshold_recipe: n must be >= 1");
    if (k == 0 || (k + 1) % 6 != 0)
        throw std::invalid_argument("threshold_recipe: k = " + std::to_string(k) + " must satisfy k ≡ 5 (mod 6)");
    ThresholdRecipe rc;
    rc.n = n;
    rc.k = k;
    rc.l_exp = static_cast<std::uint32_t>((k + 1) / 6);
    rc.root = ceil_root(n + 1, rc.l_exp);
    rc.p = static_cast<std::uint32_t>(field::bertrand_prime(rc.root));
    auto q = field::checked_pow(rc.p, static_cast<std::uint32_t>(k + 1));
    if (!q) throw ResourceError("threshold_recipe: q = " + std::to_string(rc.p) + "^" + std::to_string(k + 1) +
                                " overflows 64 bits");
    rc.q = *q;
    rc.d = rc.p - 1;
    rc.s = *field::checked_pow(rc.p, rc.l_exp) - 1;
    rc.r = (rc.q - 1) / rc.s;
    rc.ell_thr = factorial(k + 1);
    rc.h = rc.root;
    rc.gap_guaranteed = rc.ell_thr && rc.h > *rc.ell_thr;
    return rc;
}

struct ThresholdGraph {
    PartitionedBipartite graph;
    ThresholdRecipe recipe;
};

/// Builds G(p^{k+1}, p − 1) partitioned into s = p^{l_exp} − 1 blocks and keeps
/// the first n blocks. When s > n, the left side is restricted to those blocks
/// and renumbered in block order; metadata["left_dlogs"] records the original labels.
inline ThresholdGraph build_threshold_graph(std::uint64_t n, std::uint64_t k, std::uint64_t max_q = field::kDefaultMaxQ,
                                            std::size_t jobs = 1) {
    auto rc = threshold_recipe(n, k);
    if (rc.q > max_q)
        throw ResourceError("build_threshold_graph: q = " + std::to_string(rc.q) + " exceeds the field-size budget " +
                            std::to_string(max_q));
    if (rc.s < n)
        throw DomainError("build_threshold_graph: only " + std::to_string(rc.s) + " blocks for n = " + std::to_string(n));
    const auto ctx = FieldCtx::make(rc.p, static_cast<std::uint32_t>(k + 1), max_q);
    auto full = partition_blocks(ctx, build_paley(ctx, rc.d, jobs), static_cast<std::uint32_t>(rc.s));

    nlohmann::json meta = full.metadata();
    meta["construction"] = "paley";
    meta["d"] = rc.d;
    meta["recipe"] = rc.to_json();
    if (rc.s == n) return {PartitionedBipartite(full.graph(), full.blocks(), std::move(meta)), rc};

    BipartiteGraph g(0, full.graph().right_size());
    std::vector<std::vector<Vertex>> blocks(n);
    std::vector<Vertex> left_dlogs;
    for (std::size_t b = 0; b < n; ++b)
        for (auto v : full.blocks()[b]) {
            blocks[b].push_back(g.add_left(full.graph().row(v)));
            left_dlogs.push_back(v);
        }
    meta["left_dlogs"] = left_dlogs;
    return {PartitionedBipartite(std::move(g), std::move(blocks), std::move(meta)), rc};
}

} // namespace biclique::paley
