#pragma once

// k-Clique → gap biclique reduction and its supporting transformations.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "biclique/detail/search.hpp"
#include "biclique/graphs.hpp"
#include "biclique/paley.hpp"
#include "biclique/randgraph.hpp"
#include "biclique/verify.hpp"

namespace biclique::reduce {

/// Left = right = V(G); (u, v) is an edge iff uv ∈ E(G).
inline BipartiteGraph bipartite_double_cover(const SimpleGraph& g) {
    BipartiteGraph out(g.size(), g.size());
    for (auto [u, v] : g.edges()) {
        out.add_edge(u, v);
        out.add_edge(v, u);
    }
    return out;
}

/// Adds t − s left vertices adjacent to every right vertex, so that a K_{s,t}
/// (s on the left) becomes a K_{t,t}.
inline BipartiteGraph balance_biclique(const BipartiteGraph& g, std::size_t s, std::size_t t) {
    if (s > t)
        throw std::invalid_argument("balance_biclique: s = " + std::to_string(s) + " > t = " + std::to_string(t) +
                                    "; transpose the graph first");
    BipartiteGraph out = g;
    BitRow all(g.right_size());
    all.set_all();
    for (std::size_t i = s; i < t; ++i) out.add_left(all);
    return out;
}

/// Joins a new (k' − k)-clique to every vertex of g.
inline SimpleGraph pad_clique_instance(const SimpleGraph& g, std::size_t k, std::size_t k2) {
    if (k2 < k) throw std::invalid_argument("pad_clique_instance: k' = " + std::to_string(k2) + " < k = " + std::to_string(k));
    const std::size_t n = g.size(), m = n + (k2 - k);
    SimpleGraph out(m);
    for (auto [u, v] : g.edges()) out.add_edge(u, v);
    for (std::size_t w = n; w < m; ++w)
        for (std::size_t u = 0; u < w; ++u) out.add_edge(u, w);
    return out;
}

inline std::size_t choose2(std::size_t k) { return k * (k - (k > 0)) / 2; }

struct GapParams {
    std::size_t k = 0;
    std::size_t ell = 0;
    std::size_t h = 0;
    /// Accept F without a certificate.
    bool trusted = false;
};

struct ReductionOutput {
    BipartiteGraph H;
    /// Left vertex e of H ↦ its pair {u1 < u2} of F-left vertices.
    std::vector<std::pair<Vertex, Vertex>> left_labels;
    /// F-left vertex ↦ block index (the vertex of G it stands for).
    std::vector<std::size_t> iota;
    std::size_t s_param = 0; ///< C(k, 2)
    std::size_t ell = 0;
    std::size_t h = 0;
    bool gap = false; ///< ell < h
};

/// H: left side = pairs {u1, u2} of F-left vertices in blocks 0..n−1 whose block
/// indices are adjacent in G (sorted lexicographically); right side = F's right
/// side; e ~ v iff both members of e are adjacent to v in F.
///
/// F must have at least n = |V(G)| blocks and either a certificate covering
/// (k, ell, h) or params.trusted.
inline ReductionOutput gap_reduce(const SimpleGraph& g, const PartitionedBipartite& F, const GapParams& params,
                                  const verify::ThresholdCert* cert = nullptr, std::size_t jobs = 1) {
    if (params.k < 2) throw std::invalid_argument("gap_reduce: k must be >= 2");
    if (F.block_count() < g.size())
        throw ValidationError("gap_reduce: threshold graph has " + std::to_string(F.block_count()) +
                              " blocks but G has " + std::to_string(g.size()) + " vertices");
    if (!params.trusted) {
        if (!cert) throw ValidationError("gap_reduce: threshold graph is neither certified nor marked trusted");
        if (!cert->holds() || cert->k != params.k || cert->ell > params.ell || cert->h < params.h ||
            cert->n < g.size())
            throw ValidationError("gap_reduce: certificate does not cover (n, k, ell, h) = (" + std::to_string(g.size()) +
                                  ", " + std::to_string(params.k) + ", " + std::to_string(params.ell) + ", " +
                                  std::to_string(params.h) + ")");
    }
    const auto& fg = F.graph();
    ReductionOutput out;
    out.s_param = choose2(params.k);
    out.ell = params.ell;
    out.h = params.h;
    out.gap = params.ell < params.h;
    out.iota.resize(fg.left_size());
    for (Vertex u = 0; u < fg.left_size(); ++u) out.iota[u] = F.block_of(u);

    for (auto [a, b] : g.edges())
        for (auto u1 : F.blocks()[a])
            for (auto u2 : F.blocks()[b]) out.left_labels.emplace_back(std::min(u1, u2), std::max(u1, u2));
    std::sort(out.left_labels.begin(), out.left_labels.end());

    std::vector<BitRow> rows(out.left_labels.size(), BitRow(fg.right_size()));
    jobs = std::max<std::size_t>(1, std::min(jobs, rows.size()));
    detail::run_workers(jobs, [&](std::size_t w) {
        for (std::size_t i = w; i < rows.size(); i += jobs)
            rows[i].assign_and(fg.row(out.left_labels[i].first), fg.row(out.left_labels[i].second));
    });
    out.H = BipartiteGraph(0, fg.right_size());
    for (auto& r : rows) out.H.add_left(std::move(r));
    return out;
}

// ---------------------------------------------------------------------------
// Toy threshold graphs

struct ToyOptions {
    std::size_t n_blocks = 10;
    std::size_t k = 3;
    std::size_t block_size = 3;
    std::size_t right_size = 500;
    double p = 0.38;
    std::size_t attempts = 200;
    std::size_t jobs = 1;
};

struct CertifiedThreshold {
    PartitionedBipartite graph;
    verify::ThresholdCert cert;
    std::size_t attempt = 0;
};

/// Measures ℓ* and h* exactly and certifies the graph at (ℓ*, h*).
inline verify::ThresholdCert certify_measured(const PartitionedBipartite& pg, std::size_t k, std::size_t jobs = 1) {
    SearchOptions opt;
    opt.jobs = jobs;
    const auto t1 = verify::verify_t1(pg.graph(), k, SIZE_MAX, opt);
    std::size_t h = 0;
    if (pg.block_count() >= k) h = *verify::verify_t2(pg, k, 0, opt).min_best;
    return verify::certify_threshold(pg, k, t1.max_common, h, opt);
}

/// Seeded search for a small (n_blocks, k, ℓ, h)-threshold graph with ℓ < h;
/// attempt i samples G(n_blocks·block_size, right_size, p) with derive_seed(seed, i).
inline CertifiedThreshold find_toy_threshold(const ToyOptions& o, std::uint64_t seed) {
    if (o.k < 2 || o.n_blocks == 0 || o.block_size == 0) throw std::invalid_argument("find_toy_threshold: need k >= 2 and nonempty blocks");
    for (std::size_t a = 0; a < o.attempts; ++a) {
        const auto s = randgraph::derive_seed(seed, a);
        auto g = randgraph::sample_bipartite(o.n_blocks * o.block_size, o.right_size, o.p, s);
        std::vector<std::vector<Vertex>> blocks(o.n_blocks);
        for (Vertex v = 0; v < g.left_size(); ++v) blocks[v / o.block_size].push_back(v);
        nlohmann::json meta{{"construction", "toy"}, {"rng", randgraph::kRngName}, {"seed", seed},
                            {"attempt", a},          {"attempt_seed", s},         {"p", o.p},
                            {"block_size", o.block_size}};
        PartitionedBipartite pg(std::move(g), std::move(blocks), std::move(meta));
        auto cert = certify_measured(pg, o.k, o.jobs);
        if (o.n_blocks >= o.k && cert.ell < cert.h) {
            pg.metadata()["certificate"] = verify::to_json(cert);
            return {std::move(pg), cert, a};
        }
    }
    throw ResourceError("find_toy_threshold: no graph with ell < h in " + std::to_string(o.attempts) + " attempts");
}

// ---------------------------------------------------------------------------
// End-to-end pipeline

enum class Mode { explicit_paley, random, toy };

inline const char* mode_name(Mode m) {
    switch (m) {
    case Mode::explicit_paley: return "explicit";
    case Mode::random: return "random";
    case Mode::toy: return "toy";
    }
    return "?";
}

inline Mode parse_mode(const std::string& s) {
    if (s == "explicit") return Mode::explicit_paley;
    if (s == "random") return Mode::random;
    if (s == "toy") return Mode::toy;
    throw std::invalid_argument("mode must be one of explicit, random, toy; got \"" + s + "\"");
}

struct PipelineOptions {
    Mode mode = Mode::toy;
    std::uint64_t seed = 0;
    std::uint64_t max_q = field::kDefaultMaxQ;
    std::size_t jobs = 1;
    std::size_t attempts = 200;
    ToyOptions toy;
    /// Cap on t − s universal vertices added when balancing.
    std::size_t max_balance = std::size_t{1} << 20;
};

struct PipelineResult {
    BipartiteGraph graph; ///< G'
    std::size_t k2 = 0;   ///< k'': G' ⊇ K_{k'',k''} iff G ⊇ K_k (when the gap holds)
    ReductionOutput reduction;
    nlohmann::json provenance;
};

namespace detail_pipeline {
/// Rethrows with the stage name prefixed, keeping the error category.
[[noreturn]] inline void stage_error(const std::string& stage, const std::exception& e) {
    const std::string msg = "pipeline stage '" + stage + "': " + e.what();
    if (dynamic_cast<const ResourceError*>(&e)) throw ResourceError(msg);
    if (dynamic_cast<const std::invalid_argument*>(&e)) throw ValidationError(msg);
    if (dynamic_cast<const std::domain_error*>(&e)) throw DomainError(msg);
    throw std::runtime_error(msg);
}
} // namespace detail_pipeline

inline PipelineResult full_pipeline(const SimpleGraph& g, std::size_t k, const PipelineOptions& opt) {
    if (k < 2) throw std::invalid_argument("full_pipeline: k must be >= 2");
    nlohmann::json prov{{"mode", mode_name(opt.mode)}, {"seed", opt.seed}, {"k", k}, {"n", g.size()}};

    // Padding only in explicit mode, where k' must be ≡ 5 (mod 6).
    std::size_t kp = k;
    SimpleGraph g1 = g;
    if (opt.mode == Mode::explicit_paley) {
        kp = static_cast<std::size_t>(paley::pad_parameter(k));
        g1 = pad_clique_instance(g, k, kp);
    }
    prov["k_padded"] = kp;
    prov["n_padded"] = g1.size();
    const std::size_t nb = std::max<std::size_t>(1, g1.size());

    PartitionedBipartite F;
    GapParams gp;
    gp.k = kp;
    std::optional<verify::ThresholdCert> cert;
    try {
        switch (opt.mode) {
        case Mode::explicit_paley: {
            auto tg = paley::build_threshold_graph(nb, kp, opt.max_q, opt.jobs);
            if (!tg.recipe.ell_thr) throw ResourceError("(k+1)! overflows");
            gp.ell = static_cast<std::size_t>(*tg.recipe.ell_thr);
            gp.h = static_cast<std::size_t>(tg.recipe.h);
            // (T1) is certified directly when the maximum left degree is already <= ell;
            // otherwise both properties rest on the construction's theorems.
            std::size_t maxdeg = 0;
            for (const auto& r : tg.graph.graph().rows()) maxdeg = std::max(maxdeg, r.count());
            const bool t1_by_degree = maxdeg <= gp.ell;
            const bool t2_vacuous = tg.graph.block_count() < kp;
            gp.trusted = true;
            prov["recipe"] = tg.recipe.to_json();
            prov["field"] = tg.graph.metadata()["field"];
            prov["t1_basis"] = t1_by_degree ? "max left degree <= ell" : "theorem (not checked)";
            prov["t2_basis"] = t2_vacuous ? "vacuous (fewer than k blocks)" : "theorem (not checked)";
            prov["max_left_degree"] = maxdeg;
            F = std::move(tg.graph);
            break;
        }
        case Mode::random: {
            const auto rp = randgraph::derive_params(static_cast<std::int64_t>(kp));
            for (std::size_t a = 0; a < opt.attempts && !cert; ++a) {
                auto pg = randgraph::sample_threshold_candidate(nb, rp.k, nb, randgraph::derive_seed(opt.seed, a));
                auto c = certify_measured(pg, kp, opt.jobs);
                if (nb >= kp && c.ell < c.h) {
                    prov["attempt"] = a;
                    F = std::move(pg);
                    cert = c;
                }
            }
            if (!cert)
                throw ResourceError("no sampled graph with ell < h in " + std::to_string(opt.attempts) + " attempts");
            gp.ell = cert->ell;
            gp.h = cert->h;
            prov["params"] = rp.to_json();
            break;
        }
        case Mode::toy: {
            auto to = opt.toy;
            to.n_blocks = std::max(nb, kp);
            to.k = kp;
            to.attempts = opt.attempts;
            to.jobs = opt.jobs;
            auto ct = find_toy_threshold(to, opt.seed);
            prov["attempt"] = ct.attempt;
            F = std::move(ct.graph);
            cert = ct.cert;
            gp.ell = cert->ell;
            gp.h = cert->h;
            break;
        }
        }
    } catch (const std::exception& e) {
        detail_pipeline::stage_error("threshold", e);
    }
    if (cert) prov["certificate"] = verify::to_json(*cert);
    prov["threshold_graph"] = {{"left", F.graph().left_size()},
                               {"right", F.graph().right_size()},
                               {"blocks", F.block_count()},
                               {"construction", F.metadata().value("construction", "")}};

    PipelineResult res;
    try {
        res.reduction = gap_reduce(g1, F, gp, cert ? &*cert : nullptr, opt.jobs);
    } catch (const std::exception& e) {
        detail_pipeline::stage_error("gap_reduce", e);
    }
    const auto& red = res.reduction;
    const std::size_t s = red.s_param, t = red.ell + 1;
    prov["ell"] = red.ell;
    prov["h"] = red.h;
    prov["gap"] = red.gap;
    prov["s"] = s;
    prov["t"] = t;
    prov["H"] = {{"left", red.H.left_size()}, {"right", red.H.right_size()}};

    try {
        const std::size_t pad = s <= t ? t - s : s - t;
        if (pad > opt.max_balance)
            throw ResourceError("balancing would add " + std::to_string(pad) + " vertices (cap " +
                                std::to_string(opt.max_balance) + ")");
        if (s <= t) {
            res.graph = balance_biclique(red.H, s, t);
            res.k2 = t;
        } else {
            res.graph = balance_biclique(transpose(red.H), t, s);
            res.k2 = s;
        }
        prov["transposed"] = s > t;
    } catch (const std::exception& e) {
        detail_pipeline::stage_error("balance", e);
    }
    prov["k2"] = res.k2;
    prov["output"] = {{"left", res.graph.left_size()}, {"right", res.graph.right_size()}};
    res.provenance = std::move(prov);
    return res;
}

} // namespace biclique::reduce
