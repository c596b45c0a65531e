#pragma once

// Brute-force oracles and lemma checkers: threshold properties (T1)/(T2),
// K_{a,b}-freeness, biclique/clique search, maximum k-intersection, and the
// character-sum machinery behind the intersection bound.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "biclique/detail/search.hpp"
#include "biclique/field.hpp"
#include "biclique/graphs.hpp"

namespace biclique::verify {

using biclique::SearchOptions;

// ---------------------------------------------------------------------------
// Threshold properties

struct T1Result {
    bool holds = true;
    /// ℓ*: the largest |Γ(v)| over (k+1)-subsets v of the left side (0 if none exist).
    std::size_t max_common = 0;
    /// Lexicographically first (k+1)-subset with |Γ| > ℓ.
    std::optional<std::vector<Vertex>> violation;
};

/// (T1): every k+1 distinct left vertices share at most ℓ right neighbours.
/// Holds vacuously when the left side has fewer than k+1 vertices.
inline T1Result verify_t1(const BipartiteGraph& g, std::size_t k, std::size_t ell, const SearchOptions& opt = {}) {
    T1Result out;
    if (g.left_size() < k + 1) return out;
    const auto pool = detail::iota_pool(g.left_size());
    detail::Levels lv{std::vector<std::span<const std::size_t>>(k + 1, pool), true};
    auto r = detail::maximise_common(g.rows(), g.right_size(), lv, ell, opt);
    out.max_common = r.best;
    out.violation = std::move(r.first_above);
    out.holds = !out.violation;
    return out;
}

struct T2Result {
    bool holds = true;
    /// h*: minimum over k-subsets of blocks of the best transversal's |Γ|;
    /// nullopt when there are no block tuples (k = 0 is rejected, so only when blocks < k).
    std::optional<std::size_t> min_best;
    /// Lexicographically first block tuple (0-based) with no transversal reaching h.
    std::optional<std::vector<std::size_t>> violation;
    /// A best transversal for the tuple attaining h*.
    std::vector<Vertex> weakest_transversal;
};

/// (T2): every k blocks admit a transversal with at least h common neighbours.
/// h* is computed exactly.
inline T2Result verify_t2(const PartitionedBipartite& pg, std::size_t k, std::size_t h, const SearchOptions& opt = {}) {
    if (k == 0) throw std::invalid_argument("verify_t2: k must be >= 1");
    if (pg.block_count() < k)
        throw std::invalid_argument("verify_t2: partition has " + std::to_string(pg.block_count()) +
                                    " blocks, fewer than k = " + std::to_string(k));
    const auto& g = pg.graph();
    std::vector<std::vector<std::size_t>> tuples;
    {
        std::vector<std::size_t> t(k);
        for (std::size_t i = 0; i < k; ++i) t[i] = i;
        const std::size_t n = pg.block_count();
        while (true) {
            tuples.push_back(t);
            std::size_t i = k;
            while (i > 0 && t[i - 1] == n - k + i - 1) --i;
            if (i == 0) break;
            ++t[i - 1];
            for (std::size_t j = i; j < k; ++j) t[j] = t[j - 1] + 1;
        }
    }
    // Tuples are spread over workers; each transversal search runs single-threaded.
    std::vector<detail::MaxResult> best(tuples.size());
    const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, tuples.size()));
    SearchOptions inner = opt;
    inner.jobs = 1;
    detail::run_workers(jobs, [&](std::size_t w) {
        for (std::size_t ti = w; ti < tuples.size(); ti += jobs) {
            detail::Levels lv;
            for (auto b : tuples[ti]) lv.pools.emplace_back(pg.blocks()[b]);
            best[ti] = detail::maximise_common(g.rows(), g.right_size(), lv, std::nullopt, inner);
        }
    });
    T2Result out;
    for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
        const auto b = best[ti].any ? best[ti].best : 0;
        if (!out.min_best || b < *out.min_best) {
            out.min_best = b;
            out.weakest_transversal = best[ti].argmax;
        }
        if (b < h && !out.violation) out.violation = tuples[ti];
    }
    out.holds = !out.violation;
    return out;
}

/// Certificate for the (n, k, ℓ, h)-threshold property.
struct ThresholdCert {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t ell = 0;
    std::size_t h = 0;
    bool t1_holds = false;
    bool t2_holds = false;
    std::optional<std::vector<Vertex>> t1_violation;
    std::optional<std::vector<std::size_t>> t2_violation;
    std::size_t max_common_over_k_plus_1 = 0;
    std::optional<std::size_t> min_over_blocks_of_max_transversal;

    bool holds() const noexcept { return t1_holds && t2_holds; }
};

inline ThresholdCert certify_threshold(const PartitionedBipartite& pg, std::size_t k, std::size_t ell, std::size_t h,
                                       const SearchOptions& opt = {}) {
    ThresholdCert c;
    c.n = pg.block_count();
    c.k = k;
    c.ell = ell;
    c.h = h;
    auto t1 = verify_t1(pg.graph(), k, ell, opt);
    c.t1_holds = t1.holds;
    c.t1_violation = std::move(t1.violation);
    c.max_common_over_k_plus_1 = t1.max_common;
    if (pg.block_count() >= k) {
        auto t2 = verify_t2(pg, k, h, opt);
        c.t2_holds = t2.holds;
        c.t2_violation = std::move(t2.violation);
        c.min_over_blocks_of_max_transversal = t2.min_best;
    } else {
        c.t2_holds = true; // no k-subset of blocks exists
    }
    return c;
}

inline nlohmann::json to_json(const ThresholdCert& c) {
    nlohmann::json j{{"n", c.n},
                     {"k", c.k},
                     {"ell", c.ell},
                     {"h", c.h},
                     {"t1_holds", c.t1_holds},
                     {"t2_holds", c.t2_holds},
                     {"max_common_over_k_plus_1", c.max_common_over_k_plus_1},
                     {"t1_violation", nullptr},
                     {"t2_violation", nullptr},
                     {"min_over_blocks_of_max_transversal", nullptr}};
    if (c.t1_violation) j["t1_violation"] = *c.t1_violation;
    if (c.t2_violation) j["t2_violation"] = *c.t2_violation;
    if (c.min_over_blocks_of_max_transversal) j["min_over_blocks_of_max_transversal"] = *c.min_over_blocks_of_max_transversal;
    return j;
}

inline ThresholdCert threshold_cert_from_json(const nlohmann::json& j) {
    ThresholdCert c;
    c.n = j.at("n").get<std::size_t>();
    c.k = j.at("k").get<std::size_t>();
    c.ell = j.at("ell").get<std::size_t>();
    c.h = j.at("h").get<std::size_t>();
    c.t1_holds = j.at("t1_holds").get<bool>();
    c.t2_holds = j.at("t2_holds").get<bool>();
    c.max_common_over_k_plus_1 = j.at("max_common_over_k_plus_1").get<std::size_t>();
    if (!j.at("t1_violation").is_null()) c.t1_violation = j["t1_violation"].get<std::vector<Vertex>>();
    if (!j.at("t2_violation").is_null()) c.t2_violation = j["t2_violation"].get<std::vector<std::size_t>>();
    if (!j.at("min_over_blocks_of_max_transversal").is_null())
        c.min_over_blocks_of_max_transversal = j["min_over_blocks_of_max_transversal"].get<std::size_t>();
    return c;
}

// ---------------------------------------------------------------------------
// Biclique / clique / intersection oracles

/// Lexicographically first s-subset of the left side with at least t common
/// neighbours, together with its first t common neighbours.
inline std::optional<Witness> find_biclique(const BipartiteGraph& g, std::size_t s, std::size_t t,
                                            const SearchOptions& opt = {}) {
    if (s == 0) throw std::invalid_argument("find_biclique: s must be >= 1");
    if (g.left_size() < s) return std::nullopt;
    const auto pool = detail::iota_pool(g.left_size());
    detail::Levels lv{std::vector<std::span<const std::size_t>>(s, pool), true};
    auto hit = detail::find_common(g.rows(), g.right_size(), lv, t, opt);
    if (!hit) return std::nullopt;
    Witness w;
    w.left = *hit;
    w.right = common_neighbors(g, w.left).first_indices(t);
    return w;
}

struct KtFreeResult {
    bool free = true;
    std::optional<Witness> witness;
};

/// True iff no a left vertices share b or more common neighbours.
inline KtFreeResult check_ktfree(const BipartiteGraph& g, std::size_t a, std::size_t b, const SearchOptions& opt = {}) {
    KtFreeResult r;
    r.witness = find_biclique(g, a, b, opt);
    r.free = !r.witness;
    return r;
}

namespace detail_clique {
inline bool extend(const SimpleGraph& g, std::size_t k, std::vector<Vertex>& chosen, const BitRow& cand,
                   biclique::detail::DeadlineGuard& guard) {
    if (chosen.size() == k) return true;
    if (cand.count() < k - chosen.size()) return false;
    bool done = false;
    cand.for_each_set([&](std::size_t v) {
        if (done) return;
        guard.tick();
        BitRow next(cand.size());
        next.assign_and(cand, g.neighbors(v));
        // Keep only later vertices so each clique is produced once, in lex order.
        for (std::size_t u = 0; u <= v; ++u)
            if (next.test(u)) next.reset(u);
        chosen.push_back(v);
        if (extend(g, k, chosen, next, guard)) {
            done = true;
            return;
        }
        chosen.pop_back();
    });
    return done;
}
} // namespace detail_clique

/// Lexicographically first k-clique, if any (k = 0 yields the empty set).
inline std::optional<std::vector<Vertex>> find_clique(const SimpleGraph& g, std::size_t k, const SearchOptions& opt = {}) {
    std::vector<Vertex> chosen;
    if (k == 0) return chosen;
    if (g.size() < k) return std::nullopt;
    BitRow all(g.size());
    all.set_all();
    detail::DeadlineGuard guard(opt);
    if (detail_clique::extend(g, k, chosen, all, guard)) return chosen;
    return std::nullopt;
}

struct IntersectionResult {
    std::size_t size = 0;
    std::vector<std::size_t> indices;      ///< chosen set indices, lexicographically first maximiser
    std::vector<std::size_t> intersection; ///< their common elements
};

/// Maximum k-intersection over a family of subsets of [0, ground_size).
inline IntersectionResult max_k_intersection(const std::vector<std::vector<std::size_t>>& family, std::size_t k,
                                             std::optional<std::size_t> ground_size = std::nullopt,
                                             const SearchOptions& opt = {}) {
    if (k == 0) throw std::invalid_argument("max_k_intersection: k must be >= 1");
    if (family.size() < k) throw std::invalid_argument("max_k_intersection: family has fewer than k sets");
    std::size_t m = 0;
    for (const auto& s : family)
        for (auto x : s) m = std::max(m, x + 1);
    if (ground_size) {
        if (*ground_size < m) throw std::invalid_argument("max_k_intersection: element outside the ground set");
        m = *ground_size;
    }
    std::vector<BitRow> rows(family.size(), BitRow(m));
    for (std::size_t i = 0; i < family.size(); ++i)
        for (auto x : family[i]) rows[i].set(x);
    const auto pool = detail::iota_pool(family.size());
    detail::Levels lv{std::vector<std::span<const std::size_t>>(k, pool), true};
    auto r = detail::maximise_common(rows, m, lv, std::nullopt, opt);
    IntersectionResult out;
    out.size = r.best;
    out.indices = r.argmax;
    BitRow acc = rows[out.indices[0]];
    for (auto i : out.indices) acc &= rows[i];
    out.intersection = acc.indices();
    return out;
}

// ---------------------------------------------------------------------------
// Character sums and the intersection bound

using field::Elem;
using field::FieldCtx;

/// Counts c_0..c_{d-1} of values by character exponent, plus the zero count.
struct CharacterSum {
    std::vector<std::uint64_t> class_counts;
    std::uint64_t zeros = 0;
    /// |Σ_m c_m ω^m|.
    double magnitude = 0.0;
};

/// Σ χ(v) over the given values for the order-d character of ctx (χ(0) = 0).
inline CharacterSum character_sum(const FieldCtx& ctx, std::uint32_t d, std::span<const Elem> values) {
    field::require_divides_group_order(ctx, d, "character_sum");
    CharacterSum out;
    out.class_counts.assign(d, 0);
    for (auto v : values) {
        if (v.code == 0) {
            ++out.zeros;
            continue;
        }
        ++out.class_counts[ctx.dlog(v) % d];
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::uint32_t m = 0; m < d; ++m)
        acc += static_cast<double>(out.class_counts[m]) * std::polar(1.0, 2.0 * std::numbers::pi * m / d);
    out.magnitude = std::abs(acc);
    return out;
}

struct WeilResult {
    CharacterSum sum;
    double bound = 0.0;
    bool pass = false;
};

inline constexpr double kWeilTolerance = 1e-6;

/// Evaluates Σ_{x ∈ GF(q)} χ(f_ψ(x)) for f_ψ(x) = Π_i (a_i + x^s g^j)^{ψ_i} and
/// checks it against (k·s − 1)·√q.
inline WeilResult weil_sum_check(const FieldCtx& ctx, std::uint32_t d, std::uint32_t s, std::uint64_t j,
                                 std::span<const Elem> a, std::span<const std::uint32_t> psi) {
    field::require_divides_group_order(ctx, d, "weil_sum_check");
    field::require_divides_group_order(ctx, s, "weil_sum_check");
    if (a.empty() || a.size() != psi.size()) throw std::invalid_argument("weil_sum_check: need one ψ entry per a_i");
    bool nonzero = false;
    for (auto e : psi) {
        if (e >= d) throw std::invalid_argument("weil_sum_check: ψ entries must lie in [0, d)");
        nonzero |= e != 0;
    }
    if (!nonzero) throw std::invalid_argument("weil_sum_check: ψ must not be identically zero");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].code == 0 || !ctx.contains(a[i])) throw std::invalid_argument("weil_sum_check: a_i must be nonzero field elements");
        for (std::size_t i2 = 0; i2 < i; ++i2)
            if (a[i] == a[i2]) throw std::invalid_argument("weil_sum_check: a_i must be distinct");
    }

    // f_ψ(x) is reduced to its character exponent directly: Σ ψ_i·dlog(y_i) mod d.
    const Elem gj = ctx.exp(j);
    const std::uint32_t n = ctx.group_order();
    WeilResult out;
    out.sum.class_counts.assign(d, 0);
    for (std::uint32_t code = 0; code < ctx.q(); ++code) {
        const Elem x{code};
        const Elem xs = code == 0 ? ctx.zero() : ctx.exp(std::uint64_t{ctx.dlog(x)} * s % n);
        const Elem base = code == 0 ? ctx.zero() : ctx.mul(xs, gj);
        std::uint64_t m = 0;
        bool zero = false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (psi[i] == 0) continue;
            const Elem y = ctx.add(a[i], base);
            if (y.code == 0) {
                zero = true;
                break;
            }
            m += std::uint64_t{psi[i]} * ctx.dlog(y);
        }
        if (zero) {
            ++out.sum.zeros;
            continue;
        }
        ++out.sum.class_counts[m % d];
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::uint32_t m = 0; m < d; ++m)
        acc += static_cast<double>(out.sum.class_counts[m]) * std::polar(1.0, 2.0 * std::numbers::pi * m / d);
    out.sum.magnitude = std::abs(acc);
    const double roots = static_cast<double>(a.size()) * s;
    out.bound = (roots - 1.0) * std::sqrt(static_cast<double>(ctx.q()));
    out.pass = out.sum.magnitude <= out.bound + kWeilTolerance;
    return out;
}

struct IntersectionRecord {
    std::vector<std::uint32_t> tuple; ///< element codes a_1..a_k
    std::size_t block = 0;            ///< 1-based block index j
    std::size_t count = 0;
    bool within = false;
};

struct IntersectionOptions {
    /// Number of sampled tuples; nullopt enumerates every k-subset of GF^×(q).
    std::optional<std::size_t> samples;
    std::uint64_t seed = 0;
    bool keep_records = false;
};

struct IntersectionReport {
    std::uint32_t q = 0, d = 0, s = 0, k = 0;
    /// √q ≥ sk/d + 1; out-of-regime reports are informational only.
    bool in_regime = false;
    double expected = 0.0; ///< q / (s d^k)
    double lower = 0.0, upper = 0.0;
    std::size_t tuples = 0;
    std::size_t checks = 0;
    std::size_t within = 0;
    std::size_t min_count = 0, max_count = 0;
    std::optional<IntersectionRecord> first_violation;
    std::vector<IntersectionRecord> records;

    bool all_within() const noexcept { return within == checks; }
};

/// Counts x ∈ V_j with (a_i + x)^{(q-1)/d} = 1 for all i, per tuple and block,
/// against the window q/(s d^k) ± k√q.
inline IntersectionReport intersection_lemma_check(const FieldCtx& ctx, std::uint32_t d, std::uint32_t s, std::uint32_t k,
                                                   const IntersectionOptions& opt = {}) {
    field::require_divides_group_order(ctx, d, "intersection_lemma_check");
    field::require_divides_group_order(ctx, s, "intersection_lemma_check");
    const std::uint32_t n = ctx.group_order();
    if (k == 0 || k > n) throw std::invalid_argument("intersection_lemma_check: need 1 <= k <= q-1");

    IntersectionReport rep;
    rep.q = ctx.q();
    rep.d = d;
    rep.s = s;
    rep.k = k;
    const double sq = std::sqrt(static_cast<double>(ctx.q()));
    rep.in_regime = sq >= static_cast<double>(s) * k / d + 1.0;
    rep.expected = static_cast<double>(ctx.q()) / (static_cast<double>(s) * std::pow(static_cast<double>(d), k));
    rep.lower = rep.expected - k * sq;
    rep.upper = rep.expected + k * sq;

    // Bit i stands for x = g^i. sol[a] marks the x with χ(a + x) = 1.
    std::vector<BitRow> sol(n, BitRow(n));
    for (std::uint32_t ai = 0; ai < n; ++ai) {
        const Elem a = ctx.exp(ai);
        for (std::uint32_t xi = 0; xi < n; ++xi) {
            const Elem y = ctx.add(a, ctx.exp(xi));
            if (y.code != 0 && ctx.dlog(y) % d == 0) sol[ai].set(xi);
        }
    }
    std::vector<BitRow> blocks(s, BitRow(n));
    for (std::uint32_t xi = 0; xi < n; ++xi) blocks[xi % s].set(xi); // dlog ≡ j (mod s); index 0 is V_s

    bool first = true;
    auto measure = [&](const std::vector<std::uint32_t>& idx) {
        ++rep.tuples;
        BitRow acc = sol[idx[0]];
        for (std::size_t i = 1; i < idx.size(); ++i) acc &= sol[idx[i]];
        for (std::uint32_t j = 1; j <= s; ++j) {
            const std::size_t c = acc.and_count(blocks[j % s]);
            const bool ok = static_cast<double>(c) >= rep.lower && static_cast<double>(c) <= rep.upper;
            ++rep.checks;
            rep.within += ok;
            if (first) {
                rep.min_count = rep.max_count = c;
                first = false;
            }
            rep.min_count = std::min(rep.min_count, c);
            rep.max_count = std::max(rep.max_count, c);
            if (!ok || opt.keep_records) {
                IntersectionRecord r;
                for (auto i : idx) r.tuple.push_back(ctx.exp(i).code);
                r.block = j;
                r.count = c;
                r.within = ok;
                if (!ok && !rep.first_violation) rep.first_violation = r;
                if (opt.keep_records) rep.records.push_back(std::move(r));
            }
        }
    };

    if (opt.samples) {
        std::mt19937_64 rng(opt.seed);
        std::vector<std::uint32_t> all(n);
        for (std::uint32_t i = 0; i < n; ++i) all[i] = i;
        for (std::size_t t = 0; t < *opt.samples; ++t) {
            // Partial Fisher-Yates for k distinct elements.
            for (std::uint32_t i = 0; i < k; ++i) {
                const auto r = i + static_cast<std::uint32_t>(rng() % (n - i));
                std::swap(all[i], all[r]);
            }
            measure(std::vector<std::uint32_t>(all.begin(), all.begin() + k));
        }
    } else {
        std::vector<std::uint32_t> idx(k);
        for (std::uint32_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            measure(idx);
            std::uint32_t i = k;
            while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::uint32_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return rep;
}

inline nlohmann::json to_json(const IntersectionReport& r) {
    nlohmann::json j{{"q", r.q},           {"d", r.d},         {"s", r.s},           {"k", r.k},
                     {"in_regime", r.in_regime}, {"expected", r.expected}, {"lower", r.lower}, {"upper", r.upper},
                     {"tuples", r.tuples}, {"checks", r.checks}, {"within", r.within}, {"min_count", r.min_count},
                     {"max_count", r.max_count}, {"all_within", r.all_within()}, {"first_violation", nullptr}};
    auto rec = [](const IntersectionRecord& x) {
        return nlohmann::json{{"tuple", x.tuple}, {"block", x.block}, {"count", x.count}, {"within", x.within}};
    };
    if (r.first_violation) j["first_violation"] = rec(*r.first_violation);
    if (!r.records.empty()) {
        j["records"] = nlohmann::json::array();
        for (const auto& x : r.records) j["records"].push_back(rec(x));
    }
    return j;
}

struct PartitionLemmaResult {
    bool pass = true;
    std::vector<std::int64_t> lhs; ///< Σ_{z ∈ V_i} f(z), i = 1..s
    std::vector<std::int64_t> rhs; ///< Σ_{x ≠ 0} f(g^i x^s)
};

/// Σ_{z ∈ V_i} f(z) = (1/s) Σ_{x ∈ GF^×(q)} f(g^i x^s), checked as s·LHS = RHS in integers.
/// `f` is indexed by element code and must have q entries. The right-hand side
/// is evaluated with polynomial arithmetic only (no log tables).
inline PartitionLemmaResult partition_lemma_check(const FieldCtx& ctx, std::uint32_t s, std::span<const std::int64_t> f) {
    field::require_divides_group_order(ctx, s, "partition_lemma_check");
    if (f.size() != ctx.q()) throw std::invalid_argument("partition_lemma_check: f must have q entries");
    std::vector<Elem> xs;
    xs.reserve(ctx.q() - 1);
    for (std::uint32_t code = 1; code < ctx.q(); ++code) xs.push_back(ctx.pow(Elem{code}, s));
    PartitionLemmaResult out;
    for (std::uint32_t i = 1; i <= s; ++i) {
        std::int64_t lhs = 0, rhs = 0;
        for (auto z : field::coset_block(ctx, s, i)) lhs += f[z.code];
        const Elem gi = ctx.pow(ctx.generator(), i);
        for (auto x : xs) rhs += f[ctx.mul(gi, x).code];
        out.lhs.push_back(lhs);
        out.rhs.push_back(rhs);
        if (lhs * static_cast<std::int64_t>(s) != rhs) out.pass = false;
    }
    return out;
}

} // namespace biclique::verify
