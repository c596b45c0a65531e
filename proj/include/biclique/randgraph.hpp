#pragma once

// Random bipartite graphs G(N, p), the parameter schedule of the probabilistic
// construction, its moment bounds, and Monte Carlo success estimates.
//
// RNG: std::mt19937_64 seeded per trial with a splitmix64-derived sub-seed.
// An edge is present iff (rng() >> 11) * 2^-53 < p, one draw per (l, r) in
// row-major order. This is fixed so CSV output is reproducible across platforms.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "biclique/detail/search.hpp"
#include "biclique/graphs.hpp"
#include "biclique/verify.hpp"

namespace biclique::randgraph {

inline constexpr const char* kRngName = "mt19937_64/splitmix64";
inline constexpr std::uint64_t kDefaultMaxCells = std::uint64_t{1} << 32;

using Rational = boost::rational<std::int64_t>;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Sub-seed for stream `index` under `seed`; independent of how streams are scheduled.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

inline BipartiteGraph sample_bipartite(std::size_t nl, std::size_t nr, double p, std::uint64_t seed,
                                       std::uint64_t max_cells = kDefaultMaxCells) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_bipartite: p = " + std::to_string(p) + " is outside [0, 1]");
    if (nl != 0 && nr > max_cells / nl)
        throw ResourceError("sample_bipartite: " + std::to_string(nl) + " x " + std::to_string(nr) +
                            " adjacency exceeds the budget of " + std::to_string(max_cells) + " cells");
    std::mt19937_64 rng(seed);
    BipartiteGraph g(nl, nr);
    for (std::size_t l = 0; l < nl; ++l)
        for (std::size_t r = 0; r < nr; ++r)
            if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < p) g.add_edge(l, r);
    return g;
}

inline double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

inline std::string to_string(const Rational& r) {
    return r.denominator() == 1 ? std::to_string(r.numerator())
                                : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Schedule for the clique parameter k (k >= 3).
struct RandParams {
    std::int64_t k = 0;
    std::int64_t h = 0;      ///< k²
    Rational eps;            ///< 1/k
    Rational alpha;          ///< (k+2)/(k(k+1))
    Rational beta;           ///< 1/2
    Rational theta;          ///< 1/(1−β)
    Rational p_exponent;     ///< (k+1+h+ε)/((k+1)h); p_ε = N^{−p_exponent}

    /// p_ε on a graph with N vertices per side.
    double p_for(double vertices) const { return std::pow(vertices, -to_double(p_exponent)); }

    nlohmann::json to_json() const {
        return {{"k", k},
                {"h", h},
                {"eps", to_string(eps)},
                {"alpha", to_string(alpha)},
                {"beta", to_string(beta)},
                {"theta", to_string(theta)},
                {"p_exponent", to_string(p_exponent)}};
    }
};

inline RandParams derive_params(std::int64_t k) {
    if (k < 3) throw std::invalid_argument("derive_params: k = " + std::to_string(k) + " < 3 (need α < 1/2)");
    RandParams rp;
    rp.k = k;
    rp.h = k * k;
    rp.eps = Rational(1, k);
    rp.alpha = Rational(k + 2, k * (k + 1));
    rp.beta = Rational(1, 2);
    rp.theta = Rational(1) / (Rational(1) - rp.beta);
    rp.p_exponent = (Rational(k + 1 + rp.h) + rp.eps) / Rational((k + 1) * rp.h);
    return rp;
}

/// Exact algebraic facts about the schedule, recomputed from the general formulas.
struct ScheduleIdentities {
    Rational h_from_alpha;         ///< (1−α)k(k+1) + 2
    Rational e_exponent;           ///< (h − (1−α)k(k+1) − kε)/(k+1)
    Rational delta_exponent;       ///< the Δ* chain's final exponent on n
    bool h_is_k_squared = false;   ///< h_from_alpha == k²
    bool e_exponent_ok = false;    ///< e_exponent == 1/(k+1)
    bool delta_exponent_ok = false;///< delta_exponent == −1/(k(k+1)h)
    bool alpha_beta_order = false; ///< 0 < α < β < 1
    bool all() const { return h_is_k_squared && e_exponent_ok && delta_exponent_ok && alpha_beta_order; }
};

inline ScheduleIdentities schedule_identities(const RandParams& rp) {
    const Rational k(rp.k), h(rp.h), one(1);
    ScheduleIdentities id;
    id.h_from_alpha = (one - rp.alpha) * k * (k + one) + Rational(2);
    id.e_exponent = (h - (one - rp.alpha) * k * (one + k) - k * rp.eps) / (k + one);
    // Largest exponent in the Δ* sum (i·j = 1): [−α(k+1) − (1+1/k)h + (k+1+h+ε)] / ((k+1)h).
    const Rational bracket = -rp.alpha * (k + one) - (one + one / k) * h + (k + one + h + rp.eps);
    id.delta_exponent = bracket / ((k + one) * h);
    id.h_is_k_squared = id.h_from_alpha == h;
    id.e_exponent_ok = id.e_exponent == one / (k + one);
    id.delta_exponent_ok = id.delta_exponent == -one / (k * (k + one) * h);
    id.alpha_beta_order = Rational(0) < rp.alpha && rp.alpha < rp.beta && rp.beta < one;
    return id;
}

/// Natural-log moment quantities for G(n, p_ε) with blocks of size n^α.
struct MomentReport {
    double n = 0;
    double log_expected_count = 0;     ///< ln E[X_α] = αk ln n + ln C(n,h) + kh ln p_ε
    double log_expected_lower = 0;     ///< ln[(1/h^h) n^{e_exponent}]
    Rational e_exponent;
    double log_delta_star_bound = 0;   ///< ln[k^{k+1} h^{2h+1} E[X_α] n^{−1/(k(k+1)h)}]
    double log_chebyshev_bound = 0;    ///< ln min(1, (1+Δ*)/E[X_α])

    nlohmann::json to_json() const {
        return {{"n", n},
                {"log_expected_count", log_expected_count},
                {"log_expected_lower", log_expected_lower},
                {"e_exponent", to_string(e_exponent)},
                {"log_delta_star_bound", log_delta_star_bound},
                {"log_chebyshev_bound", log_chebyshev_bound}};
    }
};

inline double log_add(double a, double b) {
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

inline MomentReport expected_counts(const RandParams& rp, double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("expected_counts: n must be >= 1");
    const double k = static_cast<double>(rp.k), h = static_cast<double>(rp.h), ln = std::log(n);
    const double alpha = to_double(rp.alpha);
    const double log_p = -to_double(rp.p_exponent) * ln;
    MomentReport m;
    m.n = n;
    const double log_binom = n >= h ? std::lgamma(n + 1) - std::lgamma(h + 1) - std::lgamma(n - h + 1)
                                    : -std::numeric_limits<double>::infinity();
    m.log_expected_count = alpha * k * ln + log_binom + k * h * log_p;
    m.e_exponent = schedule_identities(rp).e_exponent;
    m.log_expected_lower = -h * std::log(h) + to_double(m.e_exponent) * ln;
    m.log_delta_star_bound = (k + 1) * std::log(k) + (2 * h + 1) * std::log(h) + m.log_expected_count -
                             ln / (k * (k + 1) * h);
    m.log_chebyshev_bound = std::min(0.0, log_add(0.0, m.log_delta_star_bound) - m.log_expected_count);
    return m;
}

/// n^{2/((k+1)k²h)} > 2 k^{k+1} h^{2h+1}, compared in log space.
inline bool precondition_met(const RandParams& rp, double n) {
    const double k = static_cast<double>(rp.k), h = static_cast<double>(rp.h);
    const double lhs = 2.0 / ((k + 1) * k * k * h) * std::log(n);
    const double rhs = std::log(2.0) + (k + 1) * std::log(k) + (2 * h + 1) * std::log(h);
    return lhs > rhs;
}

struct CandidateOptions {
    std::optional<double> p; ///< overrides p_ε
    std::uint64_t max_cells = kDefaultMaxCells;
};

/// G(N, p_ε) with N = n_blocks·block_size vertices per side and p_ε = N^{−p_exponent};
/// the left side is cut into n_blocks consecutive blocks.
inline PartitionedBipartite sample_threshold_candidate(std::size_t n_blocks, std::int64_t k, std::size_t block_size,
                                                       std::uint64_t seed, const CandidateOptions& opt = {}) {
    const auto rp = derive_params(k);
    if (n_blocks == 0 || block_size == 0) throw std::invalid_argument("sample_threshold_candidate: n_blocks and block_size must be >= 1");
    const std::size_t n = n_blocks * block_size;
    const double p = opt.p ? *opt.p : rp.p_for(static_cast<double>(n));
    auto g = sample_bipartite(n, n, p, seed, opt.max_cells);
    std::vector<std::vector<Vertex>> blocks(n_blocks);
    for (std::size_t v = 0; v < n; ++v) blocks[v / block_size].push_back(v);
    nlohmann::json meta{{"construction", "random"}, {"rng", kRngName},          {"seed", seed},
                        {"k", k},                   {"n_blocks", n_blocks},     {"block_size", block_size},
                        {"p", p},                   {"p_forced", opt.p.has_value()}, {"params", rp.to_json()}};
    return PartitionedBipartite(std::move(g), std::move(blocks), std::move(meta));
}

struct SuccessOptions {
    std::optional<std::size_t> h; ///< defaults to k²
    std::optional<double> p;
    std::size_t jobs = 1;
    std::uint64_t max_cells = kDefaultMaxCells;
};

struct SuccessReport {
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t h = 0;
    double fraction() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
};

/// Fraction of sampled candidates certified (n_blocks, k, h−1, h)-threshold.
/// Trial i uses derive_seed(seed, i), so the result does not depend on `jobs`.
inline SuccessReport estimate_success(std::size_t n_blocks, std::int64_t k, std::size_t block_size, std::size_t trials,
                                      std::uint64_t seed, const SuccessOptions& opt = {}) {
    if (trials == 0) throw std::invalid_argument("estimate_success: trials must be >= 1");
    const auto rp = derive_params(k);
    SuccessReport rep;
    rep.trials = trials;
    rep.h = opt.h ? *opt.h : static_cast<std::size_t>(rp.h);
    if (rep.h == 0) throw std::invalid_argument("estimate_success: h must be >= 1");
    std::vector<char> ok(trials, 0);
    const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, trials));
    detail::run_workers(jobs, [&](std::size_t w) {
        for (std::size_t t = w; t < trials; t += jobs) {
            auto pg = sample_threshold_candidate(n_blocks, k, block_size, derive_seed(seed, t), {opt.p, opt.max_cells});
            const auto kk = static_cast<std::size_t>(k);
            if (n_blocks >= kk && !verify::verify_t2(pg, kk, rep.h).holds) continue;
            ok[t] = verify::verify_t1(pg.graph(), kk, rep.h - 1).holds;
        }
    });
    for (auto c : ok) rep.successes += c ? 1 : 0;
    return rep;
}

struct SweepRow {
    std::size_t n = 0;
    std::int64_t k = 0;
    std::size_t trials = 0;
    double success_fraction = 0;
    bool precondition = false;
};

/// One row per (n, k): n blocks of size n (N = n², the θ = 2 scaling).
inline std::vector<SweepRow> sweep(const std::vector<std::size_t>& ns, const std::vector<std::int64_t>& ks, std::size_t trials,
                                   std::uint64_t seed, const SuccessOptions& opt = {}) {
    std::vector<SweepRow> rows;
    std::uint64_t cell = 0;
    for (auto n : ns)
        for (auto k : ks) {
            auto rep = estimate_success(n, k, n, trials, derive_seed(seed, cell++), opt);
            rows.push_back({n, k, trials, rep.fraction(), precondition_met(derive_params(k), static_cast<double>(n))});
        }
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "n,k,trials,success_fraction,precondition_met\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%lld,%zu,%.6f,%s\n", r.n, static_cast<long long>(r.k), r.trials,
                      r.success_fraction, r.precondition ? "true" : "false");
        out += buf;
    }
    return out;
}

} // namespace biclique::randgraph
