#pragma once

// Lexicographic DFS over left-vertex subsets (or transversals of several pools),
// carrying the running common-neighbourhood row per level and pruning on its size.
// Results are deterministic: whichever worker finishes first, the reported
// witness is the lexicographically smallest one.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "biclique/bits.hpp"
#include "biclique/errors.hpp"

namespace biclique {

struct SearchOptions {
    std::size_t jobs = 1;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

namespace detail {

/// Runs fn(worker) for worker in [0, jobs) on separate threads (inline when jobs <= 1).
/// The first exception thrown by any worker is rethrown.
inline void run_workers(std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1) {
        fn(0);
        return;
    }
    std::vector<std::exception_ptr> errors(jobs);
    {
        std::vector<std::jthread> threads;
        threads.reserve(jobs);
        for (std::size_t w = 0; w < jobs; ++w)
            threads.emplace_back([&, w] {
                try {
                    fn(w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

class DeadlineGuard {
  public:
    explicit DeadlineGuard(const SearchOptions& opt) : deadline_(opt.deadline) {}
    void tick() {
        if (!deadline_ || (++ticks_ & 0xFFF)) return;
        if (std::chrono::steady_clock::now() > *deadline_) throw ResourceError("time limit exceeded during enumeration");
    }

  private:
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::uint64_t ticks_ = 0;
};

/// Outcome of a maximisation. `argmax` is the lexicographically first subset
/// attaining `best`; `first_above` the first subset whose count exceeds the
/// reporting threshold.
struct MaxResult {
    bool any = false;
    std::size_t best = 0;
    std::vector<std::size_t> argmax;
    std::optional<std::vector<std::size_t>> first_above;
};

inline void merge_into(MaxResult& acc, MaxResult&& r) {
    if (r.any && (!acc.any || r.best > acc.best || (r.best == acc.best && r.argmax < acc.argmax))) {
        acc.any = true;
        acc.best = r.best;
        acc.argmax = std::move(r.argmax);
    }
    if (r.first_above && (!acc.first_above || *r.first_above < *acc.first_above)) acc.first_above = std::move(r.first_above);
}

/// Pools per DFS level. For plain subsets every level shares one pool and
/// indices must increase; for transversals each level has its own pool.
struct Levels {
    std::vector<std::span<const std::size_t>> pools;
    bool increasing = false;
};

class Dfs {
  public:
    Dfs(std::span<const BitRow> rows, std::size_t width, const Levels& levels, const SearchOptions& opt)
        : rows_(rows), levels_(levels), depth_(levels.pools.size()), guard_(opt), buf_(depth_ + 1, BitRow(width)),
          chosen_(depth_) {
        buf_[0].set_all();
    }

    /// Maximise over subsets whose first element is pools[0][first_pos].
    void maximise_from(std::size_t first_pos, std::optional<std::size_t> report_above, MaxResult& res) {
        report_above_ = report_above;
        res_ = &res;
        mode_ = Mode::maximise;
        descend(0, first_pos);
    }

    /// First subset (lexicographically) with count >= target, starting at first_pos.
    bool find_from(std::size_t first_pos, std::size_t target, std::vector<std::size_t>& out) {
        target_ = target;
        mode_ = Mode::find;
        found_ = false;
        descend(0, first_pos);
        if (found_) out = chosen_;
        return found_;
    }

  private:
    enum class Mode { maximise, find };

    // Place pools[level][pos] at `level` and recurse.
    void descend(std::size_t level, std::size_t pos) {
        guard_.tick();
        const auto v = levels_.pools[level][pos];
        chosen_[level] = v;
        const std::size_t c = buf_[level + 1].assign_and(buf_[level], rows_[v]);
        if (mode_ == Mode::find) {
            if (c < target_) return;
        } else if (res_->any && c <= res_->best) {
            return;
        }
        if (level + 1 == depth_) {
            record(c);
            return;
        }
        const auto& next = levels_.pools[level + 1];
        const std::size_t start = levels_.increasing ? pos + 1 : 0;
        const std::size_t remaining = depth_ - level - 1;
        for (std::size_t p = start; p < next.size(); ++p) {
            if (levels_.increasing && next.size() - p < remaining) break;
            descend(level + 1, p);
            if (mode_ == Mode::find && found_) return;
        }
    }

    void record(std::size_t c) {
        if (mode_ == Mode::find) {
            found_ = true;
            return;
        }
        if (!res_->any || c > res_->best) {
            res_->any = true;
            res_->best = c;
            res_->argmax = chosen_;
        }
        if (report_above_ && c > *report_above_ && !res_->first_above) res_->first_above = chosen_;
    }

    std::span<const BitRow> rows_;
    const Levels& levels_;
    std::size_t depth_;
    DeadlineGuard guard_;
    std::vector<BitRow> buf_;
    std::vector<std::size_t> chosen_;
    Mode mode_ = Mode::maximise;
    MaxResult* res_ = nullptr;
    std::optional<std::size_t> report_above_;
    std::size_t target_ = 0;
    bool found_ = false;
};

inline std::size_t first_level_limit(const Levels& lv) {
    const auto n = lv.pools[0].size();
    if (!lv.increasing) return n;
    return n + 1 >= lv.pools.size() ? n + 1 - lv.pools.size() : 0;
}

/// Maximum |Γ| over all subsets/transversals described by `lv`.
inline MaxResult maximise_common(std::span<const BitRow> rows, std::size_t width, const Levels& lv,
                                 std::optional<std::size_t> report_above, const SearchOptions& opt) {
    MaxResult total;
    if (lv.pools.empty()) return total;
    const std::size_t limit = first_level_limit(lv);
    const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, limit));
    std::vector<MaxResult> parts(jobs);
    run_workers(jobs, [&](std::size_t w) {
        Dfs dfs(rows, width, lv, opt);
        for (std::size_t pos = w; pos < limit; pos += jobs) dfs.maximise_from(pos, report_above, parts[w]);
    });
    for (auto& part : parts) merge_into(total, std::move(part));
    return total;
}

/// Lexicographically first subset/transversal with |Γ| >= target.
inline std::optional<std::vector<std::size_t>> find_common(std::span<const BitRow> rows, std::size_t width,
                                                           const Levels& lv, std::size_t target,
                                                           const SearchOptions& opt) {
    if (lv.pools.empty()) return std::nullopt;
    const std::size_t limit = first_level_limit(lv);
    const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, limit));
    std::vector<std::optional<std::vector<std::size_t>>> parts(jobs);
    run_workers(jobs, [&](std::size_t w) {
        Dfs dfs(rows, width, lv, opt);
        std::vector<std::size_t> hit;
        for (std::size_t pos = w; pos < limit; pos += jobs)
            if (dfs.find_from(pos, target, hit)) {
                parts[w] = hit;
                return;
            }
    });
    std::optional<std::vector<std::size_t>> best;
    for (auto& p : parts)
        if (p && (!best || *p < *best)) best = std::move(p);
    return best;
}

/// [0, n) as a vector, for use as a pool.
inline std::vector<std::size_t> iota_pool(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

/// C(n, k) as a double (exact below 2^53).
inline double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

} // namespace detail
} // namespace biclique
