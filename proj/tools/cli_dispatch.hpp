#pragma once

// Command-line front end. Exit codes: 0 success, 1 finding (verification
// failed / nothing found), 2 usage, validation, parse or budget error,
// 3 unexpected internal error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "biclique/ccsp.hpp"
#include "biclique/field.hpp"
#include "biclique/graph_io.hpp"
#include "biclique/graphs.hpp"
#include "biclique/paley.hpp"
#include "biclique/randgraph.hpp"
#include "biclique/reduce.hpp"
#include "biclique/verify.hpp"

namespace biclique::cli {

using nlohmann::json;

enum Exit : int { ok = 0, finding = 1, usage = 2, internal = 3 };

struct Globals {
    std::size_t jobs = 1;
    std::uint64_t seed = 0;
    std::uint64_t max_q = std::uint64_t{1} << 16;
    double max_subsets = 1e9;
    bool force = false;
    std::optional<double> time_limit;
};

class Runner {
  public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv) {
        try {
            return run_checked(argc, argv);
        } catch (const std::exception& e) {
            err_ << "internal error: " << e.what() << '\n';
            return internal;
        }
    }

  private:
    int run_checked(int argc, const char* const* argv) {
        CLI::App app{"Threshold bipartite graphs, the clique-to-biclique gap reduction, and brute-force lemma checkers",
                     "biclique"};
        app.require_subcommand(1);
        app.fallthrough();
        // Long-only help: several subcommands take --h.
        app.set_help_flag("--help", "print this help and exit");
        app.add_option("--jobs", g_.jobs, "worker threads for parallel verifiers")->check(CLI::PositiveNumber);
        app.add_option("--seed", g_.seed, "seed for randomized subcommands");
        app.add_option("--max-q", g_.max_q, "largest field size accepted")->check(CLI::PositiveNumber);
        app.add_option("--max-subsets", g_.max_subsets, "largest subset enumeration accepted");
        app.add_flag("--force", g_.force, "ignore --max-q and --max-subsets");
        app.add_option("--time-limit", g_.time_limit, "seconds before an enumeration is abandoned");

        setup_field(app);
        setup_paley(app);
        setup_threshold(app);
        setup_sample(app);
        setup_verify(app);
        setup_reduce(app);
        setup_solve(app);
        setup_sweep(app);

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            out_ << app.help();
            return ok;
        } catch (const CLI::CallForAllHelp& e) {
            out_ << app.help("", CLI::AppFormatMode::All);
            return ok;
        } catch (const CLI::ParseError& e) {
            err_ << "error: " << e.what() << '\n';
            return usage;
        }
        try {
            return action_();
        } catch (const ParseError& e) {
            err_ << "parse error: " << e.what() << '\n';
        } catch (const ValidationError& e) {
            err_ << "validation error: " << e.what() << '\n';
        } catch (const DomainError& e) {
            err_ << "domain error: " << e.what() << '\n';
        } catch (const ResourceError& e) {
            err_ << "resource limit: " << e.what() << '\n';
        } catch (const std::invalid_argument& e) {
            err_ << "invalid argument: " << e.what() << '\n';
        } catch (const std::out_of_range& e) {
            err_ << "out of range: " << e.what() << '\n';
        } catch (const std::runtime_error& e) {
            err_ << "error: " << e.what() << '\n';
        } catch (const std::exception& e) {
            err_ << "internal error: " << e.what() << '\n';
            return internal;
        }
        return usage;
    }

    // ---- shared helpers -------------------------------------------------

    SearchOptions search() const {
        SearchOptions o;
        o.jobs = g_.jobs;
        if (g_.time_limit)
            o.deadline = std::chrono::steady_clock::now() +
                         std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(*g_.time_limit));
        return o;
    }

    std::uint64_t max_q() const { return g_.force ? UINT32_MAX : g_.max_q; }

    void budget(double count, const std::string& what) const {
        if (!g_.force && count > g_.max_subsets) {
            std::ostringstream s;
            s << what << " needs about " << count << " subsets, over the --max-subsets budget of " << g_.max_subsets
              << " (use --force)";
            throw ResourceError(s.str());
        }
    }

    static AnyGraph load(const std::string& path) { return read_graph(path); }

    static SimpleGraph load_simple(const std::string& path) {
        auto g = load(path);
        if (auto* s = std::get_if<SimpleGraph>(&g)) return std::move(*s);
        throw ValidationError("--graph " + path + ": expected a simple graph");
    }

    static BipartiteGraph load_bipartite(const std::string& path) {
        auto g = load(path);
        if (auto* b = std::get_if<BipartiteGraph>(&g)) return std::move(*b);
        if (auto* p = std::get_if<PartitionedBipartite>(&g)) return p->graph();
        throw ValidationError("--graph " + path + ": expected a bipartite graph");
    }

    static PartitionedBipartite load_partitioned(const std::string& path, const std::string& flag = "--graph") {
        auto g = load(path);
        if (auto* p = std::get_if<PartitionedBipartite>(&g)) return std::move(*p);
        throw ValidationError(flag + " " + path + ": expected a partitioned bipartite graph (JSON with blocks)");
    }

    field::FieldCtx make_field(std::uint64_t q) const {
        if (!field::as_prime_power(q)) throw ValidationError("--q " + std::to_string(q) + " is not a prime power");
        return field::FieldCtx::of_order(q, max_q());
    }

    void emit(const json& j, const std::string& path = {}) {
        out_ << j.dump(2) << '\n';
        if (!path.empty()) {
            std::ofstream f(path);
            if (!f) throw std::runtime_error("cannot open " + path + " for writing");
            f << j.dump(2) << '\n';
        }
    }

    void maybe_write(const std::string& path, const AnyGraph& g) {
        if (!path.empty()) write_graph(path, g);
    }

    // ---- field ----------------------------------------------------------

    void setup_field(CLI::App& app) {
        auto* c = app.add_subcommand("field", "build GF(q) and print its modulus and generator");
        auto* q = c->add_option("--q", p_.q, "field order (prime power)");
        auto* p = c->add_option("--p", p_.p, "characteristic");
        c->add_option("--t", p_.t, "extension degree")->needs(p);
        p->excludes(q);
        c->add_flag("--tables", p_.flag, "include exp/dlog tables");
        c->add_option("--out", p_.out, "write the JSON here too");
        c->callback([this] {
            action_ = [this] {
                if (!p_.q && !p_.p) throw ValidationError("field: give --q or --p/--t");
                auto ctx = p_.q ? make_field(*p_.q) : field::FieldCtx::make(*p_.p, p_.t.value_or(1), max_q());
                auto j = field::to_json(ctx);
                if (p_.flag) {
                    std::vector<std::uint32_t> exp;
                    for (std::uint32_t e = 0; e < ctx.group_order(); ++e) exp.push_back(ctx.exp(e).code);
                    j["exp_codes"] = exp;
                }
                emit(j, p_.out);
                return int(ok);
            };
        });
    }

    // ---- paley ----------------------------------------------------------

    void setup_paley(CLI::App& app) {
        auto* c = app.add_subcommand("paley", "build the Paley-type graph G(q, d), optionally partitioned");
        c->add_option("--q", p_.q, "field order")->required();
        c->add_option("--d", p_.d, "character order, divides q-1")->required();
        c->add_option("--s", p_.s, "partition into s blocks (JSON output)");
        c->add_option("--out", p_.out, "graph file (.json or edge list)")->required();
        c->callback([this] {
            action_ = [this] {
                auto ctx = make_field(*p_.q);
                auto g = paley::build_paley(ctx, static_cast<std::uint32_t>(*p_.d), g_.jobs);
                json summary{{"q", ctx.q()}, {"d", *p_.d}, {"edges", g.edge_count()}, {"field", field::to_json(ctx)}};
                if (p_.s) {
                    auto pg = paley::partition_blocks(ctx, std::move(g), static_cast<std::uint32_t>(*p_.s),
                                                      {{"construction", "paley"}, {"d", *p_.d}});
                    if (format_for(p_.out) != GraphFormat::json) throw ValidationError("--out: a partition needs a .json file");
                    summary["s"] = *p_.s;
                    maybe_write(p_.out, pg);
                } else {
                    maybe_write(p_.out, g);
                }
                emit(summary);
                return int(ok);
            };
        });
    }

    // ---- threshold ------------------------------------------------------

    void setup_threshold(CLI::App& app) {
        auto* c = app.add_subcommand("threshold", "explicit threshold-graph recipe for (n, k), k = 5 mod 6");
        c->add_option("--n", p_.n, "number of blocks")->required()->check(CLI::PositiveNumber);
        c->add_option("--k", p_.k, "clique parameter")->required();
        c->add_option("--out", p_.out, "partitioned graph (.json); omit to print the recipe only");
        c->callback([this] {
            action_ = [this] {
                if (p_.out.empty()) {
                    emit(paley::threshold_recipe(*p_.n, *p_.k).to_json());
                    return int(ok);
                }
                if (format_for(p_.out) != GraphFormat::json) throw ValidationError("--out: a partition needs a .json file");
                auto tg = paley::build_threshold_graph(*p_.n, *p_.k, max_q(), g_.jobs);
                maybe_write(p_.out, tg.graph);
                emit(tg.recipe.to_json());
                return int(ok);
            };
        });
    }

    // ---- sample ---------------------------------------------------------

    void setup_sample(CLI::App& app) {
        auto* c = app.add_subcommand("sample", "random bipartite graph G(nL, nR, p) or a threshold candidate");
        c->add_option("--nl", p_.nl, "left size");
        c->add_option("--nr", p_.nr, "right size");
        c->add_option("--p", p_.prob, "edge probability (candidate: overrides p_eps)");
        c->add_option("--blocks", p_.n, "candidate: number of blocks");
        c->add_option("--block-size", p_.b, "candidate: block size");
        c->add_option("--k", p_.k, "candidate: clique parameter (>= 3)");
        c->add_option("--out", p_.out, "graph file")->required();
        c->callback([this] {
            action_ = [this] {
                if (p_.n) {
                    if (!p_.k || !p_.b) throw ValidationError("sample: --blocks needs --k and --block-size");
                    randgraph::CandidateOptions co;
                    co.p = p_.prob;
                    auto pg = randgraph::sample_threshold_candidate(*p_.n, static_cast<std::int64_t>(*p_.k), *p_.b, g_.seed, co);
                    if (format_for(p_.out) != GraphFormat::json) throw ValidationError("--out: a partition needs a .json file");
                    maybe_write(p_.out, pg);
                    emit(pg.metadata());
                    return int(ok);
                }
                if (!p_.nl || !p_.nr || !p_.prob) throw ValidationError("sample: give --nl, --nr and --p (or --blocks)");
                auto g = randgraph::sample_bipartite(*p_.nl, *p_.nr, *p_.prob, g_.seed);
                maybe_write(p_.out, g);
                emit({{"left_size", *p_.nl}, {"right_size", *p_.nr}, {"p", *p_.prob}, {"seed", g_.seed},
                      {"rng", randgraph::kRngName}, {"edges", g.edge_count()}});
                return int(ok);
            };
        });
    }

    // ---- verify ---------------------------------------------------------

    void setup_verify(CLI::App& app) {
        auto* v = app.add_subcommand("verify", "threshold, freeness and lemma checkers");
        v->require_subcommand(1);

        auto* t1 = v->add_subcommand("t1", "every k+1 left vertices share at most ell neighbours");
        t1->add_option("--graph", p_.graph, "bipartite graph")->required();
        t1->add_option("--k", p_.k)->required();
        t1->add_option("--ell", p_.ell)->required();
        t1->add_option("--cert", p_.out, "write the certificate here too");
        t1->callback([this] {
            action_ = [this] {
                auto g = load_bipartite(p_.graph);
                budget(detail::binomial(g.left_size(), *p_.k + 1), "verify t1");
                auto r = verify::verify_t1(g, *p_.k, *p_.ell, search());
                json j{{"k", *p_.k}, {"ell", *p_.ell}, {"t1_holds", r.holds}, {"max_common_over_k_plus_1", r.max_common},
                       {"t1_violation", r.violation ? json(*r.violation) : json(nullptr)}};
                emit(j, p_.out);
                return r.holds ? int(ok) : int(finding);
            };
        });

        auto* t2 = v->add_subcommand("t2", "every k blocks have a transversal sharing at least h neighbours");
        t2->add_option("--graph", p_.graph, "partitioned graph (.json)")->required();
        t2->add_option("--k", p_.k)->required();
        t2->add_option("--h", p_.h)->required();
        t2->add_option("--cert", p_.out);
        t2->callback([this] {
            action_ = [this] {
                auto pg = load_partitioned(p_.graph);
                budget(t2_count(pg, *p_.k), "verify t2");
                auto r = verify::verify_t2(pg, *p_.k, *p_.h, search());
                json j{{"k", *p_.k}, {"h", *p_.h}, {"t2_holds", r.holds},
                       {"min_over_blocks_of_max_transversal", r.min_best ? json(*r.min_best) : json(nullptr)},
                       {"t2_violation", r.violation ? json(*r.violation) : json(nullptr)}};
                emit(j, p_.out);
                return r.holds ? int(ok) : int(finding);
            };
        });

        auto* th = v->add_subcommand("threshold", "(T1) and (T2) together");
        th->add_option("--graph", p_.graph, "partitioned graph (.json)")->required();
        th->add_option("--k", p_.k)->required();
        th->add_option("--ell", p_.ell)->required();
        th->add_option("--h", p_.h)->required();
        th->add_option("--cert", p_.out);
        th->callback([this] {
            action_ = [this] {
                auto pg = load_partitioned(p_.graph);
                budget(detail::binomial(pg.graph().left_size(), *p_.k + 1) + t2_count(pg, *p_.k), "verify threshold");
                auto c = verify::certify_threshold(pg, *p_.k, *p_.ell, *p_.h, search());
                emit(verify::to_json(c), p_.out);
                return c.holds() ? int(ok) : int(finding);
            };
        });

        auto* kf = v->add_subcommand("ktfree", "no a left vertices share b or more neighbours");
        kf->add_option("--graph", p_.graph)->required();
        kf->add_option("--a", p_.s)->required()->check(CLI::PositiveNumber);
        kf->add_option("--b", p_.t)->required();
        kf->add_option("--cert", p_.out);
        kf->callback([this] {
            action_ = [this] {
                auto g = load_bipartite(p_.graph);
                budget(detail::binomial(g.left_size(), *p_.s), "verify ktfree");
                auto r = verify::check_ktfree(g, *p_.s, *p_.t, search());
                json j{{"a", *p_.s}, {"b", *p_.t}, {"free", r.free}, {"witness", nullptr}};
                if (r.witness) j["witness"] = {{"left", r.witness->left}, {"right", r.witness->right}};
                emit(j, p_.out);
                return r.free ? int(ok) : int(finding);
            };
        });

        auto* in = v->add_subcommand("intersection", "solution counts per block against q/(s d^k) +- k sqrt(q)");
        in->add_option("--q", p_.q)->required();
        in->add_option("--d", p_.d)->required();
        in->add_option("--s", p_.s)->required();
        in->add_option("--k", p_.k)->required();
        in->add_option("--samples", p_.trials, "sample tuples instead of enumerating all");
        in->add_flag("--records", p_.flag, "include one record per (tuple, block)");
        in->add_option("--cert", p_.out);
        in->callback([this] {
            action_ = [this] {
                auto ctx = make_field(*p_.q);
                if (!p_.trials) budget(detail::binomial(ctx.group_order(), *p_.k), "verify intersection");
                verify::IntersectionOptions o;
                o.samples = p_.trials;
                o.seed = g_.seed;
                o.keep_records = p_.flag;
                auto r = verify::intersection_lemma_check(ctx, static_cast<std::uint32_t>(*p_.d), static_cast<std::uint32_t>(*p_.s),
                                                          static_cast<std::uint32_t>(*p_.k), o);
                emit(verify::to_json(r), p_.out);
                // Out-of-regime misses are reported but are not findings.
                return (r.all_within() || !r.in_regime) ? int(ok) : int(finding);
            };
        });

        auto* we = v->add_subcommand("weil", "character sums of f_psi against (ks-1) sqrt(q)");
        we->add_option("--q", p_.q)->required();
        we->add_option("--d", p_.d)->required();
        we->add_option("--s", p_.s, "default 1");
        we->add_option("--k", p_.k, "tuple length, default 1");
        we->add_option("--samples", p_.trials, "random (psi, tuple) draws, default 1000");
        we->add_option("--cert", p_.out);
        we->callback([this] {
            action_ = [this] {
                auto ctx = make_field(*p_.q);
                const auto d = static_cast<std::uint32_t>(*p_.d);
                const auto s = static_cast<std::uint32_t>(p_.s.value_or(1));
                const auto k = static_cast<std::uint32_t>(p_.k.value_or(1));
                if (d < 2) throw ValidationError("--d must be >= 2 for a nontrivial psi");
                if (k == 0 || k >= ctx.q()) throw ValidationError("--k must be in [1, q-1)");
                field::require_divides_group_order(ctx, d, "verify weil");
                field::require_divides_group_order(ctx, s, "verify weil");
                std::mt19937_64 rng(g_.seed);
                const std::size_t n = p_.trials.value_or(1000);
                std::size_t passed = 0;
                double worst_ratio = 0;
                json first_fail = nullptr;
                for (std::size_t i = 0; i < n; ++i) {
                    auto [a, psi, j] = draw_weil(ctx, d, s, k, rng);
                    auto r = verify::weil_sum_check(ctx, d, s, j, a, psi);
                    passed += r.pass;
                    if (r.bound > 0) worst_ratio = std::max(worst_ratio, r.sum.magnitude / r.bound);
                    if (!r.pass && first_fail.is_null()) {
                        std::vector<std::uint32_t> codes;
                        for (auto e : a) codes.push_back(e.code);
                        first_fail = {{"a", codes}, {"psi", psi}, {"j", j}, {"magnitude", r.sum.magnitude}, {"bound", r.bound}};
                    }
                }
                emit({{"q", ctx.q()}, {"d", d}, {"s", s}, {"k", k}, {"samples", n}, {"passed", passed},
                      {"max_magnitude_over_bound", worst_ratio}, {"first_failure", first_fail}},
                     p_.out);
                return passed == n ? int(ok) : int(finding);
            };
        });

        auto* pa = v->add_subcommand("partition", "block sums against the x^s parametrisation");
        pa->add_option("--q", p_.q)->required();
        pa->add_option("--s", p_.s)->required();
        pa->add_option("--trials", p_.trials, "random integer functions, default 100");
        pa->add_option("--cert", p_.out);
        pa->callback([this] {
            action_ = [this] {
                auto ctx = make_field(*p_.q);
                std::mt19937_64 rng(g_.seed);
                std::uniform_int_distribution<std::int64_t> val(-1000, 1000);
                const std::size_t n = p_.trials.value_or(100);
                std::size_t passed = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    std::vector<std::int64_t> f(ctx.q());
                    for (auto& x : f) x = val(rng);
                    passed += verify::partition_lemma_check(ctx, static_cast<std::uint32_t>(*p_.s), f).pass;
                }
                emit({{"q", ctx.q()}, {"s", *p_.s}, {"trials", n}, {"passed", passed}}, p_.out);
                return passed == n ? int(ok) : int(finding);
            };
        });
    }

    static double t2_count(const PartitionedBipartite& pg, std::size_t k) {
        std::size_t maxb = 0;
        for (const auto& b : pg.blocks()) maxb = std::max(maxb, b.size());
        return detail::binomial(pg.block_count(), k) * std::pow(static_cast<double>(maxb), static_cast<double>(k));
    }

    static std::tuple<std::vector<field::Elem>, std::vector<std::uint32_t>, std::uint64_t>
    draw_weil(const field::FieldCtx& ctx, std::uint32_t d, std::uint32_t s, std::uint32_t k, std::mt19937_64& rng) {
        std::vector<std::uint32_t> idx(ctx.group_order());
        for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::vector<field::Elem> a;
        for (std::uint32_t i = 0; i < k; ++i) {
            std::swap(idx[i], idx[i + rng() % (idx.size() - i)]);
            a.push_back(ctx.exp(idx[i]));
        }
        std::vector<std::uint32_t> psi(k, 0);
        do {
            for (auto& e : psi) e = static_cast<std::uint32_t>(rng() % d);
        } while (std::all_of(psi.begin(), psi.end(), [](auto e) { return e == 0; }));
        return {a, psi, rng() % s};
    }

    // ---- reduce ---------------------------------------------------------

    void setup_reduce(CLI::App& app) {
        auto* r = app.add_subcommand("reduce", "reduction stages");
        r->require_subcommand(1);

        auto* pl = r->add_subcommand("pipeline", "k-Clique instance to a balanced biclique instance");
        pl->add_option("--graph", p_.graph, "simple graph")->required();
        pl->add_option("--k", p_.k)->required();
        pl->add_option("--mode", p_.mode, "explicit | random | toy")->required();
        pl->add_option("--attempts", p_.trials, "threshold-graph search attempts (random/toy)");
        pl->add_option("--out", p_.out, "output bipartite graph");
        pl->add_option("--provenance", p_.out2, "write the provenance JSON here too");
        pl->callback([this] {
            action_ = [this] {
                auto g = load_simple(p_.graph);
                reduce::PipelineOptions o;
                o.mode = reduce::parse_mode(p_.mode);
                o.seed = g_.seed;
                o.max_q = max_q();
                o.jobs = g_.jobs;
                if (p_.trials) o.attempts = *p_.trials;
                auto res = reduce::full_pipeline(g, *p_.k, o);
                maybe_write(p_.out, res.graph);
                emit(res.provenance, p_.out2);
                return int(ok);
            };
        });

        auto* gp = r->add_subcommand("gap", "build H from G and a threshold graph F");
        gp->add_option("--graph", p_.graph, "simple graph G")->required();
        gp->add_option("--threshold", p_.graph2, "partitioned threshold graph F (.json)")->required();
        gp->add_option("--k", p_.k)->required();
        gp->add_option("--ell", p_.ell)->required();
        gp->add_option("--h", p_.h)->required();
        gp->add_flag("--trusted", p_.flag, "skip certification of F");
        gp->add_option("--out", p_.out, "output H");
        gp->callback([this] {
            action_ = [this] {
                auto g = load_simple(p_.graph);
                auto F = load_partitioned(p_.graph2, "--threshold");
                reduce::GapParams gpar{*p_.k, *p_.ell, *p_.h, p_.flag};
                std::optional<verify::ThresholdCert> cert;
                if (!p_.flag) {
                    budget(detail::binomial(F.graph().left_size(), *p_.k + 1) + t2_count(F, *p_.k), "reduce gap certification");
                    cert = verify::certify_threshold(F, *p_.k, *p_.ell, *p_.h, search());
                    if (!cert->holds()) {
                        emit({{"certified", false}, {"certificate", verify::to_json(*cert)}});
                        return int(finding);
                    }
                }
                auto red = reduce::gap_reduce(g, F, gpar, cert ? &*cert : nullptr, g_.jobs);
                maybe_write(p_.out, red.H);
                emit({{"certified", cert.has_value()}, {"s", red.s_param}, {"ell", red.ell}, {"h", red.h}, {"gap", red.gap},
                      {"left_size", red.H.left_size()}, {"right_size", red.H.right_size()}, {"left_labels", red.left_labels}});
                return int(ok);
            };
        });

        auto* pd = r->add_subcommand("pad", "join a (k'-k)-clique to every vertex");
        pd->add_option("--graph", p_.graph)->required();
        pd->add_option("--k", p_.k)->required();
        pd->add_option("--k2", p_.k2, "k' (default: smallest k' >= k with 6 | k'+1)");
        pd->add_option("--out", p_.out)->required();
        pd->callback([this] {
            action_ = [this] {
                auto g = load_simple(p_.graph);
                const auto k2 = p_.k2 ? *p_.k2 : static_cast<std::size_t>(paley::pad_parameter(*p_.k));
                auto out = reduce::pad_clique_instance(g, *p_.k, k2);
                maybe_write(p_.out, out);
                emit({{"k", *p_.k}, {"k2", k2}, {"n", out.size()}});
                return int(ok);
            };
        });

        auto* dc = r->add_subcommand("double-cover", "bipartite double cover of a simple graph");
        dc->add_option("--graph", p_.graph)->required();
        dc->add_option("--out", p_.out)->required();
        dc->callback([this] {
            action_ = [this] {
                auto out = reduce::bipartite_double_cover(load_simple(p_.graph));
                maybe_write(p_.out, out);
                emit({{"left_size", out.left_size()}, {"right_size", out.right_size()}, {"edges", out.edge_count()}});
                return int(ok);
            };
        });

        auto* ba = r->add_subcommand("balance", "add t-s universal left vertices");
        ba->add_option("--graph", p_.graph)->required();
        ba->add_option("--s", p_.s)->required();
        ba->add_option("--t", p_.t)->required();
        ba->add_option("--out", p_.out)->required();
        ba->callback([this] {
            action_ = [this] {
                auto out = reduce::balance_biclique(load_bipartite(p_.graph), *p_.s, *p_.t);
                maybe_write(p_.out, out);
                emit({{"left_size", out.left_size()}, {"right_size", out.right_size()}, {"k", *p_.t}});
                return int(ok);
            };
        });

        auto* cc = r->add_subcommand("ccsp", "encode K_{k,k} in the bipartite complement as a CCSP");
        cc->add_option("--graph", p_.graph)->required();
        cc->add_option("--k", p_.k)->required();
        cc->add_flag("--bare", p_.flag, "no side domains (every variable over {0,1,2})");
        cc->add_flag("--solve", p_.flag2, "brute-force the instance; exit 1 if unsatisfiable");
        cc->add_option("--out", p_.out, "write the instance JSON here too");
        cc->callback([this] {
            action_ = [this] {
                auto g = load_bipartite(p_.graph);
                auto inst = ccsp::encode_ccsp(g, *p_.k, !p_.flag);
                auto j = ccsp::to_json(inst);
                int code = ok;
                if (p_.flag2) {
                    budget(detail::binomial(inst.variables(), *p_.k) * detail::binomial(inst.variables(), *p_.k), "reduce ccsp --solve");
                    auto sol = ccsp::solve_brute_force(inst);
                    j["satisfiable"] = sol.has_value();
                    if (sol) {
                        std::vector<int> v(sol->begin(), sol->end());
                        j["assignment"] = v;
                    } else {
                        code = finding;
                    }
                }
                emit(j, p_.out);
                return code;
            };
        });
    }

    // ---- solve ----------------------------------------------------------

    void setup_solve(CLI::App& app) {
        auto* s = app.add_subcommand("solve", "brute-force oracles");
        s->require_subcommand(1);

        auto* cl = s->add_subcommand("clique", "lexicographically first k-clique");
        cl->add_option("--graph", p_.graph)->required();
        cl->add_option("--k", p_.k)->required();
        cl->callback([this] {
            action_ = [this] {
                auto g = load_simple(p_.graph);
                budget(detail::binomial(g.size(), *p_.k), "solve clique");
                auto w = verify::find_clique(g, *p_.k, search());
                emit({{"found", w.has_value()}, {"witness", w ? *w : std::vector<Vertex>{}}});
                return w ? int(ok) : int(finding);
            };
        });

        auto* bc = s->add_subcommand("biclique", "s left vertices with t common neighbours");
        bc->add_option("--graph", p_.graph)->required();
        bc->add_option("--s", p_.s)->required()->check(CLI::PositiveNumber);
        bc->add_option("--t", p_.t)->required();
        bc->callback([this] {
            action_ = [this] {
                auto g = load_bipartite(p_.graph);
                budget(detail::binomial(g.left_size(), *p_.s), "solve biclique");
                auto w = verify::find_biclique(g, *p_.s, *p_.t, search());
                json j{{"found", w.has_value()}, {"witness", {{"left", json::array()}, {"right", json::array()}}}};
                if (w) j["witness"] = {{"left", w->left}, {"right", w->right}};
                emit(j);
                return w ? int(ok) : int(finding);
            };
        });

        auto* mi = s->add_subcommand("intersection", "maximum k-intersection of a set family");
        mi->add_option("--sets", p_.graph, "JSON array of arrays, or one set per line")->required();
        mi->add_option("--k", p_.k)->required();
        mi->callback([this] {
            action_ = [this] {
                auto fam = load_sets(p_.graph);
                budget(detail::binomial(fam.size(), *p_.k), "solve intersection");
                auto r = verify::max_k_intersection(fam, *p_.k, std::nullopt, search());
                emit({{"size", r.size}, {"indices", r.indices}, {"intersection", r.intersection}});
                return int(ok);
            };
        });
    }

    static std::vector<std::vector<std::size_t>> load_sets(const std::string& path) {
        const auto text = slurp(path);
        if (format_for(path) == GraphFormat::json) {
            try {
                return parse_json_text(text).get<std::vector<std::vector<std::size_t>>>();
            } catch (const json::exception& e) {
                throw ValidationError(std::string("--sets: ") + e.what());
            }
        }
        std::vector<std::vector<std::size_t>> fam;
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        std::vector<std::size_t> tok;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line[0] == '#') continue;
            if (!detail::parse_uint_tokens(line, tok)) throw ParseError(lineno, "expected non-negative integers");
            fam.push_back(tok);
        }
        return fam;
    }

    // ---- sweep ----------------------------------------------------------

    void setup_sweep(CLI::App& app) {
        auto* c = app.add_subcommand("sweep", "Monte Carlo success fractions as CSV");
        c->add_option("--n", p_.ns, "block counts (each block has n vertices)")->required();
        c->add_option("--k", p_.ks, "clique parameters (>= 3)")->required();
        c->add_option("--trials", p_.trials, "trials per cell")->required()->check(CLI::PositiveNumber);
        c->add_option("--h", p_.h, "override h = k^2");
        c->add_option("--out", p_.out, "CSV file (stdout if omitted)");
        c->callback([this] {
            action_ = [this] {
                randgraph::SuccessOptions o;
                o.h = p_.h;
                o.jobs = g_.jobs;
                auto rows = randgraph::sweep(p_.ns, p_.ks, *p_.trials, g_.seed, o);
                const auto csv = randgraph::sweep_csv(rows);
                if (p_.out.empty()) {
                    out_ << csv;
                } else {
                    std::ofstream f(p_.out, std::ios::binary);
                    if (!f) throw std::runtime_error("cannot open " + p_.out + " for writing");
                    f << csv;
                }
                return int(ok);
            };
        });
    }

    // Parameters shared across subcommands; only one subcommand runs per call.
    struct Params {
        std::optional<std::uint64_t> q, p, n;
        std::optional<std::uint32_t> t;
        std::optional<std::uint64_t> d;
        std::optional<std::size_t> s, k, k2, b, nl, nr, trials, ell, h;
        std::optional<double> prob;
        std::string graph, graph2, out, out2, mode;
        std::vector<std::size_t> ns;
        std::vector<std::int64_t> ks;
        bool flag = false, flag2 = false;
    };

    std::ostream& out_;
    std::ostream& err_;
    Globals g_;
    Params p_;
    std::function<int()> action_ = [] { return int(usage); };
};

inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return Runner(out, err).run(argc, argv);
}

} // namespace biclique::cli
