#pragma once

// Exact arithmetic in GF(p^t): polynomials over GF(p), irreducibility search,
// generators, discrete logs and order-d multiplicative characters.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "biclique/errors.hpp"

namespace biclique::field {

/// Largest field the context will build tables for unless told otherwise.
inline constexpr std::uint64_t kDefaultMaxQ = std::uint64_t{1} << 20;

/// Deterministic trial division.
inline bool is_prime(std::uint64_t m) {
    if (m < 2) return false;
    if (m % 2 == 0) return m == 2;
    for (std::uint64_t d = 3; d <= m / d; d += 2)
        if (m % d == 0) return false;
    return true;
}

/// Smallest prime in [m, 2m]; Bertrand's postulate guarantees one exists.
inline std::uint64_t bertrand_prime(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("bertrand_prime: m must be >= 1");
    for (std::uint64_t c = std::max<std::uint64_t>(m, 2);; ++c)
        if (is_prime(c)) return c;
}

/// Distinct prime factors in increasing order.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d <= n / d; ++d) {
        if (n % d) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

/// (p, t) with q = p^t, or nullopt when q is not a prime power.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>> as_prime_power(std::uint64_t q) {
    if (q < 2) return std::nullopt;
    auto f = prime_factors(q);
    if (f.size() != 1) return std::nullopt;
    std::uint32_t t = 0;
    for (std::uint64_t r = q; r > 1; r /= f[0]) ++t;
    return std::pair{static_cast<std::uint32_t>(f[0]), t};
}

/// Checked integer power; nullopt on overflow.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) return std::nullopt;
        r *= base;
    }
    return r;
}

inline std::uint32_t mod_pow(std::uint64_t a, std::uint64_t e, std::uint32_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

/// Polynomial over GF(p); coefficient i multiplies X^i. Always trimmed, so the
/// leading stored coefficient is nonzero (the zero polynomial stores nothing).
class Poly {
  public:
    Poly(std::uint32_t p, std::vector<std::uint32_t> coeffs) : p_(p), c_(std::move(coeffs)) {
        if (p_ < 2) throw std::invalid_argument("Poly: modulus must be >= 2");
        for (auto& c : c_) c %= p_;
        trim();
    }

    std::uint32_t characteristic() const noexcept { return p_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    std::span<const std::uint32_t> coeffs() const noexcept { return c_; }
    std::uint32_t operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    std::uint32_t leading() const noexcept { return c_.empty() ? 0 : c_.back(); }

    /// Scaled to leading coefficient 1.
    Poly monic() const {
        if (is_zero()) return *this;
        auto inv = mod_pow(leading(), p_ - 2, p_);
        std::vector<std::uint32_t> c(c_);
        for (auto& x : c) x = static_cast<std::uint32_t>(std::uint64_t{x} * inv % p_);
        return Poly(p_, std::move(c));
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            auto c = c_[static_cast<std::size_t>(i)];
            if (!c) continue;
            if (!s.empty()) s += "+";
            if (c != 1 || i == 0) s += std::to_string(c);
            if (i >= 1) s += "X";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s;
    }

    friend bool operator==(const Poly&, const Poly&) = default;

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::uint32_t p_;
    std::vector<std::uint32_t> c_;
};

/// a mod m (m nonzero, same characteristic).
inline Poly poly_rem(const Poly& a, const Poly& m) {
    if (m.is_zero()) throw DomainError("poly_rem: division by the zero polynomial");
    const std::uint32_t p = a.characteristic();
    std::vector<std::uint64_t> r(a.coeffs().begin(), a.coeffs().end());
    const auto dm = static_cast<std::size_t>(m.degree());
    const std::uint64_t lead_inv = mod_pow(m.leading(), p - 2, p);
    for (std::size_t i = r.size(); i-- > dm;) {
        const std::uint64_t c = r[i] % p * lead_inv % p;
        if (!c) continue;
        for (std::size_t j = 0; j <= dm; ++j) r[i - dm + j] = (r[i - dm + j] + (p - c) * m[j]) % p;
    }
    r.resize(std::min(r.size(), dm));
    return Poly(p, std::vector<std::uint32_t>(r.begin(), r.end()));
}

/// Exhaustive trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const Poly& f) {
    const int deg = f.degree();
    if (deg <= 0) return false;
    if (deg == 1) return true;
    const std::uint32_t p = f.characteristic();
    for (int e = 1; e <= deg / 2; ++e) {
        const auto count = *checked_pow(p, static_cast<std::uint32_t>(e));
        std::vector<std::uint32_t> c(static_cast<std::size_t>(e) + 1, 0);
        c.back() = 1;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::uint64_t v = idx;
            for (int i = 0; i < e; ++i, v /= p) c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(v % p);
            if (poly_rem(f, Poly(p, c)).is_zero()) return false;
        }
    }
    return true;
}

/// Lexicographically smallest (constant term first) monic irreducible of degree t.
inline Poly find_irreducible(std::uint32_t p, std::uint32_t t) {
    if (!is_prime(p)) throw std::invalid_argument("find_irreducible: p = " + std::to_string(p) + " is not prime");
    if (t == 0) throw std::invalid_argument("find_irreducible: degree must be >= 1");
    const auto count = checked_pow(p, t);
    if (!count || *count > (std::uint64_t{1} << 40)) throw ResourceError("find_irreducible: p^t too large");
    std::vector<std::uint32_t> c(t + 1, 0);
    c[t] = 1;
    for (std::uint64_t idx = 0; idx < *count; ++idx) {
        // c[0] is the most significant digit of idx.
        std::uint64_t v = idx;
        for (std::uint32_t i = t; i-- > 0; v /= p) c[i] = static_cast<std::uint32_t>(v % p);
        Poly f(p, c);
        if (is_irreducible(f)) return f;
    }
    throw DomainError("find_irreducible: no irreducible polynomial found"); // unreachable for prime p
}

/// Field element: the reduced polynomial sum c_i X^i encoded as sum c_i p^i.
struct Elem {
    std::uint32_t code = 0;
    friend constexpr auto operator<=>(Elem, Elem) = default;
};

class FieldCtx;
Elem find_generator(const FieldCtx& ctx);

/// GF(p^t) = GF(p)[X]/(modulus) with an eagerly built discrete-log table.
/// Immutable after construction.
class FieldCtx {
  public:
    /// Builds the context. When `generator` is given it is validated, otherwise
    /// the canonical smallest generator is searched for.
    explicit FieldCtx(const Poly& modulus, std::optional<Elem> generator = std::nullopt,
                      std::uint64_t max_q = kDefaultMaxQ)
        : modulus_(modulus.monic()) {
        p_ = modulus_.characteristic();
        if (!is_prime(p_)) throw ValidationError("FieldCtx: characteristic " + std::to_string(p_) + " is not prime");
        if (modulus_.degree() < 1) throw ValidationError("FieldCtx: modulus must have degree >= 1");
        t_ = static_cast<std::uint32_t>(modulus_.degree());
        auto q = checked_pow(p_, t_);
        if (!q || *q > max_q)
            throw ResourceError("FieldCtx: q = " + std::to_string(p_) + "^" + std::to_string(t_) +
                                " exceeds the field-size budget " + std::to_string(max_q));
        q_ = static_cast<std::uint32_t>(*q);
        if (!is_irreducible(modulus_))
            throw ValidationError("FieldCtx: modulus " + modulus_.to_string() + " is not irreducible");

        if (generator) {
            if (!contains(*generator) || generator->code == 0)
                throw ValidationError("FieldCtx: generator is not a nonzero field element");
            generator_ = *generator;
        } else {
            generator_ = find_generator(*this);
        }

        exp_.resize(q_ - 1);
        dlog_.assign(q_, kNoLog);
        Elem x = one();
        for (std::uint32_t e = 0; e < q_ - 1; ++e) {
            if (dlog_[x.code] != kNoLog)
                throw ValidationError("FieldCtx: element " + std::to_string(generator_.code) +
                                      " does not generate the multiplicative group");
            exp_[e] = x;
            dlog_[x.code] = e;
            x = mul(x, generator_);
        }
    }

    static FieldCtx make(std::uint32_t p, std::uint32_t t, std::uint64_t max_q = kDefaultMaxQ) {
        if (auto q = checked_pow(p, t); !q || *q > max_q)
            throw ResourceError("FieldCtx: q = " + std::to_string(p) + "^" + std::to_string(t) +
                                " exceeds the field-size budget " + std::to_string(max_q));
        return FieldCtx(find_irreducible(p, t), std::nullopt, max_q);
    }

    /// GF(q) for a prime power q.
    static FieldCtx of_order(std::uint64_t q, std::uint64_t max_q = kDefaultMaxQ) {
        auto pt = as_prime_power(q);
        if (!pt) throw std::invalid_argument("FieldCtx: q = " + std::to_string(q) + " is not a prime power");
        return make(pt->first, pt->second, max_q);
    }

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t t() const noexcept { return t_; }
    std::uint32_t q() const noexcept { return q_; }
    /// Order of the multiplicative group.
    std::uint32_t group_order() const noexcept { return q_ - 1; }
    const Poly& modulus() const noexcept { return modulus_; }
    Elem generator() const noexcept { return generator_; }

    Elem zero() const noexcept { return {0}; }
    Elem one() const noexcept { return {1}; }
    bool contains(Elem x) const noexcept { return x.code < q_; }

    Elem element(std::uint32_t code) const {
        if (code >= q_) throw std::out_of_range("FieldCtx: element code " + std::to_string(code) + " >= q");
        return {code};
    }

    Elem from_coeffs(std::span<const std::uint32_t> c) const {
        if (c.size() > t_) {
            // Reduce modulo the field polynomial.
            auto r = poly_rem(Poly(p_, {c.begin(), c.end()}), modulus_);
            return from_coeffs(r.coeffs());
        }
        std::uint32_t code = 0;
        for (std::size_t i = c.size(); i-- > 0;) code = code * p_ + c[i] % p_;
        return {code};
    }

    /// Coefficients c_0..c_{t-1}.
    std::vector<std::uint32_t> coeffs(Elem x) const {
        std::vector<std::uint32_t> c(t_);
        for (std::uint32_t i = 0; i < t_; ++i, x.code /= p_) c[i] = x.code % p_;
        return c;
    }

    /// Image of the integer v under Z -> GF(p) -> GF(q).
    Elem from_integer(std::int64_t v) const {
        auto r = v % static_cast<std::int64_t>(p_);
        return {static_cast<std::uint32_t>(r < 0 ? r + p_ : r)};
    }

    Elem add(Elem a, Elem b) const {
        if (t_ == 1) return {static_cast<std::uint32_t>((std::uint64_t{a.code} + b.code) % p_)};
        std::uint32_t out = 0, place = 1;
        for (std::uint32_t i = 0; i < t_; ++i, place *= p_) {
            out += ((a.code % p_ + b.code % p_) % p_) * place;
            a.code /= p_;
            b.code /= p_;
        }
        return {out};
    }

    Elem neg(Elem a) const {
        if (t_ == 1) return {a.code ? p_ - a.code : 0};
        std::uint32_t out = 0, place = 1;
        for (std::uint32_t i = 0; i < t_; ++i, place *= p_) {
            auto c = a.code % p_;
            out += (c ? p_ - c : 0) * place;
            a.code /= p_;
        }
        return {out};
    }

    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    /// Schoolbook product reduced by the (monic) modulus. Independent of the
    /// discrete-log tables, which are built from it.
    Elem mul(Elem a, Elem b) const {
        if (t_ == 1) return {static_cast<std::uint32_t>(std::uint64_t{a.code} * b.code % p_)};
        const auto ca = coeffs(a), cb = coeffs(b);
        std::vector<std::uint64_t> prod(2 * t_ - 1, 0);
        for (std::uint32_t i = 0; i < t_; ++i) {
            if (!ca[i]) continue;
            for (std::uint32_t j = 0; j < t_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{ca[i]} * cb[j]) % p_;
        }
        // X^t = -(m_0 + ... + m_{t-1} X^{t-1})
        for (std::size_t i = prod.size(); i-- > t_;) {
            const auto c = prod[i];
            if (!c) continue;
            for (std::uint32_t j = 0; j < t_; ++j) prod[i - t_ + j] = (prod[i - t_ + j] + (p_ - c) * modulus_[j]) % p_;
            prod[i] = 0;
        }
        std::uint32_t code = 0;
        for (std::uint32_t i = t_; i-- > 0;) code = code * p_ + static_cast<std::uint32_t>(prod[i]);
        return {code};
    }

    /// Square-and-multiply.
    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    /// a^{q-2}; throws DomainError for zero.
    Elem inv(Elem a) const {
        if (a.code == 0) throw DomainError("FieldCtx::inv: zero has no inverse");
        return pow(a, q_ - 2);
    }

    /// Exponent e in [0, q-2] with g^e = x.
    std::uint32_t dlog(Elem x) const {
        if (x.code == 0) throw DomainError("FieldCtx::dlog: zero has no discrete logarithm");
        return dlog_.at(x.code);
    }

    /// g^e for any e (reduced modulo q-1).
    Elem exp(std::uint64_t e) const { return exp_[e % (q_ - 1)]; }

    /// Rank of x in the canonical order: lexicographic on (c_0, c_1, ..., c_{t-1}).
    std::uint32_t canonical_rank(Elem x) const {
        std::uint32_t r = 0;
        for (auto c : coeffs(x)) r = r * p_ + c;
        return r;
    }

    /// Inverse of canonical_rank.
    Elem canonical_element(std::uint32_t rank) const {
        std::vector<std::uint32_t> c(t_);
        for (std::uint32_t i = t_; i-- > 0; rank /= p_) c[i] = rank % p_;
        return from_coeffs(c);
    }

  private:
    static constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

    Poly modulus_;
    std::uint32_t p_ = 0;
    std::uint32_t t_ = 0;
    std::uint32_t q_ = 0;
    Elem generator_{};
    std::vector<Elem> exp_;
    std::vector<std::uint32_t> dlog_;
};

/// Multiplicative order of x, via the prime factorisation of q-1.
inline bool has_full_order(const FieldCtx& ctx, Elem x) {
    if (x.code == 0) return false;
    const std::uint64_t n = ctx.q() - 1;
    if (ctx.pow(x, n) != ctx.one()) return false;
    for (auto r : prime_factors(n))
        if (ctx.pow(x, n / r) == ctx.one()) return false;
    return true;
}

/// Smallest element (canonical order) of multiplicative order q-1.
inline Elem find_generator(const FieldCtx& ctx) {
    for (std::uint32_t rank = 1; rank < ctx.q(); ++rank) {
        Elem x = ctx.canonical_element(rank);
        if (has_full_order(ctx, x)) return x;
    }
    throw DomainError("find_generator: multiplicative group has no generator"); // unreachable
}

/// Order-d multiplicative character χ(g^l) = ω^l, ω a primitive d-th root of unity.
struct CharSpec {
    std::uint32_t order = 1;
};

inline void require_divides_group_order(const FieldCtx& ctx, std::uint64_t d, const char* who) {
    if (d == 0 || ctx.group_order() % d)
        throw DomainError(std::string(who) + ": d = " + std::to_string(d) + " does not divide q-1 = " +
                          std::to_string(ctx.group_order()));
}

/// dlog(x) mod d, i.e. the m with χ(x) = ω^m.
inline std::uint32_t char_exponent(const FieldCtx& ctx, std::uint32_t d, Elem x) {
    require_divides_group_order(ctx, d, "char_exponent");
    if (x.code == 0) throw DomainError("char_exponent: χ(0) = 0 has no exponent");
    return ctx.dlog(x) % d;
}

/// x^{(q-1)/d} = 1, evaluated by exponentiation rather than the log table.
inline bool is_dth_power_residue(const FieldCtx& ctx, std::uint32_t d, Elem x) {
    require_divides_group_order(ctx, d, "is_dth_power_residue");
    if (x.code == 0) throw DomainError("is_dth_power_residue: x must be nonzero");
    return ctx.pow(x, ctx.group_order() / d) == ctx.one();
}

/// V_i = {g^{i+s}, g^{i+2s}, ..., g^{i+rs}} with exponents reduced mod q-1, i in [1, s].
inline std::vector<Elem> coset_block(const FieldCtx& ctx, std::uint32_t s, std::uint32_t i) {
    require_divides_group_order(ctx, s, "coset_block");
    if (i < 1 || i > s) throw std::out_of_range("coset_block: block index must be in [1, s]");
    const std::uint32_t r = ctx.group_order() / s;
    std::vector<Elem> out;
    out.reserve(r);
    for (std::uint64_t j = 1; j <= r; ++j) out.push_back(ctx.exp(i + j * s));
    return out;
}

inline nlohmann::json to_json(const FieldCtx& ctx) {
    std::vector<std::uint32_t> mod(ctx.modulus().coeffs().begin(), ctx.modulus().coeffs().end());
    return {{"p", ctx.p()},
            {"t", ctx.t()},
            {"q", ctx.q()},
            {"modulus_coeffs", mod},
            {"generator_coeffs", ctx.coeffs(ctx.generator())}};
}

inline FieldCtx field_from_json(const nlohmann::json& j, std::uint64_t max_q = kDefaultMaxQ) {
    try {
        const auto p = j.at("p").get<std::uint32_t>();
        const auto t = j.at("t").get<std::uint32_t>();
        Poly modulus(p, j.at("modulus_coeffs").get<std::vector<std::uint32_t>>());
        if (modulus.degree() != static_cast<int>(t)) throw ValidationError("field json: modulus degree != t");
        std::optional<Elem> g;
        if (j.contains("generator_coeffs")) {
            auto gc = j.at("generator_coeffs").get<std::vector<std::uint32_t>>();
            if (gc.size() > t) throw ValidationError("field json: generator has more than t coefficients");
            std::uint32_t code = 0;
            for (std::size_t i = gc.size(); i-- > 0;) {
                if (gc[i] >= p) throw ValidationError("field json: generator coefficient out of range");
                code = code * p + gc[i];
            }
            g = Elem{code};
        }
        FieldCtx ctx(modulus, g, max_q);
        if (!has_full_order(ctx, ctx.generator())) throw ValidationError("field json: generator has wrong order");
        return ctx;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("field json: ") + e.what());
    }
}

} // namespace biclique::field
