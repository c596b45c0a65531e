#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace biclique {

/// Fixed-width bit row. Every common-neighbourhood computation in the
/// library is an AND over these followed by a popcount.
class BitRow {
  public:
    using word_type = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    BitRow() = default;
    explicit BitRow(std::size_t width) : width_(width), words_((width + word_bits - 1) / word_bits, 0) {}

    std::size_t size() const noexcept { return width_; }

    bool test(std::size_t i) const {
        assert(i < width_);
        return (words_[i / word_bits] >> (i % word_bits)) & 1U;
    }
    void set(std::size_t i) {
        assert(i < width_);
        words_[i / word_bits] |= word_type{1} << (i % word_bits);
    }
    void reset(std::size_t i) {
        assert(i < width_);
        words_[i / word_bits] &= ~(word_type{1} << (i % word_bits));
    }
    void set_all() {
        std::fill(words_.begin(), words_.end(), ~word_type{0});
        trim();
    }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool none() const noexcept {
        return std::all_of(words_.begin(), words_.end(), [](word_type w) { return w == 0; });
    }
    bool any() const noexcept { return !none(); }

    BitRow& operator&=(const BitRow& o) {
        assert(o.width_ == width_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    BitRow& operator|=(const BitRow& o) {
        assert(o.width_ == width_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    friend BitRow operator&(BitRow a, const BitRow& b) { return a &= b; }

    /// *this = a & b; returns the popcount of the result.
    std::size_t assign_and(const BitRow& a, const BitRow& b) {
        assert(a.width_ == b.width_);
        width_ = a.width_;
        words_.resize(a.words_.size());
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            words_[i] = a.words_[i] & b.words_[i];
            c += static_cast<std::size_t>(std::popcount(words_[i]));
        }
        return c;
    }

    /// popcount(*this & o) without materialising the intersection.
    std::size_t and_count(const BitRow& o) const {
        assert(o.width_ == width_);
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
        return c;
    }

    bool is_subset_of(const BitRow& o) const {
        assert(o.width_ == width_);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    template <typename F> void for_each_set(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            word_type w = words_[wi];
            while (w) {
                f(wi * word_bits + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each_set([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    /// The first `n` set positions (fewer if the row is sparser).
    std::vector<std::size_t> first_indices(std::size_t n) const {
        std::vector<std::size_t> out;
        for (std::size_t wi = 0; wi < words_.size() && out.size() < n; ++wi) {
            word_type w = words_[wi];
            while (w && out.size() < n) {
                out.push_back(wi * word_bits + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }

    std::span<const word_type> words() const noexcept { return words_; }

    friend bool operator==(const BitRow&, const BitRow&) = default;

  private:
    void trim() {
        if (width_ % word_bits && !words_.empty()) words_.back() &= (word_type{1} << (width_ % word_bits)) - 1;
    }

    std::size_t width_ = 0;
    std::vector<word_type> words_;
};

} // namespace biclique
