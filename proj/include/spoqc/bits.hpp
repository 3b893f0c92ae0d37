#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace spoqc {

/// Dynamically sized bit vector packed into 64-bit words.
///
/// Bits past size() in the last word are kept zero so that word-level
/// comparisons, hashing and popcounts are exact.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t num_bits)
        : num_bits_(num_bits), words_((num_bits + 63) / 64, 0) {}

    std::size_t size() const { return num_bits_; }
    std::size_t num_words() const { return words_.size(); }

    bool get(std::size_t k) const { return (words_[k >> 6] >> (k & 63)) & 1; }
    void set(std::size_t k, bool v) {
        uint64_t m = uint64_t{1} << (k & 63);
        if (v) {
            words_[k >> 6] |= m;
        } else {
            words_[k >> 6] &= ~m;
        }
    }
    void flip(std::size_t k) { words_[k >> 6] ^= uint64_t{1} << (k & 63); }

    /// Grows (or shrinks) the vector; new bits are zero.
    void resize(std::size_t num_bits) {
        num_bits_ = num_bits;
        words_.resize((num_bits + 63) / 64, 0);
        if (num_bits & 63) {
            words_.back() &= (uint64_t{1} << (num_bits & 63)) - 1;
        }
    }

    BitVector& operator^=(const BitVector& other) {
        std::size_t n = std::min(words_.size(), other.words_.size());
        for (std::size_t i = 0; i < n; i++) {
            words_[i] ^= other.words_[i];
        }
        return *this;
    }
    BitVector& operator&=(const BitVector& other) {
        std::size_t n = std::min(words_.size(), other.words_.size());
        for (std::size_t i = 0; i < n; i++) {
            words_[i] &= other.words_[i];
        }
        for (std::size_t i = n; i < words_.size(); i++) {
            words_[i] = 0;
        }
        return *this;
    }

    bool none() const {
        for (uint64_t w : words_) {
            if (w) {
                return false;
            }
        }
        return true;
    }
    bool any() const { return !none(); }
    std::size_t popcount() const {
        std::size_t c = 0;
        for (uint64_t w : words_) {
            c += std::popcount(w);
        }
        return c;
    }
    /// Index of the lowest set bit, or size() when empty.
    std::size_t first_one() const {
        for (std::size_t i = 0; i < words_.size(); i++) {
            if (words_[i]) {
                return i * 64 + std::countr_zero(words_[i]);
            }
        }
        return num_bits_;
    }
    /// Parity of the bitwise AND with another vector.
    bool dot(const BitVector& other) const {
        uint64_t acc = 0;
        std::size_t n = std::min(words_.size(), other.words_.size());
        for (std::size_t i = 0; i < n; i++) {
            acc ^= words_[i] & other.words_[i];
        }
        return std::popcount(acc) & 1;
    }

    template <typename F>
    void for_each_one(F&& f) const {
        for (std::size_t i = 0; i < words_.size(); i++) {
            uint64_t w = words_[i];
            while (w) {
                f(i * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
    }
    std::vector<uint32_t> ones() const {
        std::vector<uint32_t> out;
        for_each_one([&](std::size_t k) { out.push_back(static_cast<uint32_t>(k)); });
        return out;
    }

    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    uint64_t* data() { return words_.data(); }
    const uint64_t* data() const { return words_.data(); }
    uint64_t& word(std::size_t i) { return words_[i]; }
    uint64_t word(std::size_t i) const { return words_[i]; }

    bool operator==(const BitVector& other) const = default;

    std::size_t hash() const {
        std::size_t h = num_bits_ * 0x9E3779B97F4A7C15ull;
        for (uint64_t w : words_) {
            h ^= std::hash<uint64_t>{}(w) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        }
        return h;
    }

  private:
    std::size_t num_bits_ = 0;
    std::vector<uint64_t> words_;
};

struct BitVectorHash {
    std::size_t operator()(const BitVector& v) const { return v.hash(); }
};

}  // namespace spoqc
