#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tsch {

// Bit vector packed LSB-first into 64-bit words. Bits past size() are kept
// zero so equality and word-level scans work on the raw words.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : words_((n + 63) / 64, 0), size_(n) {}

    void push_back(bool bit) {
        if (size_ == words_.size() * 64) words_.push_back(0);
        if (bit) words_[size_ / 64] |= 1ULL << (size_ % 64);
        ++size_;
    }

    void set(std::size_t i, bool bit) {
        const std::uint64_t mask = 1ULL << (i % 64);
        if (bit) words_[i / 64] |= mask;
        else     words_[i / 64] &= ~mask;
    }

    bool operator[](std::size_t i) const {
        return (words_[i / 64] >> (i % 64)) & 1ULL;
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    std::size_t count_ones() const {
        std::size_t n = 0;
        for (std::uint64_t w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    // 64 bits starting at `bit`, zero-padded past the end.
    std::uint64_t word_at(std::size_t bit) const {
        const std::size_t q = bit / 64, r = bit % 64;
        std::uint64_t lo = q < words_.size() ? words_[q] : 0;
        if (r == 0) return lo;
        std::uint64_t hi = q + 1 < words_.size() ? words_[q + 1] : 0;
        return (lo >> r) | (hi << (64 - r));
    }

    BitVec slice(std::size_t offset, std::size_t len) const {
        BitVec out(len);
        for (std::size_t i = 0; i < len; i += 64) {
            std::uint64_t w = word_at(offset + i);
            if (len - i < 64) w &= (1ULL << (len - i)) - 1;
            out.words_[i / 64] = w;
        }
        return out;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    // LSB-first byte stream, zero-padded to a byte boundary.
    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out((size_ + 7) / 8);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
        return out;
    }

    static BitVec from_bytes(const std::uint8_t* data, std::size_t nbits) {
        BitVec out(nbits);
        const std::size_t nbytes = (nbits + 7) / 8;
        for (std::size_t i = 0; i < nbytes; ++i)
            out.words_[i / 8] |= static_cast<std::uint64_t>(data[i]) << (8 * (i % 8));
        const std::size_t tail = nbits % 64;
        if (tail != 0) out.words_.back() &= (1ULL << tail) - 1;
        return out;
    }

    bool operator==(const BitVec&) const = default;

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

} // namespace tsch
