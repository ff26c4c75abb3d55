#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "tsch/bitvec.hpp"
#include "tsch/types.hpp"

namespace tsch {

// Per-link slot-usage record: one bit per scheduled occurrence of the link,
// in occurrence order. t_matrix_us is the slotframe duration, i.e. the
// sampling interval of a once-per-frame link.
class LinkTrace {
public:
    LinkTrace() = default;
    LinkTrace(Edge edge, std::uint64_t t_matrix_us, BitVec bits = {})
        : edge_(edge), t_matrix_us_(t_matrix_us), bits_(std::move(bits)) {}

    const Edge& edge() const { return edge_; }
    std::uint64_t t_matrix_us() const { return t_matrix_us_; }
    double t_matrix_s() const { return static_cast<double>(t_matrix_us_) * 1e-6; }

    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i]; }
    const BitVec& bits() const { return bits_; }

    void append(bool used) { bits_.push_back(used); }
    std::size_t ones() const { return bits_.count_ones(); }

    LinkTrace slice(std::size_t offset, std::size_t len) const {
        return LinkTrace(edge_, t_matrix_us_, bits_.slice(offset, len));
    }

    bool operator==(const LinkTrace&) const = default;

private:
    Edge edge_;
    std::uint64_t t_matrix_us_ = 0;
    BitVec bits_;
};

// Trace file: magic "TSLT", then little-endian version u16, sender u16,
// receiver u16, sample count u64, t_matrix in microseconds u64; payload is
// the samples bit-packed LSB-first, zero-padded to a byte boundary.
inline constexpr char kTraceMagic[4] = {'T', 'S', 'L', 'T'};
inline constexpr std::uint16_t kTraceVersion = 1;

void write_trace(const LinkTrace& trace, const std::string& path);
LinkTrace read_trace(const std::string& path);

} // namespace tsch
