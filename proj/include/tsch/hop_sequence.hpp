#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "tsch/errors.hpp"

namespace tsch {

// Channel-hopping list H. IEEE 2.4 GHz channels are numbered 11..26; the
// default is the identity permutation over all 16 of them.
class HopSequence {
public:
    static constexpr int kFirstChannel = 11;
    static constexpr int kLastChannel = 26;

    HopSequence() : channels_(16) {
        std::iota(channels_.begin(), channels_.end(), kFirstChannel);
    }
    explicit HopSequence(std::vector<int> channels) : channels_(std::move(channels)) {}

    int size() const { return static_cast<int>(channels_.size()); }
    int operator[](int i) const { return channels_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& channels() const { return channels_; }

    // Empty when well-formed: non-empty, entries in [11,26], and a permutation
    // of the full band when 16 entries long.
    std::vector<std::string> problems() const;

private:
    std::vector<int> channels_;
};

// ch_phy = H[(ASN + ch_offset) mod |H|]
inline int physical_channel(std::uint64_t asn, int ch_offset, const HopSequence& hop) {
    if (ch_offset < 0 || ch_offset >= hop.size())
        throw ConfigError("channel offset " + std::to_string(ch_offset) +
                          " outside hop sequence of length " + std::to_string(hop.size()));
    return hop[static_cast<int>((asn + static_cast<std::uint64_t>(ch_offset)) %
                                static_cast<std::uint64_t>(hop.size()))];
}

} // namespace tsch
