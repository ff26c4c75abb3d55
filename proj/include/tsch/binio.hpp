#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "tsch/errors.hpp"

// Little-endian stream primitives for the binary file formats.
namespace tsch::binio {

template <typename T>
void write_le(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(std::begin(buf), std::end(buf));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw IoError("unexpected end of file");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(std::begin(buf), std::end(buf));
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

} // namespace tsch::binio
