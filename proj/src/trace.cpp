#include "tsch/trace.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "tsch/binio.hpp"
#include "tsch/errors.hpp"

namespace tsch {

void write_trace(const LinkTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open trace file for writing: " + path);
    out.write(kTraceMagic, sizeof(kTraceMagic));
    binio::write_le<std::uint16_t>(out, kTraceVersion);
    binio::write_le<std::uint16_t>(out, trace.edge().from);
    binio::write_le<std::uint16_t>(out, trace.edge().to);
    binio::write_le<std::uint64_t>(out, trace.size());
    binio::write_le<std::uint64_t>(out, trace.t_matrix_us());
    const std::vector<std::uint8_t> payload = trace.bits().to_bytes();
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("failed writing trace file: " + path);
}

LinkTrace read_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trace file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kTraceMagic, 4) != 0)
        throw IoError("not a trace file (bad magic): " + path);
    const auto version = binio::read_le<std::uint16_t>(in);
    if (version != kTraceVersion)
        throw IoError("unsupported trace version " + std::to_string(version) + ": " + path);
    Edge edge;
    edge.from = binio::read_le<std::uint16_t>(in);
    edge.to = binio::read_le<std::uint16_t>(in);
    const auto count = binio::read_le<std::uint64_t>(in);
    const auto t_matrix_us = binio::read_le<std::uint64_t>(in);
    std::vector<std::uint8_t> payload((count + 7) / 8);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
    if (!in) throw IoError("trace file truncated: " + path);
    return LinkTrace(edge, t_matrix_us, BitVec::from_bytes(payload.data(), count));
}

} // namespace tsch
