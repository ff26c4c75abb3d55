#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "helpers.hpp"
#include "tsch/errors.hpp"
#include "tsch/trace.hpp"

using namespace tsch;

TEST_SUITE_BEGIN("trace");

TEST_CASE("bitvec packing basics") {
    BitVec b;
    for (int i = 0; i < 130; ++i) b.push_back(i % 3 == 0);
    CHECK(b.size() == 130);
    for (int i = 0; i < 130; ++i) CHECK(b[static_cast<std::size_t>(i)] == (i % 3 == 0));
    CHECK(b.count_ones() == 44);

    SUBCASE("word_at is an unaligned 64-bit read") {
        for (std::size_t off : {0u, 1u, 63u, 64u, 65u, 127u}) {
            const std::uint64_t w = b.word_at(off);
            for (int k = 0; k < 64; ++k) {
                const bool expect = off + static_cast<std::size_t>(k) < b.size()
                                        ? b[off + static_cast<std::size_t>(k)]
                                        : false;
                CHECK(((w >> k) & 1) == (expect ? 1u : 0u));
            }
        }
    }
    SUBCASE("slice matches element-wise extraction") {
        const BitVec s = b.slice(7, 100);
        REQUIRE(s.size() == 100);
        for (std::size_t i = 0; i < 100; ++i) CHECK(s[i] == b[7 + i]);
    }
    SUBCASE("byte round trip") {
        const auto bytes = b.to_bytes();
        CHECK(bytes.size() == 17);
        CHECK(BitVec::from_bytes(bytes.data(), b.size()) == b);
    }
}

TEST_CASE("trace file round trip is identity") {
    testutil::TempDir tmp("trace_roundtrip");
    const std::size_t lengths[] = {1, 7, 64, 65, 1000, 4097};
    for (std::uint64_t seed = 0; seed < std::size(lengths); ++seed) {
        const std::size_t n = lengths[seed];
        const LinkTrace trace({16, 24}, 2020000, testutil::random_bits(n, seed, 0.3));
        const std::string path = tmp.file("t" + std::to_string(seed) + ".tslt");
        write_trace(trace, path);
        const LinkTrace back = read_trace(path);
        CHECK(back == trace);
        CHECK(back.edge() == trace.edge());
        CHECK(back.t_matrix_us() == 2020000);
    }
}

TEST_CASE("trace file header is bit-exact") {
    testutil::TempDir tmp("trace_header");
    LinkTrace trace({3, 7}, 2020000);
    trace.append(true);
    trace.append(false);
    trace.append(true); // payload byte: 0b101 = 0x05
    const std::string path = tmp.file("h.tslt");
    write_trace(trace, path);

    std::ifstream in(path, std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() == 4 + 2 + 2 + 2 + 8 + 8 + 1);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "TSLT");
    CHECK(bytes[4] == 1);  CHECK(bytes[5] == 0);   // version u16 LE
    CHECK(bytes[6] == 3);  CHECK(bytes[7] == 0);   // sender
    CHECK(bytes[8] == 7);  CHECK(bytes[9] == 0);   // receiver
    CHECK(bytes[10] == 3); // count u64 LE, low byte
    for (int i = 11; i < 18; ++i) CHECK(bytes[static_cast<std::size_t>(i)] == 0);
    // 2020000 us = 0x1ED2A0
    CHECK(bytes[18] == 0xA0);
    CHECK(bytes[19] == 0xD2);
    CHECK(bytes[20] == 0x1E);
    for (int i = 21; i < 26; ++i) CHECK(bytes[static_cast<std::size_t>(i)] == 0);
    CHECK(bytes[26] == 0x05);
}

TEST_CASE("malformed trace files raise io errors") {
    testutil::TempDir tmp("trace_bad");
    const std::string path = tmp.file("bad.tslt");
    CHECK_THROWS_AS(read_trace(tmp.file("missing.tslt")), IoError);
    tsch::write_trace(LinkTrace({1, 2}, 2020000, testutil::random_bits(100, 9)), path);

    SUBCASE("bad magic") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.write("XXXX", 4);
        f.close();
        CHECK_THROWS_AS(read_trace(path), IoError);
    }
    SUBCASE("truncated payload") {
        std::filesystem::resize_file(path, 30);
        CHECK_THROWS_AS(read_trace(path), IoError);
    }
}

TEST_SUITE_END();
