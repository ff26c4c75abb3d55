#include <doctest.h>

#include "helpers.hpp"
#include "tsch/errors.hpp"
#include "tsch/window.hpp"

using namespace tsch;

namespace {

LinkTrace trace_of_bits(std::initializer_list<int> vals) {
    BitVec b;
    for (int v : vals) b.push_back(v != 0);
    return LinkTrace({1, 2}, 2020000, std::move(b));
}

} // namespace

TEST_SUITE_BEGIN("window");

TEST_CASE("split is contiguous and disjoint") {
    SUBCASE("small split") {
        const LinkTrace t = trace_of_bits({1, 0, 1, 1, 0, 0, 1, 0, 1, 1});
        const auto [train, test] = split(t, 7, 3);
        CHECK(train.size() == 7);
        CHECK(test.size() == 3);
        for (std::size_t i = 0; i < 7; ++i) CHECK(train[i] == t[i]);
        for (std::size_t i = 0; i < 3; ++i) CHECK(test[i] == t[7 + i]);
        CHECK_THROWS_AS(split(t, 8, 3), DomainError);
    }
    SUBCASE("published split sizes") {
        // 15,611,881 samples -> 12,611,881 train + 3,000,000 test.
        LinkTrace t({16, 24}, 2020000, BitVec(15611881));
        const auto [train, test] = split(t, 12611881, 3000000);
        CHECK(train.size() == 12611881);
        CHECK(test.size() == 3000000);
        CHECK_THROWS_AS(split(t, 12611882, 3000000), DomainError);
    }
}

TEST_CASE("window count is N - n_p") {
    SUBCASE("minimal trace gives one pair") {
        LinkTrace t({1, 2}, 2020000, BitVec(6));
        CHECK(WindowDataset(t, {5}).count() == 1);
    }
    SUBCASE("published test-split count") {
        LinkTrace t({1, 2}, 2020000, BitVec(3000000));
        CHECK(WindowDataset(t, {890}).count() == 2999110);
    }
    SUBCASE("too-short traces are rejected") {
        LinkTrace t({1, 2}, 2020000, BitVec(890));
        CHECK_THROWS_AS(WindowDataset(t, {890}), DomainError);
        CHECK_THROWS_AS(WindowDataset(t, {0}), DomainError);
    }
}

TEST_CASE("windows are most-recent-first with the next sample as target") {
    // samples: x0=1 x1=0 x2=0 x3=1 x4=1 x5=0
    const LinkTrace t = trace_of_bits({1, 0, 0, 1, 1, 0});
    const WindowDataset data(t, {3});
    REQUIRE(data.count() == 3);

    Eigen::VectorXd w(3);
    data.fill_window(0, w); // samples {x0,x1,x2} -> (x2, x1, x0)
    CHECK(w[0] == 0.0);
    CHECK(w[1] == 0.0);
    CHECK(w[2] == 1.0);
    CHECK(data.target(0) == true); // x3

    data.fill_window(2, w); // samples {x2,x3,x4} -> (x4, x3, x2)
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 1.0);
    CHECK(w[2] == 0.0);
    CHECK(data.target(2) == false); // x5
}

TEST_CASE("all-zero traces give all-zero targets") {
    LinkTrace t({1, 2}, 2020000, BitVec(500));
    const WindowDataset data(t, {64});
    for (std::size_t j = 0; j < data.count(); ++j) CHECK(data.target(j) == false);
}

TEST_CASE("windows reproduce the raw sequence against an unpacked reference") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const std::size_t n = 200 + 37 * seed;
        const BitVec bits = testutil::random_bits(n, seed, 0.4);
        const std::vector<int> raw = testutil::unpack(bits);
        const LinkTrace t({1, 2}, 2020000, bits);
        for (int n_p : {1, 63, 64, 65, 130}) {
            const WindowDataset data(t, {n_p});
            REQUIRE(data.count() == n - static_cast<std::size_t>(n_p));
            Eigen::VectorXd w(n_p);
            for (std::size_t j = 0; j < data.count(); j += 7) {
                data.fill_window(j, w);
                for (int c = 0; c < n_p; ++c)
                    CHECK(w[c] == static_cast<double>(
                                      raw[j + static_cast<std::size_t>(n_p - 1 - c)]));
                CHECK(data.target(j) == (raw[j + static_cast<std::size_t>(n_p)] != 0));
            }
        }
    }
}

TEST_CASE("batch assembly matches per-window fills") {
    const BitVec bits = testutil::random_bits(400, 9, 0.3);
    const LinkTrace t({1, 2}, 2020000, bits);
    const WindowDataset data(t, {97});
    const std::vector<std::uint32_t> idx = {0, 5, 11, 302, 1, 1};
    Eigen::MatrixXd X(97, static_cast<Eigen::Index>(idx.size()));
    Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
    data.fill_batch(idx, X, y);
    Eigen::VectorXd w(97);
    for (std::size_t c = 0; c < idx.size(); ++c) {
        data.fill_window(idx[c], w);
        CHECK(X.col(static_cast<Eigen::Index>(c)) == w);
        CHECK(y[static_cast<Eigen::Index>(c)] == (data.target(idx[c]) ? 1.0 : 0.0));
    }
}

TEST_CASE("split then window composes") {
    const BitVec bits = testutil::random_bits(5000, 3, 0.2);
    const LinkTrace t({1, 2}, 2020000, bits);
    const auto [train, test] = split(t, 4000, 1000);
    const WindowDataset data(test, {890});
    CHECK(data.count() == 110);
    Eigen::VectorXd w(890);
    data.fill_window(0, w);
    for (int c = 0; c < 890; ++c)
        CHECK(w[c] == (t[4000 + static_cast<std::size_t>(889 - c)] ? 1.0 : 0.0));
}

TEST_SUITE_END();
