#include "tsch/window.hpp"

#include "tsch/errors.hpp"

namespace tsch {

std::pair<LinkTrace, LinkTrace> split(const LinkTrace& trace, std::size_t train_len,
                                      std::size_t test_len) {
    if (train_len + test_len > trace.size())
        throw DomainError("split of " + std::to_string(train_len) + "+" +
                          std::to_string(test_len) + " samples exceeds trace length " +
                          std::to_string(trace.size()));
    return {trace.slice(0, train_len), trace.slice(train_len, test_len)};
}

WindowDataset::WindowDataset(const LinkTrace& trace, WindowSpec spec)
    : trace_(&trace), window_len_(static_cast<std::size_t>(spec.window_len)) {
    if (spec.window_len < 1) throw DomainError("window length must be >= 1");
    if (trace.size() < window_len_ + 1)
        throw DomainError("trace of " + std::to_string(trace.size()) +
                          " samples is shorter than window length " +
                          std::to_string(window_len_) + " + 1");
}

void WindowDataset::fill_window(std::size_t j, Eigen::Ref<Eigen::VectorXd> col) const {
    const BitVec& bits = trace_->bits();
    const std::size_t n = window_len_;
    // Entry c is sample j + n - 1 - c (most recent first). Read 64 at a time.
    for (std::size_t i = 0; i < n; i += 64) {
        const std::uint64_t w = bits.word_at(j + i);
        const std::size_t m = std::min<std::size_t>(64, n - i);
        for (std::size_t b = 0; b < m; ++b)
            col[static_cast<Eigen::Index>(n - 1 - (i + b))] =
                static_cast<double>((w >> b) & 1ULL);
    }
}

void WindowDataset::fill_batch(std::span<const std::uint32_t> indices,
                               Eigen::Ref<Eigen::MatrixXd> X,
                               Eigen::Ref<Eigen::VectorXd> y) const {
    for (std::size_t c = 0; c < indices.size(); ++c) {
        const std::size_t j = indices[c];
        fill_window(j, X.col(static_cast<Eigen::Index>(c)));
        y[static_cast<Eigen::Index>(c)] = target(j) ? 1.0 : 0.0;
    }
}

} // namespace tsch
