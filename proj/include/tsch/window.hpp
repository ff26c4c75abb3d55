#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include <Eigen/Core>

#include "tsch/trace.hpp"

namespace tsch {

// Sliding-window length n_p. 890 samples is about 30 minutes of history at
// the 2.02 s slotframe period.
struct WindowSpec {
    int window_len = 890;
};

// Contiguous head/tail split: train takes the first train_len samples, test
// the test_len samples immediately following. DomainError on overflow.
std::pair<LinkTrace, LinkTrace> split(const LinkTrace& trace, std::size_t train_len,
                                      std::size_t test_len);

// Supervised view over a trace: window j holds samples [j, j+n_p) ordered
// most-recent-first, and its target is sample j+n_p. Rows are assembled
// straight from the packed bits, so no unpacked copy of the trace exists.
class WindowDataset {
public:
    WindowDataset(const LinkTrace& trace, WindowSpec spec); // DomainError if trace too short

    std::size_t count() const { return trace_->size() - window_len_; }
    int window_len() const { return static_cast<int>(window_len_); }
    const LinkTrace& trace() const { return *trace_; }

    bool target(std::size_t j) const { return (*trace_)[j + window_len_]; }

    // One window as a column of doubles (0.0/1.0), most-recent-first.
    void fill_window(std::size_t j, Eigen::Ref<Eigen::VectorXd> col) const;

    // Batch of windows by index: X is n_p x batch with one window per column
    // (contiguous in Eigen's column-major storage), y the matching targets.
    void fill_batch(std::span<const std::uint32_t> indices, Eigen::Ref<Eigen::MatrixXd> X,
                    Eigen::Ref<Eigen::VectorXd> y) const;

private:
    const LinkTrace* trace_;
    std::size_t window_len_;
};

} // namespace tsch
