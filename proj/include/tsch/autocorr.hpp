#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tsch/bitvec.hpp"
#include "tsch/trace.hpp"

namespace tsch {

// Normalized discrete autocorrelation of a binary sequence. For 0/1 inputs
// every R_k is an integer pair count, so rho is stored exactly as R_k / R_0.
// rho_k = rho_{-k}; only non-negative lags are kept.
struct AutocorrelationResult {
    std::vector<std::uint64_t> counts; // R_k for k = 0..max_lag
    std::size_t max_lag = 0;
    double rho_max = 0.0;    // max over k in [1, max_lag]; 0 when max_lag == 0
    std::size_t rho_max_lag = 0;

    std::uint64_t r0() const { return counts.empty() ? 0 : counts[0]; }
    double rho(std::ptrdiff_t k) const; // |k| <= max_lag
};

// R_k = sum_n x_n * x_{n+k} via word-parallel popcounts: the direct
// summation, evaluated 64 terms at a time. O(N * max_lag / 64).
std::vector<std::uint64_t> autocorr_counts_direct(const BitVec& x, std::size_t max_lag);

// Transform-based R_k (FFT of the zero-padded sequence), rounded back to the
// exact integer counts. O(N log N) over the full lag range.
std::vector<std::uint64_t> autocorr_counts_fft(const BitVec& x, std::size_t max_lag);

inline constexpr std::size_t kFullLagRange = static_cast<std::size_t>(-1);

// Production entry point: lags up to min(max_lag, floor(N/2)). Small ranges
// go through the direct path, full ranges through the transform.
// DomainError when the sequence has no ones (rho undefined).
AutocorrelationResult autocorrelation(const BitVec& x, std::size_t max_lag = kFullLagRange);
AutocorrelationResult autocorrelation(const LinkTrace& trace,
                                      std::size_t max_lag = kFullLagRange);

} // namespace tsch
