#include "tsch/autocorr.hpp"

#include <cmath>
#include <complex>

#include <unsupported/Eigen/FFT>

#include "tsch/errors.hpp"

namespace tsch {

double AutocorrelationResult::rho(std::ptrdiff_t k) const {
    const std::size_t a = static_cast<std::size_t>(k < 0 ? -k : k);
    if (a > max_lag) throw DomainError("autocorrelation lag out of range");
    return static_cast<double>(counts[a]) / static_cast<double>(counts[0]);
}

std::vector<std::uint64_t> autocorr_counts_direct(const BitVec& x, std::size_t max_lag) {
    const std::size_t n = x.size();
    const std::size_t nwords = (n + 63) / 64;
    const std::vector<std::uint64_t>& words = x.words();
    std::vector<std::uint64_t> counts(max_lag + 1, 0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        // popcount(x & (x >> k)); bits of the shifted copy past n - k are zero
        // because BitVec keeps its tail clear.
        const std::size_t q = k / 64, r = k % 64;
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i + q < nwords; ++i) {
            std::uint64_t shifted = words[i + q] >> r;
            if (r != 0 && i + q + 1 < nwords) shifted |= words[i + q + 1] << (64 - r);
            acc += static_cast<std::uint64_t>(__builtin_popcountll(words[i] & shifted));
        }
        counts[k] = acc;
    }
    return counts;
}

std::vector<std::uint64_t> autocorr_counts_fft(const BitVec& x, std::size_t max_lag) {
    const std::size_t n = x.size();
    std::size_t nfft = 1;
    while (nfft < 2 * n) nfft <<= 1;

    std::vector<double> time(nfft, 0.0);
    for (std::size_t i = 0; i < n; ++i) time[i] = x[i] ? 1.0 : 0.0;

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> freq;
    fft.fwd(freq, time);
    for (std::complex<double>& v : freq) v = std::norm(v);
    std::vector<double> corr;
    fft.inv(corr, freq);

    // R_k is an integer pair count; rounding removes the transform noise.
    std::vector<std::uint64_t> counts(max_lag + 1, 0);
    for (std::size_t k = 0; k <= max_lag; ++k)
        counts[k] = static_cast<std::uint64_t>(std::llround(corr[k]));
    return counts;
}

namespace {

AutocorrelationResult finish(std::vector<std::uint64_t> counts, std::size_t max_lag) {
    AutocorrelationResult res;
    res.counts = std::move(counts);
    res.max_lag = max_lag;
    const auto r0 = static_cast<double>(res.counts[0]);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        const double rho = static_cast<double>(res.counts[k]) / r0;
        if (rho > res.rho_max) {
            res.rho_max = rho;
            res.rho_max_lag = k;
        }
    }
    return res;
}

} // namespace

AutocorrelationResult autocorrelation(const BitVec& x, std::size_t max_lag) {
    if (x.count_ones() == 0)
        throw DomainError("autocorrelation of an all-zero sequence is undefined (R_0 = 0)");
    const std::size_t full = x.size() / 2;
    const std::size_t lag = std::min(max_lag, full);
    // Direct summation costs ~N*lag/64 word ops, the transform ~10*N*log2(N)
    // flops; cross over where the direct path stops being cheaper.
    const bool small_range =
        lag < 640 * static_cast<std::size_t>(64 - __builtin_clzll(x.size() | 1));
    return finish(small_range ? autocorr_counts_direct(x, lag) : autocorr_counts_fft(x, lag),
                  lag);
}

AutocorrelationResult autocorrelation(const LinkTrace& trace, std::size_t max_lag) {
    return autocorrelation(trace.bits(), max_lag);
}

} // namespace tsch
