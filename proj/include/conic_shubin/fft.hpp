#pragma once

#include <complex>
#include <vector>

namespace conic_shubin {

/// Unnormalised DFT: forward X_m = sum_n x_n e^{-2 pi i m n / N}, inverse with e^{+...}.
/// Plans are created once per (N, direction) with FFTW_ESTIMATE, so results are
/// reproducible run to run. Safe to call from several threads.
void dft(std::vector<std::complex<double>>& data, bool inverse);

/// DFT of `count` contiguous sequences of length n stored back to back.
void dft_many(std::complex<double>* data, int n, int count, bool inverse);

}  // namespace conic_shubin
