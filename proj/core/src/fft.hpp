#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace orf::detail {

/// Owns an FFTW real-to-complex plan and its aligned buffers.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const noexcept { return n_; }

    /// Writes the n/2 + 1 non-redundant bins of the transform of `input`.
    void forward(std::span<const double> input, std::vector<std::complex<double>>& output);

private:
    std::size_t n_;
    double* in_;
    void* out_;   // fftw_complex*
    void* plan_;  // fftw_plan
};

/// Per-thread plan cache keyed by transform length.
RealFft& real_fft(std::size_t n);

}  // namespace orf::detail
