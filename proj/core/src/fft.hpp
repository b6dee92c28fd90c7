#pragma once

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace ridgekit::detail {

// In-place forward complex DFT of a fixed length, X[m] = sum_p x[p] exp(-2 pi i p m / n).
// Plans are shared per length; each instance owns its buffer, so separate
// instances may execute concurrently.
class ForwardFft {
public:
    explicit ForwardFft(std::size_t n);
    ~ForwardFft();
    ForwardFft(const ForwardFft&) = delete;
    ForwardFft& operator=(const ForwardFft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::complex<double>* data() noexcept { return reinterpret_cast<std::complex<double>*>(buf_); }
    void execute();

private:
    std::size_t n_;
    fftw_complex* buf_;
    fftw_plan plan_;
};

// In-place inverse (unnormalised) complex DFT.
class InverseFft {
public:
    explicit InverseFft(std::size_t n);
    ~InverseFft();
    InverseFft(const InverseFft&) = delete;
    InverseFft& operator=(const InverseFft&) = delete;

    std::complex<double>* data() noexcept { return reinterpret_cast<std::complex<double>*>(buf_); }
    void execute();

private:
    std::size_t n_;
    fftw_complex* buf_;
    fftw_plan plan_;
};

}  // namespace ridgekit::detail
