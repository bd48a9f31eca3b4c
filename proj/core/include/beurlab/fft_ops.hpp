#pragma once

// FFT-backed convolution operators on square grids.
//
// Two independent discretizations of the singular integrals are provided and
// cross-checked in the test suite:
//   * beurling_multiplier — spectral multiplier conj(k)/k on the periodic
//     torus spanned by the grid box.  Exact for the periodized operator; for
//     compactly supported data well inside the box the difference from the
//     free-space operator decays like |z|^2 / L^4.  Nyquist lines are zeroed
//     so the multiplier keeps its four-fold symmetry on even grids.
//   * *_free — aperiodic (zero-padded) convolution with the exact kernel
//     sampled at cell offsets; the self-cell weight vanishes by symmetry of
//     the kernel about the cell center.
//
// Apply() is not reentrant (internal FFT buffers are reused); the library is
// single-threaded by design and guards FFTW plan calls with a global mutex.

#include <memory>

#include "beurlab/grid.hpp"

namespace beurlab {

class ConvOperator {
  public:
    enum class Kind {
        beurling_multiplier,  // periodic, multiplier (conj(k)/k)^power
        beurling_free,        // aperiodic, kernel -1/(pi v^2)
        cauchy_free,          // aperiodic, kernel  1/(pi v)
    };

    ConvOperator(Box box, int n, Kind kind, int power = 1);
    ~ConvOperator();
    ConvOperator(const ConvOperator&) = delete;
    ConvOperator& operator=(const ConvOperator&) = delete;

    GridFunction apply(const GridFunction& f) const;

    Box box() const { return box_; }
    int size() const { return n_; }
    Kind kind() const { return kind_; }

  private:
    struct Impl;
    Box box_{};
    int n_ = 0;
    Kind kind_{};
    int power_ = 1;
    std::unique_ptr<Impl> impl_;
};

// One-shot conveniences (build the operator, apply once).
GridFunction fft_beurling(const GridFunction& f, int power = 1);
GridFunction fft_beurling_free(const GridFunction& f);
GridFunction fft_cauchy(const GridFunction& f);

// Fraction of the l1 mass of f carried by samples outside the centered box of
// half the side length; a cheap periodization-risk diagnostic.
double outer_mass_fraction(const GridFunction& f);

}  // namespace beurlab
