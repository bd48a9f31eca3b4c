#pragma once

// Uniform complex-valued grids over an axis-aligned box, with the small set of
// field operations the transform and Beltrami modules need: sampling, masks,
// L^p norms over sub-regions, finite-difference Wirtinger derivatives, and a
// Euclidean distance transform used to carve boundary collars out of error
// norms.

#include <complex>
#include <functional>
#include <vector>

#include "beurlab/geometry.hpp"

namespace beurlab {

class GridFunction {
  public:
    GridFunction() = default;
    GridFunction(Box box, int n);

    int size() const { return n_; }
    const Box& box() const { return box_; }
    double spacing() const { return h_; }

    // Cell-center coordinate of sample (i, j); i indexes x, j indexes y.
    cplx point(int i, int j) const {
        return {box_.x0 + (i + 0.5) * h_, box_.y0 + (j + 0.5) * h_};
    }

    cplx& at(int i, int j) { return data_[static_cast<std::size_t>(j) * n_ + i]; }
    const cplx& at(int i, int j) const { return data_[static_cast<std::size_t>(j) * n_ + i]; }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    void fill(const std::function<cplx(cplx)>& f);

    // Nearest-sample lookup (clamped to the box).
    cplx sample_nearest(cplx z) const;
    // Bilinear interpolation between cell centers (clamped).
    cplx sample_bilinear(cplx z) const;

  private:
    Box box_{};
    int n_ = 0;
    double h_ = 0.0;
    std::vector<cplx> data_;
};

// Boolean mask aligned with a GridFunction's samples.
class GridMask {
  public:
    GridMask() = default;
    GridMask(Box box, int n, bool value = false);

    int size() const { return n_; }
    const Box& box() const { return box_; }
    double spacing() const { return h_; }
    cplx point(int i, int j) const {
        return {box_.x0 + (i + 0.5) * h_, box_.y0 + (j + 0.5) * h_};
    }

    void set(int i, int j, bool v) { data_[static_cast<std::size_t>(j) * n_ + i] = v ? 1 : 0; }
    bool get(int i, int j) const { return data_[static_cast<std::size_t>(j) * n_ + i] != 0; }

    std::size_t count() const;
    double area() const { return static_cast<double>(count()) * h_ * h_; }

    static GridMask from_predicate(Box box, int n, const std::function<bool(cplx)>& pred);

  private:
    Box box_{};
    int n_ = 0;
    double h_ = 0.0;
    std::vector<unsigned char> data_;
};

// L^p norm of g over the masked cells: (sum |g|^p h^2)^(1/p); p = inf -> max.
double lp_norm(const GridFunction& g, const GridMask& mask, double p);
double lp_norm(const GridFunction& g, double p);

// Pointwise combination helpers.
GridFunction operator-(const GridFunction& a, const GridFunction& b);

// Exact Euclidean distance (in grid units) from each cell to the nearest cell
// where `seed` is true; squared-distance output, Felzenszwalb-Huttenlocher.
std::vector<double> distance_transform_sq(const GridMask& seed);

// Mask of cells lying in `inside` but at Euclidean distance > collar from the
// complement of `inside` (i.e. the inside region with a collar stripped).
GridMask strip_collar(const GridMask& inside, double collar);

// Centered-difference Wirtinger derivatives; one-sided at the box edge.
GridFunction d_dz(const GridFunction& g);
GridFunction d_dzbar(const GridFunction& g);

}  // namespace beurlab
