#pragma once

// Neumann-series solution of the Beltrami equation dbar f = mu df on a grid
// (free-space FFT Beurling iterations), plus empirical growth measurements of
// Beurling-iterate norms and the corner divergence on the square.

#include <vector>

#include "beurlab/fft_ops.hpp"
#include "beurlab/geometry.hpp"
#include "beurlab/grid.hpp"

namespace beurlab {

struct BeltramiCoefficient {
    GridFunction mu;
    double k = 0.0;              // sup |mu|, strictly below 1
    double support_radius = 0.0;

    // k * (radial quintic smoothstep falling from 1 to 0 over [r(1-w), r])
    static BeltramiCoefficient mollified_disk(Box box, int n, double k, double radius = 1.0,
                                              double width = 0.02);
    // Validates k < 1 and compact support inside the box.
    static BeltramiCoefficient from_grid(GridFunction mu);
};

struct SeriesState {
    GridFunction h;                   // partial sum of (mu B)^m mu
    std::vector<double> term_norms;   // ||(mu B)^m mu||_2, m = 0, 1, ...
    std::vector<double> residuals;    // r_m = ||h_m - mu - mu B h_m||_2 = next term norm
    bool converged = false;
    // L2 gate on a smooth radial bump: measured ||B f||_2 over the window,
    // divided by the full-plane isometry value minus the closed-form exterior
    // tail the window cannot see.  1.0 means the operator is exact.
    double isometry_ratio = 1.0;
};

// h = mu + mu B mu + mu B(mu B mu) + ...; stops when the residual drops below
// tol (absolute, L2) or after max_terms terms (converged = false, reported).
SeriesState neumann_h(const BeltramiCoefficient& mu, double tol, int max_terms);

struct PrincipalSolution {
    GridFunction displacement;     // f(z) - z = Cauchy transform of h
    double residual_median = 0.0;  // median |dbar f - mu df| / (|df| + 1e-12)
    double edge_model_ratio = 0.0; // max over edge ring of |f(z)-z| / (|C1| / |z|)
};

PrincipalSolution principal_solution(const BeltramiCoefficient& mu, const SeriesState& state);

struct IterateGrowthResult {
    std::vector<int> ms;
    std::vector<double> norms;  // || sum_{|a|=n} |D^a (B^m chi)| ||_{L^p(core)}
    double fit_c = 0.0;         // model norms ~ C * m^{n+1} * base^m
    double fit_base = 1.0;
    bool at_noise_floor = false;
    int grid_n = 0;
    double collar = 0.0;
};

// Interior W^{n,p}-type norms of Beurling iterates of the characteristic
// function, evaluated cell-wise through the derivative ladder and the contour
// route; bounded domains only.
IterateGrowthResult iterate_growth(const Domain& dom, int n, double p, int m_max,
                                   int grid_n = 64, double collar = 0.05);

struct CornerDivergenceResult {
    std::vector<double> deltas;
    std::vector<double> norms;   // ||d_z B chi_Q||_{L^p(Q minus corner disks)}
    double slope = 0.0;          // log-log fit of norm against delta
    double expected_slope = 0.0; // (2 - p) / p
    double power_fit_resid = 0.0;
    double log_fit_resid = 0.0;  // p = 2: sqrt(a + b log(1/delta)) model
    int grid_n = 0;
};

// Divergence of the Beurling derivative field near the corners of the unit
// square as the excluded corner disks shrink.
CornerDivergenceResult corner_divergence(double p, const std::vector<double>& deltas,
                                         int grid_n = 384);

}  // namespace beurlab
