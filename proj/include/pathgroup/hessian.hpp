#pragma once

#include <Eigen/Dense>

#include <vector>

#include "pathgroup/lie_core.hpp"

namespace pathgroup::hessian {

// Rotation-block decomposition of ad(xi): zero directions plus 2-dimensional
// blocks with ad(xi) u = 2 pi zeta ut.
struct SkewSpectrum {
  int zero_multiplicity = 0;
  std::vector<std::pair<double, int>> positive_pairs;  // (zeta, block count), ascending
};

// One line of the energy-Hessian spectrum. multiplicity < 0 encodes the
// infinite tier at value 1.
struct HessianLine {
  double value = 0;
  int multiplicity = 0;
  static constexpr int kInfinite = -1;
};

SkewSpectrum ad_spectrum(const lie::SuAlgebra& alg, const lie::AlgebraVector& xi);

// All values 1 +- zeta_i/m, m <= max_modes, filtered to |value| <= cap, each
// with multiplicity 2 per block, plus the (1, infinite) line. Sorted ascending
// with the infinite line placed at value 1.
std::vector<HessianLine> hessian_eigenvalues(const lie::SuAlgebra& alg,
                                             const lie::AlgebraVector& xi, double cap,
                                             int max_modes);

// Count of negative Hessian eigenvalues with multiplicity; throws on a value
// within 1e-12 of zero (degenerate Hessian).
int morse_index(const lie::SuAlgebra& alg, const lie::AlgebraVector& xi);

// Dense Galerkin matrix of I + T_xi on the basis sqrt(2) sin(m pi t)/(m pi) e_i
// of paths pinned at both ends, truncated to `modes` frequencies.
// Element <T (f_m ⊗ e_i), f_m' ⊗ e_j> = (4/pi^2)/(m^2 - m'^2) ([e_i, xi], e_j)
// for m + m' odd, else 0.
Eigen::MatrixXd galerkin_hessian(const lie::SuAlgebra& alg, const lie::AlgebraVector& xi,
                                 int modes);

}  // namespace pathgroup::hessian
