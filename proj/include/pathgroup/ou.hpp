#pragma once

#include <vector>

namespace pathgroup::ou {

// Finitely many retained modes of the approximating operator. zetas are the
// Hessian-offset eigenvalues (T e_i = zeta_i e_i); the first `negatives`
// entries have 1 + zeta < 0, the rest 1 + zeta > 0.
struct ModeSpec {
  std::vector<double> zetas;
  int negatives = 0;
  double lambda = 1.0;
};

ModeSpec make_mode_spec(std::vector<double> zetas, double lambda);

struct MultiIndex {
  std::vector<long> n;  // finitely supported, nonnegative
};

double ou_eigenvalue(const ModeSpec& spec, const MultiIndex& n);

// Truncated eigenfunction: product over retained modes of normalized Hermite
// factors (times the exponential factor on negative modes), each mode scaled
// so its L^2 norm against the per-mode measure is exactly 1.
double ou_eigenfunction(const ModeSpec& spec, const MultiIndex& n,
                        const std::vector<double>& point);

// Probabilists' Hermite polynomial He_n.
double hermite_prob(int n, double x);

// Gauss-Hermite rule for the weight exp(-x^2/2)/sqrt(2 pi) (unit mass).
struct GaussHermite {
  std::vector<double> nodes, weights;
};
GaussHermite gauss_hermite(int order);

// <e_n, e_m> against the retained-mode measure, by quadrature.
double mode_inner_product(const ModeSpec& spec, const MultiIndex& n, const MultiIndex& m,
                          int quad_order);

// Finite-difference residual of the 1-D generator relation: applies
// -d^2/dx^2 + (lambda K)^2 x^2/4 + lambda K/2 to the ground-transformed
// eigenfunction and compares with lambda K (n+1) over the middle half.
double verify_generator_1d(double K, double lambda, int n, int grid);

// Max discrepancy of monomial moments (total degree <= 4) between
// e_n e_m dmu_{lambda,T} and the flipped-spectrum counterpart.
double measure_identity_check(const ModeSpec& spec, const MultiIndex& n, const MultiIndex& m,
                              int quad_order);

// lambda-normalized spectrum below R: values sum n_i |1+zeta_i| + E0-shift.
struct SpectrumLine {
  double value;
  long multiplicity;
};
std::vector<SpectrumLine> ou_spectrum_below(const ModeSpec& spec, double R);

}  // namespace pathgroup::ou
