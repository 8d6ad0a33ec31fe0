#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "pathgroup/errors.hpp"
#include "pathgroup/rational.hpp"

namespace pathgroup::lie {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// Real inner product on M(n,C): (A,B) = Re tr(A B*).
double inner(const Mat& a, const Mat& b);
double norm(const Mat& a);

/// Matrix Lie algebra su(n) with a fixed orthonormal basis.
///
/// The basis is the generalized Gell-Mann construction (antisymmetric and
/// i-symmetric off-diagonal pairs, then traceless i-diagonals), orthonormal
/// under (A,B) = Re tr(A B*). Coefficient vectors are real and live in R^d,
/// d = n^2 - 1.
class SuAlgebra {
 public:
  explicit SuAlgebra(int n);

  int n() const { return n_; }
  int dim() const { return d_; }
  const std::vector<Mat>& basis() const { return basis_; }

  Mat matrix(const Eigen::VectorXd& coeffs) const;
  Eigen::VectorXd coefficients(const Mat& m) const;

  Eigen::VectorXd bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  // ad(xi) as a d x d real matrix acting on coefficient vectors.
  Eigen::MatrixXd ad_matrix(const Eigen::VectorXd& xi) const;

 private:
  int n_, d_;
  std::vector<Mat> basis_;
};

// Value types mirroring the domain vocabulary.
struct AlgebraVector {
  Eigen::VectorXd coeffs;
};

struct GroupPoint {
  Mat matrix;
};

// Diagonal endpoint D[e^{2 pi i theta_1}, ..., e^{2 pi i theta_n}], sum = 0.
// When built from rationals the regularity test is exact.
struct DiagonalEndpoint {
  std::vector<double> thetas;
  std::optional<std::vector<Rational>> exact;

  bool regular() const;
};

DiagonalEndpoint su2_endpoint(const Rational& theta);

// exp of a skew-Hermitian matrix (eigen route; closed form for n = 2).
Mat exp_skew(const Mat& x);
// Principal log of a unitary matrix. Throws if an eigenvalue phase is within
// `guard` of +-pi, or if the phases do not sum to zero (branch left su(n)).
Mat log_unitary(const Mat& u, double guard = 1e-9);

GroupPoint group_exp(const SuAlgebra& alg, const AlgebraVector& v);
AlgebraVector group_log(const SuAlgebra& alg, const GroupPoint& x);
AlgebraVector adjoint(const SuAlgebra& alg, const GroupPoint& x, const AlgebraVector& v);

// Nearest unitary (polar projection), det renormalized to 1.
Mat unitarize(const Mat& x);
double group_defect(const Mat& x);  // ||x x* - I|| + |det x - 1|

// All xi = 2 pi i D[theta_1 + k_1, ...] with sum k_i = 0 and |xi| <= bound,
// sorted by norm ascending. Throws CutLocusError for non-regular endpoints.
std::vector<AlgebraVector> enumerate_geodesics(const SuAlgebra& alg,
                                               const DiagonalEndpoint& endpoint,
                                               double norm_bound);

double geodesic_energy(const SuAlgebra& alg, const AlgebraVector& xi);

}  // namespace pathgroup::lie
