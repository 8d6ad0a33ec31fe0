#include "pathgroup/lie_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace pathgroup::lie {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

double inner(const Mat& a, const Mat& b) { return (a.cwiseProduct(b.conjugate())).sum().real(); }
double norm(const Mat& a) { return std::sqrt(std::max(0.0, inner(a, a))); }

SuAlgebra::SuAlgebra(int n) : n_(n), d_(n * n - 1) {
  if (n < 2) throw BadArgsError("su(n) needs n >= 2");
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Mat x = Mat::Zero(n, n);
      x(i, j) = Cplx(s, 0);
      x(j, i) = Cplx(-s, 0);
      basis_.push_back(x);
      Mat y = Mat::Zero(n, n);
      y(i, j) = Cplx(0, s);
      y(j, i) = Cplx(0, s);
      basis_.push_back(y);
    }
  }
  for (int k = 1; k < n; ++k) {
    Mat dmat = Mat::Zero(n, n);
    double nrm = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) dmat(i, i) = Cplx(0, nrm);
    dmat(k, k) = Cplx(0, -static_cast<double>(k) * nrm);
    basis_.push_back(dmat);
  }
}

Mat SuAlgebra::matrix(const Eigen::VectorXd& coeffs) const {
  Mat out = Mat::Zero(n_, n_);
  for (int i = 0; i < d_; ++i) out += coeffs[i] * basis_[i];
  return out;
}

Eigen::VectorXd SuAlgebra::coefficients(const Mat& m) const {
  Eigen::VectorXd out(d_);
  for (int i = 0; i < d_; ++i) out[i] = inner(m, basis_[i]);
  return out;
}

Eigen::VectorXd SuAlgebra::bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  Mat a = matrix(u), b = matrix(v);
  return coefficients(a * b - b * a);
}

Eigen::MatrixXd SuAlgebra::ad_matrix(const Eigen::VectorXd& xi) const {
  Mat x = matrix(xi);
  Eigen::MatrixXd out(d_, d_);
  for (int j = 0; j < d_; ++j) {
    Mat br = x * basis_[j] - basis_[j] * x;
    for (int i = 0; i < d_; ++i) out(i, j) = inner(br, basis_[i]);
  }
  return out;
}

bool DiagonalEndpoint::regular() const {
  size_t n = thetas.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (exact) {
        Rational diff = (*exact)[i] - (*exact)[j];
        if (denominator(diff) == 1) return false;
      } else {
        double diff = thetas[i] - thetas[j];
        if (std::abs(diff - std::round(diff)) < 1e-12) return false;
      }
    }
  }
  return true;
}

DiagonalEndpoint su2_endpoint(const Rational& theta) {
  DiagonalEndpoint ep;
  ep.thetas = {to_double(theta), -to_double(theta)};
  ep.exact = std::vector<Rational>{theta, -theta};
  return ep;
}

Mat exp_skew(const Mat& x) {
  const int n = static_cast<int>(x.rows());
  if (n == 2 && std::abs(x(0, 0) + x(1, 1)) < 1e-14) {
    // traceless 2x2: x^2 = -det(x) I
    Cplx det = x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0);
    double w2 = det.real();  // skew-Hermitian traceless => det real >= 0
    double w = std::sqrt(std::max(0.0, w2));
    double c = std::cos(w);
    double sc = w > 1e-30 ? std::sin(w) / w : 1.0 - w2 / 6.0;
    Mat out = x * sc;
    out(0, 0) += c;
    out(1, 1) += c;
    return out;
  }
  // x = iH with H Hermitian; exp via the Hermitian eigensolver.
  Mat h = Cplx(0, -1) * x;
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXcd phases = (Cplx(0, 1) * es.eigenvalues().cast<Cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat log_unitary(const Mat& u, double guard) {
  Eigen::ComplexEigenSolver<Mat> es(u);
  if (es.info() != Eigen::Success) throw Error(ExitCode::failure, "eigensolver failed in log");
  const int n = static_cast<int>(u.rows());
  Eigen::VectorXd phases(n);
  double total = 0;
  for (int i = 0; i < n; ++i) {
    Cplx ev = es.eigenvalues()[i];
    double phase = std::atan2(ev.imag(), ev.real());
    if (kPi - std::abs(phase) < guard)
      throw Error(ExitCode::failure, "log branch boundary: eigenvalue phase at +-pi");
    phases[i] = phase;
    total += phase;
  }
  if (std::abs(total) > 1e-6)
    throw Error(ExitCode::failure, "principal log leaves su(n): phases sum to 2 pi k, k != 0");
  // Unitary matrices are normal, so eigenspaces are orthogonal; degenerate
  // clusters still need an orthonormal frame before forming projectors.
  Mat log = Mat::Zero(n, n);
  std::vector<bool> used(n, false);
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    std::vector<int> cluster{i};
    for (int j = i + 1; j < n; ++j)
      if (!used[j] && std::abs(phases[j] - phases[i]) < 1e-10) cluster.push_back(j);
    Mat proj = Mat::Zero(n, n);
    if (cluster.size() == 1) {
      Eigen::VectorXcd v = es.eigenvectors().col(i).normalized();
      proj = v * v.adjoint();
    } else {
      // orthonormalize the cluster's eigenvectors
      Mat sub(n, static_cast<int>(cluster.size()));
      for (size_t c = 0; c < cluster.size(); ++c) sub.col(static_cast<int>(c)) = es.eigenvectors().col(cluster[c]);
      Eigen::HouseholderQR<Mat> cqr(sub);
      Mat cq = cqr.householderQ() * Mat::Identity(n, static_cast<int>(cluster.size()));
      proj = cq * cq.adjoint();
    }
    for (int j : cluster) used[j] = true;
    log += Cplx(0, phases[i]) * proj;
  }
  return log;
}

GroupPoint group_exp(const SuAlgebra& alg, const AlgebraVector& v) {
  return GroupPoint{exp_skew(alg.matrix(v.coeffs))};
}

AlgebraVector group_log(const SuAlgebra& alg, const GroupPoint& x) {
  return AlgebraVector{alg.coefficients(log_unitary(x.matrix))};
}

AlgebraVector adjoint(const SuAlgebra& alg, const GroupPoint& x, const AlgebraVector& v) {
  Mat m = x.matrix * alg.matrix(v.coeffs) * x.matrix.adjoint();
  return AlgebraVector{alg.coefficients(m)};
}

Mat unitarize(const Mat& x) {
  Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixU() * svd.matrixV().adjoint();
  Cplx det = u.determinant();
  double phase = std::atan2(det.imag(), det.real());
  Cplx corr = std::polar(1.0, -phase / static_cast<double>(u.rows()));
  return corr * u;
}

double group_defect(const Mat& x) {
  Mat res = x * x.adjoint() - Mat::Identity(x.rows(), x.cols());
  return norm(res) + std::abs(x.determinant() - Cplx(1, 0));
}

namespace {

void enumerate_offsets(int pos, int n, int kmax, long partial, std::vector<long>& current,
                       std::vector<std::vector<long>>& out) {
  if (pos == n - 1) {
    long last = -partial;
    if (std::abs(last) <= kmax) {
      current[pos] = last;
      out.push_back(current);
    }
    return;
  }
  for (long k = -kmax; k <= kmax; ++k) {
    current[pos] = k;
    enumerate_offsets(pos + 1, n, kmax, partial + k, current, out);
  }
}

}  // namespace

std::vector<AlgebraVector> enumerate_geodesics(const SuAlgebra& alg,
                                               const DiagonalEndpoint& endpoint,
                                               double norm_bound) {
  if (!endpoint.regular())
    throw CutLocusError("endpoint on the cut locus: theta_i - theta_j integral");
  if (norm_bound < 0) throw BadArgsError("geodesic norm bound must be >= 0");
  const int n = alg.n();
  if (static_cast<int>(endpoint.thetas.size()) != n)
    throw BadArgsError("endpoint size does not match group dimension");

  double theta_max = 0;
  for (double t : endpoint.thetas) theta_max = std::max(theta_max, std::abs(t));
  int kmax = static_cast<int>(std::ceil(norm_bound / kTwoPi + theta_max)) + 1;

  std::vector<std::vector<long>> offsets;
  std::vector<long> current(n, 0);
  enumerate_offsets(0, n, kmax, 0, current, offsets);

  std::vector<std::pair<double, AlgebraVector>> found;
  for (const auto& ks : offsets) {
    double norm2 = 0;
    for (int i = 0; i < n; ++i) {
      double phi = endpoint.thetas[i] + static_cast<double>(ks[i]);
      norm2 += phi * phi;
    }
    double nrm = kTwoPi * std::sqrt(norm2);
    if (nrm > norm_bound + 1e-12) continue;
    Mat xi = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      xi(i, i) = Cplx(0, kTwoPi * (endpoint.thetas[i] + static_cast<double>(ks[i])));
    found.emplace_back(nrm, AlgebraVector{alg.coefficients(xi)});
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<AlgebraVector> out;
  out.reserve(found.size());
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

double geodesic_energy(const SuAlgebra& alg, const AlgebraVector& xi) {
  double n = norm(alg.matrix(xi.coeffs));
  return 0.5 * n * n;
}

}  // namespace pathgroup::lie
