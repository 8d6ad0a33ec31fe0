#include "pathgroup/hessian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace pathgroup::hessian {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

SkewSpectrum ad_spectrum(const lie::SuAlgebra& alg, const lie::AlgebraVector& xi) {
  Eigen::MatrixXd ad = alg.ad_matrix(xi.coeffs);
  Eigen::MatrixXd ad2 = ad * ad;
  Eigen::MatrixXd sym = 0.5 * (ad2 + ad2.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  SkewSpectrum out;
  std::vector<double> zetas;
  for (int i = 0; i < alg.dim(); ++i) {
    double ev = es.eigenvalues()[i];
    if (ev > -1e-12) {
      ++out.zero_multiplicity;
    } else {
      zetas.push_back(std::sqrt(-ev) / kTwoPi);
    }
  }
  std::sort(zetas.begin(), zetas.end());
  // -ad^2 eigenvalues come doubled per rotation block
  for (size_t i = 0; i < zetas.size();) {
    size_t j = i;
    while (j < zetas.size() && zetas[j] - zetas[i] < 1e-10 * (1.0 + zetas[i])) ++j;
    int count = static_cast<int>(j - i);
    out.positive_pairs.emplace_back(zetas[i], count / 2);
    i = j;
  }
  return out;
}

std::vector<HessianLine> hessian_eigenvalues(const lie::SuAlgebra& alg,
                                             const lie::AlgebraVector& xi, double cap,
                                             int max_modes) {
  if (cap <= 0) throw BadArgsError("hessian cap must be positive");
  if (max_modes < 1) throw BadArgsError("max_modes must be >= 1");
  SkewSpectrum sk = ad_spectrum(alg, xi);
  std::vector<HessianLine> lines;
  lines.push_back({1.0, HessianLine::kInfinite});
  for (const auto& [zeta, blocks] : sk.positive_pairs) {
    for (int m = 1; m <= max_modes; ++m) {
      for (double sgn : {-1.0, 1.0}) {
        double v = 1.0 + sgn * zeta / m;
        if (std::abs(v) <= cap) lines.push_back({v, 2 * blocks});
      }
    }
  }
  std::sort(lines.begin(), lines.end(), [](const HessianLine& a, const HessianLine& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.multiplicity > b.multiplicity;  // infinite tier first among equals
  });
  return lines;
}

int morse_index(const lie::SuAlgebra& alg, const lie::AlgebraVector& xi) {
  SkewSpectrum sk = ad_spectrum(alg, xi);
  int index = 0;
  for (const auto& [zeta, blocks] : sk.positive_pairs) {
    // 1 - zeta/m < 0 exactly for m < zeta
    for (int m = 1; static_cast<double>(m) < zeta + 1.0; ++m) {
      double v = 1.0 - zeta / m;
      if (std::abs(v) < 1e-12) throw Error(ExitCode::failure, "degenerate Hessian value at 0");
      if (v < 0) index += 2 * blocks;
    }
  }
  return index;
}

Eigen::MatrixXd galerkin_hessian(const lie::SuAlgebra& alg, const lie::AlgebraVector& xi,
                                 int modes) {
  if (modes < 1) throw BadArgsError("modes must be >= 1");
  const int d = alg.dim();
  // bracket structure B_ij = ([e_i, xi], e_j) is antisymmetric
  Eigen::MatrixXd br(d, d);
  {
    Eigen::MatrixXd ad = alg.ad_matrix(xi.coeffs);
    br = -ad.transpose();  // ([e_i, xi], e_j) = -(ad(xi) e_i, e_j)
  }
  const int dim = modes * d;
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(dim, dim);
  const double c = 4.0 / (M_PI * M_PI);
  for (int m = 1; m <= modes; ++m) {
    for (int mp = 1; mp <= modes; ++mp) {
      if (((m + mp) & 1) == 0) continue;
      double kappa = c / (static_cast<double>(m) * m - static_cast<double>(mp) * mp);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (br(i, j) == 0.0) continue;
          out((mp - 1) * d + j, (m - 1) * d + i) += kappa * br(i, j);
        }
      }
    }
  }
  return out;
}

}  // namespace pathgroup::hessian
