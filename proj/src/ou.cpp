#include "pathgroup/ou.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "pathgroup/errors.hpp"

namespace pathgroup::ou {

namespace {
constexpr double kDegeneracyTol = 1e-12;

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// per-mode normalization (|1+z| e^{1-|1+z|})^{1/4}: the truncated counterpart
// of the regularized-determinant prefactor, making each mode unit L^2
double det2_factor(double zeta) {
  double a = std::abs(1.0 + zeta);
  return std::pow(a * std::exp(1.0 - a), 0.25);
}

// In x = sqrt(lambda |1+zeta|) eta, the mode measure together with the
// eigenfunction exponentials reduces to prefactor * exp(-x^2/2)/sqrt(2 pi) dx.
double mode_prefactor(double zeta) {
  double a = std::abs(1.0 + zeta);
  double c2 = std::sqrt(a * std::exp(1.0 - a));  // det2_factor^2
  double shift = zeta / 2.0 + (1.0 + zeta < 0 ? a : 0.0);
  return c2 * std::exp(shift) / std::sqrt(a);
}
}  // namespace

ModeSpec make_mode_spec(std::vector<double> zetas, double lambda) {
  if (lambda <= 0) throw BadArgsError("lambda must be positive");
  ModeSpec spec;
  for (double z : zetas)
    if (std::abs(1.0 + z) < kDegeneracyTol)
      throw Error(ExitCode::failure, "degenerate mode: |1+zeta| below tolerance");
  std::sort(zetas.begin(), zetas.end(),
            [](double a, double b) { return (1.0 + a) < (1.0 + b); });
  int neg = 0;
  while (neg < static_cast<int>(zetas.size()) && 1.0 + zetas[neg] < 0) ++neg;
  spec.zetas = std::move(zetas);
  spec.negatives = neg;
  spec.lambda = lambda;
  return spec;
}

double ou_eigenvalue(const ModeSpec& spec, const MultiIndex& n) {
  if (n.n.size() > spec.zetas.size()) throw BadArgsError("multi-index longer than mode list");
  double acc = 0;
  for (int i = 0; i < spec.negatives; ++i) acc += std::abs(1.0 + spec.zetas[i]);
  for (size_t i = 0; i < n.n.size(); ++i) {
    if (n.n[i] < 0) throw BadArgsError("multi-index entries must be >= 0");
    acc += static_cast<double>(n.n[i]) * std::abs(1.0 + spec.zetas[i]);
  }
  return spec.lambda * acc;
}

double hermite_prob(int n, double x) {
  if (n == 0) return 1.0;
  double h0 = 1.0, h1 = x;
  for (int k = 2; k <= n; ++k) {
    double h2 = x * h1 - (k - 1) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double ou_eigenfunction(const ModeSpec& spec, const MultiIndex& n,
                        const std::vector<double>& point) {
  if (point.size() != spec.zetas.size())
    throw BadArgsError("evaluation point dimension != retained mode count");
  double out = 1.0;
  for (size_t i = 0; i < spec.zetas.size(); ++i) {
    double z = spec.zetas[i];
    long ni = i < n.n.size() ? n.n[i] : 0;
    double a = std::abs(1.0 + z);
    double x = std::sqrt(spec.lambda * a) * point[i];
    double f = det2_factor(z) * hermite_prob(static_cast<int>(ni), x) /
               std::sqrt(factorial(static_cast<int>(ni)));
    if (static_cast<int>(i) < spec.negatives)
      f *= std::exp(-0.5 * spec.lambda * a * (point[i] * point[i] - 1.0 / spec.lambda));
    out *= f;
  }
  return out;
}

GaussHermite gauss_hermite(int order) {
  if (order < 1) throw BadArgsError("quadrature order must be >= 1");
  // Golub-Welsch for the probabilists' weight: x He_n = He_{n+1} + n He_{n-1}
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    double b = std::sqrt(static_cast<double>(i));
    jac(i, i - 1) = b;
    jac(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  GaussHermite gh;
  gh.nodes.resize(order);
  gh.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    gh.nodes[i] = es.eigenvalues()[i];
    double v = es.eigenvectors()(0, i);
    gh.weights[i] = v * v;
  }
  return gh;
}

namespace {

// per-mode quadrature of eta^alpha e_n e_m against the mode measure
double mode_moment(double zeta, double lambda, int ni, int mi, int alpha,
                   const GaussHermite& gh) {
  double a = std::abs(1.0 + zeta);
  double scale = 1.0 / std::sqrt(lambda * a);
  double acc = 0;
  for (size_t q = 0; q < gh.nodes.size(); ++q) {
    double x = gh.nodes[q];
    double t = alpha == 0 ? 1.0 : std::pow(scale * x, alpha);
    acc += gh.weights[q] * t * hermite_prob(ni, x) * hermite_prob(mi, x);
  }
  return mode_prefactor(zeta) * acc / std::sqrt(factorial(ni) * factorial(mi));
}

}  // namespace

double mode_inner_product(const ModeSpec& spec, const MultiIndex& n, const MultiIndex& m,
                          int quad_order) {
  GaussHermite gh = gauss_hermite(quad_order);
  double total = 1.0;
  for (size_t i = 0; i < spec.zetas.size(); ++i) {
    long ni = i < n.n.size() ? n.n[i] : 0;
    long mi = i < m.n.size() ? m.n[i] : 0;
    total *= mode_moment(spec.zetas[i], spec.lambda, static_cast<int>(ni), static_cast<int>(mi),
                         0, gh);
  }
  return total;
}

double verify_generator_1d(double K, double lambda, int n, int grid) {
  if (K <= 0 || lambda <= 0) throw BadArgsError("K and lambda must be positive");
  if (grid < 256) throw BadArgsError("grid must be >= 256");
  double a = lambda * K;
  double L = (std::sqrt(2.0 * n + 1.0) + 8.0) / std::sqrt(a / 2.0);
  double h = 2.0 * L / (grid - 1);
  std::vector<double> x(grid), psi(grid);
  for (int i = 0; i < grid; ++i) {
    x[i] = -L + i * h;
    psi[i] = hermite_prob(n, std::sqrt(a) * x[i]) * std::exp(-a * x[i] * x[i] / 4.0);
  }
  double E = a * (n + 1);
  double num = 0, den = 0;
  for (int i = 1; i + 1 < grid; ++i) {
    if (std::abs(x[i]) > L / 2) continue;
    double lap = (psi[i + 1] - 2 * psi[i] + psi[i - 1]) / (h * h);
    double H = -lap + (a * a / 4.0 * x[i] * x[i] + a / 2.0) * psi[i];
    num = std::max(num, std::abs(H - E * psi[i]));
    den = std::max(den, std::abs(E * psi[i]));
  }
  return num / den;
}

double measure_identity_check(const ModeSpec& spec, const MultiIndex& n, const MultiIndex& m,
                              int quad_order) {
  if (spec.zetas.size() > 2) throw BadArgsError("measure identity check supports <= 2 modes");
  if (quad_order < 64) throw BadArgsError("quad_order must be >= 64");
  // flipped spectrum zeta' = |1+zeta| - 1 keeps the eigenvector pairing
  ModeSpec flipped;
  for (double z : spec.zetas) flipped.zetas.push_back(std::abs(1.0 + z) - 1.0);
  flipped.negatives = 0;
  flipped.lambda = spec.lambda;

  GaussHermite gh = gauss_hermite(quad_order);
  const size_t dim = spec.zetas.size();
  double worst = 0;
  std::vector<int> alpha(dim, 0);
  std::function<void(size_t, int)> loop = [&](size_t pos, int left) {
    if (pos == dim) {
      double m1 = 1.0, m2 = 1.0;
      for (size_t i = 0; i < dim; ++i) {
        int ni = static_cast<int>(i < n.n.size() ? n.n[i] : 0);
        int mi = static_cast<int>(i < m.n.size() ? m.n[i] : 0);
        m1 *= mode_moment(spec.zetas[i], spec.lambda, ni, mi, alpha[i], gh);
        m2 *= mode_moment(flipped.zetas[i], flipped.lambda, ni, mi, alpha[i], gh);
      }
      worst = std::max(worst, std::abs(m1 - m2));
      return;
    }
    for (int d = 0; d <= left; ++d) {
      alpha[pos] = d;
      loop(pos + 1, left - d);
    }
    alpha[pos] = 0;
  };
  loop(0, 4);
  return worst;
}

std::vector<SpectrumLine> ou_spectrum_below(const ModeSpec& spec, double R) {
  if (R <= 0) throw BadArgsError("R must be positive");
  double e0 = 0;
  for (int i = 0; i < spec.negatives; ++i) e0 += std::abs(1.0 + spec.zetas[i]);
  std::map<long long, SpectrumLine> found;
  std::vector<double> gaps;
  for (double z : spec.zetas) gaps.push_back(std::abs(1.0 + z));
  std::function<void(size_t, double)> rec = [&](size_t i, double acc) {
    if (acc > R + 1e-12) return;
    if (i == gaps.size()) {
      long long key = llround(acc * 1e10);
      auto it = found.find(key);
      if (it == found.end())
        found[key] = {acc, 1};
      else
        ++it->second.multiplicity;
      return;
    }
    for (long c = 0;; ++c) {
      double v = acc + c * gaps[i];
      if (v > R + 1e-12) break;
      rec(i + 1, v);
    }
  };
  rec(0, e0);
  std::vector<SpectrumLine> out;
  out.reserve(found.size());
  for (auto& [k, line] : found) out.push_back(line);
  return out;
}

}  // namespace pathgroup::ou
