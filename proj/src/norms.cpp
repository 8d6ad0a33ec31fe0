#include "pathgroup/norms.hpp"

#include <cmath>

namespace pathgroup::rough {

double holder_norm(const GridPath& w, double alpha) {
  const int n = w.points();
  double dt = w.dt();
  double best = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double num = (w.values.col(j) - w.values.col(i)).norm();
      best = std::max(best, num / std::pow((j - i) * dt, alpha));
    }
  }
  return best;
}

double gamma_one(const GridPath& w, int m, double theta) {
  if (m * (1.0 - theta) <= 1.0) throw BadArgsError("need m (1 - theta) > 1");
  const int n = w.points();
  double dt = w.dt();
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double num = (w.values.col(j) - w.values.col(i)).squaredNorm();
      acc += std::pow(num, 2 * m) / std::pow((j - i) * dt, 2.0 + 2.0 * m * theta);
    }
  }
  return acc * dt * dt;
}

namespace {

// One pass over grid pairs; the weight kernel (t-s)^{-(2+2m theta)} is shared.
template <typename Fn>
void for_each_pair(const LeveledLift& w, int m, double theta, Fn&& fn) {
  const int n = w.base.points();
  const double dt = w.base.dt();
  const int d = w.base.dim();
  Eigen::MatrixXd area(d, d);
  for (int a = 0; a < n; ++a) {
    const Eigen::VectorXd wa = w.base.values.col(a);
    const Eigen::MatrixXd pa = w.area_prefix[a];
    for (int b = a + 1; b < n; ++b) {
      Eigen::VectorXd incr = w.base.values.col(b) - wa;
      area.noalias() = w.area_prefix[b] - pa;
      area.noalias() -= wa * incr.transpose();
      double kern = std::pow((b - a) * dt, -(2.0 + 2.0 * m * theta));
      fn(a, b, incr, area, kern);
    }
  }
}

}  // namespace

double gamma_two(const LeveledLift& w, int i, int j, int m, double theta) {
  if (m * (1.0 - theta) <= 1.0) throw BadArgsError("need m (1 - theta) > 1");
  double dt = w.base.dt();
  double acc = 0;
  for_each_pair(w, m, theta,
                [&](int, int, const Eigen::VectorXd&, const Eigen::MatrixXd& area, double kern) {
                  double v = area(i, j);
                  acc += std::pow(v * v, m) * kern;
                });
  return acc * dt * dt;
}

double gamma_bar(const LeveledLift& w, int m, double theta) {
  if (m * (1.0 - theta) <= 1.0) throw BadArgsError("need m (1 - theta) > 1");
  const int d = w.base.dim();
  double dt = w.base.dt();
  double acc = 0;
  for_each_pair(w, m, theta,
                [&](int, int, const Eigen::VectorXd& incr, const Eigen::MatrixXd& area,
                    double kern) {
                  acc += std::pow(incr.squaredNorm(), 2 * m) * kern;
                  for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) acc += std::pow(area(i, j) * area(i, j), m) * kern;
                });
  return std::pow(acc * dt * dt, 1.0 / (4.0 * m));
}

double p_variation(const GridPath& w, double p) {
  if (p < 1) throw BadArgsError("p-variation needs p >= 1");
  const int n = w.points();
  std::vector<double> best(n, 0.0);
  for (int j = 1; j < n; ++j) {
    double b = 0;
    for (int i = 0; i < j; ++i) {
      double seg = std::pow((w.values.col(j) - w.values.col(i)).norm(), p);
      b = std::max(b, best[i] + seg);
    }
    best[j] = b;
  }
  return std::pow(best[n - 1], 1.0 / p);
}

double p_variation_scalar(const std::vector<double>& x, double p) {
  if (p < 1) throw BadArgsError("p-variation needs p >= 1");
  const int n = static_cast<int>(x.size());
  std::vector<double> best(n, 0.0);
  for (int j = 1; j < n; ++j) {
    double b = 0;
    for (int i = 0; i < j; ++i) b = std::max(b, best[i] + std::pow(std::abs(x[j] - x[i]), p));
    best[j] = b;
  }
  return std::pow(best[n - 1], 1.0 / p);
}

NormReport path_norms(const LeveledLift& w, double alpha, int m, double theta, double p) {
  NormReport r;
  r.alpha = alpha;
  r.m = m;
  r.theta = theta;
  r.p = p;
  r.holder_alpha = holder_norm(w.base, alpha);
  r.besov_m_theta = std::pow(gamma_one(w.base, m, theta), 1.0 / (4.0 * m));
  r.gamma_bar = gamma_bar(w, m, theta);
  r.p_variation = p_variation(w.base, p);
  return r;
}

namespace {
// 7th order smoothstep on [0,1]
double smoothstep(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  double t4 = t * t * t * t;
  return t4 * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}
double smoothstep_prime(double t) {
  if (t <= 0 || t >= 1) return 0;
  double t3 = t * t * t;
  return t3 * (140.0 - 420.0 * t + 420.0 * t * t - 140.0 * t * t * t);
}
}  // namespace

double bump_chi(double u) {
  double a = std::abs(u);
  if (a <= 1) return 1;
  if (a >= 2) return 0;
  return smoothstep(2.0 - a);
}

double bump_chi_prime(double u) {
  double a = std::abs(u);
  if (a <= 1 || a >= 2) return 0;
  double d = -smoothstep_prime(2.0 - a);
  return u < 0 ? -d : d;
}

CutoffResult cutoff_chi(const LeveledLift& w, int m, double theta, double lambda, double delta) {
  if (!(delta > 2.0 / 3.0 && delta < 1.0)) throw BadArgsError("delta must lie in (2/3, 1)");
  if (m * (1.0 - theta) <= 1.0) throw BadArgsError("need m (1 - theta) > 1");
  CutoffResult res;
  const GridPath& base = w.base;
  const int n = base.points();
  const int d = base.dim();
  const double dt = base.dt();

  double gammas = 0;
  for_each_pair(w, m, theta,
                [&](int, int, const Eigen::VectorXd& incr, const Eigen::MatrixXd& area,
                    double kern) {
                  gammas += std::pow(incr.squaredNorm(), 2 * m) * kern;
                  for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                      gammas += std::pow(area(i, j) * area(i, j), m) * kern;
                });
  gammas *= dt * dt;
  double scale = std::pow(lambda, 2.0 * m * delta);
  res.argument = scale * gammas;
  res.value = bump_chi(res.argument);
  double chi_p = bump_chi_prime(res.argument);
  if (chi_p == 0.0) {
    res.grad_norm = 0;
    return res;
  }

  // Gradient density per grid cell via interval difference arrays.
  // Gamma_1 pairs push coef * w_{a,b} on [t_a, t_b); each area component (i,j)
  // pushes coef2 * (w^i(u) - w^i(a)) on component j and coef2 * (w^j(b) -
  // w^j(u)) on component i, encoded as a pointwise multiplier plus a constant.
  Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(d, n + 1);
  Eigen::MatrixXd multA = Eigen::MatrixXd::Zero(d * d, n + 1);  // (i,j) -> j comp times w^i(u)
  Eigen::MatrixXd constA = Eigen::MatrixXd::Zero(d * d, n + 1);
  Eigen::MatrixXd multB = Eigen::MatrixXd::Zero(d * d, n + 1);  // (i,j) -> i comp times w^j(u)
  Eigen::MatrixXd constB = Eigen::MatrixXd::Zero(d * d, n + 1);
  for_each_pair(
      w, m, theta,
      [&](int a, int b, const Eigen::VectorXd& incr, const Eigen::MatrixXd& area, double kern) {
        double coef = 4.0 * m * std::pow(incr.squaredNorm(), 2 * m - 1) * kern * dt * dt;
        diff.col(a) += coef * incr;
        diff.col(b) -= coef * incr;
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            double v = area(i, j);
            if (v == 0) continue;
            double c2 = 2.0 * m * std::pow(v, 2 * m - 1) * kern * dt * dt;
            int idx = i * d + j;
            multA(idx, a) += c2;
            multA(idx, b) -= c2;
            constA(idx, a) += c2 * base.values(i, a);
            constA(idx, b) -= c2 * base.values(i, a);
            multB(idx, a) += c2;
            multB(idx, b) -= c2;
            constB(idx, a) += c2 * base.values(j, b);
            constB(idx, b) -= c2 * base.values(j, b);
          }
        }
      });
  double norm2 = 0;
  Eigen::VectorXd run = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd runMA = Eigen::VectorXd::Zero(d * d), runCA = Eigen::VectorXd::Zero(d * d);
  Eigen::VectorXd runMB = Eigen::VectorXd::Zero(d * d), runCB = Eigen::VectorXd::Zero(d * d);
  for (int c = 0; c < n - 1; ++c) {
    run += diff.col(c);
    runMA += multA.col(c);
    runCA += constA.col(c);
    runMB += multB.col(c);
    runCB += constB.col(c);
    Eigen::VectorXd cell = run;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        int idx = i * d + j;
        cell[j] += runMA[idx] * base.values(i, c) - runCA[idx];
        cell[i] += runCB[idx] - runMB[idx] * base.values(j, c);
      }
    }
    norm2 += cell.squaredNorm() * dt;
  }
  res.grad_norm = std::abs(chi_p) * scale * std::sqrt(norm2);
  return res;
}

DomainFunctionals domain_functionals(const std::vector<Eigen::MatrixXcd>& gamma, int K, int m,
                                     double theta, double beta) {
  if (gamma.empty()) throw BadArgsError("empty path");
  if (K < 1) throw BadArgsError("K must be >= 1");
  DomainFunctionals out;
  const int n = static_cast<int>(gamma.size());
  const double dt = 1.0 / (n - 1);
  auto dist = [&](int i, int j) { return (gamma[j] - gamma[i]).norm(); };
  for (int blk = 0; blk < K; ++blk) {
    int lo = static_cast<int>(std::floor(static_cast<double>(blk) / K * (n - 1)));
    int hi = static_cast<int>(std::ceil(static_cast<double>(blk + 1) / K * (n - 1)));
    hi = std::min(hi, n - 1);
    for (int i = lo; i <= hi; ++i)
      for (int j = i + 1; j <= hi; ++j) out.phi_inf_K = std::max(out.phi_inf_K, dist(i, j));
  }
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double v = dist(i, j);
      acc += std::pow(v, 4 * m) / std::pow((j - i) * dt, 2.0 + 2.0 * m * theta);
      out.phi_H_beta = std::max(out.phi_H_beta, v / std::pow((j - i) * dt, beta));
    }
  }
  out.phi_B_m_theta = std::pow(acc * dt * dt, 1.0 / (4.0 * m));
  return out;
}

}  // namespace pathgroup::rough
