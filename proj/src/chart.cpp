#include "pathgroup/chart.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "pathgroup/hessian.hpp"
#include "pathgroup/parallel.hpp"
#include "pathgroup/rng.hpp"

namespace pathgroup::chart {

namespace {

// Gauss-Legendre rule on [0,1] via the Jacobi matrix of Legendre polynomials.
struct GaussLegendre {
  std::vector<double> nodes, weights;
};
GaussLegendre gauss_legendre01(int order) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    double b = static_cast<double>(i) / std::sqrt(4.0 * i * i - 1.0);
    jac(i, i - 1) = b;
    jac(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  GaussLegendre gl;
  gl.nodes.resize(order);
  gl.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    gl.nodes[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
    double v = es.eigenvectors()(0, i);
    gl.weights[i] = v * v;  // weights on [0,1] sum to 1
  }
  return gl;
}

Eigen::MatrixXd ad_group_matrix(const lie::SuAlgebra& alg, const lie::Mat& g) {
  const int d = alg.dim();
  Eigen::MatrixXd out(d, d);
  lie::GroupPoint gp{g};
  for (int c = 0; c < d; ++c) {
    lie::AlgebraVector e{Eigen::VectorXd::Unit(d, c)};
    out.col(c) = lie::adjoint(alg, gp, e).coeffs;
  }
  return out;
}

// derivative of the principal log through right translation, by central FD
Eigen::MatrixXd log_prime(const lie::SuAlgebra& alg, const lie::Mat& x, double h = 1e-6) {
  const int d = alg.dim();
  Eigen::MatrixXd out(d, d);
  for (int i = 0; i < d; ++i) {
    lie::Mat e = alg.matrix(Eigen::VectorXd::Unit(d, i));
    Eigen::VectorXd up = alg.coefficients(lie::log_unitary(lie::exp_skew(h * e) * x));
    Eigen::VectorXd dn = alg.coefficients(lie::log_unitary(lie::exp_skew(-h * e) * x));
    out.col(i) = (up - dn) / (2.0 * h);  // column i = log'(x) e_i
  }
  return out;
}

}  // namespace

GridPath geodesic_path(const lie::SuAlgebra& alg, const Eigen::VectorXd& xi, int level) {
  GridPath k = rough::zero_path(alg.dim(), level);
  for (int j = 0; j <= k.steps(); ++j)
    k.values.col(j) = xi * (static_cast<double>(j) / k.steps());
  return k;
}

Chart::Chart(const lie::SuAlgebra& alg, GridPath k, ChartConfig cfg)
    : alg_(alg), k_(std::move(k)), cfg_(cfg), maps_(alg, k_) {
  a_ = maps_.flow().values.back();
  k_holder_ = rough::holder_norm(k_, cfg_.alpha);
  // residual Jacobian at the base point, reused for all Newton polishing
  const int d = alg_.dim();
  newton_jac_.resize(d, d);
  GridPath eta0 = rough::zero_path(d, k_.level);
  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd dv = Eigen::VectorXd::Unit(d, i) * cfg_.fd_step;
    Eigen::VectorXd up = residual(a_, eta0, v0 + dv);
    Eigen::VectorXd dn = residual(a_, eta0, v0 - dv);
    newton_jac_.col(i) = (up - dn) / (2.0 * cfg_.fd_step);
  }
}

GridPath Chart::project_to_tangent(const GridPath& w) const { return maps_.project_tangent(w); }

Eigen::VectorXd Chart::residual(const lie::Mat& x, const GridPath& eta,
                                const Eigen::VectorXd& v) const {
  GridPath w = k_;
  w.values += eta.values;
  w.values += maps_.q_map(v).values;
  GroupPath y = rde::solve_ode(alg_, w, lie::Mat::Identity(alg_.n(), alg_.n()));
  return alg_.coefficients(lie::log_unitary(y.values.back() * x.adjoint()));
}

void Chart::check_smallness(const lie::Mat& x, const GridPath& eta) const {
  double eta_norm = rough::holder_norm(eta, cfg_.alpha);
  if (eta_norm > cfg_.eta_scale / (1.0 + k_holder_))
    throw OutOfChartError("eta exceeds the chart smallness threshold");
  double dist = alg_.coefficients(lie::log_unitary(x * a_.adjoint())).norm();
  if (dist > cfg_.x_distance) throw OutOfChartError("endpoint too far from the chart center");
}

SolveReport Chart::solve_v(const lie::Mat& x, const GridPath& eta) const {
  check_smallness(x, eta);
  const int d = alg_.dim();
  GaussLegendre gl = gauss_legendre01(cfg_.quad_nodes);
  Eigen::VectorXd log_x_a = alg_.coefficients(lie::log_unitary(x * a_.adjoint()));

  // Ad(Y(u,e,k))^T per grid point for the homotopy integrand
  const auto& flow_k = maps_.flow();
  SolveReport rep;
  rep.v = Eigen::VectorXd::Zero(d);
  double prev_step = -1;
  for (int it = 0; it < cfg_.max_iterations; ++it) {
    // A(eta, v) and B(eta, v) by theta-quadrature, one ODE solve per node
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd B = Eigen::VectorXd::Zero(d);
    GridPath dir = eta;
    dir.values += maps_.q_map(rep.v).values;
    for (int qn = 0; qn < cfg_.quad_nodes; ++qn) {
      double th = gl.nodes[qn];
      GridPath z = k_;
      z.values += th * dir.values;
      GroupPath yz = rde::solve_ode(alg_, z, lie::Mat::Identity(alg_.n(), alg_.n()));
      Eigen::MatrixXd lp = log_prime(alg_, yz.values.back());
      // C = int_0^1 Ad(Y^th(u) Y(u,e,k)^{-1}) du, trapezoid in u
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
      Eigen::VectorXd i_eta = Eigen::VectorXd::Zero(d);
      const int steps = k_.steps();
      for (int j = 0; j <= steps; ++j) {
        double wgt = (j == 0 || j == steps) ? 0.5 : 1.0;
        Eigen::MatrixXd adz = ad_group_matrix(alg_, yz.values[j]);
        Eigen::MatrixXd adk = ad_group_matrix(alg_, flow_k.values[j]);
        C += wgt * adz * adk.transpose();
        if (j < steps) {
          // trapezoid for int Ad(Y^th) d eta
          Eigen::MatrixXd adz1 = ad_group_matrix(alg_, yz.values[j + 1]);
          i_eta += 0.5 * (adz + adz1) * eta.increment(j);
        }
      }
      C /= static_cast<double>(steps);
      A += gl.weights[qn] * lp * C;
      B += gl.weights[qn] * lp * i_eta;
    }
    Eigen::VectorXd next = A.partialPivLu().solve(log_x_a - B);
    double step = (next - rep.v).norm();
    if (prev_step > 0 && step > 0)
      rep.contraction_ratio = std::max(rep.contraction_ratio, step / prev_step);
    prev_step = step;
    rep.v = next;
    ++rep.iterations;
    if (step < cfg_.fp_tol) break;
    if (rep.contraction_ratio > 0.9)
      throw OutOfChartError("fixed point is not contracting (ratio > 0.9)");
  }
  if (prev_step >= cfg_.fp_tol)
    throw OutOfChartError("fixed point did not converge within the iteration cap");

  // polish against the exact grid residual with the cached Jacobian
  for (int it = 0; it < 40; ++it) {
    Eigen::VectorXd r = residual(x, eta, rep.v);
    rep.residual = r.norm();
    if (rep.residual < cfg_.polish_tol) break;
    rep.v -= newton_jac_.partialPivLu().solve(r);
  }
  GridPath w = chart_forward_unchecked(x, eta, rep.v);
  GroupPath y = rde::solve_ode(alg_, w, lie::Mat::Identity(alg_.n(), alg_.n()));
  rep.residual = (y.values.back() - x).norm();
  if (rep.residual > cfg_.residual_tol)
    throw OutOfChartError("chart residual above tolerance after polish");
  return rep;
}

Eigen::VectorXd Chart::fast_v(const lie::Mat& x, const GridPath& eta) const {
  const int d = alg_.dim();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(newton_jac_);
  double last = 1e9;
  for (int it = 0; it < cfg_.max_iterations; ++it) {
    Eigen::VectorXd r = residual(x, eta, v);
    double rn = r.norm();
    if (rn < cfg_.polish_tol) return v;
    if (rn > 10.0 * last + 1.0) throw OutOfChartError("quasi-Newton diverged");
    last = rn;
    v -= lu.solve(r);
  }
  throw OutOfChartError("quasi-Newton did not converge");
}

GridPath Chart::chart_forward_unchecked(const lie::Mat&, const GridPath& eta,
                                        const Eigen::VectorXd& v) const {
  GridPath w = k_;
  w.values += eta.values;
  w.values += maps_.q_map(v).values;
  return w;
}

GridPath Chart::chart_forward(const lie::Mat& x, const GridPath& eta) const {
  SolveReport rep = solve_v(x, eta);
  return chart_forward_unchecked(x, eta, rep.v);
}

Chart::Inverse Chart::chart_inverse(const GridPath& w) const {
  Inverse out;
  GroupPath y = rde::solve_ode(alg_, w, lie::Mat::Identity(alg_.n(), alg_.n()));
  out.x = y.values.back();
  GridPath diff = w;
  diff.values -= k_.values;
  out.eta = maps_.project_tangent(diff);
  return out;
}

double Chart::weight_F(const lie::Mat& x, const GridPath& eta) const {
  Eigen::VectorXd v = fast_v(x, eta);
  GridPath phi = maps_.q_map(v);
  return rough::h_inner(eta, k_) + rough::h_inner(phi, k_) + 0.5 * rough::h_inner(k_, k_) +
         0.5 * rough::h_inner(phi, phi);
}

double Chart::det_G(const GridPath& eta, int retained_dirs) const {
  const int d = alg_.dim();
  double h = cfg_.fd_step;
  // Dx v in right-translate directions, central differences
  Eigen::MatrixXd dxv(d, d);
  for (int i = 0; i < d; ++i) {
    lie::Mat e = alg_.matrix(Eigen::VectorXd::Unit(d, i));
    Eigen::VectorXd up = fast_v(lie::exp_skew(h * e) * a_, eta);
    Eigen::VectorXd dn = fast_v(lie::exp_skew(-h * e) * a_, eta);
    dxv.col(i) = (up - dn) / (2.0 * h);
  }
  // D0 v restricted to a few tangent directions (finite-rank bookkeeping);
  // its coupling block vanishes against the Q-range exactly
  int r = retained_dirs;
  Eigen::MatrixXd d0v(d, r);
  std::vector<GridPath> dirs;
  if (r > 0) {
    for (int i = 0; i < r; ++i) {
      GridPath bump = rough::zero_path(d, k_.level);
      for (int j = 0; j <= bump.steps(); ++j) {
        double t = static_cast<double>(j) / bump.steps();
        bump.values((i / 2) % d, j) = std::sin((i + 1) * M_PI * t) / ((i + 1) * M_PI);
      }
      GridPath dir = maps_.project_tangent(bump);
      double nrm = rough::h_norm(dir);
      if (nrm > 0) dir.values /= nrm;
      dirs.push_back(dir);
      GridPath up = eta, dn = eta;
      up.values += h * dir.values;
      dn.values -= h * dir.values;
      d0v.col(i) = (fast_v(a_, up) - fast_v(a_, dn)) / (2.0 * h);
    }
  }
  // dyad Gram determinant over span{Q e_i} + retained tangent directions:
  // [[G Dxv - I + I, G D0v], [0, I]] after the exact-projector cancellations
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d + r, d + r);
  S.topLeftCorner(d, d) = maps_.gram() * dxv - Eigen::MatrixXd::Identity(d, d);
  if (r > 0) S.topRightCorner(d, r) = maps_.gram() * d0v;
  // tangent rows: <dir, Q(...)> = 0 exactly
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(d + r, d + r) + S;
  return full.determinant();
}

Chart::WickPair Chart::wick_form(const GridPath& eta, double lambda, int modes) const {
  Eigen::VectorXd xi = geodesic_xi();
  Eigen::MatrixXd gal = hessian::galerkin_hessian(alg_, lie::AlgebraVector{xi}, modes);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gal);
  const int d = alg_.dim();
  const int dim = modes * d;
  const int steps = k_.steps();

  WickPair out;
  // lhs: sum zeta_i (<eta, e~_i>^2 - 1/lambda) with e~_i = U_k^{-1} of the
  // sine-basis eigenvector path
  std::vector<double> sine(modes * (steps + 1));
  for (int m = 1; m <= modes; ++m)
    for (int j = 0; j <= steps; ++j) {
      double t = static_cast<double>(j) / steps;
      sine[(m - 1) * (steps + 1) + j] = std::sqrt(2.0) * std::sin(m * M_PI * t) / (m * M_PI);
    }
  for (int i = 0; i < dim; ++i) {
    double zeta = es.eigenvalues()[i] - 1.0;  // eigenvalue of T alone
    if (std::abs(zeta) < 1e-14) continue;
    GridPath ev = rough::zero_path(d, k_.level);
    for (int m = 1; m <= modes; ++m)
      for (int c = 0; c < d; ++c) {
        double coef = es.eigenvectors()((m - 1) * d + c, i);
        if (coef == 0.0) continue;
        for (int j = 0; j <= steps; ++j)
          ev.values(c, j) += coef * sine[(m - 1) * (steps + 1) + j];
      }
    GridPath tilde = maps_.inverse(ev);
    double coeff = rough::h_inner(eta, tilde);
    out.lhs += zeta * (coeff * coeff - 1.0 / lambda);
  }

  // rhs: grid integral of ([U_k eta, xi], d U_k eta)
  GridPath g = maps_.forward(eta);
  lie::Mat xim = alg_.matrix(xi);
  for (int j = 0; j < steps; ++j) {
    Eigen::VectorXd mid = 0.5 * (g.values.col(j) + g.values.col(j + 1));
    lie::Mat gm = alg_.matrix(mid);
    Eigen::VectorXd br = alg_.coefficients(gm * xim - xim * gm);
    out.rhs += br.dot(g.increment(j));
  }
  return out;
}

double Chart::half_b_norm(const GridPath& w) const {
  GroupPath y = rde::solve_ode(alg_, w, lie::Mat::Identity(alg_.n(), alg_.n()));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(alg_.dim());
  for (int j = 0; j < w.steps(); ++j) {
    Eigen::MatrixXd ad = alg_.ad_matrix(w.increment(j));
    Eigen::MatrixXd ady = ad_group_matrix(alg_, y.values[j]);
    b += ady * (rde::phi1(ad) * w.increment(j));
  }
  return 0.5 * b.squaredNorm();
}

Eigen::VectorXd Chart::geodesic_xi() const {
  Eigen::VectorXd xi = k_.values.col(k_.points() - 1);
  GridPath line = geodesic_path(alg_, xi, k_.level);
  if ((line.values - k_.values).cwiseAbs().maxCoeff() > 1e-12)
    throw BadArgsError("chart base path is not a geodesic line");
  return xi;
}

SlopeFit fit_loglog(const std::vector<double>& scales, const std::vector<double>& residuals) {
  SlopeFit fit;
  fit.scales = scales;
  fit.residuals = residuals;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(scales.size());
  for (int i = 0; i < n; ++i) {
    double x = std::log(scales[i]), y = std::log(std::max(residuals[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

namespace {

double wick_integral(const Chart& chart, const GridPath& eta) {
  GridPath g = chart.maps().forward(eta);
  Eigen::VectorXd xi = chart.geodesic_xi();
  lie::Mat xim = chart.algebra().matrix(xi);
  double acc = 0;
  for (int j = 0; j < g.steps(); ++j) {
    Eigen::VectorXd mid = 0.5 * (g.values.col(j) + g.values.col(j + 1));
    lie::Mat gm = chart.algebra().matrix(mid);
    acc += chart.algebra().coefficients(gm * xim - xim * gm).dot(g.increment(j));
  }
  return acc;
}

}  // namespace

SlopeFit expansion_f_check(const Chart& chart, const GridPath& eta,
                           const std::vector<double>& scales) {
  double k2 = 0.5 * rough::h_inner(chart.base_path(), chart.base_path());
  std::vector<double> res;
  for (double s : scales) {
    GridPath scaled = eta;
    scaled.values *= s;
    double F = chart.weight_F(chart.endpoint(), scaled);
    double W = wick_integral(chart, scaled);
    res.push_back(std::abs(F - k2 - 0.5 * W));
  }
  return fit_loglog(scales, res);
}

SlopeFit remainder_g_check(const Chart& chart, const GridPath& eta,
                           const std::vector<double>& scales) {
  std::vector<double> res;
  for (double s : scales) {
    GridPath scaled = eta;
    scaled.values *= s;
    res.push_back(std::abs(chart.det_G(scaled) - 1.0));
  }
  return fit_loglog(scales, res);
}

SlopeFit expansion_b_check(const Chart& chart, const GridPath& eta,
                           const std::vector<double>& scales) {
  double k2 = 0.5 * rough::h_inner(chart.base_path(), chart.base_path());
  Eigen::VectorXd xi = chart.geodesic_xi();
  lie::Mat xim = chart.algebra().matrix(xi);
  std::vector<double> res;
  for (double s : scales) {
    GridPath scaled = eta;
    scaled.values *= s;
    Eigen::VectorXd v = chart.fast_v(chart.endpoint(), scaled);
    GridPath w = chart.base_path();
    w.values += scaled.values;
    w.values += chart.maps().q_map(v).values;
    double lhs = chart.half_b_norm(w);

    double W = wick_integral(chart, scaled);
    GridPath g = chart.maps().forward(scaled);
    // quadratic bracket moments int |[g, xi]|^2 dt and |int [g, xi] dt|^2
    double sq = 0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(chart.algebra().dim());
    double dt = g.dt();
    for (int j = 0; j < g.steps(); ++j) {
      Eigen::VectorXd mid = 0.5 * (g.values.col(j) + g.values.col(j + 1));
      lie::Mat gm = chart.algebra().matrix(mid);
      Eigen::VectorXd br = chart.algebra().coefficients(gm * xim - xim * gm);
      sq += br.squaredNorm() * dt;
      mean += br * dt;
    }
    double rhs = k2 - 0.5 * W - 0.5 * (sq - mean.squaredNorm());
    res.push_back(std::abs(lhs - rhs));
  }
  return fit_loglog(scales, res);
}

McReport approx_eigennorm_mc(const Chart& chart, const McConfig& cfg) {
  if (cfg.modes > 8) throw BadArgsError("retained modes capped at 8");
  if (cfg.lambda < 10) throw BadArgsError("lambda must be >= 10");
  const auto& alg = chart.algebra();
  Eigen::VectorXd xi = chart.geodesic_xi();

  // retained directions: leading Galerkin eigenvectors by |zeta|, mapped back
  int gal_modes = std::max(16, cfg.modes);
  Eigen::MatrixXd gal = hessian::galerkin_hessian(alg, lie::AlgebraVector{xi}, gal_modes);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gal);
  const int d = alg.dim();
  const int dim = gal_modes * d;
  std::vector<int> order(dim);
  for (int i = 0; i < dim; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(es.eigenvalues()[a] - 1.0) > std::abs(es.eigenvalues()[b] - 1.0);
  });

  const int steps = chart.base_path().steps();
  std::vector<GridPath> dirs;
  std::vector<double> sds;  // per-mode sampling standard deviation
  for (int r = 0; r < cfg.modes; ++r) {
    int i = order[r];
    double hess = std::abs(es.eigenvalues()[i]);  // |1 + zeta|
    GridPath ev = rough::zero_path(d, chart.base_path().level);
    for (int m = 1; m <= gal_modes; ++m) {
      for (int c = 0; c < d; ++c) {
        double coef = es.eigenvectors()((m - 1) * d + c, i);
        if (coef == 0.0) continue;
        for (int j = 0; j <= steps; ++j) {
          double t = static_cast<double>(j) / steps;
          ev.values(c, j) += coef * std::sqrt(2.0) * std::sin(m * M_PI * t) / (m * M_PI);
        }
      }
    }
    GridPath tilde = chart.maps().inverse(ev);
    tilde = chart.maps().project_tangent(tilde);
    double nrm = rough::h_norm(tilde);
    if (nrm > 0) tilde.values /= nrm;
    dirs.push_back(tilde);
    sds.push_back(1.0 / std::sqrt(cfg.lambda * hess));
  }

  double k2 = 0.5 * rough::h_inner(chart.base_path(), chart.base_path());
  std::vector<double> weights(cfg.samples, 0.0);
  parallel_for(static_cast<size_t>(cfg.samples), [&](size_t s) {
    NormalSampler rng = NormalSampler::for_task(cfg.seed, s);
    GridPath eta = rough::zero_path(d, chart.base_path().level);
    for (int r = 0; r < cfg.modes; ++r) {
      double g = rng.normal();
      eta.values += (sds[r] * g) * dirs[r].values;
    }
    double chi = 1.0;
    if (!cfg.sanity_mode) {
      rough::LeveledLift lift = rough::lift_piecewise_linear(eta);
      chi = rough::cutoff_chi(lift, cfg.cutoff_m, cfg.cutoff_theta, cfg.lambda,
                              cfg.cutoff_delta)
                .value;
    }
    double w = chi * chi;
    if (w > 0 && !cfg.sanity_mode) {
      double F = chart.weight_F(chart.endpoint(), eta);
      double W = wick_integral(chart, eta);
      double FR = F - k2 - 0.5 * W;
      double GR = chart.det_G(eta) - 1.0;
      w *= std::exp(-cfg.lambda * FR) * (1.0 + GR);
    }
    weights[s] = w;
  });

  McReport rep;
  double sum = 0, sum2 = 0;
  for (double w : weights) {
    sum += w;
    sum2 += w * w;
  }
  double n = static_cast<double>(cfg.samples);
  rep.estimate = sum / n;
  rep.std_error = std::sqrt(std::max(0.0, sum2 / n - rep.estimate * rep.estimate) / n);
  rep.ess_fraction = sum2 > 0 ? (sum * sum) / (sum2 * n) : 0.0;
  rep.weight_degeneracy = rep.ess_fraction < 0.1;
  return rep;
}

}  // namespace pathgroup::chart
