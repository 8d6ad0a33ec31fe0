#include "pathgroup/group_rde.hpp"

#include <cmath>
#include <fstream>

namespace pathgroup::rde {

GroupPath solve_rde(const lie::SuAlgebra& alg, const LeveledLift& lift, const lie::Mat& x0) {
  const int n = lift.base.points();
  const int d = alg.dim();
  const int nn = alg.n();
  GroupPath out;
  out.level = lift.base.level;
  out.values.reserve(n);
  out.values.push_back(x0);
  lie::Mat y = x0;
  for (int j = 1; j < n; ++j) {
    Eigen::VectorXd w1 = lift.incr(j - 1, j);
    Eigen::MatrixXd w2 = lift.area(j - 1, j);
    lie::Mat step = lie::Mat::Identity(nn, nn) + alg.matrix(w1);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (w2(a, b) == 0) continue;
        step += w2(a, b) * (alg.basis()[a] * alg.basis()[b]);
      }
    }
    y = y * step;
    out.max_step_defect = std::max(out.max_step_defect, lie::group_defect(y));
    y = lie::unitarize(y);
    out.values.push_back(y);
  }
  return out;
}

GroupPath solve_ode(const lie::SuAlgebra& alg, const GridPath& h, const lie::Mat& x0) {
  GroupPath out;
  out.level = h.level;
  out.values.reserve(h.points());
  out.values.push_back(x0);
  lie::Mat y = x0;
  for (int j = 0; j < h.steps(); ++j) {
    y = y * lie::exp_skew(alg.matrix(h.increment(j)));
    out.values.push_back(y);
  }
  return out;
}

GridPath development_left(const lie::SuAlgebra& alg, const GroupPath& y) {
  GridPath out = rough::zero_path(alg.dim(), y.level);
  lie::Mat acc = lie::Mat::Zero(alg.n(), alg.n());
  for (size_t j = 1; j < y.values.size(); ++j) {
    lie::Mat mid = 0.5 * (y.values[j - 1].adjoint() + y.values[j].adjoint());
    acc += mid * (y.values[j] - y.values[j - 1]);
    out.values.col(static_cast<int>(j)) = alg.coefficients(acc);
  }
  return out;
}

RightDevelopment development_right(const lie::SuAlgebra& alg, const GroupPath& y,
                                   const LeveledLift& lift) {
  if (y.level != lift.base.level) throw BadArgsError("development: level mismatch");
  const int d = alg.dim();
  RightDevelopment out;
  out.midpoint = rough::zero_path(d, y.level);
  out.rough_integral = rough::zero_path(d, y.level);
  lie::Mat accK = lie::Mat::Zero(alg.n(), alg.n());
  lie::Mat accB = lie::Mat::Zero(alg.n(), alg.n());
  for (size_t j = 1; j < y.values.size(); ++j) {
    int jj = static_cast<int>(j);
    accK += (y.values[j] - y.values[j - 1]) * (0.5 * (y.values[j - 1].adjoint() + y.values[j].adjoint()));
    out.midpoint.values.col(jj) = alg.coefficients(accK);

    // Xi_{s,t} = Ad(Y_s) w_{s,t} + Ad(Y_s) sum e_a e_b (2 w^{ab} - w^a w^b)
    Eigen::VectorXd w1 = lift.incr(jj - 1, jj);
    Eigen::MatrixXd w2 = lift.area(jj - 1, jj);
    lie::Mat inner = alg.matrix(w1);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        double weight = 2.0 * w2(a, b) - w1(a) * w1(b);
        if (weight == 0) continue;
        inner += weight * (alg.basis()[a] * alg.basis()[b]);
      }
    }
    accB += y.values[j - 1] * inner * y.values[j - 1].adjoint();
    out.rough_integral.values.col(jj) = alg.coefficients(accB);
  }
  for (int j = 0; j < out.midpoint.points(); ++j) {
    double diff = (out.midpoint.values.col(j) - out.rough_integral.values.col(j)).norm();
    out.sup_difference = std::max(out.sup_difference, diff);
  }
  return out;
}

Eigen::MatrixXd phi1(const Eigen::MatrixXd& a) {
  const int d = static_cast<int>(a.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(d, d);
  for (int i = 1; i <= 24; ++i) {
    term = term * a / static_cast<double>(i + 1);
    out += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  return out;
}

FlowMaps::FlowMaps(const lie::SuAlgebra& alg, const GridPath& k) : alg_(alg), k_(k) {
  flow_ = solve_ode(alg, k, lie::Mat::Identity(alg.n(), alg.n()));
  const int d = alg.dim();
  seg_fwd_.reserve(k.steps());
  for (int j = 0; j < k.steps(); ++j) {
    Eigen::MatrixXd ad = alg.ad_matrix(k.increment(j));
    Eigen::MatrixXd adY(d, d);
    lie::GroupPoint g{flow_.values[j]};
    for (int c = 0; c < d; ++c) {
      lie::AlgebraVector e{Eigen::VectorXd::Unit(d, c)};
      adY.col(c) = lie::adjoint(alg, g, e).coeffs;
    }
    seg_fwd_.push_back(adY * phi1(ad));
  }
  gram_ = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < k.steps(); ++j) gram_ += seg_fwd_[j] * seg_fwd_[j].transpose();
  gram_ /= static_cast<double>(k.steps());
  gram_inv_ = gram_.inverse();
}

GridPath FlowMaps::forward(const GridPath& w) const {
  if (w.level != k_.level) throw BadArgsError("flow transform: level mismatch");
  GridPath out = rough::zero_path(alg_.dim(), w.level);
  for (int j = 0; j < w.steps(); ++j)
    out.values.col(j + 1) = out.values.col(j) + seg_fwd_[j] * w.increment(j);
  return out;
}

GridPath FlowMaps::inverse(const GridPath& g) const {
  if (g.level != k_.level) throw BadArgsError("flow transform: level mismatch");
  GridPath out = rough::zero_path(alg_.dim(), g.level);
  for (int j = 0; j < g.steps(); ++j)
    out.values.col(j + 1) =
        out.values.col(j) + seg_fwd_[j].partialPivLu().solve(g.increment(j));
  return out;
}

GridPath FlowMaps::q_map(const Eigen::VectorXd& v) const {
  GridPath out = rough::zero_path(alg_.dim(), k_.level);
  double dt = k_.dt();
  for (int j = 0; j < k_.steps(); ++j)
    out.values.col(j + 1) = out.values.col(j) + dt * (seg_fwd_[j].transpose() * v);
  return out;
}

Eigen::VectorXd FlowMaps::endpoint_integral(const GridPath& w) const {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(alg_.dim());
  for (int j = 0; j < w.steps(); ++j) acc += seg_fwd_[j] * w.increment(j);
  return acc;
}

GridPath FlowMaps::project_tangent(const GridPath& w) const {
  Eigen::VectorXd v = gram_inv_ * endpoint_integral(w);
  GridPath q = q_map(v);
  GridPath out = w;
  out.values -= q.values;
  return out;
}

double FlowMaps::tangency_defect(const GridPath& w) const {
  return endpoint_integral(w).norm();
}

Projections projections(const FlowMaps& maps, const GridPath& w) {
  Projections out;
  out.v = maps.endpoint_integral(w);
  out.normal = maps.q_map(maps.gram().inverse() * out.v);
  out.tangent = w;
  out.tangent.values -= out.normal.values;
  return out;
}

std::vector<lie::Mat> derivative_dy(const lie::SuAlgebra& alg, const GroupPath& y,
                                    const GridPath& h) {
  if (y.level != h.level) throw BadArgsError("derivative: level mismatch");
  std::vector<lie::Mat> out;
  out.reserve(y.values.size());
  out.push_back(lie::Mat::Zero(alg.n(), alg.n()));
  lie::Mat acc = lie::Mat::Zero(alg.n(), alg.n());
  for (size_t j = 1; j < y.values.size(); ++j) {
    // trapezoid for the Young integral of Ad(Y) dh over the segment
    lie::Mat dh = alg.matrix(h.increment(static_cast<int>(j) - 1));
    lie::Mat lo = y.values[j - 1] * dh * y.values[j - 1].adjoint();
    lie::Mat hi = y.values[j] * dh * y.values[j].adjoint();
    acc += 0.5 * (lo + hi);
    out.push_back(acc * y.values[j]);
  }
  return out;
}

double flow_energy(const lie::SuAlgebra& alg, const GroupPath& y) {
  (void)alg;
  double acc = 0;
  const double dt = 1.0 / (static_cast<double>(y.values.size()) - 1);
  for (size_t j = 1; j < y.values.size(); ++j) {
    // dY Y^{-1} per segment, with the exact generator log(Y_j Y_{j-1}^{-1})
    lie::Mat gen = lie::log_unitary(y.values[j] * y.values[j - 1].adjoint());
    double nrm = lie::norm(gen);
    acc += nrm * nrm / dt;
  }
  return acc;
}

void write_csv(const GroupPath& y, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ExitCode::failure, "cannot open " + path);
  const int n = static_cast<int>(y.values.front().rows());
  out << "t";
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out << ",re" << r << c << ",im" << r << c;
  out << "\n";
  out.precision(17);
  const double dt = 1.0 / (static_cast<double>(y.values.size()) - 1);
  for (size_t j = 0; j < y.values.size(); ++j) {
    out << static_cast<double>(j) * dt;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out << "," << y.values[j](r, c).real() << "," << y.values[j](r, c).imag();
    out << "\n";
  }
}

}  // namespace pathgroup::rde
