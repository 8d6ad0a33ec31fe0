#include "pathgroup/grid_path.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pathgroup/rng.hpp"

namespace pathgroup::rough {

GridPath zero_path(int dim, int level) {
  GridPath p;
  p.level = level;
  p.values = Eigen::MatrixXd::Zero(dim, (1 << level) + 1);
  return p;
}

void validate(const GridPath& p) {
  if (p.points() != (1 << p.level) + 1)
    throw BadArgsError("grid path has wrong point count for its level");
  if (p.values.col(0).norm() != 0) throw BadArgsError("grid path must start at 0");
  if (!p.values.allFinite()) throw BadArgsError("grid path has non-finite entries");
}

Eigen::MatrixXd LeveledLift::area(int i, int j) const {
  // Chen: w2_{s,t} = w2_{0,t} - w2_{0,s} - w1_{0,s} (x) w1_{s,t}
  return area_prefix[j] - area_prefix[i] -
         base.values.col(i) * (base.values.col(j) - base.values.col(i)).transpose();
}

LeveledLift lift_piecewise_linear(const GridPath& path) {
  LeveledLift lift;
  lift.base = path;
  const int d = path.dim();
  lift.area_prefix.assign(path.points(), Eigen::MatrixXd::Zero(d, d));
  for (int j = 1; j < path.points(); ++j) {
    Eigen::VectorXd dv = path.increment(j - 1);
    // per segment the area is (1/2) dv (x) dv; recombine with the prefix
    lift.area_prefix[j] = lift.area_prefix[j - 1] + 0.5 * dv * dv.transpose() +
                          path.values.col(j - 1) * dv.transpose();
  }
  return lift;
}

GridPath dyadic_approx(const GridPath& path, int N) {
  if (N > path.level) throw BadArgsError("dyadic approximation needs N <= path level");
  GridPath out = path;
  int stride = 1 << (path.level - N);
  for (int block = 0; block < (1 << N); ++block) {
    int a = block * stride, b = a + stride;
    for (int j = a + 1; j < b; ++j) {
      double frac = static_cast<double>(j - a) / stride;
      out.values.col(j) = path.values.col(a) + frac * (path.values.col(b) - path.values.col(a));
    }
  }
  return out;
}

Eigen::MatrixXd cross_area(const GridPath& x, const GridPath& y, int s_idx, int t_idx) {
  if (x.level != y.level || x.dim() != y.dim()) throw BadArgsError("cross_area: grid mismatch");
  const int d = x.dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (int j = s_idx; j < t_idx; ++j) {
    Eigen::VectorXd dy = y.increment(j);
    Eigen::VectorXd xs = x.values.col(j) - x.values.col(s_idx);
    Eigen::VectorXd dx = x.increment(j);
    out += xs * dy.transpose() + 0.5 * dx * dy.transpose();
  }
  return out;
}

std::vector<Eigen::MatrixXd> dN_correction(const LeveledLift& w, int N) {
  if (N > w.base.level) throw BadArgsError("dN correction needs N <= lift level");
  const int d = w.base.dim();
  int stride = 1 << (w.base.level - N);
  std::vector<Eigen::MatrixXd> out;
  out.reserve((1 << N) + 1);
  out.push_back(Eigen::MatrixXd::Zero(d, d));
  for (int i = 1; i <= (1 << N); ++i) {
    int a = (i - 1) * stride, b = i * stride;
    Eigen::VectorXd incr = w.incr(a, b);
    Eigen::MatrixXd block = w.area(a, b) - 0.5 * incr * incr.transpose();
    out.push_back(out.back() + block);
  }
  return out;
}

GridPath sample_brownian(int dim, int level, double lambda, uint64_t seed) {
  if (level > 20) throw BadArgsError("brownian level capped at 20");
  if (lambda <= 0) throw BadArgsError("lambda must be positive");
  GridPath p = zero_path(dim, level);
  NormalSampler rng(seed);
  double sd = std::sqrt(p.dt() / lambda);
  for (int j = 1; j < p.points(); ++j) {
    for (int i = 0; i < dim; ++i) p.values(i, j) = p.values(i, j - 1) + sd * rng.normal();
  }
  return p;
}

void write_csv(const GridPath& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ExitCode::failure, "cannot open " + path);
  out << "t";
  for (int i = 1; i <= p.dim(); ++i) out << ",x" << i;
  out << "\n";
  out.precision(17);
  for (int j = 0; j < p.points(); ++j) {
    out << static_cast<double>(j) * p.dt();
    for (int i = 0; i < p.dim(); ++i) out << "," << p.values(i, j);
    out << "\n";
  }
}

GridPath read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ExitCode::failure, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ExitCode::failure, "empty csv");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ExitCode::failure, "csv without data rows");
  int points = static_cast<int>(rows.size());
  int level = 0;
  while ((1 << level) + 1 < points) ++level;
  if ((1 << level) + 1 != points) throw BadArgsError("csv row count is not 2^N + 1");
  int d = static_cast<int>(rows[0].size()) - 1;
  GridPath p = zero_path(d, level);
  for (int j = 0; j < points; ++j)
    for (int i = 0; i < d; ++i) p.values(i, j) = rows[j][i + 1];
  return p;
}

double h_inner(const GridPath& a, const GridPath& b) {
  if (a.level != b.level || a.dim() != b.dim()) throw BadArgsError("h_inner: grid mismatch");
  double acc = 0;
  for (int j = 0; j < a.steps(); ++j) acc += a.increment(j).dot(b.increment(j));
  return acc * a.steps();  // (da/dt . db/dt) dt = (da . db) / dt
}

double h_norm(const GridPath& a) { return std::sqrt(std::max(0.0, h_inner(a, a))); }

}  // namespace pathgroup::rough
