#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "pathgroup/errors.hpp"

namespace pathgroup::rough {

// Path sampled on the dyadic grid t_j = j 2^{-level}, start pinned at 0.
// Stored as a d x (2^level + 1) matrix of coefficients.
struct GridPath {
  int level = 0;
  Eigen::MatrixXd values;

  int points() const { return static_cast<int>(values.cols()); }
  int steps() const { return points() - 1; }
  int dim() const { return static_cast<int>(values.rows()); }
  double dt() const { return 1.0 / steps(); }
  Eigen::VectorXd increment(int j) const { return values.col(j + 1) - values.col(j); }
};

GridPath zero_path(int dim, int level);
void validate(const GridPath& p);

// Level-2 lift of the piecewise-linear path: prefix areas so the area over any
// grid pair is one Chen recombination away.
struct LeveledLift {
  GridPath base;
  std::vector<Eigen::MatrixXd> area_prefix;  // w2_{0, t_j}

  // w2_{s,t} for grid indices i <= j
  Eigen::MatrixXd area(int i, int j) const;
  Eigen::VectorXd incr(int i, int j) const { return base.values.col(j) - base.values.col(i); }
};

LeveledLift lift_piecewise_linear(const GridPath& path);

// Piecewise-linear interpolation through the level-N dyadic points, resampled
// on the original grid.
GridPath dyadic_approx(const GridPath& path, int N);

// int_s^t x_{s,u} (x) dy_u, exact for piecewise-linear x, y on a shared grid.
Eigen::MatrixXd cross_area(const GridPath& x, const GridPath& y, int s_idx, int t_idx);

// Running sums of the per-block area defects w^{kl} - (1/2) w^k w^l over the
// level-N dyadic blocks; result[j] is a d x d matrix at tau^N_j.
std::vector<Eigen::MatrixXd> dN_correction(const LeveledLift& w, int N);

// Brownian sample with per-step increment variance 2^{-level}/lambda.
GridPath sample_brownian(int dim, int level, double lambda, uint64_t seed);

// CSV with header t,x1,...,xd.
void write_csv(const GridPath& p, const std::string& path);
GridPath read_csv(const std::string& path);

// H inner product of piecewise-linear representatives (grid Riemann sum of
// derivative products).
double h_inner(const GridPath& a, const GridPath& b);
double h_norm(const GridPath& a);

}  // namespace pathgroup::rough
