#pragma once

#include <Eigen/Dense>

#include <vector>

#include "pathgroup/grid_path.hpp"

namespace pathgroup::rough {

struct NormReport {
  double holder_alpha = 0;
  double besov_m_theta = 0;  // Gamma_{m,theta,1}^{1/(4m)}
  double gamma_bar = 0;      // (Gamma_1 + sum Gamma_2^{ij})^{1/(4m)}
  double p_variation = 0;
  double alpha = 0;
  int m = 0;
  double theta = 0, p = 0;
};

// Discrete sup over grid pairs of |w_{s,t}| / (t-s)^alpha.
double holder_norm(const GridPath& w, double alpha);

// Grid Riemann sum of |w_{s,t}|^{4m} / (t-s)^{2+2m theta} over pairs s < t.
double gamma_one(const GridPath& w, int m, double theta);

// Same for one area component of the lift.
double gamma_two(const LeveledLift& w, int i, int j, int m, double theta);

double gamma_bar(const LeveledLift& w, int m, double theta);

// Exact dynamic programming over grid partitions.
double p_variation(const GridPath& w, double p);
// Same for a scalar sequence (used for the block-correction decay checks).
double p_variation_scalar(const std::vector<double>& x, double p);

NormReport path_norms(const LeveledLift& w, double alpha, int m, double theta, double p);

// Smooth bump: 1 on [-1,1], 0 off [-2,2], polynomial smoothstep in between.
double bump_chi(double u);
double bump_chi_prime(double u);

struct CutoffResult {
  double value = 0;
  double grad_norm = 0;  // H norm of the gradient
  double argument = 0;   // lambda^{2 m delta} * gamma_bar^{4m}
};

// chi(lambda^{2 m delta} gamma_bar(w)^{4m}) and the H-norm of its gradient,
// assembled from the closed-form derivative densities on the grid.
CutoffResult cutoff_chi(const LeveledLift& w, int m, double theta, double lambda, double delta);

struct DomainFunctionals {
  double phi_inf_K = 0;
  double phi_B_m_theta = 0;
  double phi_H_beta = 0;
};

// Sup/integral functionals of a matrix-valued path in the ambient norm.
DomainFunctionals domain_functionals(const std::vector<Eigen::MatrixXcd>& gamma, int K, int m,
                                     double theta, double beta);

}  // namespace pathgroup::rough
