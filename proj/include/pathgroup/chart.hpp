#pragma once

#include <cstdint>
#include <vector>

#include "pathgroup/group_rde.hpp"
#include "pathgroup/norms.hpp"

namespace pathgroup::chart {

using rde::FlowMaps;
using rde::GroupPath;
using rough::GridPath;

struct ChartConfig {
  double alpha = 0.4;             // Holder exponent for smallness thresholds
  double eta_scale = 0.1;         // ||eta||_alpha <= eta_scale / (1 + ||k||_alpha)
  double x_distance = 0.1;        // d(x, a) threshold
  double fp_tol = 1e-12;          // fixed-point step tolerance
  double residual_tol = 1e-10;    // endpoint residual bound
  double polish_tol = 5e-14;      // Newton polish target
  int max_iterations = 100;
  int quad_nodes = 8;             // Gauss-Legendre nodes for the homotopy integrals
  double fd_step = 1e-5;          // central differences for Dx v, D0 v
};

struct SolveReport {
  Eigen::VectorXd v;
  int iterations = 0;
  double contraction_ratio = 0;
  double residual = 0;
};

GridPath geodesic_path(const lie::SuAlgebra& alg, const Eigen::VectorXd& xi, int level);

/// Submanifold chart at a base H-path k with endpoint a = Y(1,e,k).
class Chart {
 public:
  Chart(const lie::SuAlgebra& alg, GridPath k, ChartConfig cfg = {});

  const lie::SuAlgebra& algebra() const { return alg_; }
  const FlowMaps& maps() const { return maps_; }
  const GridPath& base_path() const { return k_; }
  const lie::Mat& endpoint() const { return a_; }
  const ChartConfig& config() const { return cfg_; }
  double base_holder() const { return k_holder_; }

  GridPath project_to_tangent(const GridPath& w) const;

  // Contraction fixed point for the transverse vector; measures the ratio and
  // polishes against the exact grid residual.
  SolveReport solve_v(const lie::Mat& x, const GridPath& eta) const;
  // Newton-only solve used in inner loops (same fixed point, no ratio).
  Eigen::VectorXd fast_v(const lie::Mat& x, const GridPath& eta) const;

  GridPath chart_forward(const lie::Mat& x, const GridPath& eta) const;  // Phi_{k,x}
  struct Inverse {
    lie::Mat x;
    GridPath eta;
  };
  Inverse chart_inverse(const GridPath& w) const;  // Psi_k

  double weight_F(const lie::Mat& x, const GridPath& eta) const;
  // exp(-lambda F) G density ingredients at x = a
  double det_G(const GridPath& eta, int retained_dirs = 0) const;

  // Wick form two ways: sum zeta_i (<eta,e_i>^2 - 1/lambda) over the Galerkin
  // eigenpairs vs the grid rough integral of ([U_k eta, xi], dU_k eta).
  struct WickPair {
    double lhs = 0, rhs = 0;
  };
  WickPair wick_form(const GridPath& eta, double lambda, int modes) const;

  double half_b_norm(const GridPath& w) const;  // (1/2)|b(1)|^2 along w

  Eigen::VectorXd geodesic_xi() const;  // throws unless k is a geodesic line

 private:
  const lie::SuAlgebra& alg_;
  GridPath k_;
  ChartConfig cfg_;
  FlowMaps maps_;
  lie::Mat a_;
  Eigen::MatrixXd newton_jac_;  // residual Jacobian at (a, 0), reused
  double k_holder_ = 0;

  Eigen::VectorXd residual(const lie::Mat& x, const GridPath& eta,
                           const Eigen::VectorXd& v) const;
  GridPath chart_forward_unchecked(const lie::Mat& x, const GridPath& eta,
                                   const Eigen::VectorXd& v) const;
  void check_smallness(const lie::Mat& x, const GridPath& eta) const;
};

struct SlopeFit {
  double slope = 0;
  std::vector<double> scales, residuals;
};
SlopeFit fit_loglog(const std::vector<double>& scales, const std::vector<double>& residuals);

// |F(a, s eta, k) - 1/2|k|^2 - 1/2 W(s eta)| across dyadic scalings.
SlopeFit expansion_f_check(const Chart& chart, const GridPath& eta,
                           const std::vector<double>& scales);
// |G(a, s eta, k) - 1| across scalings.
SlopeFit remainder_g_check(const Chart& chart, const GridPath& eta,
                           const std::vector<double>& scales);
// |(1/2)|b(1)|^2 - main terms| across scalings.
SlopeFit expansion_b_check(const Chart& chart, const GridPath& eta,
                           const std::vector<double>& scales);

struct McConfig {
  double lambda = 1e3;
  int modes = 4;
  int samples = 10000;
  uint64_t seed = 1;
  int cutoff_m = 2;
  double cutoff_theta = 0.4;
  double cutoff_delta = 0.7;
  bool sanity_mode = false;  // chi = 1, F_R = G_R = 0
};

struct McReport {
  double estimate = 0;
  double std_error = 0;
  double ess_fraction = 0;
  bool weight_degeneracy = false;
};

// Importance-sampled squared norm of the cut-off approximate eigenfunction;
// samples the retained-mode Gaussian with covariance (lambda |I+T|)^{-1} and
// weights by chi^2 exp(-lambda F_R)(1 + G_R).
McReport approx_eigennorm_mc(const Chart& chart, const McConfig& cfg);

}  // namespace pathgroup::chart
