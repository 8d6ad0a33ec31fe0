#pragma once

#include <vector>

#include "pathgroup/grid_path.hpp"
#include "pathgroup/lie_core.hpp"

namespace pathgroup::rde {

using rough::GridPath;
using rough::LeveledLift;

// Group-valued path on the dyadic grid, values[0] = I.
struct GroupPath {
  int level = 0;
  std::vector<lie::Mat> values;
  double max_step_defect = 0;  // pre-projection distance to the group per step
};

// Second-order (Davie) step Y <- Y (I + sum e_i w^i + sum e_i e_j w^{ij})
// followed by polar re-projection.
GroupPath solve_rde(const lie::SuAlgebra& alg, const LeveledLift& lift, const lie::Mat& x0);

// Exact per-segment solution Y_j = Y_{j-1} exp(dh_j) of dY = Y dh.
GroupPath solve_ode(const lie::SuAlgebra& alg, const GridPath& h, const lie::Mat& x0);

// Midpoint inverse-increment sums recovering the left development.
GridPath development_left(const lie::SuAlgebra& alg, const GroupPath& y);

struct RightDevelopment {
  GridPath midpoint;        // K^N sums
  GridPath rough_integral;  // b via the corrected second-order weights
  double sup_difference = 0;
};
RightDevelopment development_right(const lie::SuAlgebra& alg, const GroupPath& y,
                                   const LeveledLift& lift);

// phi1(A) = (e^A - I) A^{-1} as a convergent series (A = ad of a small step).
Eigen::MatrixXd phi1(const Eigen::MatrixXd& a);

// Segment-exact transforms along the flow of k.
class FlowMaps {
 public:
  FlowMaps(const lie::SuAlgebra& alg, const GridPath& k);

  const GroupPath& flow() const { return flow_; }
  const lie::SuAlgebra& algebra() const { return alg_; }

  // (U_k w)(t) = int_0^t Ad(Y(s,e,k)) dw_s, exact per linear segment.
  GridPath forward(const GridPath& w) const;
  // inverse transform: dw = Ad(Y^{-1}) dg
  GridPath inverse(const GridPath& g) const;
  // Q(k) v = int_0^. Ad(Y(s,e,k)^{-1}) v ds (the exact adjoint of
  // w -> (U_k w)(1) in the grid inner product)
  GridPath q_map(const Eigen::VectorXd& v) const;
  // (U_k w)(1)
  Eigen::VectorXd endpoint_integral(const GridPath& w) const;

  // Gram matrix G = endpoint_integral(q_map(.)); the corrected projector
  // P w = w - q_map(G^{-1} endpoint_integral(w)) annihilates exactly.
  const Eigen::MatrixXd& gram() const { return gram_; }
  GridPath project_tangent(const GridPath& w) const;
  double tangency_defect(const GridPath& w) const;

 private:
  const lie::SuAlgebra& alg_;
  GridPath k_;
  GroupPath flow_;
  std::vector<Eigen::MatrixXd> seg_fwd_;  // Ad(Y_{j-1}) phi1(ad dk_j)
  Eigen::MatrixXd gram_, gram_inv_;
};

struct Projections {
  GridPath tangent;       // P(k) w
  GridPath normal;        // N(k) w
  Eigen::VectorXd v;      // int_0^1 Ad(Y) dw
};
Projections projections(const FlowMaps& maps, const GridPath& w);

// Directional derivative path (int_0^t Ad(Y_s) dh_s) Y_t of the solution map.
std::vector<lie::Mat> derivative_dy(const lie::SuAlgebra& alg, const GroupPath& y,
                                    const GridPath& h);

// Discrete energy sum of |dY Y^{-1}|^2 dt.
double flow_energy(const lie::SuAlgebra& alg, const GroupPath& y);

void write_csv(const GroupPath& y, const std::string& path);

}  // namespace pathgroup::rde
