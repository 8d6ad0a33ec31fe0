#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pathgroup/lie_core.hpp"
#include "pathgroup/rng.hpp"

using namespace pathgroup;
using namespace pathgroup::lie;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

AlgebraVector random_vector(const SuAlgebra& alg, NormalSampler& rng, double scale) {
  Eigen::VectorXd c(alg.dim());
  for (int i = 0; i < alg.dim(); ++i) c[i] = scale * rng.normal();
  return {c};
}
}  // namespace

TEST_CASE("su(n) basis is orthonormal, skew-Hermitian and traceless") {
  for (int n : {2, 3}) {
    SuAlgebra alg(n);
    CHECK(alg.dim() == n * n - 1);
    for (int i = 0; i < alg.dim(); ++i) {
      const Mat& a = alg.basis()[i];
      CHECK(std::abs(a.trace()) < 1e-14);
      CHECK((a + a.adjoint()).norm() < 1e-14);
      for (int j = 0; j < alg.dim(); ++j) {
        double expect = i == j ? 1.0 : 0.0;
        CHECK(inner(a, alg.basis()[j]) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(SuAlgebra(1), BadArgsError);
}

TEST_CASE("coefficient round trip matches the matrix view to 1e-12") {
  SuAlgebra alg(3);
  NormalSampler rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    AlgebraVector v = random_vector(alg, rng, 0.7);
    Mat m = alg.matrix(v.coeffs);
    CHECK((alg.coefficients(m) - v.coeffs).norm() < 1e-12);
    CHECK(std::abs(m.trace()) < 1e-12);
    CHECK((m + m.adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("group_exp at zero and on diagonals") {
  SuAlgebra alg(2);
  GroupPoint id = group_exp(alg, AlgebraVector{Eigen::VectorXd::Zero(3)});
  CHECK((id.matrix - Mat::Identity(2, 2)).norm() < 1e-14);

  // 2 pi i D[theta, -theta] exponentiates to D[e^{2 pi i theta}, e^{-2 pi i theta}]
  double theta = 0.15;
  Mat xi = Mat::Zero(2, 2);
  xi(0, 0) = Cplx(0, kTwoPi * theta);
  xi(1, 1) = Cplx(0, -kTwoPi * theta);
  Mat got = exp_skew(xi);
  CHECK(std::abs(got(0, 0) - std::polar(1.0, kTwoPi * theta)) < 1e-13);
  CHECK(std::abs(got(1, 1) - std::polar(1.0, -kTwoPi * theta)) < 1e-13);
  CHECK(std::abs(got(0, 1)) < 1e-14);
  CHECK(group_defect(got) < 1e-13);
}

TEST_CASE("exp/log round trip inside the principal branch") {
  NormalSampler rng(5);
  for (int n : {2, 3}) {
    SuAlgebra alg(n);
    for (int trial = 0; trial < 20; ++trial) {
      AlgebraVector v = random_vector(alg, rng, 0.3);
      GroupPoint x = group_exp(alg, v);
      AlgebraVector back = group_log(alg, x);
      CHECK((back.coeffs - v.coeffs).norm() < 1e-10);
      GroupPoint again = group_exp(alg, back);
      CHECK((again.matrix - x.matrix).norm() < 1e-10);
    }
  }
}

TEST_CASE("log rejects the branch boundary") {
  Mat flip = Mat::Zero(2, 2);  // eigenvalue phases at +-pi
  flip(0, 0) = Cplx(-1, 0);
  flip(1, 1) = Cplx(-1, 0);
  CHECK_THROWS(log_unitary(flip));
}

TEST_CASE("adjoint is isometric and an algebra automorphism") {
  SuAlgebra alg(3);
  NormalSampler rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    GroupPoint x = group_exp(alg, random_vector(alg, rng, 0.5));
    AlgebraVector u = random_vector(alg, rng, 1.0);
    AlgebraVector v = random_vector(alg, rng, 1.0);
    AlgebraVector id_u = adjoint(alg, GroupPoint{Mat::Identity(3, 3)}, u);
    CHECK((id_u.coeffs - u.coeffs).norm() < 1e-14);
    CHECK(adjoint(alg, x, u).coeffs.norm() == doctest::Approx(u.coeffs.norm()).epsilon(1e-12));
    Eigen::VectorXd lhs = adjoint(alg, x, AlgebraVector{alg.bracket(u.coeffs, v.coeffs)}).coeffs;
    Eigen::VectorXd rhs = alg.bracket(adjoint(alg, x, u).coeffs, adjoint(alg, x, v).coeffs);
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("bracket is antisymmetric and satisfies Jacobi") {
  SuAlgebra alg(3);
  NormalSampler rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd u = random_vector(alg, rng, 1.0).coeffs;
    Eigen::VectorXd v = random_vector(alg, rng, 1.0).coeffs;
    Eigen::VectorXd w = random_vector(alg, rng, 1.0).coeffs;
    CHECK(alg.bracket(u, u).norm() < 1e-13);
    CHECK((alg.bracket(u, v) + alg.bracket(v, u)).norm() < 1e-13);
    Eigen::VectorXd jac = alg.bracket(u, alg.bracket(v, w)) +
                          alg.bracket(v, alg.bracket(w, u)) +
                          alg.bracket(w, alg.bracket(u, v));
    CHECK(jac.norm() < 1e-12);
  }
}

TEST_CASE("geodesic enumeration at theta = 0.15") {
  SuAlgebra alg(2);
  Rational theta = parse_rational("3/20");
  DiagonalEndpoint ep = su2_endpoint(theta);
  CHECK(ep.regular());

  // ||xi(k)||^2 = (2 pi)^2 sum (theta_i + k_i)^2 is the enumeration oracle
  auto only_min = enumerate_geodesics(alg, ep, kTwoPi * 0.4);
  REQUIRE(only_min.size() == 1);
  double nrm = norm(alg.matrix(only_min[0].coeffs));
  CHECK(nrm == doctest::Approx(kTwoPi * 0.15 * std::sqrt(2.0)).epsilon(1e-12));

  // bound 2 pi * 1.7 admits k = 0, -1, 1 in that norm order
  auto three = enumerate_geodesics(alg, ep, kTwoPi * 1.7);
  REQUIRE(three.size() == 3);
  CHECK(norm(alg.matrix(three[1].coeffs)) ==
        doctest::Approx(kTwoPi * 0.85 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(norm(alg.matrix(three[2].coeffs)) ==
        doctest::Approx(kTwoPi * 1.15 * std::sqrt(2.0)).epsilon(1e-12));

  // norms are non-decreasing and there are no duplicates
  for (size_t i = 1; i < three.size(); ++i) {
    CHECK(norm(alg.matrix(three[i].coeffs)) >= norm(alg.matrix(three[i - 1].coeffs)));
    CHECK((three[i].coeffs - three[i - 1].coeffs).norm() > 1e-9);
  }

  // every element maps to the endpoint under exp
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = std::polar(1.0, kTwoPi * 0.15);
  a(1, 1) = std::polar(1.0, -kTwoPi * 0.15);
  for (const auto& xi : three) CHECK((exp_skew(alg.matrix(xi.coeffs)) - a).norm() < 1e-10);

  // geodesic energy at the minimum: (1/2)(2 pi)^2 2 theta^2
  CHECK(geodesic_energy(alg, only_min[0]) == doctest::Approx(0.8882643960980423).epsilon(1e-12));
  CHECK(geodesic_energy(alg, AlgebraVector{Eigen::VectorXd::Zero(3)}) == 0.0);

  CHECK_THROWS_AS(enumerate_geodesics(alg, su2_endpoint(parse_rational("1/2")), 1.0),
                  CutLocusError);
}

TEST_CASE("unitarize projects a drifted matrix back to the group") {
  SuAlgebra alg(2);
  NormalSampler rng(3);
  GroupPoint x = group_exp(alg, random_vector(alg, rng, 0.4));
  Mat drift = x.matrix;
  drift(0, 0) += Cplx(2e-4, -1e-4);
  Mat fixed = unitarize(drift);
  CHECK(group_defect(fixed) < 1e-12);
  CHECK((fixed - x.matrix).norm() < 1e-3);
}
