#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathgroup/affine.hpp"

namespace pathgroup::spectra {

// su(2) spectral sets in exact arithmetic. theta enters as a formal irrational
// symbol; all comparisons split into the theta coefficient and the constant,
// which is valid because {1, theta} are Q-linearly independent.

struct SpectrumItem {
  AffineValue value;
  long multiplicity = 0;   // count of zero-shift representations
  bool shift_tier = false; // also reachable with a positive integer shift => infinite tier
};

struct SpectrumMultiset {
  std::vector<SpectrumItem> items;  // strictly increasing numeric order at the configured theta
  Rational cap;
};

struct SigmaResult {
  std::vector<SpectrumItem> items;
  Rational R, r;
  int mode_cutoff = 0;          // max cutoff used across geodesics
  long count = 0;               // N_R(r)
  bool cap_on_spectrum = false; // R collided with a spectrum value (exact)
  bool boundary_warning = false;// some distance within 1e-12 of r, or exactly r
};

// Bottom of the mode ladder: sum of |negative Hessian values| at theta(k).
AffineValue e_zero(long k, const Rational& theta);

// Per-mode ladder coefficients at theta(k). head modes run m = 1..head_count
// (values |theta(k)|/m -+ 1), tail modes m >= head_count+1 (values 1 +- |theta(k)|/m).
struct ModeLadder {
  long k = 0;
  AffineValue abs_theta_k;  // |theta(k)| = 2|theta + k|
  int head_count = 0;       // (|2k| v |2k+1|) - 1
  AffineValue head_minus(int m) const;  // |theta(k)|/m - 1   (m <= head_count)
  AffineValue head_plus(int m) const;   // |theta(k)|/m + 1
  AffineValue tail_plus(int m) const;   // 1 + |theta(k)|/m   (m > head_count)
  AffineValue tail_minus(int m) const;  // 1 - |theta(k)|/m
};
ModeLadder mode_ladder(long k, const Rational& theta);

// All ladder values <= R using modes m <= mode_cutoff and shifts n >= 0; the
// multiplicity counts zero-shift representations with the per-mode doubling.
SpectrumMultiset lambda_set(long k, const Rational& R, int mode_cutoff, const Rational& theta);

// {x + n : x in Lambda, n >= 1, x + n <= R} as a set (multiplicity 1).
SpectrumMultiset accumulation_set(long k, const Rational& R, int mode_cutoff,
                                  const Rational& theta);

// Finite candidate spectrum on [0, R) at distance >= r from every
// accumulation set. r in (0,1). Exact distance decisions.
SigmaResult sigma_set(const std::vector<long>& ks, const Rational& R, const Rational& r,
                      const Rational& theta);

struct MemberWitness {
  bool member = false;
  long shift = 0;                                   // the n >= 1 used
  std::vector<std::pair<int, long>> head_minus;     // (m, count)
  std::vector<std::pair<int, long>> head_plus;
  std::vector<std::pair<long, long>> tail_plus;     // (m, count)
  std::vector<std::pair<long, long>> tail_minus;
  long nodes = 0;                                   // search nodes visited
  std::string certificate;                          // exhaustion summary when not a member
};

// Decides x in Lambda(theta(l)) + {1, 2, ...} exactly. Throws
// InconclusiveError if the bounded search exceeds its node cap.
MemberWitness member_lambda_plus_n(const AffineValue& x, long l, const Rational& bound,
                                   const Rational& theta);

struct PrimeCheckReport {
  bool holds = false;
  std::vector<std::pair<long, MemberWitness>> per_l;
};

// Checks E0(theta(k)) + M (1 + |theta(k)|/p) misses Lambda(theta(l)) + N for
// every l in l_range. Requires p prime and p > 2 max(|k|, |l|, M |theta+k|).
PrimeCheckReport prime_criterion_check(long k, long M, long p, const std::vector<long>& l_range,
                                       const Rational& theta);

bool is_prime(long p);

}  // namespace pathgroup::spectra
