#include "pathgroup/spectral_sets.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace pathgroup::spectra {

namespace {

constexpr long kNodeCap = 10'000'000;

Rational harmonic(int from, int to) {  // sum 1/m, empty when from > to
  Rational h = 0;
  for (int m = from; m <= to; ++m) h += Rational(1, m);
  return h;
}

}  // namespace

AffineValue e_zero(long k, const Rational& theta) {
  (void)theta;
  if (k == 0) return AffineValue(0, 0);
  if (k > 0) {
    // 4 (k sum_{m=2}^{2k} 1/m + theta sum_{m=1}^{2k} 1/m)
    return AffineValue(4 * k * harmonic(2, static_cast<int>(2 * k)),
                       4 * harmonic(1, static_cast<int>(2 * k)));
  }
  long a = -k;
  // 2 (2|k| sum_{m=2}^{2|k|-1} 1/m + 1 - 2 theta sum_{m=1}^{2|k|-1} 1/m)
  return AffineValue(4 * a * harmonic(2, static_cast<int>(2 * a - 1)) + 2,
                     -4 * harmonic(1, static_cast<int>(2 * a - 1)));
}

ModeLadder mode_ladder(long k, const Rational& theta) {
  (void)theta;
  ModeLadder lad;
  lad.k = k;
  if (k >= 0) {
    lad.abs_theta_k = AffineValue(Rational(2 * k), Rational(2));  // 2(theta + k)
    lad.head_count = static_cast<int>(2 * k);
  } else {
    lad.abs_theta_k = AffineValue(Rational(-2 * k), Rational(-2));  // 2(|k| - theta)
    lad.head_count = static_cast<int>(-2 * k - 1);
  }
  return lad;
}

AffineValue ModeLadder::head_minus(int m) const {
  return AffineValue(abs_theta_k.p / m - 1, abs_theta_k.q / m);
}
AffineValue ModeLadder::head_plus(int m) const {
  return AffineValue(abs_theta_k.p / m + 1, abs_theta_k.q / m);
}
AffineValue ModeLadder::tail_plus(int m) const {
  return AffineValue(1 + abs_theta_k.p / m, abs_theta_k.q / m);
}
AffineValue ModeLadder::tail_minus(int m) const {
  return AffineValue(1 - abs_theta_k.p / m, -abs_theta_k.q / m);
}

namespace {

struct LadderCtx {
  long l = 0;
  Rational theta;
  ModeLadder lad;
  AffineValue e0;
  Rational e0_num;
  Rational abs_num;  // |theta(l)| evaluated, in (0, infinity)

  LadderCtx(long l_, const Rational& th) : l(l_), theta(th) {
    lad = mode_ladder(l_, th);
    e0 = e_zero(l_, th);
    e0_num = e0.eval(th);
    abs_num = lad.abs_theta_k.eval(th);
    if (abs_num <= 0) throw BadArgsError("theta(k) collapsed; need theta in (0, 1/2)");
  }
  int m0() const { return lad.head_count + 1; }
  Rational tail_vmin() const { return 1 - abs_num / m0(); }
};

struct FamilyValue {
  AffineValue value;
  Rational num;
};

std::vector<FamilyValue> all_families(const LadderCtx& ctx, int cutoff) {
  std::vector<FamilyValue> fams;
  for (int m = 1; m <= ctx.lad.head_count; ++m) {
    for (auto v : {ctx.lad.head_minus(m), ctx.lad.head_plus(m)})
      fams.push_back({v, v.eval(ctx.theta)});
  }
  for (int m = ctx.m0(); m <= cutoff; ++m) {
    for (auto v : {ctx.lad.tail_plus(m), ctx.lad.tail_minus(m)})
      fams.push_back({v, v.eval(ctx.theta)});
  }
  for (auto& f : fams)
    if (f.num <= 0) throw Error(ExitCode::failure, "nonpositive ladder value (degenerate)");
  return fams;
}

using BaseMap = std::map<std::pair<Rational, Rational>, long>;

// Multisets of family quanta with value <= cap. A count of c on one family is
// worth (c+1) eigenfunctions (every line is doubled).
void enumerate_base(const LadderCtx& ctx, const Rational& cap, int cutoff, BaseMap& out) {
  if (cap < 0) return;
  auto fams = all_families(ctx, cutoff);
  std::sort(fams.begin(), fams.end(),
            [](const FamilyValue& a, const FamilyValue& b) { return a.num > b.num; });
  const size_t nfam = fams.size();
  std::vector<Rational> suffix_min(nfam + 1);
  suffix_min[nfam] = cap + 1;  // sentinel
  for (size_t i = nfam; i-- > 0;) suffix_min[i] = std::min(suffix_min[i + 1], fams[i].num);

  std::function<void(size_t, const AffineValue&, const Rational&, long)> rec =
      [&](size_t idx, const AffineValue& sum, const Rational& num, long ways) {
        if (idx == nfam || num + suffix_min[idx] > cap) {
          out[{sum.p, sum.q}] += ways;
          return;
        }
        AffineValue s = sum;
        Rational v = num;
        for (long c = 0;; ++c) {
          rec(idx + 1, s, v, ways * (c + 1));
          v += fams[idx].num;
          if (v > cap) break;
          s = s + fams[idx].value;
        }
      };
  rec(0, AffineValue(0, 0), Rational(0), 1);
}

struct RawItem {
  AffineValue value;
  Rational num;
  long mult = 0;
  bool tier = false;
};

std::vector<SpectrumItem> sort_items(std::map<std::pair<Rational, Rational>, RawItem>& merged) {
  std::vector<RawItem> raw;
  raw.reserve(merged.size());
  for (auto& [k, v] : merged) raw.push_back(std::move(v));
  std::sort(raw.begin(), raw.end(), [](const RawItem& a, const RawItem& b) {
    if (a.num != b.num) return a.num < b.num;
    if (a.value.q != b.value.q) return a.value.q < b.value.q;
    return a.value.p < b.value.p;
  });
  std::vector<SpectrumItem> items;
  items.reserve(raw.size());
  for (auto& r : raw) items.push_back({r.value, r.mult, r.tier});
  return items;
}

}  // namespace

SpectrumMultiset lambda_set(long k, const Rational& R, int mode_cutoff, const Rational& theta) {
  LadderCtx ctx(k, theta);
  if (mode_cutoff < std::max(1, ctx.m0() - 1))
    throw BadArgsError("mode_cutoff below (|2k| v |2k+1|)");
  SpectrumMultiset out;
  out.cap = R;
  if (R < 0) return out;

  BaseMap base;
  enumerate_base(ctx, R - ctx.e0_num, mode_cutoff, base);

  std::map<std::pair<Rational, Rational>, RawItem> merged;
  for (const auto& [key, ways] : base) {
    AffineValue v = ctx.e0 + AffineValue(key.first, key.second);
    Rational num = v.eval(theta);
    for (long n = 0; num + n <= R; ++n) {
      AffineValue shifted(v.p + n, v.q);
      auto& item = merged[{shifted.p, shifted.q}];
      item.value = shifted;
      item.num = num + n;
      if (n == 0)
        item.mult += ways;
      else
        item.tier = true;
    }
  }
  out.items = sort_items(merged);
  return out;
}

SpectrumMultiset accumulation_set(long k, const Rational& R, int mode_cutoff,
                                  const Rational& theta) {
  LadderCtx ctx(k, theta);
  if (mode_cutoff < std::max(1, ctx.m0() - 1))
    throw BadArgsError("mode_cutoff below (|2k| v |2k+1|)");
  SpectrumMultiset out;
  out.cap = R;
  if (R < 1) return out;

  BaseMap base;
  enumerate_base(ctx, R - 1 - ctx.e0_num, mode_cutoff, base);

  std::map<std::pair<Rational, Rational>, RawItem> merged;
  for (const auto& [key, ways] : base) {
    AffineValue v = ctx.e0 + AffineValue(key.first, key.second);
    Rational num = v.eval(theta);
    for (long n = 1; num + n <= R; ++n) {
      AffineValue shifted(v.p + n, v.q);
      auto& item = merged[{shifted.p, shifted.q}];
      item.value = shifted;
      item.num = num + n;
      item.mult = 1;
      item.tier = true;
    }
  }
  out.items = sort_items(merged);
  return out;
}

// ---------------------------------------------------------------------------
// Exact membership in Lambda(theta(l)) + {1,2,...}.
//
// Tail quantum constants and theta coefficients are linked: every tail value
// is 1 + l*c + c*theta with c = +-2/m, so after fixing the shift n and the
// head counts the remaining target Delta pins the tail quantum count
// J = Delta.p - l*Delta.q, and the theta equation reduces to the signed
// reciprocal problem sum_i s_i 2/m_i = 2*Delta.q/q0 (q0 = +-2) with exactly J
// terms, m_i >= m0, one family per mode (mixed families at one mode are a +2
// integer shift, canonicalized into n).
// ---------------------------------------------------------------------------

namespace {

struct TailQuantum {
  long m;
  int sign;  // contribution s * 2/m to the reduced theta equation
};

// J quanta with signed reciprocal sum zero, fresh modes >= start. Solvable for
// every J >= 3 (and J = 0).
bool zero_sum_pattern(long J, long start, std::vector<TailQuantum>& out) {
  if (J == 0) return true;
  if (J < 3) return false;
  long threes = 0, fours = 0, fives = 0;
  switch (J % 3) {
    case 0: threes = J / 3; break;
    case 1:
      if (J < 4) return false;
      threes = (J - 4) / 3;
      fours = 1;
      break;
    default:
      if (J < 5) return false;
      threes = (J - 5) / 3;
      fives = 1;
      break;
  }
  long t = std::max<long>(start, 1);
  for (long i = 0; i < threes; ++i) {
    // 1/t - 1/(t+1) - 1/(t(t+1)) = 0
    out.push_back({t, +1});
    out.push_back({t + 1, -1});
    out.push_back({t * (t + 1), -1});
    t = t * (t + 1) + 1;
  }
  auto emit = [&](std::initializer_list<long> mults) {
    long top = 0;
    bool first = true;
    for (long mult : mults) {
      out.push_back({mult * t, first ? +1 : -1});
      top = std::max(top, mult * t);
      first = false;
    }
    t = top + 1;
  };
  // 1/2 = 1/3 + 1/7 + 1/42 ; 1/2 = 1/5 + 1/6 + 1/12 + 1/20
  for (long i = 0; i < fours; ++i) emit({2, 3, 7, 42});
  for (long i = 0; i < fives; ++i) emit({2, 5, 6, 12, 20});
  return true;
}

struct TailSolver {
  long m0;
  long& nodes;
  std::vector<TailQuantum> chosen;

  // exactly J quanta, sum s_i 2/m_i = dq, modes ascending from (m_min, fam_min)
  bool solve(long J, const Rational& dq, long m_min, int sign_at_m_min) {
    if (++nodes > kNodeCap) throw InconclusiveError("membership search exceeded node cap");
    if (dq == 0) {
      long start = std::max(m0, m_min) + 1;
      for (const auto& q : chosen) start = std::max(start, q.m + 1);
      size_t mark = chosen.size();
      std::vector<TailQuantum> pat;
      if (!zero_sum_pattern(J, start, pat)) return false;
      chosen.insert(chosen.end(), pat.begin(), pat.end());
      (void)mark;
      return true;
    }
    if (J == 0) return false;
    Rational bound = Rational(2 * J) / rational_abs(dq);  // |dq| <= J * 2/m
    BigInt mmax_big = rational_floor(bound);
    long lo = std::max(m0, m_min);
    if (mmax_big < lo) return false;
    long mmax = mmax_big.convert_to<long>();
    for (long m = lo; m <= mmax; ++m) {
      for (int sign : {+1, -1}) {
        if (m == m_min && sign_at_m_min != 0 && sign != sign_at_m_min) continue;
        chosen.push_back({m, sign});
        if (solve(J - 1, dq - Rational(2 * sign, m), m, sign)) return true;
        chosen.pop_back();
      }
    }
    return false;
  }
};

struct HeadState {
  std::vector<std::pair<int, long>> minus_counts, plus_counts;
};

// Enumerates head-mode counts with a nonnegative remaining budget.
bool for_each_head(const LadderCtx& ctx, const AffineValue& target, long& nodes,
                   const std::function<bool(const AffineValue&, const HeadState&)>& body) {
  HeadState state;
  std::function<bool(int, bool, const AffineValue&)> rec = [&](int m, bool plus,
                                                               const AffineValue& delta) -> bool {
    if (++nodes > kNodeCap) throw InconclusiveError("membership search exceeded node cap");
    if (m > ctx.lad.head_count) return body(delta, state);
    AffineValue v = plus ? ctx.lad.head_plus(m) : ctx.lad.head_minus(m);
    int next_m = plus ? m + 1 : m;
    bool next_plus = !plus;
    auto& vec = plus ? state.plus_counts : state.minus_counts;
    AffineValue d = delta;
    bool pushed = false;
    for (long c = 0;; ++c) {
      if (c > 0) {
        if (pushed)
          vec.back().second = c;
        else {
          vec.emplace_back(m, c);
          pushed = true;
        }
      }
      if (rec(next_m, next_plus, d)) return true;
      d = d - v;
      if (d.eval(ctx.theta) < 0) break;
    }
    if (pushed) vec.pop_back();
    return false;
  };
  if (target.eval(ctx.theta) < 0) return false;
  return rec(1, false, target);
}

}  // namespace

MemberWitness member_lambda_plus_n(const AffineValue& x, long l, const Rational& bound,
                                   const Rational& theta) {
  LadderCtx ctx(l, theta);
  MemberWitness w;
  Rational x_num = x.eval(theta);
  if (x_num > bound) throw BadArgsError("target exceeds the stated search bound");

  Rational budget0 = x_num - ctx.e0_num;
  long nmax = budget0 >= 1 ? rational_floor(budget0).convert_to<long>() : 0;
  long nodes = 0;
  for (long n = 1; n <= nmax; ++n) {
    AffineValue target = x - ctx.e0 - AffineValue::integer(n);
    bool found = for_each_head(
        ctx, target, nodes, [&](const AffineValue& delta, const HeadState& hs) {
          Rational J_rat = delta.p - l * delta.q;
          if (denominator(J_rat) != 1 || J_rat < 0) return false;
          long J = numerator(J_rat).convert_to<long>();
          Rational dq2 = 2 * delta.q / ctx.lad.abs_theta_k.q;  // q0 = +-2
          TailSolver solver{ctx.m0(), nodes, {}};
          if (!solver.solve(J, dq2, ctx.m0(), 0)) return false;
          w.member = true;
          w.shift = n;
          w.head_minus = hs.minus_counts;
          w.head_plus = hs.plus_counts;
          for (const auto& q : solver.chosen) {
            if (q.sign > 0)
              w.tail_plus.emplace_back(q.m, 1);
            else
              w.tail_minus.emplace_back(q.m, 1);
          }
          return true;
        });
    if (found) {
      w.nodes = nodes;
      return w;
    }
  }
  w.member = false;
  w.nodes = nodes;
  w.certificate = "exhausted: shifts n in [1," + std::to_string(nmax) +
                  "], head budgets, tail windows m <= 2J/|dq|; nodes=" + std::to_string(nodes);
  return w;
}

// ---------------------------------------------------------------------------
// Interval membership in Lambda(theta(l)) + N at the evaluated theta; used for
// the exact distance decisions in sigma_set.
// ---------------------------------------------------------------------------

namespace {

struct IntervalProbe {
  const LadderCtx& ctx;
  bool closed;
  long& nodes;

  bool inside(const Rational& lo, const Rational& hi, const Rational& v) const {
    return closed ? (lo <= v && v <= hi) : (lo < v && v < hi);
  }

  // j quanta of one tail family at a single mode m: value j(1 -+ |th|/m).
  // The m-window is an interval; testing its integer boundary candidates is
  // exhaustive because m -> value is monotone.
  bool single_mode_block(const Rational& lo, const Rational& hi, long jmax) {
    Rational vmin = ctx.tail_vmin();
    for (long j = 1; j <= jmax; ++j) {
      Rational jr(j);
      if (jr * vmin > hi) break;
      for (int fam = 0; fam < 2; ++fam) {
        // minus family: |th|/m in ((j-hi)/j, (j-lo)/j); plus: ((lo-j)/j, (hi-j)/j)
        Rational wlo = fam == 0 ? Rational((jr - hi) / jr) : Rational((lo - jr) / jr);
        Rational whi = fam == 0 ? Rational((jr - lo) / jr) : Rational((hi - jr) / jr);
        if (whi <= 0 && !(closed && whi == 0)) continue;
        if (wlo < 0) wlo = 0;
        BigInt m_lo = whi <= 0 ? BigInt(ctx.m0()) : rational_floor(ctx.abs_num / whi);
        BigInt m_hi = wlo == 0 ? m_lo + 3 : rational_ceil(ctx.abs_num / wlo) + 1;
        if (m_lo < ctx.m0()) m_lo = ctx.m0();
        for (BigInt m = m_lo; m <= m_hi && m <= m_lo + 1000; ++m) {
          Rational frac = ctx.abs_num / Rational(m);
          Rational v = fam == 0 ? Rational(jr * (1 - frac)) : Rational(jr * (1 + frac));
          if (inside(lo, hi, v)) return true;
        }
      }
    }
    return false;
  }

  // Any tail multiset with sum in the window; modes ascend, one family/mode.
  bool tail(const Rational& lo, const Rational& hi, long m_min, int fam_at_min, long jmax) {
    if (++nodes > kNodeCap) throw InconclusiveError("distance search exceeded node cap");
    if (hi < 0) return false;
    if (inside(lo, hi, Rational(0))) return true;
    if (jmax <= 0) return false;
    if (single_mode_block(lo, hi, jmax)) return true;
    // peel the smallest mode; every remaining witness has its quantum count j
    // outside the window (straddled j handled above), bounding the smallest
    // mode by j|th|/dist(j, [lo,hi])
    Rational vmin = ctx.tail_vmin();
    long jcap = std::min(jmax, hi <= 0 ? 0L : rational_floor(hi / vmin).convert_to<long>());
    BigInt peel_max = 0;
    for (long j = 1; j <= jcap; ++j) {
      Rational jr(j);
      Rational gap;
      if (jr >= hi)
        gap = jr - hi;
      else if (jr <= lo)
        gap = lo - jr;
      else
        continue;  // single_mode_block covered straddled counts
      if (gap == 0) continue;  // boundary counts also covered there
      peel_max = std::max(peel_max, rational_ceil(jr * ctx.abs_num / gap));
    }
    long lo_m = std::max<long>(m_min, ctx.m0());
    if (peel_max < lo_m) return false;
    long pm = peel_max.convert_to<long>();
    for (long m = lo_m; m <= pm; ++m) {
      for (int fam = 0; fam < 2; ++fam) {
        if (m == m_min && fam_at_min >= 0 && fam != fam_at_min) continue;
        Rational frac = ctx.abs_num / Rational(m);
        Rational v = fam == 0 ? Rational(1 - frac) : Rational(1 + frac);
        if (v > hi) continue;
        if (tail(lo - v, hi - v, m, fam, jmax - 1)) return true;
      }
    }
    return false;
  }

  bool heads_then_tail(const Rational& lo, const Rational& hi) {
    Rational vmin = ctx.tail_vmin();
    long jmax = hi <= 0 ? 0 : rational_floor(hi / vmin).convert_to<long>() + 1;
    std::function<bool(int, bool, const Rational&, const Rational&)> rec =
        [&](int m, bool plus, const Rational& l2, const Rational& h2) -> bool {
      if (++nodes > kNodeCap) throw InconclusiveError("distance search exceeded node cap");
      if (h2 < 0) return false;
      if (m > ctx.lad.head_count) return tail(l2, h2, ctx.m0(), -1, jmax);
      Rational v = (plus ? ctx.lad.head_plus(m) : ctx.lad.head_minus(m)).eval(ctx.theta);
      int nm = plus ? m + 1 : m;
      bool np = !plus;
      Rational a = l2, b = h2;
      while (b >= 0) {
        if (rec(nm, np, a, b)) return true;
        a -= v;
        b -= v;
      }
      return false;
    };
    return rec(1, false, lo, hi);
  }
};

bool acc_in_interval(const LadderCtx& ctx, const Rational& lo, const Rational& hi, bool closed,
                     long& nodes) {
  IntervalProbe probe{ctx, closed, nodes};
  Rational top = hi - ctx.e0_num;
  long n_hi = top >= 1 ? rational_floor(top).convert_to<long>() : 0;
  for (long n = 1; n <= n_hi; ++n) {
    if (probe.heads_then_tail(lo - ctx.e0_num - n, hi - ctx.e0_num - n)) return true;
  }
  return false;
}

}  // namespace

SigmaResult sigma_set(const std::vector<long>& ks, const Rational& R, const Rational& r,
                      const Rational& theta) {
  if (!(r > 0 && r < 1)) throw BadArgsError("sigma radius r must lie in (0,1)");
  if (R <= 0) throw BadArgsError("sigma cap R must be positive");
  SigmaResult out;
  out.R = R;
  out.r = r;

  std::vector<LadderCtx> ctxs;
  ctxs.reserve(ks.size());
  for (long k : ks) ctxs.emplace_back(k, theta);

  std::map<std::pair<Rational, Rational>, RawItem> survivors;
  long nodes = 0;
  for (size_t i = 0; i < ks.size(); ++i) {
    // quanta with |theta(k)|/m < r sit within r of a shifted ladder value and
    // never survive, so candidates need modes m <= ceil(|theta(k)|/r) only
    int cutoff = static_cast<int>(rational_ceil(ctxs[i].abs_num / r).convert_to<long>());
    cutoff = std::max(cutoff, ctxs[i].m0());
    out.mode_cutoff = std::max(out.mode_cutoff, cutoff);
    SpectrumMultiset lam = lambda_set(ks[i], R, cutoff, theta);
    for (const auto& item : lam.items) {
      Rational num = item.value.eval(theta);
      if (num == R) out.cap_on_spectrum = true;
      if (num >= R) continue;  // half-open cap
      if (item.multiplicity <= 0) continue;
      bool excluded = false, boundary = false;
      for (const auto& ctx : ctxs) {
        if (acc_in_interval(ctx, num - r, num + r, /*closed=*/false, nodes)) {
          excluded = true;
          break;
        }
        if (acc_in_interval(ctx, num - r, num + r, /*closed=*/true, nodes)) boundary = true;
      }
      if (excluded) continue;
      if (boundary) out.boundary_warning = true;
      auto& slot = survivors[{item.value.p, item.value.q}];
      slot.value = item.value;
      slot.num = num;
      slot.mult += item.multiplicity;
      slot.tier = slot.tier || item.shift_tier;
    }
  }
  out.items = sort_items(survivors);
  for (const auto& item : out.items) out.count += item.multiplicity;
  return out;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

PrimeCheckReport prime_criterion_check(long k, long M, long p, const std::vector<long>& l_range,
                                       const Rational& theta) {
  if (!is_prime(p)) throw BadArgsError("p must be prime");
  if (M < 1) throw BadArgsError("M must be a positive integer");
  LadderCtx ctx(k, theta);
  Rational max_term = Rational(std::abs(k));
  for (long l : l_range) max_term = std::max(max_term, Rational(std::abs(l)));
  max_term = std::max(max_term, Rational(M * ctx.abs_num / 2));  // M |theta + k|
  if (!(Rational(p) > 2 * max_term))
    throw BadArgsError("need p > 2 max(|k|, |l|, M |theta+k|)");

  AffineValue x = ctx.e0 + AffineValue(Rational(M) + M * ctx.lad.abs_theta_k.p / p,
                                       M * ctx.lad.abs_theta_k.q / p);
  Rational bound = x.eval(theta) + 1;
  PrimeCheckReport report;
  report.holds = true;
  for (long l : l_range) {
    MemberWitness w = member_lambda_plus_n(x, l, bound, theta);
    if (w.member) report.holds = false;
    report.per_l.emplace_back(l, std::move(w));
  }
  return report;
}

}  // namespace pathgroup::spectra
