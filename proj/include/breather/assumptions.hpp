#ifndef BREATHER_ASSUMPTIONS_HPP
#define BREATHER_ASSUMPTIONS_HPP

#include "core/exact.hpp"
#include "potential.hpp"
#include "spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace breather {

inline constexpr double kFloatTol = 1e-9;
// largest denominator accepted when recovering q_i ratios from floats
inline constexpr std::int64_t kMaxRatioDen = 1000;

struct MultistepCheck {
  bool applicable = true;
  bool pass = false;
  bool certified = false;  // exact rational arithmetic throughout
  std::optional<Rational> alpha;
  double alpha_value = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> odd_indices;  // 1-based cell indices with 4 q_i / T odd
  std::vector<double> multiples; // 4 q_i / T
  std::string reason;
};

namespace detail {

inline bool all_exact_q(const StepProfile& p) {
  for (const auto& c : p.cells())
    if (!c.exact_q()) return false;
  return true;
}

inline bool is_odd_integer(const Rational& r) {
  return r.denominator() == 1 && r.numerator() > 0 && r.numerator() % 2 != 0;
}

// Alternating product a_{i1} / a_{i2} * a_{i3} / ... over the given indices.
inline Rational alternating_ratio(const StepProfile& p, const std::vector<int>& idx) {
  Rational a(1);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Rational v = *p.cells()[idx[j] - 1].exact_value;
    a = (j % 2 == 0) ? a * v : a / v;
  }
  return a;
}

inline double alternating_ratio_float(const StepProfile& p, const std::vector<int>& idx) {
  double a = 1;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const double v = p.cells()[idx[j] - 1].value;
    a = (j % 2 == 0) ? a * v : a / v;
  }
  return a;
}

}  // namespace detail

// 4 q_i in T N for all cells; passes iff the odd multiples come in an even
// number and their alternating value ratio alpha differs from 1.
inline MultistepCheck check_multistep(const StepProfile& prof, const ExactNumber& T) {
  MultistepCheck r;
  if (!(T.value > 0)) throw std::invalid_argument("check_multistep: T must be positive");
  if (T.is_exact() && detail::all_exact_q(prof)) {
    r.certified = true;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const Rational m = Rational(4) * *prof.cells()[i].exact_q() / *T.exact;
      r.multiples.push_back(to_double(m));
      if (m.denominator() != 1 || m.numerator() <= 0) {
        r.pass = false;
        r.reason = "4 q_" + std::to_string(i + 1) + " = " + to_string(m) + " T is not in T N";
        return r;
      }
      if (detail::is_odd_integer(m)) r.odd_indices.push_back(int(i + 1));
    }
    r.alpha = detail::alternating_ratio(prof, r.odd_indices);
    r.alpha_value = to_double(*r.alpha);
    if (r.odd_indices.size() % 2 != 0) {
      r.reason = "odd number of odd multiples";
    } else if (*r.alpha == Rational(1)) {
      r.reason = "alpha = 1";
    } else {
      r.pass = true;
    }
    return r;
  }
  // float fallback
  r.certified = false;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const double m = 4.0 * prof.cells()[i].q() / T.value;
    r.multiples.push_back(m);
    const double n = std::round(m);
    if (n < 1 || std::abs(m - n) > kFloatTol * std::max(1.0, m)) {
      r.reason = "4 q_" + std::to_string(i + 1) + " / T is not an integer (float check)";
      return r;
    }
    if (std::llround(n) % 2 != 0) r.odd_indices.push_back(int(i + 1));
  }
  r.alpha_value = detail::alternating_ratio_float(prof, r.odd_indices);
  if (r.odd_indices.size() % 2 != 0)
    r.reason = "odd number of odd multiples";
  else if (std::abs(r.alpha_value - 1.0) <= kFloatTol)
    r.reason = "alpha = 1 (float check)";
  else
    r.pass = true;
  return r;
}

struct AdmissiblePeriods {
  bool applicable = false;
  bool pass = false;
  bool certified = false;
  std::optional<Rational> q;  // gcd of the q_i
  double q_value = 0;
  std::vector<std::int64_t> ratios;  // q_i / q
  int odd_count = 0;
  std::optional<Rational> alpha;
  double alpha_value = std::numeric_limits<double>::quiet_NaN();
  std::string description;

  double period(int k) const { return 4.0 * q_value / k; }
  std::optional<Rational> exact_period(int k) const {
    if (!q) return std::nullopt;
    return Rational(4) * *q / Rational(k);
  }
};

// T = 4 q / k, k odd, with q = gcd(q_i).
inline AdmissiblePeriods admissible_periods(const StepProfile& prof) {
  AdmissiblePeriods r;
  std::vector<int> odd;
  if (detail::all_exact_q(prof)) {
    r.applicable = r.certified = true;
    Rational q = *prof.cells()[0].exact_q();
    for (const auto& c : prof.cells()) q = rational_gcd(q, *c.exact_q());
    r.q = q;
    r.q_value = to_double(q);
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const Rational n = *prof.cells()[i].exact_q() / q;
      r.ratios.push_back(n.numerator());
      if (n.numerator() % 2 != 0) odd.push_back(int(i + 1));
    }
    r.alpha = detail::alternating_ratio(prof, odd);
    r.alpha_value = to_double(*r.alpha);
  } else {
    const double q1 = prof.cells()[0].q();
    Rational g(0);
    std::vector<Rational> rel;
    for (const auto& c : prof.cells()) {
      auto a = rational_approx(c.q() / q1, kFloatTol, kMaxRatioDen);
      if (!a) {
        r.description = "q_i incommensurable within float tolerance";
        return r;
      }
      rel.push_back(*a);
      g = g == Rational(0) ? *a : rational_gcd(g, *a);
    }
    r.applicable = true;
    r.q_value = q1 * to_double(g);
    for (std::size_t i = 0; i < rel.size(); ++i) {
      const Rational n = rel[i] / g;
      r.ratios.push_back(n.numerator());
      if (n.numerator() % 2 != 0) odd.push_back(int(i + 1));
    }
    r.alpha_value = detail::alternating_ratio_float(prof, odd);
  }
  r.odd_count = int(odd.size());
  const bool alpha_one = r.alpha ? *r.alpha == Rational(1) : std::abs(r.alpha_value - 1.0) <= kFloatTol;
  r.pass = r.odd_count % 2 == 0 && !alpha_one;
  const std::string qs = r.q ? to_string(*r.q) : std::to_string(r.q_value);
  r.description = "T in {4q/k : k odd}, q = " + qs;
  if (r.odd_count % 2 != 0)
    r.description += "; fails: odd number of odd ratios q_i/q";
  else if (alpha_one)
    r.description += "; fails: alpha = 1";
  if (!r.certified) r.description += " (uncertified float arithmetic)";
  return r;
}

struct DislocationCheck {
  bool applicable = true;
  bool pass = false;
  bool certified = false;
  MultistepCheck base;
  double q0 = 0;
  double multiple = 0;  // 4 q0 / T
  std::string reason;
};

inline DislocationCheck check_dislocation(const Potential& pot, const ExactNumber& T) {
  DislocationCheck r;
  if (pot.kind() != PotentialKind::dislocation || pot.core().size() != 1)
    throw std::invalid_argument("check_dislocation: not a dislocation potential");
  r.base = check_multistep(pot.right(), T);
  const Cell& c = pot.core().front();
  r.q0 = c.q();
  bool even;
  if (auto q0 = c.exact_q(); q0 && T.is_exact()) {
    const Rational m = Rational(4) * *q0 / *T.exact;
    r.multiple = to_double(m);
    even = m.denominator() == 1 && m.numerator() > 0 && m.numerator() % 2 == 0;
    r.certified = r.base.certified;
  } else {
    r.multiple = 4.0 * r.q0 / T.value;
    const double n = std::round(r.multiple);
    even = n >= 2 && std::abs(r.multiple - n) <= kFloatTol * std::max(1.0, r.multiple) &&
           std::llround(n) % 2 == 0;
  }
  if (!r.base.pass)
    r.reason = "base fails: " + r.base.reason;
  else if (!even)
    r.reason = "4 q0 / T is not an even integer";
  r.pass = r.base.pass && even;
  return r;
}

struct InterfaceCheck {
  bool applicable = true;
  bool pass = false;
  bool certified = false;
  MultistepCheck left, right;
  double alpha_plus = 0, alpha_minus = 0;
  std::string reason;
};

inline bool alphas_same_side(double ap, double am) { return (ap - 1.0) * (am - 1.0) > 0; }

inline InterfaceCheck check_interface(const Potential& pot, const ExactNumber& T) {
  InterfaceCheck r;
  r.left = check_multistep(pot.left(), T);
  r.right = check_multistep(pot.right(), T);
  r.alpha_minus = r.left.alpha_value;
  r.alpha_plus = r.right.alpha_value;
  if (!r.left.pass || !r.right.pass) {
    r.applicable = false;
    r.reason = "a side fails the multistep criterion";
    return r;
  }
  r.certified = r.left.certified && r.right.certified;
  if (r.left.alpha && r.right.alpha) {
    const Rational one(1);
    r.pass = (*r.left.alpha > one && *r.right.alpha > one) || (*r.left.alpha < one && *r.right.alpha < one);
  } else {
    r.pass = alphas_same_side(r.alpha_plus, r.alpha_minus);
  }
  if (!r.pass) r.reason = "alpha+ and alpha- on opposite sides of 1";
  return r;
}

// Every cell of tails and core satisfies 4 q in T N exactly, so the spectrum
// repeats in sqrt(lambda) with period 8 pi / T.
inline bool exact_periodicity(const Potential& pot, const ExactNumber& T) {
  if (!T.is_exact()) return false;
  auto ok = [&](const Cell& c) {
    auto q = c.exact_q();
    if (!q) return false;
    const Rational m = Rational(4) * *q / *T.exact;
    return m.denominator() == 1 && m.numerator() > 0;
  };
  for (const auto& c : pot.left().cells())
    if (!ok(c)) return false;
  for (const auto& c : pot.right().cells())
    if (!ok(c)) return false;
  for (const auto& c : pot.core())
    if (!ok(c)) return false;
  return true;
}

struct A3Result {
  double omega = 0, T = 0;
  double delta = 0;
  int k_at = 0;                 // k attaining delta
  double lambda_lo = 0, lambda_hi = 0;  // offending band (or eigenvalue twice)
  std::vector<double> per_k;    // distance for k = 1, 3, ..., k_max
  int k_max = 0;
  std::string certification;    // exact-periodicity | numeric-scan
  bool pass = false;
  std::string note;
};

inline double sqrt_dist(double x, const Interval& band) {
  const double a = std::sqrt(std::max(0.0, band.lo)), b = std::sqrt(band.hi);
  if (x < a) return a - x;
  if (x > b) return x - b;
  return 0.0;
}

inline A3Result verify_a3_numeric(const Potential& pot, double omega, const BandStructure& bs,
                                  const std::vector<GapEigenvalue>& eigs, int k_max,
                                  const std::optional<ExactNumber>& T_exact = std::nullopt) {
  if (!(omega > 0)) throw std::invalid_argument("verify_a3_numeric: omega must be positive");
  if (k_max < 1) throw std::invalid_argument("verify_a3_numeric: k_max < 1");
  const double need = (k_max * omega + omega) * (k_max * omega + omega);
  if (bs.lambda_max < need)
    throw std::invalid_argument("verify_a3_numeric: band structure does not cover (k_max w + w)^2");
  A3Result r;
  r.omega = omega;
  r.T = 2.0 * std::numbers::pi / omega;
  r.k_max = k_max;
  r.delta = INFINITY;
  for (int k = 1; k <= k_max; k += 2) {
    const double x = k * omega;
    double d = INFINITY;
    Interval at{};
    for (const auto& b : bs.bands) {
      const double dd = sqrt_dist(x, b);
      if (dd < d) {
        d = dd;
        at = b;
      }
    }
    for (const auto& e : eigs) {
      const double dd = std::abs(std::sqrt(e.lambda) - x);
      if (dd < d) {
        d = dd;
        at = {e.lambda, e.lambda};
      }
    }
    r.per_k.push_back(d);
    if (d < r.delta) {
      r.delta = d;
      r.k_at = k;
      r.lambda_lo = at.lo;
      r.lambda_hi = at.hi;
    }
  }
  const bool periodic = T_exact && exact_periodicity(pot, *T_exact);
  if (periodic && k_max < 5) r.note = "k_max < 5 does not cover a full sqrt(lambda) period";
  r.certification = periodic && k_max >= 5 ? "exact-periodicity" : "numeric-scan";
  if (r.certification == "numeric-scan")
    r.note = "distance verified for odd k <= " + std::to_string(k_max) + " only; tail uncertified";
  r.pass = r.delta > kFloatTol;
  return r;
}

struct A4Result {
  bool pass = false;
  std::string verdict;
  std::vector<double> first_window;  // eigenvalues with sqrt(lambda) in [0, 4w)
  std::vector<int> window_counts;
};

// Point spectrum growth: empty for purely periodic potentials, otherwise the
// count per sqrt(lambda)-window of length 4w must repeat.
inline A4Result check_a4(const Potential& pot, const std::vector<GapEigenvalue>& eigs, double omega,
                         int windows = 3) {
  A4Result r;
  const double L = 4.0 * omega;
  r.window_counts.assign(windows, 0);
  for (const auto& e : eigs) {
    if (e.edge_flag) continue;  // not certified
    const double s = std::sqrt(e.lambda);
    const int w = int(std::floor(s / L));
    if (w >= 0 && w < windows) r.window_counts[w]++;
    if (w == 0) r.first_window.push_back(e.lambda);
  }
  if (pot.purely_periodic()) {
    r.pass = eigs.empty();
    r.verdict = r.pass ? "purely periodic: empty point spectrum" : "purely periodic but eigenvalues found";
    return r;
  }
  bool equal = true;
  for (int c : r.window_counts) equal = equal && c == r.window_counts.front();
  r.pass = equal;
  r.verdict = equal ? "constant eigenvalue count per window: at least quadratic growth"
                    : "eigenvalue counts differ across windows";
  return r;
}

struct EmbeddingEstimate {
  double s = 0;
  double value = INFINITY;       // truncated sum + tails
  double truncated = 0;
  double k_tail = 0;
  double band_tail = 0;
  double value_half = INFINITY;  // same estimate with half the k range
  double truncation_change = INFINITY;
  int k_max = 0;
  bool finite = false;
  bool pass = false;
  std::string reason;
};

namespace detail {

inline double lambda_dist(double nu, const Interval& b) {
  if (nu < b.lo) return b.lo - nu;
  if (nu > b.hi) return nu - b.hi;
  return 0.0;
}

struct EmbeddingSum {
  double trunc = 0, band_tail = 0, k_tail = 0;
  bool finite = true;
};

inline EmbeddingSum embedding_sum(const BandStructure& bs, const std::vector<GapEigenvalue>& eigs,
                                  double omega, double s, int k_max, const Potential* pot) {
  EmbeddingSum r;
  double last_term = 0;
  int last_k = 1;
  for (int k = 1; k <= k_max; k += 2) {
    const double nu = (k * omega) * (k * omega);
    double term = 0;
    for (const auto* sb : {&bs.plus, &bs.minus}) {
      for (const auto& b : sb->bands) {
        const double d = lambda_dist(nu, b);
        if (d <= 0) {
          r.finite = false;
          return r;
        }
        term += std::pow(d, -s);
      }
      if (pot) {
        // bands above the scan: lower edges >= max(lambda_max, (pi (n-1)/X)^2 / sup V)
        const StepProfile& prof = pot->tail(sb->side == Side::plus);
        const double X = prof.period(), vs = prof.sup();
        for (std::size_t n = sb->bands.size() + 1; n < sb->bands.size() + 2000000; ++n) {
          const double lb = std::pow(std::numbers::pi * double(n - 1) / X, 2) / vs;
          const double t = std::pow(std::max(bs.lambda_max, lb) - nu, -s);
          r.band_tail += t;
          if (lb > bs.lambda_max && t < 1e-17 * (term + r.trunc)) break;
        }
      }
    }
    for (const auto& e : eigs) {
      const double d = std::abs(nu - e.lambda);
      if (d <= 0) {
        r.finite = false;
        return r;
      }
      term += std::pow(d, -s);
    }
    r.trunc += term;
    last_term = term;
    last_k = k;
  }
  // terms decay like k^-s beyond the truncation
  for (int j = 1; j < 1000000; ++j) {
    const double t = last_term * std::pow(double(last_k) / double(last_k + 2 * j), s);
    r.k_tail += t;
    if (t < 1e-17 * r.trunc) break;
  }
  return r;
}

}  // namespace detail

inline EmbeddingEstimate embedding_series_estimate(const BandStructure& bs,
                                                   const std::vector<GapEigenvalue>& eigs,
                                                   double omega, double p, int k_max,
                                                   const Potential* pot = nullptr) {
  if (!(p > 2) || !std::isfinite(p)) throw std::domain_error("embedding_series_estimate: need 2 < p < inf");
  EmbeddingEstimate r;
  r.s = p / (p - 2.0);
  if (!(r.s > 1)) throw std::domain_error("embedding_series_estimate: s <= 1");
  r.k_max = k_max;
  if ((k_max * omega) * (k_max * omega) >= bs.lambda_max)
    throw std::invalid_argument("embedding_series_estimate: k_max omega beyond band scan");
  const auto full = detail::embedding_sum(bs, eigs, omega, r.s, k_max, pot);
  if (!full.finite) {
    r.reason = "k omega meets the spectrum: series diverges";
    return r;
  }
  int kh = std::max(1, k_max / 2);
  if (kh % 2 == 0) kh -= 1;
  const auto half = detail::embedding_sum(bs, eigs, omega, r.s, std::max(1, kh), pot);
  r.truncated = full.trunc;
  r.band_tail = full.band_tail;
  r.k_tail = full.k_tail;
  r.value = full.trunc + full.band_tail + full.k_tail;
  r.value_half = half.trunc + half.band_tail + half.k_tail;
  r.truncation_change = std::abs(r.value - r.value_half) / r.value;
  r.finite = std::isfinite(r.value);
  r.pass = r.finite && r.truncation_change < 0.01;
  if (!r.pass) r.reason = "truncation change above 1%";
  return r;
}

struct AssumptionReport {
  bool a1_ok = false;
  std::string a1_evidence;
  bool a2_ok = false;
  std::string a2_evidence;
  A3Result a3;
  A4Result a4;
  std::optional<MultistepCheck> multistep;
  std::optional<AdmissiblePeriods> admissible;
  std::optional<DislocationCheck> dislocation;
  std::optional<InterfaceCheck> interface_check;
  std::optional<EmbeddingEstimate> embedding;
  std::vector<double> eigenvalues;
  bool all_pass = false;
};

struct CheckOptions {
  int k_max = 7;
  std::optional<double> p;  // embedding estimate when set
};

// omega = 2 pi / T; T carries the exact value used by the arithmetic criteria.
inline AssumptionReport check_assumptions(const Potential& pot, const NonlinearityProfile* gamma,
                                          const ExactNumber& T, CheckOptions opt = {}) {
  AssumptionReport r;
  const double omega = 2.0 * std::numbers::pi / T.value;

  r.a1_ok = pot.inf() > 0 && std::isfinite(pot.sup());
  r.a1_evidence = "V in [" + std::to_string(pot.inf()) + ", " + std::to_string(pot.sup()) + "]";
  if (gamma) {
    const auto [lo, hi] = gamma->support_hull();
    if (gamma->mode() == GammaMode::compact) {
      r.a1_evidence += "; gamma >= 0 supported in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "] (not positive a.e.)";
    } else {
      r.a1_evidence += "; gamma_per >= " + std::to_string(gamma->periodic()->inf()) + ", gamma_loc >= 0";
      r.a1_ok = r.a1_ok && gamma->periodic()->inf() > 0;
    }
  }
  r.a2_ok = true;
  r.a2_evidence = "tails periodic: X- = " + std::to_string(pot.left().period()) +
                  ", X+ = " + std::to_string(pot.right().period()) + ", R- = " +
                  std::to_string(pot.r_minus()) + ", R+ = " + std::to_string(pot.r_plus());

  switch (pot.kind()) {
    case PotentialKind::periodic:
      r.multistep = check_multistep(pot.right(), T);
      r.admissible = admissible_periods(pot.right());
      break;
    case PotentialKind::dislocation:
      r.dislocation = check_dislocation(pot, T);
      r.admissible = admissible_periods(pot.right());
      break;
    case PotentialKind::interface:
      r.interface_check = check_interface(pot, T);
      break;
    default:
      break;
  }

  const int windows = 3;
  const double lmax = std::max(std::pow((opt.k_max + 4) * omega, 2), std::pow(4.0 * omega * windows, 2));
  const BandStructure bs = band_scan(pot, lmax);
  const auto eigs = gap_eigenvalues(pot, bs);
  for (const auto& e : eigs) r.eigenvalues.push_back(e.lambda);
  r.a3 = verify_a3_numeric(pot, omega, bs, eigs, opt.k_max, T);
  r.a4 = check_a4(pot, eigs, omega, windows);
  if (opt.p) r.embedding = embedding_series_estimate(bs, eigs, omega, *opt.p, opt.k_max, &pot);

  r.all_pass = r.a1_ok && r.a2_ok && r.a3.pass && r.a4.pass && (!r.embedding || r.embedding->pass);
  return r;
}

}  // namespace breather

#endif
