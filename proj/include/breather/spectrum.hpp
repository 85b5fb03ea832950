#ifndef BREATHER_SPECTRUM_HPP
#define BREATHER_SPECTRUM_HPP

#include "core/parallel.hpp"
#include "transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace breather {

struct Interval {
  double lo = 0, hi = 0;
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct SideBands {
  Side side = Side::plus;
  std::vector<Interval> bands;
  std::vector<Interval> gaps;
  std::vector<double> edges;     // |tr| = 2 crossings (and lambda = 0)
  std::vector<double> touching;  // |tr| = 2 tangencies (closed gaps)
  double resolution = 0;         // sqrt(lambda) step
};

struct BandStructure {
  SideBands plus, minus;
  double lambda_max = 0;
  std::vector<Interval> bands;  // union over both sides
  std::vector<Interval> gaps;
  std::vector<std::string> warnings;

  const SideBands& side(Side s) const { return s == Side::plus ? plus : minus; }
  bool in_band(double lambda) const {
    for (const auto& b : bands)
      if (b.contains(lambda)) return true;
    return false;
  }
  // Band edges and tangencies of both sides, sorted.
  std::vector<double> singular_points() const {
    std::vector<double> s;
    for (const auto* sb : {&plus, &minus}) {
      s.insert(s.end(), sb->edges.begin(), sb->edges.end());
      s.insert(s.end(), sb->touching.begin(), sb->touching.end());
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }
};

// Trace of the one-period matrix of a tail profile.
inline double tail_trace(const StepProfile& prof, double lambda) {
  Mat2<double> p{};
  for (const auto& c : prof.cells()) p = cell_propagator(c.value, c.length, lambda) * p;
  return p.trace();
}

// sqrt(lambda) step: (1/64) min_i 2 pi/(4 q_i).
inline double default_resolution(const StepProfile& prof) {
  double qmin = INFINITY;
  for (const auto& c : prof.cells()) qmin = std::min(qmin, c.q());
  return (2.0 * std::numbers::pi / (4.0 * qmin)) / 64.0;
}

namespace detail {

// Last point where sign(f) equals sign(f(a)) on [a, b], to rounding.
template <class F>
double bisect_sign(F&& f, double a, double b) {
  const bool sa = f(a) < 0;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if ((f(m) < 0) == sa)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

// Golden-section maximum of f on [a, b].
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters = 80) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

inline std::vector<Interval> merge(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  std::vector<Interval> out;
  for (const auto& i : v) {
    if (!out.empty() && i.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, i.hi);
    else
      out.push_back(i);
  }
  return out;
}

inline std::vector<Interval> complement(const std::vector<Interval>& bands, double lmax) {
  std::vector<Interval> gaps;
  double x = 0;
  for (const auto& b : bands) {
    if (b.lo > x) gaps.push_back({x, b.lo});
    x = std::max(x, b.hi);
  }
  if (x < lmax) gaps.push_back({x, lmax});
  return gaps;
}

}  // namespace detail

inline constexpr double kTouchTol = 1e-9;

inline SideBands band_scan(const Potential& pot, Side side, double lambda_max,
                           double resolution = 0) {
  if (!(lambda_max > 0)) throw std::invalid_argument("band_scan: lambda_max must be positive");
  const StepProfile& prof = pot.tail(side == Side::plus);
  SideBands out;
  out.side = side;
  out.resolution = resolution > 0 ? resolution : default_resolution(prof);
  const double smax = std::sqrt(lambda_max);
  const std::size_t n = std::max<std::size_t>(4, std::size_t(std::ceil(smax / out.resolution)));
  const double h = smax / double(n);
  auto g = [&](double s) { return std::abs(tail_trace(prof, s * s)) - 2.0; };
  std::vector<double> gs(n + 1);
  parallel_for(n + 1, [&](std::size_t j) { gs[j] = g(j * h); });
  gs[0] = -1e-300;  // lambda = 0 is a band edge; the band starts there

  // sign changes of |tr| - 2, plus refinement of near-tangent extrema
  struct Event {
    double s;
    int kind;  // +1 band->gap, -1 gap->band, 0 tangency
  };
  std::vector<Event> ev;
  // samples within kTouchTol of |tr| = 2 count as band so tangencies go
  // through the extremum refinement instead of producing empty gaps
  auto band = [](double v) { return v < kTouchTol; };
  for (std::size_t j = 1; j <= n; ++j) {
    const bool was_band = band(gs[j - 1]), is_band = band(gs[j]);
    if (was_band != is_band)
      ev.push_back({detail::bisect_sign(g, (j - 1) * h, j * h), was_band ? +1 : -1});
    if (j + 1 <= n) {
      const double a = (j - 1) * h, b = (j + 1) * h;
      const bool band3 = band(gs[j - 1]) && band(gs[j]) && band(gs[j + 1]);
      const bool gap3 = !band(gs[j - 1]) && !band(gs[j]) && !band(gs[j + 1]);
      if (band3 && gs[j] >= gs[j - 1] && gs[j] >= gs[j + 1] && gs[j] > -0.1) {
        auto [sm, gm] = detail::golden_max(g, a, b);
        if (gm > kTouchTol) {
          ev.push_back({detail::bisect_sign(g, a, sm), +1});
          ev.push_back({detail::bisect_sign(g, sm, b), -1});
        } else if (gm >= -kTouchTol) {
          ev.push_back({sm, 0});
        }
      } else if (gap3 && gs[j] <= gs[j - 1] && gs[j] <= gs[j + 1] && gs[j] < 0.1) {
        auto [sm, gm] = detail::golden_max([&](double s) { return -g(s); }, a, b);
        gm = -gm;
        if (gm < -kTouchTol) {
          ev.push_back({detail::bisect_sign(g, a, sm), -1});
          ev.push_back({detail::bisect_sign(g, sm, b), +1});
        } else if (gm <= kTouchTol) {
          ev.push_back({sm, 0});
        }
      }
    }
  }
  std::sort(ev.begin(), ev.end(), [](const Event& x, const Event& y) { return x.s < y.s; });

  out.edges.push_back(0.0);
  double lo = 0.0;
  bool in_band = true;
  for (const auto& e : ev) {
    const double lam = e.s * e.s;
    if (e.kind == 0) {
      out.touching.push_back(lam);
      continue;
    }
    out.edges.push_back(lam);
    if (e.kind == +1 && in_band) {
      out.bands.push_back({lo, lam});
      in_band = false;
    } else if (e.kind == -1 && !in_band) {
      lo = lam;
      in_band = true;
    }
  }
  if (in_band) out.bands.push_back({lo, lambda_max});
  out.gaps = detail::complement(out.bands, lambda_max);
  return out;
}

inline BandStructure band_scan(const Potential& pot, double lambda_max, double resolution = 0) {
  BandStructure bs;
  bs.lambda_max = lambda_max;
  bs.plus = band_scan(pot, Side::plus, lambda_max, resolution);
  if (pot.left() == pot.right()) {
    bs.minus = bs.plus;
    bs.minus.side = Side::minus;
  } else {
    bs.minus = band_scan(pot, Side::minus, lambda_max, resolution);
  }
  std::vector<Interval> all = bs.plus.bands;
  all.insert(all.end(), bs.minus.bands.begin(), bs.minus.bands.end());
  bs.bands = detail::merge(all);
  bs.gaps = detail::complement(bs.bands, lambda_max);
  for (const auto* sb : {&bs.plus, &bs.minus}) {
    const double def = default_resolution(pot.tail(sb->side == Side::plus));
    if (sb->resolution > def)
      bs.warnings.push_back(std::string("resolution coarser than default on side ") +
                            to_string(sb->side) + "; refine to " + std::to_string(def));
  }
  return bs;
}

// Weyl function m = v2/v1 of the decaying Floquet vector, Im lambda > 0.
inline cplx weyl_m(const Potential& pot, Side side, cplx lambda) {
  if (!(lambda.imag() > 0)) throw std::domain_error("weyl_m: requires Im lambda > 0");
  const auto f = floquet(pot, side, lambda);
  return f.v_psi[1] / f.v_psi[0];
}

struct GapEigenvalue {
  double lambda = 0;
  double residual = 0;      // |D(lambda)|
  bool sign_change = false;
  bool edge_flag = false;   // within tolerance of a band edge: not certified
  double rho_plus = 0;      // decaying multiplier to the right
  double rho_minus = 0;     // decaying multiplier to the left
  Vec2<double> v_plus;      // weighted, at R+
  Vec2<double> v_minus;     // weighted, at R-
};

struct MatchingData {
  double D = 0;
  Vec2<double> v_plus, v_minus;  // weighted unit vectors at R+ and R-
  double rho_plus = 0, rho_minus = 0;
};

namespace detail {

inline Vec2<double> weighted_unit(const Vec2<double>& e, double lambda) {
  Vec2<double> w{std::sqrt(lambda) * e[0], e[1]};
  const double n = norm(w);
  return {w[0] / n, w[1] / n};
}

inline bool align(Vec2<double>& v, const Vec2<double>* ref) {
  bool flip;
  if (ref)
    flip = v[0] * (*ref)[0] + v[1] * (*ref)[1] < 0;
  else
    flip = (std::abs(v[0]) > 1e-14 ? v[0] : v[1]) < 0;
  if (flip) v = {-v[0], -v[1]};
  return flip;
}

}  // namespace detail

// D(lambda) = det[P(R+, R-) v~-, v+] in weighted coordinates. The vectors are
// aligned with the reference data when given, else by the first-component rule.
inline MatchingData matching_determinant(const Potential& pot, double lambda,
                                         const MatchingData* ref = nullptr) {
  MatchingData out;
  const double xp = pot.r_plus(), xm = pot.r_minus();
  const Mat2<double> mp = transfer(pot, xp, xp + pot.right().period(), lambda);
  const Mat2<double> mm = transfer(pot, xm - pot.left().period(), xm, lambda);
  auto roots = [](double t) {
    const double s = std::sqrt(std::max(0.0, t * t - 4.0));
    const double big = 0.5 * (t + (t >= 0 ? s : -s));
    return std::pair{1.0 / big, big};
  };
  const auto [rp_small, rp_big] = roots(mp.trace());
  const auto [rm_small, rm_big] = roots(mm.trace());
  (void)rp_big;
  (void)rm_small;
  out.rho_plus = rp_small;
  out.rho_minus = 1.0 / rm_big;
  out.v_plus = detail::weighted_unit(eigenvector(mp, rp_small), lambda);
  out.v_minus = detail::weighted_unit(eigenvector(mm, rm_big), lambda);
  detail::align(out.v_plus, ref ? &ref->v_plus : nullptr);
  detail::align(out.v_minus, ref ? &ref->v_minus : nullptr);
  const Mat2<double> core = transfer(pot, xm, xp, lambda);
  const Vec2<double> um{out.v_minus[0] / std::sqrt(lambda), out.v_minus[1]};
  const Vec2<double> pu = core * um;
  const Vec2<double> w{std::sqrt(lambda) * pu[0], pu[1]};
  out.D = det2(w, out.v_plus);
  return out;
}

struct GapEigenOptions {
  double resolution = 0;  // sqrt(lambda) step; 0 = default from all cells
  double edge_tol = 1e-9;
};

inline double default_resolution(const Potential& pot) {
  double r = std::min(default_resolution(pot.left()), default_resolution(pot.right()));
  for (const auto& c : pot.core()) r = std::min(r, (2.0 * std::numbers::pi / (4.0 * c.q())) / 64.0);
  return r;
}

inline std::vector<GapEigenvalue> gap_eigenvalues(const Potential& pot, const BandStructure& bs,
                                                  GapEigenOptions opt = {}) {
  const double h = opt.resolution > 0 ? opt.resolution : default_resolution(pot);
  std::vector<GapEigenvalue> out;
  for (const auto& gap : bs.gaps) {
    if (!(gap.hi > gap.lo) || gap.hi <= 0) continue;
    const double a = std::sqrt(std::max(gap.lo, 0.0)), b = std::sqrt(gap.hi);
    const std::size_t n = std::max<std::size_t>(8, std::size_t(std::ceil((b - a) / h)));
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = a + (b - a) * (i + 0.5) / double(n);
    std::vector<MatchingData> md(n);
    parallel_for(n, [&](std::size_t i) { md[i] = matching_determinant(pot, s[i] * s[i]); });
    for (std::size_t i = 0; i < n; ++i) {
      const MatchingData* ref = i ? &md[i - 1] : nullptr;
      const bool fp = detail::align(md[i].v_plus, ref ? &ref->v_plus : nullptr);
      const bool fm = detail::align(md[i].v_minus, ref ? &ref->v_minus : nullptr);
      if (fp != fm) md[i].D = -md[i].D;
    }
    for (std::size_t i = 1; i < n; ++i) {
      if ((md[i - 1].D < 0) == (md[i].D < 0) && md[i].D != 0) continue;
      const MatchingData left = md[i - 1];
      auto f = [&](double sv) { return matching_determinant(pot, sv * sv, &left).D; };
      const bool neg = left.D < 0;
      double lo = s[i - 1], hi = s[i];
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        if ((f(m) < 0) == neg)
          lo = m;
        else
          hi = m;
      }
      const double sr = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
      const MatchingData r = matching_determinant(pot, sr * sr, &left);
      GapEigenvalue e;
      e.lambda = sr * sr;
      e.residual = std::abs(r.D);
      e.sign_change = (f(lo) < 0) != (f(hi) < 0) || r.D == 0;
      e.rho_plus = r.rho_plus;
      e.rho_minus = r.rho_minus;
      e.v_plus = r.v_plus;
      e.v_minus = r.v_minus;
      const double tol = opt.edge_tol * std::max(1.0, e.lambda);
      e.edge_flag = e.lambda - gap.lo < tol || gap.hi - e.lambda < tol;
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace breather

#endif
