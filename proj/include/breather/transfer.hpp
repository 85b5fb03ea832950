#ifndef BREATHER_TRANSFER_HPP
#define BREATHER_TRANSFER_HPP

#include "core/entire.hpp"
#include "core/mat2.hpp"
#include "potential.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <type_traits>

namespace breather {

enum class Side { plus, minus };

inline const char* to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

// Propagator of (u, u') across a cell of value a and length ell.
template <class S>
Mat2<S> cell_propagator(double a, double ell, S lambda) {
  const double sa = std::sqrt(a);
  const auto f = cell_functions(lambda, sa * ell);
  return {f.c, f.s1 / sa, -sa * f.s2, f.c};
}

template <class S>
Jet<S> cell_propagator_jet(double a, double ell, S lambda) {
  const double sa = std::sqrt(a);
  const auto f = cell_functions(lambda, sa * ell);
  return {{f.c, f.s1 / sa, -sa * f.s2, f.c}, {f.dc, f.ds1 / sa, -sa * f.ds2, f.dc}};
}

// 2x2 matrix acting on weighted data (sqrt(lambda) u, u').
struct WeightedMatrix {
  Mat2<cplx> m;
  cplx lambda;
  cplx det() const { return m.det(); }
  cplx trace() const { return m.trace(); }
};

inline WeightedMatrix cell_matrix(double a, double ell, cplx lambda) {
  if (!(a > 0) || !(ell > 0)) throw std::invalid_argument("cell_matrix: a and ell must be positive");
  const double sa = std::sqrt(a);
  const auto f = cell_functions(lambda, sa * ell);
  const cplx sn = std::sqrt(lambda) * f.s1;  // sin(sqrt(lambda) q)
  return {{f.c, sn / sa, -sa * sn, f.c}, lambda};
}

namespace detail {

template <class M, class F>
M ordered_product(const Potential& pot, double x0, double x1, F&& cell) {
  if (x1 == x0) return M{};
  const bool fwd = x1 > x0;
  const auto segs = fwd ? pot.segments(x0, x1) : pot.segments(x1, x0);
  M p{};
  for (const auto& s : segs) p = cell(s.value, s.length()) * p;
  return fwd ? p : p.inverse_unimodular();
}

}  // namespace detail

// P(x1, x0; lambda) on (u, u'); x1 < x0 gives the inverse propagation.
template <class S>
Mat2<S> transfer(const Potential& pot, double x0, double x1, S lambda) {
  return detail::ordered_product<Mat2<S>>(
      pot, x0, x1, [&](double a, double l) { return cell_propagator(a, l, lambda); });
}

template <class S>
Jet<S> transfer_jet(const Potential& pot, double x0, double x1, S lambda) {
  return detail::ordered_product<Jet<S>>(
      pot, x0, x1, [&](double a, double l) { return cell_propagator_jet(a, l, lambda); });
}

inline WeightedMatrix transfer_weighted(const Potential& pot, double x0, double x1, cplx lambda) {
  const Mat2<cplx> m = detail::ordered_product<Mat2<cplx>>(
      pot, x0, x1, [&](double a, double l) { return cell_matrix(a, l, lambda).m; });
  return {m, lambda};
}

// Weighted state (sqrt(lambda) u, u') carried from x0 to x1.
inline Vec2<cplx> propagate(const Potential& pot, double x0, double x1, cplx lambda,
                            const Vec2<cplx>& state) {
  return transfer_weighted(pot, x0, x1, lambda).m * state;
}

// Forward period matrix of a tail at its own base point: plus uses
// [R+, R+ + X+], minus uses [R- - X-, R-].
template <class S>
Jet<S> period_jet(const Potential& pot, Side side, S lambda) {
  if (side == Side::plus) {
    const double x = pot.r_plus();
    return transfer_jet(pot, x, x + pot.right().period(), lambda);
  }
  const double x = pot.r_minus();
  return transfer_jet(pot, x - pot.left().period(), x, lambda);
}

// Period matrix and derivative from the tail profile alone (no potential walk).
template <class S>
Jet<S> tail_period_jet(const StepProfile& prof, S lambda) {
  Jet<S> p{};
  for (const auto& c : prof.cells()) p = cell_propagator_jet(c.value, c.length, lambda) * p;
  return p;
}

// P+(lambda) = P(0, x) P(x + X+, 0) for x >= R+, and P- with x - X- for
// x <= R-, both on (u, u') at base point 0.
template <class S>
Jet<S> monodromy_jet(const Potential& pot, Side side, S lambda) {
  if (side == Side::plus) {
    const Jet<S> q = transfer_jet(pot, 0.0, pot.r_plus(), lambda);
    return q.inverse_unimodular() * period_jet(pot, side, lambda) * q;
  }
  const Jet<S> q = transfer_jet(pot, 0.0, pot.r_minus(), lambda);
  return q.inverse_unimodular() * period_jet(pot, side, lambda).inverse_unimodular() * q;
}

inline WeightedMatrix monodromy(const Potential& pot, Side side, cplx lambda) {
  if (side == Side::plus) {
    const auto q = transfer_weighted(pot, 0.0, pot.r_plus(), lambda).m;
    const double x = pot.r_plus();
    const auto p = transfer_weighted(pot, x, x + pot.right().period(), lambda).m;
    return {q.inverse_unimodular() * p * q, lambda};
  }
  const auto q = transfer_weighted(pot, 0.0, pot.r_minus(), lambda).m;
  const double x = pot.r_minus();
  const auto p = transfer_weighted(pot, x - pot.left().period(), x, lambda).m;
  return {q.inverse_unimodular() * p.inverse_unimodular() * q, lambda};
}

struct FloquetData {
  cplx lambda;
  Side side = Side::plus;
  cplx trace, trace_prime;
  cplx rho, rho_prime;
  Vec2<cplx> v;      // weighted coordinates, unit norm
  Vec2<cplx> v_psi;  // (u, u') coordinates, unit norm
  bool singular = false;  // |tr| = 2: defective or scalar monodromy
  bool band = false;      // real lambda with |tr| < 2
};

// Eigenvector of m for eigenvalue rho, unit norm, largest entry real positive.
template <class S>
Vec2<S> eigenvector(const Mat2<S>& m, S rho) {
  Vec2<S> e1{m.b, rho - m.a}, e2{rho - m.d, m.c};
  Vec2<S> e = norm(e1) >= norm(e2) ? e1 : e2;
  double n = norm(e);
  if (n == 0) return {S(1), S(0)};
  using std::abs;
  const S piv = abs(e[0]) >= abs(e[1]) ? e[0] : e[1];
  S phase;
  if constexpr (std::is_same_v<S, double>) {
    phase = piv < 0 ? -1.0 : 1.0;
  } else {
    phase = std::conj(piv) / abs(piv);
  }
  return {e[0] * phase / n, e[1] * phase / n};
}

inline constexpr double kSingularTol = 1e-12;

namespace detail {

struct Branch {
  cplx rho;
  bool singular, band;
};

// Root of rho^2 - tr rho + 1 = 0: |rho| < 1 off the real axis and in gaps;
// on real bands Im(rho) has the sign of -tr', the boundary value from Im > 0.
inline Branch select_branch(cplx tr, cplx trp, cplx lambda) {
  if (lambda.imag() != 0.0) {
    const cplx sq = std::sqrt(tr * tr - 4.0);
    cplx r1 = 0.5 * (tr + sq), r2 = 0.5 * (tr - sq);
    return {std::abs(r1) < std::abs(r2) ? r1 : r2, false, false};
  }
  const double t = tr.real();
  const double at = std::abs(t);
  if (std::abs(at - 2.0) <= kSingularTol) return {cplx(t > 0 ? 1.0 : -1.0, 0.0), true, false};
  if (at > 2.0) {
    const double s = std::sqrt(t * t - 4.0);
    // smaller root, computed without cancellation
    const double big = 0.5 * (t + (t > 0 ? s : -s));
    return {cplx(1.0 / big, 0.0), false, false};
  }
  const double im = 0.5 * std::sqrt(4.0 - t * t);
  const double sgn = trp.real() > 0 ? -1.0 : 1.0;
  return {cplx(0.5 * t, sgn * im), false, true};
}

}  // namespace detail

// Floquet data from the (u, u') monodromy, with its trace and trace derivative.
inline FloquetData floquet(const Jet<cplx>& mono, cplx lambda, Side side, cplx trace, cplx trace_prime) {
  FloquetData f;
  f.lambda = lambda;
  f.side = side;
  f.trace = trace;
  f.trace_prime = trace_prime;
  if (lambda.imag() == 0.0) {
    f.trace = f.trace.real();
    f.trace_prime = f.trace_prime.real();
  }
  const auto br = detail::select_branch(f.trace, f.trace_prime, lambda);
  f.rho = br.rho;
  f.singular = br.singular;
  f.band = br.band;
  f.rho_prime = br.singular ? cplx(INFINITY, 0) : f.trace_prime * f.rho / (2.0 * f.rho - f.trace);
  f.v_psi = eigenvector(mono.m, f.rho);
  const cplx sl = std::sqrt(lambda);
  Vec2<cplx> w{sl * f.v_psi[0], f.v_psi[1]};
  const double n = norm(w);
  f.v = n > 0 ? Vec2<cplx>{w[0] / n, w[1] / n} : Vec2<cplx>{cplx(0), cplx(1)};
  return f;
}

// Floquet data from a weighted monodromy; trace_prime selects the band branch.
inline FloquetData floquet(const WeightedMatrix& mono, cplx trace_prime, Side side) {
  FloquetData f;
  f.lambda = mono.lambda;
  f.side = side;
  f.trace = mono.trace();
  f.trace_prime = trace_prime;
  if (mono.lambda.imag() == 0.0) {
    f.trace = f.trace.real();
    f.trace_prime = f.trace_prime.real();
  }
  const auto br = detail::select_branch(f.trace, f.trace_prime, mono.lambda);
  f.rho = br.rho;
  f.singular = br.singular;
  f.band = br.band;
  f.rho_prime = br.singular ? cplx(INFINITY, 0) : f.trace_prime * f.rho / (2.0 * f.rho - f.trace);
  f.v = eigenvector(mono.m, f.rho);
  const cplx sl = std::sqrt(mono.lambda);
  if (std::abs(sl) > 0) {
    Vec2<cplx> p{f.v[0] / sl, f.v[1]};
    const double n = norm(p);
    f.v_psi = {p[0] / n, p[1] / n};
  } else {
    f.v_psi = {cplx(1), cplx(0)};
  }
  return f;
}

inline FloquetData floquet(const Jet<cplx>& mono, cplx lambda, Side side) {
  return floquet(mono, lambda, side, mono.trace(), mono.trace_prime());
}

// Trace and its derivative from the tail period matrix: the similarity by the
// walk from 0 leaves them unchanged but costs digits when that walk grows.
inline FloquetData floquet(const Potential& pot, Side side, cplx lambda) {
  const Jet<cplx> p = period_jet(pot, side, lambda);
  return floquet(monodromy_jet(pot, side, lambda), lambda, side, p.trace(), p.trace_prime());
}

}  // namespace breather

#endif
