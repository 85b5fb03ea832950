#ifndef BREATHER_MEASURE_HPP
#define BREATHER_MEASURE_HPP

#include "core/parallel.hpp"
#include "core/quadrature.hpp"
#include "spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace breather {

namespace detail {

// (1 - sinc y)/y^2
inline double one_minus_sinc_over_sq(double y) {
  if (std::abs(y) < 0.5) {
    const double y2 = y * y;
    double term = 1.0 / 6.0, sum = 0;
    for (int n = 1; n < 10; ++n) {
      sum += term;
      term *= -y2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
    }
    return sum;
  }
  return (1.0 - std::sin(y) / y) / (y * y);
}

inline double sinc(double x) { return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace detail

// Integrals over [0, ell] of cos^2(ky), sin^2(ky)/k^2, cos(ky) sin(ky)/k, k^2 = k2 >= 0.
struct CellIntegrals {
  double cc, ss, cs;
};

inline CellIntegrals cell_integrals(double k2, double ell) {
  const double k = std::sqrt(std::max(k2, 0.0));
  const double x = k * ell;
  CellIntegrals r;
  r.cc = 0.5 * ell * (1.0 + detail::sinc(2.0 * x));
  r.ss = 2.0 * ell * ell * ell * detail::one_minus_sinc_over_sq(2.0 * x);
  const double sx = detail::sinc(x);
  r.cs = 0.5 * ell * ell * sx * sx;
  return r;
}

// int |u|^2 (V dx if weighted, else dx) over [x0, x1] for the solution with
// (u, u')(x0) = data, real lambda >= 0, in closed form per cell.
inline double solution_norm_sq(const Potential& pot, double x0, double x1, double lambda,
                               Vec2<cplx> data, bool weighted = true) {
  double sum = 0;
  for (const auto& s : pot.segments(x0, x1)) {
    const double k2 = lambda * s.value;
    const auto I = cell_integrals(k2, s.length());
    const double part = std::norm(data[0]) * I.cc + std::norm(data[1]) * I.ss +
                        2.0 * std::real(data[0] * std::conj(data[1])) * I.cs;
    sum += weighted ? s.value * part : part;
    const auto P = cell_propagator(s.value, s.length(), lambda);
    data = P.cast<cplx>() * data;
  }
  return sum;
}

// Same for complex lambda by composite Gauss-Legendre quadrature.
inline double solution_norm_sq(const Potential& pot, double x0, double x1, cplx lambda,
                               Vec2<cplx> data, bool weighted = true) {
  static const GaussLegendre gl(16);
  double sum = 0;
  for (const auto& s : pot.segments(x0, x1)) {
    const double k = std::sqrt(std::abs(lambda) * s.value);
    const int pieces = std::max(1, int(std::ceil(k * s.length() / 2.0)));
    const double h = s.length() / pieces;
    for (int p = 0; p < pieces; ++p) {
      const auto P0 = cell_propagator(s.value, p * h, lambda);
      const Vec2<cplx> d0 = P0 * data;
      const double part = gl.integrate(
          [&](double y) {
            const auto P = cell_propagator(s.value, y - p * h, lambda);
            return std::norm(P.a * d0[0] + P.b * d0[1]);
          },
          p * h, (p + 1) * h);
      sum += weighted ? s.value * part : part;
    }
    data = cell_propagator(s.value, s.length(), lambda) * data;
  }
  return sum;
}

// u(x) for the solution with (u, u')(0) = data at sorted or unsorted points.
inline std::vector<cplx> evaluate_solution(const Potential& pot, cplx lambda, const Vec2<cplx>& data,
                                           const std::vector<double>& xs) {
  std::vector<cplx> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (transfer(pot, 0.0, xs[i], lambda) * data)[0];
  return out;
}

// W(f, g) = f g' - f' g from (u, u') data at a common point.
inline cplx wronskian(const Vec2<cplx>& f, const Vec2<cplx>& g) { return det2(f, g); }

inline Vec2<cplx> conj(const Vec2<cplx>& v) { return {std::conj(v[0]), std::conj(v[1])}; }

struct EigenfunctionSample {
  FloquetData floquet;
  std::vector<double> x;
  std::vector<cplx> phi;
};

// phi = v . Psi sampled on a grid for lambda inside a band of the given side.
inline EigenfunctionSample eigenfunction_pair(const Potential& pot, double lambda, Side side,
                                              const std::vector<double>& grid) {
  EigenfunctionSample e;
  e.floquet = floquet(pot, side, cplx(lambda));
  if (e.floquet.singular) throw std::domain_error("eigenfunction_pair: lambda in singular set");
  if (!e.floquet.band) throw std::domain_error("eigenfunction_pair: lambda not in a band");
  e.x = grid;
  e.phi = evaluate_solution(pot, lambda, e.floquet.v_psi, grid);
  return e;
}

// int over one tail period of |phi|^2 V for phi with data v at 0.
inline double period_norm_sq(const Potential& pot, Side side, double lambda, const Vec2<cplx>& v) {
  double a, b;
  if (side == Side::plus) {
    a = pot.r_plus();
    b = a + pot.right().period();
  } else {
    b = pot.r_minus();
    a = b - pot.left().period();
  }
  const Vec2<cplx> d = transfer(pot, 0.0, a, lambda).cast<cplx>() * v;
  return solution_norm_sq(pot, a, b, lambda, d);
}

struct ReflectionTransmission {
  cplx r, t;
};

// Solve phi_other = r phi + t conj(phi) from (u, u') data at one point.
inline ReflectionTransmission reflection_transmission(const Vec2<cplx>& other, const Vec2<cplx>& phi) {
  const Vec2<cplx> pc = conj(phi);
  const cplx det = det2(phi, pc);
  if (std::abs(det) < 1e-14 * std::max(1e-300, norm(phi) * norm(phi)))
    throw std::domain_error("reflection_transmission: phi is real up to a phase");
  return {det2(other, pc) / det, det2(phi, other) / det};
}

struct SpectralDensitySample {
  double lambda = 0;
  Mat2<cplx> M = Mat2<cplx>::zero();
  bool plus = false, minus = false;  // contributing sides
  bool excluded = false;
  std::string reason;
};

inline constexpr double kS0Tol = 1e-10;

namespace detail {

inline void add_outer(Mat2<cplx>& M, double w, const Vec2<cplx>& v) {
  M.a += w * v[0] * std::conj(v[0]);
  M.b += w * v[0] * std::conj(v[1]);
  M.c += w * v[1] * std::conj(v[0]);
  M.d += w * v[1] * std::conj(v[1]);
}

}  // namespace detail

// Band density from the Floquet data of both sides; the vectors may carry any
// normalization.
inline SpectralDensitySample density(const Potential& pot, double lambda, const FloquetData& fp,
                                     const FloquetData& fm) {
  SpectralDensitySample s;
  s.lambda = lambda;
  if (fp.singular || fm.singular) {
    s.excluded = true;
    s.reason = "band edge";
    return s;
  }
  if (!fp.band && !fm.band) return s;
  const cplx w0 = wronskian(fp.v_psi, fm.v_psi);
  if (std::abs(w0) < kS0Tol * norm(fp.v_psi) * norm(fm.v_psi)) {
    s.excluded = true;
    s.reason = "S0";
    return s;
  }
  const double inv2pi = 0.5 / std::numbers::pi;
  if (fp.band) {
    const double nrm = period_norm_sq(pot, Side::plus, lambda, fp.v_psi);
    const cplx t = reflection_transmission(fm.v_psi, fp.v_psi).t;
    detail::add_outer(s.M, inv2pi * std::abs(fp.rho_prime) / (std::norm(t) * nrm), fm.v_psi);
    s.plus = true;
  }
  if (fm.band) {
    const double nrm = period_norm_sq(pot, Side::minus, lambda, fm.v_psi);
    const cplx t = reflection_transmission(fp.v_psi, fm.v_psi).t;
    detail::add_outer(s.M, inv2pi * std::abs(fm.rho_prime) / (std::norm(t) * nrm), fp.v_psi);
    s.minus = true;
  }
  return s;
}

inline SpectralDensitySample density(const Potential& pot, double lambda) {
  if (!(lambda > 0)) {
    SpectralDensitySample s;
    s.lambda = lambda;
    s.excluded = true;
    s.reason = "lambda <= 0";
    return s;
  }
  return density(pot, lambda, floquet(pot, Side::plus, cplx(lambda)),
                 floquet(pot, Side::minus, cplx(lambda)));
}

// (1/pi) Im of the Weyl-function matrix at lambda + i eps; cross-check only.
inline Mat2<double> herglotz_density(const Potential& pot, double lambda, double eps) {
  const cplx z(lambda, eps);
  const cplx mp = weyl_m(pot, Side::plus, z), mm = weyl_m(pot, Side::minus, z);
  const cplx inv = 1.0 / (mm - mp);
  const cplx off = inv * 0.5 * (mm + mp);
  const double pi = std::numbers::pi;
  return {inv.imag() / pi, off.imag() / pi, off.imag() / pi, (inv * mm * mp).imag() / pi};
}

struct PointMass {
  double lambda = 0;
  Vec2<double> v0;       // (u, u') at 0
  double norm_sq = 0;    // ||phi0||^2 in L^2_V(R)
  Mat2<double> weight;   // v0 v0^T / norm_sq
};

inline PointMass point_mass(const Potential& pot, const GapEigenvalue& e) {
  const double lam = e.lambda, sl = std::sqrt(lam);
  const double xp = pot.r_plus(), xm = pot.r_minus();
  const Vec2<double> at_rp{e.v_plus[0] / sl, e.v_plus[1]};
  auto to_c = [](const Vec2<double>& v) { return Vec2<cplx>{v[0], v[1]}; };
  const Vec2<double> at_rm = transfer(pot, xp, xm, lam) * at_rp;
  const double Xp = pot.right().period(), Xm = pot.left().period();
  const Vec2<double> at_lm = transfer(pot, xm, xm - Xm, lam) * at_rm;
  double n = solution_norm_sq(pot, xm, xp, lam, to_c(at_rm));
  n += solution_norm_sq(pot, xp, xp + Xp, lam, to_c(at_rp)) / (1.0 - e.rho_plus * e.rho_plus);
  n += solution_norm_sq(pot, xm - Xm, xm, lam, to_c(at_lm)) / (1.0 - e.rho_minus * e.rho_minus);
  PointMass pm;
  pm.lambda = lam;
  pm.v0 = transfer(pot, xp, 0.0, lam) * at_rp;
  pm.norm_sq = n;
  pm.weight = {pm.v0[0] * pm.v0[0] / n, pm.v0[0] * pm.v0[1] / n, pm.v0[1] * pm.v0[0] / n,
               pm.v0[1] * pm.v0[1] / n};
  return pm;
}

// T[f](lambda) = int f Psi V dx for real f supported in [x0, x1].
class Transform {
 public:
  Transform(const Potential& pot, const std::function<double(double)>& f, double x0, double x1,
            double lambda_max, int order = 16)
      : pot_(&pot), x0_(x0) {
    const GaussLegendre gl(order);
    norm_sq_ = 0;
    for (const auto& s : pot.segments(x0, x1)) {
      Piece pc;
      pc.value = s.value;
      pc.length = s.length();
      const double k = std::sqrt(std::max(lambda_max, 1.0) * s.value);
      std::vector<QuadNode> nodes;
      append_composite(nodes, gl, 0.0, s.length(), 4.0 / k);
      for (const auto& q : nodes) {
        const double fv = f(s.x0 + q.x);
        pc.y.push_back(q.x);
        pc.wf.push_back(q.w * fv * s.value);
        norm_sq_ += q.w * fv * fv * s.value;
      }
      pieces_.push_back(std::move(pc));
    }
  }

  Vec2<double> operator()(double lambda) const {
    Mat2<double> S = transfer(*pot_, 0.0, x0_, lambda);
    Vec2<double> acc{0, 0};
    for (const auto& pc : pieces_) {
      const double sa = std::sqrt(pc.value);
      for (std::size_t i = 0; i < pc.y.size(); ++i) {
        const auto [c, s1] = cos_sinc(lambda, sa * pc.y[i]);
        const double p0 = c * S.a + (s1 / sa) * S.c;
        const double p1 = c * S.b + (s1 / sa) * S.d;
        acc[0] += pc.wf[i] * p0;
        acc[1] += pc.wf[i] * p1;
      }
      S = cell_propagator(pc.value, pc.length, lambda) * S;
    }
    return acc;
  }

  // int |f|^2 V dx by the same quadrature
  double norm_sq() const { return norm_sq_; }

 private:
  struct Piece {
    double value = 0, length = 0;
    std::vector<double> y, wf;
  };
  const Potential* pot_;
  double x0_;
  std::vector<Piece> pieces_;
  double norm_sq_ = 0;
};

struct DensityNode {
  double lambda = 0, weight = 0;
  SpectralDensitySample sample;
};

// Quadrature for the spectral measure: per band piece, Gauss-Legendre in theta
// with lambda = a + (b - a)(1 - cos theta)/2, plus the point masses.
class SpectralMeasure {
 public:
  SpectralMeasure(const Potential& pot, const BandStructure& bs,
                  const std::vector<GapEigenvalue>& eigs, int nodes_per_piece = 256) {
    const auto cuts = bs.singular_points();
    std::vector<Interval> pieces;
    for (const auto& b : bs.bands) {
      double lo = b.lo;
      for (double c : cuts)
        if (c > b.lo && c < b.hi) {
          pieces.push_back({lo, c});
          lo = c;
        }
      pieces.push_back({lo, b.hi});
    }
    const GaussLegendre gl(nodes_per_piece);
    for (const auto& p : pieces) {
      if (!(p.hi > p.lo)) continue;
      for (std::size_t i = 0; i < gl.x.size(); ++i) {
        const double th = 0.5 * std::numbers::pi * (gl.x[i] + 1.0);
        DensityNode nd;
        nd.lambda = p.lo + 0.5 * (p.hi - p.lo) * (1.0 - std::cos(th));
        nd.weight = 0.5 * std::numbers::pi * gl.w[i] * 0.5 * (p.hi - p.lo) * std::sin(th);
        nodes_.push_back(nd);
      }
    }
    parallel_for(nodes_.size(), [&](std::size_t i) { nodes_[i].sample = density(pot, nodes_[i].lambda); });
    for (const auto& n : nodes_) excluded_ += n.sample.excluded ? 1 : 0;
    for (const auto& e : eigs)
      if (!e.edge_flag) masses_.push_back(point_mass(pot, e));
  }

  const std::vector<DensityNode>& nodes() const { return nodes_; }
  const std::vector<PointMass>& point_masses() const { return masses_; }
  std::size_t excluded() const { return excluded_; }

  // ||g||^2 in L^2(mu) for g: lambda -> C^2.
  template <class G>
  double norm_sq(G&& g) const {
    std::vector<double> terms(nodes_.size());
    parallel_for(nodes_.size(), [&](std::size_t i) {
      const auto& n = nodes_[i];
      if (n.sample.excluded) return;
      terms[i] = n.weight * quadratic_form(n.sample.M, to_cplx(g(n.lambda)));
    });
    double sum = 0;
    for (double t : terms) sum += t;
    for (const auto& pm : masses_) {
      const auto gv = to_cplx(g(pm.lambda));
      sum += std::norm(gv[0] * pm.v0[0] + gv[1] * pm.v0[1]) / pm.norm_sq;
    }
    if (sum < -1e-10) throw std::runtime_error("measure norm is negative: numerical failure");
    return sum;
  }

  static double quadratic_form(const Mat2<cplx>& M, const Vec2<cplx>& g) {
    // sum_ij g_i conj(g_j) M_ij
    const cplx s = g[0] * std::conj(g[0]) * M.a + g[0] * std::conj(g[1]) * M.b +
                   g[1] * std::conj(g[0]) * M.c + g[1] * std::conj(g[1]) * M.d;
    return s.real();
  }

 private:
  static Vec2<cplx> to_cplx(const Vec2<double>& v) { return {v[0], v[1]}; }
  static Vec2<cplx> to_cplx(const Vec2<cplx>& v) { return v; }

  std::vector<DensityNode> nodes_;
  std::vector<PointMass> masses_;
  std::size_t excluded_ = 0;
};

// Sampled form: g given at the density nodes and at the point masses.
inline double measure_norm(const std::vector<DensityNode>& nodes, const std::vector<PointMass>& masses,
                           const std::vector<Vec2<cplx>>& g_nodes,
                           const std::vector<Vec2<cplx>>& g_masses) {
  if (g_nodes.size() != nodes.size() || g_masses.size() != masses.size())
    throw std::invalid_argument("measure_norm: sample count mismatch");
  double sum = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!nodes[i].sample.excluded)
      sum += nodes[i].weight * SpectralMeasure::quadratic_form(nodes[i].sample.M, g_nodes[i]);
  for (std::size_t i = 0; i < masses.size(); ++i)
    sum += std::norm(g_masses[i][0] * masses[i].v0[0] + g_masses[i][1] * masses[i].v0[1]) /
           masses[i].norm_sq;
  if (sum < -1e-10) throw std::runtime_error("measure norm is negative: numerical failure");
  return sum;
}

}  // namespace breather

#endif
