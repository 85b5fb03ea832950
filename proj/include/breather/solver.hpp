#ifndef BREATHER_SOLVER_HPP
#define BREATHER_SOLVER_HPP

#include "basis.hpp"
#include "core/parallel.hpp"
#include "functional.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace breather {

struct SolveOptions {
  double tol_inner = 1e-10;
  double tol_outer = 1e-8;
  int max_inner = 20000;
  int max_outer = 5000;
  int n_starts = 5;  // random starts besides the deterministic one
  std::uint64_t seed = 1;
  int max_enlarge = 2;
  double boundary_tol = 1e-6;
};

// Coordinates y = sqrt(2 |mu|) c, so that |u|_H = |y| and J0 = sum sign(mu) |y|^2.
class HCoords {
 public:
  explicit HCoords(const BreatherProblem& prob) {
    const auto& mu = prob.mu();
    scale_ = (2.0 * mu.array().abs()).sqrt().matrix();
    plus_ = (mu.array() > 0).cast<double>().matrix();
    minus_ = (mu.array() < 0).cast<double>().matrix();
    min_abs_mu_ = mu.array().abs().minCoeff();
    if (!(min_abs_mu_ > 1e-12)) throw std::runtime_error("HCoords: basis mode resonant with k omega");
  }
  Eigen::MatrixXcd to_c(const Eigen::MatrixXcd& y) const { return (y.array() / scale_.array()).matrix(); }
  Eigen::MatrixXcd to_y(const Eigen::MatrixXcd& c) const { return (c.array() * scale_.array()).matrix(); }
  // gradient with respect to the real and imaginary parts of y
  Eigen::MatrixXcd grad(const Eigen::MatrixXcd& W) const { return (2.0 * W.array() / scale_.array()).matrix(); }
  Eigen::MatrixXcd plus(const Eigen::MatrixXcd& y) const { return (y.array() * plus_.array()).matrix(); }
  Eigen::MatrixXcd minus(const Eigen::MatrixXcd& y) const { return (y.array() * minus_.array()).matrix(); }
  double min_abs_mu() const { return min_abs_mu_; }

 private:
  Eigen::MatrixXd scale_, plus_, minus_;
  double min_abs_mu_ = 0;
};

inline double rdot(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.conjugate().array() * b.array()).real().sum();
}

struct NehariPoint {
  double s = 0;
  Eigen::MatrixXcd w, v, y;  // y = s w + v
  Eigen::MatrixXcd G;        // gradient of J in y coordinates
  BreatherProblem::Value val;
  double restricted_grad = 0;
  int iterations = 0;
  bool converged = false;
};

struct NehariRejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Maximizer of J over s w + H^- (s >= 0) by gradient ascent with
// Barzilai-Borwein steps and nonmonotone Armijo backtracking.
inline NehariPoint nehari_project(const BreatherProblem& prob, const HCoords& hc,
                                  const Eigen::MatrixXcd& w_in, double tol, int max_iter,
                                  const NehariPoint* warm = nullptr) {
  Eigen::MatrixXcd w = hc.plus(w_in);
  const double wn = w.norm();
  if (!(wn > 1e-12)) throw NehariRejected("nehari_project: w lies in H-");
  w /= wn;
  NehariPoint pt;
  pt.w = w;
  auto eval = [&](double s, const Eigen::MatrixXcd& v, BreatherProblem::Value& val, Eigen::MatrixXcd& G) {
    const Eigen::MatrixXcd y = s * w + v;
    G = hc.grad(prob.gradient(hc.to_c(y), &val));
  };
  double s;
  Eigen::MatrixXcd v;
  if (warm && warm->s > 0) {
    s = warm->s;
    v = hc.minus(warm->v);
  } else {
    const auto j = prob.value(hc.to_c(w));
    if (!(j.J1 > 0)) throw NehariRejected("nehari_project: J unbounded on the ray (Gamma misses w)");
    s = std::pow(2.0 / ((prob.p() + 1.0) * j.J1), 1.0 / (prob.p() - 1.0));
    v = prob.zero();
  }
  BreatherProblem::Value val;
  Eigen::MatrixXcd G;
  eval(s, v, val, G);
  std::deque<double> hist{val.J};
  double gs = rdot(G, w);
  Eigen::MatrixXcd gv = hc.minus(G);
  double alpha = 0.5;
  double ds_prev = 0, dgs_prev = 0;
  Eigen::MatrixXcd dv_prev, dgv_prev;
  int it = 0;
  for (; it < max_iter; ++it) {
    const double gn2 = gs * gs + gv.squaredNorm();
    const double ynorm = std::sqrt(s * s + v.squaredNorm());
    if (std::sqrt(gn2) <= tol * std::max(1.0, ynorm)) {
      pt.converged = true;
      break;
    }
    if (it > 0) {
      const double ss = ds_prev * ds_prev + dv_prev.squaredNorm();
      const double sy = ds_prev * dgs_prev + rdot(dv_prev, dgv_prev);
      alpha = std::abs(sy) > 0 ? std::clamp(ss / std::abs(sy), 1e-8, 1e4) : 0.5;
    }
    const double ref = *std::min_element(hist.begin(), hist.end());
    bool accepted = false;
    double s1 = s;
    Eigen::MatrixXcd v1, G1;
    BreatherProblem::Value val1;
    for (int ls = 0; ls < 60; ++ls) {
      s1 = s + alpha * gs;
      if (s1 <= 0) {
        alpha *= 0.5;
        continue;
      }
      v1 = v + alpha * gv;
      eval(s1, v1, val1, G1);
      if (val1.J >= ref + 1e-4 * alpha * gn2 - 1e-13 * std::abs(val.J)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    const double gs1 = rdot(G1, w);
    const Eigen::MatrixXcd gv1 = hc.minus(G1);
    ds_prev = s1 - s;
    dv_prev = v1 - v;
    dgs_prev = gs1 - gs;
    dgv_prev = gv1 - gv;
    s = s1;
    v = v1;
    G = G1;
    val = val1;
    gs = gs1;
    gv = gv1;
    hist.push_back(val.J);
    if (hist.size() > 10) hist.pop_front();
  }
  pt.s = s;
  pt.v = v;
  pt.y = s * w + v;
  pt.G = G;
  pt.val = val;
  pt.restricted_grad = std::sqrt(gs * gs + gv.squaredNorm());
  pt.iterations = it;
  return pt;
}

struct SolveReport {
  double J = 0, J0 = 0, J1 = 0, gamma_int = 0;
  double h_norm = 0, h_plus = 0, h_minus = 0;
  double dual_norm = 0;          // |J'(u)| in the dual of H
  double nehari_u = 0;           // |J'(u)[u]| / |u|_H
  double nehari_minus = 0;       // sup |J'(u)[e]| over unit e in H-
  double nehari_identity_rel = 0;
  double pde_residual = 0;       // relative, refined grid
  double pde_residual_abs = 0;
  double boundary_mass = 0;      // fraction of int u^2 in |x| >= R - X
  int outer_iterations = 0, inner_iterations = 0;
  bool converged = false;
  std::vector<double> start_levels;
  int best_start = 0;
  double R = 0;
  int enlargements = 0;
  double min_abs_mu = 0;
  std::size_t n_spatial = 0, n_x = 0;
  int n_t = 0;
  std::vector<int> ks;
  std::string message;
};

struct OuterResult {
  NehariPoint pt;
  int iterations = 0, inner_total = 0;
  bool converged = false;
  double dual_norm = 0;
};

// Minimize J(m(w)) over the unit sphere of H+ by Riemannian gradient descent
// with Barzilai-Borwein steps and nonmonotone backtracking.
inline OuterResult minimize_on_sphere(const BreatherProblem& prob, const HCoords& hc,
                                      const Eigen::MatrixXcd& w0, const SolveOptions& opt) {
  OuterResult r;
  NehariPoint pt = nehari_project(prob, hc, w0, opt.tol_inner, opt.max_inner);
  r.inner_total += pt.iterations;
  std::deque<double> hist{pt.val.J};
  auto riem = [&](const NehariPoint& q) {
    const Eigen::MatrixXcd gp = hc.plus(q.G);
    return Eigen::MatrixXcd(q.s * (gp - rdot(gp, q.w) * q.w));
  };
  Eigen::MatrixXcd g = riem(pt);
  Eigen::MatrixXcd dw_prev, dg_prev;
  double alpha = 0;
  int it = 0;
  for (; it < opt.max_outer; ++it) {
    r.dual_norm = pt.G.norm();
    if (r.dual_norm <= opt.tol_outer * std::max(1.0, pt.y.norm()) && pt.converged) {
      r.converged = true;
      break;
    }
    const double gn2 = g.squaredNorm();
    if (it == 0) {
      alpha = 0.1 / std::max(1.0, std::sqrt(gn2));
    } else {
      const double sy = rdot(dw_prev, dg_prev);
      alpha = std::abs(sy) > 0 ? std::clamp(dw_prev.squaredNorm() / std::abs(sy), 1e-10, 1e6) : alpha;
    }
    const double ref = *std::max_element(hist.begin(), hist.end());
    bool accepted = false;
    NehariPoint trial;
    for (int ls = 0; ls < 50; ++ls) {
      Eigen::MatrixXcd w1 = pt.w - alpha * g;
      w1 /= w1.norm();
      try {
        trial = nehari_project(prob, hc, w1, opt.tol_inner, opt.max_inner, &pt);
      } catch (const NehariRejected&) {
        alpha *= 0.5;
        continue;
      }
      r.inner_total += trial.iterations;
      if (trial.val.J <= ref - 1e-4 * alpha * gn2 + 1e-13 * std::abs(pt.val.J)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    const Eigen::MatrixXcd g1 = riem(trial);
    dw_prev = trial.w - pt.w;
    dg_prev = g1 - g;
    pt = std::move(trial);
    g = g1;
    hist.push_back(pt.val.J);
    if (hist.size() > 10) hist.pop_front();
  }
  r.dual_norm = pt.G.norm();
  r.iterations = it;
  r.pt = std::move(pt);
  return r;
}

// Time shift making sum_m c_{m,k0} |c_{m,k0}| real positive for the lowest mode k0.
inline Eigen::MatrixXcd normalize_phase(const Eigen::MatrixXcd& c, const std::vector<int>& ks) {
  const cplx z = (c.col(0).array() * c.col(0).array().abs()).sum();
  if (std::abs(z) == 0) return c;
  const double th = std::arg(z);
  Eigen::MatrixXcd out = c;
  for (std::size_t k = 0; k < ks.size(); ++k)
    out.col(k) *= std::polar(1.0, -th * double(ks[k]) / double(ks[0]));
  return out;
}

// Deterministic start: Gaussian bump at the Gamma support times cos(k0 w t).
inline Eigen::MatrixXcd default_seed(const BreatherProblem& prob, const HCoords& hc) {
  const auto& basis = prob.basis();
  double xc = 0;
  if (prob.gamma().mode() == GammaMode::compact) {
    const auto [lo, hi] = prob.gamma().support_hull();
    xc = 0.5 * (lo + hi);
  }
  const double R = basis.R();
  std::vector<std::pair<double, double>> whole{{-R, R}};
  std::vector<double> cuts;
  for (const auto& s : basis.segments()) cuts.push_back(s.x0);
  const auto nodes = composite_nodes(whole, cuts, 8, [&](double x) {
    return 0.5 / std::sqrt(basis.lambda_max() * prob.potential()(x));
  });
  Eigen::MatrixXcd c = prob.zero();
  for (std::size_t m = 0; m < basis.size(); ++m) {
    double a = 0;
    for (const auto& q : nodes) {
      const double g = std::exp(-(q.x - xc) * (q.x - xc));
      a += q.w * prob.potential()(q.x) * 0.5 * g * basis(m, q.x);
    }
    c(m, 0) = a;
  }
  Eigen::MatrixXcd y = hc.plus(hc.to_y(c));
  if (!(y.norm() > 0)) throw std::runtime_error("default_seed: seed has no H+ component");
  return y / y.norm();
}

inline Eigen::MatrixXcd random_seed(const BreatherProblem& prob, const HCoords& hc, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd y = prob.zero();
  const double w2 = prob.omega() * prob.omega();
  for (Eigen::Index k = 0; k < y.cols(); ++k)
    for (Eigen::Index m = 0; m < y.rows(); ++m) {
      const double wt = 1.0 / (1.0 + std::abs(prob.mu()(m, k)) / w2);
      const double re = nd(rng), im = nd(rng);
      y(m, k) = cplx(re, im) * wt;
    }
  y = hc.plus(y);
  return y / y.norm();
}

struct FieldDiagnostics {
  double residual_abs = 0, residual_rel = 0;
  double boundary_fraction = 0;
  double mass = 0;  // int u^2 dx dt
};

// Residual of V u_tt - u_xx - Gamma |u|^{p-1} u on an independent grid refined
// by `refine` in x and t, plus the L^2 mass fraction near the Dirichlet ends.
inline FieldDiagnostics diagnose(const BreatherProblem& prob, const Eigen::MatrixXcd& c, int refine = 2) {
  const auto& basis = prob.basis();
  const double R = basis.R();
  GridOptions g = prob.grid_options();
  g.density /= refine;
  g.time_factor *= refine;
  std::vector<double> cuts;
  for (const auto& s : basis.segments()) cuts.push_back(s.x0);
  for (const auto& [a, b] : prob.gamma().pieces(-R, R)) {
    cuts.push_back(a);
    cuts.push_back(b);
  }
  std::vector<std::pair<double, double>> whole{{-R, R}};
  const auto nodes = composite_nodes(whole, cuts, g.gl_order, [&](double x) {
    return g.density / std::sqrt(basis.lambda_max() * prob.potential()(x));
  });
  const auto& ks = prob.ks();
  const int K = *std::max_element(ks.begin(), ks.end());
  const int nt = g.time_factor * (4 * K + 4);
  Eigen::MatrixXd C(ks.size(), nt), S(ks.size(), nt);
  for (std::size_t k = 0; k < ks.size(); ++k)
    for (int j = 0; j < nt; ++j) {
      const double th = 2.0 * std::numbers::pi * double(ks[k]) * double(j) / double(nt);
      C(k, j) = std::cos(th);
      S(k, j) = std::sin(th);
    }
  const Eigen::MatrixXcd mc = (prob.mu().array() * c.array()).matrix();
  const double X = std::max(prob.potential().left().period(), prob.potential().right().period());
  const double p = prob.p();
  const std::size_t block = 1024;
  const std::size_t nb = (nodes.size() + block - 1) / block;
  std::vector<std::array<double, 4>> acc(nb, {0, 0, 0, 0});
  parallel_for(nb, [&](std::size_t b) {
    const std::size_t i0 = b * block, i1 = std::min(nodes.size(), i0 + block);
    std::vector<double> xs;
    for (std::size_t i = i0; i < i1; ++i) xs.push_back(nodes[i].x);
    const Eigen::MatrixXd phi = basis.matrix(xs);
    const Eigen::MatrixXd U = 2.0 * ((phi * c.real()) * C - (phi * c.imag()) * S);
    const Eigen::MatrixXd L = 2.0 * ((phi * mc.real()) * C - (phi * mc.imag()) * S);
    for (std::size_t i = i0; i < i1; ++i) {
      const double x = nodes[i].x, wq = nodes[i].w / nt;
      const double V = prob.potential()(x), gm = prob.gamma()(x);
      const bool edge = std::abs(x) >= R - X;
      for (int j = 0; j < nt; ++j) {
        const double u = U(i - i0, j);
        const double n = gm * std::pow(std::abs(u), p - 1.0) * u;
        const double res = V * L(i - i0, j) - n;
        acc[b][0] += wq * res * res;
        acc[b][1] += wq * n * n;
        acc[b][2] += wq * u * u;
        if (edge) acc[b][3] += wq * u * u;
      }
    }
  });
  double rr = 0, nn = 0, mass = 0, edge = 0;
  for (const auto& a : acc) {
    rr += a[0];
    nn += a[1];
    mass += a[2];
    edge += a[3];
  }
  FieldDiagnostics d;
  d.residual_abs = std::sqrt(rr);
  d.residual_rel = nn > 0 ? std::sqrt(rr / nn) : d.residual_abs;
  d.mass = mass;
  d.boundary_fraction = mass > 0 ? edge / mass : 0.0;
  return d;
}

inline double pde_residual(const BreatherProblem& prob, const Eigen::MatrixXcd& c) {
  return diagnose(prob, c).residual_rel;
}

struct GroundState {
  Eigen::MatrixXcd c;  // rows: spatial modes, columns: prob.ks()
  SolveReport report;
};

inline void fill_report(const BreatherProblem& prob, const HCoords& hc, const NehariPoint& pt,
                        SolveReport& rep) {
  rep.J = pt.val.J;
  rep.J0 = pt.val.J0;
  rep.J1 = pt.val.J1;
  rep.gamma_int = pt.val.gamma_int;
  rep.h_norm = pt.y.norm();
  rep.h_plus = hc.plus(pt.y).norm();
  rep.h_minus = hc.minus(pt.y).norm();
  rep.dual_norm = pt.G.norm();
  rep.nehari_u = rep.h_norm > 0 ? std::abs(rdot(pt.G, pt.y)) / rep.h_norm : 0.0;
  rep.nehari_minus = hc.minus(pt.G).norm();
  const double ident = (prob.p() - 1.0) / (prob.p() + 1.0) * pt.val.gamma_int;
  rep.nehari_identity_rel = std::abs(rep.J - ident) / std::abs(rep.J);
}

// Ground state on a fixed basis: deterministic start plus opt.n_starts random
// starts, best level kept, phase normalized.
inline GroundState ground_state(const BreatherProblem& prob, const SolveOptions& opt) {
  const HCoords hc(prob);
  const int n = opt.n_starts + 1;
  std::vector<std::optional<OuterResult>> runs(n);
  std::vector<std::string> errors(n);
  parallel_for(std::size_t(n), [&](std::size_t i) {
    try {
      const Eigen::MatrixXcd w0 = i == 0 ? default_seed(prob, hc) : random_seed(prob, hc, opt.seed + i);
      runs[i] = minimize_on_sphere(prob, hc, w0, opt);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  GroundState gs;
  int best = -1;
  for (int i = 0; i < n; ++i) {
    gs.report.start_levels.push_back(runs[i] ? runs[i]->pt.val.J : NAN);
    if (!runs[i]) continue;
    if (best < 0 || runs[i]->pt.val.J < runs[best]->pt.val.J) best = i;
  }
  if (best < 0) throw std::runtime_error("ground_state: all starts failed: " + errors[0]);
  const OuterResult& r = *runs[best];
  gs.report.best_start = best;
  gs.report.converged = r.converged;
  gs.report.outer_iterations = r.iterations;
  gs.report.inner_iterations = r.inner_total;
  gs.report.min_abs_mu = hc.min_abs_mu();
  gs.report.ks = prob.ks();
  gs.report.n_spatial = prob.basis().size();
  gs.report.n_x = prob.grid().x.size();
  gs.report.n_t = prob.grid().nt;
  gs.report.R = prob.basis().R();
  fill_report(prob, hc, r.pt, gs.report);
  gs.c = normalize_phase(hc.to_c(r.pt.y), prob.ks());
  if (!r.converged) gs.report.message = "outer iteration did not reach tolerance";
  return gs;
}

struct BreatherConfig {
  double p = 3;
  double omega = std::numbers::pi / 2;
  int K = 7;
  int m_class = 1;
  double R = 0;            // 0: default_half_width
  double lambda_max = 0;   // spatial cut; at least ((K + 2) omega)^2
  GridOptions grid;
  SolveOptions solve;
};

struct BreatherSolution {
  std::shared_ptr<const BreatherProblem> problem;
  Eigen::MatrixXcd c;
  SolveReport report;
};

inline std::shared_ptr<const BreatherProblem> make_problem(const Potential& pot, const NonlinearityProfile& gamma,
                                                           const BreatherConfig& cfg, double R) {
  const double lmax = std::max(std::pow((cfg.K + 2) * cfg.omega, 2), cfg.lambda_max);
  auto basis = std::make_shared<const SpatialBasis>(pot, R, lmax);
  return std::make_shared<const BreatherProblem>(basis, pot, gamma, cfg.p, cfg.omega,
                                                 mode_set(cfg.K, cfg.m_class), cfg.grid);
}

// Full pipeline: basis, ground state, diagnostics; R grows by four periods
// while the boundary mass exceeds its tolerance.
inline BreatherSolution solve_breather(const Potential& pot, const NonlinearityProfile& gamma,
                                       const BreatherConfig& cfg) {
  double R = cfg.R > 0 ? cfg.R : default_half_width(pot);
  const double X = std::max(pot.left().period(), pot.right().period());
  BreatherSolution sol;
  for (int e = 0;; ++e) {
    sol.problem = make_problem(pot, gamma, cfg, R);
    GroundState gs = ground_state(*sol.problem, cfg.solve);
    const FieldDiagnostics d = diagnose(*sol.problem, gs.c);
    gs.report.pde_residual = d.residual_rel;
    gs.report.pde_residual_abs = d.residual_abs;
    gs.report.boundary_mass = d.boundary_fraction;
    gs.report.enlargements = e;
    sol.c = std::move(gs.c);
    sol.report = std::move(gs.report);
    if (d.boundary_fraction < cfg.solve.boundary_tol || e >= cfg.solve.max_enlarge) break;
    R += 4.0 * X;
  }
  if (sol.report.boundary_mass >= cfg.solve.boundary_tol) sol.report.message += "; boundary mass above tolerance";
  return sol;
}

inline BreatherSolution solve_breather_antiperiodic(const Potential& pot, const NonlinearityProfile& gamma,
                                                    BreatherConfig cfg, int m_class) {
  cfg.m_class = m_class;
  return solve_breather(pot, gamma, cfg);
}

// |a - b|_H for fields on bases sharing the potential, R and omega.
inline double h_distance(const BreatherProblem& pa, const Eigen::MatrixXcd& ca, const BreatherProblem& pb,
                         const Eigen::MatrixXcd& cb) {
  if (pa.omega() != pb.omega() || pa.basis().R() != pb.basis().R())
    throw std::invalid_argument("h_distance: incompatible bases");
  const auto& la = pa.basis().eigenvalues();
  const auto& lb = pb.basis().eigenvalues();
  const std::size_t Mc = std::min(la.size(), lb.size());
  for (std::size_t m = 0; m < Mc; ++m)
    if (std::abs(la[m] - lb[m]) > 1e-9 * std::max(1.0, la[m]))
      throw std::invalid_argument("h_distance: spatial bases differ");
  const double w2 = pa.omega() * pa.omega();
  double sum = 0;
  auto add = [&](const std::vector<double>& lam, const Eigen::MatrixXcd& c, int k, std::size_t col,
                 const Eigen::MatrixXcd* other, std::size_t ocol, std::size_t oM) {
    for (std::size_t m = 0; m < lam.size(); ++m) {
      cplx d = c(m, col);
      if (other && m < oM) d -= (*other)(m, ocol);
      sum += 2.0 * std::abs(lam[m] - k * k * w2) * std::norm(d);
    }
  };
  for (std::size_t i = 0; i < pa.ks().size(); ++i) {
    const int k = pa.ks()[i];
    auto it = std::find(pb.ks().begin(), pb.ks().end(), k);
    if (it == pb.ks().end()) {
      add(la, ca, k, i, nullptr, 0, 0);
    } else {
      const std::size_t j = std::size_t(it - pb.ks().begin());
      add(la, ca, k, i, &cb, j, lb.size());
      for (std::size_t m = la.size(); m < lb.size(); ++m)
        sum += 2.0 * std::abs(lb[m] - k * k * w2) * std::norm(cb(m, j));
    }
  }
  for (std::size_t j = 0; j < pb.ks().size(); ++j) {
    const int k = pb.ks()[j];
    if (std::find(pa.ks().begin(), pa.ks().end(), k) == pa.ks().end()) add(lb, cb, k, j, nullptr, 0, 0);
  }
  return std::sqrt(sum);
}

// u(x_i, t_j) for output, t_j = j T / nt.
inline Eigen::MatrixXd sample_field(const BreatherProblem& prob, const Eigen::MatrixXcd& c,
                                    const std::vector<double>& xs, int nt) {
  Eigen::MatrixXd C(prob.ks().size(), nt), S(prob.ks().size(), nt);
  for (std::size_t k = 0; k < prob.ks().size(); ++k)
    for (int j = 0; j < nt; ++j) {
      const double th = 2.0 * std::numbers::pi * double(prob.ks()[k]) * double(j) / double(nt);
      C(k, j) = std::cos(th);
      S(k, j) = std::sin(th);
    }
  const Eigen::MatrixXd phi = prob.basis().matrix(xs);
  return 2.0 * ((phi * c.real()) * C - (phi * c.imag()) * S);
}

}  // namespace breather

#endif
