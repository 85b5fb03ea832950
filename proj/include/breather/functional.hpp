#ifndef BREATHER_FUNCTIONAL_HPP
#define BREATHER_FUNCTIONAL_HPP

#include "basis.hpp"
#include "potential.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace breather {

// Positive odd multiples of m_class up to K.
inline std::vector<int> mode_set(int K, int m_class = 1) {
  if (m_class < 1 || m_class % 2 == 0) throw std::invalid_argument("mode_set: class must be odd");
  std::vector<int> ks;
  for (int k = m_class; k <= K; k += 2 * m_class) ks.push_back(k);
  if (ks.empty()) throw std::invalid_argument("mode_set: no mode below K");
  return ks;
}

struct GridOptions {
  int gl_order = 6;
  double density = 2.0;  // piece length = density / sqrt(lambda_max V)
  int time_factor = 1;   // N_t = time_factor (4 K + 4)
};

// Tensor quadrature in (x, t): composite Gauss-Legendre in x, uniform in t
// with the normalized time measure.
struct TensorGrid {
  std::vector<double> x, w, gamma, V;
  int nt = 0;
  Eigen::MatrixXd cos_kt, sin_kt;  // modes x time samples

  TensorGrid() = default;
  TensorGrid(const SpatialBasis& basis, const Potential& pot, const NonlinearityProfile* gamma_prof,
             const std::vector<int>& ks, const GridOptions& opt) {
    const double R = basis.R();
    std::vector<std::pair<double, double>> pieces =
        gamma_prof ? gamma_prof->pieces(-R, R) : std::vector<std::pair<double, double>>{{-R, R}};
    std::vector<double> cuts;
    for (const auto& s : basis.segments()) cuts.push_back(s.x0);
    if (gamma_prof)
      for (const auto& [a, b] : gamma_prof->pieces(-R, R)) {
        cuts.push_back(a);
        cuts.push_back(b);
      }
    const double lmax = basis.lambda_max();
    auto hmax = [&](double x) { return opt.density / std::sqrt(lmax * pot(x)); };
    for (const auto& q : composite_nodes(pieces, cuts, opt.gl_order, hmax)) {
      x.push_back(q.x);
      w.push_back(q.w);
      gamma.push_back(gamma_prof ? (*gamma_prof)(q.x) : 0.0);
      V.push_back(pot(q.x));
    }
    const int K = *std::max_element(ks.begin(), ks.end());
    nt = opt.time_factor * (4 * K + 4);
    cos_kt.resize(ks.size(), nt);
    sin_kt.resize(ks.size(), nt);
    for (std::size_t k = 0; k < ks.size(); ++k)
      for (int j = 0; j < nt; ++j) {
        const double th = 2.0 * std::numbers::pi * double(ks[k]) * double(j) / double(nt);
        cos_kt(k, j) = std::cos(th);
        sin_kt(k, j) = std::sin(th);
      }
  }
};

// u(x, t) = 2 Re sum_k uhat_k(x) e^{i k w t}, uhat_k = sum_m c_{m,k} phi_m.
// J = J0 - J1, J0 = 2 sum (lambda_m - k^2 w^2)|c|^2,
// J1 = 2/(p+1) int Gamma |u|^{p+1} dx dt.
class BreatherProblem {
 public:
  struct Value {
    double J = 0, J0 = 0, J1 = 0;
    double gamma_int = 0;  // int Gamma |u|^{p+1}
  };

  BreatherProblem(std::shared_ptr<const SpatialBasis> basis, const Potential& pot,
                  NonlinearityProfile gamma, double p, double omega, std::vector<int> ks,
                  GridOptions grid = {})
      : basis_(std::move(basis)), pot_(pot), gamma_(std::move(gamma)), p_(p), omega_(omega),
        ks_(std::move(ks)), grid_opt_(grid) {
    if (!(p_ > 1)) throw std::domain_error("BreatherProblem: p must exceed 1");
    if (!(omega_ > 0)) throw std::invalid_argument("BreatherProblem: omega must be positive");
    const std::size_t M = basis_->size();
    mu_.resize(M, ks_.size());
    for (std::size_t k = 0; k < ks_.size(); ++k)
      for (std::size_t m = 0; m < M; ++m)
        mu_(m, k) = basis_->eigenvalues()[m] - std::pow(ks_[k] * omega_, 2);
    grid_ = TensorGrid(*basis_, pot_, &gamma_, ks_, grid);
    phi_ = basis_->matrix(grid_.x);
    phiw_ = phi_;
    for (std::size_t i = 0; i < grid_.x.size(); ++i) phiw_.row(i) *= grid_.w[i];
  }

  const SpatialBasis& basis() const { return *basis_; }
  std::shared_ptr<const SpatialBasis> basis_ptr() const { return basis_; }
  const Potential& potential() const { return pot_; }
  const NonlinearityProfile& gamma() const { return gamma_; }
  double p() const { return p_; }
  double omega() const { return omega_; }
  const std::vector<int>& ks() const { return ks_; }
  const GridOptions& grid_options() const { return grid_opt_; }
  const TensorGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& mu() const { return mu_; }
  Eigen::Index rows() const { return mu_.rows(); }
  Eigen::Index cols() const { return mu_.cols(); }

  Eigen::MatrixXcd zero() const { return Eigen::MatrixXcd::Zero(rows(), cols()); }

  double J0(const Eigen::MatrixXcd& c) const { return 2.0 * (mu_.array() * c.array().abs2()).sum(); }

  double h_norm_sq(const Eigen::MatrixXcd& c) const {
    return 2.0 * (mu_.array().abs() * c.array().abs2()).sum();
  }

  // u at the grid nodes, rows x, columns t.
  Eigen::MatrixXd synthesize(const Eigen::MatrixXcd& c) const {
    // one pass over phi for both parts
    const Eigen::Index nk = cols();
    Eigen::MatrixXd ri(rows(), 2 * nk);
    ri.leftCols(nk) = c.real();
    ri.rightCols(nk) = c.imag();
    const Eigen::MatrixXd a = phi_ * ri;
    return 2.0 * (a.leftCols(nk) * grid_.cos_kt - a.rightCols(nk) * grid_.sin_kt);
  }

  Value value(const Eigen::MatrixXcd& c) const { return evaluate(c, nullptr); }

  // Value and F_{m,k} = int Gamma |u|^{p-1} u phi_m e^{-i k w t}.
  Value evaluate(const Eigen::MatrixXcd& c, Eigen::MatrixXcd* force) const {
    Value v;
    v.J0 = J0(c);
    const Eigen::MatrixXd U = synthesize(c);
    Eigen::MatrixXd N(U.rows(), U.cols());
    double g = 0;
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
      double row = 0;
      const double gm = grid_.gamma[i];
      for (Eigen::Index j = 0; j < U.cols(); ++j) {
        const double u = U(i, j), a = std::abs(u);
        const double ap = a == 0 ? 0.0 : std::pow(a, p_ - 1.0);
        N(i, j) = gm * ap * u;
        row += ap * a * a;
      }
      g += grid_.w[i] * gm * row;
    }
    v.gamma_int = g / grid_.nt;
    v.J1 = 2.0 / (p_ + 1.0) * v.gamma_int;
    v.J = v.J0 - v.J1;
    if (force) {
      const Eigen::Index nk = cols();
      Eigen::MatrixXd g(N.rows(), 2 * nk);
      g.leftCols(nk) = N * grid_.cos_kt.transpose() / double(grid_.nt);
      g.rightCols(nk) = -(N * grid_.sin_kt.transpose()) / double(grid_.nt);
      const Eigen::MatrixXd f = phiw_.transpose() * g;
      force->resize(rows(), nk);
      force->real() = f.leftCols(nk);
      force->imag() = f.rightCols(nk);
    }
    return v;
  }

  // dJ/d(conj c) = 2 mu c - 2 F; J'(u)[d] = 2 Re sum conj(W) d.
  Eigen::MatrixXcd gradient(const Eigen::MatrixXcd& c, Value* val = nullptr) const {
    Eigen::MatrixXcd F;
    const Value v = evaluate(c, &F);
    if (val) *val = v;
    return 2.0 * (mu_.array() * c.array()).matrix() - 2.0 * F;
  }

  static double directional(const Eigen::MatrixXcd& W, const Eigen::MatrixXcd& d) {
    return 2.0 * (W.conjugate().array() * d.array()).real().sum();
  }

 private:
  std::shared_ptr<const SpatialBasis> basis_;
  Potential pot_;
  NonlinearityProfile gamma_;
  double p_, omega_;
  std::vector<int> ks_;
  GridOptions grid_opt_;
  Eigen::MatrixXd mu_;
  TensorGrid grid_;
  Eigen::MatrixXd phi_, phiw_;
};

}  // namespace breather

#endif
