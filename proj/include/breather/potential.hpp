#ifndef BREATHER_POTENTIAL_HPP
#define BREATHER_POTENTIAL_HPP

#include "core/exact.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace breather {

struct InvalidProfile : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Cell {
  double length = 0;
  double value = 0;
  std::optional<Rational> exact_length;
  std::optional<Rational> exact_value;

  // q = sqrt(value) * length, exact when value is a rational square.
  double q() const { return std::sqrt(value) * length; }
  std::optional<Rational> exact_q() const {
    if (!exact_length || !exact_value) return std::nullopt;
    auto r = rational_sqrt(*exact_value);
    if (!r) return std::nullopt;
    return *r * *exact_length;
  }
};

// One period of a step profile: consecutive cells starting at offset 0.
class StepProfile {
 public:
  StepProfile() = default;

  explicit StepProfile(std::vector<Cell> cells) : cells_(std::move(cells)) {
    if (cells_.empty()) throw InvalidProfile("step profile has no cells");
    starts_.reserve(cells_.size() + 1);
    double x = 0;
    std::optional<Rational> ex = Rational(0);
    for (const auto& c : cells_) {
      if (!(c.value > 0) || !std::isfinite(c.value))
        throw InvalidProfile("cell value must be positive and finite");
      if (!(c.length > 0) || !std::isfinite(c.length))
        throw InvalidProfile("cell length must be positive");
      starts_.push_back(x);
      x += c.length;
      if (ex && c.exact_length)
        *ex += *c.exact_length;
      else
        ex.reset();
    }
    starts_.push_back(x);
    period_ = x;
    exact_period_ = ex;
  }

  // steps: (fraction of X, value). Fractions must sum to 1.
  static StepProfile from_fractions(const std::vector<std::pair<ExactNumber, ExactNumber>>& steps,
                                    const ExactNumber& X) {
    if (steps.empty()) throw InvalidProfile("no steps");
    if (!(X.value > 0)) throw InvalidProfile("period must be positive");
    bool all_exact = X.is_exact();
    double sum = 0;
    Rational esum(0);
    std::vector<Cell> cells;
    for (const auto& [frac, val] : steps) {
      if (!(frac.value > 0)) throw InvalidProfile("zero-length cell");
      if (!(val.value > 0)) throw InvalidProfile("nonpositive value");
      sum += frac.value;
      if (frac.is_exact())
        esum += *frac.exact;
      else
        all_exact = false;
      Cell c;
      c.length = frac.value * X.value;
      c.value = val.value;
      if (frac.is_exact() && X.is_exact()) {
        c.exact_length = *frac.exact * *X.exact;
        c.length = to_double(*c.exact_length);
      }
      c.exact_value = val.exact;
      cells.push_back(c);
    }
    if (all_exact) {
      if (esum != Rational(1)) throw InvalidProfile("fractions do not sum to 1");
    } else if (std::abs(sum - 1.0) > 1e-12) {
      throw InvalidProfile("fractions do not sum to 1");
    }
    StepProfile p(std::move(cells));
    // force the period to X exactly so that tails replicate bit-exactly
    p.period_ = X.value;
    p.starts_.back() = X.value;
    if (X.is_exact()) p.exact_period_ = X.exact;
    return p;
  }

  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  double period() const { return period_; }
  const std::optional<Rational>& exact_period() const { return exact_period_; }
  double start(std::size_t i) const { return starts_[i]; }
  double end(std::size_t i) const { return starts_[i + 1]; }

  // Cell index containing y in [0, period).
  std::size_t locate(double y) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end() - 1, y);
    std::size_t i = std::size_t(it - starts_.begin());
    return i == 0 ? 0 : std::min(i - 1, cells_.size() - 1);
  }

  double at(double y) const { return cells_[locate(y)].value; }

  double sup() const {
    double m = 0;
    for (const auto& c : cells_) m = std::max(m, c.value);
    return m;
  }
  double inf() const {
    double m = cells_.front().value;
    for (const auto& c : cells_) m = std::min(m, c.value);
    return m;
  }

  bool operator==(const StepProfile& o) const {
    if (cells_.size() != o.cells_.size() || period_ != o.period_) return false;
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i].length != o.cells_[i].length || cells_[i].value != o.cells_[i].value)
        return false;
    return true;
  }

 private:
  std::vector<Cell> cells_;
  std::vector<double> starts_;
  double period_ = 0;
  std::optional<Rational> exact_period_;
};

enum class PotentialKind { periodic, dislocation, interface, general };

inline const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::periodic: return "periodic";
    case PotentialKind::dislocation: return "dislocation";
    case PotentialKind::interface: return "interface";
    default: return "general";
  }
}

// Constant piece [x0, x1) with value V.
struct Segment {
  double x0, x1, value;
  double length() const { return x1 - x0; }
};

// V(x) = left tail for x < R-, core on [R-, R+), right tail for x >= R+.
// The right tail repeats its profile from R+, the left tail ends at R-.
class PerturbedPeriodicPotential {
 public:
  PerturbedPeriodicPotential(StepProfile left, std::vector<Cell> core, StepProfile right,
                             double r_minus, PotentialKind kind = PotentialKind::general)
      : left_(std::move(left)), right_(std::move(right)), core_(std::move(core)),
        r_minus_(r_minus), kind_(kind) {
    core_starts_.push_back(r_minus_);
    double x = r_minus_;
    for (const auto& c : core_) {
      if (!(c.value > 0) || !(c.length > 0)) throw InvalidProfile("invalid core cell");
      x += c.length;
      core_starts_.push_back(x);
    }
    r_plus_ = x;
  }

  const StepProfile& left() const { return left_; }
  const StepProfile& right() const { return right_; }
  const std::vector<Cell>& core() const { return core_; }
  double r_minus() const { return r_minus_; }
  double r_plus() const { return r_plus_; }
  PotentialKind kind() const { return kind_; }
  const StepProfile& tail(bool plus) const { return plus ? right_ : left_; }

  bool purely_periodic() const { return core_.empty() && left_ == right_; }

  double operator()(double x) const {
    if (x >= r_plus_) {
      const double X = right_.period();
      const double n = std::floor((x - r_plus_) / X);
      return right_.at(std::clamp(x - r_plus_ - n * X, 0.0, std::nextafter(X, 0.0)));
    }
    if (x < r_minus_) {
      const double X = left_.period();
      const double n = std::floor((x - r_minus_) / X);
      return left_.at(std::clamp(x - r_minus_ - n * X, 0.0, std::nextafter(X, 0.0)));
    }
    auto it = std::upper_bound(core_starts_.begin(), core_starts_.end() - 1, x);
    const std::size_t i = std::size_t(it - core_starts_.begin()) - 1;
    return core_[std::min(i, core_.size() - 1)].value;
  }

  double sup() const {
    double m = std::max(left_.sup(), right_.sup());
    for (const auto& c : core_) m = std::max(m, c.value);
    return m;
  }
  double inf() const {
    double m = std::min(left_.inf(), right_.inf());
    for (const auto& c : core_) m = std::min(m, c.value);
    return m;
  }

  // Constant pieces covering [x0, x1), x0 < x1, walked with integer cell
  // counters so that consecutive pieces share endpoints exactly.
  std::vector<Segment> segments(double x0, double x1) const {
    std::vector<Segment> out;
    if (!(x1 > x0)) return out;
    double x = x0;
    // left tail
    if (x < r_minus_) {
      const double X = left_.period();
      double n = std::floor((x - r_minus_) / X);
      double base = r_minus_ + n * X;
      std::size_t i = left_.locate(std::max(0.0, x - base));
      while (x < x1 && x < r_minus_) {
        double e = (i + 1 == left_.size()) ? r_minus_ + (n + 1) * X : base + left_.end(i);
        e = std::min({e, x1, r_minus_});
        if (e > x) out.push_back({x, e, left_.cells()[i].value});
        x = e;
        if (++i == left_.size()) {
          i = 0;
          n += 1;
          base = r_minus_ + n * X;
        }
      }
    }
    // core
    if (x < x1 && x < r_plus_) {
      for (std::size_t i = 0; i < core_.size() && x < x1; ++i) {
        const double e = std::min(core_starts_[i + 1], x1);
        if (e > x && core_starts_[i] <= x) {
          out.push_back({x, e, core_[i].value});
          x = e;
        }
      }
    }
    // right tail
    if (x < x1) {
      const double X = right_.period();
      double n = std::floor((x - r_plus_) / X);
      if (n < 0) n = 0;
      double base = r_plus_ + n * X;
      std::size_t i = right_.locate(std::max(0.0, x - base));
      while (x < x1) {
        double e = (i + 1 == right_.size()) ? r_plus_ + (n + 1) * X : base + right_.end(i);
        e = std::min(e, x1);
        if (e > x) out.push_back({x, e, right_.cells()[i].value});
        x = e;
        if (++i == right_.size()) {
          i = 0;
          n += 1;
          base = r_plus_ + n * X;
        }
      }
    }
    return out;
  }

  // Jump positions in (x0, x1) with their signed jump sizes.
  std::vector<std::pair<double, double>> jumps(double x0, double x1) const {
    std::vector<std::pair<double, double>> out;
    const auto segs = segments(x0, x1);
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].value != segs[i - 1].value)
        out.emplace_back(segs[i].x0, segs[i].value - segs[i - 1].value);
    return out;
  }

  double total_variation(double x0, double x1) const {
    double tv = 0;
    for (const auto& j : jumps(x0, x1)) tv += std::abs(j.second);
    return tv;
  }

 private:
  StepProfile left_, right_;
  std::vector<Cell> core_;
  std::vector<double> core_starts_;
  double r_minus_ = 0, r_plus_ = 0;
  PotentialKind kind_;
};

using Potential = PerturbedPeriodicPotential;

inline Potential make_periodic(const StepProfile& profile) {
  return Potential(profile, {}, profile, 0.0, PotentialKind::periodic);
}

inline Potential make_periodic(const std::vector<std::pair<ExactNumber, ExactNumber>>& steps,
                               const ExactNumber& X) {
  return make_periodic(StepProfile::from_fractions(steps, X));
}

inline Potential make_dislocation(const Potential& base, const ExactNumber& V0,
                                  const ExactNumber& d) {
  if (!base.purely_periodic()) throw InvalidProfile("dislocation base must be purely periodic");
  if (!(V0.value > 0)) throw InvalidProfile("V0 must be positive");
  if (!(d.value > 0)) throw InvalidProfile("d must be positive");
  Cell c;
  c.length = d.value;
  c.value = V0.value;
  c.exact_length = d.exact;
  c.exact_value = V0.exact;
  return Potential(base.left(), {c}, base.right(), 0.0, PotentialKind::dislocation);
}

inline Potential make_interface(const Potential& left, const Potential& right) {
  if (!left.purely_periodic() || !right.purely_periodic())
    throw InvalidProfile("interface halves must be purely periodic");
  return Potential(left.left(), {}, right.right(), 0.0, PotentialKind::interface);
}

// Smooth bump A*exp(1 - 1/(1 - s^2)), s = (x - center)/half_width, |s| < 1.
struct Bump {
  double center = 0, half_width = 1, amplitude = 1;
  double operator()(double x) const {
    const double s = (x - center) / half_width;
    if (std::abs(s) >= 1) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
  }
};

struct LocalStep {
  double from = 0, to = 0, value = 0;
};

enum class GammaMode { compact, asymptotically_periodic };

// Gamma = periodic part (asymptotically-periodic mode only) + localized steps and bumps.
class NonlinearityProfile {
 public:
  NonlinearityProfile() = default;
  NonlinearityProfile(GammaMode mode, std::optional<StepProfile> periodic,
                      std::vector<LocalStep> steps, std::vector<Bump> bumps)
      : mode_(mode), periodic_(std::move(periodic)), steps_(std::move(steps)),
        bumps_(std::move(bumps)) {
    if (mode_ == GammaMode::asymptotically_periodic && !periodic_)
      throw InvalidProfile("asymptotically-periodic gamma needs a periodic part");
    if (mode_ == GammaMode::compact && periodic_)
      throw InvalidProfile("compact gamma cannot have a periodic part");
    for (const auto& s : steps_)
      if (!(s.to > s.from) || !(s.value >= 0)) throw InvalidProfile("invalid gamma step");
    for (const auto& b : bumps_)
      if (!(b.half_width > 0) || !(b.amplitude >= 0)) throw InvalidProfile("invalid gamma bump");
    if (mode_ == GammaMode::compact && support_hull().second <= support_hull().first)
      throw InvalidProfile("gamma vanishes identically");
  }

  static NonlinearityProfile bump(double center, double half_width, double amplitude = 1.0) {
    return NonlinearityProfile(GammaMode::compact, std::nullopt, {},
                               {Bump{center, half_width, amplitude}});
  }

  GammaMode mode() const { return mode_; }
  const std::optional<StepProfile>& periodic() const { return periodic_; }
  const std::vector<LocalStep>& steps() const { return steps_; }
  const std::vector<Bump>& bumps() const { return bumps_; }

  double operator()(double x) const {
    double g = 0;
    if (periodic_) {
      const double X = periodic_->period();
      const double n = std::floor(x / X);
      g += periodic_->at(std::clamp(x - n * X, 0.0, std::nextafter(X, 0.0)));
    }
    for (const auto& s : steps_)
      if (x >= s.from && x < s.to) g += s.value;
    for (const auto& b : bumps_) g += b(x);
    return g;
  }

  // Gamma scaled by a constant factor.
  NonlinearityProfile scaled(double f) const {
    NonlinearityProfile r = *this;
    if (r.periodic_) {
      std::vector<Cell> cells = r.periodic_->cells();
      for (auto& c : cells) {
        c.value *= f;
        c.exact_value.reset();
      }
      r.periodic_ = StepProfile(cells);
    }
    for (auto& s : r.steps_) s.value *= f;
    for (auto& b : r.bumps_) b.amplitude *= f;
    return r;
  }

  // Smallest interval containing the localized support (compact mode).
  std::pair<double, double> support_hull() const {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : steps_)
      if (s.value > 0) {
        lo = std::min(lo, s.from);
        hi = std::max(hi, s.to);
      }
    for (const auto& b : bumps_)
      if (b.amplitude > 0) {
        lo = std::min(lo, b.center - b.half_width);
        hi = std::max(hi, b.center + b.half_width);
      }
    return {lo, hi};
  }

  // Disjoint pieces of [a, b] on which Gamma may be nonzero, split at every
  // point where Gamma is not smooth.
  std::vector<std::pair<double, double>> pieces(double a, double b) const {
    std::vector<double> cuts{a, b};
    std::vector<std::pair<double, double>> active;
    if (periodic_) {
      active.emplace_back(a, b);
      const double X = periodic_->period();
      for (double n = std::floor(a / X); n * X < b; n += 1)
        for (std::size_t i = 0; i < periodic_->size(); ++i) cuts.push_back(n * X + periodic_->start(i));
    }
    for (const auto& s : steps_) {
      active.emplace_back(s.from, s.to);
      cuts.push_back(s.from);
      cuts.push_back(s.to);
    }
    for (const auto& bp : bumps_) {
      active.emplace_back(bp.center - bp.half_width, bp.center + bp.half_width);
      cuts.push_back(bp.center - bp.half_width);
      cuts.push_back(bp.center + bp.half_width);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = std::max(cuts[i], a), hi = std::min(cuts[i + 1], b);
      if (!(hi > lo)) continue;
      const double mid = 0.5 * (lo + hi);
      bool on = false;
      for (const auto& [p, q] : active) on = on || (mid > p && mid < q);
      if (on) out.emplace_back(lo, hi);
    }
    return out;
  }

 private:
  GammaMode mode_ = GammaMode::compact;
  std::optional<StepProfile> periodic_;
  std::vector<LocalStep> steps_;
  std::vector<Bump> bumps_;
};

}  // namespace breather

#endif
