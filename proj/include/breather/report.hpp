#ifndef BREATHER_REPORT_HPP
#define BREATHER_REPORT_HPP

#include "assumptions.hpp"
#include "solver.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace breather {

namespace detail {

inline nlohmann::json opt_rational(const std::optional<Rational>& r) {
  return r ? nlohmann::json(to_string(*r)) : nlohmann::json(nullptr);
}

}  // namespace detail

inline nlohmann::json to_json(const MultistepCheck& m) {
  return {{"applicable", m.applicable}, {"pass", m.pass},        {"certified", m.certified},
          {"alpha", detail::opt_rational(m.alpha)}, {"alpha_value", m.alpha_value},
          {"odd_indices", m.odd_indices}, {"multiples", m.multiples}, {"reason", m.reason}};
}

inline nlohmann::json to_json(const AdmissiblePeriods& a) {
  return {{"applicable", a.applicable}, {"pass", a.pass},   {"certified", a.certified},
          {"q", detail::opt_rational(a.q)}, {"q_value", a.q_value}, {"ratios", a.ratios},
          {"odd_count", a.odd_count},   {"alpha", detail::opt_rational(a.alpha)},
          {"alpha_value", a.alpha_value}, {"description", a.description}};
}

inline nlohmann::json to_json(const DislocationCheck& d) {
  return {{"applicable", d.applicable}, {"pass", d.pass},   {"certified", d.certified},
          {"base", to_json(d.base)},    {"q0", d.q0}, {"multiple", d.multiple},
          {"reason", d.reason}};
}

inline nlohmann::json to_json(const InterfaceCheck& c) {
  return {{"applicable", c.applicable}, {"pass", c.pass},
          {"certified", c.certified},   {"left", to_json(c.left)},
          {"right", to_json(c.right)},  {"alpha_plus", c.alpha_plus},
          {"alpha_minus", c.alpha_minus}, {"reason", c.reason}};
}

inline nlohmann::json to_json(const A3Result& a) {
  return {{"pass", a.pass},
          {"omega", a.omega},
          {"T", a.T},
          {"delta", a.delta},
          {"k_at", a.k_at},
          {"offending_interval", {a.lambda_lo, a.lambda_hi}},
          {"per_k", a.per_k},
          {"k_max", a.k_max},
          {"certification", a.certification},
          {"note", a.note}};
}

inline nlohmann::json to_json(const A4Result& a) {
  return {{"pass", a.pass},
          {"verdict", a.verdict},
          {"first_window", a.first_window},
          {"window_counts", a.window_counts}};
}

inline nlohmann::json to_json(const EmbeddingEstimate& e) {
  return {{"pass", e.pass},
          {"s", e.s},
          {"value", e.value},
          {"truncated", e.truncated},
          {"k_tail", e.k_tail},
          {"band_tail", e.band_tail},
          {"value_half_k", e.value_half},
          {"truncation_change", e.truncation_change},
          {"k_max", e.k_max},
          {"finite", e.finite},
          {"reason", e.reason}};
}

inline nlohmann::json to_json(const AssumptionReport& r) {
  nlohmann::json j = {{"all_pass", r.all_pass},
                      {"a1", {{"pass", r.a1_ok}, {"evidence", r.a1_evidence}}},
                      {"a2", {{"pass", r.a2_ok}, {"evidence", r.a2_evidence}}},
                      {"a3", to_json(r.a3)},
                      {"a4", to_json(r.a4)},
                      {"eigenvalues", r.eigenvalues}};
  if (r.multistep) j["multistep"] = to_json(*r.multistep);
  if (r.admissible) j["admissible_T"] = to_json(*r.admissible);
  if (r.dislocation) j["dislocation"] = to_json(*r.dislocation);
  if (r.interface_check) j["interface"] = to_json(*r.interface_check);
  if (r.embedding) j["embedding"] = to_json(*r.embedding);
  return j;
}

inline nlohmann::json to_json(const SolveReport& r) {
  return {{"converged", r.converged},
          {"message", r.message},
          {"J", r.J},
          {"J0", r.J0},
          {"J1", r.J1},
          {"gamma_integral", r.gamma_int},
          {"h_norm", r.h_norm},
          {"h_plus", r.h_plus},
          {"h_minus", r.h_minus},
          {"dual_norm", r.dual_norm},
          {"nehari_u", r.nehari_u},
          {"nehari_minus", r.nehari_minus},
          {"nehari_identity_rel", r.nehari_identity_rel},
          {"pde_residual", r.pde_residual},
          {"pde_residual_abs", r.pde_residual_abs},
          {"boundary_mass", r.boundary_mass},
          {"outer_iterations", r.outer_iterations},
          {"inner_iterations", r.inner_iterations},
          {"start_levels", r.start_levels},
          {"best_start", r.best_start},
          {"R", r.R},
          {"enlargements", r.enlargements},
          {"min_abs_mu", r.min_abs_mu},
          {"n_spatial", r.n_spatial},
          {"n_x", r.n_x},
          {"n_t", r.n_t},
          {"ks", r.ks}};
}

}  // namespace breather

#endif
