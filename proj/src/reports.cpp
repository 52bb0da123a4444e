#include "driftlab/reports.hpp"

#include <cstdio>

#include "json.hpp"

namespace driftlab {

using ordered_json = nlohmann::ordered_json;

namespace {

// Short label for header text (not for data cells).
std::string label_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

// Free-text cells (kind/params echoes) must stay comma-free.
std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',') c = ';';
  return s;
}

// Trails as one cell: "key:value" pairs joined by ';'.
template <class K>
std::string trail_cell(const std::vector<std::pair<K, double>>& trail) {
  std::string out;
  for (std::size_t i = 0; i < trail.size(); ++i) {
    if (i) out += ';';
    if constexpr (std::is_same_v<K, int>)
      out += std::to_string(trail[i].first);
    else
      out += format_real(trail[i].first);
    out += ':';
    out += format_real(trail[i].second);
  }
  return out;
}

ordered_json params_json(const BarrierParams& p) {
  return ordered_json{{"n", p.n},
                      {"mu", p.mu},
                      {"eps", p.eps},
                      {"K", p.K},
                      {"p_target", p.p_target}};
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

// ------------------------------------------------------------------ norms

std::string norm_reports_csv(const std::vector<NormReport>& rows) {
  std::string out = csv_line({"kind", "params", "value", "diverging",
                              "inner_cutoff", "refine_trail", "delta_trail"});
  for (const NormReport& r : rows)
    out += csv_line({sanitize(r.kind), sanitize(r.params), format_real(r.value),
                     format_bool(r.diverging), format_real(r.inner_cutoff),
                     trail_cell(r.refine_trail), trail_cell(r.delta_trail)});
  return out;
}

std::string norm_report_json(const NormReport& r) {
  ordered_json j{{"kind", r.kind},
                 {"params", r.params},
                 {"value", r.value},
                 {"diverging", r.diverging},
                 {"inner_cutoff", r.inner_cutoff}};
  ordered_json rt = ordered_json::array();
  for (const auto& [cells, v] : r.refine_trail)
    rt.push_back(ordered_json{{"cells", cells}, {"value", v}});
  ordered_json dt = ordered_json::array();
  for (const auto& [delta, v] : r.delta_trail)
    dt.push_back(ordered_json{{"delta", delta}, {"value", v}});
  j["refine_trail"] = std::move(rt);
  j["delta_trail"] = std::move(dt);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- barrier

BarrierReport make_barrier_report(const BarrierParams& params, int f_count,
                                  int samples) {
  BarrierReport r;
  r.params = params;
  r.f_check = check_f_properties(params, f_count);
  r.inequality = check_barrier_inequality(params, samples);
  r.envelope_constant = envelope_ratio(params, 200);
  r.pass = r.f_check.pass && r.inequality.min_value > 0.0;
  return r;
}

std::string barrier_report_json(const BarrierReport& r) {
  const DerivedConstants& c = r.params.consts;
  ordered_json j;
  j["params"] = params_json(r.params);
  j["constants"] = ordered_json{{"d_mu", c.d_mu},
                                {"c1", c.c1},
                                {"c2", c.c2},
                                {"c3", c.c3},
                                {"K_min", c.K_min}};
  j["f_check"] = ordered_json{
      {"min_f", r.f_check.min_f},
      {"min_fprime", r.f_check.min_fprime},
      {"f_at_eps", r.f_check.f_at_eps},
      {"f_at_2eps", r.f_check.f_at_2eps},
      {"f_at_one", r.f_check.f_at_one},
      {"min_growth_margin", r.f_check.min_growth_margin},
      {"min_damping_margin", r.f_check.min_damping_margin},
      {"seam_growth_lo", r.f_check.seam_growth_lo},
      {"seam_growth_hi", r.f_check.seam_growth_hi},
      {"seam_damping_lo", r.f_check.seam_damping_lo},
      {"seam_damping_hi", r.f_check.seam_damping_hi},
      {"points", r.f_check.points},
      {"pass", r.f_check.pass}};
  j["inequality"] = ordered_json{{"min_value", r.inequality.min_value},
                                 {"argmin_rho", r.inequality.argmin_rho},
                                 {"argmin_z", r.inequality.argmin_z},
                                 {"min_inner", r.inequality.min_inner},
                                 {"min_outer", r.inequality.min_outer},
                                 {"samples", r.inequality.samples}};
  j["envelope_constant"] = r.envelope_constant;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

std::string barrier_reports_csv(const std::vector<BarrierReport>& rows) {
  std::string out = csv_line(
      {"n", "mu", "eps", "K", "p_target", "d_mu", "c1", "K_min", "f_pass",
       "f_at_2eps", "min_growth_margin", "min_damping_margin", "barrier_min",
       "argmin_rho", "argmin_z", "min_inner", "min_outer", "samples",
       "envelope_constant", "pass"});
  for (const BarrierReport& r : rows) {
    const DerivedConstants& c = r.params.consts;
    out += csv_line(
        {std::to_string(r.params.n), format_real(r.params.mu),
         format_real(r.params.eps), format_real(r.params.K),
         format_real(r.params.p_target), format_real(c.d_mu), format_real(c.c1),
         format_real(c.K_min), format_bool(r.f_check.pass),
         format_real(r.f_check.f_at_2eps),
         format_real(r.f_check.min_growth_margin),
         format_real(r.f_check.min_damping_margin),
         format_real(r.inequality.min_value),
         format_real(r.inequality.argmin_rho),
         format_real(r.inequality.argmin_z),
         format_real(r.inequality.min_inner),
         format_real(r.inequality.min_outer),
         std::to_string(r.inequality.samples),
         format_real(r.envelope_constant), format_bool(r.pass)});
  }
  return out;
}

// ----------------------------------------------------------------- solver

static ordered_json solve_report_body(const SolveReport& r) {
  ordered_json j{{"iterations", r.iterations},
                 {"residual", r.residual},
                 {"rows_central", r.rows_central},
                 {"rows_upwind", r.rows_upwind},
                 {"rows_upwind_rho", r.rows_upwind_rho},
                 {"rows_upwind_z", r.rows_upwind_z},
                 {"u_min", r.u_min},
                 {"u_max", r.u_max},
                 {"max_principle_pass", r.max_principle_pass},
                 {"grad_l2_half_ball", r.grad_l2_half_ball},
                 {"drift_l1", r.drift_l1},
                 {"gradient_bound_ratio", r.gradient_bound_ratio},
                 {"barrier_min_margin", r.barrier_min_margin},
                 {"barrier_nodes", r.barrier_nodes}};
  ordered_json cf = ordered_json::array();
  for (double f : r.contraction_factors) cf.push_back(f);
  j["contraction_factors"] = std::move(cf);
  ordered_json ap = ordered_json::array();
  for (const auto& [z, u] : r.axis_profile)
    ap.push_back(ordered_json::array({z, u}));
  j["axis_profile"] = std::move(ap);
  return j;
}

std::string solve_report_json(const SolveReport& r) {
  return solve_report_body(r).dump(2) + "\n";
}

std::string solve_reports_csv(const std::vector<SolveReport>& rows) {
  std::string out = csv_line(
      {"iterations", "residual", "rows_central", "rows_upwind",
       "rows_upwind_rho", "rows_upwind_z", "u_min", "u_max",
       "max_principle_pass", "grad_l2_half_ball", "drift_l1",
       "gradient_bound_ratio", "barrier_min_margin", "barrier_nodes"});
  for (const SolveReport& r : rows)
    out += csv_line(
        {std::to_string(r.iterations), format_real(r.residual),
         std::to_string(r.rows_central), std::to_string(r.rows_upwind),
         std::to_string(r.rows_upwind_rho), std::to_string(r.rows_upwind_z),
         format_real(r.u_min), format_real(r.u_max),
         format_bool(r.max_principle_pass), format_real(r.grad_l2_half_ball),
         format_real(r.drift_l1), format_real(r.gradient_bound_ratio),
         format_real(r.barrier_min_margin),
         std::to_string(r.barrier_nodes)});
  return out;
}

std::string axis_profile_csv(
    const std::vector<std::pair<double, double>>& profile) {
  std::string out = csv_line({"z", "u"});
  for (const auto& [z, u] : profile)
    out += csv_line({format_real(z), format_real(u)});
  return out;
}

// ------------------------------------------------------------------ sweep

std::string sweep_rows_csv(const std::vector<SweepRow>& rows) {
  if (rows.empty()) return csv_line({"eps", "cells"});
  std::vector<std::string> header = {"eps", "cells", "origin_value",
                                     "floor_at_2eps"};
  for (double z : rows.front().probe_heights)
    header.push_back("u_z" + label_real(z));
  for (double z : rows.front().probe_heights)
    header.push_back("delta_z" + label_real(z));
  header.insert(header.end(),
                {"drift_lp", "drift_l1", "grad_l2_half_ball",
                 "gradient_bound_ratio", "max_principle_pass"});
  std::string out = csv_line(header);
  for (const SweepRow& r : rows) {
    std::vector<std::string> cells = {format_real(r.eps),
                                      std::to_string(r.cells),
                                      format_real(r.origin_value),
                                      format_real(r.floor_at_2eps)};
    for (double v : r.axis_values) cells.push_back(format_real(v));
    for (std::size_t q = 0; q < r.probe_heights.size(); ++q)
      cells.push_back(q < r.deltas_from_prev.size()
                          ? format_real(r.deltas_from_prev[q])
                          : "");
    cells.insert(cells.end(),
                 {format_real(r.drift_lp), format_real(r.drift_l1),
                  format_real(r.grad_l2_half_ball),
                  format_real(r.gradient_bound_ratio),
                  format_bool(r.max_principle_pass)});
    out += csv_line(cells);
  }
  return out;
}

std::string sweep_rows_json(const std::vector<SweepRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const SweepRow& r : rows) {
    ordered_json j{{"eps", r.eps},
                   {"cells", r.cells},
                   {"origin_value", r.origin_value},
                   {"floor_at_2eps", r.floor_at_2eps},
                   {"probe_heights", r.probe_heights},
                   {"axis_values", r.axis_values},
                   {"deltas_from_prev", r.deltas_from_prev},
                   {"drift_lp", r.drift_lp},
                   {"drift_l1", r.drift_l1},
                   {"grad_l2_half_ball", r.grad_l2_half_ball},
                   {"gradient_bound_ratio", r.gradient_bound_ratio},
                   {"max_principle_pass", r.max_principle_pass}};
    ordered_json ap = ordered_json::array();
    for (const auto& [z, u] : r.axis_profile)
      ap.push_back(ordered_json::array({z, u}));
    j["axis_profile"] = std::move(ap);
    arr.push_back(std::move(j));
  }
  ordered_json top{{"rows", std::move(arr)}};
  return top.dump(2) + "\n";
}

}  // namespace driftlab
