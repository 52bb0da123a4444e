#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "driftlab/barrier.hpp"
#include "driftlab/reports.hpp"
#include "driftlab/solver.hpp"
#include "json.hpp"

using namespace driftlab;
using nlohmann::json;

// ============================================================================
// Serialization checks: the CSV dialect (comma, '.', header row, LF,
// round-trip reals), JSON shape, and byte-identical reruns.
// ============================================================================

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

NormReport sample_norm_report() {
  NormReport r;
  r.kind = "lp";
  r.params = "p=2, ball";  // the comma must not survive into the CSV
  r.value = 1.0 / 3.0;
  r.diverging = false;
  r.inner_cutoff = 0.0;
  r.refine_trail = {{64, 0.333}, {128, 0.3333}};
  r.delta_trail = {{1e-2, 0.33}, {1e-3, 0.333}};
  return r;
}

}  // namespace

TEST_CASE("real formatting round-trips through seventeen digits") {
  const double xs[] = {0.0,    -0.0,       0.1,     1.0 / 3.0, 6.02214076e23,
                       1e-300, -2.5e-308,  1.25,    -1.0,      3.141592653589793,
                       1e308,  4.9406564584124654e-324};
  for (double x : xs) {
    std::string s = format_real(x);
    CHECK(s.find(',') == std::string::npos);
    double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == x);
  }
  // a decimal point, never a locale-dependent separator
  CHECK(format_real(0.5) == "0.5");
}

TEST_CASE("csv lines join cells with commas and end in a linefeed") {
  std::string line = csv_line({"a", "b", "c"});
  CHECK(line == "a,b,c\n");
  CHECK(csv_line({}) == "\n");
  CHECK(csv_line({"only"}) == "only\n");
}

TEST_CASE("norm reports serialize to a header plus one row each") {
  NormReport r = sample_norm_report();
  std::string csv = norm_reports_csv({r, r});
  auto lines = split_lines(csv);
  REQUIRE(lines.size() == 3);
  auto header = split_cells(lines[0]);
  CHECK(header.front() == "kind");
  for (int k = 1; k <= 2; ++k) {
    auto cells = split_cells(lines[k]);
    REQUIRE(cells.size() == header.size());
    CHECK(cells[0] == "lp");
    // free-text cells were sanitized, so the column count stayed fixed
    CHECK(cells[1].find(',') == std::string::npos);
    CHECK(std::strtod(cells[2].c_str(), nullptr) == r.value);
  }
  CHECK(csv.back() == '\n');

  json j = json::parse(norm_report_json(r));
  CHECK(j.is_object());
  CHECK(j["kind"] == "lp");
  CHECK(j["value"].get<double>() == r.value);
  CHECK(j["diverging"] == false);
  REQUIRE(j["refine_trail"].size() == 2);
  CHECK(j["refine_trail"][1]["cells"] == 128);
  CHECK(j["delta_trail"][0]["delta"].get<double>() == 1e-2);
}

TEST_CASE("barrier report carries constants and passes at the defaults") {
  BarrierParams params = BarrierParams::defaults(0.05);
  BarrierReport r = make_barrier_report(params, 2000, 4000);
  CHECK(r.pass);
  CHECK(r.f_check.pass);
  CHECK(r.inequality.min_value > 0.0);
  CHECK(r.envelope_constant > 0.0);

  json j = json::parse(barrier_report_json(r));
  CHECK(j.is_object());
  CHECK(j["params"]["n"] == 3);
  CHECK(j["params"]["mu"].get<double>() == doctest::Approx(1.25));
  CHECK(j["constants"]["d_mu"].get<double>() ==
        doctest::Approx(18.439123525412576).epsilon(1e-12));
  CHECK(j["constants"]["c1"].get<double>() ==
        doctest::Approx(0.0090387521097176175).epsilon(1e-9));
  CHECK(j["f_check"]["pass"] == true);
  CHECK(j["inequality"]["samples"] == r.inequality.samples);
  CHECK(j["pass"] == true);

  std::string csv = barrier_reports_csv({r});
  auto lines = split_lines(csv);
  REQUIRE(lines.size() == 2);
  REQUIRE(split_cells(lines[1]).size() == split_cells(lines[0]).size());

  // identical inputs, identical bytes: recompute from scratch and compare
  BarrierReport again = make_barrier_report(params, 2000, 4000);
  CHECK(barrier_report_json(again) == barrier_report_json(r));
  CHECK(barrier_reports_csv({again}) == csv);
}

TEST_CASE("solve report serializes without wall time and round-trips") {
  BarrierParams params = BarrierParams::defaults(0.1);
  auto [u, report] = solve_cylinder_eps(params, AxisymGrid::make(64, 64));

  std::string text = solve_report_json(report);
  CHECK(text.find("wall") == std::string::npos);
  json j = json::parse(text);
  CHECK(j.is_object());
  CHECK(j["iterations"].get<int>() == report.iterations);
  CHECK(j["residual"].get<double>() == report.residual);
  CHECK(j["max_principle_pass"] == true);
  CHECK(j["barrier_nodes"].get<long long>() == report.barrier_nodes);
  REQUIRE(j["axis_profile"].size() == u.grid.points_z());
  CHECK(j["axis_profile"][0][0].get<double>() == 0.0);
  CHECK(j["axis_profile"][0][1].get<double>() == 0.0);
  CHECK(j["contraction_factors"].empty());

  std::string csv = solve_reports_csv({report});
  auto lines = split_lines(csv);
  REQUIRE(lines.size() == 2);
  auto header = split_cells(lines[0]);
  auto cells = split_cells(lines[1]);
  REQUIRE(cells.size() == header.size());
  for (std::size_t k = 0; k < header.size(); ++k)
    CHECK(header[k].find("wall") == std::string::npos);
  // the residual column round-trips bit for bit
  std::size_t rcol = 1;
  CHECK(header[rcol] == "residual");
  CHECK(std::strtod(cells[rcol].c_str(), nullptr) == report.residual);

  std::string profile = axis_profile_csv(report.axis_profile);
  auto plines = split_lines(profile);
  REQUIRE(plines.size() == u.grid.points_z() + 1);
  CHECK(plines[0] == "z,u");
  CHECK(split_cells(plines[1]).size() == 2);

  CHECK(solve_report_json(report) == text);
}

TEST_CASE("sweep rows serialize with aligned probe and delta columns") {
  SweepRow a;
  a.eps = 0.1;
  a.cells = 128;
  a.probe_heights = {0.05, 0.1, 0.2, 0.4};
  a.axis_values = {0.75, 0.9, 0.95, 0.97};
  a.deltas_from_prev = {};  // first row has no predecessor
  a.origin_value = 0.0;
  a.floor_at_2eps = 0.97;
  a.drift_lp = 988.0;
  a.drift_l1 = 1355.0;
  a.grad_l2_half_ball = 2.4;
  a.gradient_bound_ratio = 0.065;
  a.max_principle_pass = true;

  SweepRow b = a;
  b.eps = 0.05;
  b.deltas_from_prev = {1e-3, 1e-5, 1e-8, 1e-12};

  std::string csv = sweep_rows_csv({a, b});
  auto lines = split_lines(csv);
  REQUIRE(lines.size() == 3);
  auto header = split_cells(lines[0]);
  auto row_a = split_cells(lines[1]);
  auto row_b = split_cells(lines[2]);
  REQUIRE(row_a.size() == header.size());
  REQUIRE(row_b.size() == header.size());
  CHECK(header[4] == "u_z0.05");
  CHECK(header[8] == "delta_z0.05");
  CHECK(row_a[8].empty());
  CHECK(std::strtod(row_b[8].c_str(), nullptr) == 1e-3);

  json j = json::parse(sweep_rows_json({a, b}));
  CHECK(j.is_object());
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["deltas_from_prev"].empty());
  CHECK(j["rows"][1]["eps"].get<double>() == 0.05);
  CHECK(j["rows"][1]["deltas_from_prev"].size() == 4);
}
