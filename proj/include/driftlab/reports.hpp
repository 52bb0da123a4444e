#pragma once

#include <string>
#include <vector>

#include "driftlab/barrier.hpp"
#include "driftlab/norms.hpp"
#include "driftlab/solver.hpp"

namespace driftlab {

// ============================================================================
// Machine-readable emission of the measurement records.  One CSV dialect
// everywhere: comma separators, '.' decimal point, a header row, LF line
// endings, and 17 significant digits for reals so every double round-trips.
// JSON output is one top-level object (or array of row objects) with field
// names matching the record definitions.  Wall-clock times are deliberately
// not serialized: they would break byte-identical reruns.
// ============================================================================

// 17 significant digits, '.' decimal point, no locale: round-trip exact.
std::string format_real(double x);

// One CSV line from preformatted cells (no quoting: none of our fields may
// contain commas), LF-terminated.
std::string csv_line(const std::vector<std::string>& cells);

// ---------------------------------------------------------------- norms

std::string norm_reports_csv(const std::vector<NormReport>& rows);
std::string norm_report_json(const NormReport& r);

// ---------------------------------------------------------------- barrier

// Everything the barrier construction certifies for one parameter set: the
// derived constants, the ramp-property margins, the pointwise comparison
// minimum, and the calibrated drift envelope constant.
struct BarrierReport {
  BarrierParams params;
  FPropertyCheck f_check;
  BarrierCheck inequality;
  double envelope_constant = 0.0;
  bool pass = false;  // all margins nonnegative and the minimum positive
};

BarrierReport make_barrier_report(const BarrierParams& params, int f_count,
                                  int samples);
std::string barrier_report_json(const BarrierReport& r);
std::string barrier_reports_csv(const std::vector<BarrierReport>& rows);

// ---------------------------------------------------------------- solver

std::string solve_report_json(const SolveReport& r);
std::string solve_reports_csv(const std::vector<SolveReport>& rows);
// Two-column profile (z, u) along the axis, for plotting.
std::string axis_profile_csv(const std::vector<std::pair<double, double>>& profile);

// ---------------------------------------------------------------- sweep

std::string sweep_rows_csv(const std::vector<SweepRow>& rows);
std::string sweep_rows_json(const std::vector<SweepRow>& rows);

}  // namespace driftlab
