#pragma once
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "driftlab/closed_form.hpp"
#include "driftlab/quadrature.hpp"

namespace driftlab {

// ============================================================================
// The four explicit counterexample pairs (u, b) solving -Lap u + b.grad u = 0
// away from the origin, each with the properties it is meant to exhibit, plus
// the explicit 1D solution formula.
// ============================================================================

enum class ExampleId { Ex1, Ex2, Ex3, Ex4 };

const char* to_string(ExampleId id);
std::optional<ExampleId> parse_example_id(std::string_view s);  // "ex1".."ex4"

struct ExampleCase {
  ExampleId id;
  int n;                            // ambient dimension
  double R;                         // ball radius the pair lives on
  ClosedFormScalar u;
  ClosedFormVector b;
  std::vector<std::string> claims;  // machine-checkable property tags
};

// Ex1: n=2, R=1/e, u = ln(-ln r)           (unbounded, b in L2)
// Ex2: n=2, R=1/2, u = 1/ln r              (bounded, no Holder exponent)
// Ex3: n>=3, R=1,  u = ln r                (unbounded, b in Lp for p<n)
// Ex4: n>=3, R=1/2, u = 1/ln r             (no Holder exponent for n>=3)
// n_override applies to Ex3/Ex4 only (default n=3); BadDimension otherwise.
ExampleCase make_example(ExampleId id, std::optional<int> n_override = {});

// Pointwise -Lap u + b.grad u from the analytic derivatives; vanishes
// identically off the origin for every catalog case.
// SingularProbe at the origin, OutOfDomain outside the case's ball.
double strong_residual(const ExampleCase& c, const Point& p);

// Explicit 1D solution  u(x) = C1 * int_0^x exp(int_0^y b dt) dy + C2
// by nested quadrature.
double solve_1d(const std::function<double(double)>& b, double C1, double C2,
                double x, const QuadratureSpec& q);

}  // namespace driftlab
