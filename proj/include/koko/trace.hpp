#pragma once

#include <complex>

#include "koko/matching.hpp"

namespace koko {

using Cx = std::complex<double>;

// One accepted point of the flexion curve: tangent half-angles of all eight
// flexible angles plus the closure residual on the normalized chain.
struct FlexState {
  int step = 0;
  double alpha1 = 0;
  std::array<Cx, 4> x{};
  std::array<Cx, 4> y{};
  double residual = 0;
  int branch = -1;
};

struct FlexTrace {
  int id = 0;
  bool real_only = false;
  std::vector<FlexState> states;
};

struct TraceOptions {
  int steps = 400;
  double alpha_min = 0.1;
  double alpha_max = 0.0; // default pi - 0.1, set at run time
  bool real_only = false;
  double tol = 1e-8;      // residual acceptance, unit-max-abs normalized
  double real_eps = 1e-7; // imaginary part threshold under real_only
  Tol flex_tol{1e-7, 1e-10}; // tolerance of the flexibility gate
};

struct TraceResult {
  std::vector<FlexTrace> traces;
  int skipped_points = 0;  // degenerate leading coefficients (the finite bad set)
  int accepted_states = 0;
  std::string diagnostic;
};

TraceResult trace(const MeshSpec<double>& mesh, const TraceOptions& opts);

inline TraceResult trace(const MeshSpec<Rat>& mesh, const TraceOptions& opts)
{
  return trace(mesh.to_double(), opts);
}

void write_trace_csv(const TraceResult& tr, std::ostream& os);

} // namespace koko
