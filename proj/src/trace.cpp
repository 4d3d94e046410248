#include "koko/trace.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace koko {

namespace {

constexpr double kPi = std::numbers::pi;

// Roots of a quadratic with complex-stable evaluation; empty when the leading
// coefficient degenerates together with the linear one.
int quad_roots(Cx a, Cx b, Cx c, double scale, Cx out[2])
{
  const double eps = 1e-13 * scale;
  if (std::abs(a) <= eps) {
    if (std::abs(b) <= eps) return 0;
    out[0] = -c / b;
    return 1;
  }
  Cx d = std::sqrt(b * b - 4.0 * a * c);
  Cx q = (std::real(std::conj(b) * d) >= 0) ? -0.5 * (b + d) : -0.5 * (b - d);
  if (std::abs(q) <= eps * eps) { // double root at 0 or degenerate
    out[0] = -b / (2.0 * a);
    out[1] = out[0];
    return 2;
  }
  out[0] = q / a;
  out[1] = c / q;
  return 2;
}

// Chordal distance on the Riemann sphere.
double chordal(Cx a, Cx b)
{
  double na = std::norm(a), nb = std::norm(b);
  if (!std::isfinite(na) || !std::isfinite(nb)) return (std::isfinite(na) != std::isfinite(nb)) ? 1.0 : 0.0;
  return std::abs(a - b) / std::sqrt((1.0 + na) * (1.0 + nb));
}

double state_distance(const FlexState& s, const FlexState& t)
{
  double d = 0;
  for (int i = 0; i < 4; ++i) d += chordal(s.x[i], t.x[i]);
  return d;
}

Cx gap_map(const ProjReal<double>& F, Cx xnext)
{
  if (F.inf) return -1.0 / xnext;
  return (F.val + xnext) / (1.0 - F.val * xnext);
}

} // namespace

TraceResult trace(const MeshSpec<double>& mesh, const TraceOptions& opts_in)
{
  TraceOptions opts = opts_in;
  if (opts.alpha_max <= 0) opts.alpha_max = kPi - 0.1;

  // flexibility gate
  auto rep = is_flexible(mesh, opts.flex_tol);
  TraceResult out;
  if (rep.status == FlexStatus::singular)
    throw std::invalid_argument("trace: singular mesh is out of scope");
  if (rep.status == FlexStatus::rigid) {
    std::string msg = "trace: mesh is rigid (no shared resultant factor";
    msg += rep.diagnostics.empty() ? ")" : ("; " + rep.diagnostics + ")");
    throw std::invalid_argument(msg);
  }

  // chain polynomials, scaled to unit max-abs coefficient
  std::array<BiPoly<double>, 4> gt;
  std::array<double, 4> scale{};
  for (int i = 0; i < 4; ++i) {
    gt[i] = eliminate_gap(mesh.q[i], mesh.F[i], "u", "v");
    double m = gt[i].max_abs();
    gt[i] = gt[i] * (1.0 / m);
    scale[i] = 1.0;
  }

  std::vector<FlexState> accepted;
  for (int step = 0; step < opts.steps; ++step) {
    double a1 = opts.alpha_min +
                (opts.alpha_max - opts.alpha_min) * (opts.steps == 1 ? 0.5 : double(step) / (opts.steps - 1));
    Cx x1 = std::tan(a1 / 2.0);
    if (std::abs(x1) > 1e10) { // the x1 = infinity chart point
      ++out.skipped_points;
      continue;
    }

    // solve the chain gt1(x1,x2) = 0, gt2(x2,x3) = 0, gt3(x3,x4) = 0
    auto solve_next = [&](int gi, Cx xin, Cx roots[2]) -> int {
      Poly<double> a = gt[gi].v_slice(2), b = gt[gi].v_slice(1), c = gt[gi].v_slice(0);
      Cx ca = a.eval(xin), cb = b.eval(xin), cc = c.eval(xin);
      double s = std::max({std::abs(ca), std::abs(cb), std::abs(cc), 1e-30});
      return quad_roots(ca, cb, cc, s, roots);
    };

    bool skipped = false;
    Cx r2[2], r3[2], r4[2];
    int n2 = solve_next(0, x1, r2);
    if (n2 == 0) {
      ++out.skipped_points;
      continue;
    }
    int branch_id = 0;
    for (int i2 = 0; i2 < n2; ++i2) {
      int n3 = solve_next(1, r2[i2], r3);
      if (n3 == 0) skipped = true;
      for (int i3 = 0; i3 < n3; ++i3) {
        int n4 = solve_next(2, r3[i3], r4);
        if (n4 == 0) skipped = true;
        for (int i4 = 0; i4 < n4; ++i4) {
          ++branch_id;
          Cx x2 = r2[i2], x3 = r3[i3], x4 = r4[i4];
          double cap = 1e12;
          if (std::abs(x2) > cap || std::abs(x3) > cap || std::abs(x4) > cap) continue;
          double res = std::abs(gt[3].eval(x4, x1));
          // consistency of the already solved links dominates near roots
          double res_all = std::max({res, std::abs(gt[0].eval(x1, x2)),
                                     std::abs(gt[1].eval(x2, x3)), std::abs(gt[2].eval(x3, x4))});
          if (res_all > opts.tol) continue;
          if (opts.real_only) {
            if (std::abs(std::imag(x2)) > opts.real_eps || std::abs(std::imag(x3)) > opts.real_eps ||
                std::abs(std::imag(x4)) > opts.real_eps)
              continue;
            x2 = std::real(x2);
            x3 = std::real(x3);
            x4 = std::real(x4);
          }
          FlexState st;
          st.step = step;
          st.alpha1 = a1;
          st.x = {x1, x2, x3, x4};
          for (int i = 0; i < 4; ++i) st.y[i] = gap_map(mesh.F[i], st.x[(i + 1) % 4]);
          st.residual = res_all;
          st.branch = branch_id - 1;
          accepted.push_back(st);
        }
      }
    }
    if (skipped) ++out.skipped_points;
  }

  out.accepted_states = static_cast<int>(accepted.size());
  if (accepted.empty()) {
    out.diagnostic = opts.real_only
                         ? "no real branch: every accepted chain state had a complex coordinate"
                         : "no states accepted at the requested tolerance";
    return out;
  }

  // continuity linking: greedy nearest-trace assignment in sweep order
  const double link_threshold = 0.2;
  std::vector<int> last_state_of_trace;
  for (const FlexState& st : accepted) {
    int best = -1;
    double best_d = link_threshold;
    for (std::size_t t = 0; t < out.traces.size(); ++t) {
      const FlexState& prev = out.traces[t].states.back();
      if (prev.step >= st.step) continue; // one state per trace per step
      if (st.step - prev.step > 3) continue;
      double d = state_distance(prev, st);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(t);
      }
    }
    if (best < 0) {
      FlexTrace tr;
      tr.id = static_cast<int>(out.traces.size());
      tr.real_only = opts.real_only;
      tr.states.push_back(st);
      out.traces.push_back(std::move(tr));
    } else {
      out.traces[best].states.push_back(st);
    }
  }
  for (auto& tr : out.traces)
    for (auto& st : tr.states) st.branch = tr.id;
  return out;
}

void write_trace_csv(const TraceResult& tr, std::ostream& os)
{
  os << "step,alpha1,x1,x2,x3,x4,residual,branch\n";
  auto fmt = [&](Cx v) {
    char buf[80];
    if (std::abs(std::imag(v)) < 1e-300)
      std::snprintf(buf, sizeof buf, "%.17g", std::real(v));
    else
      std::snprintf(buf, sizeof buf, "%.17g%+.17gi", std::real(v), std::imag(v));
    return std::string(buf);
  };
  for (const auto& t : tr.traces)
    for (const auto& s : t.states) {
      char head[64];
      std::snprintf(head, sizeof head, "%d,%.17g,", s.step, s.alpha1);
      os << head << fmt(s.x[0]) << ',' << fmt(s.x[1]) << ',' << fmt(s.x[2]) << ',' << fmt(s.x[3])
         << ',';
      char tail[64];
      std::snprintf(tail, sizeof tail, "%.17g,%d\n", s.residual, s.branch);
      os << tail;
    }
}

} // namespace koko
