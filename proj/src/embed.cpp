#include "koko/embed.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace koko {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(Vec3 a, Vec3 b)
{
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
Vec3 unit(Vec3 a)
{
  double n = norm(a);
  return {a.x / n, a.y / n, a.z / n};
}

// Rodrigues rotation of t around the unit axis n.
Vec3 rotate(Vec3 t, Vec3 n, double theta)
{
  double c = std::cos(theta), s = std::sin(theta);
  return c * t + s * cross(n, t) + (dot(n, t) * (1.0 - c)) * n;
}

// Walk from P along the unit tangent d by an arc.
Vec3 advance(Vec3 P, Vec3 d, double arc) { return std::cos(arc) * P + std::sin(arc) * d; }

// Unit tangent at A toward B.
Vec3 tangent(Vec3 A, Vec3 B) { return unit(B - dot(A, B) * A); }

double arc_between(Vec3 a, Vec3 b) { return std::acos(std::clamp(dot(a, b), -1.0, 1.0)); }

struct PlacedQuad {
  QuadEmbedding emb;
  Vec3 u_back; // tangent at the beta corner toward the alpha corner
};

PlacedQuad embed_quad_at(const QuadAngles& q, Vec3 P, Vec3 d_lambda, double alpha, double beta,
                         int orient)
{
  PlacedQuad out;
  Vec3 Va = P;
  Vec3 Vb = advance(P, d_lambda, q.lambda);
  Vec3 d_gamma = rotate(d_lambda, Va, orient * alpha);
  Vec3 Vd = advance(Va, d_gamma, q.gamma);
  Vec3 u = tangent(Vb, Va);
  Vec3 d_delta = rotate(u, Vb, -orient * beta);
  Vec3 Vc = advance(Vb, d_delta, q.delta);
  out.emb.corner = {Va, Vb, Vc, Vd};
  out.emb.arcs = {q.lambda, q.delta, q.mu, q.gamma};
  out.emb.alpha = alpha;
  out.emb.beta = beta;
  out.emb.closure = std::abs(arc_between(Vc, Vd) - q.mu);
  out.u_back = u;
  return out;
}

} // namespace

QuadEmbedding embed_quad(const QuadAngles& q, double alpha, double beta, int orientation)
{
  return embed_quad_at(q, {0, 0, 1}, {1, 0, 0}, alpha, beta, orientation).emb;
}

std::optional<QuadEmbedding> embed_quad_solve(const QuadAngles& q, double alpha, int orientation)
{
  Coeffs<double> c = coeffs_from_angles(q);
  double x = std::tan(alpha / 2.0);
  // g as a quadratic in y
  double A = c.a * x * x + c.c, B = x, C = c.b * x * x + c.e;
  double disc = B * B - 4 * A * C;
  if (std::abs(A) < 1e-15) {
    if (std::abs(B) < 1e-15) return std::nullopt;
    return embed_quad(q, alpha, 2.0 * std::atan(-C / B), orientation);
  }
  if (disc < 0) return std::nullopt;
  double y = (-B + std::sqrt(disc)) / (2 * A);
  return embed_quad(q, alpha, 2.0 * std::atan(y), orientation);
}

LinkageEmbedding embed_linkage(const std::array<QuadAngles, 4>& quads,
                               const std::array<GapSplit, 4>& splits, const FlexState& state)
{
  LinkageEmbedding out;
  Vec3 P{0, 0, 1};
  Vec3 d_lambda{1, 0, 0};
  Vec3 d_lambda_first = d_lambda;
  Vec3 P_first = P;
  Vec3 u_back{};
  for (int i = 0; i < 4; ++i) {
    const int orient = (i % 2 == 0) ? +1 : -1;
    const double alpha = 2.0 * std::atan(std::real(state.x[i]));
    const double beta = 2.0 * std::atan(std::real(state.y[i]));
    PlacedQuad pq = embed_quad_at(quads[i], P, d_lambda, alpha, beta, orient);
    out.quad[i] = pq.emb;
    // move to the shared vertex and aim the next lambda through the gap
    P = pq.emb.corner[1];
    u_back = pq.u_back;
    const int s = orient; // tau measured around +v for odd quads, -v for even
    d_lambda = rotate(-1.0 * u_back, P, -s * splits[i].tau);
  }
  // wrap-around: the predicted start of quad 1
  out.global_closure =
      arc_between(P, P_first) + std::acos(std::clamp(dot(d_lambda, d_lambda_first), -1.0, 1.0));
  return out;
}

double lambda_polygon_defect(const std::array<QuadAngles, 4>& quads,
                             const std::array<GapSplit, 4>& splits)
{
  Vec3 P{0, 0, 1};
  Vec3 dir{1, 0, 0};
  for (int i = 0; i < 4; ++i) {
    Vec3 next = advance(P, dir, quads[i].lambda);
    Vec3 u = tangent(next, P);
    const int s = (i % 2 == 0) ? +1 : -1;
    dir = rotate(-1.0 * u, next, -s * splits[i].tau);
    P = next;
  }
  Vec3 d0{1, 0, 0};
  return arc_between(P, {0, 0, 1}) + std::acos(std::clamp(dot(dir, d0), -1.0, 1.0));
}

namespace {

// Residual of the lambda-polygon walk: position gap (3) plus aim gap (1).
std::array<double, 4> polygon_residual(const std::array<QuadAngles, 4>& quads,
                                       const std::array<GapSplit, 4>& splits)
{
  Vec3 P{0, 0, 1};
  Vec3 dir{1, 0, 0};
  for (int i = 0; i < 4; ++i) {
    Vec3 next = advance(P, dir, quads[i].lambda);
    Vec3 u = tangent(next, P);
    const int s = (i % 2 == 0) ? +1 : -1;
    dir = rotate(-1.0 * u, next, -s * splits[i].tau);
    P = next;
  }
  return {P.x - 0.0, P.y - 0.0, P.z - 1.0, 1.0 - dir.x};
}

} // namespace

std::optional<std::array<GapSplit, 4>> solve_gap_splits(const std::array<QuadAngles, 4>& quads,
                                                        const std::array<double, 4>& gap_sums,
                                                        double zeta4)
{
  auto mk = [&](const std::array<double, 3>& z, double z4) {
    std::array<GapSplit, 4> sp;
    for (int i = 0; i < 3; ++i) sp[i] = {gap_sums[i] - z[i], z[i]};
    sp[3] = {gap_sums[3] - z4, z4};
    return sp;
  };

  // Gauss-Newton over (zeta1..zeta3) for a fixed anchor zeta4; the closing
  // splits form a one-parameter family, so the anchor is scanned.
  auto solve_at = [&](double z4, std::array<double, 3> z,
                      std::array<double, 3>* out) -> double {
    const double h = 1e-6;
    double lambda = 1e-3;
    auto rss = [&](const std::array<double, 3>& zz) {
      auto r = polygon_residual(quads, mk(zz, z4));
      return r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3];
    };
    double cur = rss(z);
    for (int it = 0; it < 120; ++it) {
      auto r0 = polygon_residual(quads, mk(z, z4));
      double J[4][3];
      for (int c = 0; c < 3; ++c) {
        auto zp = z;
        zp[c] += h;
        auto rp = polygon_residual(quads, mk(zp, z4));
        for (int k = 0; k < 4; ++k) J[k][c] = (rp[k] - r0[k]) / h;
      }
      double A[3][3] = {}, b[3] = {};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 4; ++k) A[i][j] += J[k][i] * J[k][j];
        for (int k = 0; k < 4; ++k) b[i] -= J[k][i] * r0[k];
        A[i][i] += lambda;
      }
      // 3x3 solve by elimination
      double M[3][4];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
        M[i][3] = b[i];
      }
      bool singular = false;
      for (int col = 0; col < 3 && !singular; ++col) {
        int piv = col;
        for (int rw = col + 1; rw < 3; ++rw)
          if (std::abs(M[rw][col]) > std::abs(M[piv][col])) piv = rw;
        if (std::abs(M[piv][col]) < 1e-18) {
          singular = true;
          break;
        }
        std::swap(M[piv], M[col]);
        for (int rw = 0; rw < 3; ++rw) {
          if (rw == col) continue;
          double f = M[rw][col] / M[col][col];
          for (int j = col; j < 4; ++j) M[rw][j] -= f * M[col][j];
        }
      }
      if (singular) break;
      std::array<double, 3> zn = z;
      for (int i = 0; i < 3; ++i) zn[i] += M[i][3] / M[i][i];
      double nv = rss(zn);
      if (nv < cur) {
        z = zn;
        cur = nv;
        lambda = std::max(lambda * 0.3, 1e-12);
        if (cur < 1e-24) break;
      } else {
        lambda *= 10;
        if (lambda > 1e6) break;
      }
    }
    *out = z;
    return cur;
  };

  double best = 1e18;
  std::array<double, 3> best_z{};
  double best_z4 = zeta4;
  for (double dz4 : {0.0, 0.4, -0.4, 0.8, -0.8, 1.2, -1.2, 1.6, -1.6, 2.0, -2.0, 2.4, -2.4, 2.8,
                     -2.8}) {
    double z4 = zeta4 + dz4;
    for (int seed = 0; seed < 9; ++seed) {
      std::array<double, 3> z{(seed % 3 - 1) * 1.2, (seed / 3 % 3 - 1) * 1.2, 0.0};
      std::array<double, 3> out;
      double v = solve_at(z4, z, &out);
      if (v < best) {
        best = v;
        best_z = out;
        best_z4 = z4;
      }
      if (best < 1e-22) break;
    }
    if (best < 1e-22) break;
  }
  if (best > 1e-16) return std::nullopt;
  return mk(best_z, best_z4);
}

void write_embedding_obj(const LinkageEmbedding& emb, std::ostream& os, int segments)
{
  os << "# spherical linkage arcs\n";
  int base = 1;
  for (int qi = 0; qi < 4; ++qi) {
    const auto& q = emb.quad[qi];
    for (int e = 0; e < 4; ++e) {
      Vec3 A = q.corner[e];
      Vec3 B = q.corner[(e + 1) % 4];
      Vec3 t = tangent(A, B);
      double arc = arc_between(A, B);
      for (int s = 0; s <= segments; ++s) {
        Vec3 p = advance(A, t, arc * s / segments);
        os << "v " << p.x << " " << p.y << " " << p.z << "\n";
      }
      os << "l";
      for (int s = 0; s <= segments; ++s) os << " " << base + s;
      os << "\n";
      base += segments + 1;
    }
  }
}

std::string embedding_json(const LinkageEmbedding& emb)
{
  std::ostringstream os;
  os.precision(17);
  os << "{\"quads\":[";
  for (int qi = 0; qi < 4; ++qi) {
    const auto& q = emb.quad[qi];
    if (qi) os << ",";
    os << "{\"vertices\":[";
    for (int i = 0; i < 4; ++i) {
      if (i) os << ",";
      os << "[" << q.corner[i].x << "," << q.corner[i].y << "," << q.corner[i].z << "]";
    }
    os << "],\"arcs\":[";
    for (int i = 0; i < 4; ++i) {
      if (i) os << ",";
      os << q.arcs[i];
    }
    os << "],\"alpha\":" << q.alpha << ",\"beta\":" << q.beta << ",\"closure\":" << q.closure
       << "}";
  }
  os << "],\"global_closure\":" << emb.global_closure << "}";
  return os.str();
}

} // namespace koko
