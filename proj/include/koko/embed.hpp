#pragma once

#include <array>
#include <iosfwd>

#include "koko/bricard.hpp"
#include "koko/trace.hpp"

namespace koko {

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

// One spherical quad walked on the unit sphere: vertices in arc order
// corner[0] -> corner[1] along lambda, then delta, mu, gamma back around.
struct QuadEmbedding {
  std::array<Vec3, 4> corner;
  std::array<double, 4> arcs; // lambda, delta, mu, gamma as walked
  double alpha = 0, beta = 0;
  double closure = 0; // | arc(corner2, corner3) - mu |
};

struct LinkageEmbedding {
  std::array<QuadEmbedding, 4> quad;
  double global_closure = 0; // return mismatch at the wrap-around vertex
};

// Walk a single quad from a state (alpha, beta); orientation -1 mirrors the
// construction (even-index quads of the linkage).
QuadEmbedding embed_quad(const QuadAngles& q, double alpha, double beta, int orientation = +1);

// Convenience: solve the Bricard equation for beta at this alpha (real root
// required) and embed.
std::optional<QuadEmbedding> embed_quad_solve(const QuadAngles& q, double alpha,
                                              int orientation = +1);

// Chain all four quads around the sphere with the prescribed gap splits
// (tau_i + zeta_i = 2 atan F_i). The state supplies all alpha_i, beta_i.
LinkageEmbedding embed_linkage(const std::array<QuadAngles, 4>& quads,
                               const std::array<GapSplit, 4>& splits, const FlexState& state);

// The lambda arcs of the four quads close a spherical polygon whose turning
// angles are the tau_i, so a split is geometrically consistent only when that
// polygon closes; the residual of the walk measures the defect.
double lambda_polygon_defect(const std::array<QuadAngles, 4>& quads,
                             const std::array<GapSplit, 4>& splits);

// Solve for a consistent split given the gap sums (tau_i + zeta_i fixed by
// the F_i); zeta_4 anchors the one-parameter slack. Nullopt when the Newton
// iteration finds no closing split.
std::optional<std::array<GapSplit, 4>> solve_gap_splits(const std::array<QuadAngles, 4>& quads,
                                                        const std::array<double, 4>& gap_sums,
                                                        double zeta4 = 0.0);

void write_embedding_obj(const LinkageEmbedding& emb, std::ostream& os, int segments = 64);
std::string embedding_json(const LinkageEmbedding& emb);

} // namespace koko
