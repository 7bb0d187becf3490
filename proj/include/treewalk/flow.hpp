#pragma once

#include <map>

#include "treewalk/dense.hpp"
#include "treewalk/state.hpp"
#include "treewalk/walk.hpp"

namespace treewalk {

enum class Sign { plus, minus };

inline const char* sign_str(Sign s) { return s == Sign::plus ? "+" : "-"; }
inline double sign_eigenvalue(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

/// Names one flow eigenfunction: source vertex u, phase index j with
/// 1 <= j <= m(u)-1, and the sign of its walk eigenvalue.
struct FlowIndex {
  VertexPath u;
  int j = 1;
  Sign sign = Sign::plus;

  bool operator<(const FlowIndex& o) const {
    if (u < o.u || o.u < u) return u < o.u;
    if (j != o.j) return j < o.j;
    return static_cast<int>(sign) < static_cast<int>(o.sign);
  }
  bool operator==(const FlowIndex& o) const {
    return u == o.u && j == o.j && sign == o.sign;
  }
  std::string str() const {
    return "(" + u.str() + ", j=" + std::to_string(j) + ", " + sign_str(sign) + ")";
  }
};

/// A flow eigenfunction materialized on a truncation. Source weights are the
/// m(u)-th roots of unity over the child arcs of u scaled by 1/m(u), each
/// generation decays by the local branching number, reverse arcs carry the
/// sign-dependent flip. The discarded infinite tail's squared mass is kept
/// alongside: exact for spherically symmetric trees, a geometric upper
/// bound otherwise.
struct FlowFunction {
  FlowIndex index;
  ArcState values;
  double truncated_norm_sq = 0.0;
  double tail_norm_sq = 0.0;
  bool tail_exact = true;
  // True when u sits at depth n, so only the source shell is materialized.
  bool shallow = false;

  double norm_sq() const { return truncated_norm_sq + tail_norm_sq; }
};

// Requires m(u) >= 2, u within depth n, and minimum declared degree >= 3
// (otherwise the infinite flow is not square-summable).
FlowFunction build_flow(const TruncatedTree& tree, const FlowIndex& idx);

// Relative residual of U^(n) phi = (+/-) phi. With interior_only the norm is
// taken over arcs with both endpoints within V_n.
double verify_flow_eigen(const FlowFunction& flow, bool interior_only = false);

// Every valid index with u within max_u_depth, one entry per (u, j, sign).
std::vector<FlowIndex> flow_indices(const TruncatedTree& tree, int max_u_depth);
std::vector<FlowIndex> flow_indices(const TruncatedTree& tree, int max_u_depth,
                                    Sign sign);

// G_ab = <phi_a, phi_b> with analytic tails on the diagonal; for regular and
// spherically symmetric trees the off-diagonal vanishes.
DMatrix gram(const std::vector<FlowFunction>& flows);

// Exact squared norm of a flow rooted at the given depth on a spherically
// symmetric tree, tail included.
double spherical_flow_norm_sq(const TreeSpec& spec, int u_depth);

struct BirthDecomposition {
  std::map<FlowIndex, cplx> coefficients;
  ArcState remainder;
};

// Orthogonal projection onto L_n = ran d_T^(n),* + ran d_O^(n),*, computed by
// solving the block normal equations with Gram [[I, T_n], [T_n, I]].
ArcState project_inherited(const ArcState& psi, int cutoff);

// Finite-truncation birth decomposition: removes the inherited part, then
// extracts flow coefficients depth by depth inside each shift-parity sector
// (a local discrete Fourier transform over the child arcs of each vertex,
// after subtracting the flows already extracted above). The remainder is the
// inherited part; it is orthogonal to every returned flow.
BirthDecomposition decompose_birth(const ArcState& psi, int max_depth);

// Coefficients of the projection onto the infinite-tree birth eigenspace:
// tail-inclusive Gram solve of <phi_a, psi> over flows rooted within the
// support of psi. This is what the time-averaged limit distribution uses.
std::map<FlowIndex, cplx> birth_overlap_coefficients(const ArcState& psi,
                                                     int max_u_depth = -1);

}  // namespace treewalk
