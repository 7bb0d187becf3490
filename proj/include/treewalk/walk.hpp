#pragma once

#include <optional>

#include "treewalk/state.hpp"

namespace treewalk {

enum class Boundary { terminus, origin };

// (d_T psi)(u) = sum_{e: t(e)=u} psi(e)/sqrt(deg u), and the origin version.
// Degrees are always the declared infinite-tree degrees. With a cutoff the
// output is projected onto V_cutoff, which is the Dirichlet version d^(n).
VertexFunction apply_boundary(Boundary dir, const ArcState& psi,
                              std::optional<int> cutoff = std::nullopt);

// (d_T^* f)(e) = f(t(e))/sqrt(deg t(e)); with a cutoff, f is first projected
// onto V_cutoff.
ArcState apply_boundary_adjoint(Boundary dir, const VertexFunction& f,
                                std::optional<int> cutoff = std::nullopt);

// (S psi)(e) = psi(reverse e).
ArcState apply_shift(const ArcState& psi);

// The cut-off Grover walk U^(n) = S(2 d_T^(n),* d_T^(n) - 1). Without a
// cutoff, n defaults to the truncation depth, so the operator acts as the
// full walk on states supported strictly inside the truncation and as the
// reflection -S on arcs pointing out of V_n.
ArcState apply_walk(const ArcState& psi, std::optional<int> cutoff = std::nullopt);

// T_n f: isotropic transition operator cut off at depth n.
VertexFunction apply_transition(const VertexFunction& f, int cutoff);

}  // namespace treewalk
