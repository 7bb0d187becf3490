#pragma once

#include "treewalk/marked.hpp"

namespace treewalk {

/// Named operator handles over a truncation or a marked graph; every tag
/// supports matrix-free application and dense materialization through
/// LinearOperator.
enum class OpTag {
  shift,                       // S
  boundary_terminus,           // d_T (cut off when a cutoff is given)
  boundary_origin,             // d_O
  boundary_terminus_adjoint,   // d_T^*
  boundary_origin_adjoint,     // d_O^*
  coin,                        // 2 d_T^* d_T - 1
  walk,                        // U^(n)
  transition,                  // T_n (vertex space)
  marked_boundary_terminus,    // d_{T,M}
  marked_boundary_origin,      // d_{O,M}
  marked_walk,                 // U'_M
  marked_transition,           // T'_M
};

LinearOperator make_operator(OpTag tag, const TruncatedTree& tree,
                             std::optional<int> cutoff = std::nullopt);
LinearOperator make_operator(OpTag tag, const MarkedGraph& graph);

}  // namespace treewalk
