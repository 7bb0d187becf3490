#pragma once

#include "treewalk/tree.hpp"

namespace treewalk {

/// Complex amplitudes indexed by the arcs of a truncation.
struct ArcState {
  const TruncatedTree* tree = nullptr;
  std::vector<cplx> a;

  ArcState() = default;
  explicit ArcState(const TruncatedTree& t) : tree(&t), a(t.arc_count(), cplx(0.0)) {}

  cplx& operator[](ArcId i) { return a[i]; }
  const cplx& operator[](ArcId i) const { return a[i]; }
  std::size_t size() const { return a.size(); }

  double norm_sq() const { return treewalk::norm_sq(a); }
  double norm() const { return l2_norm(a); }

  ArcState& operator+=(const ArcState& o);
  ArcState& operator-=(const ArcState& o);
  ArcState& operator*=(cplx c);

  // Largest endpoint depth over arcs carrying nonzero amplitude; -1 if zero.
  int support_depth(double eps = 0.0) const;
};

ArcState operator+(ArcState x, const ArcState& y);
ArcState operator-(ArcState x, const ArcState& y);
ArcState operator*(cplx c, ArcState x);
cplx inner(const ArcState& x, const ArcState& y);

/// Complex values indexed by the vertices of a truncation.
struct VertexFunction {
  const TruncatedTree* tree = nullptr;
  std::vector<cplx> f;

  VertexFunction() = default;
  explicit VertexFunction(const TruncatedTree& t)
      : tree(&t), f(t.vertex_count(), cplx(0.0)) {}

  cplx& operator[](VertexId i) { return f[i]; }
  const cplx& operator[](VertexId i) const { return f[i]; }
  std::size_t size() const { return f.size(); }

  double norm_sq() const { return treewalk::norm_sq(f); }
  double norm() const { return l2_norm(f); }

  VertexFunction& operator+=(const VertexFunction& o);
  VertexFunction& operator-=(const VertexFunction& o);
  VertexFunction& operator*=(cplx c);

  // Zero out values outside V_cutoff.
  void restrict_within(int cutoff);
};

VertexFunction operator+(VertexFunction x, const VertexFunction& y);
VertexFunction operator-(VertexFunction x, const VertexFunction& y);
VertexFunction operator*(cplx c, VertexFunction x);
cplx inner(const VertexFunction& x, const VertexFunction& y);

void check_same_tree(const ArcState& x, const ArcState& y);
void check_same_tree(const VertexFunction& x, const VertexFunction& y);

}  // namespace treewalk
