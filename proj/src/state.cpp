#include "treewalk/state.hpp"

#include <algorithm>

namespace treewalk {

void check_same_tree(const ArcState& x, const ArcState& y) {
  if (x.tree != y.tree || x.a.size() != y.a.size())
    throw SpecError("arc states are indexed over different structures");
}

void check_same_tree(const VertexFunction& x, const VertexFunction& y) {
  if (x.tree != y.tree || x.f.size() != y.f.size())
    throw SpecError("vertex functions are indexed over different structures");
}

ArcState& ArcState::operator+=(const ArcState& o) {
  check_same_tree(*this, o);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
  return *this;
}

ArcState& ArcState::operator-=(const ArcState& o) {
  check_same_tree(*this, o);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
  return *this;
}

ArcState& ArcState::operator*=(cplx c) {
  for (auto& x : a) x *= c;
  return *this;
}

ArcState operator+(ArcState x, const ArcState& y) { return x += y; }
ArcState operator-(ArcState x, const ArcState& y) { return x -= y; }
ArcState operator*(cplx c, ArcState x) { return x *= c; }

cplx inner(const ArcState& x, const ArcState& y) {
  check_same_tree(x, y);
  return inner(x.a, y.a);
}

int ArcState::support_depth(double eps) const {
  int d = -1;
  for (ArcId i = 0; i < static_cast<ArcId>(a.size()); ++i)
    if (std::abs(a[i]) > eps) d = std::max(d, tree->arc_depth(i));
  return d;
}

VertexFunction& VertexFunction::operator+=(const VertexFunction& o) {
  check_same_tree(*this, o);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += o.f[i];
  return *this;
}

VertexFunction& VertexFunction::operator-=(const VertexFunction& o) {
  check_same_tree(*this, o);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] -= o.f[i];
  return *this;
}

VertexFunction& VertexFunction::operator*=(cplx c) {
  for (auto& x : f) x *= c;
  return *this;
}

void VertexFunction::restrict_within(int cutoff) {
  VertexId keep = tree->count_within(cutoff);
  std::fill(f.begin() + keep, f.end(), cplx(0.0));
}

VertexFunction operator+(VertexFunction x, const VertexFunction& y) { return x += y; }
VertexFunction operator-(VertexFunction x, const VertexFunction& y) { return x -= y; }
VertexFunction operator*(cplx c, VertexFunction x) { return x *= c; }

cplx inner(const VertexFunction& x, const VertexFunction& y) {
  check_same_tree(x, y);
  return inner(x.f, y.f);
}

}  // namespace treewalk
