#pragma once

#include <functional>

#include "treewalk/common.hpp"

namespace treewalk {

/// Dense complex matrix, row-major.
struct DMatrix {
  int rows = 0, cols = 0;
  std::vector<cplx> a;

  DMatrix() = default;
  DMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const cplx& operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i) * cols + j];
  }

  static DMatrix identity(int n);
  DMatrix adjoint() const;
  std::vector<cplx> apply(const std::vector<cplx>& x) const;
  std::vector<cplx> column(int j) const;
  double max_abs() const;
};

DMatrix operator*(const DMatrix& x, const DMatrix& y);
DMatrix operator-(DMatrix x, const DMatrix& y);

/// Dense real matrix, row-major; used for real symmetric operators.
struct RMatrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  RMatrix() = default;
  RMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const double& operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i) * cols + j];
  }

  std::vector<double> apply(const std::vector<double>& x) const;
  std::vector<double> column(int j) const;
};

/// A named linear operator on complex vectors, applied matrix-free.
struct LinearOperator {
  std::string name;
  int out_dim = 0, in_dim = 0;
  std::function<std::vector<cplx>(const std::vector<cplx>&)> apply;
};

// Column j of the materialization is the operator applied to the j-th basis
// vector. Capped because dimensions grow exponentially with depth.
DMatrix materialize(const LinearOperator& op, int dense_cap = 5000);

}  // namespace treewalk
