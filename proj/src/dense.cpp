#include "treewalk/dense.hpp"

namespace treewalk {

DMatrix DMatrix::identity(int n) {
  DMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DMatrix DMatrix::adjoint() const {
  DMatrix m(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

std::vector<cplx> DMatrix::apply(const std::vector<cplx>& x) const {
  if (static_cast<int>(x.size()) != cols)
    throw SpecError("matrix-vector dimension mismatch");
  std::vector<cplx> y(rows, cplx(0.0));
  for (int i = 0; i < rows; ++i) {
    cplx s = 0.0;
    const cplx* row = a.data() + static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<cplx> DMatrix::column(int j) const {
  std::vector<cplx> c(rows);
  for (int i = 0; i < rows; ++i) c[i] = (*this)(i, j);
  return c;
}

double DMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& x : a) m = std::max(m, std::abs(x));
  return m;
}

DMatrix operator*(const DMatrix& x, const DMatrix& y) {
  if (x.cols != y.rows) throw SpecError("matrix product dimension mismatch");
  DMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      cplx v = x(i, k);
      if (v == cplx(0.0)) continue;
      for (int j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
    }
  return z;
}

DMatrix operator-(DMatrix x, const DMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw SpecError("matrix difference dimension mismatch");
  for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
  return x;
}

std::vector<double> RMatrix::apply(const std::vector<double>& x) const {
  std::vector<double> y(rows, 0.0);
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    const double* row = a.data() + static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<double> RMatrix::column(int j) const {
  std::vector<double> c(rows);
  for (int i = 0; i < rows; ++i) c[i] = (*this)(i, j);
  return c;
}

DMatrix materialize(const LinearOperator& op, int dense_cap) {
  if (op.in_dim > dense_cap || op.out_dim > dense_cap)
    throw SpecError("materialize: dimension " +
                    std::to_string(std::max(op.in_dim, op.out_dim)) +
                    " exceeds dense cap " + std::to_string(dense_cap));
  DMatrix m(op.out_dim, op.in_dim);
  std::vector<cplx> basis(op.in_dim, cplx(0.0));
  for (int j = 0; j < op.in_dim; ++j) {
    basis[j] = 1.0;
    std::vector<cplx> col = op.apply(basis);
    basis[j] = 0.0;
    for (int i = 0; i < op.out_dim; ++i) m(i, j) = col[i];
  }
  return m;
}

}  // namespace treewalk
