#include "treewalk/jacobi.hpp"

#include <algorithm>
#include <numeric>

namespace treewalk {

namespace {

double off_diag_sq(const RMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = i + 1; j < a.cols; ++j) s += 2.0 * a(i, j) * a(i, j);
  return s;
}

double off_diag_sq(const DMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = i + 1; j < a.cols; ++j) s += 2.0 * std::norm(a(i, j));
  return s;
}

template <typename Eig, typename Mat>
void sort_ascending(Eig& e, Mat& v) {
  int n = static_cast<int>(e.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return e[x] < e[y]; });
  Eig se(n);
  Mat sv(v.rows, v.cols);
  for (int k = 0; k < n; ++k) {
    se[k] = e[order[k]];
    for (int i = 0; i < v.rows; ++i) sv(i, k) = v(i, order[k]);
  }
  e = std::move(se);
  v = std::move(sv);
}

}  // namespace

SymEig jacobi_symmetric(RMatrix a, double off_tol, int max_sweeps) {
  const int n = a.rows;
  if (n != a.cols) throw SpecError("jacobi: matrix must be square");
  RMatrix v(n, n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  double scale = 0.0;
  for (double x : a.a) scale += x * x;
  scale = std::sqrt(std::max(scale, 1e-300));
  const double tol_sq = (off_tol * scale) * (off_tol * scale);

  for (int sweep = 0; sweep < max_sweeps && off_diag_sq(a) > tol_sq; ++sweep) {
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double theta = 0.5 * std::atan2(2.0 * apq, a(p, p) - a(q, q));
        double c = std::cos(theta), s = std::sin(theta);
        for (int i = 0; i < n; ++i) {
          double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + s * aiq;
          a(i, q) = -s * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj + s * aqj;
          a(q, j) = -s * apj + c * aqj;
        }
        for (int i = 0; i < n; ++i) {
          double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + s * viq;
          v(i, q) = -s * vip + c * viq;
        }
      }
  }

  SymEig out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a(i, i);
  out.vectors = std::move(v);
  sort_ascending(out.values, out.vectors);
  return out;
}

HermEig jacobi_hermitian(DMatrix a, double off_tol, int max_sweeps) {
  const int n = a.rows;
  if (n != a.cols) throw SpecError("jacobi: matrix must be square");
  DMatrix v = DMatrix::identity(n);

  double scale = 0.0;
  for (const cplx& x : a.a) scale += std::norm(x);
  scale = std::sqrt(std::max(scale, 1e-300));
  const double tol_sq = (off_tol * scale) * (off_tol * scale);

  for (int sweep = 0; sweep < max_sweeps && off_diag_sq(a) > tol_sq; ++sweep) {
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        cplx apq = a(p, q);
        double b = std::abs(apq);
        if (b == 0.0) continue;
        cplx phase = apq / b;
        double app = a(p, p).real(), aqq = a(q, q).real();
        double theta = 0.5 * std::atan2(2.0 * b, app - aqq);
        double c = std::cos(theta), s = std::sin(theta);
        // columns: col_p' = c col_p + s conj(phase) col_q,
        //          col_q' = -s phase col_p + c col_q
        cplx sp = s * std::conj(phase), sq = s * phase;
        for (int i = 0; i < n; ++i) {
          cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + sp * aiq;
          a(i, q) = -sq * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          cplx apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj + std::conj(sp) * aqj;
          a(q, j) = -std::conj(sq) * apj + c * aqj;
        }
        for (int i = 0; i < n; ++i) {
          cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + sp * viq;
          v(i, q) = -sq * vip + c * viq;
        }
      }
  }

  HermEig out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a(i, i).real();
  out.vectors = std::move(v);
  sort_ascending(out.values, out.vectors);
  return out;
}

UnitaryEig eig_unitary(const DMatrix& u, double cluster_tol) {
  const int n = u.rows;
  if (n != u.cols) throw SpecError("eig_unitary: matrix must be square");
  DMatrix uh = u.adjoint();
  DMatrix h(n, n), k(n, n);
  const cplx half(0.5, 0.0), half_over_i(0.0, -0.5);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      h(i, j) = half * (u(i, j) + uh(i, j));
      k(i, j) = half_over_i * (u(i, j) - uh(i, j));
    }

  HermEig eh = jacobi_hermitian(h);

  UnitaryEig out;
  out.values.resize(n);
  out.vectors = DMatrix(n, n);

  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && eh.values[end] - eh.values[end - 1] < cluster_tol) ++end;
    int d = end - start;
    // K restricted to the cluster's eigenspace, in the basis of its columns
    DMatrix kr(d, d);
    for (int x = 0; x < d; ++x) {
      std::vector<cplx> col = eh.vectors.column(start + x);
      std::vector<cplx> kcol = k.apply(col);
      for (int y = 0; y < d; ++y) {
        std::vector<cplx> coly = eh.vectors.column(start + y);
        kr(y, x) = inner(coly, kcol);
      }
    }
    HermEig ek = jacobi_hermitian(kr);
    for (int x = 0; x < d; ++x) {
      double c = eh.values[start + x];
      double s = ek.values[x];
      out.values[start + x] = cplx(c, s);
      for (int i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (int y = 0; y < d; ++y) acc += eh.vectors(i, start + y) * ek.vectors(y, x);
        out.vectors(i, start + x) = acc;
      }
    }
    start = end;
  }
  return out;
}

}  // namespace treewalk
