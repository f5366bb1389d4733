#include "oamc/linalg.hpp"

#include <utility>

#include "oamc/errors.hpp"

namespace oamc {

namespace {

void swap_rows(Matrix& m, size_t a, size_t b) {
  if (a == b) return;
  for (size_t c = 0; c < m.cols; ++c) std::swap(m.at(a, c), m.at(b, c));
}

// row[dst] -= factor * row[src], starting at column `from`.
void eliminate_row(const Field& f, Matrix& m, size_t dst, size_t src,
                   Symbol factor, size_t from) {
  if (factor == 0) return;
  for (size_t c = from; c < m.cols; ++c) {
    m.at(dst, c) = f.sub(m.at(dst, c), f.mul(factor, m.at(src, c)));
  }
}

}  // namespace

size_t rank(const Field& f, Matrix m) {
  size_t r = 0;
  for (size_t c = 0; c < m.cols && r < m.rows; ++c) {
    size_t pivot = r;
    while (pivot < m.rows && m.at(pivot, c) == 0) ++pivot;
    if (pivot == m.rows) continue;
    swap_rows(m, r, pivot);
    const Symbol scale = f.inv(m.at(r, c));
    for (size_t cc = c; cc < m.cols; ++cc) {
      m.at(r, cc) = f.mul(scale, m.at(r, cc));
    }
    for (size_t rr = r + 1; rr < m.rows; ++rr) {
      eliminate_row(f, m, rr, r, m.at(rr, c), c);
    }
    ++r;
  }
  return r;
}

std::optional<Matrix> invert(const Field& f, Matrix m) {
  if (m.rows != m.cols) throw DimensionError("invert requires a square matrix");
  const size_t n = m.rows;
  Matrix inv(n, n);
  for (size_t i = 0; i < n; ++i) inv.at(i, i) = 1;

  for (size_t c = 0; c < n; ++c) {
    size_t pivot = c;
    while (pivot < n && m.at(pivot, c) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    swap_rows(m, c, pivot);
    swap_rows(inv, c, pivot);
    const Symbol scale = f.inv(m.at(c, c));
    for (size_t cc = 0; cc < n; ++cc) {
      m.at(c, cc) = f.mul(scale, m.at(c, cc));
      inv.at(c, cc) = f.mul(scale, inv.at(c, cc));
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const Symbol factor = m.at(r, c);
      eliminate_row(f, m, r, c, factor, 0);
      eliminate_row(f, inv, r, c, factor, 0);
    }
  }
  return inv;
}

std::optional<std::vector<Symbol>> solve(const Field& f, Matrix m,
                                         std::vector<Symbol> rhs) {
  if (rhs.size() != m.rows) throw DimensionError("rhs length != row count");
  if (m.rows < m.cols) throw DimensionError("underdetermined system");

  std::vector<size_t> pivot_row(m.cols);
  size_t next = 0;
  for (size_t c = 0; c < m.cols; ++c) {
    size_t pivot = next;
    while (pivot < m.rows && m.at(pivot, c) == 0) ++pivot;
    if (pivot == m.rows) return std::nullopt;  // singular
    swap_rows(m, next, pivot);
    std::swap(rhs[next], rhs[pivot]);
    const Symbol scale = f.inv(m.at(next, c));
    for (size_t cc = c; cc < m.cols; ++cc) {
      m.at(next, cc) = f.mul(scale, m.at(next, cc));
    }
    rhs[next] = f.mul(scale, rhs[next]);
    for (size_t r = 0; r < m.rows; ++r) {
      if (r == next) continue;
      const Symbol factor = m.at(r, c);
      eliminate_row(f, m, r, next, factor, c);
      rhs[r] = f.sub(rhs[r], f.mul(factor, rhs[next]));
    }
    pivot_row[c] = next;
    ++next;
  }
  // Rows below the pivot block are now all-zero; a nonzero rhs there means
  // the overdetermined system is inconsistent.
  for (size_t r = next; r < m.rows; ++r) {
    if (rhs[r] != 0) return std::nullopt;
  }
  std::vector<Symbol> x(m.cols);
  for (size_t c = 0; c < m.cols; ++c) x[c] = rhs[pivot_row[c]];
  return x;
}

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw DimensionError("matrix shape mismatch");
  Matrix out(a.rows, b.cols);
  for (size_t r = 0; r < a.rows; ++r) {
    for (size_t k = 0; k < a.cols; ++k) {
      const Symbol v = a.at(r, k);
      if (v == 0) continue;
      for (size_t c = 0; c < b.cols; ++c) {
        out.at(r, c) = f.add(out.at(r, c), f.mul(v, b.at(k, c)));
      }
    }
  }
  return out;
}

std::vector<Symbol> apply(const Field& f, const Matrix& m,
                          const std::vector<Symbol>& x) {
  if (x.size() != m.cols) throw DimensionError("vector length != col count");
  std::vector<Symbol> out(m.rows, 0);
  for (size_t r = 0; r < m.rows; ++r) {
    Symbol acc = 0;
    for (size_t c = 0; c < m.cols; ++c) {
      acc = f.add(acc, f.mul(m.at(r, c), x[c]));
    }
    out[r] = acc;
  }
  return out;
}

}  // namespace oamc
