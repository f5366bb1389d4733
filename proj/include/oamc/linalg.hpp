#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "oamc/field.hpp"

namespace oamc {

// Dense row-major matrix of canonical field symbols.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<Symbol> cells;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), cells(r * c, 0) {}

  Symbol& at(size_t r, size_t c) { return cells[r * cols + c]; }
  Symbol at(size_t r, size_t c) const { return cells[r * cols + c]; }

  bool operator==(const Matrix&) const = default;
};

// Rank by Gaussian elimination over F; exact, no floating point.
size_t rank(const Field& f, Matrix m);

// Gauss-Jordan inverse; nullopt when singular.
std::optional<Matrix> invert(const Field& f, Matrix m);

// Unique solution of m*x = rhs for a square or consistent overdetermined
// system (rows >= cols); nullopt when singular or inconsistent.
std::optional<std::vector<Symbol>> solve(const Field& f, Matrix m,
                                         std::vector<Symbol> rhs);

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b);
std::vector<Symbol> apply(const Field& f, const Matrix& m,
                          const std::vector<Symbol>& x);

}  // namespace oamc
