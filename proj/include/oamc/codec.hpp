#pragma once

#include <cstdint>
#include <vector>

#include "oamc/code_params.hpp"
#include "oamc/linalg.hpp"

namespace oamc {

// An l x c grid of cells stored column-major by node: column i is node C_i
// with coordinates c_{i,0}..c_{i,l-1}. Node ids are 1-based, coordinates
// 0-based. A full codeword has n columns, a data block the first k.
struct CellMatrix {
  uint64_t coords = 0;  // l
  uint32_t nodes = 0;
  std::vector<Symbol> cells;

  CellMatrix() = default;
  CellMatrix(uint64_t l, uint32_t node_count)
      : coords(l), nodes(node_count), cells(l * node_count, 0) {}

  Symbol cell(uint32_t node, uint64_t a) const {
    return cells[static_cast<size_t>(node - 1) * coords + a];
  }
  Symbol& cell(uint32_t node, uint64_t a) {
    return cells[static_cast<size_t>(node - 1) * coords + a];
  }
  std::vector<Symbol> column(uint32_t node) const;

  bool operator==(const CellMatrix&) const = default;
};

using Codeword = CellMatrix;

// The r*l parity checks; entry t*l + a is row a of check t. Zero exactly
// when the word is in the code.
std::vector<Symbol> syndrome(const CodeParams& p, const Codeword& word);

// Fills erased columns so that every parity check holds. The solver for a
// fixed erasure pattern is built once and reused across stripes.
class Decoder {
 public:
  Decoder(const CodeParams& p, std::vector<uint32_t> erased);

  // `known` must be l x n; erased columns are ignored and replaced. Output
  // equals the input on all known columns and has zero syndrome.
  Codeword decode(const Codeword& known) const;

  const std::vector<uint32_t>& erased() const { return erased_; }

 private:
  struct KnownTerm {
    uint32_t row;  // local row, indexes into the solver
    uint32_t node;
    uint64_t coord;
    Symbol coeff;
  };

  CodeParams params_;
  std::vector<uint32_t> erased_;
  Matrix solver_;  // inverse of the pivot-row square system
  std::vector<KnownTerm> known_terms_;
};

// Systematic encoder: nodes 1..k hold the data, k+1..n the parities.
class Encoder {
 public:
  explicit Encoder(const CodeParams& p);
  Codeword encode(const CellMatrix& data) const;  // data is l x k

 private:
  uint32_t k_;
  Decoder core_;
};

Codeword encode(const CodeParams& p, const CellMatrix& data);
Codeword decode(const CodeParams& p, const Codeword& known,
                const std::vector<uint32_t>& erased);

}  // namespace oamc
