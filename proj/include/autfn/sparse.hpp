#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "autfn/integer.hpp"

namespace autfn {

  struct Triplet {
    int     row = 0;
    int     col = 0;
    Integer value;
  };

  class DenseMatrix;

  // Exact sparse integer matrix. Entries are collected with add() and put in
  // canonical form (sorted by row then column, duplicates summed, zeros
  // dropped) by finalize().
  //
  // Text format: a header line "rows cols nnz" followed by one "row col value"
  // line per nonzero entry, 0-based indices, sorted by (row, col).
  class SparseMatrix {
   public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : _rows(rows), _cols(cols) {}

    int rows() const noexcept {
      return _rows;
    }
    int cols() const noexcept {
      return _cols;
    }
    std::size_t nnz() const noexcept {
      return _entries.size();
    }
    std::span<Triplet const> entries() const noexcept {
      return _entries;
    }

    void add(int r, int c, Integer const& v);
    void add(int r, int c, long v);
    void finalize();
    bool finalized() const noexcept {
      return _finalized;
    }

    SparseMatrix transpose() const;
    DenseMatrix  to_dense() const;
    // Entry lists per column, rows ascending.
    std::vector<std::vector<std::pair<int, Integer>>> columns() const;

    // Hex SHA-256 of the canonical text form.
    std::string content_hash() const;

    void                write_triplets(std::ostream& out) const;
    static SparseMatrix read_triplets(std::istream& in);

    friend bool operator==(SparseMatrix const&, SparseMatrix const&);

   private:
    int                  _rows = 0, _cols = 0;
    std::vector<Triplet> _entries;
    bool                 _finalized = true;
  };

  // a * b, both finalized.
  SparseMatrix multiply(SparseMatrix const& a, SparseMatrix const& b);

  std::string sha256_hex(std::string const& data);

}  // namespace autfn
