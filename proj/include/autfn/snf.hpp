#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "autfn/integer.hpp"

namespace autfn {

  class SparseMatrix;

  // Dense exact integer matrix, row-major.
  class DenseMatrix {
   public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols)
        : _rows(rows), _cols(cols), _a(static_cast<std::size_t>(rows) * cols) {}

    static DenseMatrix identity(int n);

    int rows() const noexcept {
      return _rows;
    }
    int cols() const noexcept {
      return _cols;
    }
    Integer& operator()(int r, int c) noexcept {
      return _a[static_cast<std::size_t>(r) * _cols + c];
    }
    Integer const& operator()(int r, int c) const noexcept {
      return _a[static_cast<std::size_t>(r) * _cols + c];
    }

    DenseMatrix transpose() const;
    bool        is_identity() const;

    friend bool        operator==(DenseMatrix const&, DenseMatrix const&);
    friend DenseMatrix operator*(DenseMatrix const&, DenseMatrix const&);

   private:
    int                  _rows = 0, _cols = 0;
    std::vector<Integer> _a;
  };

  struct SNFResult {
    int rows = 0, cols = 0;
    int rank = 0;
    // d_1 | d_2 | ... | d_rank, all positive
    std::vector<Integer> divisors;
    bool                 has_transforms = false;
    // U A V = D with U Uinv = 1 and V Vinv = 1.
    DenseMatrix U, Uinv, V, Vinv;
  };

  SNFResult snf(DenseMatrix a, bool transforms = true);

  // Checks the divisor chain, and with transforms U A V = D and the two
  // inverse pairs. On failure the reason goes to *why.
  bool verify_snf(DenseMatrix const& a, SNFResult const& r, std::string* why = nullptr);

  // A finitely generated module over L = Z[1/2]: L^free_rank plus the
  // cyclic summands L/qL for the listed odd q > 1.
  struct LModule {
    int                  free_rank = 0;
    std::vector<Integer> torsion;

    bool trivial() const {
      return free_rank == 0 && torsion.empty();
    }
    // minimal number of generators
    long        generators() const {
      return free_rank + static_cast<long>(torsion.size());
    }
    std::string describe() const;
  };

  // Cokernel over L of the map Z^cols -> Z^rows with the given SNF.
  LModule to_L(SNFResult const& r);
  // Same from a divisor list and ambient rank.
  LModule to_L(int ambient, std::vector<Integer> const& divisors);

  // Lattice spanned by integer column vectors of a fixed dimension, kept in
  // echelon form (distinct leading positions). Every update is a unimodular
  // operation on the current generators, so the span never changes except by
  // the inserted vector.
  class ColumnLattice {
   public:
    using SparseVector = std::vector<std::pair<int, Integer>>;

    explicit ColumnLattice(int dim);

    int dim() const noexcept {
      return _dim;
    }
    int rank() const noexcept {
      return static_cast<int>(_basis.size());
    }
    void insert(SparseVector const& v);
    bool contains(SparseVector const& v) const;
    // dim x rank, basis vectors as columns ordered by leading position
    DenseMatrix basis() const;

   private:
    int                               _dim;
    std::vector<std::vector<Integer>> _basis;
    std::vector<int>                  _lead;  // position -> basis index or -1
  };

  // Rank of a sparse matrix over Z/p.
  int rank_mod_p(SparseMatrix const& a, std::uint32_t p);

}  // namespace autfn
