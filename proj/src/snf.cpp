#include "autfn/snf.hpp"

#include <algorithm>
#include <sstream>

#include "autfn/error.hpp"
#include "autfn/sparse.hpp"

namespace autfn {

  DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix d(n, n);
    for (int k = 0; k < n; ++k) {
      d(k, k) = 1;
    }
    return d;
  }

  DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(_cols, _rows);
    for (int r = 0; r < _rows; ++r) {
      for (int c = 0; c < _cols; ++c) {
        t(c, r) = (*this)(r, c);
      }
    }
    return t;
  }

  bool DenseMatrix::is_identity() const {
    if (_rows != _cols) {
      return false;
    }
    for (int r = 0; r < _rows; ++r) {
      for (int c = 0; c < _cols; ++c) {
        if ((*this)(r, c) != (r == c ? 1 : 0)) {
          return false;
        }
      }
    }
    return true;
  }

  bool operator==(DenseMatrix const& a, DenseMatrix const& b) {
    return a._rows == b._rows && a._cols == b._cols && a._a == b._a;
  }

  DenseMatrix operator*(DenseMatrix const& a, DenseMatrix const& b) {
    if (a._cols != b._rows) {
      throw PreconditionError("dense product dimension mismatch");
    }
    DenseMatrix out(a._rows, b._cols);
    for (int r = 0; r < a._rows; ++r) {
      for (int k = 0; k < a._cols; ++k) {
        Integer const& x = a(r, k);
        if (x == 0) {
          continue;
        }
        for (int c = 0; c < b._cols; ++c) {
          if (b(k, c) != 0) {
            mpz_addmul(out(r, c).get_mpz_t(), x.get_mpz_t(), b(k, c).get_mpz_t());
          }
        }
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Smith normal form
  ////////////////////////////////////////////////////////////////////////

  namespace {
    int cmpabs(Integer const& a, Integer const& b) {
      return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
    }
    int cmpabs(Integer const& a, unsigned long b) {
      return mpz_cmpabs_ui(a.get_mpz_t(), b);
    }

    struct Snf {
      DenseMatrix& a;
      bool         tr;
      DenseMatrix  U, Ui, V, Vi;
      int          m, n;

      Snf(DenseMatrix& a_, bool t) : a(a_), tr(t), m(a_.rows()), n(a_.cols()) {
        if (tr) {
          U = Ui = DenseMatrix::identity(m);
          V = Vi = DenseMatrix::identity(n);
        }
      }

      static void row_axpy(DenseMatrix& d, int dst, int src, Integer const& q, int from = 0) {
        // row dst -= q * row src
        for (int c = from; c < d.cols(); ++c) {
          if (d(src, c) != 0) {
            mpz_submul(d(dst, c).get_mpz_t(), q.get_mpz_t(), d(src, c).get_mpz_t());
          }
        }
      }
      static void col_axpy(DenseMatrix& d, int dst, int src, Integer const& q, int from = 0) {
        for (int r = from; r < d.rows(); ++r) {
          if (d(r, src) != 0) {
            mpz_submul(d(r, dst).get_mpz_t(), q.get_mpz_t(), d(r, src).get_mpz_t());
          }
        }
      }
      static void swap_rows(DenseMatrix& d, int i, int j) {
        for (int c = 0; c < d.cols(); ++c) {
          mpz_swap(d(i, c).get_mpz_t(), d(j, c).get_mpz_t());
        }
      }
      static void swap_cols(DenseMatrix& d, int i, int j) {
        for (int r = 0; r < d.rows(); ++r) {
          mpz_swap(d(r, i).get_mpz_t(), d(r, j).get_mpz_t());
        }
      }

      // row i -= q row j
      void row_op(int i, int j, Integer const& q, int from) {
        row_axpy(a, i, j, q, from);
        if (tr) {
          row_axpy(U, i, j, q);
          Integer mq = -q;
          col_axpy(Ui, j, i, mq);
        }
      }
      // col i -= q col j
      void col_op(int i, int j, Integer const& q, int from) {
        col_axpy(a, i, j, q, from);
        if (tr) {
          col_axpy(V, i, j, q);
          Integer mq = -q;
          row_axpy(Vi, j, i, mq);
        }
      }
      void row_swap(int i, int j) {
        if (i == j) return;
        swap_rows(a, i, j);
        if (tr) {
          swap_rows(U, i, j);
          swap_cols(Ui, i, j);
        }
      }
      void col_swap(int i, int j) {
        if (i == j) return;
        swap_cols(a, i, j);
        if (tr) {
          swap_cols(V, i, j);
          swap_rows(Vi, i, j);
        }
      }
      void row_negate(int i) {
        for (int c = 0; c < n; ++c) a(i, c) = -a(i, c);
        if (tr) {
          for (int c = 0; c < m; ++c) U(i, c) = -U(i, c);
          for (int r = 0; r < m; ++r) Ui(r, i) = -Ui(r, i);
        }
      }

      // Smallest nonzero |entry| in the trailing block; false if zero.
      bool find_pivot(int t, int& pr, int& pc) const {
        bool found = false;
        for (int r = t; r < m; ++r) {
          for (int c = t; c < n; ++c) {
            Integer const& x = a(r, c);
            if (x == 0) continue;
            if (!found || cmpabs(x, a(pr, pc)) < 0) {
              pr = r, pc = c, found = true;
              if (x == 1 || x == -1) return true;
            }
          }
        }
        return found;
      }

      int run() {
        int     t = 0;
        Integer q;
        for (; t < std::min(m, n); ++t) {
          int pr = t, pc = t;
          if (!find_pivot(t, pr, pc)) break;
          row_swap(t, pr);
          col_swap(t, pc);
          for (;;) {
            bool clean = true;
            for (int r = t + 1; r < m; ++r) {
              if (a(r, t) == 0) continue;
              mpz_fdiv_q(q.get_mpz_t(), a(r, t).get_mpz_t(), a(t, t).get_mpz_t());
              row_op(r, t, q, t);
              if (a(r, t) != 0) clean = false;
            }
            for (int c = t + 1; c < n; ++c) {
              if (a(t, c) == 0) continue;
              mpz_fdiv_q(q.get_mpz_t(), a(t, c).get_mpz_t(), a(t, t).get_mpz_t());
              col_op(c, t, q, t);
              if (a(t, c) != 0) clean = false;
            }
            if (!clean) {
              // a smaller remainder appeared in row or column t
              int br = t, bc = t;
              for (int r = t + 1; r < m; ++r)
                if (a(r, t) != 0 && cmpabs(a(r, t), a(br, bc)) < 0) br = r, bc = t;
              for (int c = t + 1; c < n; ++c)
                if (a(t, c) != 0 && cmpabs(a(t, c), a(br, bc)) < 0) br = t, bc = c;
              row_swap(t, br);
              col_swap(t, bc);
              continue;
            }
            if (cmpabs(a(t, t), 1) == 0) break;
            int bad = -1;
            for (int r = t + 1; r < m && bad < 0; ++r) {
              for (int c = t + 1; c < n; ++c) {
                if (a(r, c) != 0 && !mpz_divisible_p(a(r, c).get_mpz_t(), a(t, t).get_mpz_t())) {
                  bad = r;
                  break;
                }
              }
            }
            if (bad < 0) break;
            Integer mone(-1);
            row_op(t, bad, mone, t);
          }
          if (a(t, t) < 0) row_negate(t);
        }
        return t;
      }
    };
  }  // namespace

  SNFResult snf(DenseMatrix a, bool transforms) {
    SNFResult res;
    res.rows = a.rows();
    res.cols = a.cols();
    Snf s(a, transforms);
    res.rank = s.run();
    for (int k = 0; k < res.rank; ++k) {
      res.divisors.push_back(a(k, k));
    }
    res.has_transforms = transforms;
    if (transforms) {
      res.U    = std::move(s.U);
      res.Uinv = std::move(s.Ui);
      res.V    = std::move(s.V);
      res.Vinv = std::move(s.Vi);
    }
    return res;
  }

  bool verify_snf(DenseMatrix const& a, SNFResult const& r, std::string* why) {
    auto fail = [&](std::string const& s) {
      if (why) *why = s;
      return false;
    };
    for (int k = 0; k < r.rank; ++k) {
      if (r.divisors[static_cast<std::size_t>(k)] <= 0) return fail("nonpositive divisor");
      if (k > 0
          && !mpz_divisible_p(r.divisors[static_cast<std::size_t>(k)].get_mpz_t(),
                              r.divisors[static_cast<std::size_t>(k - 1)].get_mpz_t()))
        return fail("divisor chain broken at " + std::to_string(k));
    }
    if (!r.has_transforms) return true;
    DenseMatrix d = r.U * a * r.V;
    for (int i = 0; i < d.rows(); ++i) {
      for (int j = 0; j < d.cols(); ++j) {
        Integer want = (i == j && i < r.rank) ? r.divisors[static_cast<std::size_t>(i)] : Integer(0);
        if (d(i, j) != want) return fail("U A V differs from D");
      }
    }
    if (!(r.U * r.Uinv).is_identity()) return fail("U is not unimodular");
    if (!(r.V * r.Vinv).is_identity()) return fail("V is not unimodular");
    return true;
  }

  std::string LModule::describe() const {
    if (trivial()) return "0";
    std::ostringstream s;
    bool               first = true;
    if (free_rank > 0) {
      s << "L";
      if (free_rank > 1) s << "^" << free_rank;
      first = false;
    }
    for (auto const& q : torsion) {
      s << (first ? "" : " + ") << "L/" << q.get_str() << "L";
      first = false;
    }
    return s.str();
  }

  LModule to_L(int ambient, std::vector<Integer> const& divisors) {
    LModule m;
    m.free_rank = ambient - static_cast<int>(divisors.size());
    for (auto const& d : divisors) {
      Integer odd = split_two(d).odd;
      if (odd != 1) m.torsion.push_back(odd);
    }
    return m;
  }

  LModule to_L(SNFResult const& r) {
    return to_L(r.rows, r.divisors);
  }

  ////////////////////////////////////////////////////////////////////////
  // ColumnLattice
  ////////////////////////////////////////////////////////////////////////

  ColumnLattice::ColumnLattice(int dim) : _dim(dim), _lead(static_cast<std::size_t>(dim), -1) {}

  void ColumnLattice::insert(SparseVector const& sv) {
    std::vector<Integer> v(static_cast<std::size_t>(_dim));
    bool                 any = false;
    for (auto const& [i, x] : sv) {
      if (i < 0 || i >= _dim) throw PreconditionError("lattice vector index out of range");
      v[static_cast<std::size_t>(i)] += x;
      any = any || x != 0;
    }
    if (!any) return;
    Integer g, s, t, p, q, tmp;
    for (int pos = 0; pos < _dim; ++pos) {
      auto ps = static_cast<std::size_t>(pos);
      if (v[ps] == 0) continue;
      int bi = _lead[ps];
      if (bi < 0) {
        _lead[ps] = static_cast<int>(_basis.size());
        _basis.push_back(std::move(v));
        return;
      }
      auto& b = _basis[static_cast<std::size_t>(bi)];
      if (mpz_divisible_p(v[ps].get_mpz_t(), b[ps].get_mpz_t())) {
        mpz_divexact(q.get_mpz_t(), v[ps].get_mpz_t(), b[ps].get_mpz_t());
        for (int k = pos; k < _dim; ++k) {
          auto ks = static_cast<std::size_t>(k);
          if (b[ks] != 0) mpz_submul(v[ks].get_mpz_t(), q.get_mpz_t(), b[ks].get_mpz_t());
        }
        continue;
      }
      // (b, v) <- (s b + t v, (b_pos/g) v - (v_pos/g) b), a unimodular step
      xgcd(g, s, t, b[ps], v[ps]);
      mpz_divexact(p.get_mpz_t(), b[ps].get_mpz_t(), g.get_mpz_t());
      mpz_divexact(q.get_mpz_t(), v[ps].get_mpz_t(), g.get_mpz_t());
      if (s * p + t * q != 1) throw Error("lattice Bezout step is not unimodular");
      for (int k = pos; k < _dim; ++k) {
        auto ks = static_cast<std::size_t>(k);
        if (b[ks] == 0 && v[ks] == 0) continue;
        tmp   = s * b[ks] + t * v[ks];
        v[ks] = p * v[ks] - q * b[ks];
        b[ks] = tmp;
      }
    }
  }

  bool ColumnLattice::contains(SparseVector const& sv) const {
    std::vector<Integer> v(static_cast<std::size_t>(_dim));
    for (auto const& [i, x] : sv) v[static_cast<std::size_t>(i)] += x;
    Integer q;
    for (int pos = 0; pos < _dim; ++pos) {
      auto ps = static_cast<std::size_t>(pos);
      if (v[ps] == 0) continue;
      int bi = _lead[ps];
      if (bi < 0) return false;
      auto const& b = _basis[static_cast<std::size_t>(bi)];
      if (!mpz_divisible_p(v[ps].get_mpz_t(), b[ps].get_mpz_t())) return false;
      mpz_divexact(q.get_mpz_t(), v[ps].get_mpz_t(), b[ps].get_mpz_t());
      for (int k = pos; k < _dim; ++k) {
        auto ks = static_cast<std::size_t>(k);
        if (b[ks] != 0) mpz_submul(v[ks].get_mpz_t(), q.get_mpz_t(), b[ks].get_mpz_t());
      }
    }
    return true;
  }

  DenseMatrix ColumnLattice::basis() const {
    DenseMatrix d(_dim, rank());
    int         c = 0;
    for (int pos = 0; pos < _dim; ++pos) {
      int bi = _lead[static_cast<std::size_t>(pos)];
      if (bi < 0) continue;
      auto const& b = _basis[static_cast<std::size_t>(bi)];
      for (int r = 0; r < _dim; ++r) d(r, c) = b[static_cast<std::size_t>(r)];
      ++c;
    }
    return d;
  }

  ////////////////////////////////////////////////////////////////////////
  // rank mod p
  ////////////////////////////////////////////////////////////////////////

  int rank_mod_p(SparseMatrix const& a, std::uint32_t p) {
    // echelon over the columns, each stored densely mod p
    int                                dim = a.rows();
    std::vector<std::vector<uint64_t>> basis;
    std::vector<int>                   lead(static_cast<std::size_t>(dim), -1);
    auto                               cols = a.columns();
    auto inv = [p](uint64_t x) {
      uint64_t r = 1, b = x % p, e = p - 2;
      while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
      }
      return r;
    };
    std::vector<uint64_t> v(static_cast<std::size_t>(dim));
    for (auto const& col : cols) {
      std::fill(v.begin(), v.end(), 0);
      int first = dim;
      for (auto const& [r, x] : col) {
        v[static_cast<std::size_t>(r)] = mpz_fdiv_ui(x.get_mpz_t(), p);
        if (v[static_cast<std::size_t>(r)]) first = std::min(first, r);
      }
      for (int pos = first; pos < dim; ++pos) {
        auto ps = static_cast<std::size_t>(pos);
        if (v[ps] == 0) continue;
        int bi = lead[ps];
        if (bi < 0) {
          uint64_t iv = inv(v[ps]);
          for (auto& x : v) x = x * iv % p;
          lead[ps] = static_cast<int>(basis.size());
          basis.push_back(v);
          break;
        }
        auto const& b = basis[static_cast<std::size_t>(bi)];
        uint64_t    f = v[ps];
        for (int k = pos; k < dim; ++k) {
          auto ks = static_cast<std::size_t>(k);
          if (b[ks]) v[ks] = (v[ks] + (p - f) * b[ks]) % p;
        }
      }
    }
    return static_cast<int>(basis.size());
  }

}  // namespace autfn
