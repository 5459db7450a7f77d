#include "autfn/small_matrix.hpp"

#include <stdexcept>
#include <utility>

#include "autfn/error.hpp"

namespace autfn {

  std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
      throw std::overflow_error("int64 overflow in addition");
    }
    return r;
  }

  std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) {
      throw std::overflow_error("int64 overflow in subtraction");
    }
    return r;
  }

  std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
      throw std::overflow_error("int64 overflow in multiplication");
    }
    return r;
  }

  SmallMatrix SmallMatrix::identity(int n) {
    SmallMatrix m(n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = 1;
    }
    return m;
  }

  SmallMatrix SmallMatrix::transpose() const {
    SmallMatrix t(_n);
    for (int r = 0; r < _n; ++r) {
      for (int c = 0; c < _n; ++c) {
        t(c, r) = (*this)(r, c);
      }
    }
    return t;
  }

  std::vector<std::int64_t> SmallMatrix::apply(std::vector<std::int64_t> const& v) const {
    if (static_cast<int>(v.size()) != _n) {
      throw RankMismatch("vector length does not match matrix dimension");
    }
    std::vector<std::int64_t> out(v.size(), 0);
    for (int r = 0; r < _n; ++r) {
      std::int64_t s = 0;
      for (int c = 0; c < _n; ++c) {
        s = checked_add(s, checked_mul((*this)(r, c), v[c]));
      }
      out[r] = s;
    }
    return out;
  }

  void SmallMatrix::add_row(int r, int s, std::int64_t k) {
    for (int c = 0; c < _n; ++c) {
      (*this)(r, c) = checked_add((*this)(r, c), checked_mul(k, (*this)(s, c)));
    }
  }

  void SmallMatrix::add_col(int c, int s, std::int64_t k) {
    for (int r = 0; r < _n; ++r) {
      (*this)(r, c) = checked_add((*this)(r, c), checked_mul(k, (*this)(r, s)));
    }
  }

  void SmallMatrix::negate_row(int r) {
    for (int c = 0; c < _n; ++c) {
      (*this)(r, c) = -(*this)(r, c);
    }
  }

  void SmallMatrix::negate_col(int c) {
    for (int r = 0; r < _n; ++r) {
      (*this)(r, c) = -(*this)(r, c);
    }
  }

  SmallMatrix operator*(SmallMatrix const& a, SmallMatrix const& b) {
    if (a.dim() != b.dim()) {
      throw RankMismatch("matrix dimension mismatch");
    }
    int         n = a.dim();
    SmallMatrix m(n);
    for (int r = 0; r < n; ++r) {
      for (int k = 0; k < n; ++k) {
        std::int64_t x = a(r, k);
        if (x == 0) {
          continue;
        }
        for (int c = 0; c < n; ++c) {
          m(r, c) = checked_add(m(r, c), checked_mul(x, b(k, c)));
        }
      }
    }
    return m;
  }

  // Bareiss fraction-free elimination.
  std::int64_t determinant(SmallMatrix const& a) {
    int n = a.dim();
    if (n == 0) {
      return 1;
    }
    SmallMatrix  m    = a;
    std::int64_t sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
      if (m(k, k) == 0) {
        int p = k + 1;
        while (p < n && m(p, k) == 0) {
          ++p;
        }
        if (p == n) {
          return 0;
        }
        for (int c = 0; c < n; ++c) {
          std::swap(m(k, c), m(p, c));
        }
        sign = -sign;
      }
      for (int i = k + 1; i < n; ++i) {
        for (int j = k + 1; j < n; ++j) {
          std::int64_t t = checked_sub(checked_mul(m(i, j), m(k, k)),
                                       checked_mul(m(i, k), m(k, j)));
          m(i, j) = t / prev;
        }
      }
      prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
  }

  SmallMatrix unimodular_inverse(SmallMatrix const& a) {
    int         n = a.dim();
    SmallMatrix m = a, inv = SmallMatrix::identity(n);
    // Euclidean column reduction to the identity, mirrored on `inv` via row
    // operations of the same elementary matrices from the left.
    for (int k = 0; k < n; ++k) {
      while (true) {
        int best = -1;
        for (int r = k; r < n; ++r) {
          if (m(r, k) != 0 && (best < 0 || std::llabs(m(r, k)) < std::llabs(m(best, k)))) {
            best = r;
          }
        }
        if (best < 0) {
          throw PreconditionError("matrix is singular");
        }
        if (best != k) {
          for (int c = 0; c < n; ++c) {
            std::swap(m(k, c), m(best, c));
            std::swap(inv(k, c), inv(best, c));
          }
        }
        bool done = true;
        for (int r = k + 1; r < n; ++r) {
          if (m(r, k) != 0) {
            std::int64_t q = m(r, k) / m(k, k);
            m.add_row(r, k, -q);
            inv.add_row(r, k, -q);
            if (m(r, k) != 0) {
              done = false;
            }
          }
        }
        if (done) {
          break;
        }
      }
      if (m(k, k) != 1 && m(k, k) != -1) {
        throw PreconditionError("matrix is not unimodular");
      }
      if (m(k, k) == -1) {
        m.negate_row(k);
        inv.negate_row(k);
      }
    }
    for (int k = n - 1; k >= 0; --k) {
      for (int r = 0; r < k; ++r) {
        if (m(r, k) != 0) {
          std::int64_t q = m(r, k);
          m.add_row(r, k, -q);
          inv.add_row(r, k, -q);
        }
      }
    }
    return inv;
  }

}  // namespace autfn
