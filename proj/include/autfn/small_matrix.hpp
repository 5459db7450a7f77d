#pragma once

#include <cstdint>
#include <vector>

namespace autfn {

  // Overflow-checked int64 helpers; throw std::overflow_error instead of
  // wrapping.
  std::int64_t checked_add(std::int64_t a, std::int64_t b);
  std::int64_t checked_sub(std::int64_t a, std::int64_t b);
  std::int64_t checked_mul(std::int64_t a, std::int64_t b);

  // Dense square integer matrix of small dimension (the rank n).
  class SmallMatrix {
   public:
    SmallMatrix() = default;
    explicit SmallMatrix(int n) : _n(n), _a(static_cast<std::size_t>(n * n), 0) {}

    static SmallMatrix identity(int n);

    int dim() const noexcept {
      return _n;
    }
    std::int64_t& operator()(int r, int c) noexcept {
      return _a[static_cast<std::size_t>(r * _n + c)];
    }
    std::int64_t operator()(int r, int c) const noexcept {
      return _a[static_cast<std::size_t>(r * _n + c)];
    }
    bool operator==(SmallMatrix const&) const = default;

    SmallMatrix transpose() const;
    std::vector<std::int64_t> apply(std::vector<std::int64_t> const& v) const;

    // row r += k * row s, and column analogues; used to multiply by
    // elementary matrices in O(n).
    void add_row(int r, int s, std::int64_t k);
    void add_col(int c, int s, std::int64_t k);
    void negate_row(int r);
    void negate_col(int c);

   private:
    int                       _n = 0;
    std::vector<std::int64_t> _a;
  };

  SmallMatrix operator*(SmallMatrix const& a, SmallMatrix const& b);
  std::int64_t determinant(SmallMatrix const& a);
  // Exact inverse of a matrix with determinant +-1.
  SmallMatrix unimodular_inverse(SmallMatrix const& a);

}  // namespace autfn
