#include "autfn/nielsen.hpp"

#include <string>

#include "autfn/error.hpp"

namespace autfn {

  namespace {
    void check_pair(int n, Letter a, Letter b) {
      if (a.index > n || b.index > n) {
        throw PreconditionError("letter index exceeds rank " + std::to_string(n));
      }
      if (a.index == b.index) {
        throw PreconditionError("Nielsen map E_ab needs a != b^{+-1}");
      }
    }

    Word substitute(std::vector<Word> const& images, int rank, Word const& w) {
      if (w.rank() != rank) {
        throw RankMismatch("automorphism and word ranks differ");
      }
      WordBuilder b(rank);
      for (code_t c : w.letters()) {
        Word const& im = images[static_cast<std::size_t>(std::abs(c) - 1)];
        if (c > 0) {
          b.append(im.letters());
        } else {
          b.append_inverse(im.letters());
        }
      }
      return std::move(b).build();
    }
  }  // namespace

  Automorphism Automorphism::identity(int n) {
    Automorphism s;
    s._rank = n;
    for (int i = 1; i <= n; ++i) {
      s._images.push_back(Word::generator(n, i));
    }
    s._inverse_images = s._images;
    return s;
  }

  Automorphism Automorphism::nielsen(int n, Letter a, Letter b) {
    check_pair(n, a, b);
    Automorphism s  = identity(n);
    auto         i  = static_cast<std::size_t>(a.index - 1);
    Word         xi = Word::generator(n, a.index);
    Word         bw = Word::generator(n, b.index, b.sign);
    if (a.sign > 0) {
      s._images[i]         = xi * bw;
      s._inverse_images[i] = xi * bw.inverse();
    } else {
      s._images[i]         = bw.inverse() * xi;
      s._inverse_images[i] = bw * xi;
    }
    return s;
  }

  Automorphism Automorphism::monomial(int n, Letter a, Letter b) {
    return compose(compose(nielsen(n, b, a), nielsen(n, a.inverse(), b)),
                   nielsen(n, b.inverse(), a.inverse()));
  }

  Automorphism Automorphism::signed_permutation(int n, std::vector<code_t> const& image_codes) {
    if (static_cast<int>(image_codes.size()) != n) {
      throw RankMismatch("signed permutation needs n images");
    }
    Automorphism     s;
    std::vector<int> seen(static_cast<std::size_t>(n + 1), 0);
    s._rank = n;
    s._images.resize(static_cast<std::size_t>(n));
    s._inverse_images.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
      code_t c = image_codes[static_cast<std::size_t>(i - 1)];
      if (c == 0 || std::abs(c) > n || seen[std::abs(c)]++) {
        throw PreconditionError("not a signed permutation");
      }
      s._images[i - 1] = Word::generator(n, std::abs(c), c > 0 ? 1 : -1);
      s._inverse_images[std::abs(c) - 1] = Word::generator(n, i, c > 0 ? 1 : -1);
    }
    return s;
  }

  Word Automorphism::apply(Word const& w) const {
    return substitute(_images, _rank, w);
  }

  Letter Automorphism::apply_to_letter(Letter l) const {
    Word const& im = image(l.index);
    if (im.size() != 1) {
      throw PreconditionError("automorphism does not permute letters");
    }
    Letter r = im[0];
    return l.sign > 0 ? r : r.inverse();
  }

  Automorphism Automorphism::inverse() const {
    Automorphism s;
    s._rank           = _rank;
    s._images         = _inverse_images;
    s._inverse_images = _images;
    return s;
  }

  bool Automorphism::is_identity() const {
    for (int i = 1; i <= _rank; ++i) {
      Word const& im = _images[static_cast<std::size_t>(i - 1)];
      if (im.size() != 1 || im.letters()[0] != i) {
        return false;
      }
    }
    return true;
  }

  Automorphism compose(Automorphism const& s, Automorphism const& t) {
    if (s._rank != t._rank) {
      throw RankMismatch("cannot compose automorphisms of different rank");
    }
    Automorphism r;
    r._rank = s._rank;
    r._images.reserve(s._images.size());
    r._inverse_images.reserve(s._images.size());
    for (auto const& im : s._images) {
      r._images.push_back(substitute(t._images, t._rank, im));
    }
    // (st)^-1 = t^-1 s^-1
    for (auto const& im : t._inverse_images) {
      r._inverse_images.push_back(substitute(s._inverse_images, s._rank, im));
    }
    return r;
  }

  SmallMatrix induced_matrix(Automorphism const& s) {
    int         n = s.rank();
    SmallMatrix a(n);
    for (int k = 1; k <= n; ++k) {
      for (code_t c : s.image(k).letters()) {
        int r = std::abs(c) - 1;
        a(r, k - 1) += (c > 0 ? 1 : -1);
      }
    }
    return a;
  }

  bool is_special(Automorphism const& s) {
    return determinant(induced_matrix(s)) == 1;
  }

  char const* coeff_name(Coeff m) {
    return m == Coeff::H ? "H" : "Hdual";
  }

  CoeffVector CoeffVector::basis(Coeff m, int n, int p) {
    if (p < 1 || p > n) {
      throw PreconditionError("basis index out of range");
    }
    CoeffVector v;
    v.space = m;
    v.coords.assign(static_cast<std::size_t>(n), 0);
    v.coords[static_cast<std::size_t>(p - 1)] = 1;
    return v;
  }

  CoeffVector act_coeff(Automorphism const& s, CoeffVector const& v) {
    if (static_cast<int>(v.coords.size()) != s.rank()) {
      throw RankMismatch("coefficient vector length differs from rank");
    }
    // s.v = v^(s^-1): matrix A(s^-1) = A(s)^-1 on H; on H^* the contragredient
    // action is A(s)^T.
    SmallMatrix a = induced_matrix(s);
    CoeffVector r;
    r.space  = v.space;
    r.coords = v.space == Coeff::H ? unimodular_inverse(a).apply(v.coords)
                                   : a.transpose().apply(v.coords);
    return r;
  }

  CoeffVector act_coeff(Letter a, Letter b, CoeffVector const& v) {
    int n = static_cast<int>(v.coords.size());
    check_pair(n, a, b);
    std::int64_t sgn = a.sign * b.sign;
    std::size_t  i = static_cast<std::size_t>(a.index - 1), j = static_cast<std::size_t>(b.index - 1);
    CoeffVector  r = v;
    if (v.space == Coeff::H) {
      // e_i -> e_i - sgn e_j, other basis vectors fixed.
      r.coords[j] = checked_sub(r.coords[j], checked_mul(sgn, v.coords[i]));
    } else {
      // e_j^* -> e_j^* + sgn e_i^*, other basis vectors fixed.
      r.coords[i] = checked_add(r.coords[i], checked_mul(sgn, v.coords[j]));
    }
    return r;
  }

  SmallMatrix right_action_matrix(Coeff m, SmallMatrix const& a) {
    return m == Coeff::H ? a : unimodular_inverse(a).transpose();
  }

}  // namespace autfn
