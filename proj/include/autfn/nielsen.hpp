#pragma once

#include <cstdint>
#include <vector>

#include "autfn/small_matrix.hpp"
#include "autfn/word.hpp"

namespace autfn {

  // Automorphism of F_n acting on the right: x^(st) = (x^s)^t.  The images
  // of the inverse map are carried along, so inverse() is free and every
  // value is invertible by construction.
  class Automorphism {
   public:
    Automorphism() = default;

    static Automorphism identity(int n);
    // The Nielsen map E_ab: a -> ab, letters other than a^{+-1} fixed.
    static Automorphism nielsen(int n, Letter a, Letter b);
    // The monomial map w_ab = E_ba E_{a^-1 b} E_{b^-1 a^-1}.
    static Automorphism monomial(int n, Letter a, Letter b);
    // x_i -> image_codes[i-1] (a single letter each, a signed permutation).
    static Automorphism signed_permutation(int n, std::vector<code_t> const& image_codes);

    int rank() const noexcept {
      return _rank;
    }
    // Image of x_i, 1-based.
    Word const& image(int i) const {
      return _images.at(static_cast<std::size_t>(i - 1));
    }
    Word        apply(Word const& w) const;
    Letter      apply_to_letter(Letter l) const;  // requires a letter image
    Automorphism inverse() const;
    bool         is_identity() const;

    bool operator==(Automorphism const& that) const {
      return _rank == that._rank && _images == that._images;
    }

   private:
    friend Automorphism compose(Automorphism const&, Automorphism const&);
    int               _rank = 0;
    std::vector<Word> _images;
    std::vector<Word> _inverse_images;
  };

  // x -> (x^s)^t.
  Automorphism compose(Automorphism const& s, Automorphism const& t);

  // Column k holds the coordinates of [x_k^s]; A(st) = A(t) A(s).
  SmallMatrix induced_matrix(Automorphism const& s);
  bool        is_special(Automorphism const& s);

  enum class Coeff { H, Hdual };
  char const* coeff_name(Coeff m);

  struct CoeffVector {
    Coeff                     space = Coeff::H;
    std::vector<std::int64_t> coords;

    static CoeffVector basis(Coeff m, int n, int p);  // e_p or e_p^*, 1-based
    bool operator==(CoeffVector const&) const = default;
  };

  // Left module action s . v := v^(s^-1) (on H) and its dual on H^*.
  CoeffVector act_coeff(Automorphism const& s, CoeffVector const& v);
  // Closed forms for the Nielsen symbol E_ab with a = x_i^eps, b = x_j^delta.
  CoeffVector act_coeff(Letter a, Letter b, CoeffVector const& v);

  // Matrix of the right action m.g := g^-1 . m for g with induced matrix A:
  // A on H, (A^-1)^T on H^*.
  SmallMatrix right_action_matrix(Coeff m, SmallMatrix const& a);

}  // namespace autfn
