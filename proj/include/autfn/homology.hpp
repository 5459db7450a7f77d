#pragma once

#include <map>
#include <string>
#include <vector>

#include "autfn/integer.hpp"
#include "autfn/nielsen.hpp"
#include "autfn/presentation.hpp"
#include "autfn/small_matrix.hpp"
#include "autfn/snf.hpp"
#include "autfn/sparse.hpp"

namespace autfn {

  // Element of the integral group ring Z[F], terms keyed by reduced word.
  class GroupRingElt {
   public:
    explicit GroupRingElt(int rank) : _rank(rank) {}
    static GroupRingElt of(Word const& w, Integer const& c = 1);

    int rank() const noexcept {
      return _rank;
    }
    std::map<Word, Integer> const& terms() const noexcept {
      return _terms;
    }
    bool is_zero() const noexcept {
      return _terms.empty();
    }

    GroupRingElt& add(Word const& w, Integer const& c);
    GroupRingElt& operator+=(GroupRingElt const& x);
    GroupRingElt& operator-=(GroupRingElt const& x);

    friend GroupRingElt operator+(GroupRingElt a, GroupRingElt const& b) {
      return a += b;
    }
    friend GroupRingElt operator-(GroupRingElt a, GroupRingElt const& b) {
      return a -= b;
    }
    friend GroupRingElt operator*(GroupRingElt const& a, GroupRingElt const& b);
    friend bool         operator==(GroupRingElt const&, GroupRingElt const&) = default;

   private:
    int                     _rank;
    std::map<Word, Integer> _terms;
  };

  // Left Fox derivative d w / d x_gen (gen is a positive generator code).
  GroupRingElt fox_derivative(Word const& w, code_t gen);

  // Right action m.g of F on the coefficient module through
  // F -> Aut^+ F_n -> GL(M); m.(gh) = (m.g).h.
  class ModuleAction {
   public:
    ModuleAction(Presentation const& p, Coeff m);

    Coeff coeff() const noexcept {
      return _m;
    }
    int dim() const noexcept {
      return _n;
    }
    // matrix of m -> m.x for a generator code x (negative for inverses)
    SmallMatrix const& matrix(code_t x) const;
    // v <- v.x
    void apply(code_t x, std::vector<std::int64_t>& v) const;
    // v <- v.u
    void apply(Word const& u, std::vector<std::int64_t>& v) const;

   private:
    Coeff                    _m;
    int                      _n;
    int                      _x;
    std::vector<SmallMatrix> _pos, _neg;
  };

  // Rows X x basis(M) (row (x-1)*n + i), columns E = R x basis(M)
  // (column k*n + p - 1 for relator k and basis vector e_p): the column of
  // r (x) e_p is sum_x (e_p . dr/dx) (x) [x].
  SparseMatrix phi_matrix(Presentation const& p, Coeff m, int threads = 1);
  // Boundary M^X -> M, (m_x) -> sum_x (m_x . x - m_x).
  SparseMatrix d1_matrix(Presentation const& p, Coeff m);

  struct H1Result {
    int   n = 0;
    Coeff coeff = Coeff::H;
    int   phi_rows = 0, phi_cols = 0;
    long  phi_nnz = 0;
    bool  chain_ok = false;       // d1 phi = 0
    bool  lattice_ok = false;     // every phi column lies in the computed span
    bool  snf_ok = false;         // every SNF verified with its transforms
    int   d1_rank = 0;
    int   kernel_rank = 0;        // rank of ker d1 = H_1(F, M)
    int   image_rank = 0;         // rank of phi (= L-rank of the image)
    std::vector<Integer>   phi_divisors;    // elementary divisors of phi
    std::vector<Integer>   coker_divisors;  // of im phi inside ker d1
    LModule                h1;              // H_1(Aut^+ F_n, M_L)
    std::vector<std::pair<std::uint32_t, int>> rank_mod_p;
    std::string phi_hash;
    double      seconds = 0;
  };

  struct HomologyOptions {
    int  threads = 1;
    bool verify = true;  // inclusion checks and SNF reconstruction
  };

  H1Result h1_of_autplus(Presentation const& p, Coeff m, HomologyOptions const& opt = {});

  struct H2Certificate {
    bool        certified = false;
    long        bound = 0;
    int         image_rank = 0;
    int         kernel_rank = 0;
    std::string reason;
  };

  // Succeeds iff bound equals the L-rank of the image of phi and the image
  // has the expected position in ker d1: all of it over L for M = H,
  // corank one with free quotient for M = H*.
  H2Certificate h2_certificate(H1Result const& h, long bound);

  // The transfer remark for passing from Aut^+ F_n to Aut F_n.
  std::string transfer_remark();

}  // namespace autfn
