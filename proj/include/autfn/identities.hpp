#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "autfn/presentation.hpp"

namespace autfn {

  // One factor u r^e u^-1 of a relator expression.  `relator` indexes the
  // reduced relators of the presentation; when it is -1 the relator is the
  // explicit word `word` (a Gersten relator, say).
  struct Factor {
    XWord conjugator;
    int   relator  = -1;
    XWord word;
    int   exponent = 1;
  };

  class RelatorExpression {
   public:
    explicit RelatorExpression(int rank = 0) : _rank(rank) {}

    int rank() const noexcept {
      return _rank;
    }
    std::vector<Factor> const& factors() const noexcept {
      return _factors;
    }
    std::size_t size() const noexcept {
      return _factors.size();
    }
    bool empty() const noexcept {
      return _factors.empty();
    }
    // True when every factor references a reduced relator.
    bool reduced_only() const;

    RelatorExpression& append(Factor f);
    RelatorExpression& append(RelatorExpression const& e);
    // e -> u e u^-1
    RelatorExpression& conjugate_by(XWord const& u);
    RelatorExpression  inverse() const;

   private:
    int                 _rank;
    std::vector<Factor> _factors;
  };

  RelatorExpression operator*(RelatorExpression a, RelatorExpression const& b);
  RelatorExpression conj(XWord const& u, RelatorExpression e);

  struct IdentityCertificate {
    std::string       family;
    std::string       tuple;
    XWord             lhs;
    RelatorExpression rhs;
    bool              verified = false;
    XWord             residual;  // lhs^-1 expand(rhs) when not verified

    // One line of the certificate log.
    std::string log_line() const;
  };

  // How Gersten relators appearing in lemma formulas are represented: as a
  // single explicit factor (to check the printed statement verbatim) or
  // rewritten in the reduced relators (for use in relation rows).
  enum class RelMode { Raw, Normalized };

  // A Gersten relator described by its letters.
  struct Shape {
    enum Kind { Comm, R, H, W4 } kind = Comm;
    // Comm: [E_{l0 l1}, E_{l2 l3}]; R: r_{l0 l1}(l2); H: h_{l0 l1};
    // W4: w_{l0 l1}^4.
    std::array<Letter, 4> l{};
  };

  class IdentityEngine {
   public:
    explicit IdentityEngine(Presentation const& p);

    Presentation const& presentation() const noexcept {
      return _p;
    }
    int xrank() const noexcept {
      return _p.num_generators();
    }

    // --- expressions and certification --------------------------------
    RelatorExpression reduced(int relator_index, int exponent = 1) const;
    // An explicit relator word; pi(w) = 1 is checked.
    RelatorExpression raw(XWord const& w, int exponent = 1) const;
    XWord             expand(RelatorExpression const& e) const;
    IdentityCertificate certify(XWord const& lhs, RelatorExpression rhs,
                                std::string family = {}, std::string tuple = {}) const;
    // Certificate for an expression claimed to expand to the identity.
    IdentityCertificate certify_null(RelatorExpression rhs, std::string family = {},
                                     std::string tuple = {}) const;

    // --- Gersten relators in terms of reduced relators ----------------
    Shape             shape_of(int relator_index) const;
    XWord             shape_word(Shape const& s) const;
    RelatorExpression normalize(Shape const& s) const;
    RelatorExpression normalize_commutator(Letter a, Letter b, Letter c, Letter d) const;
    RelatorExpression normalize_r(Letter a, Letter c, Letter b) const;
    RelatorExpression normalize_h(Letter a, Letter b) const;
    // Second normalization route for h with both letters inverted.
    RelatorExpression normalize_h_alt(Letter a, Letter b) const;
    RelatorExpression normalize_w4(Letter a, Letter b) const;

    // --- monomial maps --------------------------------------------------
    // Image of a letter under the monomial permutation of w_ab.
    static Letter sigma(Letter a, Letter b, Letter c);
    Shape         sigma(Letter a, Letter b, Shape s) const;
    // Symbol-wise image E_cd -> E_{c^s d^s} of an XWord.
    XWord sigma_word(Letter a, Letter b, XWord const& v) const;
    // Whether the transport of E_cd under w_ab has a base case.
    static bool transport_supported(Letter a, Letter b, Letter c, Letter d);
    bool        transport_supported(Letter a, Letter b, XWord const& v) const;

    // (w_ab^-1 E_cd w_ab)^-1 E_{c^s d^s} from the lemma that covers (c, d).
    RelatorExpression base_transport(Letter a, Letter b, Letter c, Letter d,
                                     RelMode mode = RelMode::Normalized) const;
    // (w_ab^-1 V w_ab)^-1 V^s, built from the base cases by the cocycle rule.
    RelatorExpression conj_transport(Letter a, Letter b, XWord const& v) const;
    // Transport along a product of monomial maps W = w_{a1 b1} ... w_{ak bk}:
    // (W^-1 V W)^-1 V^(s1...sk).
    RelatorExpression conj_transport(std::vector<std::pair<Letter, Letter>> const& w,
                                     XWord const& v) const;
    // (x^-1 V x)^-1 V for a generator (or inverse) x commuting with every
    // letter of V in the sense of the Gersten relator R2.
    RelatorExpression commute_transport(code_t x, XWord const& v) const;
    bool              commutes(code_t x, code_t y) const;

    // --- the printed identities ----------------------------------------
    // Transport of E_cd under w_ab when exactly one of c, d meets {a, b}
    // (case 1: c = a^-1, 2: c = b^-1, 3..6: d = a, a^-1, b, b^-1).
    IdentityCertificate overlap_transport(int which, Letter a, Letter b, Letter other,
                                RelMode mode = RelMode::Raw) const;
    IdentityCertificate disjoint_transport(Letter a, Letter b, Letter c, Letter d,
                                RelMode mode = RelMode::Raw) const;
    IdentityCertificate r_inverse(Letter a, Letter b, Letter c,
                                  RelMode mode = RelMode::Raw) const;
    IdentityCertificate h_inverse(int which, Letter a, Letter b,
                                   RelMode mode = RelMode::Raw) const;
    IdentityCertificate split_transport(Letter a, Letter b, Letter c, Letter d,
                            RelMode mode = RelMode::Raw) const;
    // [E_{ij^-1}, E_{kj^-1}] = E_{ij^-1} E_{kj^-1} [E_ij, E_kj] E_ij E_kj
    IdentityCertificate sample_rewrite(int i, int j, int k) const;

    // Null certificates for the transported r and h relators: the
    // rewritten form of r_{c^s d^s}(e^s) (resp. h_{c^s d^s}) times the
    // inverse of its normal form. verbatim=true omits the middle factor
    // w^-1 h_cd w from the h rewrite, as in the printed display.
    IdentityCertificate eq21_null(Letter a, Letter b, Letter c, Letter d, Letter e) const;
    IdentityCertificate eq41_null(Letter a, Letter b, Letter c, Letter d,
                                  bool verbatim = false) const;
    static bool eq21_admissible(Letter a, Letter b, Letter c, Letter d, Letter e);
    static bool eq41_admissible(Letter a, Letter b, Letter c, Letter d);

   private:
    struct Rels;
    RelatorExpression commutator_expr(RelMode m, Letter a, Letter b, Letter c, Letter d) const;
    RelatorExpression r_expr(RelMode m, Letter a, Letter c, Letter b) const;
    RelatorExpression h_expr(RelMode m, Letter a, Letter b) const;
    RelatorExpression overlap_rhs(int which, Letter a, Letter b, Letter other, RelMode m) const;
    RelatorExpression disjoint_rhs(Letter a, Letter b, Letter c, Letter d, RelMode m) const;
    RelatorExpression split_rhs(Letter a, Letter b, Letter c, Letter d, RelMode m) const;
    RelatorExpression const& cached_base(Letter a, Letter b, int gen) const;
    XWord transport_lhs(Letter a, Letter b, XWord const& v) const;
    XWord E(Letter a, Letter b) const {
      return _p.embed_E(a, b);
    }
    XWord W(Letter a, Letter b) const {
      return _p.w_word(a, b);
    }

    Presentation const& _p;
    int                 _n;
    // base transports indexed by (monomial pair, generator)
    std::vector<RelatorExpression> _base;
    std::vector<char>              _base_ok;
  };

  // Certification of every printed identity over all letter tuples.
  struct SuiteFamily {
    std::string              name;
    long                     instances = 0;
    long                     verified = 0;
    std::vector<std::string> failures;  // log lines with the residual witness
  };

  struct SuiteResult {
    std::vector<SuiteFamily> families;
    double                   seconds = 0;

    bool ok() const {
      for (auto const& f : families)
        if (f.verified != f.instances) return false;
      return true;
    }
  };

  // Families: overlap, disjoint, r-inverse, h-inverse, split (each in the
  // printed and the normalized form), sample, eq-r, eq-h.
  std::vector<std::string> identity_suite_families();
  SuiteResult run_identity_suite(IdentityEngine const& eng, int threads = 1,
                                 std::vector<std::string> const& only = {});

}  // namespace autfn
