#include <catch_amalgamated.hpp>

#include "autfn/error.hpp"
#include "autfn/nielsen.hpp"
#include "test_support.hpp"

using namespace autfn;
using autfn::test::random_word;

namespace {
  Automorphism random_nielsen_product(std::mt19937_64& rng, int n, int len) {
    std::uniform_int_distribution<int> idx(1, n), sgn(0, 1);
    Automorphism                       s = Automorphism::identity(n);
    for (int t = 0; t < len; ++t) {
      int i = idx(rng), j = idx(rng);
      if (i == j) {
        continue;
      }
      s = compose(s, Automorphism::nielsen(n, Letter(i, sgn(rng) ? 1 : -1),
                                           Letter(j, sgn(rng) ? 1 : -1)));
    }
    return s;
  }
  CoeffVector vec(Coeff m, std::vector<std::int64_t> c) {
    return CoeffVector{m, std::move(c)};
  }
}  // namespace

TEST_CASE("Nielsen maps follow the defining rule", "[nielsen]") {
  auto e12 = Automorphism::nielsen(3, Letter(1), Letter(2));
  REQUIRE(e12.image(1) == Word(3, {1, 2}));
  REQUIRE(e12.image(2) == Word(3, {2}));
  auto e1m2 = Automorphism::nielsen(3, Letter(1, -1), Letter(2));
  REQUIRE(e1m2.image(1) == Word(3, {-2, 1}));
  // E_{ab} E_{ab^-1} = 1
  REQUIRE(compose(e12, Automorphism::nielsen(3, Letter(1), Letter(2, -1))).is_identity());
  REQUIRE(compose(e12, e12.inverse()).is_identity());
  REQUIRE_THROWS_AS(Automorphism::nielsen(3, Letter(1), Letter(1, -1)), PreconditionError);
  REQUIRE_THROWS_AS(Automorphism::nielsen(3, Letter(2), Letter(2)), PreconditionError);
}

TEST_CASE("monomial map w_12", "[nielsen]") {
  auto w = Automorphism::monomial(3, Letter(1), Letter(2));
  REQUIRE(w.image(1) == Word(3, {-2}));
  REQUIRE(w.image(2) == Word(3, {1}));
  REQUIRE(w.image(3) == Word(3, {3}));
  auto w4 = compose(compose(w, w), compose(w, w));
  REQUIRE(w4.is_identity());
  REQUIRE(!compose(w, w).is_identity());
  // rho(w_12) is the product of the three elementary matrices
  SmallMatrix m = induced_matrix(Automorphism::nielsen(3, Letter(2), Letter(1)));
  m = induced_matrix(Automorphism::nielsen(3, Letter(1, -1), Letter(2))) * m;
  m = induced_matrix(Automorphism::nielsen(3, Letter(2, -1), Letter(1, -1))) * m;
  REQUIRE(induced_matrix(w) == m);
  REQUIRE(is_special(w));
}

TEST_CASE("composition is substitution and matrices reverse order", "[nielsen]") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    auto s = random_nielsen_product(rng, 4, 6), u = random_nielsen_product(rng, 4, 6);
    Word w = random_word(rng, 4, 10);
    REQUIRE(compose(s, u).apply(w) == u.apply(s.apply(w)));
    REQUIRE(induced_matrix(compose(s, u)) == induced_matrix(u) * induced_matrix(s));
    REQUIRE(compose(s, Automorphism::identity(4)) == s);
    REQUIRE(compose(s, s.inverse()).is_identity());
    REQUIRE(is_special(s));
  }
}

TEST_CASE("determinants", "[nielsen]") {
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      if (i != j) {
        for (int s : {1, -1}) {
          REQUIRE(determinant(induced_matrix(Automorphism::nielsen(3, Letter(i, s), Letter(j)))) == 1);
        }
      }
    }
  }
  auto inv = Automorphism::signed_permutation(3, {-1, 2, 3});
  REQUIRE(determinant(induced_matrix(inv)) == -1);
  REQUIRE(!is_special(inv));
}

TEST_CASE("closed-form coefficient actions", "[nielsen][convention]") {
  Letter x1(1), x2(2);
  auto   e12 = Automorphism::nielsen(3, x1, x2);
  // E_12 . e_1 = e_1 - e_2, E_12 . e_3 = e_3, E_12 . e_2^* = e_2^* + e_1^*
  REQUIRE(act_coeff(x1, x2, CoeffVector::basis(Coeff::H, 3, 1)) == vec(Coeff::H, {1, -1, 0}));
  REQUIRE(act_coeff(e12, CoeffVector::basis(Coeff::H, 3, 1)) == vec(Coeff::H, {1, -1, 0}));
  REQUIRE(act_coeff(e12, CoeffVector::basis(Coeff::H, 3, 3)) == CoeffVector::basis(Coeff::H, 3, 3));
  REQUIRE(act_coeff(e12, CoeffVector::basis(Coeff::Hdual, 3, 2)) == vec(Coeff::Hdual, {1, 1, 0}));
  REQUIRE(act_coeff(x1, x2, CoeffVector::basis(Coeff::Hdual, 3, 2)) == vec(Coeff::Hdual, {1, 1, 0}));
  // E_{1^-1 2}: lower signs
  auto e1m2 = Automorphism::nielsen(3, x1.inverse(), x2);
  REQUIRE(act_coeff(e1m2, CoeffVector::basis(Coeff::H, 3, 1)) == vec(Coeff::H, {1, 1, 0}));
  REQUIRE(act_coeff(e1m2, CoeffVector::basis(Coeff::Hdual, 3, 2)) == vec(Coeff::Hdual, {-1, 1, 0}));
  REQUIRE(act_coeff(e1m2, CoeffVector::basis(Coeff::Hdual, 3, 1)) == CoeffVector::basis(Coeff::Hdual, 3, 1));
}

TEST_CASE("general action agrees with closed forms and is a left action", "[nielsen]") {
  std::mt19937_64 rng(17);
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      if (i == j) continue;
      for (int e : {1, -1}) {
        for (int d : {1, -1}) {
          auto s = Automorphism::nielsen(4, Letter(i, e), Letter(j, d));
          for (Coeff m : {Coeff::H, Coeff::Hdual}) {
            for (int p = 1; p <= 4; ++p) {
              auto v = CoeffVector::basis(m, 4, p);
              REQUIRE(act_coeff(s, v) == act_coeff(Letter(i, e), Letter(j, d), v));
            }
          }
        }
      }
    }
  }
  for (int t = 0; t < 100; ++t) {
    auto s = random_nielsen_product(rng, 4, 5), u = random_nielsen_product(rng, 4, 5);
    for (Coeff m : {Coeff::H, Coeff::Hdual}) {
      auto v = CoeffVector::basis(m, 4, 1 + t % 4);
      // (su) . v = s . (u . v) for a left action with the right-action
      // composition convention.
      REQUIRE(act_coeff(compose(s, u), v) == act_coeff(s, act_coeff(u, v)));
      // right action matrix realizes m.g = g^-1 . m
      auto r = right_action_matrix(m, induced_matrix(s));
      REQUIRE(r.apply(v.coords) == act_coeff(s.inverse(), v).coords);
    }
  }
}
