#include <catch_amalgamated.hpp>

#include <map>

#include "autfn/error.hpp"
#include "autfn/presentation.hpp"
#include "test_support.hpp"

using namespace autfn;

namespace {
  // Independent count: ordered tuples of distinct indices per family.
  long falling(int n, int k) {
    long r = 1;
    for (int t = 0; t < k; ++t) r *= (n - t);
    return r;
  }
  long expected_relator_count(int n) {
    return falling(n, 2) * 3 + falling(n, 3) * 8 + falling(n, 4) * 3;
  }
}  // namespace

TEST_CASE("generator set and embedding", "[presentation]") {
  Presentation p(6);
  REQUIRE(p.num_generators() == 60);
  for (int k = 1; k <= p.num_generators(); ++k) {
    REQUIRE(p.index_of(p.symbol(k)) == k);
  }
  Presentation q(3);
  REQUIRE(q.embed_E(Letter(1), Letter(2, -1)) == q.generator(GenSym{1, 1, 2}, -1));
  REQUIRE(q.embed_E(Letter(1, -1), Letter(2)) == q.generator(GenSym{1, -1, 2}));
  REQUIRE_THROWS_AS(q.embed_E(Letter(1), Letter(1, -1)), PreconditionError);
  REQUIRE_THROWS_AS(Presentation(2), PreconditionError);
}

TEST_CASE("r, h and w words", "[presentation]") {
  Presentation p(3);
  Letter       x1(1), x2(2), x3(3);
  XWord        r = p.r_word(x1, x3, x2);
  REQUIRE(r.size() == 5);
  REQUIRE(r == commutator(p.embed_E(x1, x2), p.embed_E(x2, x3)) * p.embed_E(x1, x3).inverse());
  REQUIRE(p.eval(p.h_word(x1, x2)).is_identity());
  auto w = p.eval(p.w_word(x1, x2));
  REQUIRE(w == Automorphism::monomial(3, x1, x2));
  REQUIRE(w.image(1) == Word(3, {-2}));
  REQUIRE(w.image(2) == Word(3, {1}));
  REQUIRE_THROWS_AS(p.r_word(x1, x1, x2), PreconditionError);
}

TEST_CASE("relator enumeration", "[presentation]") {
  for (int n = 3; n <= 6; ++n) {
    Presentation p(n);
    REQUIRE(p.num_relators() == expected_relator_count(n));
    std::map<Family, int> counts;
    for (auto const& r : p.relators()) counts[r.id.family]++;
    REQUIRE(counts[Family::R2_1] == n * (n - 1));
  }
  REQUIRE(Presentation(6).num_relators() == 2130);
  Presentation p(3);
  XWord        r3 = commutator(p.embed_E(Letter(1), Letter(3)), p.embed_E(Letter(3), Letter(2)))
             * p.embed_E(Letter(1), Letter(2)).inverse();
  auto idx = p.find_relator(r3);
  REQUIRE(idx.has_value());
  REQUIRE(p.relator(*idx).id.family == Family::R3_1);
  REQUIRE_THROWS_AS(reduced_relators(2), PreconditionError);
}

TEST_CASE("pi is a homomorphism into Aut^+", "[presentation]") {
  Presentation    p(4);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    XWord u = autfn::test::random_word(rng, p.num_generators(), 8);
    XWord v = autfn::test::random_word(rng, p.num_generators(), 8);
    REQUIRE(p.eval(u * v) == compose(p.eval(u), p.eval(v)));
    REQUIRE(is_special(p.eval(u)));
  }
  REQUIRE(p.eval(p.identity()).is_identity());
  REQUIRE(p.eval(p.generator(GenSym{1, 1, 2})) == Automorphism::nielsen(4, Letter(1), Letter(2)));
}

TEST_CASE("reduced relators evaluate to the identity", "[presentation][soundness]") {
  for (int n = 3; n <= 5; ++n) {
    Presentation p(n);
    for (auto const& r : p.relators()) {
      INFO(r.id.to_string());
      REQUIRE(p.eval(r.word).is_identity());
    }
  }
}

TEST_CASE("Gersten relators evaluate to the identity", "[presentation][soundness]") {
  for (int n = 3; n <= 4; ++n) {
    Presentation p(n);
    for (auto const& g : gersten_relators(n)) {
      INFO(g.label);
      REQUIRE(p.eval(g.word).is_identity());
    }
  }
}

TEST_CASE("XWord text format round trips", "[presentation][io]") {
  Presentation p(4);
  for (auto const& r : p.relators()) {
    std::string s = p.format(r.word);
    REQUIRE(p.parse(s) == r.word);
    REQUIRE(p.format(p.parse(s)) == s);
  }
  REQUIRE(p.format(p.embed_E(Letter(1), Letter(2, -1))) == "E(1,+,2)^-1");
  REQUIRE(p.dump().substr(0, 10) == "R2-1 1,2 E");
}
