#include <catch_amalgamated.hpp>

#include "autfn/error.hpp"
#include "autfn/word.hpp"
#include "test_support.hpp"

using namespace autfn;
using autfn::test::naive_reduce;
using autfn::test::random_letters;
using autfn::test::random_word;

namespace {
  std::vector<code_t> to_vec(Word const& w) {
    return {w.letters().begin(), w.letters().end()};
  }
}  // namespace

TEST_CASE("multiply: single cancellation", "[word]") {
  Word u(3, {1, 2}), v(3, {-2, 3});
  REQUIRE(u * v == Word(3, {1, 3}));
  REQUIRE((u * u.inverse()).empty());
}

TEST_CASE("multiply: rank mismatch throws", "[word]") {
  REQUIRE_THROWS_AS(Word(3, {1}) * Word(4, {1}), RankMismatch);
  REQUIRE_THROWS_AS(Word(3, {4}), PreconditionError);
}

TEST_CASE("reduction agrees with the naive scanner", "[word][oracle]") {
  std::mt19937_64 rng(20240601);
  for (int t = 0; t < 10000; ++t) {
    auto a = random_letters(rng, 3, 30);
    auto b = random_letters(rng, 3, 30);
    Word u(3, a), v(3, b);
    REQUIRE(to_vec(u) == naive_reduce(a));
    std::vector<code_t> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    REQUIRE(to_vec(u * v) == naive_reduce(ab));
  }
}

TEST_CASE("associativity and inverse of products", "[word]") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    Word u = random_word(rng, 4, 20), v = random_word(rng, 4, 20), w = random_word(rng, 4, 20);
    REQUIRE((u * v) * w == u * (v * w));
    REQUIRE((u * v).inverse() == v.inverse() * u.inverse());
  }
}

TEST_CASE("commutator definition and commutator formulae", "[word]") {
  Word x1 = Word::generator(2, 1), x2 = Word::generator(2, 2);
  REQUIRE(commutator(x1, x2) == Word(2, {1, 2, -1, -2}));
  REQUIRE(commutator(x1 * x2, x1 * x2).empty());
  std::mt19937_64 rng(99);
  for (int t = 0; t < 1000; ++t) {
    Word x = random_word(rng, 3, 8), y = random_word(rng, 3, 8), z = random_word(rng, 3, 8);
    // [x,yz] = [x,y][x,z][[z,x],y]
    REQUIRE(commutator(x, y * z)
            == commutator(x, y) * commutator(x, z) * commutator(commutator(z, x), y));
    // [xy,z] = [x,[y,z]][y,z][x,z]
    REQUIRE(commutator(x * y, z)
            == commutator(x, commutator(y, z)) * commutator(y, z) * commutator(x, z));
  }
}

TEST_CASE("WordBuilder matches multiply", "[word]") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    Word        u = random_word(rng, 3, 15), v = random_word(rng, 3, 15);
    WordBuilder b(3);
    b.append(u).append_inverse(v).append(v);
    REQUIRE(b.build() == u);
    REQUIRE(conjugate(u, v) == u * v * u.inverse());
  }
}

TEST_CASE("parse and print round trip", "[word][io]") {
  REQUIRE(to_string(parse_word("x1*x2^-1*x3", 3)) == "x1*x2^-1*x3");
  REQUIRE(parse_word("X1 * X2^-1", 2) == Word(2, {1, -2}));
  REQUIRE(to_string(Word(3)) == "1");
  REQUIRE(parse_word("1", 3).empty());
  REQUIRE(parse_word("", 3).empty());
  REQUIRE_THROWS_AS(parse_word("x4", 3), ParseError);
  REQUIRE_THROWS_AS(parse_word("x1^2", 3), ParseError);
  REQUIRE_THROWS_AS(parse_word("x1x2", 3), ParseError);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    Word        w = random_word(rng, 12, 20);
    std::string s = to_string(w);
    REQUIRE(parse_word(s, 12) == w);
    REQUIRE(to_string(parse_word(s, 12)) == s);
  }
}
