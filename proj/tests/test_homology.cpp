#include <catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <sstream>

#include "autfn/error.hpp"
#include "autfn/homology.hpp"
#include "test_support.hpp"

using namespace autfn;

namespace {
  // d(uv) = du + u dv, one letter at a time.
  GroupRingElt fox_by_product_rule(Word const& w, code_t gen) {
    GroupRingElt acc(w.rank());
    Word         prefix(w.rank());
    for (code_t c : w.letters()) {
      if (c == gen) acc += GroupRingElt::of(prefix);
      if (c == -gen) acc -= GroupRingElt::of(prefix * Word(w.rank(), {c}));
      prefix = prefix * Word(w.rank(), {c});
    }
    return acc;
  }

  DenseMatrix random_dense(std::mt19937_64& rng, int r, int c, int bound) {
    std::uniform_int_distribution<int> v(-bound, bound), z(0, 2);
    DenseMatrix                        a(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) a(i, j) = z(rng) == 0 ? 0 : v(rng);
    return a;
  }

  Integer det3(DenseMatrix const& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
           - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
           + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }
}  // namespace

TEST_CASE("Fox derivatives: fundamental formula and product rule", "[homology][fox][oracle]") {
  std::mt19937_64 rng(17);
  int const       rank = 4;
  GroupRingElt    one = GroupRingElt::of(Word(rank));
  for (int t = 0; t < 1000; ++t) {
    Word         w = test::random_word(rng, rank, 12);
    GroupRingElt sum(rank);
    for (code_t x = 1; x <= rank; ++x) {
      GroupRingElt d = fox_derivative(w, x);
      REQUIRE(d == fox_by_product_rule(w, x));
      sum += d * (GroupRingElt::of(Word(rank, {x})) - one);
    }
    REQUIRE(sum == GroupRingElt::of(w) - one);
  }
}

TEST_CASE("Fox derivative fixtures", "[homology][fox]") {
  Word x1(2, {1}), x2(2, {2});
  REQUIRE(fox_derivative(x1, 1) == GroupRingElt::of(Word(2)));
  REQUIRE(fox_derivative(x1.inverse(), 1) == GroupRingElt::of(x1.inverse(), -1));
  // d[x1,x2]/dx1 = 1 - x1 x2 x1^-1
  Word         c = x1 * x2 * x1.inverse() * x2.inverse();
  GroupRingElt expect = GroupRingElt::of(Word(2)) - GroupRingElt::of(x1 * x2 * x1.inverse());
  REQUIRE(fox_derivative(c, 1) == expect);
}

TEST_CASE("d1 phi = 0 and the module action is a right action", "[homology]") {
  for (int n = 3; n <= 4; ++n) {
    Presentation p(n);
    for (Coeff m : {Coeff::H, Coeff::Hdual}) {
      SparseMatrix d1 = d1_matrix(p, m), phi = phi_matrix(p, m);
      REQUIRE(d1.cols() == phi.rows());
      REQUIRE(multiply(d1, phi).nnz() == 0);
    }
  }
  Presentation    p(4);
  ModuleAction    act(p, Coeff::Hdual);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    Word                      u = test::random_word(rng, p.num_generators(), 6);
    Word                      v = test::random_word(rng, p.num_generators(), 6);
    std::vector<std::int64_t> a{1, -2, 0, 3}, b = a;
    act.apply(u * v, a);
    act.apply(u, b);
    act.apply(v, b);
    REQUIRE(a == b);
  }
}

TEST_CASE("SNF transforms reconstruct D", "[homology][snf][oracle]") {
  std::mt19937_64                    rng(11);
  std::uniform_int_distribution<int> dim(1, 7);
  for (int t = 0; t < 300; ++t) {
    DenseMatrix a = random_dense(rng, dim(rng), dim(rng), 9);
    SNFResult   r = snf(a);
    std::string why;
    REQUIRE(verify_snf(a, r, &why));
    // U A V is diagonal with the divisors
    DenseMatrix d = r.U * a * r.V;
    for (int i = 0; i < d.rows(); ++i)
      for (int j = 0; j < d.cols(); ++j) {
        Integer want = (i == j && i < r.rank) ? r.divisors[static_cast<std::size_t>(i)] : Integer(0);
        REQUIRE(d(i, j) == want);
      }
    // d_1 is the gcd of the entries
    Integer g = 0;
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a(i, j).get_mpz_t());
    if (r.rank > 0) REQUIRE(r.divisors[0] == g);
  }
  for (int t = 0; t < 200; ++t) {
    DenseMatrix a = random_dense(rng, 3, 3, 20);
    SNFResult   r = snf(a, false);
    Integer     prod = 1;
    for (auto const& x : r.divisors) prod *= x;
    Integer det = abs(det3(a));
    REQUIRE((r.rank == 3 ? prod : Integer(0)) == det);
  }
}

TEST_CASE("SNF diagonal and degenerate cases", "[homology][snf]") {
  DenseMatrix a(3, 3);
  a(0, 0) = 6;
  a(1, 1) = 4;
  a(2, 2) = 0;
  SNFResult r = snf(a);
  REQUIRE(r.rank == 2);
  REQUIRE(r.divisors == std::vector<Integer>{2, 12});
  REQUIRE(verify_snf(a, r));
  REQUIRE(snf(DenseMatrix(0, 4)).rank == 0);
  REQUIRE(snf(DenseMatrix(2, 2)).rank == 0);
}

TEST_CASE("modules over L", "[homology][snf]") {
  LModule m = to_L(6, {1, 2, 3, 6, 8});
  REQUIRE(m.free_rank == 1);
  REQUIRE(m.torsion == std::vector<Integer>{3, 3});
  REQUIRE(m.generators() == 3);
  REQUIRE(to_L(2, {2, 4}).trivial());
  REQUIRE(to_L(3, {}).free_rank == 3);
}

TEST_CASE("column lattice membership", "[homology][snf]") {
  ColumnLattice lat(3);
  lat.insert({{0, 2}, {1, 4}});
  lat.insert({{1, 6}, {2, 3}});
  REQUIRE(lat.rank() == 2);
  REQUIRE(lat.contains({{0, 2}, {1, 10}, {2, 3}}));
  REQUIRE_FALSE(lat.contains({{0, 1}, {1, 2}}));
}

TEST_CASE("triplet round trip and content hash", "[homology][io]") {
  Presentation p(3);
  SparseMatrix phi = phi_matrix(p, Coeff::H);
  std::stringstream s;
  phi.write_triplets(s);
  SparseMatrix back = SparseMatrix::read_triplets(s);
  REQUIRE(back == phi);
  REQUIRE(back.content_hash() == phi.content_hash());
  // rows sorted by (row, col)
  auto e = phi.entries();
  for (std::size_t k = 1; k < e.size(); ++k) {
    REQUIRE(std::pair(e[k - 1].row, e[k - 1].col) < std::pair(e[k].row, e[k].col));
  }
  REQUIRE(phi_matrix(p, Coeff::H, 2).content_hash() == phi.content_hash());
  REQUIRE(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("rank mod p agrees with the SNF", "[homology][snf]") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    DenseMatrix  a = random_dense(rng, 6, 5, 4);
    SparseMatrix s(6, 5);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 5; ++j) s.add(i, j, a(i, j));
    s.finalize();
    SNFResult r = snf(a, false);
    for (std::uint32_t q : {3u, 1000003u}) {
      int expect = 0;
      for (auto const& d : r.divisors) expect += (d % q != 0);
      REQUIRE(rank_mod_p(s, q) == expect);
    }
  }
}

TEST_CASE("H1 over L for small n", "[homology]") {
  Presentation p(4);
  H1Result     h = h1_of_autplus(p, Coeff::H);
  REQUIRE(h.chain_ok);
  REQUIRE(h.snf_ok);
  REQUIRE(h.h1.trivial());
  H1Result d = h1_of_autplus(p, Coeff::Hdual);
  REQUIRE(d.h1.free_rank == 1);
  REQUIRE(d.h1.torsion.empty());
  REQUIRE(h.kernel_rank == 2 * 4 * (16 - 4) - 4);
  REQUIRE(h2_certificate(h, h.image_rank).certified);
  REQUIRE_FALSE(h2_certificate(h, h.image_rank + 1).certified);
}
