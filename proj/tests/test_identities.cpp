#include <catch_amalgamated.hpp>

#include <random>

#include "autfn/error.hpp"
#include "autfn/identities.hpp"

using namespace autfn;

namespace {
  std::vector<Letter> letters(int n) {
    std::vector<Letter> out;
    for (int i = 1; i <= n; ++i) {
      out.emplace_back(i, 1);
      out.emplace_back(i, -1);
    }
    return out;
  }

  bool distinct(std::initializer_list<Letter> ls) {
    std::vector<int> idx;
    for (Letter l : ls) {
      for (int k : idx) {
        if (k == l.index) return false;
      }
      idx.push_back(l.index);
    }
    return true;
  }
}  // namespace

TEST_CASE("expressions expand and invert", "[identities]") {
  Presentation      p(3);
  IdentityEngine    eng(p);
  RelatorExpression e = conj(p.embed_E(Letter(1), Letter(2)), eng.reduced(0))
                        * eng.reduced(5, -1);
  REQUIRE(e.size() == 2);
  REQUIRE(e.reduced_only());
  REQUIRE(eng.expand(e.inverse()) == eng.expand(e).inverse());
  REQUIRE(p.eval(eng.expand(e)).is_identity());
  REQUIRE_THROWS_AS(eng.raw(p.embed_E(Letter(1), Letter(2))), CertificationError);
  REQUIRE_THROWS_AS(eng.certify(p.embed_E(Letter(1), Letter(2)), e), CertificationError);
}

TEST_CASE("reduced relators have a shape", "[identities]") {
  Presentation   p(4);
  IdentityEngine eng(p);
  for (int k = 0; k < p.num_relators(); ++k) {
    Shape s = eng.shape_of(k);
    REQUIRE(eng.shape_word(s) == p.relator(k).word);
    auto e = eng.normalize(s);
    REQUIRE(e.size() == 1);
    REQUIRE(e.factors()[0].relator == k);
  }
}

TEST_CASE("Gersten relators normalize to reduced relators", "[identities]") {
  Presentation   p(5);
  IdentityEngine eng(p);
  auto           L = letters(5);
  for (Letter a : L) {
    for (Letter b : L) {
      if (a.index == b.index) continue;
      for (Letter c : L) {
        for (Letter d : L) {
          if (c.index == d.index || !gersten_commute(a, b, c, d)) continue;
          Shape s{Shape::Comm, {a, b, c, d}};
          auto  cert = eng.certify(eng.shape_word(s), eng.normalize(s));
          REQUIRE(cert.verified);
          REQUIRE(cert.rhs.reduced_only());
        }
        if (distinct({a, b, c})) {
          Shape s{Shape::R, {a, c, b, Letter(1)}};
          REQUIRE(eng.certify(eng.shape_word(s), eng.normalize(s)).verified);
        }
      }
      for (Shape::Kind k : {Shape::H, Shape::W4}) {
        Shape s{k, {a, b, Letter(1), Letter(1)}};
        auto  cert = eng.certify(eng.shape_word(s), eng.normalize(s));
        REQUIRE(cert.verified);
        REQUIRE(cert.rhs.reduced_only());
      }
      REQUIRE(eng.certify(p.h_word(a, b), eng.normalize_h_alt(a, b)).verified);
    }
  }
}

TEST_CASE("printed transport identities certify in both modes", "[identities]") {
  Presentation   p(5);
  IdentityEngine eng(p);
  auto           L = letters(5);
  int            count = 0;
  for (RelMode m : {RelMode::Raw, RelMode::Normalized}) {
    for (Letter a : L) {
      for (Letter b : L) {
        if (a.index == b.index) continue;
        REQUIRE(eng.h_inverse(1, a, b, m).verified);
        REQUIRE(eng.h_inverse(2, a, b, m).verified);
        for (Letter o : L) {
          if (!distinct({a, b, o})) continue;
          for (int w = 1; w <= 6; ++w) {
            auto c = eng.overlap_transport(w, a, b, o, m);
            INFO(c.log_line());
            REQUIRE(c.verified);
            ++count;
          }
          REQUIRE(eng.r_inverse(a, b, o, m).verified);
          REQUIRE(eng.split_transport(a, b, a, o, m).verified);
          REQUIRE(eng.split_transport(a, b, b, o, m).verified);
          for (Letter d : L) {
            if (!distinct({a, b, o, d})) continue;
            REQUIRE(eng.disjoint_transport(a, b, o, d, m).verified);
          }
        }
      }
    }
  }
  REQUIRE(count == 2 * 6 * 20 * 4 * 6);
}

TEST_CASE("printed signs of overlap cases i and iv fail", "[identities]") {
  Presentation   p(4);
  IdentityEngine eng(p);
  Letter         a(1), b(2), o(3), ai(1, -1), bi(2, -1), oi(3, -1);
  auto           E = [&](Letter x, Letter y) { return p.embed_E(x, y); };
  auto           R = [&](Letter x, Letter z, Letter y) { return eng.raw(p.r_word(x, z, y)); };
  XWord          w = p.w_word(a, b);

  // case i exactly as printed: r_{a^-1 d}(b)^-1 in the middle factor
  auto printed_i = conj(E(bi, a) * E(ai, bi), R(b, oi, ai))
                   * conj(E(bi, a) * E(b, oi) * E(ai, bi), R(ai, o, b).inverse())
                   * eng.raw(commutator(E(bi, a), E(b, oi)));
  XWord lhs_i = (w.inverse() * E(ai, o) * w).inverse() * E(b, o);
  REQUIRE_FALSE(eng.certify(lhs_i, printed_i).verified);
  REQUIRE(eng.overlap_transport(1, a, b, o).lhs == lhs_i);

  auto printed_iv = conj(E(bi, a) * E(ai, bi), eng.raw(commutator(E(b, ai), E(o, a))))
                    * conj(E(bi, a) * E(o, a), R(o, bi, ai).inverse())
                    * conj(E(bi, a) * E(o, a), R(o, ai, bi).inverse());
  XWord lhs_iv = (w.inverse() * E(o, ai) * w).inverse() * E(o, b);
  REQUIRE_FALSE(eng.certify(lhs_iv, printed_iv).verified);
  REQUIRE(eng.overlap_transport(4, a, b, o).lhs == lhs_iv);
}

TEST_CASE("sample rewrite", "[identities]") {
  Presentation   p(4);
  IdentityEngine eng(p);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      for (int k = 1; k <= 4; ++k)
        if (i != j && j != k && i != k) REQUIRE(eng.sample_rewrite(i, j, k).verified);
}

TEST_CASE("transport cocycle", "[identities]") {
  Presentation    p(5);
  IdentityEngine  eng(p);
  auto            L = letters(5);
  std::mt19937_64 rng(7);
  for (int it = 0; it < 300; ++it) {
    Letter a = L[rng() % L.size()], b = L[rng() % L.size()];
    if (a.index == b.index) continue;
    std::vector<code_t> v;
    while (v.size() < 10) {
      code_t y = 1 + static_cast<code_t>(rng() % p.num_generators());
      GenSym s = p.symbol(y);
      if (IdentityEngine::transport_supported(a, b, s.first(), s.second()))
        v.push_back(rng() % 2 ? y : -y);
    }
    XWord V(p.num_generators(), v), w = p.w_word(a, b);
    REQUIRE(eng.transport_supported(a, b, V));
    auto c = eng.certify((w.inverse() * V * w).inverse() * eng.sigma_word(a, b, V),
                         eng.conj_transport(a, b, V));
    REQUIRE(c.verified);
    REQUIRE(c.rhs.reduced_only());
  }
  // sigma_word agrees with conjugation up to the transport
  Letter a(1), b(2);
  REQUIRE(p.eval(eng.sigma_word(a, b, p.embed_E(Letter(3), Letter(1))))
          == compose(compose(p.eval(p.w_word(a, b)).inverse(),
                             p.eval(p.embed_E(Letter(3), Letter(1)))),
                     p.eval(p.w_word(a, b))));
}

TEST_CASE("transport along a product of monomial maps", "[identities]") {
  Presentation   p(4);
  IdentityEngine eng(p);
  Letter         i(1), j(2), k(3), ji(2, -1);
  std::vector<std::pair<Letter, Letter>> ws(4, {i, ji});
  XWord V = power(p.w_word(j, k), 2);
  XWord W = power(p.w_word(i, ji), 4);
  XWord image = V;
  for (auto [a, b] : ws) image = eng.sigma_word(a, b, image);
  auto c = eng.certify((W.inverse() * V * W).inverse() * image, eng.conj_transport(ws, V));
  REQUIRE(c.verified);
}

TEST_CASE("commutation transports", "[identities]") {
  Presentation   p(4);
  IdentityEngine eng(p);
  int            checked = 0;
  for (int r = 0; r < p.num_relators(); ++r) {
    XWord rw = p.relator(r).word;
    for (code_t x = -p.num_generators(); x <= p.num_generators(); ++x) {
      if (x == 0) continue;
      bool all = true;
      for (code_t y : rw.letters()) all = all && eng.commutes(x, y);
      if (!all) continue;
      XWord xw(p.num_generators(), {x});
      auto  e = conj(xw.inverse(), eng.reduced(r)) * eng.commute_transport(x, rw)
               * eng.reduced(r).inverse();
      REQUIRE(eng.certify_null(e).verified);
      ++checked;
    }
  }
  REQUIRE(checked > 0);
  XWord bad(p.num_generators(), {p.index_of(GenSym{2, 1, 3})});
  REQUIRE_THROWS_AS(eng.commute_transport(p.index_of(GenSym{1, 1, 2}), bad), PreconditionError);
}

TEST_CASE("transported r and h relators", "[identities]") {
  Presentation   p(5);
  IdentityEngine eng(p);
  auto           L = letters(5);
  long           n21 = 0, n41 = 0;
  for (Letter a : L)
    for (Letter b : L)
      for (Letter c : L)
        for (Letter d : L) {
          if (IdentityEngine::eq41_admissible(a, b, c, d)) {
            auto cert = eng.eq41_null(a, b, c, d);
            INFO(cert.log_line());
            REQUIRE(cert.verified);
            REQUIRE(cert.rhs.reduced_only());
            ++n41;
          }
          for (Letter e : L) {
            if (!IdentityEngine::eq21_admissible(a, b, c, d, e)) continue;
            auto cert = eng.eq21_null(a, b, c, d, e);
            INFO(cert.log_line());
            REQUIRE(cert.verified);
            ++n21;
          }
        }
  REQUIRE(n21 > 0);
  REQUIRE(n41 > 0);
}

TEST_CASE("the printed h rewrite lacks the conjugated h factor", "[identities]") {
  Presentation   p(4);
  IdentityEngine eng(p);
  auto           L = letters(4);
  for (Letter a : L)
    for (Letter b : L)
      for (Letter c : L)
        for (Letter d : L) {
          if (!IdentityEngine::eq41_admissible(a, b, c, d)) continue;
          auto bad = eng.eq41_null(a, b, c, d, true);
          REQUIRE_FALSE(bad.verified);
          REQUIRE(bad.log_line().find("failed") != std::string::npos);
        }
}

TEST_CASE("named instances and degenerate tuples", "[identities]") {
  Presentation   p(5);
  IdentityEngine eng(p);
  int            i = 1, j = 2, k = 3, l = 4;
  // (x_l, x_j, x_i, x_j, x_k)
  REQUIRE(eng.eq21_null(Letter(l), Letter(j), Letter(i), Letter(j), Letter(k)).verified);
  // (x_k^-1, x_l, x_i, x_j, x_l) and (x_i^-1, x_l, x_l, x_j, x_k^{+-1})
  REQUIRE(eng.eq21_null(Letter(k, -1), Letter(l), Letter(i), Letter(j), Letter(l)).verified);
  REQUIRE(eng.eq21_null(Letter(i, -1), Letter(l), Letter(l), Letter(j), Letter(k)).verified);
  REQUIRE(eng.eq21_null(Letter(i, -1), Letter(l), Letter(l), Letter(j), Letter(k, -1)).verified);
  // {x_k, x_i^{-+1}, x_i, x_j}
  REQUIRE(eng.eq41_null(Letter(k), Letter(i, -1), Letter(i), Letter(j)).verified);
  REQUIRE(eng.eq41_null(Letter(k), Letter(i), Letter(i), Letter(j)).verified);

  REQUIRE_THROWS_AS(eng.eq41_null(Letter(1), Letter(2), Letter(2), Letter(1)), PreconditionError);
  REQUIRE_THROWS_AS(eng.eq21_null(Letter(1), Letter(2), Letter(1), Letter(2), Letter(3)),
                    PreconditionError);
  REQUIRE_THROWS_AS(eng.eq21_null(Letter(1), Letter(2), Letter(3), Letter(3), Letter(4)),
                    PreconditionError);
  REQUIRE_THROWS_AS(eng.overlap_transport(1, Letter(1), Letter(2), Letter(1)), PreconditionError);
  REQUIRE_THROWS_AS(eng.base_transport(Letter(1), Letter(2), Letter(1), Letter(2)),
                    PreconditionError);
}
