#include "autfn/presentation.hpp"

#include <cctype>
#include <sstream>

#include "autfn/error.hpp"

namespace autfn {

  std::string letter_string(Letter l) {
    return "x" + std::to_string(l.index) + (l.sign < 0 ? "^-1" : "");
  }

  namespace {
    constexpr std::array<char const*, num_families> names = {
        "R2-1", "R2-2", "R2-3", "R2-4", "R2-5", "R2-6", "R2-7",
        "R2-8", "R3-1", "R3-2", "R3-3", "R3-4", "R4-1", "R5-1"};
    constexpr std::array<int, num_families> arities
        = {2, 3, 3, 3, 3, 4, 4, 4, 3, 3, 3, 3, 2, 2};

    // All ordered tuples of k distinct indices from 1..n, lexicographic.
    std::vector<std::array<int, 4>> tuples(int n, int k) {
      std::vector<std::array<int, 4>> out;
      std::array<int, 4>              t{};
      auto rec = [&](auto&& self, int pos) -> void {
        if (pos == k) {
          out.push_back(t);
          return;
        }
        for (int v = 1; v <= n; ++v) {
          bool used = false;
          for (int q = 0; q < pos; ++q) {
            used |= (t[q] == v);
          }
          if (!used) {
            t[pos] = v;
            self(self, pos + 1);
          }
        }
      };
      rec(rec, 0);
      return out;
    }
  }  // namespace

  char const* family_name(Family f) {
    return names[static_cast<std::size_t>(f)];
  }

  int family_arity(Family f) {
    return arities[static_cast<std::size_t>(f)];
  }

  std::string RelatorId::to_string() const {
    std::string s = family_name(family);
    s += '(';
    for (int k = 0; k < arity(); ++k) {
      if (k > 0) {
        s += ',';
      }
      s += std::to_string(tuple[k]);
    }
    return s + ')';
  }

  bool gersten_commute(Letter a, Letter b, Letter c, Letter d) {
    return a != c && a.index != d.index && b.index != c.index;
  }

  Presentation::Presentation(int n) : _n(n) {
    if (n < 3) {
      throw PreconditionError("presentations of Aut^+ F_n need n >= 3, found "
                              + std::to_string(n));
    }
    for (int k = 1; k <= num_generators(); ++k) {
      GenSym g = symbol(k);
      _gen_maps.push_back(Automorphism::nielsen(n, g.first(), g.second()));
    }
    auto L = [](int i, int s = 1) { return Letter(i, s); };
    for (int f = 0; f < num_families; ++f) {
      auto fam = static_cast<Family>(f);
      for (auto const& t : tuples(n, family_arity(fam))) {
        int   i = t[0], j = t[1], k = t[2], l = t[3];
        XWord w;
        switch (fam) {
          case Family::R2_1:
            w = commutator(embed_E(L(i), L(j)), embed_E(L(i, -1), L(j)));
            break;
          case Family::R2_2:
            w = commutator(embed_E(L(i), L(j)), embed_E(L(k), L(j)));
            break;
          case Family::R2_3:
            w = commutator(embed_E(L(i, -1), L(j)), embed_E(L(k), L(j)));
            break;
          case Family::R2_4:
            w = commutator(embed_E(L(i, -1), L(j)), embed_E(L(k, -1), L(j)));
            break;
          case Family::R2_5:
            w = commutator(embed_E(L(i), L(j)), embed_E(L(i, -1), L(k)));
            break;
          case Family::R2_6:
            w = commutator(embed_E(L(i), L(j)), embed_E(L(k), L(l)));
            break;
          case Family::R2_7:
            w = commutator(embed_E(L(i, -1), L(j)), embed_E(L(k), L(l)));
            break;
          case Family::R2_8:
            w = commutator(embed_E(L(i, -1), L(j)), embed_E(L(k, -1), L(l)));
            break;
          case Family::R3_1:
            w = r_word(L(i), L(j), L(k));
            break;
          case Family::R3_2:
            w = r_word(L(i), L(j), L(k, -1));
            break;
          case Family::R3_3:
            w = r_word(L(i, -1), L(j), L(k));
            break;
          case Family::R3_4:
            w = r_word(L(i, -1), L(j), L(k, -1));
            break;
          case Family::R4_1:
            w = h_word(L(i), L(j));
            break;
          case Family::R5_1:
            w = power(w_word(L(i), L(j)), 4);
            break;
        }
        RelatorId id{fam, t};
        _lookup.emplace(w, static_cast<int>(_relators.size()));
        _relators.push_back({id, std::move(w)});
      }
    }
  }

  int Presentation::index_of(GenSym g) const {
    if (g.i < 1 || g.i > _n || g.j < 1 || g.j > _n || g.i == g.j
        || (g.eps != 1 && g.eps != -1)) {
      throw PreconditionError("invalid generator symbol");
    }
    int jpos = g.j < g.i ? g.j - 1 : g.j - 2;
    return ((g.i - 1) * (_n - 1) + jpos) * 2 + (g.eps < 0 ? 1 : 0) + 1;
  }

  GenSym Presentation::symbol(int index) const {
    if (index < 1 || index > num_generators()) {
      throw PreconditionError("generator index out of range");
    }
    int    k = index - 1;
    GenSym g;
    g.eps    = (k % 2 == 0) ? 1 : -1;
    k /= 2;
    g.i      = k / (_n - 1) + 1;
    int jpos = k % (_n - 1);
    g.j      = jpos + 1 < g.i ? jpos + 1 : jpos + 2;
    return g;
  }

  XWord Presentation::generator(GenSym g, int sign) const {
    return XWord::generator(num_generators(), index_of(g), sign);
  }

  XWord Presentation::embed_E(Letter a, Letter b) const {
    if (a.index == b.index) {
      throw PreconditionError("E_ab needs a != b^{+-1}");
    }
    if (a.index > _n || b.index > _n) {
      throw PreconditionError("letter index exceeds the rank");
    }
    return generator(GenSym{a.index, a.sign, b.index}, b.sign);
  }

  XWord Presentation::w_word(Letter a, Letter b) const {
    return embed_E(b, a) * embed_E(a.inverse(), b) * embed_E(b.inverse(), a.inverse());
  }

  XWord Presentation::r_word(Letter a, Letter c, Letter b) const {
    if (a.index == b.index || a.index == c.index || b.index == c.index) {
      throw PreconditionError("r_ac(b) needs a, b, c with distinct indices");
    }
    return commutator(embed_E(a, b), embed_E(b, c)) * embed_E(a, c.inverse());
  }

  XWord Presentation::h_word(Letter a, Letter b) const {
    return w_word(a, b) * w_word(a.inverse(), b);
  }

  std::optional<int> Presentation::find_relator(XWord const& w) const {
    auto it = _lookup.find(w);
    if (it == _lookup.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::optional<int> Presentation::find_relator(RelatorId const& id) const {
    // Relators are stored family by family in lexicographic tuple order, so
    // a linear scan of one family block suffices; this is not hot.
    for (int k = 0; k < num_relators(); ++k) {
      if (_relators[k].id == id) {
        return k;
      }
    }
    return std::nullopt;
  }

  Automorphism Presentation::eval(XWord const& w) const {
    if (w.rank() != num_generators()) {
      throw RankMismatch("XWord rank does not match the generator count");
    }
    Automorphism s = Automorphism::identity(_n);
    for (code_t c : w.letters()) {
      Automorphism const& g = _gen_maps[static_cast<std::size_t>(std::abs(c) - 1)];
      s = compose(s, c > 0 ? g : g.inverse());
    }
    return s;
  }

  std::string Presentation::format(XWord const& w) const {
    if (w.empty()) {
      return "1";
    }
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k > 0) {
        out += '*';
      }
      code_t c = w.letters()[k];
      GenSym g = symbol(std::abs(c));
      out += "E(" + std::to_string(g.i) + (g.eps > 0 ? ",+," : ",-,")
             + std::to_string(g.j) + ")";
      if (c < 0) {
        out += "^-1";
      }
    }
    return out;
  }

  XWord Presentation::parse(std::string_view text) const {
    WordBuilder b(num_generators());
    std::size_t pos  = 0;
    auto        fail = [&](char const* what) {
      return ParseError("cannot parse XWord \"" + std::string(text) + "\" at offset "
                        + std::to_string(pos) + ": " + what);
    };
    auto read_int = [&]() {
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      }
      if (start == pos) {
        throw fail("expected an integer");
      }
      return std::stoi(std::string(text.substr(start, pos - start)));
    };
    auto expect = [&](char ch) {
      if (pos >= text.size() || std::toupper(static_cast<unsigned char>(text[pos])) != ch) {
        throw fail("unexpected character");
      }
      ++pos;
    };
    if (text.empty() || text == "1") {
      return b.build();
    }
    while (true) {
      expect('E');
      expect('(');
      int i = read_int();
      expect(',');
      if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-')) {
        throw fail("expected a sign");
      }
      int eps = text[pos++] == '+' ? 1 : -1;
      expect(',');
      int j = read_int();
      expect(')');
      int sign = 1;
      if (text.substr(pos, 3) == "^-1") {
        pos += 3;
        sign = -1;
      }
      b.push(static_cast<code_t>(sign * index_of(GenSym{i, eps, j})));
      if (pos == text.size()) {
        break;
      }
      expect('*');
    }
    return std::move(b).build();
  }

  std::string Presentation::dump() const {
    std::ostringstream os;
    for (auto const& r : _relators) {
      os << family_name(r.id.family) << ' ';
      for (int k = 0; k < r.id.arity(); ++k) {
        os << (k > 0 ? "," : "") << r.id.tuple[k];
      }
      os << ' ' << format(r.word) << '\n';
    }
    return os.str();
  }

  std::vector<Relator> reduced_relators(int n) {
    return Presentation(n).relators();
  }

  std::vector<GerstenRelator> gersten_relators(int n) {
    Presentation                p(n);
    std::vector<GerstenRelator> out;
    std::vector<Letter>         letters;
    for (int i = 1; i <= n; ++i) {
      letters.emplace_back(i, 1);
      letters.emplace_back(i, -1);
    }
    auto S = letter_string;
    for (Letter a : letters) {
      for (Letter b : letters) {
        if (a.index == b.index) {
          continue;
        }
        out.push_back({"R1[" + S(a) + "," + S(b) + "]",
                       p.embed_E(a, b) * p.embed_E(a, b.inverse())});
      }
    }
    for (Letter a : letters) {
      for (Letter b : letters) {
        if (a.index == b.index) {
          continue;
        }
        for (Letter c : letters) {
          for (Letter d : letters) {
            if (c.index == d.index || !gersten_commute(a, b, c, d)) {
              continue;
            }
            out.push_back({"R2[" + S(a) + "," + S(b) + ";" + S(c) + "," + S(d) + "]",
                           commutator(p.embed_E(a, b), p.embed_E(c, d))});
          }
        }
      }
    }
    for (Letter a : letters) {
      for (Letter b : letters) {
        for (Letter c : letters) {
          if (a.index == b.index || b.index == c.index || a.index == c.index) {
            continue;
          }
          out.push_back({"R3[" + S(a) + "," + S(b) + "," + S(c) + "]",
                         p.r_word(a, c, b)});
        }
      }
    }
    for (Letter a : letters) {
      for (Letter b : letters) {
        if (a.index == b.index) {
          continue;
        }
        out.push_back({"R4[" + S(a) + "," + S(b) + "]", p.h_word(a, b)});
      }
    }
    for (Letter a : letters) {
      for (Letter b : letters) {
        if (a.index == b.index) {
          continue;
        }
        out.push_back({"R5[" + S(a) + "," + S(b) + "]", power(p.w_word(a, b), 4)});
      }
    }
    return out;
  }

  Automorphism eval(int n, XWord const& w) {
    return Presentation(n).eval(w);
  }

}  // namespace autfn
