#include "autfn/identities.hpp"

#include <sstream>

#include "autfn/error.hpp"

namespace autfn {

  namespace {
    int letter_slot(Letter l) {
      return (l.index - 1) * 2 + (l.sign < 0 ? 1 : 0);
    }

    std::string tuple_string(std::initializer_list<Letter> ls) {
      std::string s = "(";
      bool        first = true;
      for (Letter l : ls) {
        s += (first ? "" : ",") + letter_string(l);
        first = false;
      }
      return s + ")";
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // RelatorExpression
  ////////////////////////////////////////////////////////////////////////

  bool RelatorExpression::reduced_only() const {
    for (auto const& f : _factors) {
      if (f.relator < 0) {
        return false;
      }
    }
    return true;
  }

  RelatorExpression& RelatorExpression::append(Factor f) {
    if (f.conjugator.rank() != _rank) {
      throw RankMismatch("factor conjugator rank differs from the expression rank");
    }
    _factors.push_back(std::move(f));
    return *this;
  }

  RelatorExpression& RelatorExpression::append(RelatorExpression const& e) {
    if (e._rank != _rank) {
      throw RankMismatch("cannot multiply expressions of different rank");
    }
    _factors.insert(_factors.end(), e._factors.begin(), e._factors.end());
    return *this;
  }

  RelatorExpression& RelatorExpression::conjugate_by(XWord const& u) {
    if (u.empty()) {
      return *this;
    }
    for (auto& f : _factors) {
      f.conjugator = u * f.conjugator;
    }
    return *this;
  }

  RelatorExpression RelatorExpression::inverse() const {
    RelatorExpression r(_rank);
    r._factors.assign(_factors.rbegin(), _factors.rend());
    for (auto& f : r._factors) {
      f.exponent = -f.exponent;
    }
    return r;
  }

  RelatorExpression operator*(RelatorExpression a, RelatorExpression const& b) {
    a.append(b);
    return a;
  }

  RelatorExpression conj(XWord const& u, RelatorExpression e) {
    e.conjugate_by(u);
    return e;
  }

  std::string IdentityCertificate::log_line() const {
    std::string s = (family.empty() ? "-" : family) + " " + (tuple.empty() ? "-" : tuple);
    if (verified) {
      return s + " verified";
    }
    return s + " failed " + std::to_string(residual.size());
  }

  ////////////////////////////////////////////////////////////////////////
  // IdentityEngine
  ////////////////////////////////////////////////////////////////////////

  IdentityEngine::IdentityEngine(Presentation const& p) : _p(p), _n(p.rank()) {
    int slots = 2 * _n;
    int x     = xrank();
    _base.assign(static_cast<std::size_t>(slots * slots * x), RelatorExpression(x));
    _base_ok.assign(_base.size(), 0);
    for (int sa = 0; sa < slots; ++sa) {
      for (int sb = 0; sb < slots; ++sb) {
        Letter a(sa / 2 + 1, sa % 2 ? -1 : 1), b(sb / 2 + 1, sb % 2 ? -1 : 1);
        if (a.index == b.index) {
          continue;
        }
        for (int g = 1; g <= x; ++g) {
          GenSym s = _p.symbol(g);
          if (!transport_supported(a, b, s.first(), s.second())) {
            continue;
          }
          auto k     = static_cast<std::size_t>((sa * slots + sb) * x + g - 1);
          _base[k]   = base_transport(a, b, s.first(), s.second());
          _base_ok[k] = 1;
        }
      }
    }
  }

  RelatorExpression const& IdentityEngine::cached_base(Letter a, Letter b, int gen) const {
    int  slots = 2 * _n;
    auto k     = static_cast<std::size_t>(
        (letter_slot(a) * slots + letter_slot(b)) * xrank() + gen - 1);
    if (!_base_ok[k]) {
      GenSym s = _p.symbol(gen);
      throw PreconditionError("no base transport of " + _p.format(_p.generator(s))
                              + " under w" + tuple_string({a, b}));
    }
    return _base[k];
  }

  RelatorExpression IdentityEngine::reduced(int relator_index, int exponent) const {
    if (relator_index < 0 || relator_index >= _p.num_relators()) {
      throw PreconditionError("relator index out of range");
    }
    RelatorExpression e(xrank());
    e.append(Factor{_p.identity(), relator_index, XWord(), exponent});
    return e;
  }

  RelatorExpression IdentityEngine::raw(XWord const& w, int exponent) const {
    if (!_p.eval(w).is_identity()) {
      throw CertificationError("factor " + _p.format(w) + " is not a relator");
    }
    RelatorExpression e(xrank());
    e.append(Factor{_p.identity(), -1, w, exponent});
    return e;
  }

  XWord IdentityEngine::expand(RelatorExpression const& e) const {
    WordBuilder b(xrank());
    for (auto const& f : e.factors()) {
      XWord const& r = f.relator >= 0 ? _p.relator(f.relator).word : f.word;
      b.append(f.conjugator.letters());
      if (f.exponent > 0) {
        b.append(r.letters());
      } else {
        b.append_inverse(r.letters());
      }
      b.append_inverse(f.conjugator.letters());
    }
    return std::move(b).build();
  }

  IdentityCertificate IdentityEngine::certify(XWord const& lhs, RelatorExpression rhs,
                                              std::string family, std::string tuple) const {
    if (!lhs.empty() && !_p.eval(lhs).is_identity()) {
      throw CertificationError("left-hand side " + _p.format(lhs)
                               + " does not evaluate to the identity");
    }
    IdentityCertificate c;
    c.family   = std::move(family);
    c.tuple    = std::move(tuple);
    c.residual = lhs.inverse() * expand(rhs);
    c.verified = c.residual.empty();
    c.lhs      = lhs;
    c.rhs      = std::move(rhs);
    return c;
  }

  IdentityCertificate IdentityEngine::certify_null(RelatorExpression rhs, std::string family,
                                                   std::string tuple) const {
    return certify(_p.identity(), std::move(rhs), std::move(family), std::move(tuple));
  }

  ////////////////////////////////////////////////////////////////////////
  // Normalization
  ////////////////////////////////////////////////////////////////////////

  Shape IdentityEngine::shape_of(int relator_index) const {
    RelatorId const& id = _p.relator(relator_index).id;
    int              i = id.tuple[0], j = id.tuple[1], k = id.tuple[2], l = id.tuple[3];
    auto             P = [](int q) { return Letter(q, 1); };
    auto             M = [](int q) { return Letter(q, -1); };
    Shape            s;
    switch (id.family) {
      case Family::R2_1: s = {Shape::Comm, {P(i), P(j), M(i), P(j)}}; break;
      case Family::R2_2: s = {Shape::Comm, {P(i), P(j), P(k), P(j)}}; break;
      case Family::R2_3: s = {Shape::Comm, {M(i), P(j), P(k), P(j)}}; break;
      case Family::R2_4: s = {Shape::Comm, {M(i), P(j), M(k), P(j)}}; break;
      case Family::R2_5: s = {Shape::Comm, {P(i), P(j), M(i), P(k)}}; break;
      case Family::R2_6: s = {Shape::Comm, {P(i), P(j), P(k), P(l)}}; break;
      case Family::R2_7: s = {Shape::Comm, {M(i), P(j), P(k), P(l)}}; break;
      case Family::R2_8: s = {Shape::Comm, {M(i), P(j), M(k), P(l)}}; break;
      case Family::R3_1: s = {Shape::R, {P(i), P(j), P(k), P(1)}}; break;
      case Family::R3_2: s = {Shape::R, {P(i), P(j), M(k), P(1)}}; break;
      case Family::R3_3: s = {Shape::R, {M(i), P(j), P(k), P(1)}}; break;
      case Family::R3_4: s = {Shape::R, {M(i), P(j), M(k), P(1)}}; break;
      case Family::R4_1: s = {Shape::H, {P(i), P(j), P(1), P(1)}}; break;
      case Family::R5_1: s = {Shape::W4, {P(i), P(j), P(1), P(1)}}; break;
    }
    return s;
  }

  XWord IdentityEngine::shape_word(Shape const& s) const {
    switch (s.kind) {
      case Shape::Comm:
        return commutator(E(s.l[0], s.l[1]), E(s.l[2], s.l[3]));
      case Shape::R:
        return _p.r_word(s.l[0], s.l[1], s.l[2]);
      case Shape::H:
        return _p.h_word(s.l[0], s.l[1]);
      case Shape::W4:
        return power(W(s.l[0], s.l[1]), 4);
    }
    return _p.identity();
  }

  RelatorExpression IdentityEngine::normalize(Shape const& s) const {
    switch (s.kind) {
      case Shape::Comm:
        return normalize_commutator(s.l[0], s.l[1], s.l[2], s.l[3]);
      case Shape::R:
        return normalize_r(s.l[0], s.l[1], s.l[2]);
      case Shape::H:
        return normalize_h(s.l[0], s.l[1]);
      case Shape::W4:
        return normalize_w4(s.l[0], s.l[1]);
    }
    return RelatorExpression(xrank());
  }

  RelatorExpression IdentityEngine::normalize_commutator(Letter a, Letter b, Letter c,
                                                         Letter d) const {
    if (a.index == b.index || c.index == d.index || !gersten_commute(a, b, c, d)) {
      throw PreconditionError("[E_ab, E_cd] is not a Gersten relator for (a,b,c,d) = "
                              + tuple_string({a, b, c, d}));
    }
    XWord y = E(a, Letter(b.index, 1)), z = E(c, Letter(d.index, 1));
    auto  bracket = [&](XWord const& u, XWord const& v) {
      if (auto k = _p.find_relator(commutator(u, v))) {
        return reduced(*k, 1);
      }
      if (auto k = _p.find_relator(commutator(v, u))) {
        return reduced(*k, -1);
      }
      throw PreconditionError("no reduced relator for the commutator "
                              + _p.format(commutator(u, v)));
    };
    if (b.sign > 0 && d.sign > 0) {
      return bracket(y, z);
    } else if (b.sign > 0) {
      // [Y, Z^-1] = Z^-1 [Z, Y] Z
      return conj(z.inverse(), bracket(z, y));
    } else if (d.sign > 0) {
      // [Y^-1, Z] = Y^-1 [Z, Y] Y
      return conj(y.inverse(), bracket(z, y));
    }
    // [Y^-1, Z^-1] = (Y^-1 Z^-1) [Y, Z] (Y^-1 Z^-1)^-1
    return conj(y.inverse() * z.inverse(), bracket(y, z));
  }

  RelatorExpression IdentityEngine::normalize_r(Letter a, Letter c, Letter b) const {
    if (c.sign > 0) {
      XWord w = _p.r_word(a, c, b);
      if (auto k = _p.find_relator(w)) {
        return reduced(*k);
      }
      throw PreconditionError("no reduced relator equals r" + tuple_string({a, c, b}));
    }
    // r_{a c^-1}(b) in terms of r_{ac}(b) and a commutator.
    Letter ci = c.inverse();
    return conj(E(b, c) * E(a, c), normalize_r(a, ci, b).inverse())
           * normalize_commutator(b, c, a, c);
  }

  RelatorExpression IdentityEngine::normalize_h(Letter a, Letter b) const {
    if (a.sign > 0 && b.sign > 0) {
      if (auto k = _p.find_relator(_p.h_word(a, b))) {
        return reduced(*k);
      }
      throw PreconditionError("no reduced relator equals h" + tuple_string({a, b}));
    }
    if (a.sign < 0) {
      // h_{a'^-1 b} = w_{a'b}^-1 h_{a'b} w_{a'b}
      Letter ai = a.inverse();
      return conj(W(ai, b).inverse(), normalize_h(ai, b));
    }
    // h_{a b'^-1} = w_{ab'}^-1 h_{ab'}^-1 w_{ab'}
    Letter bi = b.inverse();
    return conj(W(a, bi).inverse(), normalize_h(a, bi).inverse());
  }

  RelatorExpression IdentityEngine::normalize_h_alt(Letter a, Letter b) const {
    if (a.sign > 0 || b.sign > 0) {
      return normalize_h(a, b);
    }
    Letter bi = b.inverse();
    return conj(W(a, bi).inverse(), normalize_h(a, bi).inverse());
  }

  RelatorExpression IdentityEngine::normalize_w4(Letter a, Letter b) const {
    if (b.sign < 0) {
      // w_{ab} = w_{ab^-1}^-1 in F
      return normalize_w4(a, b.inverse()).inverse();
    }
    if (a.sign > 0) {
      if (auto k = _p.find_relator(power(W(a, b), 4))) {
        return reduced(*k);
      }
      throw PreconditionError("no reduced relator equals w" + tuple_string({a, b}) + "^4");
    }
    // w_{a'^-1 b} = w_{a'b}^-1 h_{a'b}, and
    // (w^-1 h)^4 = prod_{t=1..4} (w^-t h w^t) . w^-4
    Letter            ai = a.inverse();
    XWord             w  = W(ai, b);
    RelatorExpression h  = normalize_h(ai, b);
    RelatorExpression e(xrank());
    for (int t = 1; t <= 4; ++t) {
      e.append(conj(power(w, -t), h));
    }
    return e * normalize_w4(ai, b).inverse();
  }

  ////////////////////////////////////////////////////////////////////////
  // Monomial maps and transports
  ////////////////////////////////////////////////////////////////////////

  Letter IdentityEngine::sigma(Letter a, Letter b, Letter c) {
    if (c == a) {
      return b.inverse();
    }
    if (c == a.inverse()) {
      return b;
    }
    if (c == b) {
      return a;
    }
    if (c == b.inverse()) {
      return a.inverse();
    }
    return c;
  }

  Shape IdentityEngine::sigma(Letter a, Letter b, Shape s) const {
    int used = s.kind == Shape::Comm ? 4 : s.kind == Shape::R ? 3 : 2;
    for (int k = 0; k < used; ++k) {
      s.l[k] = sigma(a, b, s.l[k]);
    }
    return s;
  }

  XWord IdentityEngine::sigma_word(Letter a, Letter b, XWord const& v) const {
    WordBuilder out(xrank());
    for (code_t c : v.letters()) {
      GenSym g  = _p.symbol(std::abs(c));
      XWord  im = E(sigma(a, b, g.first()), sigma(a, b, g.second()));
      if (c > 0) {
        out.append(im);
      } else {
        out.append_inverse(im);
      }
    }
    return std::move(out).build();
  }

  bool IdentityEngine::transport_supported(Letter a, Letter b, Letter c, Letter d) {
    bool inc = c.index == a.index || c.index == b.index;
    bool ind = d.index == a.index || d.index == b.index;
    return a.index != b.index && !(inc && ind);
  }

  bool IdentityEngine::transport_supported(Letter a, Letter b, XWord const& v) const {
    for (code_t c : v.letters()) {
      GenSym g = _p.symbol(std::abs(c));
      if (!transport_supported(a, b, g.first(), g.second())) {
        return false;
      }
    }
    return true;
  }

  XWord IdentityEngine::transport_lhs(Letter a, Letter b, XWord const& v) const {
    XWord w = W(a, b);
    return (w.inverse() * v * w).inverse() * sigma_word(a, b, v);
  }

  RelatorExpression IdentityEngine::commutator_expr(RelMode m, Letter a, Letter b, Letter c,
                                                    Letter d) const {
    if (m == RelMode::Raw) {
      return raw(commutator(E(a, b), E(c, d)));
    }
    return normalize_commutator(a, b, c, d);
  }

  RelatorExpression IdentityEngine::r_expr(RelMode m, Letter a, Letter c, Letter b) const {
    if (m == RelMode::Raw) {
      return raw(_p.r_word(a, c, b));
    }
    return normalize_r(a, c, b);
  }

  RelatorExpression IdentityEngine::h_expr(RelMode m, Letter a, Letter b) const {
    if (m == RelMode::Raw) {
      return raw(_p.h_word(a, b));
    }
    return normalize_h(a, b);
  }

  RelatorExpression IdentityEngine::overlap_rhs(int which, Letter a, Letter b, Letter o,
                                                RelMode m) const {
    Letter ai = a.inverse(), bi = b.inverse();
    XWord  base = E(bi, a) * E(ai, bi);
    switch (which) {
      case 1: {  // c = a^-1, o = d; the r_{a^-1 d}(b) factor enters with exponent +1
        Letter d = o, di = o.inverse();
        return conj(base, r_expr(m, b, di, ai))
               * conj(E(bi, a) * E(b, di) * E(ai, bi), r_expr(m, ai, d, b))
               * commutator_expr(m, bi, a, b, di);
      }
      case 2: {  // c = b^-1, o = d
        Letter d = o, di = o.inverse();
        return conj(base, commutator_expr(m, b, ai, bi, di))
               * conj(E(bi, a), r_expr(m, ai, di, bi))
               * conj(E(ai, di) * E(bi, a), r_expr(m, bi, d, ai));
      }
      case 3: {  // d = a, o = c
        Letter c = o;
        return conj(base, commutator_expr(m, b, ai, c, ai))
               * conj(E(bi, a) * E(c, b), r_expr(m, c, bi, ai).inverse())
               * conj(E(bi, a) * E(c, b), r_expr(m, c, ai, bi).inverse());
      }
      case 4: {  // d = a^-1; both r factors enter with exponent +1
        Letter c = o;
        return conj(base, commutator_expr(m, b, ai, c, a))
               * conj(E(bi, a) * E(c, a), r_expr(m, c, bi, ai))
               * conj(E(bi, a) * E(c, a), r_expr(m, c, ai, bi));
      }
      case 5: {  // d = b
        Letter c = o;
        return conj(base * E(c, bi), r_expr(m, c, ai, b))
               * conj(base * E(c, bi), r_expr(m, c, b, ai))
               * commutator_expr(m, bi, a, c, ai);
      }
      case 6: {  // d = b^-1
        Letter c = o;
        return conj(base * E(c, a), r_expr(m, c, ai, b).inverse())
               * conj(E(bi, a) * E(c, a), r_expr(m, c, bi, ai))
               * conj(E(bi, a) * E(c, a), commutator_expr(m, c, bi, ai, bi))
               * commutator_expr(m, bi, a, c, a);
      }
      default:
        throw PreconditionError("overlap cases are numbered 1..6");
    }
  }

  RelatorExpression IdentityEngine::disjoint_rhs(Letter a, Letter b, Letter c, Letter d,
                                                RelMode m) const {
    Letter ai = a.inverse(), bi = b.inverse(), di = d.inverse();
    return conj(E(bi, a) * E(ai, bi), commutator_expr(m, b, ai, c, di))
           * conj(E(bi, a), commutator_expr(m, ai, bi, c, di))
           * commutator_expr(m, bi, a, c, di);
  }

  RelatorExpression IdentityEngine::split_rhs(Letter a, Letter b, Letter c, Letter d,
                                            RelMode m) const {
    XWord             wi = W(a, b).inverse();
    RelatorExpression h  = h_expr(m, a, b);
    RelatorExpression tail
        = m == RelMode::Raw
              ? raw(transport_lhs(a.inverse(), b.inverse(), E(c, d)))
              : base_transport(a.inverse(), b.inverse(), c, d, m);
    return conj(wi * E(c, d).inverse(), h) * conj(wi, h.inverse()) * tail;
  }

  RelatorExpression IdentityEngine::base_transport(Letter a, Letter b, Letter c, Letter d,
                                                   RelMode m) const {
    if (!transport_supported(a, b, c, d)) {
      throw PreconditionError("no base case for the transport of E" + tuple_string({c, d})
                              + " under w" + tuple_string({a, b}));
    }
    bool inc = c.index == a.index || c.index == b.index;
    bool ind = d.index == a.index || d.index == b.index;
    if (!inc && !ind) {
      return disjoint_rhs(a, b, c, d, m);
    }
    if (inc) {
      if (c == a.inverse()) {
        return overlap_rhs(1, a, b, d, m);
      }
      if (c == b.inverse()) {
        return overlap_rhs(2, a, b, d, m);
      }
      return split_rhs(a, b, c, d, m);
    }
    int which = d == a ? 3 : d == a.inverse() ? 4 : d == b ? 5 : 6;
    return overlap_rhs(which, a, b, c, m);
  }

  namespace {
    // Shared cocycle expansion: for V = y_1 ... y_m,
    // T(V) = prod_t conj(w^-1 S_t^-1 w, T(y_t)), S_t = y_{t+1} ... y_m.
    template <typename Base>
    RelatorExpression cocycle(int xrank, XWord const& w, XWord const& v, Base&& base) {
      RelatorExpression        out(xrank);
      std::vector<RelatorExpression> parts;
      parts.reserve(v.size());
      XWord suffix_inv(xrank);
      XWord wi = w.inverse();
      for (std::size_t t = v.size(); t-- > 0;) {
        parts.push_back(conj(wi * suffix_inv * w, base(v.letters()[t])));
        suffix_inv = suffix_inv * XWord(xrank, {-v.letters()[t]});
      }
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        out.append(*it);
      }
      return out;
    }
  }  // namespace

  RelatorExpression IdentityEngine::conj_transport(Letter a, Letter b, XWord const& v) const {
    XWord w  = W(a, b);
    XWord wi = w.inverse();
    return cocycle(xrank(), w, v, [&](code_t y) {
      if (y > 0) {
        return cached_base(a, b, y);
      }
      // T(Y^-1) = conj(w^-1 Y w, T(Y)^-1)
      XWord yw = XWord(xrank(), {-y});
      return conj(wi * yw * w, cached_base(a, b, -y).inverse());
    });
  }

  RelatorExpression IdentityEngine::conj_transport(
      std::vector<std::pair<Letter, Letter>> const& ws, XWord const& v) const {
    RelatorExpression acc(xrank());
    XWord             image = v;
    for (auto const& [a, b] : ws) {
      // T_{W w}(V) = conj(w^-1, T_W(V)) T_w(V^{s_W})
      acc = conj(W(a, b).inverse(), std::move(acc)) * conj_transport(a, b, image);
      image = sigma_word(a, b, image);
    }
    return acc;
  }

  bool IdentityEngine::commutes(code_t x, code_t y) const {
    GenSym gx = _p.symbol(std::abs(x)), gy = _p.symbol(std::abs(y));
    return gersten_commute(gx.first(), Letter(gx.j, x > 0 ? 1 : -1), gy.first(),
                           Letter(gy.j, y > 0 ? 1 : -1));
  }

  RelatorExpression IdentityEngine::commute_transport(code_t x, XWord const& v) const {
    XWord  xw(xrank(), {x});
    GenSym gx = _p.symbol(std::abs(x));
    // x^-1 as a Nielsen map
    Letter xa = gx.first(), xb(gx.j, x > 0 ? -1 : 1);
    return cocycle(xrank(), xw, v, [&](code_t y) {
      if (!commutes(x, y)) {
        throw PreconditionError("generator does not commute with the transported word");
      }
      GenSym gy = _p.symbol(std::abs(y));
      // T_x(y) = [x^-1, y^-1]
      return normalize_commutator(xa, xb, gy.first(), Letter(gy.j, y > 0 ? -1 : 1));
    });
  }

  ////////////////////////////////////////////////////////////////////////
  // Printed identities
  ////////////////////////////////////////////////////////////////////////

  IdentityCertificate IdentityEngine::overlap_transport(int which, Letter a, Letter b, Letter o,
                                              RelMode mode) const {
    Letter c = o, d = o;
    switch (which) {
      case 1: c = a.inverse(); break;
      case 2: c = b.inverse(); break;
      case 3: d = a; break;
      case 4: d = a.inverse(); break;
      case 5: d = b; break;
      case 6: d = b.inverse(); break;
      default: throw PreconditionError("overlap cases are numbered 1..6");
    }
    if (o.index == a.index || o.index == b.index || a.index == b.index) {
      throw PreconditionError("overlap transport needs three distinct indices");
    }
    static char const* roman[] = {"", "i", "ii", "iii", "iv", "v", "vi"};
    return certify(transport_lhs(a, b, E(c, d)), overlap_rhs(which, a, b, o, mode),
                   std::string("transport-") + roman[which], tuple_string({a, b, o}));
  }

  IdentityCertificate IdentityEngine::disjoint_transport(Letter a, Letter b, Letter c, Letter d,
                                              RelMode mode) const {
    std::array<int, 4> idx{a.index, b.index, c.index, d.index};
    for (int s = 0; s < 4; ++s) {
      for (int t = s + 1; t < 4; ++t) {
        if (idx[s] == idx[t]) {
          throw PreconditionError("disjoint transport needs four distinct indices");
        }
      }
    }
    return certify(transport_lhs(a, b, E(c, d)), disjoint_rhs(a, b, c, d, mode), "transport-disjoint",
                   tuple_string({a, b, c, d}));
  }

  IdentityCertificate IdentityEngine::r_inverse(Letter a, Letter b, Letter c,
                                                RelMode mode) const {
    Letter ci = c.inverse();
    return certify(_p.r_word(a, ci, b),
                   conj(E(b, ci) * E(a, ci), r_expr(mode, a, c, b).inverse())
                       * commutator_expr(mode, b, ci, a, ci),
                   "r-inverse", tuple_string({a, b, c}));
  }

  IdentityCertificate IdentityEngine::h_inverse(int which, Letter a, Letter b,
                                                 RelMode mode) const {
    XWord wi = W(a, b).inverse();
    if (which == 1) {
      return certify(_p.h_word(a.inverse(), b), conj(wi, h_expr(mode, a, b)),
                     "h-inverse-a", tuple_string({a, b}));
    }
    return certify(_p.h_word(a, b.inverse()), conj(wi, h_expr(mode, a, b).inverse()),
                   "h-inverse-b", tuple_string({a, b}));
  }

  IdentityCertificate IdentityEngine::split_transport(Letter a, Letter b, Letter c, Letter d,
                                          RelMode mode) const {
    if (!(c == a || c == b) || d.index == a.index || d.index == b.index) {
      throw PreconditionError("split transport needs c in {a, b} and d disjoint from a, b");
    }
    return certify(transport_lhs(a, b, E(c, d)), split_rhs(a, b, c, d, mode), "transport-split",
                   tuple_string({a, b, c, d}));
  }

  IdentityCertificate IdentityEngine::sample_rewrite(int i, int j, int k) const {
    Letter I(i), J(j), K(k), Ji(j, -1);
    return certify(commutator(E(I, Ji), E(K, Ji)),
                   conj(E(I, Ji) * E(K, Ji), raw(commutator(E(I, J), E(K, J)))),
                   "sample", tuple_string({I, J, K}));
  }

  bool IdentityEngine::eq21_admissible(Letter a, Letter b, Letter c, Letter d, Letter e) {
    if (a.index == b.index || c.index == d.index || c.index == e.index
        || d.index == e.index) {
      return false;
    }
    int hits = 0;
    for (Letter l : {c, d, e}) {
      hits += (l.index == a.index || l.index == b.index);
    }
    return hits <= 1;
  }

  bool IdentityEngine::eq41_admissible(Letter a, Letter b, Letter c, Letter d) {
    return a.index != b.index && c.index != d.index && transport_supported(a, b, c, d);
  }

  IdentityCertificate IdentityEngine::eq21_null(Letter a, Letter b, Letter c, Letter d,
                                                Letter e) const {
    if (!eq21_admissible(a, b, c, d, e)) {
      throw PreconditionError("eq21 is not available for " + tuple_string({a, b, c, d, e}));
    }
    XWord w = W(a, b), wi = w.inverse();
    auto  s1 = conj_transport(a, b, E(c, e).inverse());
    auto  s2 = conj_transport(a, b, E(e, d).inverse());
    auto  s3 = conj_transport(a, b, E(c, d).inverse());
    auto  rhs = s1.inverse() * conj(wi * E(c, e) * w, s2.inverse())
               * conj(wi, normalize_r(c, d, e)) * conj(wi * E(c, d) * E(e, d) * w, s1)
               * conj(wi * E(c, d) * w, s2) * s3;
    auto  lhs = normalize_r(sigma(a, b, c), sigma(a, b, d), sigma(a, b, e));
    return certify_null(rhs * lhs.inverse(), "eq21", tuple_string({a, b, c, d, e}));
  }

  IdentityCertificate IdentityEngine::eq41_null(Letter a, Letter b, Letter c, Letter d,
                                                bool verbatim) const {
    if (!eq41_admissible(a, b, c, d)) {
      throw PreconditionError("eq41 is not available for " + tuple_string({a, b, c, d}));
    }
    Letter ci = c.inverse(), di = d.inverse();
    XWord  w = W(a, b), wi = w.inverse();
    XWord  e1 = E(d, c), e2 = E(ci, d), e3 = E(di, ci);
    XWord  e4 = E(d, ci), e5 = E(c, d), e6 = E(di, c);
    // t = E^s (w^-1 E w)^-1 = conj(E^s, T(E)) for the first three generators
    auto left = [&](XWord const& v) { return conj(sigma_word(a, b, v), conj_transport(a, b, v)); };
    auto t3 = left(e1), t2 = left(e2), t1 = left(e3);
    auto t4 = conj_transport(a, b, e4), t5 = conj_transport(a, b, e5),
         t6 = conj_transport(a, b, e6);
    auto rhs = t3 * conj(wi * e1 * w, t2) * conj(wi * e1 * e2 * w, t1);
    if (!verbatim) {
      rhs = rhs * conj(wi, normalize_h(c, d));
    }
    rhs = rhs * conj(wi * (e5 * e6).inverse() * w, t4) * conj(wi * e6.inverse() * w, t5) * t6;
    auto lhs = normalize_h(sigma(a, b, c), sigma(a, b, d));
    return certify_null(rhs * lhs.inverse(), verbatim ? "eq41-verbatim" : "eq41",
                        tuple_string({a, b, c, d}));
  }

}  // namespace autfn
