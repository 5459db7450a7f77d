#include "autfn/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <bit>
#include <future>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "autfn/error.hpp"

namespace autfn {

  std::string GenIndex::to_string(Presentation const& p) const {
    return p.relator(relator).id.to_string() + "(x)e" + std::to_string(basis);
  }

  ////////////////////////////////////////////////////////////////////////
  // Folding expressions into rows
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // The action matrices of the generators are elementary (identity plus
    // one off-diagonal entry); apply them as single row updates.
    struct Elementary {
      int          r = -1, s = -1;
      std::int64_t k = 0;
    };

    class FastAction {
     public:
      explicit FastAction(ModuleAction const& act, int xrank) : _n(act.dim()) {
        for (int g = -xrank; g <= xrank; ++g) {
          Elementary e;
          if (g != 0) {
            SmallMatrix const& m = act.matrix(g);
            int                off = 0;
            bool               diag_ok = true;
            for (int r = 0; r < _n; ++r) {
              for (int c = 0; c < _n; ++c) {
                if (r == c) {
                  diag_ok = diag_ok && m(r, c) == 1;
                } else if (m(r, c) != 0) {
                  ++off;
                  e = {r, c, m(r, c)};
                }
              }
            }
            if (!diag_ok || off != 1) {
              throw PreconditionError("generator action is not elementary");
            }
          }
          _ops.push_back(e);
        }
        _offset = xrank;
      }

      // cols[p] <- cols[p] . x for every column p of the n x n block
      void apply(code_t x, std::vector<std::int64_t>& block) const {
        Elementary const& e = _ops[static_cast<std::size_t>(x + _offset)];
        for (int p = 0; p < _n; ++p) {
          std::int64_t& t = block[static_cast<std::size_t>(p * _n + e.r)];
          t = checked_add(t, checked_mul(e.k, block[static_cast<std::size_t>(p * _n + e.s)]));
        }
      }
      int dim() const {
        return _n;
      }

     private:
      int                     _n;
      int                     _offset = 0;
      std::vector<Elementary> _ops;
    };

    void canonicalize(SparseRow& row) {
      std::sort(row.begin(), row.end(),
                [](auto const& x, auto const& y) { return x.first < y.first; });
      std::size_t out = 0;
      for (std::size_t k = 0; k < row.size();) {
        int          c = row[k].first;
        std::int64_t v = 0;
        for (; k < row.size() && row[k].first == c; ++k) v = checked_add(v, row[k].second);
        if (v != 0) row[out++] = {c, v};
      }
      row.resize(out);
    }

    std::vector<SparseRow> fold_expression(RelatorExpression const& e, FastAction const& fa) {
      int                       n = fa.dim();
      std::vector<SparseRow>    rows(static_cast<std::size_t>(n));
      std::vector<std::int64_t> block(static_cast<std::size_t>(n * n));
      for (auto const& f : e.factors()) {
        if (f.relator < 0) {
          throw CertificationError("relation rows need factors in the reduced relators");
        }
        std::fill(block.begin(), block.end(), 0);
        for (int p = 0; p < n; ++p) block[static_cast<std::size_t>(p * n + p)] = 1;
        for (code_t c : f.conjugator.letters()) fa.apply(c, block);
        for (int p = 0; p < n; ++p) {
          for (int i = 0; i < n; ++i) {
            std::int64_t v = block[static_cast<std::size_t>(p * n + i)];
            if (v != 0) rows[static_cast<std::size_t>(p)].emplace_back(f.relator * n + i, f.exponent * v);
          }
        }
      }
      for (auto& r : rows) canonicalize(r);
      return rows;
    }
  }  // namespace

  SparseRow fold(ModuleAction const& act, XWord const& u, int relator,
                 std::vector<std::int64_t> const& m) {
    int n = act.dim();
    if (static_cast<int>(m.size()) != n) {
      throw RankMismatch("coefficient vector has the wrong length");
    }
    std::vector<std::int64_t> v = m;
    act.apply(u, v);
    SparseRow row;
    for (int i = 0; i < n; ++i) {
      if (v[static_cast<std::size_t>(i)] != 0) row.emplace_back(relator * n + i, v[static_cast<std::size_t>(i)]);
    }
    return row;
  }

  std::vector<SparseRow> relation_from_null(IdentityCertificate const& cert,
                                            ModuleAction const& act) {
    if (!cert.verified || !cert.lhs.empty()) {
      throw CertificationError("relation rows need a verified null certificate ("
                               + cert.family + " " + cert.tuple + ")");
    }
    FastAction fa(act, cert.rhs.rank());
    return fold_expression(cert.rhs, fa);
  }

  ////////////////////////////////////////////////////////////////////////
  // Families
  ////////////////////////////////////////////////////////////////////////

  namespace {
    constexpr std::array<std::pair<HarvestFamily, char const*>, 7> family_names{{
        {HarvestFamily::Presentations, "presentations"},
        {HarvestFamily::F1, "F1"},
        {HarvestFamily::F2, "F2"},
        {HarvestFamily::F3, "F3"},
        {HarvestFamily::F4, "F4"},
        {HarvestFamily::F5, "F5"},
        {HarvestFamily::F6, "F6"},
    }};

    std::vector<Letter> signed_letters(int n) {
      std::vector<Letter> out;
      for (int i = 1; i <= n; ++i) {
        out.emplace_back(i, 1);
        out.emplace_back(i, -1);
      }
      return out;
    }

    std::string letters_string(std::initializer_list<Letter> ls) {
      std::string s = "(";
      bool        first = true;
      for (Letter l : ls) {
        s += (first ? "" : ",") + letter_string(l);
        first = false;
      }
      return s + ")";
    }

    // Cyclic rotation t of w: w = s t', rotation t' s.
    std::vector<code_t> rotate(std::span<code_t const> w, std::size_t t) {
      std::vector<code_t> out(w.begin() + static_cast<std::ptrdiff_t>(t), w.end());
      out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(t));
      return out;
    }
  }  // namespace

  char const* family_name(HarvestFamily f) {
    for (auto const& [k, v] : family_names) {
      if (k == f) return v;
    }
    return "?";
  }

  std::optional<HarvestFamily> parse_family(std::string const& s) {
    for (auto const& [k, v] : family_names) {
      if (s == v) return k;
    }
    return std::nullopt;
  }

  // Feed order: short identifications first keeps the pivot rows sparse.
  std::vector<HarvestFamily> all_families() {
    return {HarvestFamily::Presentations, HarvestFamily::F2, HarvestFamily::F5, HarvestFamily::F3,
            HarvestFamily::F4,            HarvestFamily::F1, HarvestFamily::F6};
  }

  NullFactory::NullFactory(IdentityEngine const& eng)
      : _eng(eng), _p(eng.presentation()), _inst(family_names.size()) {
    int  n = _p.rank();
    auto L = signed_letters(n);
    auto slot = [](HarvestFamily f) { return static_cast<std::size_t>(f); };

    // Relators that are cyclic conjugates of one another or of an inverse.
    {
      std::unordered_map<XWord, std::vector<int>, WordHash> byclass;
      auto canonical = [&](XWord const& w) {
        auto                letters = w.letters();
        std::vector<code_t> best(letters.begin(), letters.end());
        for (int e : {1, -1}) {
          XWord v = e > 0 ? w : w.inverse();
          for (std::size_t t = 0; t < v.size(); ++t) {
            auto r = rotate(v.letters(), t);
            if (r < best) best = r;
          }
        }
        return XWord(w.rank(), best);
      };
      for (int k = 0; k < _p.num_relators(); ++k) {
        byclass[canonical(_p.relator(k).word)].push_back(k);
      }
      for (int k = 0; k < _p.num_relators(); ++k) {
        auto const& cls = byclass[canonical(_p.relator(k).word)];
        if (cls.front() != k) continue;
        for (std::size_t t = 1; t < cls.size(); ++t) {
          Instance in;
          in.a = k;
          in.b = cls[t];
          _inst[slot(HarvestFamily::Presentations)].push_back(in);
        }
      }
    }

    for (Letter a : L) {
      for (Letter b : L) {
        if (a.index == b.index) continue;
        // F1: w_ab^8 through the transports by w_{ab^-1}^4 and w_bc^2
        for (Letter c : L) {
          if (c.index == a.index || c.index == b.index) continue;
          Instance in;
          in.l = {a, b, c};
          _inst[slot(HarvestFamily::F1)].push_back(in);
        }
        // F5: transports split through h_ab
        for (int g = 1; g <= _p.num_generators(); ++g) {
          GenSym s = _p.symbol(g);
          if (s.first() == a || s.first() == b) continue;
          if (!IdentityEngine::transport_supported(a, b, s.first(), s.second())) continue;
          Instance in;
          in.l = {a, b};
          in.a = g;
          _inst[slot(HarvestFamily::F5)].push_back(in);
        }
        // F3 / F4: transported r and h relators
        for (Letter c : L) {
          for (Letter d : L) {
            if (IdentityEngine::eq41_admissible(a, b, c, d)) {
              Instance in;
              in.l = {a, b, c, d};
              _inst[slot(HarvestFamily::F4)].push_back(in);
            }
            for (Letter e : L) {
              if (IdentityEngine::eq21_admissible(a, b, c, d, e)) {
                Instance in;
                in.l = {a, b, c, d, e};
                _inst[slot(HarvestFamily::F3)].push_back(in);
              }
            }
          }
        }
        // F6: second normalization routes, both letters inverted
        if (a.sign < 0 && b.sign < 0) {
          for (int kind = 0; kind < 2; ++kind) {
            Instance in;
            in.l = {a, b};
            in.a = kind;
            _inst[slot(HarvestFamily::F6)].push_back(in);
          }
        }
      }
    }

    // F2: relators against generators commuting with all their letters.
    for (int k = 0; k < _p.num_relators(); ++k) {
      auto letters = _p.relator(k).word.letters();
      for (int g = 1; g <= _p.num_generators(); ++g) {
        for (code_t x : {g, -g}) {
          bool ok = std::all_of(letters.begin(), letters.end(),
                                [&](code_t y) { return _eng.commutes(x, y); });
          if (!ok) continue;
          Instance in;
          in.a = k;
          in.b = x;
          _inst[slot(HarvestFamily::F2)].push_back(in);
        }
      }
    }
  }

  std::vector<Instance> const& NullFactory::instances(HarvestFamily f) const {
    return _inst.at(static_cast<std::size_t>(f));
  }

  std::string NullFactory::tuple_string(HarvestFamily f, Instance const& in) const {
    auto const& l = in.l;
    switch (f) {
      case HarvestFamily::Presentations:
        return "(" + _p.relator(in.a).id.to_string() + "," + _p.relator(in.b).id.to_string() + ")";
      case HarvestFamily::F1: return letters_string({l[0], l[1], l[2]});
      case HarvestFamily::F2:
        return "(" + _p.relator(in.a).id.to_string() + ","
               + _p.format(XWord(_p.num_generators(), {in.b})) + ")";
      case HarvestFamily::F3: return letters_string({l[0], l[1], l[2], l[3], l[4]});
      case HarvestFamily::F4: return letters_string({l[0], l[1], l[2], l[3]});
      case HarvestFamily::F5:
        return letters_string({l[0], l[1]}) + _p.format(_p.generator(_p.symbol(in.a)));
      case HarvestFamily::F6:
        return std::string(in.a == 0 ? "h" : "w4") + letters_string({l[0], l[1]});
    }
    return {};
  }

  IdentityCertificate NullFactory::certificate(HarvestFamily f, Instance const& in) const {
    auto const&       l = in.l;
    int               x = _eng.xrank();
    RelatorExpression e(x);
    switch (f) {
      case HarvestFamily::Presentations: {
        // relator b is u r_a^e u^-1 for a cyclic rotation
        XWord const& wa = _p.relator(in.a).word;
        XWord const& wb = _p.relator(in.b).word;
        bool         found = false;
        for (int sgn : {1, -1}) {
          XWord v = sgn > 0 ? wa : wa.inverse();
          for (std::size_t t = 0; t < v.size() && !found; ++t) {
            if (XWord(x, rotate(v.letters(), t)) == wb) {
              // v = s t', wb = t' s = s^-1 v s
              XWord s(x, std::vector<code_t>(v.letters().begin(),
                                             v.letters().begin() + static_cast<std::ptrdiff_t>(t)));
              e = _eng.reduced(in.b) * conj(s.inverse(), _eng.reduced(in.a, sgn)).inverse();
              found = true;
            }
          }
        }
        break;
      }
      case HarvestFamily::F1: {
        Letter a = l[0], b = l[1], c = l[2];
        XWord  wab = _p.w_word(a, b), wbc = _p.w_word(b, c);
        std::vector<std::pair<Letter, Letter>> w1(4, {a, b.inverse()}), w2(2, {b, c});
        auto   n4 = _eng.normalize_w4(a, b);
        e = _eng.conj_transport(w1, power(wbc, 2)) * _eng.conj_transport(w2, power(wab, -4))
            * n4.inverse() * n4.inverse();
        break;
      }
      case HarvestFamily::F2: {
        XWord const& r = _p.relator(in.a).word;
        XWord        xw(x, {in.b});
        e = conj(xw.inverse(), _eng.reduced(in.a)) * _eng.commute_transport(in.b, r)
            * _eng.reduced(in.a, -1);
        break;
      }
      case HarvestFamily::F3: return _eng.eq21_null(l[0], l[1], l[2], l[3], l[4]);
      case HarvestFamily::F4: return _eng.eq41_null(l[0], l[1], l[2], l[3]);
      case HarvestFamily::F5: {
        Letter a = l[0], b = l[1];
        GenSym s = _p.symbol(in.a);
        Letter c = s.first(), d = s.second();
        XWord  wi = _p.w_word(a, b).inverse();
        XWord  g = _p.generator(s);
        auto   h = _eng.normalize_h(a, b);
        auto   route = conj(wi * g.inverse(), h) * conj(wi, h.inverse())
                     * _eng.base_transport(a.inverse(), b.inverse(), c, d);
        e = _eng.base_transport(a, b, c, d) * route.inverse();
        break;
      }
      case HarvestFamily::F6: {
        Letter a = l[0], b = l[1];
        if (in.a == 0) {
          e = _eng.normalize_h(a, b) * _eng.normalize_h_alt(a, b).inverse();
        } else {
          // w_{a b} = w_{a' b}^-1 h_{a' b} with a' = a^-1, b negative
          Letter            ai = a.inverse();
          XWord             w = _p.w_word(ai, b);
          RelatorExpression h = _eng.normalize_h(ai, b);
          RelatorExpression alt(x);
          for (int t = 1; t <= 4; ++t) alt.append(conj(power(w, -t), h));
          alt.append(_eng.normalize_w4(ai, b.inverse()));
          e = _eng.normalize_w4(a, b) * alt.inverse();
        }
        break;
      }
    }
    return _eng.certify_null(std::move(e), family_name(f), tuple_string(f, in));
  }


  ////////////////////////////////////////////////////////////////////////
  // Online elimination over L = Z[1/2]
  ////////////////////////////////////////////////////////////////////////

  namespace {
    using BigRow = std::vector<std::pair<int, Integer>>;

    // Element m 2^e of L with m odd (or m = 0, e = 0); int64 mantissa with
    // overflow checks.
    struct Dyadic {
      std::int64_t m = 0;
      int          e = 0;

      static Dyadic of(std::int64_t v) {
        Dyadic d{v, 0};
        d.normalize();
        return d;
      }
      void normalize() {
        if (m == 0) {
          e = 0;
          return;
        }
        int t = std::countr_zero(static_cast<std::uint64_t>(m));
        m >>= t;
        e += t;
      }
      bool zero() const {
        return m == 0;
      }
      bool unit() const {
        return m == 1 || m == -1;
      }
    };

    std::int64_t shifted(std::int64_t m, int s) {
      if (s >= 63 || (s > 0 && (m > (INT64_MAX >> s) || m < (INT64_MIN >> s)))) {
        throw std::overflow_error("dyadic shift overflow");
      }
      return m << s;
    }

    Dyadic operator+(Dyadic a, Dyadic b) {
      if (a.zero()) return b;
      if (b.zero()) return a;
      Dyadic r;
      if (a.e <= b.e) {
        r = {checked_add(a.m, shifted(b.m, b.e - a.e)), a.e};
      } else {
        r = {checked_add(shifted(a.m, a.e - b.e), b.m), b.e};
      }
      r.normalize();
      return r;
    }
    Dyadic operator*(Dyadic a, Dyadic b) {
      if (a.zero() || b.zero()) return {};
      return {checked_mul(a.m, b.m), a.e + b.e};
    }
    Dyadic operator-(Dyadic a) {
      return {-a.m, a.e};
    }

    using DyRow = std::vector<std::pair<int, Dyadic>>;

    // Integer representative of a row of L (scaled by a power of two).
    BigRow to_integer_row(DyRow const& r) {
      int emin = 0;
      bool first = true;
      for (auto const& [c, d] : r) {
        if (first || d.e < emin) emin = d.e;
        first = false;
      }
      BigRow out;
      for (auto const& [c, d] : r) {
        Integer v(static_cast<long>(d.m));
        mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(d.e - emin));
        out.emplace_back(c, std::move(v));
      }
      return out;
    }

    // Exact form of an integer row over L when every entry fits.
    std::optional<DyRow> to_dyadic_row(BigRow const& r) {
      DyRow out;
      for (auto const& [c, v] : r) {
        if (v == 0) continue;
        mp_bitcnt_t t = mpz_scan1(v.get_mpz_t(), 0);
        Integer     odd;
        mpz_fdiv_q_2exp(odd.get_mpz_t(), v.get_mpz_t(), t);
        if (!odd.fits_slong_p()) return std::nullopt;
        out.emplace_back(c, Dyadic{odd.get_si(), static_cast<int>(t)});
      }
      return out;
    }

    // Row echelon form over L.  Pivot rows are scaled so the pivot entry is
    // 1 and hold no pivot columns of older pivots; newer pivot columns are
    // cleared from older rows whenever that fits in int64.  Rows whose
    // entries are all non-units go to the hard pool, which is compressed by
    // integer row operations and settled by an SNF at the end.
    class LEliminator {
     public:
      enum class Outcome { Zero, Pivot, Hard };

      LEliminator(int ncols, std::vector<int> col_class)
          : _ncols(ncols), _class(std::move(col_class)),
            _pivot_of(static_cast<std::size_t>(ncols), -1), _occ(static_cast<std::size_t>(ncols)),
            _acc(static_cast<std::size_t>(ncols)), _mark(static_cast<std::size_t>(ncols), 0) {}

      Outcome add(SparseRow const& row, SourceRef src) {
        DyRow d;
        for (auto const& [c, v] : row) d.emplace_back(c, Dyadic::of(v));
        return add_dyadic(d, src);
      }

      void refeed() {
        for (;;) {
          std::vector<Hard> pool;
          pool.swap(_hard);
          for (auto& h : pool) h.entries = reduce_big(h.entries);
          compress(pool);
          bool promoted = false;
          for (auto& h : pool) {
            bool unit = false;
            for (auto const& e : h.entries) unit = unit || is_two_power_unit(e.second);
            if (unit && add_big(h.entries, h.src) == Outcome::Pivot) {
              promoted = true;
            } else if (!unit) {
              _hard.push_back(std::move(h));
            }
          }
          if (!promoted) break;
        }
        _refeed_at = 2 * hard() + 256;
      }
      Outcome add(BigRow const& row, SourceRef src) {
        return add_big(row, src);
      }

      bool reduces_to_zero(SparseRow const& row) const {
        BigRow b;
        for (auto const& [c, v] : row) b.emplace_back(c, Integer(static_cast<long>(v)));
        return reduce_big(b).empty();
      }

      bool refeed_due() const {
        return hard() >= _refeed_at;
      }

      int pivots() const {
        return static_cast<int>(_piv.size());
      }
      int hard() const {
        return static_cast<int>(_hard.size());
      }
      int free_columns() const {
        return _ncols - pivots();
      }

      struct Final {
        std::vector<Integer> divisors;  // SNF of the residual block
      };

      Final finish() {
        refeed();
        Final            f;
        std::vector<int> cols = nonpivot_columns();
        std::vector<int> pos(static_cast<std::size_t>(_ncols), -1);
        for (std::size_t k = 0; k < cols.size(); ++k) pos[static_cast<std::size_t>(cols[k])] = static_cast<int>(k);
        if (!_hard.empty()) {
          DenseMatrix d(hard(), static_cast<int>(cols.size()));
          for (int r = 0; r < hard(); ++r) {
            for (auto const& [c, x] : _hard[static_cast<std::size_t>(r)].entries) {
              if (pos[static_cast<std::size_t>(c)] < 0) throw Error("hard row meets a pivot column");
              d(r, pos[static_cast<std::size_t>(c)]) = x;
            }
          }
          f.divisors = snf(std::move(d), false).divisors;
        }
        return f;
      }

      // Echelon rows (pivots, then hard rows), each scaled to integers.
      SparseMatrix echelon() const {
        SparseMatrix m(pivots() + hard(), _ncols);
        int          r = 0;
        for (auto const& p : _piv) {
          for (auto const& [c, v] : to_integer_row(p.entries)) m.add(r, c, v);
          ++r;
        }
        for (auto const& h : _hard) {
          for (auto const& [c, v] : h.entries) m.add(r, c, v);
          ++r;
        }
        m.finalize();
        return m;
      }

      std::vector<int> nonpivot_columns() const {
        std::vector<int> out;
        for (int c = 0; c < _ncols; ++c)
          if (_pivot_of[static_cast<std::size_t>(c)] < 0) out.push_back(c);
        return out;
      }

      std::vector<SourceRef> sources() const {
        std::vector<SourceRef> out;
        for (auto const& p : _piv) out.push_back(p.src);
        for (auto const& h : _hard) out.push_back(h.src);
        return out;
      }

      long skipped = 0;  // back-substitutions skipped for overflow


     private:
      struct Pivot {
        int       col;
        DyRow     entries;  // sorted, entry at col is 1
        SourceRef src;
      };
      struct Hard {
        BigRow    entries;
        SourceRef src;
      };

      void touch(int c) {
        if (!_mark[static_cast<std::size_t>(c)]) {
          _mark[static_cast<std::size_t>(c)] = 1;
          _touched.push_back(c);
        }
      }
      void clear_acc() {
        for (int c : _touched) {
          _acc[static_cast<std::size_t>(c)] = {};
          _mark[static_cast<std::size_t>(c)] = 0;
        }
        _touched.clear();
      }

      Outcome add_dyadic(DyRow const& row, SourceRef src) {
        DyRow out;
        try {
          out = reduce_small(row);
        } catch (std::overflow_error const&) {
          clear_acc();
          return add_big(to_integer_row(row), src, true);
        }
        return place(std::move(out), src);
      }

      // Stores a reduced row as a pivot or in the hard pool.
      Outcome place(DyRow out, SourceRef src) {
        if (out.empty()) return Outcome::Zero;
        int best = -1;
        for (std::size_t k = 0; k < out.size(); ++k) {
          if (!out[k].second.unit()) continue;
          if (best < 0 || better(out[k].first, out[static_cast<std::size_t>(best)].first)) {
            best = static_cast<int>(k);
          }
        }
        if (best < 0) {
          _hard.push_back({to_integer_row(out), src});
          return Outcome::Hard;
        }
        int    col = out[static_cast<std::size_t>(best)].first;
        Dyadic inv{out[static_cast<std::size_t>(best)].second.m, -out[static_cast<std::size_t>(best)].second.e};
        try {
          for (auto& e : out) e.second = e.second * inv;
        } catch (std::overflow_error const&) {
          _hard.push_back({to_integer_row(out), src});
          return Outcome::Hard;
        }
        install(col, std::move(out), src);
        return Outcome::Pivot;
      }

      DyRow reduce_small(DyRow const& row) {
        for (auto const& [c, v] : row) {
          touch(c);
          _acc[static_cast<std::size_t>(c)] = _acc[static_cast<std::size_t>(c)] + v;
        }
        std::priority_queue<int, std::vector<int>, std::greater<>> heap;
        for (int c : _touched) {
          int pi = _pivot_of[static_cast<std::size_t>(c)];
          if (pi >= 0) heap.push(pi);
        }
        int last = -1;
        while (!heap.empty()) {
          int pi = heap.top();
          heap.pop();
          if (pi == last) continue;
          last = pi;
          Pivot const& P = _piv[static_cast<std::size_t>(pi)];
          Dyadic       f = -_acc[static_cast<std::size_t>(P.col)];
          if (f.zero()) continue;
          for (auto const& [d, e] : P.entries) {
            touch(d);
            auto& a = _acc[static_cast<std::size_t>(d)];
            a = d == P.col ? Dyadic{} : a + f * e;
            if (d != P.col) {
              int q = _pivot_of[static_cast<std::size_t>(d)];
              if (q >= 0) heap.push(q);
            }
          }
        }
        DyRow out;
        for (int c : _touched) {
          Dyadic v = _acc[static_cast<std::size_t>(c)];
          if (!v.zero()) out.emplace_back(c, v);
        }
        clear_acc();
        std::sort(out.begin(), out.end(), [](auto const& x, auto const& y) { return x.first < y.first; });
        return out;
      }

      bool better(int x, int y) const {
        int cx = _class[static_cast<std::size_t>(x)], cy = _class[static_cast<std::size_t>(y)];
        if (cx != cy) return cx < cy;
        std::size_t ox = _occ[static_cast<std::size_t>(x)].size();
        std::size_t oy = _occ[static_cast<std::size_t>(y)].size();
        if (ox != oy) return ox < oy;
        return x < y;
      }

      void install(int c, DyRow row, SourceRef src) {
        int idx = pivots();
        _piv.push_back({c, std::move(row), src});
        _pivot_of[static_cast<std::size_t>(c)] = idx;
        std::vector<int> users;
        users.swap(_occ[static_cast<std::size_t>(c)]);
        for (auto const& [d, v] : _piv.back().entries) {
          if (d != c) _occ[static_cast<std::size_t>(d)].push_back(idx);
        }
        std::sort(users.begin(), users.end());
        users.erase(std::unique(users.begin(), users.end()), users.end());
        for (int q : users) {
          if (q != idx) eliminate_from(q, idx);
        }
      }

      // Q <- Q - Q[c] P for the pivot P of column c.
      void eliminate_from(int qi, int pi) {
        Pivot&       Q = _piv[static_cast<std::size_t>(qi)];
        Pivot const& P = _piv[static_cast<std::size_t>(pi)];
        auto it = std::lower_bound(Q.entries.begin(), Q.entries.end(), P.col,
                                   [](auto const& x, int c) { return x.first < c; });
        if (it == Q.entries.end() || it->first != P.col) return;
        Dyadic f = -it->second;
        try {
          DyRow out;
          out.reserve(Q.entries.size() + P.entries.size());
          std::vector<int> fresh;
          auto qa = Q.entries.cbegin();
          auto pa = P.entries.cbegin();
          while (qa != Q.entries.cend() || pa != P.entries.cend()) {
            if (pa == P.entries.cend() || (qa != Q.entries.cend() && qa->first < pa->first)) {
              out.push_back(*qa++);
            } else if (qa == Q.entries.cend() || pa->first < qa->first) {
              out.emplace_back(pa->first, f * pa->second);
              fresh.push_back(pa->first);
              ++pa;
            } else {
              Dyadic x = pa->first == P.col ? Dyadic{} : qa->second + f * pa->second;
              if (!x.zero()) out.emplace_back(qa->first, x);
              ++qa;
              ++pa;
            }
          }
          Q.entries = std::move(out);
          for (int d : fresh) _occ[static_cast<std::size_t>(d)].push_back(qi);
        } catch (std::overflow_error const&) {
          ++skipped;
        }
      }

      // Exact reduction against all pivots, as an integer row with the
      // 2-content removed.
      BigRow reduce_big(BigRow const& row) const {
        std::map<int, mpq_class> acc;
        for (auto const& [c, v] : row) acc[c] += v;
        std::priority_queue<int, std::vector<int>, std::greater<>> heap;
        for (auto const& [c, v] : acc)
          if (_pivot_of[static_cast<std::size_t>(c)] >= 0) heap.push(_pivot_of[static_cast<std::size_t>(c)]);
        int last = -1;
        while (!heap.empty()) {
          int pi = heap.top();
          heap.pop();
          if (pi == last) continue;
          last = pi;
          Pivot const& P = _piv[static_cast<std::size_t>(pi)];
          mpq_class    f = acc[P.col];
          if (f == 0) continue;
          for (auto const& [d, e] : P.entries) {
            mpq_class x(static_cast<long>(e.m));
            if (e.e >= 0) {
              mpq_mul_2exp(x.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(e.e));
            } else {
              mpq_div_2exp(x.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(-e.e));
            }
            acc[d] -= f * x;
            if (d != P.col && _pivot_of[static_cast<std::size_t>(d)] >= 0)
              heap.push(_pivot_of[static_cast<std::size_t>(d)]);
          }
        }
        // clear 2-power denominators, then strip the common 2-content
        mp_bitcnt_t den = 0;
        for (auto const& [c, v] : acc) {
          if (v != 0) den = std::max<mp_bitcnt_t>(den, mpz_scan1(v.get_den_mpz_t(), 0));
        }
        BigRow out;
        for (auto& [c, v] : acc) {
          if (v == 0) continue;
          mpq_class s = v;
          mpq_mul_2exp(s.get_mpq_t(), s.get_mpq_t(), den);
          if (s.get_den() != 1) throw Error("non-dyadic coefficient in reduction");
          out.emplace_back(c, s.get_num());
        }
        strip_twos(out);
        return out;
      }

      // An integer row, reduced exactly; kept on the fast path if it fits.
      Outcome add_big(BigRow const& row, SourceRef src, bool reduce = true) {
        BigRow r = reduce ? reduce_big(row) : row;
        if (r.empty()) return Outcome::Zero;
        if (auto d = to_dyadic_row(r)) return place(std::move(*d), src);
        _hard.push_back({std::move(r), src});
        return Outcome::Hard;
      }

      static void strip_twos(BigRow& r) {
        if (r.empty()) return;
        mp_bitcnt_t t = ~mp_bitcnt_t{0};
        for (auto const& e : r) t = std::min(t, mpz_scan1(e.second.get_mpz_t(), 0));
        if (t == 0) return;
        for (auto& e : r) mpz_fdiv_q_2exp(e.second.get_mpz_t(), e.second.get_mpz_t(), t);
      }

      // Row echelon by Euclid steps with the smallest entry as the pivot;
      // zero rows are dropped.  Every step is unimodular or a 2-power scaling.
      static void compress(std::vector<Hard>& rows) {
        std::vector<int> cols;
        for (auto const& h : rows)
          for (auto const& e : h.entries) cols.push_back(e.first);
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        int const                         nc = static_cast<int>(cols.size());
        std::vector<std::vector<Integer>> d;
        std::vector<SourceRef>            src;
        for (auto const& h : rows) {
          std::vector<Integer> v(static_cast<std::size_t>(nc));
          bool                 any = false;
          for (auto const& [c, x] : h.entries) {
            v[static_cast<std::size_t>(std::lower_bound(cols.begin(), cols.end(), c) - cols.begin())] = x;
            any = true;
          }
          if (any) {
            d.push_back(std::move(v));
            src.push_back(h.src);
          }
        }
        auto strip = [](std::vector<Integer>& v) {
          mp_bitcnt_t t = ~mp_bitcnt_t{0};
          for (auto const& x : v)
            if (x != 0) t = std::min(t, mpz_scan1(x.get_mpz_t(), 0));
          if (t == 0 || t == ~mp_bitcnt_t{0}) return;
          for (auto& x : v) mpz_fdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), t);
        };
        std::size_t top = 0;
        Integer     q;
        for (int c = 0; c < nc && top < d.size(); ++c) {
          auto cs = static_cast<std::size_t>(c);
          for (;;) {
            std::size_t piv = d.size();
            for (std::size_t r = top; r < d.size(); ++r) {
              if (d[r][cs] != 0 && (piv == d.size() || mpz_cmpabs(d[r][cs].get_mpz_t(), d[piv][cs].get_mpz_t()) < 0)) piv = r;
            }
            if (piv == d.size()) break;
            std::swap(d[top], d[piv]);
            std::swap(src[top], src[piv]);
            bool clean = true;
            for (std::size_t r = top + 1; r < d.size(); ++r) {
              if (d[r][cs] == 0) continue;
              mpz_fdiv_q(q.get_mpz_t(), d[r][cs].get_mpz_t(), d[top][cs].get_mpz_t());
              for (int k = c; k < nc; ++k) {
                auto ks = static_cast<std::size_t>(k);
                if (d[top][ks] != 0) mpz_submul(d[r][ks].get_mpz_t(), q.get_mpz_t(), d[top][ks].get_mpz_t());
              }
              strip(d[r]);
              clean = clean && d[r][cs] == 0;
            }
            if (clean) break;
          }
          if (d[top][cs] != 0) ++top;
        }
        rows.clear();
        for (std::size_t r = 0; r < top; ++r) {
          Hard h;
          h.src = src[r];
          for (int k = 0; k < nc; ++k)
            if (d[r][static_cast<std::size_t>(k)] != 0) h.entries.emplace_back(cols[static_cast<std::size_t>(k)], d[r][static_cast<std::size_t>(k)]);
          rows.push_back(std::move(h));
        }
      }

      int                           _ncols;
      std::vector<int>              _class;
      std::vector<int>              _pivot_of;
      std::vector<std::vector<int>> _occ;  // pivot rows that may contain a column
      std::vector<Pivot>            _piv;
      std::vector<Hard>             _hard;
      std::vector<Dyadic>           _acc;
      std::vector<char>             _mark;
      std::vector<int>              _touched;
      int                           _refeed_at = 256;
    };

    int column_class(Family f) {
      switch (f) {
        case Family::R5_1: return 0;
        case Family::R4_1: return 2;
        case Family::R3_1:
        case Family::R3_2:
        case Family::R3_3:
        case Family::R3_4: return 3;
        default: return 1;
      }
    }

    double since(std::chrono::steady_clock::time_point t0) {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    struct Produced {
      std::vector<std::pair<SourceRef, SparseRow>> rows;
      long                                         certified = 0;
    };

    Produced produce(NullFactory const& nf, ModuleAction const& act, HarvestFamily f,
                     std::vector<Instance> const& inst, std::size_t from, std::size_t to) {
      Produced out;
      for (std::size_t k = from; k < to; ++k) {
        IdentityCertificate cert = nf.certificate(f, inst[k]);
        if (!cert.verified) {
          throw CertificationError("identity failed to certify: " + cert.log_line());
        }
        ++out.certified;
        auto rows = relation_from_null(cert, act);
        for (std::size_t p = 0; p < rows.size(); ++p) {
          if (rows[p].empty()) continue;
          SourceRef src{f, static_cast<std::uint32_t>(k), static_cast<std::uint16_t>(p + 1)};
          out.rows.emplace_back(src, std::move(rows[p]));
        }
      }
      return out;
    }

    // phi applied to a row, as a map X x basis -> Z; empty iff in ker phi.
    bool in_kernel_of_phi(std::vector<std::vector<std::pair<int, std::int64_t>>> const& phi_cols,
                          SparseRow const& row, std::vector<std::int64_t>& scratch,
                          std::vector<int>& touched) {
      for (auto const& [c, v] : row) {
        for (auto const& [r, e] : phi_cols[static_cast<std::size_t>(c)]) {
          if (scratch[static_cast<std::size_t>(r)] == 0) touched.push_back(r);
          scratch[static_cast<std::size_t>(r)]
              = checked_add(scratch[static_cast<std::size_t>(r)], checked_mul(v, e));
        }
      }
      bool zero = true;
      for (int r : touched) {
        zero = zero && scratch[static_cast<std::size_t>(r)] == 0;
        scratch[static_cast<std::size_t>(r)] = 0;
      }
      touched.clear();
      return zero;
    }
  }  // namespace

  class LEchelon::Impl : public LEliminator {
   public:
    using LEliminator::LEliminator;
  };

  LEchelon::LEchelon(int ncols, std::vector<int> column_class) {
    if (column_class.empty()) column_class.assign(static_cast<std::size_t>(ncols), 0);
    if (static_cast<int>(column_class.size()) != ncols) {
      throw RankMismatch("column classes do not match the column count");
    }
    _impl = std::make_unique<Impl>(ncols, std::move(column_class));
  }
  LEchelon::~LEchelon() = default;
  LEchelon::LEchelon(LEchelon&&) noexcept = default;
  LEchelon& LEchelon::operator=(LEchelon&&) noexcept = default;

  LEchelon::Outcome LEchelon::add(SparseRow const& row, SourceRef src) {
    auto o = _impl->add(row, src);
    if (_impl->refeed_due()) _impl->refeed();
    return static_cast<Outcome>(o);
  }
  bool LEchelon::reduces_to_zero(SparseRow const& row) const {
    return _impl->reduces_to_zero(row);
  }
  std::vector<Integer> LEchelon::finish() {
    return _impl->finish().divisors;
  }
  int LEchelon::pivots() const {
    return _impl->pivots();
  }
  int LEchelon::hard() const {
    return _impl->hard();
  }
  int LEchelon::free_columns() const {
    return _impl->free_columns();
  }
  std::vector<int> LEchelon::nonpivot_columns() const {
    return _impl->nonpivot_columns();
  }
  SparseMatrix LEchelon::echelon() const {
    return _impl->echelon();
  }

  ModulePresentation harvest(IdentityEngine const& eng, Coeff m, HarvestOptions const& opt) {
    auto                t0 = std::chrono::steady_clock::now();
    Presentation const& p = eng.presentation();
    int                 n = p.rank();
    ModuleAction        act(p, m);
    NullFactory         nf(eng);
    auto                log = [&](std::string const& s) {
      if (opt.log) opt.log(s);
    };

    ModulePresentation mp;
    mp.n = n;
    mp.coeff = m;
    mp.generators = p.num_relators() * n;

    std::vector<int> cls(static_cast<std::size_t>(mp.generators));
    for (int c = 0; c < mp.generators; ++c)
      cls[static_cast<std::size_t>(c)] = column_class(p.relator(c / n).id.family);
    LEliminator elim(mp.generators, std::move(cls));

    // phi columns for the soundness check of every row
    SparseMatrix phi = phi_matrix(p, m, opt.threads);
    std::vector<std::vector<std::pair<int, std::int64_t>>> phi_cols(
        static_cast<std::size_t>(phi.cols()));
    for (auto const& t : phi.entries())
      phi_cols[static_cast<std::size_t>(t.col)].emplace_back(t.row, t.value.get_si());
    std::vector<std::int64_t> scratch(static_cast<std::size_t>(phi.rows()), 0);
    std::vector<int>          touched;

    int const   threads = std::max(1, opt.threads);
    std::size_t chunk = 64;
    bool        done = false;
    for (HarvestFamily f : opt.families) {
      if (done) break;
      auto         tf = std::chrono::steady_clock::now();
      FamilyStats  st;
      st.family = family_name(f);
      auto const& inst = nf.instances(f);
      st.instances = static_cast<long>(inst.size());
      int before = elim.pivots() + elim.hard();
      for (std::size_t start = 0; start < inst.size() && !done;) {
        // a window of chunks, generated in parallel and consumed in order
        std::vector<std::future<Produced>> window;
        std::vector<Produced>              ready;
        for (int t = 0; t < threads && start < inst.size(); ++t) {
          std::size_t to = std::min(inst.size(), start + chunk);
          if (threads == 1) {
            ready.push_back(produce(nf, act, f, inst, start, to));
          } else {
            window.push_back(std::async(std::launch::async, produce, std::cref(nf), std::cref(act), f,
                                        std::cref(inst), start, to));
          }
          start = to;
        }
        for (auto& fu : window) ready.push_back(fu.get());
        for (auto& pr : ready) {
          st.certified += pr.certified;
          for (auto& [src, row] : pr.rows) {
            if (done) break;
            if (!in_kernel_of_phi(phi_cols, row, scratch, touched)) {
              throw CertificationError("relation row outside ker phi: " + std::string(family_name(f))
                                       + " " + nf.tuple_string(f, inst[src.instance]));
            }
            ++mp.phi_checked;
            ++st.rows;
            elim.add(row, src);
            if (elim.refeed_due()) elim.refeed();
            if (opt.stop_at >= 0 && elim.hard() == 0 && elim.free_columns() <= opt.stop_at) {
              done = true;
              mp.stopped_early = true;
            }
          }
        }
      }
      elim.refeed();
      st.rank_gain = elim.pivots() + elim.hard() - before;
      st.seconds = since(tf);
      mp.relations += st.rows;
      log(st.family + ": " + std::to_string(st.certified) + " certified, " + std::to_string(st.rows)
          + " rows, free " + std::to_string(elim.free_columns()) + ", hard "
          + std::to_string(elim.hard()) + ", skipped " + std::to_string(elim.skipped) + ", " + std::to_string(since(tf)) + " s");
      mp.manifest.push_back(std::move(st));
    }

    auto fin = elim.finish();
    mp.pivots = elim.pivots();
    mp.hard_rows = elim.hard();
    mp.hard_divisors = fin.divisors;
    mp.module = to_L(elim.free_columns(), fin.divisors);
    mp.bound = mp.module.generators();

    // Rebuild a sample of the stored rows from their certificates; each must
    // reduce to zero against the final echelon (exact once the hard pool is
    // empty).
    {
      auto             srcs = elim.sources();
      std::mt19937_64  rng(0x5eed);
      std::bernoulli_distribution pick(std::clamp(opt.spot_check, 0.0, 1.0));
      for (auto const& s : srcs) {
        if (!pick(rng)) continue;
        auto cert = nf.certificate(s.family, nf.instances(s.family)[s.instance]);
        auto rows = relation_from_null(cert, act);
        auto const& row = rows.at(static_cast<std::size_t>(s.basis - 1));
        if (!cert.verified || row.empty() || (elim.hard() == 0 && !elim.reduces_to_zero(row))) {
          throw CertificationError("spot check failed for " + cert.log_line());
        }
        ++mp.spot_checked;
      }
    }

    mp.survivors = elim.nonpivot_columns();
    mp.echelon = elim.echelon();
    mp.seconds = since(t0);
    return mp;
  }

  std::vector<GenIndex> reference_generators(Presentation const& p, Coeff m) {
    int  n = p.rank();
    auto col = [&](XWord const& w, int e) {
      auto k = p.find_relator(w);
      if (!k) throw Error("reference generator is not a listed relator");
      return GenIndex{*k, e};
    };
    // r_{a j}(.) (x) e_q is represented by r_{a j}(k) (x) e_q for the least k
    // off {i, j, q}; at n = 3 that can fail and q is allowed.
    auto dot = [&](int i, int j, int q = 0) {
      int k = 1;
      while (k == i || k == j || (k == q && n > 3)) ++k;
      if (k > n) k = q;
      return k;
    };
    std::vector<GenIndex> out;
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        for (int s : {1, -1}) {
          for (int q = 1; q <= n; ++q) {
            if (m == Coeff::H ? q == i : q == j) continue;
            out.push_back(col(p.r_word(Letter(i, s), Letter(j), Letter(dot(i, j, q))), q));
          }
        }
      }
    }
    if (m == Coeff::H) {
      for (int j = 1; j <= n; ++j) {
        int mu = j == 1 ? 2 : 1;
        for (int a = 1; a <= n; ++a) {
          if (a == j) continue;
          if (a != mu) out.push_back(col(p.r_word(Letter(a), Letter(j), Letter(mu)), a));
          // r_{mu^-1 j}(mu) is undefined; take the next free index instead
          int arg = a != mu ? mu : dot(mu, j);
          out.push_back(col(p.r_word(Letter(a, -1), Letter(j), Letter(arg)), a));
        }
      }
    } else {
      for (int j = 2; j <= n; ++j) {
        for (int i = 2; i <= n; ++i) {
          if (i == j) continue;
          for (int s : {1, -1}) out.push_back(col(p.r_word(Letter(i, s), Letter(j), Letter(1)), j));
        }
        if (j != 2) {
          for (int s : {1, -1}) out.push_back(col(p.r_word(Letter(1, s), Letter(j), Letter(2)), j));
        }
        out.push_back(col(p.h_word(Letter(1), Letter(j)), j));
      }
    }
    std::sort(out.begin(), out.end(), [n](GenIndex const& a, GenIndex const& b) {
      return a.column(n) < b.column(n);
    });
    return out;
  }

  bool generates(ModulePresentation const& mp, std::vector<GenIndex> const& g) {
    LEliminator elim(mp.generators, std::vector<int>(static_cast<std::size_t>(mp.generators), 0));
    for (auto const& x : g) elim.add(SparseRow{{x.column(mp.n), 1}}, {});
    std::vector<std::vector<std::pair<int, Integer>>> rows(static_cast<std::size_t>(mp.echelon.rows()));
    for (auto const& t : mp.echelon.entries()) rows[static_cast<std::size_t>(t.row)].emplace_back(t.col, t.value);
    for (auto const& r : rows) {
      elim.add(r, {});
      if (elim.refeed_due()) elim.refeed();
    }
    auto fin = elim.finish();
    return to_L(elim.free_columns(), fin.divisors).trivial();
  }

  std::vector<GenIndex> survivor_basis(ModulePresentation const& mp, long target) {
    if (mp.bound > target) {
      throw PreconditionError("bound " + std::to_string(mp.bound) + " exceeds the target "
                              + std::to_string(target));
    }
    std::vector<GenIndex> out;
    for (int c : mp.survivors) out.push_back(GenIndex::of_column(c, mp.n));
    return out;
  }

}  // namespace autfn
