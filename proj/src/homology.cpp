#include "autfn/homology.hpp"

#include <chrono>
#include <thread>

#include "autfn/error.hpp"

namespace autfn {

  ////////////////////////////////////////////////////////////////////////
  // Group ring and Fox calculus
  ////////////////////////////////////////////////////////////////////////

  GroupRingElt GroupRingElt::of(Word const& w, Integer const& c) {
    GroupRingElt e(w.rank());
    e.add(w, c);
    return e;
  }

  GroupRingElt& GroupRingElt::add(Word const& w, Integer const& c) {
    if (w.rank() != _rank) {
      throw RankMismatch("group ring term of the wrong rank");
    }
    if (c == 0) {
      return *this;
    }
    auto [it, fresh] = _terms.try_emplace(w, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) {
        _terms.erase(it);
      }
    }
    return *this;
  }

  GroupRingElt& GroupRingElt::operator+=(GroupRingElt const& x) {
    for (auto const& [w, c] : x._terms) add(w, c);
    return *this;
  }

  GroupRingElt& GroupRingElt::operator-=(GroupRingElt const& x) {
    for (auto const& [w, c] : x._terms) add(w, -c);
    return *this;
  }

  GroupRingElt operator*(GroupRingElt const& a, GroupRingElt const& b) {
    if (a._rank != b._rank) {
      throw RankMismatch("group ring product of different ranks");
    }
    GroupRingElt out(a._rank);
    for (auto const& [u, c] : a._terms) {
      for (auto const& [v, d] : b._terms) {
        out.add(u * v, c * d);
      }
    }
    return out;
  }

  GroupRingElt fox_derivative(Word const& w, code_t gen) {
    if (gen <= 0 || gen > w.rank()) {
      throw PreconditionError("Fox derivative needs a generator");
    }
    GroupRingElt out(w.rank());
    WordBuilder  prefix(w.rank());
    for (code_t c : w.letters()) {
      if (c == gen) {
        out.add(prefix.build(), 1);
      }
      prefix.push(c);
      if (c == -gen) {
        // d x^-1 / dx = -x^-1
        out.add(prefix.build(), -1);
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Coefficient action
  ////////////////////////////////////////////////////////////////////////

  ModuleAction::ModuleAction(Presentation const& p, Coeff m)
      : _m(m), _n(p.rank()), _x(p.num_generators()) {
    for (int g = 1; g <= _x; ++g) {
      SmallMatrix r = right_action_matrix(m, induced_matrix(p.generator_map(g)));
      _neg.push_back(unimodular_inverse(r));
      _pos.push_back(std::move(r));
    }
  }

  SmallMatrix const& ModuleAction::matrix(code_t x) const {
    if (x == 0 || std::abs(x) > _x) {
      throw PreconditionError("generator code out of range");
    }
    auto k = static_cast<std::size_t>(std::abs(x) - 1);
    return x > 0 ? _pos[k] : _neg[k];
  }

  void ModuleAction::apply(code_t x, std::vector<std::int64_t>& v) const {
    v = matrix(x).apply(v);
  }

  void ModuleAction::apply(Word const& u, std::vector<std::int64_t>& v) const {
    for (code_t c : u.letters()) apply(c, v);
  }

  ////////////////////////////////////////////////////////////////////////
  // Matrices
  ////////////////////////////////////////////////////////////////////////

  namespace {
    struct Entry {
      int          row, col;
      std::int64_t value;
    };

    void phi_columns(Presentation const& p, ModuleAction const& act, int from, int to,
                     std::vector<Entry>& out) {
      int                       n = p.rank();
      std::vector<std::int64_t> v(static_cast<std::size_t>(n));
      for (int k = from; k < to; ++k) {
        auto letters = p.relator(k).word.letters();
        for (int e = 1; e <= n; ++e) {
          std::fill(v.begin(), v.end(), 0);
          v[static_cast<std::size_t>(e - 1)] = 1;
          int col = k * n + e - 1;
          for (code_t c : letters) {
            if (c > 0) {
              for (int i = 0; i < n; ++i)
                if (v[static_cast<std::size_t>(i)])
                  out.push_back({(c - 1) * n + i, col, v[static_cast<std::size_t>(i)]});
            }
            act.apply(c, v);
            if (c < 0) {
              for (int i = 0; i < n; ++i)
                if (v[static_cast<std::size_t>(i)])
                  out.push_back({(-c - 1) * n + i, col, -v[static_cast<std::size_t>(i)]});
            }
          }
        }
      }
    }
  }  // namespace

  SparseMatrix phi_matrix(Presentation const& p, Coeff m, int threads) {
    ModuleAction act(p, m);
    int          n = p.rank(), nr = p.num_relators();
    threads = std::max(1, std::min(threads, nr));
    std::vector<std::vector<Entry>> parts(static_cast<std::size_t>(threads));
    std::vector<std::thread>        pool;
    for (int t = 0; t < threads; ++t) {
      int from = static_cast<int>(static_cast<long>(nr) * t / threads);
      int to   = static_cast<int>(static_cast<long>(nr) * (t + 1) / threads);
      pool.emplace_back([&, t, from, to] {
        phi_columns(p, act, from, to, parts[static_cast<std::size_t>(t)]);
      });
    }
    for (auto& th : pool) th.join();
    SparseMatrix phi(p.num_generators() * n, nr * n);
    for (auto const& part : parts)
      for (auto const& e : part) phi.add(e.row, e.col, static_cast<long>(e.value));
    phi.finalize();
    return phi;
  }

  SparseMatrix d1_matrix(Presentation const& p, Coeff m) {
    ModuleAction act(p, m);
    int          n = p.rank();
    SparseMatrix d(n, p.num_generators() * n);
    for (int x = 1; x <= p.num_generators(); ++x) {
      SmallMatrix const& a = act.matrix(x);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          long v = static_cast<long>(a(i, j)) - (i == j ? 1 : 0);
          if (v) d.add(i, (x - 1) * n + j, v);
        }
      }
    }
    d.finalize();
    return d;
  }

  ////////////////////////////////////////////////////////////////////////
  // H_1
  ////////////////////////////////////////////////////////////////////////

  H1Result h1_of_autplus(Presentation const& p, Coeff m, HomologyOptions const& opt) {
    auto     start = std::chrono::steady_clock::now();
    H1Result h;
    h.n     = p.rank();
    h.coeff = m;

    SparseMatrix phi = phi_matrix(p, m, opt.threads);
    SparseMatrix d1  = d1_matrix(p, m);
    h.phi_rows = phi.rows();
    h.phi_cols = phi.cols();
    h.phi_nnz  = static_cast<long>(phi.nnz());
    h.phi_hash = phi.content_hash();
    h.chain_ok = multiply(d1, phi).nnz() == 0;
    if (!h.chain_ok) {
      throw CertificationError("d1 phi is not zero");
    }

    // span of the columns of phi
    ColumnLattice lat(phi.rows());
    auto          cols = phi.columns();
    for (auto const& c : cols) lat.insert(c);
    h.image_rank = lat.rank();
    h.lattice_ok = true;
    if (opt.verify) {
      for (auto const& c : cols) {
        if (!lat.contains(c)) {
          h.lattice_ok = false;
          break;
        }
      }
      if (!h.lattice_ok) throw CertificationError("phi column outside the computed span");
    }
    DenseMatrix basis = lat.basis();

    for (std::uint32_t q : {1000003u, 998244353u, 2147483629u}) {
      int r = rank_mod_p(phi, q);
      h.rank_mod_p.emplace_back(q, r);
      if (r != h.image_rank) {
        throw CertificationError("rank of phi mod " + std::to_string(q) + " is "
                                 + std::to_string(r) + ", exact rank "
                                 + std::to_string(h.image_rank));
      }
    }

    h.snf_ok          = true;
    SNFResult s_basis = snf(basis, opt.verify);
    if (opt.verify && !verify_snf(basis, s_basis)) h.snf_ok = false;
    h.phi_divisors = s_basis.divisors;

    DenseMatrix d1d = d1.to_dense();
    SNFResult   sd  = snf(d1d, true);
    if (opt.verify && !verify_snf(d1d, sd)) h.snf_ok = false;
    h.d1_rank     = sd.rank;
    h.kernel_rank = d1.cols() - sd.rank;

    // coordinates of the image basis in the kernel basis: the last
    // kernel_rank rows of V^-1
    DenseMatrix kv(h.kernel_rank, d1.cols());
    for (int r = 0; r < h.kernel_rank; ++r)
      for (int c = 0; c < d1.cols(); ++c) kv(r, c) = sd.Vinv(sd.rank + r, c);
    DenseMatrix coords = kv * basis;
    SNFResult   sc     = snf(coords, opt.verify);
    if (opt.verify && !verify_snf(coords, sc)) h.snf_ok = false;
    if (!h.snf_ok) throw CertificationError("SNF reconstruction failed");
    h.coker_divisors = sc.divisors;
    h.h1             = to_L(sc);

    h.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return h;
  }

  H2Certificate h2_certificate(H1Result const& h, long bound) {
    H2Certificate c;
    c.bound       = bound;
    c.image_rank  = h.image_rank;
    c.kernel_rank = h.kernel_rank;
    int expected_corank = h.coeff == Coeff::H ? 0 : 1;
    if (h.h1.free_rank != expected_corank || !h.h1.torsion.empty()) {
      c.reason = "image of phi has quotient " + h.h1.describe() + " in ker d1, expected "
                 + (expected_corank ? "L" : "0");
      return c;
    }
    if (bound != h.image_rank) {
      c.reason = "generator bound " + std::to_string(bound) + " differs from the image rank "
                 + std::to_string(h.image_rank);
      return c;
    }
    c.certified = true;
    c.reason    = "H_2(Aut^+ F_n, M_L) = 0";
    return c;
  }

  std::string transfer_remark() {
    return "Aut^+ F_n has index 2 in Aut F_n and 2 is invertible in L, so by the "
           "transfer (equivalently the Lyndon-Hochschild-Serre spectral sequence of "
           "1 -> Aut^+ F_n -> Aut F_n -> Z/2 -> 1) H_2(Aut F_n, M_L) is a direct summand "
           "of H_2(Aut^+ F_n, M_L), namely its Z/2-coinvariants; it vanishes when the "
           "latter does.";
  }

}  // namespace autfn
