#include "autfn/sparse.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "autfn/error.hpp"
#include "autfn/snf.hpp"

namespace autfn {

  void SparseMatrix::add(int r, int c, Integer const& v) {
    if (r < 0 || r >= _rows || c < 0 || c >= _cols) {
      throw PreconditionError("sparse entry out of range");
    }
    if (v == 0) {
      return;
    }
    _entries.push_back({r, c, v});
    _finalized = false;
  }

  void SparseMatrix::add(int r, int c, long v) {
    add(r, c, Integer(v));
  }

  void SparseMatrix::finalize() {
    if (_finalized) {
      return;
    }
    std::stable_sort(_entries.begin(), _entries.end(), [](Triplet const& a, Triplet const& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Triplet> out;
    out.reserve(_entries.size());
    for (auto& t : _entries) {
      if (!out.empty() && out.back().row == t.row && out.back().col == t.col) {
        out.back().value += t.value;
      } else {
        if (!out.empty() && out.back().value == 0) {
          out.pop_back();
        }
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && out.back().value == 0) {
      out.pop_back();
    }
    _entries   = std::move(out);
    _finalized = true;
  }

  SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(_cols, _rows);
    t._entries.reserve(_entries.size());
    for (auto const& e : _entries) {
      t._entries.push_back({e.col, e.row, e.value});
    }
    t._finalized = false;
    t.finalize();
    return t;
  }

  DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(_rows, _cols);
    for (auto const& e : _entries) {
      d(e.row, e.col) += e.value;
    }
    return d;
  }

  std::vector<std::vector<std::pair<int, Integer>>> SparseMatrix::columns() const {
    if (!_finalized) {
      throw PreconditionError("columns() needs a finalized matrix");
    }
    std::vector<std::vector<std::pair<int, Integer>>> cols(static_cast<std::size_t>(_cols));
    for (auto const& e : _entries) {
      cols[static_cast<std::size_t>(e.col)].emplace_back(e.row, e.value);
    }
    return cols;
  }

  void SparseMatrix::write_triplets(std::ostream& out) const {
    if (!_finalized) {
      throw PreconditionError("write_triplets needs a finalized matrix");
    }
    out << _rows << ' ' << _cols << ' ' << _entries.size() << '\n';
    for (auto const& e : _entries) {
      out << e.row << ' ' << e.col << ' ' << e.value.get_str() << '\n';
    }
  }

  SparseMatrix SparseMatrix::read_triplets(std::istream& in) {
    int         r = 0, c = 0;
    std::size_t nnz = 0;
    if (!(in >> r >> c >> nnz) || r < 0 || c < 0) {
      throw ParseError("bad triplet header");
    }
    SparseMatrix m(r, c);
    m._entries.reserve(nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
      int         i = 0, j = 0;
      std::string v;
      if (!(in >> i >> j >> v)) {
        throw ParseError("truncated triplet file");
      }
      m.add(i, j, Integer(v));
    }
    m.finalize();
    return m;
  }

  std::string SparseMatrix::content_hash() const {
    std::ostringstream s;
    write_triplets(s);
    return sha256_hex(s.str());
  }

  bool operator==(SparseMatrix const& a, SparseMatrix const& b) {
    if (a._rows != b._rows || a._cols != b._cols || a._entries.size() != b._entries.size()) {
      return false;
    }
    for (std::size_t k = 0; k < a._entries.size(); ++k) {
      auto const &x = a._entries[k], &y = b._entries[k];
      if (x.row != y.row || x.col != y.col || x.value != y.value) {
        return false;
      }
    }
    return true;
  }

  SparseMatrix multiply(SparseMatrix const& a, SparseMatrix const& b) {
    if (a.cols() != b.rows()) {
      throw PreconditionError("sparse product dimension mismatch");
    }
    // rows of b by index
    std::vector<std::vector<std::pair<int, Integer const*>>> brows(
        static_cast<std::size_t>(b.rows()));
    for (auto const& e : b.entries()) {
      brows[static_cast<std::size_t>(e.row)].emplace_back(e.col, &e.value);
    }
    SparseMatrix out(a.rows(), b.cols());
    auto         ent = a.entries();
    for (std::size_t k = 0; k < ent.size();) {
      int                     r = ent[k].row;
      std::map<int, Integer>  acc;
      for (; k < ent.size() && ent[k].row == r; ++k) {
        for (auto const& [c, v] : brows[static_cast<std::size_t>(ent[k].col)]) {
          acc[c] += ent[k].value * *v;
        }
      }
      for (auto const& [c, v] : acc) {
        out.add(r, c, v);
      }
    }
    out.finalize();
    return out;
  }

  std::string sha256_hex(std::string const& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int  len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static char const* hex = "0123456789abcdef";
    std::string        s;
    for (unsigned int k = 0; k < len; ++k) {
      s += hex[digest[k] >> 4];
      s += hex[digest[k] & 15];
    }
    return s;
  }

}  // namespace autfn
