#include "autfn/word.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "autfn/error.hpp"

namespace autfn {

  Letter::Letter(int i, int s) : index(i), sign(s) {
    if (i < 1) {
      throw PreconditionError("letter index must be positive, found "
                              + std::to_string(i));
    }
    if (s != 1 && s != -1) {
      throw PreconditionError("letter sign must be +1 or -1");
    }
  }

  Letter Letter::from_code(code_t c) {
    if (c == 0) {
      throw PreconditionError("letter code 0 is not a letter");
    }
    return Letter(std::abs(c), c > 0 ? 1 : -1);
  }

  namespace {
    void check_code(code_t c, int rank) {
      if (c == 0 || std::abs(c) > rank) {
        throw PreconditionError("letter " + std::to_string(c)
                                + " out of range for rank "
                                + std::to_string(rank));
      }
    }
    void check_rank(int r, int s) {
      if (r != s) {
        throw RankMismatch("rank mismatch: " + std::to_string(r) + " vs "
                           + std::to_string(s));
      }
    }
  }  // namespace

  Word::Word(int rank) : _rank(rank) {
    if (rank < 0) {
      throw PreconditionError("negative rank");
    }
  }

  Word::Word(int rank, std::vector<code_t> letters) : Word(rank) {
    WordBuilder b(rank);
    for (code_t c : letters) {
      b.push(c);
    }
    _letters = std::move(b).build()._letters;
  }

  Word::Word(int rank, std::initializer_list<code_t> letters)
      : Word(rank, std::vector<code_t>(letters)) {}

  Word Word::generator(int rank, int index, int sign) {
    return Word(rank, {static_cast<code_t>(sign * index)});
  }

  Word Word::inverse() const {
    std::vector<code_t> v(_letters.rbegin(), _letters.rend());
    for (auto& c : v) {
      c = -c;
    }
    return Word(_rank, std::move(v), Reduced{});
  }

  bool Word::operator<(Word const& that) const noexcept {
    if (_letters.size() != that._letters.size()) {
      return _letters.size() < that._letters.size();
    }
    return _letters < that._letters;
  }

  std::size_t Word::hash() const noexcept {
    std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(_rank);
    for (code_t c : _letters) {
      h ^= static_cast<std::uint32_t>(c);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }

  WordBuilder& WordBuilder::push(code_t c) {
    check_code(c, _rank);
    if (!_stack.empty() && _stack.back() == -c) {
      _stack.pop_back();
    } else {
      _stack.push_back(c);
    }
    return *this;
  }

  WordBuilder& WordBuilder::append(std::span<code_t const> w) {
    std::size_t k = 0;
    // Cancellation can only happen at the seam.
    while (k < w.size() && !_stack.empty() && _stack.back() == -w[k]) {
      _stack.pop_back();
      ++k;
    }
    _stack.insert(_stack.end(), w.begin() + k, w.end());
    return *this;
  }

  WordBuilder& WordBuilder::append(Word const& w) {
    check_rank(_rank, w.rank());
    return append(w.letters());
  }

  WordBuilder& WordBuilder::append_inverse(std::span<code_t const> w) {
    std::size_t k = w.size();
    while (k > 0 && !_stack.empty() && _stack.back() == w[k - 1]) {
      _stack.pop_back();
      --k;
    }
    for (; k > 0; --k) {
      _stack.push_back(-w[k - 1]);
    }
    return *this;
  }

  WordBuilder& WordBuilder::append_inverse(Word const& w) {
    check_rank(_rank, w.rank());
    return append_inverse(w.letters());
  }

  Word WordBuilder::build() const& {
    return Word(_rank, std::vector<code_t>(_stack), Word::Reduced{});
  }

  Word WordBuilder::build() && {
    return Word(_rank, std::move(_stack), Word::Reduced{});
  }

  Word multiply(Word const& u, Word const& v) {
    check_rank(u.rank(), v.rank());
    WordBuilder b(u.rank());
    b.append(u.letters()).append(v.letters());
    return std::move(b).build();
  }

  Word operator*(Word const& u, Word const& v) {
    return multiply(u, v);
  }

  Word commutator(Word const& u, Word const& v) {
    check_rank(u.rank(), v.rank());
    WordBuilder b(u.rank());
    b.append(u.letters())
        .append(v.letters())
        .append_inverse(u.letters())
        .append_inverse(v.letters());
    return std::move(b).build();
  }

  Word power(Word const& w, int k) {
    WordBuilder b(w.rank());
    for (int t = 0; t < std::abs(k); ++t) {
      if (k > 0) {
        b.append(w.letters());
      } else {
        b.append_inverse(w.letters());
      }
    }
    return std::move(b).build();
  }

  Word conjugate(Word const& u, Word const& w) {
    check_rank(u.rank(), w.rank());
    WordBuilder b(u.rank());
    b.append(u.letters()).append(w.letters()).append_inverse(u.letters());
    return std::move(b).build();
  }

  Word parse_word(std::string_view text, int rank) {
    WordBuilder b(rank);
    std::size_t pos  = 0;
    auto        skip = [&] {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      }
    };
    auto fail = [&](std::string const& what) -> ParseError {
      return ParseError("cannot parse word \"" + std::string(text)
                        + "\" at offset " + std::to_string(pos) + ": " + what);
    };
    skip();
    if (pos == text.size()) {
      return Word(rank);
    }
    if (text.substr(pos) == "1") {
      return Word(rank);
    }
    while (true) {
      skip();
      if (pos >= text.size() || std::tolower(static_cast<unsigned char>(text[pos])) != 'x') {
        throw fail("expected 'x'");
      }
      ++pos;
      int  index = 0;
      auto res   = std::from_chars(text.data() + pos, text.data() + text.size(), index);
      if (res.ec != std::errc() || index < 1) {
        throw fail("expected a positive generator index");
      }
      pos  = static_cast<std::size_t>(res.ptr - text.data());
      int sign = 1;
      skip();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        if (text.substr(pos, 2) != "-1") {
          throw fail("only the exponent -1 is allowed");
        }
        pos += 2;
        sign = -1;
      }
      if (index > rank) {
        throw fail("generator index exceeds the rank");
      }
      b.push(static_cast<code_t>(sign * index));
      skip();
      if (pos == text.size()) {
        break;
      }
      if (text[pos] != '*') {
        throw fail("expected '*'");
      }
      ++pos;
    }
    return std::move(b).build();
  }

  std::string to_string(Word const& w) {
    if (w.empty()) {
      return "1";
    }
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k > 0) {
        out += '*';
      }
      code_t c = w.letters()[k];
      out += 'x';
      out += std::to_string(std::abs(c));
      if (c < 0) {
        out += "^-1";
      }
    }
    return out;
  }

}  // namespace autfn
