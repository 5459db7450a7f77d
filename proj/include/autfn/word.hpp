#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace autfn {

  // A letter is stored as a nonzero signed integer: +i is x_i, -i is x_i^-1.
  using code_t = std::int32_t;

  struct Letter {
    int index = 1;
    int sign  = 1;

    Letter() = default;
    Letter(int i, int s = 1);

    static Letter from_code(code_t c);
    code_t        code() const noexcept {
      return static_cast<code_t>(sign * index);
    }
    Letter inverse() const noexcept {
      Letter l;
      l.index = index;
      l.sign  = -sign;
      return l;
    }
    bool operator==(Letter const&) const = default;
  };

  // Freely reduced word in the free group of rank `rank`.  Immutable value.
  class Word {
   public:
    Word() = default;
    explicit Word(int rank);
    // Reduces `letters`; every code must satisfy 0 < |c| <= rank.
    Word(int rank, std::vector<code_t> letters);
    Word(int rank, std::initializer_list<code_t> letters);

    static Word generator(int rank, int index, int sign = 1);

    int rank() const noexcept {
      return _rank;
    }
    std::size_t size() const noexcept {
      return _letters.size();
    }
    bool empty() const noexcept {
      return _letters.empty();
    }
    std::span<code_t const> letters() const noexcept {
      return _letters;
    }
    Letter operator[](std::size_t k) const {
      return Letter::from_code(_letters[k]);
    }

    Word inverse() const;

    bool operator==(Word const& that) const noexcept {
      return _rank == that._rank && _letters == that._letters;
    }
    // Shortlex order on the letter codes.
    bool operator<(Word const& that) const noexcept;

    std::size_t hash() const noexcept;

   private:
    struct Reduced {};
    Word(int rank, std::vector<code_t>&& letters, Reduced)
        : _rank(rank), _letters(std::move(letters)) {}

    friend Word multiply(Word const&, Word const&);
    friend class WordBuilder;

    int                 _rank = 0;
    std::vector<code_t> _letters;
  };

  struct WordHash {
    std::size_t operator()(Word const& w) const noexcept {
      return w.hash();
    }
  };

  Word multiply(Word const& u, Word const& v);
  Word operator*(Word const& u, Word const& v);
  Word commutator(Word const& u, Word const& v);
  Word power(Word const& w, int k);
  // u w u^-1
  Word conjugate(Word const& u, Word const& w);

  // Accumulates a product with stack-style cancellation; far cheaper than
  // repeated multiply() when many factors are involved.
  class WordBuilder {
   public:
    explicit WordBuilder(int rank) : _rank(rank) {}

    WordBuilder& push(code_t c);
    WordBuilder& append(std::span<code_t const> w);
    WordBuilder& append(Word const& w);
    WordBuilder& append_inverse(Word const& w);
    WordBuilder& append_inverse(std::span<code_t const> w);

    std::size_t size() const noexcept {
      return _stack.size();
    }
    std::span<code_t const> letters() const noexcept {
      return _stack;
    }
    void clear() noexcept {
      _stack.clear();
    }
    Word build() const&;
    Word build() &&;

   private:
    int                 _rank;
    std::vector<code_t> _stack;
  };

  // Text syntax: x1*x2^-1*x3, case-insensitive; "1" (or "") is the identity.
  Word        parse_word(std::string_view text, int rank);
  std::string to_string(Word const& w);

}  // namespace autfn
