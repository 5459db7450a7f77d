#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "autfn/nielsen.hpp"
#include "autfn/word.hpp"

namespace autfn {

  // The generator E_{x_i^eps x_j}.
  struct GenSym {
    int i   = 1;
    int eps = 1;
    int j   = 2;

    Letter first() const {
      return Letter(i, eps);
    }
    Letter second() const {
      return Letter(j, 1);
    }
    bool operator==(GenSym const&) const = default;
  };

  // Elements of the free group F on the generators are Words of rank |X|
  // whose letter codes are generator indices.
  using XWord = Word;

  enum class Family {
    R2_1, R2_2, R2_3, R2_4, R2_5, R2_6, R2_7, R2_8,
    R3_1, R3_2, R3_3, R3_4,
    R4_1, R5_1
  };
  inline constexpr int num_families = 14;

  char const* family_name(Family f);
  int         family_arity(Family f);

  struct RelatorId {
    Family             family = Family::R2_1;
    std::array<int, 4> tuple{};

    int         arity() const {
      return family_arity(family);
    }
    std::string to_string() const;  // e.g. "R3-1(1,2,3)"
    bool        operator==(RelatorId const&) const = default;
  };

  struct Relator {
    RelatorId id;
    XWord     word;
  };

  // A Gersten relator with a human-readable label.
  struct GerstenRelator {
    std::string label;
    XWord       word;
  };

  class Presentation {
   public:
    // n >= 3
    explicit Presentation(int n);

    int rank() const noexcept {
      return _n;
    }
    int num_generators() const noexcept {
      return 2 * _n * (_n - 1);
    }

    int    index_of(GenSym g) const;  // 1-based generator index
    GenSym symbol(int index) const;

    XWord generator(GenSym g, int sign = 1) const;
    XWord identity() const {
      return XWord(num_generators());
    }

    // E_ab as an element of F: a generator or the inverse of one.
    XWord embed_E(Letter a, Letter b) const;
    XWord w_word(Letter a, Letter b) const;
    XWord r_word(Letter a, Letter c, Letter b) const;  // r_ac(b)
    XWord h_word(Letter a, Letter b) const;

    std::vector<Relator> const& relators() const noexcept {
      return _relators;
    }
    Relator const& relator(int k) const {
      return _relators.at(static_cast<std::size_t>(k));
    }
    int num_relators() const noexcept {
      return static_cast<int>(_relators.size());
    }
    // Index of the first reduced relator whose word equals w.
    std::optional<int> find_relator(XWord const& w) const;
    std::optional<int> find_relator(RelatorId const& id) const;

    // The evaluation map pi : F -> Aut^+ F_n.
    Automorphism eval(XWord const& w) const;
    Automorphism const& generator_map(int index) const {
      return _gen_maps.at(static_cast<std::size_t>(index - 1));
    }

    // Textual form E(i,+,j)*E(k,-,l)^-1; "1" for the identity.
    std::string format(XWord const& w) const;
    XWord       parse(std::string_view text) const;

    // One relator per line: id, tuple, word.
    std::string dump() const;

   private:
    int                               _n;
    std::vector<Relator>              _relators;
    std::unordered_map<XWord, int, WordHash> _lookup;
    std::vector<Automorphism>         _gen_maps;
  };

  std::vector<Relator>        reduced_relators(int n);
  std::vector<GerstenRelator> gersten_relators(int n);
  Automorphism                eval(int n, XWord const& w);

  // Whether the Nielsen maps E_ab and E_cd satisfy the hypotheses of the
  // Gersten commutator relator [E_ab, E_cd].
  bool gersten_commute(Letter a, Letter b, Letter c, Letter d);

  // "x3" or "x3^-1"
  std::string letter_string(Letter l);

}  // namespace autfn
