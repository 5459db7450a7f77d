#pragma once

#include <random>
#include <vector>

#include "autfn/word.hpp"

namespace autfn::test {

  // Unreduced random letter sequence.
  inline std::vector<code_t> random_letters(std::mt19937_64& rng, int rank, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len), idx(1, rank), sgn(0, 1);
    std::vector<code_t>                out(static_cast<std::size_t>(len(rng)));
    for (auto& c : out) {
      c = static_cast<code_t>(idx(rng) * (sgn(rng) ? 1 : -1));
    }
    return out;
  }

  inline Word random_word(std::mt19937_64& rng, int rank, int max_len) {
    return Word(rank, random_letters(rng, rank, max_len));
  }

  // Oracle: delete the first cancelling pair and rescan from the start until
  // nothing changes.
  inline std::vector<code_t> naive_reduce(std::vector<code_t> w) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        if (w[k] == -w[k + 1]) {
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(k),
                  w.begin() + static_cast<std::ptrdiff_t>(k) + 2);
          changed = true;
          break;
        }
      }
    }
    return w;
  }

}  // namespace autfn::test
