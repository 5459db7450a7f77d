#include <algorithm>
#include <chrono>
#include <functional>
#include <future>

#include "autfn/error.hpp"
#include "autfn/identities.hpp"

namespace autfn {

  namespace {
    using Task = std::function<IdentityCertificate()>;

    std::vector<Letter> letters(int n) {
      std::vector<Letter> out;
      for (int i = 1; i <= n; ++i) {
        out.emplace_back(i, 1);
        out.emplace_back(i, -1);
      }
      return out;
    }

    bool distinct(std::initializer_list<Letter> ls) {
      std::vector<int> seen;
      for (Letter l : ls) {
        if (std::find(seen.begin(), seen.end(), l.index) != seen.end()) return false;
        seen.push_back(l.index);
      }
      return true;
    }

    std::vector<Task> tasks_for(IdentityEngine const& eng, std::string const& fam) {
      int               n = eng.presentation().rank();
      auto              L = letters(n);
      std::vector<Task> out;
      auto              both = [&](auto make) {
        for (RelMode m : {RelMode::Raw, RelMode::Normalized}) out.push_back([=] { return make(m); });
      };
      for (Letter a : L) {
        for (Letter b : L) {
          if (a.index == b.index) continue;
          if (fam == "h-inverse") {
            for (int w : {1, 2}) both([&eng, w, a, b](RelMode m) { return eng.h_inverse(w, a, b, m); });
          }
          for (Letter c : L) {
            if (!distinct({a, b, c})) continue;
            if (fam == "overlap") {
              for (int w = 1; w <= 6; ++w)
                both([&eng, w, a, b, c](RelMode m) { return eng.overlap_transport(w, a, b, c, m); });
            } else if (fam == "r-inverse") {
              both([&eng, a, b, c](RelMode m) { return eng.r_inverse(a, b, c, m); });
            } else if (fam == "split") {
              both([&eng, a, b, c](RelMode m) { return eng.split_transport(a, b, a, c, m); });
              both([&eng, a, b, c](RelMode m) { return eng.split_transport(a, b, b, c, m); });
            } else if (fam == "sample" && a.sign > 0 && b.sign > 0 && c.sign > 0) {
              out.push_back([&eng, a, b, c] { return eng.sample_rewrite(a.index, b.index, c.index); });
            }
            for (Letter d : L) {
              if (fam == "disjoint" && distinct({a, b, c, d})) {
                both([&eng, a, b, c, d](RelMode m) { return eng.disjoint_transport(a, b, c, d, m); });
              }
            }
          }
          if (fam == "eq-r" || fam == "eq-h") {
            for (Letter c : L)
              for (Letter d : L) {
                if (fam == "eq-h" && IdentityEngine::eq41_admissible(a, b, c, d)) {
                  out.push_back([&eng, a, b, c, d] { return eng.eq41_null(a, b, c, d); });
                }
                if (fam != "eq-r") continue;
                for (Letter e : L) {
                  if (IdentityEngine::eq21_admissible(a, b, c, d, e)) {
                    out.push_back([&eng, a, b, c, d, e] { return eng.eq21_null(a, b, c, d, e); });
                  }
                }
              }
          }
        }
      }
      return out;
    }
  }  // namespace

  std::vector<std::string> identity_suite_families() {
    return {"overlap", "disjoint", "r-inverse", "h-inverse", "split", "sample", "eq-r", "eq-h"};
  }

  SuiteResult run_identity_suite(IdentityEngine const& eng, int threads,
                                 std::vector<std::string> const& only) {
    auto        t0 = std::chrono::steady_clock::now();
    SuiteResult res;
    auto const  known = identity_suite_families();
    for (auto const& f : only) {
      if (std::find(known.begin(), known.end(), f) == known.end()) {
        throw PreconditionError("unknown identity family " + f);
      }
    }
    std::size_t const chunk = 256;
    for (auto const& fam : known) {
      if (!only.empty() && std::find(only.begin(), only.end(), fam) == only.end()) continue;
      SuiteFamily sf;
      sf.name = fam;
      auto tasks = tasks_for(eng, fam);
      // chunks run concurrently, results are consumed in task order
      for (std::size_t lo = 0; lo < tasks.size(); lo += chunk * static_cast<std::size_t>(std::max(threads, 1))) {
        std::vector<std::future<std::vector<IdentityCertificate>>> parts;
        for (int t = 0; t < std::max(threads, 1); ++t) {
          std::size_t a = lo + static_cast<std::size_t>(t) * chunk;
          if (a >= tasks.size()) break;
          std::size_t b = std::min(tasks.size(), a + chunk);
          parts.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, [&tasks, a, b] {
            std::vector<IdentityCertificate> out;
            for (std::size_t k = a; k < b; ++k) out.push_back(tasks[k]());
            return out;
          }));
        }
        for (auto& part : parts) {
          for (auto const& c : part.get()) {
            ++sf.instances;
            if (c.verified) {
              ++sf.verified;
            } else {
              sf.failures.push_back(c.log_line() + " residual " + eng.presentation().format(c.residual));
            }
          }
        }
      }
      res.families.push_back(std::move(sf));
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }

}  // namespace autfn
