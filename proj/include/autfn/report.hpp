#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "autfn/homology.hpp"
#include "autfn/identities.hpp"
#include "autfn/reduction.hpp"

namespace autfn {

  using json = nlohmann::json;

  enum ExitCode : int { ExitOk = 0, ExitFailure = 2, ExitBound = 3, ExitConfig = 64 };

  struct RunConfig {
    int                      n_min = 6, n_max = 6;
    std::vector<Coeff>       coeffs{Coeff::H};
    std::string              suite = "all";  // verify: presentation, identities or all
    // subset of F1..F6, lemmas, presentations; empty means everything
    std::vector<std::string> families;
    int                      threads = 1;
    std::string              cache_dir;  // empty disables the cache
    std::function<void(std::string const&)> log;
  };

  struct RunResult {
    int  exit_code = ExitOk;
    json report;
  };

  // Throws ConfigError on a bad configuration.
  void validate(RunConfig const& cfg);

  RunResult run_verify(RunConfig const& cfg);
  RunResult run_homology(RunConfig const& cfg);
  RunResult run_certify_h2(RunConfig const& cfg);

  // Elementary divisors as runs of equal (2-adic valuation, odd part).
  json divisors_json(std::vector<Integer> const& d);
  json module_json(LModule const& m);

  // The report without its "timings" members, which are the only part that
  // varies between runs of the same configuration.
  json strip_timings(json r);

  // Files under a directory, each written to a temporary name and renamed
  // into place.
  class ResultCache {
   public:
    explicit ResultCache(std::string dir);

    bool                enabled() const {
      return !_dir.empty();
    }
    std::optional<json> load(std::string const& key) const;
    void                store(std::string const& key, json const& value) const;
    void                store_text(std::string const& name, std::string const& text) const;

   private:
    std::filesystem::path _dir;
  };

  // Tag hashed into every cache key; changes whenever a convention that
  // determines the matrices changes.
  std::string convention_tag();

}  // namespace autfn
