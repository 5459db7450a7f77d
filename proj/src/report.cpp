#include "autfn/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "autfn/error.hpp"

namespace autfn {

  namespace {
    using Clock = std::chrono::steady_clock;

    double since(Clock::time_point t0) {
      return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    void say(RunConfig const& cfg, std::string const& s) {
      if (cfg.log) cfg.log(s);
    }

    bool wants(RunConfig const& cfg, std::string const& f) {
      return cfg.families.empty()
             || std::find(cfg.families.begin(), cfg.families.end(), f) != cfg.families.end();
    }

    std::vector<HarvestFamily> harvest_families(RunConfig const& cfg) {
      std::vector<HarvestFamily> out;
      for (auto f : all_families()) {
        if (wants(cfg, family_name(f))) out.push_back(f);
      }
      return out;
    }

    std::string coeff_label(Coeff m) {
      return m == Coeff::H ? "H" : "Hdual";
    }

    json presentation_json(Presentation const& p) {
      return {{"n", p.rank()}, {"X", p.num_generators()}, {"R", p.num_relators()}};
    }

    // Relators evaluated under pi; failures listed by label.
    json soundness(int n) {
      Presentation p(n);
      json         out;
      auto         t0 = Clock::now();
      json         bad = json::array();
      for (auto const& r : p.relators()) {
        if (!p.eval(r.word).is_identity()) bad.push_back(r.id.to_string());
      }
      out["reduced"] = {{"checked", p.num_relators()}, {"failed", bad}};
      if (n <= 5) {
        json gbad = json::array();
        auto g = gersten_relators(n);
        for (auto const& r : g) {
          if (!p.eval(r.word).is_identity()) gbad.push_back(r.label);
        }
        out["gersten"] = {{"checked", g.size()}, {"failed", gbad}};
      }
      out["timings"] = {{"seconds", since(t0)}};
      return out;
    }

    json suite_json(SuiteResult const& s) {
      json fams = json::array();
      for (auto const& f : s.families) {
        json fail = json::array();
        for (std::size_t k = 0; k < f.failures.size() && k < 20; ++k) fail.push_back(f.failures[k]);
        fams.push_back({{"family", f.name},
                        {"instances", f.instances},
                        {"verified", f.verified},
                        {"failed", f.instances - f.verified},
                        {"witnesses", fail}});
      }
      return {{"families", fams}, {"ok", s.ok()}, {"timings", {{"seconds", s.seconds}}}};
    }

    std::string triplets(SparseMatrix const& m) {
      std::ostringstream s;
      m.write_triplets(s);
      return s.str();
    }

    json h1_json(H1Result const& h) {
      json mods = json::array();
      for (auto const& [q, r] : h.rank_mod_p) mods.push_back({q, r});
      return {{"phi", {{"rows", h.phi_rows}, {"cols", h.phi_cols}, {"nnz", h.phi_nnz}, {"hash", h.phi_hash}}},
              {"d1_rank", h.d1_rank},
              {"ker_d1_rank", h.kernel_rank},
              {"image_rank", h.image_rank},
              {"chain_ok", h.chain_ok},
              {"lattice_ok", h.lattice_ok},
              {"snf_ok", h.snf_ok},
              {"rank_mod_p", mods},
              {"phi_divisors", divisors_json(h.phi_divisors)},
              {"coker_divisors", divisors_json(h.coker_divisors)},
              {"coker_two_power", std::all_of(h.coker_divisors.begin(), h.coker_divisors.end(),
                                              [](Integer const& d) { return is_two_power_unit(d); })},
              {"H1", module_json(h.h1)},
              {"L_rank", h.h1.free_rank},
              {"timings", {{"seconds", h.seconds}}}};
    }

    // H1 for one (n, M) with checkpoints and the cache; fills *out for the
    // certificate when given.
    json homology_part(RunConfig const& cfg, ResultCache const& cache, Presentation const& p, Coeff m,
                       H1Result* out) {
      auto         t0 = Clock::now();
      SparseMatrix phi = phi_matrix(p, m, cfg.threads);
      SparseMatrix d1 = d1_matrix(p, m);
      std::string  key = sha256_hex(convention_tag() + "|h1|" + phi.content_hash() + "|" + d1.content_hash());
      if (cache.enabled()) {
        std::string stem = "n" + std::to_string(p.rank()) + "-" + coeff_label(m) + "-";
        cache.store_text(stem + "phi-" + phi.content_hash().substr(0, 16) + ".tri", triplets(phi));
        cache.store_text(stem + "d1-" + d1.content_hash().substr(0, 16) + ".tri", triplets(d1));
      }
      double assemble = since(t0);
      if (!out) {
        if (auto hit = cache.load("h1-" + key)) {
          say(cfg, "n=" + std::to_string(p.rank()) + " " + coeff_label(m) + ": H1 from cache");
          (*hit)["timings"] = {{"assembly_seconds", assemble}, {"cached", true}};
          return *hit;
        }
      }
      HomologyOptions opt;
      opt.threads = cfg.threads;
      H1Result h = h1_of_autplus(p, m, opt);
      json     j = h1_json(h);
      j["d1"] = {{"rows", d1.rows()}, {"cols", d1.cols()}, {"hash", d1.content_hash()}};
      if (cache.enabled()) {
        json stored = j;
        stored.erase("timings");
        cache.store("h1-" + key, stored);
      }
      j["timings"]["assembly_seconds"] = assemble;
      if (out) *out = std::move(h);
      return j;
    }

    json harvest_json(ModulePresentation const& mp, Presentation const& p) {
      json man = json::array(), tm = json::array();
      for (auto const& f : mp.manifest) {
        man.push_back({{"family", f.family},
                       {"instances", f.instances},
                       {"certified", f.certified},
                       {"rows", f.rows},
                       {"rank_gain", f.rank_gain}});
        tm.push_back({{"family", f.family}, {"seconds", f.seconds}});
      }
      json surv = json::array();
      int  hcols = 0;
      for (int c : mp.survivors) {
        auto g = GenIndex::of_column(c, mp.n);
        surv.push_back(g.to_string(p));
        hcols += p.relator(g.relator).id.family == Family::R4_1;
      }
      auto ref = reference_generators(p, mp.coeff);
      return {{"generators", mp.generators},
              {"relations", mp.relations},
              {"family_manifest", man},
              {"pivots", mp.pivots},
              {"hard_rows", mp.hard_rows},
              {"hard_divisors", divisors_json(mp.hard_divisors)},
              {"module", module_json(mp.module)},
              {"B", mp.bound},
              {"stopped_early", mp.stopped_early},
              {"rows_checked_in_ker_phi", mp.phi_checked},
              {"rows_rebuilt", mp.spot_checked},
              {"relation_matrix", {{"rows", mp.echelon.rows()},
                                   {"cols", mp.echelon.cols()},
                                   {"nnz", mp.echelon.nnz()},
                                   {"hash", mp.echelon.content_hash()}}},
              {"survivors", surv},
              {"survivors_on_h_relators", hcols},
              {"reference_family", {{"size", ref.size()}, {"generates", generates(mp, ref)}}},
              {"timings", {{"seconds", mp.seconds}, {"families", tm}}}};
    }

    template <class F>
    RunResult guarded(F&& body) {
      RunResult res;
      try {
        res = body();
      } catch (CertificationError const& e) {
        res.exit_code = ExitFailure;
        res.report["error"] = e.what();
      }
      return res;
    }
  }  // namespace

  std::string convention_tag() {
    return "autfn/1;action=right m.g;H=A;Hdual=(A^-1)^T;fox=left;"
           "columns=relator*n+p-1;rows=(x-1)*n+i;families=presentations,F2,F5,F3,F4,F1,F6";
  }

  void validate(RunConfig const& cfg) {
    if (cfg.n_min < 3) throw ConfigError("presentations need n >= 3");
    if (cfg.n_max < cfg.n_min) throw ConfigError("empty n range");
    if (cfg.threads < 1) throw ConfigError("threads must be positive");
    if (cfg.coeffs.empty()) throw ConfigError("no coefficient module selected");
    if (cfg.suite != "all" && cfg.suite != "presentation" && cfg.suite != "identities") {
      throw ConfigError("unknown suite " + cfg.suite);
    }
    for (auto const& f : cfg.families) {
      if (f != "lemmas" && !parse_family(f)) throw ConfigError("unknown family " + f);
    }
  }

  json divisors_json(std::vector<Integer> const& d) {
    json out = json::array();
    for (std::size_t k = 0; k < d.size();) {
      TwoAdic     t = split_two(d[k]);
      std::size_t e = k + 1;
      while (e < d.size() && d[e] == d[k]) ++e;
      out.push_back({{"v2", t.valuation}, {"odd", t.odd.get_str()}, {"count", e - k}});
      k = e;
    }
    return out;
  }

  json module_json(LModule const& m) {
    json tor = json::array();
    for (auto const& q : m.torsion) tor.push_back(q.get_str());
    return {{"free_rank", m.free_rank}, {"odd_torsion", tor}, {"describe", m.describe()}};
  }

  json strip_timings(json r) {
    if (r.is_object()) {
      r.erase("timings");
      for (auto& [k, v] : r.items()) v = strip_timings(v);
    } else if (r.is_array()) {
      for (auto& v : r) v = strip_timings(v);
    }
    return r;
  }

  RunResult run_verify(RunConfig const& cfg) {
    validate(cfg);
    return guarded([&] {
      RunResult res;
      json      runs = json::array();
      bool      ok = true;
      for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        Presentation p(n);
        json         run = presentation_json(p);
        if (cfg.suite != "identities" && wants(cfg, "presentations")) {
          run["presentation"] = soundness(n);
          ok = ok && run["presentation"]["reduced"]["failed"].empty()
               && (!run["presentation"].contains("gersten") || run["presentation"]["gersten"]["failed"].empty());
          say(cfg, "n=" + std::to_string(n) + ": presentation soundness done");
        }
        if (cfg.suite != "presentation" && wants(cfg, "lemmas")) {
          IdentityEngine eng(p);
          run["identities"] = suite_json(run_identity_suite(eng, cfg.threads));
          ok = ok && run["identities"]["ok"].get<bool>();
          say(cfg, "n=" + std::to_string(n) + ": identity suite done");
        }
        runs.push_back(run);
      }
      res.report = {{"command", "verify"}, {"suite", cfg.suite}, {"runs", runs}, {"status", ok ? "ok" : "failed"}};
      res.exit_code = ok ? ExitOk : ExitFailure;
      return res;
    });
  }

  RunResult run_homology(RunConfig const& cfg) {
    validate(cfg);
    return guarded([&] {
      RunResult   res;
      ResultCache cache(cfg.cache_dir);
      json        runs = json::array();
      for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        Presentation p(n);
        for (Coeff m : cfg.coeffs) {
          json run = presentation_json(p);
          run["coefficient"] = coeff_label(m);
          run["homology"] = homology_part(cfg, cache, p, m, nullptr);
          say(cfg, "n=" + std::to_string(n) + " " + coeff_label(m) + ": H1 = "
                       + run["homology"]["H1"]["describe"].get<std::string>());
          runs.push_back(run);
        }
      }
      res.report = {{"command", "homology"}, {"runs", runs}, {"status", "ok"}};
      return res;
    });
  }

  RunResult run_certify_h2(RunConfig const& cfg) {
    validate(cfg);
    return guarded([&] {
      RunResult   res;
      ResultCache cache(cfg.cache_dir);
      json        runs = json::array();
      bool        all_certified = true;
      auto        fams = harvest_families(cfg);
      for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        Presentation   p(n);
        IdentityEngine eng(p);
        for (Coeff m : cfg.coeffs) {
          json run = presentation_json(p);
          run["coefficient"] = coeff_label(m);
          H1Result h;
          run["homology"] = homology_part(cfg, cache, p, m, &h);

          std::string fam_key;
          for (auto f : fams) fam_key += std::string(family_name(f)) + ",";
          std::string key = sha256_hex(convention_tag() + "|harvest|" + std::to_string(n) + "|"
                                       + coeff_label(m) + "|" + fam_key + "|" + sha256_hex(p.dump()));
          json hv;
          if (auto hit = cache.load("harvest-" + key)) {
            hv = *hit;
            hv["timings"] = {{"cached", true}};
            say(cfg, "n=" + std::to_string(n) + " " + coeff_label(m) + ": harvest from cache");
          } else {
            HarvestOptions opt;
            opt.families = fams;
            opt.threads = cfg.threads;
            if (cfg.log) {
              std::string prefix = "n=" + std::to_string(n) + " " + coeff_label(m) + " ";
              opt.log = [&cfg, prefix](std::string const& s) { cfg.log(prefix + s); };
            }
            ModulePresentation mp = harvest(eng, m, opt);
            if (cache.enabled()) {
              cache.store_text("n" + std::to_string(n) + "-" + coeff_label(m) + "-relations-"
                                   + key.substr(0, 16) + ".tri",
                               triplets(mp.echelon));
            }
            hv = harvest_json(mp, p);
            if (cache.enabled()) {
              json stored = hv;
              stored.erase("timings");
              cache.store("harvest-" + key, stored);
            }
          }
          long          bound = hv["B"].get<long>();
          H2Certificate c = h2_certificate(h, bound);
          run["harvest"] = hv;
          run["certificate"] = {{"status", c.certified ? "certified" : "bound not reached"},
                                {"B", c.bound},
                                {"image_rank", c.image_rank},
                                {"ker_d1_rank", c.kernel_rank},
                                {"phi_rank_le_B", c.image_rank <= c.bound},
                                {"reason", c.reason}};
          all_certified = all_certified && c.certified;
          say(cfg, "n=" + std::to_string(n) + " " + coeff_label(m) + ": B = " + std::to_string(bound)
                       + ", image rank " + std::to_string(c.image_rank) + ", "
                       + (c.certified ? "certified" : "bound not reached"));
          runs.push_back(run);
        }
      }
      res.report = {{"command", "certify-h2"},
                    {"runs", runs},
                    {"transfer_remark", transfer_remark()},
                    {"status", all_certified ? "certified" : "bound not reached"}};
      res.exit_code = all_certified ? ExitOk : ExitBound;
      return res;
    });
  }

  ResultCache::ResultCache(std::string dir) : _dir(std::move(dir)) {
    if (!_dir.empty()) std::filesystem::create_directories(_dir);
  }

  std::optional<json> ResultCache::load(std::string const& key) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(_dir / (key + ".json"));
    if (!in) return std::nullopt;
    try {
      return json::parse(in);
    } catch (json::exception const&) {
      return std::nullopt;
    }
  }

  void ResultCache::store(std::string const& key, json const& value) const {
    store_text(key + ".json", value.dump(1) + "\n");
  }

  void ResultCache::store_text(std::string const& name, std::string const& text) const {
    if (!enabled()) return;
    std::random_device rd;
    auto tmp = _dir / (name + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(rd()));
    {
      std::ofstream out(tmp, std::ios::binary);
      out << text;
      if (!out) throw Error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, _dir / name);
  }

}  // namespace autfn
