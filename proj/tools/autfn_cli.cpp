// Batch front end: verify, homology, certify-h2.

#include <fstream>
#include <iostream>
#include <regex>

#include <CLI11.hpp>

#include "autfn/error.hpp"
#include "autfn/report.hpp"

using namespace autfn;

namespace {
  // "6", "3-6" or "3..6"
  void parse_range(std::string const& s, RunConfig& cfg) {
    std::smatch m;
    if (std::regex_match(s, m, std::regex(R"(\s*(-?\d+)\s*)"))) {
      cfg.n_min = cfg.n_max = std::stoi(m[1]);
    } else if (std::regex_match(s, m, std::regex(R"(\s*(-?\d+)\s*(?:-|\.\.)\s*(-?\d+)\s*)"))) {
      cfg.n_min = std::stoi(m[1]);
      cfg.n_max = std::stoi(m[2]);
    } else {
      throw ConfigError("bad --n value " + s);
    }
  }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Presentations, identities and low-degree homology of Aut^+ F_n"};
  app.require_subcommand(1);

  std::string n_arg = "6", coeff = "H", suite = "all", out, cache_dir, families;
  int         threads = 1;
  bool        quiet = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", n_arg, "rank n or a range a-b");
    sub->add_option("--coeff", coeff, "H, Hdual or both")->check(CLI::IsMember({"H", "Hdual", "both"}));
    sub->add_option("--families", families, "comma separated subset of F1..F6, lemmas, presentations");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--cache-dir", cache_dir, "directory for cached results and checkpoints");
    sub->add_option("--out", out, "report path (default stdout)");
    sub->add_flag("--quiet", quiet, "no progress on stderr");
  };
  auto* verify = app.add_subcommand("verify", "presentation soundness and identity certification");
  common(verify);
  verify->add_option("--suite", suite, "presentation, identities or all");
  auto* homology = app.add_subcommand("homology", "H_1(Aut^+ F_n, M_L) from the Fox matrices");
  common(homology);
  auto* certify = app.add_subcommand("certify-h2", "generator bound and the H_2 certificate");
  common(certify);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : ExitConfig;
  }

  RunResult res;
  try {
    RunConfig cfg;
    parse_range(n_arg, cfg);
    if (coeff == "both") {
      cfg.coeffs = {Coeff::H, Coeff::Hdual};
    } else {
      cfg.coeffs = {coeff == "H" ? Coeff::H : Coeff::Hdual};
    }
    cfg.suite = suite;
    cfg.threads = threads;
    cfg.cache_dir = cache_dir;
    std::stringstream fs(families);
    for (std::string f; std::getline(fs, f, ',');) {
      if (!f.empty()) cfg.families.push_back(f);
    }
    if (!quiet) cfg.log = [](std::string const& s) { std::cerr << s << "\n"; };

    if (verify->parsed()) {
      res = run_verify(cfg);
    } else if (homology->parsed()) {
      res = run_homology(cfg);
    } else {
      res = run_certify_h2(cfg);
    }
  } catch (ConfigError const& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ExitConfig;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitFailure;
  }

  std::string text = res.report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    f << text;
    if (!f) {
      std::cerr << "cannot write " << out << "\n";
      return ExitFailure;
    }
  }
  return res.exit_code;
}
