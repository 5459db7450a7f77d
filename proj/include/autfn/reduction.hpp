#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "autfn/homology.hpp"
#include "autfn/identities.hpp"

namespace autfn {

  // Generator r (x) e_p of the coinvariants module; column relator * n + p - 1.
  struct GenIndex {
    int relator = 0;
    int basis = 1;  // p in 1..n

    int  column(int n) const {
      return relator * n + basis - 1;
    }
    static GenIndex of_column(int col, int n) {
      return {col / n, col % n + 1};
    }
    std::string to_string(Presentation const& p) const;
  };

  using SparseRow = std::vector<std::pair<int, std::int64_t>>;

  struct ModulePresentation;
  struct HarvestOptions;

  // r (x) (m . u) for the factor u r u^-1 and coefficient vector m.
  SparseRow fold(ModuleAction const& act, XWord const& u, int relator,
                 std::vector<std::int64_t> const& m);

  // Families of certified null expressions feeding the relation matrix.
  enum class HarvestFamily {
    Presentations,  // inverse pairs among the listed relators
    F1,             // w_ij^8 halving
    F2,             // commutation of relators with commuting generators
    F3,             // transported r relators
    F4,             // transported h relators
    F5,             // transports split through h_ab
    F6              // second normalization routes
  };
  char const*                  family_name(HarvestFamily f);
  std::optional<HarvestFamily> parse_family(std::string const& s);
  std::vector<HarvestFamily>   all_families();

  // Instance of a family: up to five letters or integers, by family.
  struct Instance {
    std::array<Letter, 5> l{};
    int                   a = 0, b = 0;
  };

  // Which instance and basis vector produced a row.
  struct SourceRef {
    HarvestFamily family = HarvestFamily::Presentations;
    std::uint32_t instance = 0;
    std::uint16_t basis = 0;
  };

  // Enumerates the instances of each family and builds their certificates.
  class NullFactory {
   public:
    explicit NullFactory(IdentityEngine const& eng);

    std::vector<Instance> const& instances(HarvestFamily f) const;
    IdentityCertificate          certificate(HarvestFamily f, Instance const& in) const;
    std::string                  tuple_string(HarvestFamily f, Instance const& in) const;

   private:
    IdentityEngine const&              _eng;
    Presentation const&                _p;
    std::vector<std::vector<Instance>> _inst;
  };

  // The rows r (x) ... of one null certificate, one per basis vector.
  std::vector<SparseRow> relation_from_null(IdentityCertificate const& cert,
                                            ModuleAction const& act);

  // Incremental row echelon form over L = Z[1/2] of integer rows with a
  // fixed number of columns.  Lower column classes are preferred as pivots.
  class LEchelon {
   public:
    enum class Outcome { Zero, Pivot, Hard };

    explicit LEchelon(int ncols, std::vector<int> column_class = {});
    ~LEchelon();
    LEchelon(LEchelon&&) noexcept;
    LEchelon& operator=(LEchelon&&) noexcept;

    Outcome add(SparseRow const& row, SourceRef src = {});
    // Whether the row lies in the span over L; exact when hard() == 0.
    bool reduces_to_zero(SparseRow const& row) const;
    // Settles the hard pool; returns the SNF divisors of what remains.
    std::vector<Integer> finish();

    int              pivots() const;
    int              hard() const;
    int              free_columns() const;
    std::vector<int> nonpivot_columns() const;
    SparseMatrix     echelon() const;

   private:
    class Impl;
    std::unique_ptr<Impl> _impl;
    friend ModulePresentation harvest(IdentityEngine const&, Coeff, HarvestOptions const&);
  };

  struct FamilyStats {
    std::string family;
    long        instances = 0;
    long        certified = 0;
    long        rows = 0;
    long        rank_gain = 0;  // pivots plus hard rows contributed
    double      seconds = 0;
  };

  struct HarvestOptions {
    std::vector<HarvestFamily> families = all_families();
    int                        threads = 1;
    // stop once the bound reaches this value with no pending hard rows
    long                       stop_at = -1;
    // fraction of stored rows rebuilt from their certificates
    double                     spot_check = 0.01;
    std::function<void(std::string const&)> log;
  };

  struct ModulePresentation {
    int                      n = 0;
    Coeff                    coeff = Coeff::H;
    int                      generators = 0;  // |E|
    long                     relations = 0;   // rows consumed
    std::vector<FamilyStats> manifest;
    int                      pivots = 0;
    int                      hard_rows = 0;
    std::vector<Integer>     hard_divisors;  // SNF of the residual block
    LModule                  module;         // the presented module over L
    long                     bound = 0;      // its minimal generator count
    std::vector<int>         survivors;      // columns spanning it
    bool                     stopped_early = false;
    long                     phi_checked = 0;  // rows checked to lie in ker phi
    long                     spot_checked = 0;
    SparseMatrix             echelon;          // the reduced relation matrix
    double                   seconds = 0;
  };

  ModulePresentation harvest(IdentityEngine const& eng, Coeff m, HarvestOptions const& opt = {});

  // The explicit generating family of the coinvariants from the hand
  // reduction, one representative per class r_{a j}(.) (x) e_p; its size is
  // 2n(n^2-n)-n for H and one less for H*.
  std::vector<GenIndex> reference_generators(Presentation const& p, Coeff m);
  // Whether the given generators span the presented module over L.
  bool generates(ModulePresentation const& mp, std::vector<GenIndex> const& g);

  // Columns of the survivors; throws if the bound is above target.
  std::vector<GenIndex> survivor_basis(ModulePresentation const& mp, long target);

}  // namespace autfn
