#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dobrushin/finite_measure.hpp"

namespace dobrushin {

enum class ModelKind { kIsing, kPotts };

/// Nearest-neighbour Ising (s in {-1,+1}, pair energy -J s s') or Potts
/// (s in {1..q}, pair energy -J delta(s,s')) model.
struct SpinModel {
  ModelKind kind = ModelKind::kIsing;
  int q = 2;
  double J = 1.0;
  /// External field, Ising only.
  double h = 0.0;

  static SpinModel ising(double J = 1.0, double h = 0.0);
  static SpinModel potts(int q, double J = 1.0);
};

enum class GroupKind {
  /// Two boundary spins meeting at a square-block corner site.
  kCorner,
  /// The single boundary spin next to an edge-middle site of a 3x3 block.
  kMiddle,
  /// Three boundary spins next to a cube vertex.
  kTriplet,
  /// All 2d neighbours of a lone site.
  kSingle,
};

std::string_view to_string(GroupKind kind) noexcept;

/// Boundary spins adjacent to one interior site.
struct BoundaryGroup {
  GroupKind kind;
  int site;
  int size;
};

/// Interior sites, internal bonds and grouped boundary spins of a block.
class LatticeBlock {
 public:
  LatticeBlock(std::string name, int n_interior, std::vector<std::pair<int, int>> bonds,
               std::vector<BoundaryGroup> groups);

  static LatticeBlock square2x2();
  static LatticeBlock square3x3();
  static LatticeBlock cube2x2x2();
  static LatticeBlock single_site(int d);
  /// Looks up "square2x2", "square3x3", "cube2x2x2" or "single-site-d<n>".
  static LatticeBlock by_name(std::string_view name);

  const std::string& name() const noexcept { return name_; }
  int n_interior() const noexcept { return n_interior_; }
  const std::vector<std::pair<int, int>>& bonds() const noexcept { return bonds_; }
  const std::vector<BoundaryGroup>& groups() const noexcept { return groups_; }
  int boundary_size() const noexcept { return boundary_size_; }

  /// Group permutations induced by the graph automorphisms that preserve
  /// group sizes. perm[g] is the image of group g. Includes the identity.
  const std::vector<std::vector<int>>& symmetries() const noexcept { return symmetries_; }

  /// Hamming space over the 2^n Ising interior configurations (site 0 least
  /// significant; digit 0 is -1, digit 1 is +1). Shared between calls.
  const SpacePtr& ising_space() const;

 private:
  std::string name_;
  int n_interior_;
  std::vector<std::pair<int, int>> bonds_;
  std::vector<BoundaryGroup> groups_;
  int boundary_size_ = 0;
  std::vector<std::vector<int>> symmetries_;
  mutable SpacePtr ising_space_;
};

/// Ising: one aggregate per group (sum of its boundary spins).
/// Potts: one raw label per boundary spin, groups concatenated in order.
struct BoundaryConfig {
  std::vector<int> values;

  /// "(0 0 0 -2)"; separators may be spaces or commas.
  static BoundaryConfig parse(std::string_view text);
  std::string str() const;

  auto operator<=>(const BoundaryConfig&) const = default;
};

/// Throws invalid-argument unless every Ising aggregate is realizable.
void validate_boundary(const LatticeBlock& block, const BoundaryConfig& boundary);

struct GibbsBlockMeasure {
  double beta_J;
  BoundaryConfig boundary;
  ProbabilityVector p;
};

/// Discrete space {-1, +1} used for single Ising spins.
const SpacePtr& ising_spin_space();

ProbabilityVector ising_one_point(double beta_J, double S, double h_over_J = 0.0);

/// neighbors holds labels in 1..q.
ProbabilityVector potts_one_point(double beta_J, int q, const std::vector<int>& neighbors);

/// Boltzmann distribution on the block interior given the boundary.
/// space, when given, must be the interior configuration space to attach.
GibbsBlockMeasure block_gibbs(const LatticeBlock& block, const SpinModel& model, double beta_J,
                              const BoundaryConfig& boundary, SpacePtr space = nullptr);

/// Boundary pair for a single site that differs in exactly one neighbour.
struct PottsPairing {
  std::vector<int> first;
  std::vector<int> second;
  /// Number of distinct labels used across both sides.
  int labels_used = 0;

  /// "(1 1 1 1)/(1 1 1 2)"
  std::string id() const;
};

/// One representative per class of single-site pairings under label
/// relabelling, neighbour permutation and swapping the two sides. Classes
/// needing more than q labels are dropped. Sorted lexicographically.
std::vector<PottsPairing> enumerate_potts_pairings(int q, int d);

/// W1 between the two single-site measures of a pairing, from the label
/// multiplicities alone; cost independent of q.
double potts_pairing_w1(const PottsPairing& pairing, int q, double beta_J);

struct IsingPairing {
  int S;
  int S_prime;
};

/// Neighbour sums S -> S + 2 for S in {-2d, ..., 2d - 2}.
std::vector<IsingPairing> enumerate_ising_pairings(int d);

enum class BoundaryMode { kCurated, kExhaustive };

/// Every aggregate Ising boundary of the block (3^4 = 81 for the 2x2 block).
std::vector<BoundaryConfig> all_block_boundaries(const LatticeBlock& block);

/// Image of a boundary under symmetry index k of the block, optionally with
/// the global spin flip applied.
BoundaryConfig apply_symmetry(const LatticeBlock& block, const BoundaryConfig& b, std::size_t k,
                              bool flip);

/// Smallest image under block symmetries (and the spin flip when allowed).
BoundaryConfig canonical_boundary(const LatticeBlock& block, const BoundaryConfig& b,
                                  bool allow_flip);

/// Exhaustive mode: one representative per symmetry orbit. Curated mode:
/// the hand-picked base boundaries for the named block.
std::vector<BoundaryConfig> enumerate_block_boundaries(const LatticeBlock& block,
                                                       BoundaryMode mode, bool allow_flip = true);

struct Flip {
  BoundaryConfig flipped;
  int group;
  GroupKind kind;
  /// Number of raw boundary spins whose flip gives this aggregate change.
  int multiplicity;
};

/// All single raw-spin flips of an Ising aggregate boundary; multiplicities
/// sum to the block's boundary spin count.
std::vector<Flip> enumerate_flips(const LatticeBlock& block, const BoundaryConfig& boundary);

}  // namespace dobrushin
