#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "galled/character.hpp"
#include "galled/network.hpp"

namespace galled {

// A∩B, A\B and B\A are all non-empty.
bool incompatible(const TaxonSet& a, const TaxonSet& b);

// First character (input order) that no other character strictly contains and
// that is compatible with every other character.
std::optional<std::size_t> find_maximal_compatible(const CharacterSet& cs);

// A is the first maximal character; B its largest incompatible partner (ties
// by input order), which is then maximal as well. Throws std::logic_error if a
// maximal compatible character exists.
std::pair<std::size_t, std::size_t> find_maximal_incompatible_pair(const CharacterSet& cs);

// Characters meeting both sides of a split {a1, a2} of one character, ordered
// so that their parts on the inclusion side strictly grow while their part on
// the other (stable) side is that whole side.
struct ChainInfo {
  std::vector<std::size_t> members;  // indices into the character set
  TaxonSet inclusion_side;
  TaxonSet bottom;  // first member intersected with the inclusion side
  TaxonSet stable;
  bool reversed = false;  // true when a2 turned out to be the inclusion side
};

// Tries the (a1, a2) orientation first, then (a2, a1).
std::optional<ChainInfo> build_chain(const CharacterSet& cs, const TaxonSet& a1,
                                     const TaxonSet& a2);

struct ForcedSet {
  std::vector<std::size_t> characters;  // input order
  std::vector<TaxonSet> clades;         // distinct, in discovery order
};

// Chain members plus every character containing the bottom or the stable side.
// Clades: each member's two parts, and every forced non-member as a whole.
ForcedSet forced_sets(const CharacterSet& cs, const ChainInfo& chain);

// The tree on `taxa` whose non-trivial clades are exactly `clades` (singletons
// and `taxa` itself are ignored), or nullopt if two clades overlap without
// nesting. Taxa outside every clade hang from the root. Children are ordered by
// smallest taxon id and nodes numbered in preorder.
std::optional<Tree> tree_from_clades(TaxonTablePtr table, const std::vector<TaxonSet>& clades,
                                     const TaxonSet& taxa);

struct TryYes {
  Tree tree;  // built from the forced clades
};
struct TryNo {};
struct InvalidPartition {
  std::string reason;
};
using TryResult = std::variant<TryYes, TryNo, InvalidPartition>;

TryResult try_partition(const CharacterSet& cs, const TaxonSet& taxa, const TaxonSet& a1,
                        const TaxonSet& a2);

struct CompatOutcome {
  bool compatible = false;
  // Present when compatible.
  std::optional<Tree> tree;
  std::optional<LgtNetwork> network;
  std::vector<std::optional<NodeId>> origins;
  // When not compatible: the chain of subproblems down to the failing one.
  std::vector<std::string> trace;
  // Calls of the recursive decision procedure, including empty subproblems.
  std::size_t recursion_nodes = 0;
};

// Decides whether some galled LGT network on `taxa` explains `cs`, and builds
// one alongside the decision. Throws InputError if a character leaves `taxa`.
CompatOutcome galled_compatible(const CharacterSet& cs, const TaxonSet& taxa, unsigned jobs = 1);
inline CompatOutcome galled_compatible(const CharacterSet& cs) {
  return galled_compatible(cs, cs.taxa().full_set());
}

// Witness base tree and network, or nullopt when not compatible.
std::optional<std::pair<Tree, LgtNetwork>> reconstruct_network(const CharacterSet& cs,
                                                               const TaxonSet& taxa);

}  // namespace galled
