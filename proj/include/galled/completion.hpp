#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "galled/character.hpp"
#include "galled/network.hpp"

namespace galled {

struct Completable {
  LgtNetwork network;
  // Per character, an origin in `network`.
  std::vector<std::optional<NodeId>> origins;
};

// Some character has more than two first appearances.
struct TooManyFAs {
  std::size_t character;
  std::vector<NodeId> fas;
};

// `node` has two FA neighbors that are incomparable in the tree.
struct IncomparableFaNeighbors {
  NodeId node;
  NodeId first;
  NodeId second;
};

// The redundancy-free network has two transfer edges whose cycles meet.
// Edges refer to `network`.
struct NotGalled {
  TransferEdge first;
  TransferEdge second;
  LgtNetwork network;
};

using CompletionVerdict = std::variant<Completable, TooManyFAs, IncomparableFaNeighbors, NotGalled>;

struct CompletionOutcome {
  CompletionVerdict verdict;
  // Elementary steps taken (node visits, edge scans); used for scaling checks.
  std::uint64_t work = 0;

  bool completable() const { return std::holds_alternative<Completable>(verdict); }
};

struct FaNeighbor {
  NodeId node;
  std::size_t character;
};

// For each tree node, the nodes it shares a two-FA character with, in
// character order. Symmetric by construction.
struct FaNeighborIndex {
  std::vector<std::vector<FaNeighbor>> neighbors;
};

std::variant<FaNeighborIndex, TooManyFAs> fa_neighbor_index(const Tree& t, const CharacterSet& cs,
                                                            unsigned jobs = 1,
                                                            std::uint64_t* work = nullptr);

struct RedundancyFree {
  // Every edge of the input tree subdivided once, plus the forced transfers.
  LgtNetwork network;
  // above[v]: the subdivision node between v and its parent.
  std::vector<NodeId> above;
};

// Simple pairs are oriented with the donor being the FA whose clade holds the
// lexicographically smallest taxon label.
std::variant<RedundancyFree, IncomparableFaNeighbors> redundancy_free_network(
    const Tree& t, const FaNeighborIndex& idx, std::uint64_t* work = nullptr);

// Decides whether transfer edges can be added to `t` so that the result is a
// galled perfect transfer network for `cs`; on success the witness has unused
// subdivision nodes suppressed. `t` must not have subdivision nodes.
CompletionOutcome galled_completion(const Tree& t, const CharacterSet& cs, unsigned jobs = 1);

}  // namespace galled
