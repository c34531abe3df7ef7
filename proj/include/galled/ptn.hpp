#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "galled/character.hpp"
#include "galled/network.hpp"

namespace galled {

using NodeSet = boost::dynamic_bitset<std::uint64_t>;

// Throws InputError unless `cs` is over the same labels as `taxa` and every
// member is in `leaves`.
void require_characters_within(const CharacterSet& cs, const TaxonTable& taxa,
                               const TaxonSet& leaves);

// Support-tree nodes with a descendant leaf outside `c`.
NodeSet forbidden_set(const LgtNetwork& n, const TaxonSet& c);

// A node outside the forbidden set that reaches every leaf of `c` without
// entering it. Only the topmost allowed nodes are tried (every origin has one
// above it that is also an origin); the smallest id among those is returned.
std::optional<NodeId> find_origin(const LgtNetwork& n, const TaxonSet& c,
                                  std::uint64_t* work = nullptr);

struct Explanation {
  // One entry per character, nullopt where no origin exists.
  std::vector<std::optional<NodeId>> origins;
  bool all() const;
};

// Per-character origin search; `jobs` > 1 splits characters over threads.
Explanation explains(const LgtNetwork& n, const CharacterSet& cs, unsigned jobs = 1,
                     std::uint64_t* work = nullptr);

// Maximal nodes whose clade lies inside `c`, in preorder.
std::vector<NodeId> first_appearances(const Tree& t, const TaxonSet& c,
                                      std::uint64_t* work = nullptr);

struct FaRow {
  std::string character;
  std::vector<NodeId> nodes;
  std::size_t leaf_count = 0;
  std::size_t internal_count = 0;
  // More than two first appearances rule out any galled completion.
  bool blocks_galled() const { return nodes.size() > 2; }
};

std::vector<FaRow> fa_statistics(const Tree& t, const CharacterSet& cs);

// Tab-separated: character, fa_count, leaf_fas, internal_fas, galled_blocking,
// fa_clades (each FA written as its clade).
std::string format_fa_table(const Tree& t, const std::vector<FaRow>& rows);

}  // namespace galled
