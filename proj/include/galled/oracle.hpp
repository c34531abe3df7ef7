#pragma once

// Exhaustive searches for small instances, used to cross-check the
// polynomial algorithms.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "galled/character.hpp"
#include "galled/network.hpp"

namespace galled {

// Every rooted tree on `taxa` whose internal nodes have two or more children,
// each once up to child order. At most 7 taxa.
void enumerate_trees(const TaxonTablePtr& table, const TaxonSet& taxa,
                     const std::function<void(const Tree&)>& visit);
std::vector<Tree> all_trees(const TaxonTablePtr& table, const TaxonSet& taxa);

struct OracleOptions {
  // Subdivide every edge twice and drop the one-transfer-per-node restriction.
  // Only for trees with at most 6 edges.
  bool widen = false;
};

struct OracleResult {
  bool found = false;
  // A galled PTN over the subdivided tree, when found.
  std::optional<LgtNetwork> witness;
  // Transfer sets evaluated.
  std::uint64_t explored = 0;
};

// Searches transfer sets among the subdivision nodes of `t` (each edge
// subdivided once, each such node in at most one transfer, endpoints
// incomparable) of size up to |cs| for a galled network explaining `cs`.
// At most 12 edges.
OracleResult brute_force_completable(const Tree& t, const CharacterSet& cs,
                                     OracleOptions options = {});

struct CompatOracleResult {
  bool found = false;
  std::optional<Tree> tree;
  std::optional<LgtNetwork> witness;
};

// Tries every tree on `taxa`. At most 5 taxa and 4 characters.
CompatOracleResult brute_force_compatible(const CharacterSet& cs, const TaxonSet& taxa);

// Every galled network on the once-subdivided `t` with at most `k` transfers
// (one transfer per node, incomparable endpoints). At most 12 edges.
void enumerate_galled_networks(const Tree& t, std::size_t k,
                               const std::function<void(const LgtNetwork&)>& visit);

// Random tree on `taxa` with out-degrees 2 or 3, numbered in preorder.
Tree random_tree(const TaxonTablePtr& table, const TaxonSet& taxa, std::mt19937_64& rng);

// `count` characters over the leaves of `t`: a mix of random subsets and
// unions of one or two clades. Duplicates are dropped, so fewer may result.
CharacterSet random_characters(const Tree& t, std::size_t count, std::mt19937_64& rng);

}  // namespace galled
