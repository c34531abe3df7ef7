#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "galled/character.hpp"
#include "galled/network.hpp"

namespace galled {

// ---- Newick ----------------------------------------------------------------

// Single rooted tree terminated by ';'. Internal labels, branch lengths and
// [comments] are accepted and dropped; leaf names may be quoted with '...'.
// Nodes are numbered in preorder and the taxon table lists leaves in the
// order they appear. Throws ParseError (byte offset) on malformed text.
Tree parse_newick(std::string_view text);
// Same, resolving leaf names against an existing table (unknown names throw).
Tree parse_newick(std::string_view text, TaxonTablePtr taxa);

// Children in stored order. Throws InputError if the tree has subdivision
// nodes.
std::string serialize_newick(const Tree& t);

// ---- Character matrices ----------------------------------------------------

enum class MatrixFormat { csv, sets };

struct ParsedMatrix {
  TaxonTablePtr taxa;
  CharacterSet characters;
  // Non-fatal notes, e.g. dropped duplicate columns.
  std::vector<std::string> warnings;
};

// csv:  header `taxon,<name>,...`, then one row of 0/1 cells per taxon.
// sets: lines `Name: t1 t2 ...`, an optional leading `taxa: ...` line, and
//       `#` comments. Without a taxa line the taxa are the members' union in
//       order of first mention.
// Throws ParseError (line number) on malformed input.
ParsedMatrix parse_character_matrix(std::string_view text, MatrixFormat format);

// Dense presence/absence view of a character set.
struct CharacterMatrix {
  std::vector<std::string> taxa;
  std::vector<std::string> characters;
  // cells[taxon][character]
  std::vector<std::vector<std::uint8_t>> cells;

  static CharacterMatrix from(const CharacterSet& cs);
};

std::string format_matrix_csv(const CharacterSet& cs);
std::string format_matrix_sets(const CharacterSet& cs);

// ---- Networks --------------------------------------------------------------

// Character name and its origin node (nullopt: none).
using OriginLabel = std::pair<std::string, std::optional<NodeId>>;

enum class NetworkFormat { structured, dot };

// structured, one record per line:
//   node <id> [taxon]      ids 0..n-1 in order
//   sedge <parent> <child> support edges, parents in preorder, children in order
//   tedge <donor> <recipient>
//   origin <character> <node|->
// dot: support edges plain, transfer edges dashed with arrowheads, origins
// listed in node labels.
std::string export_network(const LgtNetwork& n, const std::vector<OriginLabel>& origins,
                            NetworkFormat format);
inline std::string export_network(const LgtNetwork& n, NetworkFormat format) {
  return export_network(n, {}, format);
}

struct NetworkDocument {
  LgtNetwork network;
  std::vector<OriginLabel> origins;
};

// Parses the structured format ('#' comment lines allowed). Throws ParseError
// on malformed records and ModelError on invalid networks. When `taxa` is
// given, node labels are resolved against it; otherwise a table is built from
// the labels in node order.
NetworkDocument parse_network_document(std::string_view text, TaxonTablePtr taxa = nullptr);
LgtNetwork parse_network(std::string_view text, TaxonTablePtr taxa = nullptr);

}  // namespace galled
