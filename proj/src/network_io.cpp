#include <charconv>
#include <map>
#include <optional>
#include <sstream>

#include "galled/errors.hpp"
#include "galled/io.hpp"

namespace galled {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// Names with surrounding or embedded whitespace, or a leading quote, are
// written single-quoted with '' for a literal quote.
std::string quote_name(const std::string& s) {
  const bool plain = !s.empty() && s.front() != '\'' &&
                     s.find_first_of(" \t\r\n") == std::string::npos;
  if (plain) return s;
  std::string out = "'";
  for (char c : s) {
    out.push_back(c);
    if (c == '\'') out.push_back('\'');
  }
  return out + "'";
}

// Reads a name that is either the whole (trimmed) field or a quoted token
// spanning it.
std::optional<std::string> unquote_name(std::string_view s) {
  if (s.empty() || s.front() != '\'') return std::string(s);
  std::string out;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] != '\'') {
      out.push_back(s[i]);
    } else if (i + 1 < s.size() && s[i + 1] == '\'') {
      out.push_back('\'');
      ++i;
    } else {
      if (i + 1 != s.size()) return std::nullopt;
      return out;
    }
  }
  return std::nullopt;
}

std::string export_structured(const LgtNetwork& n, const std::vector<OriginLabel>& origins) {
  const Tree& t = n.support();
  std::ostringstream out;
  for (NodeId v = 0; v < t.size(); ++v) {
    out << "node " << v;
    if (auto taxon = t.taxon(v)) out << ' ' << quote_name(t.taxa().label(*taxon));
    out << '\n';
  }
  for (NodeId v : t.preorder())
    for (NodeId c : t.children(v)) out << "sedge " << v << ' ' << c << '\n';
  for (const auto& e : n.transfers()) out << "tedge " << e.donor << ' ' << e.recipient << '\n';
  for (const auto& [name, node] : origins) {
    out << "origin " << quote_name(name) << ' ';
    if (node) out << *node;
    else out << '-';
    out << '\n';
  }
  return out.str();
}

std::string export_dot(const LgtNetwork& n, const std::vector<OriginLabel>& origins) {
  const Tree& t = n.support();
  std::map<NodeId, std::vector<std::string>> origin_names;
  for (const auto& [name, node] : origins)
    if (node) origin_names[*node].push_back(name);
  std::ostringstream out;
  out << "digraph network {\n";
  out << "  node [shape=circle, fontsize=10];\n";
  for (NodeId v = 0; v < t.size(); ++v) {
    std::string label = t.taxon(v) ? dot_escape(t.taxa().label(*t.taxon(v))) : std::to_string(v);
    auto it = origin_names.find(v);
    if (it != origin_names.end()) {
      label += "\\norigin:";
      for (std::size_t i = 0; i < it->second.size(); ++i)
        label += (i ? "," : " ") + dot_escape(it->second[i]);
    }
    out << "  n" << v << " [label=\"" << label << "\"";
    if (t.is_leaf(v)) out << ", shape=plaintext";
    out << "];\n";
  }
  for (NodeId v : t.preorder())
    for (NodeId c : t.children(v))
      out << "  n" << v << " -> n" << c << " [arrowhead=none];\n";
  for (const auto& e : n.transfers())
    out << "  n" << e.donor << " -> n" << e.recipient
        << " [style=dashed, arrowhead=normal, constraint=false];\n";
  out << "}\n";
  return out.str();
}

[[noreturn]] void fail(const std::string& what, std::size_t line) {
  throw ParseError("network: " + what, line, ParseError::Unit::line);
}

NodeId parse_id(std::string_view token, std::size_t line) {
  NodeId v = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || end != token.data() + token.size() || v == kNoNode)
    fail("invalid node id '" + std::string(token) + "'", line);
  return v;
}

// Splits off the first whitespace-delimited word.
std::pair<std::string_view, std::string_view> head(std::string_view s) {
  s = trim(s);
  const auto end = s.find_first_of(" \t");
  if (end == std::string_view::npos) return {s, {}};
  return {s.substr(0, end), trim(s.substr(end))};
}

}  // namespace

std::string export_network(const LgtNetwork& n, const std::vector<OriginLabel>& origins,
                           NetworkFormat format) {
  return format == NetworkFormat::dot ? export_dot(n, origins) : export_structured(n, origins);
}

NetworkDocument parse_network_document(std::string_view text, TaxonTablePtr taxa) {
  struct NodeRecord {
    std::string label;
    std::size_t line;
  };
  std::vector<NodeRecord> nodes;
  std::vector<std::pair<std::pair<NodeId, NodeId>, std::size_t>> sedges;
  std::vector<std::pair<TransferEdge, std::size_t>> tedges;
  std::vector<std::pair<OriginLabel, std::size_t>> origins;

  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    auto [kind, rest] = head(line);
    if (kind == "node") {
      auto [id, label] = head(rest);
      if (id.empty()) fail("node record without id", number);
      if (parse_id(id, number) != nodes.size())
        fail("node ids must be listed in order starting from 0", number);
      auto name = unquote_name(label);
      if (!name) fail("unterminated or malformed quoted label", number);
      nodes.push_back({std::move(*name), number});
    } else if (kind == "sedge" || kind == "tedge") {
      auto [a, tail] = head(rest);
      auto [b, extra] = head(tail);
      if (a.empty() || b.empty() || !extra.empty())
        fail("expected '" + std::string(kind) + " <from> <to>'", number);
      const NodeId u = parse_id(a, number), v = parse_id(b, number);
      if (kind == "sedge") sedges.push_back({{u, v}, number});
      else tedges.push_back({{u, v}, number});
    } else if (kind == "origin") {
      const auto split = rest.find_last_of(" \t");
      if (split == std::string_view::npos) fail("expected 'origin <character> <node>'", number);
      auto name = unquote_name(trim(rest.substr(0, split)));
      if (!name) fail("unterminated or malformed quoted character name", number);
      const std::string_view node = rest.substr(split + 1);
      std::optional<NodeId> origin;
      if (node != "-") origin = parse_id(node, number);
      origins.push_back({{std::move(*name), origin}, number});
    } else {
      fail("unknown record '" + std::string(kind) + "'", number);
    }
  }
  if (nodes.empty()) fail("no nodes", number);

  if (!taxa) {
    std::vector<std::string> labels;
    for (const auto& r : nodes)
      if (!r.label.empty()) labels.push_back(r.label);
    try {
      taxa = make_taxa(std::move(labels));
    } catch (const InputError& e) {
      fail(e.what(), 1);
    }
  }
  TreeBuilder b(taxa);
  for (const auto& r : nodes) {
    std::optional<TaxonId> taxon;
    if (!r.label.empty()) {
      taxon = taxa->find(r.label);
      if (!taxon) fail("unknown taxon '" + r.label + "'", r.line);
    }
    b.add_node(taxon);
  }
  for (const auto& [e, line] : sedges) {
    try {
      b.add_edge(e.first, e.second);
    } catch (const InputError& err) {
      fail(err.what(), line);
    }
  }
  Tree tree = std::move(b).build();
  std::vector<TransferEdge> transfers;
  for (const auto& [e, line] : tedges) {
    if (e.donor >= tree.size() || e.recipient >= tree.size())
      fail("transfer edge references an unknown node", line);
    transfers.push_back(e);
  }
  NetworkDocument doc{LgtNetwork(std::move(tree), std::move(transfers)), {}};
  for (auto& [label, line] : origins) {
    if (label.second && *label.second >= doc.network.size())
      fail("origin references an unknown node", line);
    doc.origins.push_back(std::move(label));
  }
  return doc;
}

LgtNetwork parse_network(std::string_view text, TaxonTablePtr taxa) {
  return parse_network_document(text, std::move(taxa)).network;
}

}  // namespace galled
