#include <cctype>
#include <cstdlib>
#include <string>
#include <unordered_set>

#include "galled/errors.hpp"
#include "galled/io.hpp"

namespace galled {

namespace {

constexpr std::string_view kDelimiters = "(),:;[]'";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

struct RawNode {
  NodeId parent;
  std::string label;
  std::size_t label_pos;
  std::size_t child_count = 0;
  bool leaf;
};

class NewickReader {
 public:
  explicit NewickReader(std::string_view text) : text_(text) {}

  std::vector<RawNode> read() {
    std::vector<NodeId> open;
    bool expect_subtree = true;
    while (true) {
      skip();
      if (expect_subtree) {
        if (at('(')) {
          NodeId id = add(open, "", pos_, false);
          open.push_back(id);
          ++pos_;
          continue;
        }
        const std::size_t start = pos_;
        std::string label = read_label();
        if (label.empty()) fail("empty leaf name", start);
        add(open, std::move(label), start, true);
        read_length();
        expect_subtree = false;
        continue;
      }
      if (pos_ >= text_.size()) {
        if (!open.empty()) fail("unbalanced parentheses: missing ')'", pos_);
        fail("missing terminating ';'", pos_);
      }
      const char c = text_[pos_];
      if (c == ',') {
        if (open.empty()) fail("',' outside parentheses", pos_);
        ++pos_;
        expect_subtree = true;
      } else if (c == ')') {
        if (open.empty()) fail("unbalanced parentheses: unmatched ')'", pos_);
        if (nodes_[open.back()].child_count < 2)
          fail("internal node with fewer than two children", pos_);
        ++pos_;
        open.pop_back();
        read_label();  // internal labels are dropped
        read_length();
      } else if (c == ';') {
        if (!open.empty()) fail("unbalanced parentheses: missing ')'", pos_);
        ++pos_;
        skip();
        if (pos_ < text_.size()) fail("trailing characters after ';'", pos_);
        return std::move(nodes_);
      } else {
        fail(std::string("unexpected character '") + c + "'", pos_);
      }
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw ParseError("newick: " + what, at, ParseError::Unit::byte);
  }

  bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  NodeId add(const std::vector<NodeId>& open, std::string label, std::size_t pos, bool leaf) {
    NodeId parent = open.empty() ? kNoNode : open.back();
    if (parent == kNoNode && !nodes_.empty()) fail("more than one tree", pos);
    if (parent != kNoNode) ++nodes_[parent].child_count;
    nodes_.push_back({parent, std::move(label), pos, 0, leaf});
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  void skip() {
    while (pos_ < text_.size()) {
      if (is_space(text_[pos_])) {
        ++pos_;
      } else if (text_[pos_] == '[') {
        const std::size_t end = text_.find(']', pos_);
        if (end == std::string_view::npos) fail("unterminated comment", pos_);
        pos_ = end + 1;
      } else {
        break;
      }
    }
  }

  std::string read_label() {
    skip();
    std::string label;
    if (at('\'')) {
      const std::size_t start = pos_++;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted label", start);
        if (text_[pos_] == '\'') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
            label.push_back('\'');
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        label.push_back(text_[pos_++]);
      }
      return label;
    }
    while (pos_ < text_.size() && !is_space(text_[pos_]) &&
           kDelimiters.find(text_[pos_]) == std::string_view::npos)
      label.push_back(text_[pos_++]);
    return label;
  }

  void read_length() {
    skip();
    if (!at(':')) return;
    ++pos_;
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) &&
           kDelimiters.find(text_[pos_]) == std::string_view::npos)
      ++pos_;
    const std::string token(text_.substr(start, pos_ - start));
    if (token.empty()) fail("missing branch length", start);
    char* end = nullptr;
    std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) fail("invalid branch length '" + token + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<RawNode> nodes_;
};

Tree assemble(const std::vector<RawNode>& nodes, TaxonTablePtr taxa) {
  TreeBuilder b(taxa);
  for (const auto& n : nodes) {
    std::optional<TaxonId> taxon;
    if (n.leaf) {
      taxon = taxa->find(n.label);
      if (!taxon)
        throw ParseError("newick: unknown taxon '" + n.label + "'", n.label_pos,
                         ParseError::Unit::byte);
    }
    b.add_node(taxon);
  }
  for (NodeId v = 0; v < nodes.size(); ++v)
    if (nodes[v].parent != kNoNode) b.add_edge(nodes[v].parent, v);
  return std::move(b).build();
}

void check_duplicates(const std::vector<RawNode>& nodes) {
  std::unordered_set<std::string> seen;
  for (const auto& n : nodes)
    if (n.leaf && !seen.insert(n.label).second)
      throw ParseError("newick: duplicate leaf label '" + n.label + "'", n.label_pos,
                       ParseError::Unit::byte);
}

bool needs_quotes(const std::string& label) {
  if (label.empty()) return true;
  for (char c : label)
    if (is_space(c) || kDelimiters.find(c) != std::string_view::npos) return true;
  return false;
}

void write_label(std::string& out, const std::string& label) {
  if (!needs_quotes(label)) {
    out += label;
    return;
  }
  out.push_back('\'');
  for (char c : label) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
}

}  // namespace

Tree parse_newick(std::string_view text) {
  auto nodes = NewickReader(text).read();
  check_duplicates(nodes);
  std::vector<std::string> labels;
  for (const auto& n : nodes)
    if (n.leaf) labels.push_back(n.label);
  return assemble(nodes, make_taxa(std::move(labels)));
}

Tree parse_newick(std::string_view text, TaxonTablePtr taxa) {
  auto nodes = NewickReader(text).read();
  check_duplicates(nodes);
  return assemble(nodes, std::move(taxa));
}

std::string serialize_newick(const Tree& t) {
  if (t.has_subdivision_nodes())
    throw InputError("tree has subdivision nodes and cannot be written as Newick");
  std::string out;
  // Explicit stack: (node, index of next child to emit).
  std::vector<std::pair<NodeId, std::size_t>> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (t.is_leaf(v)) {
      write_label(out, t.taxa().label(*t.taxon(v)));
      stack.pop_back();
      continue;
    }
    auto kids = t.children(v);
    if (next == kids.size()) {
      out.push_back(')');
      stack.pop_back();
      continue;
    }
    out.push_back(next == 0 ? '(' : ',');
    const NodeId child = kids[next++];
    stack.emplace_back(child, 0);
  }
  out.push_back(';');
  return out;
}

}  // namespace galled
