#include "galled/tree.hpp"

#include <bit>
#include <string>
#include <utility>

#include "galled/errors.hpp"

namespace galled {

TreeBuilder::TreeBuilder(TaxonTablePtr taxa) : taxa_(std::move(taxa)) {
  if (!taxa_) throw InputError("tree requires a taxon table");
}

NodeId TreeBuilder::add_node(std::optional<TaxonId> taxon) {
  if (taxon && *taxon >= taxa_->size())
    throw InputError("taxon id " + std::to_string(*taxon) + " out of range");
  parent_.push_back(kNoNode);
  children_.emplace_back();
  taxon_.push_back(taxon);
  return static_cast<NodeId>(children_.size() - 1);
}

void TreeBuilder::add_edge(NodeId parent, NodeId child) {
  if (parent >= size() || child >= size())
    throw InputError("edge (" + std::to_string(parent) + "," + std::to_string(child) +
                     ") references an unknown node");
  if (parent == child) throw InputError("self-loop at node " + std::to_string(parent));
  if (parent_[child] != kNoNode)
    throw InputError("node " + std::to_string(child) + " has two parents");
  parent_[child] = parent;
  children_[parent].push_back(child);
}

Tree TreeBuilder::build() && {
  if (children_.empty()) throw InputError("tree has no nodes");
  Tree t;
  t.taxa_ = std::move(taxa_);
  t.parent_ = std::move(parent_);
  t.children_ = std::move(children_);
  t.taxon_ = std::move(taxon_);

  for (NodeId v = 0; v < t.size(); ++v) {
    if (t.parent_[v] == kNoNode) {
      if (t.root_ != kNoNode) throw InputError("tree has more than one root");
      t.root_ = v;
    }
  }
  if (t.root_ == kNoNode) throw InputError("tree has no root (cycle)");

  t.leaf_of_.assign(t.taxa_->size(), kNoNode);
  for (NodeId v = 0; v < t.size(); ++v) {
    const bool leaf = t.children_[v].empty();
    if (leaf && !t.taxon_[v])
      throw InputError("leaf node " + std::to_string(v) + " has no taxon");
    if (!leaf && t.taxon_[v])
      throw InputError("internal node " + std::to_string(v) + " carries a taxon");
    if (leaf) {
      NodeId& slot = t.leaf_of_[*t.taxon_[v]];
      if (slot != kNoNode)
        throw InputError("taxon '" + t.taxa_->label(*t.taxon_[v]) + "' labels two leaves");
      slot = v;
    }
  }
  t.index();
  if (t.preorder_.size() != t.size()) throw InputError("tree is not connected (cycle)");
  return t;
}

NodeId Tree::check(NodeId v) const {
  if (v >= parent_.size()) throw InputError("invalid node id " + std::to_string(v));
  return v;
}

void Tree::index() {
  const std::size_t n = size();
  tin_.assign(n, 0);
  tout_.assign(n, 0);
  depth_.assign(n, 0);
  first_.assign(n, 0);
  preorder_.clear();
  postorder_.clear();
  euler_.clear();
  preorder_.reserve(n);
  postorder_.reserve(n);
  euler_.reserve(2 * n);

  // Iterative DFS: (node, next child index).
  std::vector<std::pair<NodeId, std::size_t>> stack;
  std::vector<bool> seen(n, false);
  std::uint32_t clock = 0;
  stack.emplace_back(root_, 0);
  seen[root_] = true;
  tin_[root_] = clock++;
  preorder_.push_back(root_);
  first_[root_] = 0;
  euler_.push_back(root_);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < children_[v].size()) {
      NodeId c = children_[v][next++];
      if (seen[c]) throw InputError("tree contains a cycle");
      seen[c] = true;
      depth_[c] = depth_[v] + 1;
      tin_[c] = clock++;
      preorder_.push_back(c);
      first_[c] = static_cast<std::uint32_t>(euler_.size());
      euler_.push_back(c);
      stack.emplace_back(c, 0);
    } else {
      tout_[v] = clock++;
      postorder_.push_back(v);
      stack.pop_back();
      if (!stack.empty()) euler_.push_back(stack.back().first);
    }
  }
  if (preorder_.size() != n) return;

  clade_.assign(n, taxa_->empty_set());
  for (NodeId v : postorder_) {
    if (taxon_[v]) clade_[v].set(*taxon_[v]);
    for (NodeId c : children_[v]) clade_[v] |= clade_[c];
  }

  const std::size_t m = euler_.size();
  const std::size_t levels = std::bit_width(m);
  sparse_.assign(levels, {});
  sparse_[0] = euler_;
  for (std::size_t k = 1; k < levels; ++k) {
    const std::size_t span = std::size_t{1} << k;
    sparse_[k].resize(m - span + 1);
    for (std::size_t i = 0; i + span <= m; ++i) {
      NodeId a = sparse_[k - 1][i];
      NodeId b = sparse_[k - 1][i + span / 2];
      sparse_[k][i] = depth_[a] <= depth_[b] ? a : b;
    }
  }
}

NodeId Tree::lca(NodeId u, NodeId v) const {
  std::size_t l = first_[check(u)];
  std::size_t r = first_[check(v)];
  if (l > r) std::swap(l, r);
  const std::size_t k = std::bit_width(r - l + 1) - 1;
  NodeId a = sparse_[k][l];
  NodeId b = sparse_[k][r + 1 - (std::size_t{1} << k)];
  return depth_[a] <= depth_[b] ? a : b;
}

bool Tree::has_subdivision_nodes() const {
  for (NodeId v = 0; v < size(); ++v)
    if (is_subdivision(v)) return true;
  return false;
}

bool operator==(const Tree& a, const Tree& b) {
  if (a.size() != b.size() || a.root_ != b.root_) return false;
  if (a.parent_ != b.parent_ || a.children_ != b.children_) return false;
  for (NodeId v = 0; v < a.size(); ++v) {
    if (a.taxon_[v].has_value() != b.taxon_[v].has_value()) return false;
    if (a.taxon_[v] && a.taxa_->label(*a.taxon_[v]) != b.taxa_->label(*b.taxon_[v])) return false;
  }
  return true;
}

namespace {

bool equal_below(const Tree& a, NodeId u, const Tree& b, NodeId v) {
  auto ca = a.children(u);
  auto cb = b.children(v);
  if (ca.size() != cb.size()) return false;
  if (ca.empty()) return a.taxa().label(*a.taxon(u)) == b.taxa().label(*b.taxon(v));
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!equal_below(a, ca[i], b, cb[i])) return false;
  return true;
}

}  // namespace

bool structurally_equal(const Tree& a, const Tree& b) {
  if (a.size() != b.size()) return false;
  return equal_below(a, a.root(), b, b.root());
}

SubdividedTree subdivide_all_edges(const Tree& t) {
  TreeBuilder b(t.taxa_ptr());
  for (NodeId v = 0; v < t.size(); ++v) b.add_node(t.taxon(v));
  std::vector<NodeId> above(t.size(), kNoNode);
  for (NodeId v : t.preorder())
    if (v != t.root()) above[v] = b.add_node();
  for (NodeId v : t.preorder()) {
    for (NodeId c : t.children(v)) {
      b.add_edge(v, above[c]);
      b.add_edge(above[c], c);
    }
  }
  return {std::move(b).build(), std::move(above)};
}

}  // namespace galled
