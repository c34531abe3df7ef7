#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "galled/taxa.hpp"

namespace galled {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

class Tree;

// Collects nodes and parent->child edges in any id order, then validates and
// freezes them into a Tree. Children keep the order in which edges were added.
class TreeBuilder {
 public:
  explicit TreeBuilder(TaxonTablePtr taxa);

  NodeId add_node(std::optional<TaxonId> taxon = std::nullopt);
  void add_edge(NodeId parent, NodeId child);
  std::size_t size() const { return children_.size(); }

  // Throws InputError unless the edges form a single rooted tree whose leaves
  // are exactly the taxon-labelled nodes, with no taxon used twice.
  Tree build() &&;

 private:
  TaxonTablePtr taxa_;
  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::optional<TaxonId>> taxon_;
};

// Immutable rooted tree with arbitrary out-degrees. Ancestry is answered in
// O(1) from Euler-tour intervals, lca in O(1) from a sparse table.
class Tree {
 public:
  Tree() = default;

  std::size_t size() const { return parent_.size(); }
  std::size_t edge_count() const { return size() == 0 ? 0 : size() - 1; }
  NodeId root() const { return root_; }
  // kNoNode for the root.
  NodeId parent(NodeId v) const { return parent_[check(v)]; }
  std::span<const NodeId> children(NodeId v) const { return children_[check(v)]; }
  bool is_leaf(NodeId v) const { return children_[check(v)].empty(); }
  std::optional<TaxonId> taxon(NodeId v) const { return taxon_[check(v)]; }
  // Leaf labelled with `t`, or kNoNode.
  NodeId leaf_of(TaxonId t) const { return t < leaf_of_.size() ? leaf_of_[t] : kNoNode; }
  std::size_t depth(NodeId v) const { return depth_[check(v)]; }

  const TaxonTable& taxa() const { return *taxa_; }
  const TaxonTablePtr& taxa_ptr() const { return taxa_; }

  // True iff `v` lies on the path from the root to `u` (reflexive).
  bool is_ancestor(NodeId u, NodeId v) const {
    check(u);
    check(v);
    return tin_[v] <= tin_[u] && tout_[u] <= tout_[v];
  }
  bool comparable(NodeId u, NodeId v) const { return is_ancestor(u, v) || is_ancestor(v, u); }
  NodeId lca(NodeId u, NodeId v) const;

  // Taxa of the leaves below `v`, inclusive.
  const TaxonSet& clade_leaves(NodeId v) const { return clade_[check(v)]; }
  const TaxonSet& leaf_taxa() const { return clade_[root_]; }

  std::span<const NodeId> preorder() const { return preorder_; }
  std::span<const NodeId> postorder() const { return postorder_; }

  // Non-root nodes with exactly one child.
  bool has_subdivision_nodes() const;
  bool is_subdivision(NodeId v) const {
    return parent_[check(v)] != kNoNode && children_[v].size() == 1;
  }

  // Same ids, parents, child order and leaf labels.
  friend bool operator==(const Tree& a, const Tree& b);

 private:
  friend class TreeBuilder;
  NodeId check(NodeId v) const;
  void index();

  TaxonTablePtr taxa_;
  NodeId root_ = kNoNode;
  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::optional<TaxonId>> taxon_;
  std::vector<NodeId> leaf_of_;

  std::vector<NodeId> preorder_;
  std::vector<NodeId> postorder_;
  std::vector<std::uint32_t> tin_, tout_, depth_;
  std::vector<TaxonSet> clade_;
  // Euler tour and sparse table over first-occurrence depths.
  std::vector<NodeId> euler_;
  std::vector<std::uint32_t> first_;
  std::vector<std::vector<NodeId>> sparse_;
};

// Same shape, child order and leaf labels, ignoring node ids.
bool structurally_equal(const Tree& a, const Tree& b);

struct SubdividedTree {
  Tree tree;
  // above[v] is the new node between v and its parent (kNoNode for the root).
  // Indexed by the original ids, which are preserved.
  std::vector<NodeId> above;
};

// Inserts one node on every edge. Original nodes keep their ids; the new ones
// are numbered after them in preorder of their lower endpoint.
SubdividedTree subdivide_all_edges(const Tree& t);

}  // namespace galled
