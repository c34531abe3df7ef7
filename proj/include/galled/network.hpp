#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "galled/tree.hpp"

namespace galled {

struct TransferEdge {
  NodeId donor;
  NodeId recipient;
  friend bool operator==(const TransferEdge&, const TransferEdge&) = default;
  friend auto operator<=>(const TransferEdge&, const TransferEdge&) = default;
};

// A support tree plus transfer edges. Every transfer joins two nodes that are
// incomparable in the support tree, and each transfer node has exactly one
// support child. Both directions between one pair may coexist; is_galled
// rejects such networks.
class LgtNetwork {
 public:
  // Throws ModelError on any violated invariant.
  LgtNetwork(Tree support, std::vector<TransferEdge> transfers);
  explicit LgtNetwork(Tree support) : LgtNetwork(std::move(support), {}) {}

  const Tree& support() const { return support_; }
  const std::vector<TransferEdge>& transfers() const { return transfers_; }
  std::size_t size() const { return support_.size(); }
  bool is_transfer_node(NodeId v) const { return transfer_degree_[v] > 0; }
  std::span<const NodeId> transfer_out(NodeId v) const { return out_[v]; }
  // Support parent + incoming transfers.
  std::size_t in_degree(NodeId v) const;

  friend bool operator==(const LgtNetwork& a, const LgtNetwork& b) {
    return a.support_ == b.support_ && a.transfers_ == b.transfers_;
  }

 private:
  Tree support_;
  std::vector<TransferEdge> transfers_;
  std::vector<std::uint32_t> transfer_degree_;
  std::vector<std::uint32_t> transfer_in_;
  std::vector<std::vector<NodeId>> out_;
};

struct SuppressedNetwork {
  LgtNetwork network;
  // old id -> new id, kNoNode for removed nodes.
  std::vector<NodeId> renumber;
};

// Removes support nodes with one parent and one child that are not transfer
// endpoints. Survivors keep their relative id order.
SuppressedNetwork suppress_subdivision_nodes_mapped(const LgtNetwork& n);
LgtNetwork suppress_subdivision_nodes(const LgtNetwork& n);

// No two distinct underlying cycles share a node. Linear time: every
// biconnected block must be a bridge or a simple cycle, and no node may lie on
// two cyclic blocks.
bool is_galled(const LgtNetwork& n);

// Nodes of the underlying cycle closed by transfer `e` over the support tree.
std::vector<NodeId> transfer_cycle(const LgtNetwork& n, const TransferEdge& e);

// For a non-galled network: the first pair (in transfer order) of transfer
// edges whose support cycles share a node. nullopt iff the network is galled.
std::optional<std::pair<TransferEdge, TransferEdge>> intersecting_transfer_cycles(
    const LgtNetwork& n);

}  // namespace galled
