#include "galled/network.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "galled/errors.hpp"

namespace galled {

namespace {

std::string edge_text(const TransferEdge& e) {
  return "(" + std::to_string(e.donor) + "," + std::to_string(e.recipient) + ")";
}

}  // namespace

LgtNetwork::LgtNetwork(Tree support, std::vector<TransferEdge> transfers)
    : support_(std::move(support)), transfers_(std::move(transfers)) {
  const std::size_t n = support_.size();
  transfer_degree_.assign(n, 0);
  transfer_in_.assign(n, 0);
  out_.assign(n, {});
  std::set<TransferEdge> seen;
  for (const auto& e : transfers_) {
    if (e.donor >= n || e.recipient >= n)
      throw ModelError("transfer edge " + edge_text(e) + " references an unknown node");
    if (support_.comparable(e.donor, e.recipient))
      throw ModelError("transfer edge " + edge_text(e) +
                       " joins comparable nodes; transfer endpoints must be incomparable "
                       "in the support tree");
    if (!seen.insert(e).second) throw ModelError("duplicate transfer edge " + edge_text(e));
    for (NodeId v : {e.donor, e.recipient}) {
      if (support_.children(v).size() != 1)
        throw ModelError("transfer node " + std::to_string(v) +
                         " must have exactly one child in the support tree");
      ++transfer_degree_[v];
    }
    ++transfer_in_[e.recipient];
    out_[e.donor].push_back(e.recipient);
  }
}

std::size_t LgtNetwork::in_degree(NodeId v) const {
  return (support_.parent(v) == kNoNode ? 0 : 1) + transfer_in_[v];
}

SuppressedNetwork suppress_subdivision_nodes_mapped(const LgtNetwork& n) {
  const Tree& t = n.support();
  std::vector<NodeId> renumber(t.size(), kNoNode);
  TreeBuilder b(t.taxa_ptr());
  for (NodeId v = 0; v < t.size(); ++v) {
    if (t.is_subdivision(v) && !n.is_transfer_node(v)) continue;
    renumber[v] = b.add_node(t.taxon(v));
  }
  for (NodeId v : t.preorder()) {
    if (renumber[v] == kNoNode || v == t.root()) continue;
    NodeId p = t.parent(v);
    while (renumber[p] == kNoNode) p = t.parent(p);
    b.add_edge(renumber[p], renumber[v]);
  }
  std::vector<TransferEdge> transfers;
  transfers.reserve(n.transfers().size());
  for (const auto& e : n.transfers())
    transfers.push_back({renumber[e.donor], renumber[e.recipient]});
  return {LgtNetwork(std::move(b).build(), std::move(transfers)), std::move(renumber)};
}

LgtNetwork suppress_subdivision_nodes(const LgtNetwork& n) {
  return suppress_subdivision_nodes_mapped(n).network;
}

bool is_galled(const LgtNetwork& n) {
  const Tree& t = n.support();
  const std::size_t nv = t.size();
  // Undirected multigraph; edges identified by index so parallel edges work.
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(nv + n.transfers().size());
  for (NodeId v = 0; v < nv; ++v)
    if (t.parent(v) != kNoNode) edges.emplace_back(t.parent(v), v);
  for (const auto& e : n.transfers()) edges.emplace_back(e.donor, e.recipient);
  if (edges.size() < nv) return true;  // a tree

  std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> adj(nv);
  for (std::uint32_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].first].emplace_back(edges[i].second, i);
    adj[edges[i].second].emplace_back(edges[i].first, i);
  }

  constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  constexpr std::uint32_t kNoEdge = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> disc(nv, kUnseen), low(nv, 0);
  std::vector<std::uint32_t> cyclic_blocks(nv, 0);
  std::vector<std::uint32_t> stamp(nv, 0);
  std::uint32_t block_id = 0;
  std::vector<std::uint32_t> edge_stack;

  struct Frame {
    NodeId v;
    std::uint32_t via;  // edge used to enter v
    std::size_t next;
  };
  std::vector<Frame> frames;
  std::uint32_t clock = 0;

  // A block popped off the edge stack down to `until`.
  auto close_block = [&](std::uint32_t until) {
    ++block_id;
    std::size_t edge_count = 0, vertex_count = 0;
    std::vector<NodeId> verts;
    while (true) {
      std::uint32_t e = edge_stack.back();
      edge_stack.pop_back();
      ++edge_count;
      for (NodeId x : {edges[e].first, edges[e].second}) {
        if (stamp[x] != block_id) {
          stamp[x] = block_id;
          ++vertex_count;
          verts.push_back(x);
        }
      }
      if (e == until) break;
    }
    if (edge_count == 1) return true;
    if (edge_count != vertex_count) return false;
    for (NodeId x : verts)
      if (++cyclic_blocks[x] > 1) return false;
    return true;
  };

  const NodeId start = t.root();
  disc[start] = low[start] = clock++;
  frames.push_back({start, kNoEdge, 0});
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.next < adj[f.v].size()) {
      auto [w, e] = adj[f.v][f.next++];
      if (e == f.via) continue;
      if (disc[w] == kUnseen) {
        edge_stack.push_back(e);
        disc[w] = low[w] = clock++;
        frames.push_back({w, e, 0});
      } else if (disc[w] < disc[f.v]) {
        edge_stack.push_back(e);
        low[f.v] = std::min(low[f.v], disc[w]);
      }
      continue;
    }
    const NodeId w = f.v;
    const std::uint32_t via = f.via;
    frames.pop_back();
    if (frames.empty()) break;
    const NodeId v = frames.back().v;
    low[v] = std::min(low[v], low[w]);
    if (low[w] >= disc[v] && !close_block(via)) return false;
  }
  return true;
}

std::vector<NodeId> transfer_cycle(const LgtNetwork& n, const TransferEdge& e) {
  const Tree& t = n.support();
  const NodeId top = t.lca(e.donor, e.recipient);
  std::vector<NodeId> nodes;
  for (NodeId v = e.donor; v != top; v = t.parent(v)) nodes.push_back(v);
  for (NodeId v = e.recipient; v != top; v = t.parent(v)) nodes.push_back(v);
  nodes.push_back(top);
  return nodes;
}

std::optional<std::pair<TransferEdge, TransferEdge>> intersecting_transfer_cycles(
    const LgtNetwork& n) {
  const auto& transfers = n.transfers();
  std::vector<std::vector<NodeId>> cycles;
  cycles.reserve(transfers.size());
  for (const auto& e : transfers) cycles.push_back(transfer_cycle(n, e));
  std::vector<std::uint32_t> mark(n.size(), 0);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    for (NodeId v : cycles[i]) mark[v] = static_cast<std::uint32_t>(i + 1);
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      for (NodeId v : cycles[j])
        if (mark[v] == i + 1) return std::make_pair(transfers[i], transfers[j]);
    }
  }
  return std::nullopt;
}

}  // namespace galled
