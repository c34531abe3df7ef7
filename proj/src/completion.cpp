#include "galled/completion.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "galled/errors.hpp"
#include "galled/ptn.hpp"

namespace galled {

std::variant<FaNeighborIndex, TooManyFAs> fa_neighbor_index(const Tree& t, const CharacterSet& cs,
                                                            unsigned jobs, std::uint64_t* work) {
  if (t.has_subdivision_nodes()) throw InputError("tree has subdivision nodes");
  require_characters_within(cs, t.taxa(), t.leaf_taxa());

  std::vector<std::vector<NodeId>> fas(cs.size());
  std::vector<std::uint64_t> counters(std::max(1u, jobs), 0);
  auto run = [&](std::size_t begin, std::size_t end, std::uint64_t* counter) {
    for (std::size_t i = begin; i < end; ++i) fas[i] = first_appearances(t, cs[i].members, counter);
  };
  if (jobs <= 1 || cs.size() < 2) {
    run(0, cs.size(), &counters[0]);
  } else {
    std::vector<std::thread> threads;
    const std::size_t chunk = (cs.size() + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs && j * chunk < cs.size(); ++j)
      threads.emplace_back(run, j * chunk, std::min(cs.size(), (j + 1) * chunk), &counters[j]);
    for (auto& th : threads) th.join();
  }
  if (work) *work += std::accumulate(counters.begin(), counters.end(), std::uint64_t{0});

  FaNeighborIndex idx;
  idx.neighbors.assign(t.size(), {});
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (fas[i].size() > 2) return TooManyFAs{i, std::move(fas[i])};
    if (fas[i].size() == 2) {
      idx.neighbors[fas[i][0]].push_back({fas[i][1], i});
      idx.neighbors[fas[i][1]].push_back({fas[i][0], i});
    }
  }
  if (work) *work += t.size() + cs.size();
  return idx;
}

namespace {

// Rank of the smallest label in each clade, for orienting simple pairs.
std::vector<std::size_t> smallest_label_rank(const Tree& t) {
  const auto& labels = t.taxa().labels();
  std::vector<TaxonId> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](TaxonId a, TaxonId b) { return labels[a] < labels[b]; });
  std::vector<std::size_t> rank_of(labels.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank_of[order[r]] = r;
  std::vector<std::size_t> best(t.size(), labels.size());
  for (NodeId v : t.postorder()) {
    if (auto taxon = t.taxon(v)) best[v] = rank_of[*taxon];
    NodeId p = t.parent(v);
    if (p != kNoNode) best[p] = std::min(best[p], best[v]);
  }
  return best;
}

}  // namespace

std::variant<RedundancyFree, IncomparableFaNeighbors> redundancy_free_network(
    const Tree& t, const FaNeighborIndex& idx, std::uint64_t* work) {
  SubdividedTree sub = subdivide_all_edges(t);
  std::vector<char> possibly_simple(t.size(), 0);
  std::vector<TransferEdge> transfers;
  std::optional<std::vector<std::size_t>> label_rank;
  std::uint64_t steps = t.size();

  for (NodeId v : t.postorder()) {
    const auto& nbrs = idx.neighbors[v];
    if (nbrs.empty()) continue;
    NodeId c_min = nbrs.front().node;
    for (const auto& u : nbrs) {
      ++steps;
      if (!t.comparable(u.node, c_min)) {
        if (work) *work += steps;
        return IncomparableFaNeighbors{v, c_min, u.node};
      }
      if (t.is_ancestor(u.node, c_min) && u.node != c_min) c_min = u.node;
    }
    if (nbrs.size() >= 2) {
      transfers.push_back({sub.above[c_min], sub.above[v]});
    } else if (possibly_simple[c_min]) {
      if (!label_rank) label_rank = smallest_label_rank(t);
      NodeId donor = v, recipient = c_min;
      if ((*label_rank)[c_min] < (*label_rank)[v]) std::swap(donor, recipient);
      transfers.push_back({sub.above[donor], sub.above[recipient]});
    } else {
      possibly_simple[v] = 1;
    }
  }
  if (work) *work += steps + sub.tree.size();
  return RedundancyFree{LgtNetwork(std::move(sub.tree), std::move(transfers)),
                        std::move(sub.above)};
}

CompletionOutcome galled_completion(const Tree& t, const CharacterSet& cs, unsigned jobs) {
  CompletionOutcome out{TooManyFAs{}, 0};
  auto indexed = fa_neighbor_index(t, cs, jobs, &out.work);
  if (auto* reject = std::get_if<TooManyFAs>(&indexed)) {
    out.verdict = std::move(*reject);
    return out;
  }
  auto built = redundancy_free_network(t, std::get<FaNeighborIndex>(indexed), &out.work);
  if (auto* reject = std::get_if<IncomparableFaNeighbors>(&built)) {
    out.verdict = *reject;
    return out;
  }
  LgtNetwork& rf = std::get<RedundancyFree>(built).network;
  out.work += rf.size() + rf.transfers().size();
  if (!is_galled(rf)) {
    auto pair = intersecting_transfer_cycles(rf);
    if (!pair) throw std::logic_error("non-galled network without intersecting transfer cycles");
    out.work += rf.size() * rf.transfers().size();
    out.verdict = NotGalled{pair->first, pair->second, std::move(rf)};
    return out;
  }
  LgtNetwork witness = suppress_subdivision_nodes(rf);
  out.work += rf.size();
  Explanation ex = explains(witness, cs, jobs, &out.work);
  if (!ex.all()) throw std::logic_error("galled completion does not explain every character");
  out.verdict = Completable{std::move(witness), std::move(ex.origins)};
  return out;
}

}  // namespace galled
