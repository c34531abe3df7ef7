#include "galled/ptn.hpp"

#include <cassert>
#include <sstream>
#include <thread>

#include "galled/errors.hpp"

namespace galled {

void require_characters_within(const CharacterSet& cs, const TaxonTable& taxa,
                               const TaxonSet& leaves) {
  if (&cs.taxa() != &taxa && !(cs.taxa() == taxa))
    throw InputError("characters and tree are over different taxon tables");
  for (const auto& c : cs) {
    if (!c.members.is_subset_of(leaves)) {
      TaxonSet missing = c.members - leaves;
      throw InputError("character '" + c.name + "' references taxa absent from the tree: " +
                       taxa.format(missing));
    }
  }
}

NodeSet forbidden_set(const LgtNetwork& n, const TaxonSet& c) {
  const Tree& t = n.support();
  NodeSet forbidden(t.size());
  for (NodeId v : t.postorder()) {
    if (auto taxon = t.taxon(v)) {
      if (!c.test(*taxon)) forbidden.set(v);
    }
    NodeId p = t.parent(v);
    if (p != kNoNode && forbidden.test(v)) forbidden.set(p);
  }
  return forbidden;
}

namespace {

std::optional<NodeId> origin_given(const LgtNetwork& n, const TaxonSet& c,
                                   const NodeSet& forbidden, std::uint64_t* work) {
  const Tree& t = n.support();
  const std::size_t target = c.count();
  std::vector<std::uint32_t> seen(t.size(), 0);
  std::vector<NodeId> stack;
  std::uint32_t round = 0;
  std::uint64_t steps = t.size();
  std::optional<NodeId> found;
  for (NodeId cand = 0; cand < t.size() && !found; ++cand) {
    if (forbidden.test(cand)) continue;
    NodeId p = t.parent(cand);
    if (p != kNoNode && !forbidden.test(p)) continue;
    ++round;
    std::size_t reached = 0;
    stack.assign(1, cand);
    seen[cand] = round;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      ++steps;
      if (t.is_leaf(v)) ++reached;
      auto visit = [&](NodeId w) {
        if (seen[w] != round && !forbidden.test(w)) {
          seen[w] = round;
          stack.push_back(w);
        }
      };
      for (NodeId w : t.children(v)) visit(w);
      for (NodeId w : n.transfer_out(v)) visit(w);
    }
    // Allowed leaves are exactly members of c, so counting suffices.
    if (reached == target) found = cand;
  }
  if (work) *work += steps;
  return found;
}

}  // namespace

std::optional<NodeId> find_origin(const LgtNetwork& n, const TaxonSet& c, std::uint64_t* work) {
  if (c.size() != n.support().taxa().size())
    throw InputError("character is over a different taxon table");
  if (!c.is_subset_of(n.support().leaf_taxa()))
    throw InputError("character references taxa absent from the network");
  return origin_given(n, c, forbidden_set(n, c), work);
}

bool Explanation::all() const {
  for (const auto& o : origins)
    if (!o) return false;
  return true;
}

Explanation explains(const LgtNetwork& n, const CharacterSet& cs, unsigned jobs,
                     std::uint64_t* work) {
  const Tree& t = n.support();
  require_characters_within(cs, t.taxa(), t.leaf_taxa());
  Explanation out;
  out.origins.resize(cs.size());
  auto run = [&](std::size_t begin, std::size_t end, std::uint64_t* counter) {
    for (std::size_t i = begin; i < end; ++i) {
      const TaxonSet& c = cs[i].members;
      if (counter) *counter += t.size();
      out.origins[i] = origin_given(n, c, forbidden_set(n, c), counter);
    }
  };
  if (jobs <= 1 || cs.size() < 2) {
    run(0, cs.size(), work);
    return out;
  }
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(cs.size()));
  std::vector<std::uint64_t> counters(jobs, 0);
  std::vector<std::thread> threads;
  const std::size_t chunk = (cs.size() + jobs - 1) / jobs;
  for (unsigned j = 0; j < jobs; ++j) {
    const std::size_t begin = j * chunk;
    const std::size_t end = std::min(cs.size(), begin + chunk);
    if (begin >= end) break;
    threads.emplace_back(run, begin, end, &counters[j]);
  }
  for (auto& th : threads) th.join();
  if (work)
    for (auto c : counters) *work += c;
  return out;
}

std::vector<NodeId> first_appearances(const Tree& t, const TaxonSet& c, std::uint64_t* work) {
  if (c.size() != t.taxa().size()) throw InputError("character is over a different taxon table");
  if (!c.is_subset_of(t.leaf_taxa()))
    throw InputError("character references taxa absent from the tree");
  std::vector<char> inside(t.size(), 1);
  for (NodeId v : t.postorder()) {
    if (auto taxon = t.taxon(v)) inside[v] = c.test(*taxon);
    NodeId p = t.parent(v);
    if (p != kNoNode && !inside[v]) inside[p] = 0;
  }
  std::vector<NodeId> fas;
  for (NodeId v : t.preorder()) {
    NodeId p = t.parent(v);
    if (inside[v] && (p == kNoNode || !inside[p])) fas.push_back(v);
  }
  if (work) *work += 2 * t.size();
#ifndef NDEBUG
  TaxonSet covered = t.taxa().empty_set();
  std::size_t total = 0;
  for (NodeId v : fas) {
    covered |= t.clade_leaves(v);
    total += t.clade_leaves(v).count();
  }
  assert(covered == c && total == c.count());
#endif
  return fas;
}

std::vector<FaRow> fa_statistics(const Tree& t, const CharacterSet& cs) {
  require_characters_within(cs, t.taxa(), t.leaf_taxa());
  std::vector<FaRow> rows;
  rows.reserve(cs.size());
  for (const auto& c : cs) {
    FaRow row;
    row.character = c.name;
    row.nodes = first_appearances(t, c.members);
    for (NodeId v : row.nodes) (t.is_leaf(v) ? row.leaf_count : row.internal_count)++;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_fa_table(const Tree& t, const std::vector<FaRow>& rows) {
  std::ostringstream out;
  out << "character\tfa_count\tleaf_fas\tinternal_fas\tgalled_blocking\tfa_clades\n";
  for (const auto& r : rows) {
    out << r.character << '\t' << r.nodes.size() << '\t' << r.leaf_count << '\t'
        << r.internal_count << '\t' << (r.blocks_galled() ? "yes" : "no") << '\t';
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      if (i) out << ';';
      out << t.taxa().format(t.clade_leaves(r.nodes[i]));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace galled
