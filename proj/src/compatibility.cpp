#include "galled/compatibility.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <stdexcept>

#include "galled/errors.hpp"
#include "galled/ptn.hpp"

namespace galled {

namespace {

using Indices = std::vector<std::size_t>;

Indices all_indices(const CharacterSet& cs) {
  Indices idx(cs.size());
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

bool is_maximal(const CharacterSet& cs, const Indices& idx, std::size_t i) {
  for (std::size_t j : idx)
    if (j != i && cs[i].members.is_proper_subset_of(cs[j].members)) return false;
  return true;
}

std::optional<std::size_t> maximal_compatible(const CharacterSet& cs, const Indices& idx) {
  for (std::size_t i : idx) {
    if (!is_maximal(cs, idx, i)) continue;
    bool compatible = true;
    for (std::size_t j : idx) {
      if (j != i && incompatible(cs[i].members, cs[j].members)) {
        compatible = false;
        break;
      }
    }
    if (compatible) return i;
  }
  return std::nullopt;
}

std::pair<std::size_t, std::size_t> maximal_incompatible_pair(const CharacterSet& cs,
                                                              const Indices& idx) {
  if (maximal_compatible(cs, idx))
    throw std::logic_error("a maximal character is compatible with all others");
  std::optional<std::size_t> a;
  for (std::size_t i : idx) {
    if (is_maximal(cs, idx, i)) {
      a = i;
      break;
    }
  }
  if (!a) throw std::logic_error("no maximal character");
  std::optional<std::size_t> b;
  for (std::size_t j : idx) {
    if (!incompatible(cs[*a].members, cs[j].members)) continue;
    if (!b || cs[j].members.count() > cs[*b].members.count()) b = j;
  }
  if (!b) throw std::logic_error("maximal character without an incompatible partner");
  if (!is_maximal(cs, idx, *b))
    throw std::logic_error("largest incompatible partner is not maximal");
  return {*a, *b};
}

std::optional<ChainInfo> oriented_chain(const CharacterSet& cs, const Indices& idx,
                                        const TaxonSet& side, const TaxonSet& stable) {
  Indices x;
  for (std::size_t i : idx)
    if (cs[i].members.intersects(side) && cs[i].members.intersects(stable)) x.push_back(i);
  if (x.empty()) return std::nullopt;
  std::vector<std::size_t> part_size(cs.size());
  for (std::size_t i : x) part_size[i] = (cs[i].members & side).count();
  std::stable_sort(x.begin(), x.end(),
                   [&](std::size_t a, std::size_t b) { return part_size[a] < part_size[b]; });
  for (std::size_t k = 0; k < x.size(); ++k) {
    if ((cs[x[k]].members - side) != stable) return std::nullopt;
    if (k > 0 && !(cs[x[k - 1]].members & side).is_proper_subset_of(cs[x[k]].members & side))
      return std::nullopt;
  }
  ChainInfo chain;
  chain.bottom = cs[x.front()].members & side;
  chain.members = std::move(x);
  chain.inclusion_side = side;
  chain.stable = stable;
  return chain;
}

std::optional<ChainInfo> chain_for(const CharacterSet& cs, const Indices& idx, const TaxonSet& a1,
                                   const TaxonSet& a2) {
  if (auto chain = oriented_chain(cs, idx, a1, a2)) return chain;
  if (auto chain = oriented_chain(cs, idx, a2, a1)) {
    chain->reversed = true;
    return chain;
  }
  return std::nullopt;
}

ForcedSet forced_for(const CharacterSet& cs, const Indices& idx, const ChainInfo& chain) {
  ForcedSet forced;
  std::vector<char> in_chain(cs.size(), 0);
  for (std::size_t i : chain.members) in_chain[i] = 1;
  auto add_clade = [&](TaxonSet s) {
    if (std::find(forced.clades.begin(), forced.clades.end(), s) == forced.clades.end())
      forced.clades.push_back(std::move(s));
  };
  for (std::size_t i : chain.members) {
    add_clade(cs[i].members & chain.inclusion_side);
    add_clade(cs[i].members & chain.stable);
  }
  for (std::size_t i : idx) {
    const TaxonSet& m = cs[i].members;
    const bool touches = chain.bottom.is_subset_of(m) || chain.stable.is_subset_of(m);
    if (in_chain[i] || touches) forced.characters.push_back(i);
    // Chain members are split by the chain itself, never clades.
    if (!in_chain[i] && touches) add_clade(m);
  }
  return forced;
}

NodeId node_with_clade(const Tree& t, const TaxonSet& s) {
  const auto taxa = members(s);
  NodeId v = t.leaf_of(taxa.front());
  for (TaxonId x : taxa) v = t.lca(v, t.leaf_of(x));
  if (t.clade_leaves(v) != s) throw std::logic_error("expected clade missing from tree");
  return v;
}

// Mutable tree with pending transfers, assembled bottom-up while solving.
struct Fragment {
  std::vector<std::vector<std::uint32_t>> children;
  std::vector<std::optional<TaxonId>> taxon;
  std::uint32_t root = 0;
  // Transfer from the edge above `first` to the edge above `second`.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> transfers;

  std::uint32_t add(std::optional<TaxonId> t = std::nullopt) {
    children.emplace_back();
    taxon.push_back(t);
    return static_cast<std::uint32_t>(children.size() - 1);
  }

  // Copies `g` in; returns the id of its root here.
  std::uint32_t absorb(const Fragment& g) {
    const auto offset = static_cast<std::uint32_t>(children.size());
    for (std::size_t v = 0; v < g.children.size(); ++v) {
      auto kids = g.children[v];
      for (auto& k : kids) k += offset;
      children.push_back(std::move(kids));
      taxon.push_back(g.taxon[v]);
    }
    for (auto [a, b] : g.transfers) transfers.emplace_back(a + offset, b + offset);
    return g.root + offset;
  }

  static Fragment star(const TaxonSet& s) {
    Fragment f;
    const auto taxa = members(s);
    if (taxa.size() == 1) {
      f.root = f.add(taxa.front());
      return f;
    }
    f.root = f.add();
    for (TaxonId t : taxa) {
      auto leaf = f.add(t);
      f.children[f.root].push_back(leaf);
    }
    return f;
  }

  static Fragment of(const Tree& t) {
    Fragment f;
    for (NodeId v = 0; v < t.size(); ++v) {
      f.add(t.taxon(v));
      f.children[v].assign(t.children(v).begin(), t.children(v).end());
    }
    f.root = t.root();
    return f;
  }
};

LgtNetwork materialize(const Fragment& f, const TaxonTablePtr& table) {
  std::vector<std::vector<std::pair<std::size_t, bool>>> uses(f.children.size());
  for (std::size_t i = 0; i < f.transfers.size(); ++i) {
    uses[f.transfers[i].first].emplace_back(i, true);
    uses[f.transfers[i].second].emplace_back(i, false);
  }
  if (!uses[f.root].empty()) throw std::logic_error("transfer above the root");
  std::vector<TransferEdge> transfers(f.transfers.size(), TransferEdge{kNoNode, kNoNode});
  TreeBuilder b(table);
  std::vector<std::pair<std::uint32_t, NodeId>> stack{{f.root, kNoNode}};
  while (!stack.empty()) {
    auto [v, parent] = stack.back();
    stack.pop_back();
    NodeId above = parent;
    if (parent != kNoNode) {
      for (auto [i, donor] : uses[v]) {
        NodeId s = b.add_node();
        b.add_edge(above, s);
        (donor ? transfers[i].donor : transfers[i].recipient) = s;
        above = s;
      }
    }
    NodeId id = b.add_node(f.taxon[v]);
    if (above != kNoNode) b.add_edge(above, id);
    const auto& kids = f.children[v];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, id);
  }
  return LgtNetwork(std::move(b).build(), std::move(transfers));
}

std::string names_of(const CharacterSet& cs, const Indices& idx) {
  std::string out = "{";
  for (std::size_t k = 0; k < idx.size(); ++k) out += (k ? "," : "") + cs[idx[k]].name;
  return out + "}";
}

using Attempt = std::variant<Fragment, TryNo, InvalidPartition>;

class Solver {
 public:
  explicit Solver(const CharacterSet& cs) : cs_(cs) {}

  std::optional<Fragment> solve(const Indices& idx, const TaxonSet& taxa) {
    ++calls;
    if (idx.empty()) return Fragment::star(taxa);

    if (auto c = maximal_compatible(cs_, idx)) {
      const TaxonSet& top = cs_[*c].members;
      Indices inside, outside;
      TaxonSet rest = cs_.taxa().empty_set();
      for (std::size_t i : idx) {
        if (cs_[i].members.is_proper_subset_of(top)) {
          inside.push_back(i);
        } else if (!cs_[i].members.intersects(top)) {
          outside.push_back(i);
          rest |= cs_[i].members;
        }
      }
      auto left = solve(inside, top);
      if (!left) {
        trace.push_back(names_of(cs_, idx) + ": characters inside " + cs_[*c].name +
                        " are not galled-compatible");
        return std::nullopt;
      }
      std::optional<Fragment> right;
      if (outside.empty()) {
        ++calls;  // the empty subproblem
      } else {
        right = solve(outside, rest);
        if (!right) {
          trace.push_back(names_of(cs_, idx) + ": characters disjoint from " + cs_[*c].name +
                          " are not galled-compatible");
          return std::nullopt;
        }
      }
      if (top == taxa) return left;
      Fragment f;
      f.root = f.add();
      const NodeId l = f.absorb(*left);
      f.children[f.root].push_back(l);
      if (right) {
        const NodeId r = f.absorb(*right);
        f.children[f.root].push_back(r);
      }
      for (TaxonId t : members(taxa - top - rest)) {
        auto leaf = f.add(t);
        f.children[f.root].push_back(leaf);
      }
      return f;
    }

    auto [a, b] = maximal_incompatible_pair(cs_, idx);
    const TaxonSet& sa = cs_[a].members;
    const TaxonSet& sb = cs_[b].members;
    auto first = attempt(idx, taxa, sa - sb, sa & sb);
    if (auto* f = std::get_if<Fragment>(&first)) return std::move(*f);
    const std::string split_a = "split " + cs_[a].name + " by " + cs_[b].name;
    if (std::holds_alternative<TryNo>(first)) {
      trace.push_back(names_of(cs_, idx) + ": " + split_a + " leads to an incompatible subproblem");
      return std::nullopt;
    }
    auto second = attempt(idx, taxa, sb - sa, sb & sa);
    if (auto* f = std::get_if<Fragment>(&second)) return std::move(*f);
    const std::string split_b = "split " + cs_[b].name + " by " + cs_[a].name;
    std::string line = names_of(cs_, idx) + ": " + split_a + " invalid (" +
                       std::get<InvalidPartition>(first).reason + "); " + split_b;
    if (auto* bad = std::get_if<InvalidPartition>(&second))
      line += " invalid (" + bad->reason + ")";
    else
      line += " leads to an incompatible subproblem";
    trace.push_back(std::move(line));
    return std::nullopt;
  }

  Attempt attempt(const Indices& idx, const TaxonSet& taxa, const TaxonSet& a1,
                  const TaxonSet& a2, std::optional<Tree>* forced_tree = nullptr) {
    const TaxonTable& table = cs_.taxa();
    auto chain = chain_for(cs_, idx, a1, a2);
    if (!chain)
      return InvalidPartition{"characters meeting " + table.format(a1) + " and " +
                              table.format(a2) + " form no chain"};
    ForcedSet forced = forced_for(cs_, idx, *chain);
    auto tree = tree_from_clades(cs_.taxa_ptr(), forced.clades, taxa);
    if (!tree) return InvalidPartition{"forced clades overlap"};
    if (forced_tree) *forced_tree = *tree;

    std::vector<char> is_forced(cs_.size(), 0);
    for (std::size_t i : forced.characters) is_forced[i] = 1;
    std::map<NodeId, Indices> groups;
    for (std::size_t i : idx) {
      if (is_forced[i] || cs_[i].members.count() == 1) continue;
      const auto taxa_of = members(cs_[i].members);
      const NodeId parent = tree->parent(tree->leaf_of(taxa_of.front()));
      for (TaxonId t : taxa_of)
        if (tree->parent(tree->leaf_of(t)) != parent)
          return InvalidPartition{"character " + cs_[i].name +
                                  " spans leaves with different parents"};
      groups[parent].push_back(i);
    }

    Fragment f = Fragment::of(*tree);
    f.transfers.emplace_back(node_with_clade(*tree, chain->bottom),
                             node_with_clade(*tree, chain->stable));
    for (const auto& [v, group] : groups) {
      TaxonSet span = table.empty_set();
      for (std::size_t i : group) span |= cs_[i].members;
      auto sub = solve(group, span);
      if (!sub) return TryNo{};
      auto& kids = f.children[v];
      kids.erase(std::remove_if(kids.begin(), kids.end(),
                                [&](std::uint32_t k) {
                                  return f.taxon[k] && span.test(*f.taxon[k]);
                                }),
                 kids.end());
      const std::uint32_t r = f.absorb(*sub);
      if (f.children[v].empty())
        f.children[v] = f.children[r];  // the subproblem covers all of v
      else
        f.children[v].push_back(r);
    }
    return f;
  }

  std::size_t calls = 0;
  std::vector<std::string> trace;

 private:
  const CharacterSet& cs_;
};

void check_taxa(const CharacterSet& cs, const TaxonSet& taxa) {
  if (taxa.size() != cs.taxa().size())
    throw InputError("taxon set is over a different taxon table");
  if (taxa.none()) throw InputError("no taxa");
  for (const auto& c : cs)
    if (!c.members.is_subset_of(taxa))
      throw InputError("character '" + c.name + "' has taxa outside the taxon set: " +
                       cs.taxa().format(c.members - taxa));
}

}  // namespace

bool incompatible(const TaxonSet& a, const TaxonSet& b) {
  return a.intersects(b) && !a.is_subset_of(b) && !b.is_subset_of(a);
}

std::optional<std::size_t> find_maximal_compatible(const CharacterSet& cs) {
  return maximal_compatible(cs, all_indices(cs));
}

std::pair<std::size_t, std::size_t> find_maximal_incompatible_pair(const CharacterSet& cs) {
  return maximal_incompatible_pair(cs, all_indices(cs));
}

std::optional<ChainInfo> build_chain(const CharacterSet& cs, const TaxonSet& a1,
                                     const TaxonSet& a2) {
  return chain_for(cs, all_indices(cs), a1, a2);
}

ForcedSet forced_sets(const CharacterSet& cs, const ChainInfo& chain) {
  return forced_for(cs, all_indices(cs), chain);
}

std::optional<Tree> tree_from_clades(TaxonTablePtr table, const std::vector<TaxonSet>& clades,
                                     const TaxonSet& taxa) {
  const auto leaves = members(taxa);
  if (leaves.empty()) throw InputError("tree without taxa");
  if (leaves.size() == 1) {
    TreeBuilder b(table);
    b.add_node(leaves.front());
    return std::move(b).build();
  }
  std::vector<TaxonSet> kept;
  for (const auto& c : clades) {
    if (!c.is_subset_of(taxa)) return std::nullopt;
    if (c.count() < 2 || c == taxa) continue;
    if (std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(c);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const TaxonSet& a, const TaxonSet& b) { return a.count() > b.count(); });

  // Clade hierarchy: node 0 is the root; leaves are added afterwards.
  struct Node {
    TaxonSet clade;
    std::optional<TaxonId> taxon;
    std::vector<std::size_t> kids;
  };
  std::vector<Node> nodes{{taxa, std::nullopt, {}}};
  auto deepest_containing = [&](const TaxonSet& s) -> std::optional<std::size_t> {
    std::size_t cur = 0;
    while (true) {
      bool descended = false;
      for (std::size_t k : nodes[cur].kids) {
        if (!nodes[k].clade.intersects(s)) continue;
        if (!s.is_subset_of(nodes[k].clade)) return std::nullopt;
        cur = k;
        descended = true;
        break;
      }
      if (!descended) return cur;
    }
  };
  for (auto& c : kept) {
    auto parent = deepest_containing(c);
    if (!parent) return std::nullopt;
    nodes.push_back({std::move(c), std::nullopt, {}});
    nodes[*parent].kids.push_back(nodes.size() - 1);
  }
  const std::size_t clade_nodes = nodes.size();
  for (TaxonId t : leaves) {
    TaxonSet single(taxa.size());
    single.set(t);
    std::size_t parent = *deepest_containing(single);
    nodes.push_back({std::move(single), t, {}});
    nodes[parent].kids.push_back(nodes.size() - 1);
  }
  for (std::size_t v = 0; v < clade_nodes; ++v) {
    std::sort(nodes[v].kids.begin(), nodes[v].kids.end(), [&](std::size_t a, std::size_t b) {
      return nodes[a].clade.find_first() < nodes[b].clade.find_first();
    });
  }

  TreeBuilder b(table);
  std::vector<std::pair<std::size_t, NodeId>> stack{{0, kNoNode}};
  while (!stack.empty()) {
    auto [v, parent] = stack.back();
    stack.pop_back();
    const NodeId id = b.add_node(nodes[v].taxon);
    if (parent != kNoNode) b.add_edge(parent, id);
    for (auto it = nodes[v].kids.rbegin(); it != nodes[v].kids.rend(); ++it)
      stack.emplace_back(*it, id);
  }
  return std::move(b).build();
}

TryResult try_partition(const CharacterSet& cs, const TaxonSet& taxa, const TaxonSet& a1,
                        const TaxonSet& a2) {
  check_taxa(cs, taxa);
  Solver solver(cs);
  std::optional<Tree> tree;
  auto result = solver.attempt(all_indices(cs), taxa, a1, a2, &tree);
  if (std::holds_alternative<Fragment>(result)) return TryYes{std::move(*tree)};
  if (auto* bad = std::get_if<InvalidPartition>(&result)) return std::move(*bad);
  return TryNo{};
}

CompatOutcome galled_compatible(const CharacterSet& cs, const TaxonSet& taxa, unsigned jobs) {
  check_taxa(cs, taxa);
  Solver solver(cs);
  auto fragment = solver.solve(all_indices(cs), taxa);
  CompatOutcome out;
  out.recursion_nodes = solver.calls;
  assert(out.recursion_nodes <= 3 * std::max<std::size_t>(1, cs.size()));
  if (!fragment) {
    out.trace.assign(solver.trace.rbegin(), solver.trace.rend());
    return out;
  }
  LgtNetwork network = materialize(*fragment, cs.taxa_ptr());
  if (!is_galled(network)) throw std::logic_error("reconstructed network is not galled");
  Explanation ex = explains(network, cs, jobs);
  if (!ex.all()) throw std::logic_error("reconstructed network does not explain every character");
  out.compatible = true;
  out.tree = suppress_subdivision_nodes(LgtNetwork(network.support())).support();
  out.network = std::move(network);
  out.origins = std::move(ex.origins);
  return out;
}

std::optional<std::pair<Tree, LgtNetwork>> reconstruct_network(const CharacterSet& cs,
                                                               const TaxonSet& taxa) {
  auto out = galled_compatible(cs, taxa);
  if (!out.compatible) return std::nullopt;
  return std::make_pair(std::move(*out.tree), std::move(*out.network));
}

}  // namespace galled
