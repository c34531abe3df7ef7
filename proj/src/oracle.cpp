#include "galled/oracle.hpp"

#include <bit>
#include <stdexcept>
#include <unordered_map>

#include "galled/errors.hpp"
#include "galled/ptn.hpp"

namespace galled {

namespace {

// Tree shapes shared through a pool; leaves carry a taxon.
struct Shape {
  std::optional<TaxonId> leaf;
  std::vector<std::uint32_t> kids;
};

Tree build_shape(const TaxonTablePtr& table, const std::vector<Shape>& pool, std::uint32_t top) {
  TreeBuilder b(table);
  std::vector<std::pair<std::uint32_t, NodeId>> stack{{top, kNoNode}};
  while (!stack.empty()) {
    auto [s, parent] = stack.back();
    stack.pop_back();
    const NodeId id = b.add_node(pool[s].leaf);
    if (parent != kNoNode) b.add_edge(parent, id);
    const auto& kids = pool[s].kids;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, id);
  }
  return std::move(b).build();
}

class ShapeEnumerator {
 public:
  explicit ShapeEnumerator(std::vector<TaxonId> taxa) : taxa_(std::move(taxa)) {}

  const std::vector<std::uint32_t>& shapes(std::uint32_t mask) {
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;
    std::vector<std::uint32_t> out;
    if (std::has_single_bit(mask)) {
      pool.push_back({taxa_[std::countr_zero(mask)], {}});
      out.push_back(static_cast<std::uint32_t>(pool.size() - 1));
    } else {
      std::vector<std::uint32_t> blocks;
      for_each_partition(mask, blocks, [&](const std::vector<std::uint32_t>& parts) {
        if (parts.size() < 2) return;
        std::vector<std::uint32_t> chosen;
        combine(parts, 0, chosen, out);
      });
    }
    return memo_.emplace(mask, std::move(out)).first->second;
  }

  std::vector<Shape> pool;

 private:
  template <typename F>
  void for_each_partition(std::uint32_t mask, std::vector<std::uint32_t>& blocks, F&& f) {
    if (mask == 0) {
      f(blocks);
      return;
    }
    const std::uint32_t low = mask & (~mask + 1);
    const std::uint32_t rest = mask ^ low;
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      blocks.push_back(low | sub);
      for_each_partition(mask ^ (low | sub), blocks, f);
      blocks.pop_back();
      if (sub == 0) break;
    }
  }

  void combine(const std::vector<std::uint32_t>& parts, std::size_t k,
               std::vector<std::uint32_t>& chosen, std::vector<std::uint32_t>& out) {
    if (k == parts.size()) {
      pool.push_back({std::nullopt, chosen});
      out.push_back(static_cast<std::uint32_t>(pool.size() - 1));
      return;
    }
    // Copy: recursion may grow the memo and pool.
    const std::vector<std::uint32_t> options = shapes(parts[k]);
    for (std::uint32_t s : options) {
      chosen.push_back(s);
      combine(parts, k + 1, chosen, out);
      chosen.pop_back();
    }
  }

  std::vector<TaxonId> taxa_;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> memo_;
};

using Mask = std::uint64_t;

Mask bit(NodeId v) { return Mask{1} << v; }

// Transfer-set search over the subdivision nodes of a tree.
class TransferSearch {
 public:
  TransferSearch(Tree tree, bool matching) : tree_(std::move(tree)), matching_(matching) {
    if (tree_.size() > 64) throw InputError("oracle: tree too large");
    std::vector<NodeId> slots;
    for (NodeId v = 0; v < tree_.size(); ++v)
      if (tree_.is_subdivision(v)) slots.push_back(v);
    for (NodeId a : slots) {
      for (NodeId b : slots) {
        if (a == b || tree_.comparable(a, b)) continue;
        Mask cycle = 0;
        const NodeId top = tree_.lca(a, b);
        for (NodeId v = a; v != top; v = tree_.parent(v)) cycle |= bit(v);
        for (NodeId v = b; v != top; v = tree_.parent(v)) cycle |= bit(v);
        cycle |= bit(top);
        pairs_.push_back({{a, b}, cycle});
      }
    }
  }

  const Tree& tree() const { return tree_; }

  // Calls `visit` on every galled transfer set with at most `k` edges until it
  // returns true. Returns whether it did.
  bool search(std::size_t k, const std::function<bool(const std::vector<TransferEdge>&)>& visit) {
    std::vector<TransferEdge> chosen;
    return dfs(0, k, 0, 0, chosen, visit);
  }

 private:
  bool dfs(std::size_t start, std::size_t k, Mask used, Mask cycles,
           std::vector<TransferEdge>& chosen,
           const std::function<bool(const std::vector<TransferEdge>&)>& visit) {
    if (visit(chosen)) return true;
    if (chosen.size() == k) return false;
    for (std::size_t i = start; i < pairs_.size(); ++i) {
      const auto& [e, cycle] = pairs_[i];
      const Mask ends = bit(e.donor) | bit(e.recipient);
      if (matching_ && (used & ends)) continue;
      // Cycles sharing a node can never be separated by more transfers.
      if (cycles & cycle) continue;
      chosen.push_back(e);
      if (dfs(i + 1, k, used | ends, cycles | cycle, chosen, visit)) return true;
      chosen.pop_back();
    }
    return false;
  }

  Tree tree_;
  bool matching_;
  std::vector<std::pair<TransferEdge, Mask>> pairs_;
};

// Origin test on bitmasks, used for every candidate transfer set.
class FastExplainer {
 public:
  FastExplainer(const Tree& t, const CharacterSet& cs) : t_(t) {
    const std::size_t n = t.size();
    for (const auto& c : cs) {
      Mask forbidden = 0, leaves = 0;
      for (NodeId v = 0; v < n; ++v) {
        if (!t.clade_leaves(v).is_subset_of(c.members)) forbidden |= bit(v);
        else if (t.is_leaf(v)) leaves |= bit(v);
      }
      chars_.push_back({forbidden, leaves});
    }
    reach_.resize(n);
    out_.resize(n);
  }

  bool explains(const std::vector<TransferEdge>& transfers) {
    for (auto& o : out_) o.clear();
    for (const auto& e : transfers) out_[e.donor].push_back(e.recipient);
    for (const auto& [forbidden, leaves] : chars_)
      if (!has_origin(forbidden, leaves)) return false;
    return true;
  }

 private:
  bool has_origin(Mask forbidden, Mask leaves) {
    for (NodeId v = 0; v < t_.size(); ++v) reach_[v] = bit(v);
    bool changed = true;
    while (changed) {
      changed = false;
      for (NodeId v : t_.postorder()) {
        if (forbidden & bit(v)) continue;
        Mask r = reach_[v];
        for (NodeId w : t_.children(v))
          if (!(forbidden & bit(w))) r |= reach_[w];
        for (NodeId w : out_[v])
          if (!(forbidden & bit(w))) r |= reach_[w];
        if (r != reach_[v]) {
          reach_[v] = r;
          changed = true;
        }
      }
    }
    for (NodeId v = 0; v < t_.size(); ++v)
      if (!(forbidden & bit(v)) && (reach_[v] & leaves) == leaves) return true;
    return false;
  }

  const Tree& t_;
  std::vector<std::pair<Mask, Mask>> chars_;
  std::vector<Mask> reach_;
  std::vector<std::vector<NodeId>> out_;
};

void require_plain_tree(const Tree& t) {
  if (t.has_subdivision_nodes()) throw InputError("oracle: tree has subdivision nodes");
}

}  // namespace

void enumerate_trees(const TaxonTablePtr& table, const TaxonSet& taxa,
                     const std::function<void(const Tree&)>& visit) {
  const auto ids = members(taxa);
  if (ids.empty()) throw InputError("oracle: no taxa");
  if (ids.size() > 7) throw InputError("oracle: tree enumeration is limited to 7 taxa");
  ShapeEnumerator shapes(ids);
  const std::uint32_t all = (1u << ids.size()) - 1;
  const std::vector<std::uint32_t> tops = shapes.shapes(all);
  for (std::uint32_t s : tops) visit(build_shape(table, shapes.pool, s));
}

std::vector<Tree> all_trees(const TaxonTablePtr& table, const TaxonSet& taxa) {
  std::vector<Tree> out;
  enumerate_trees(table, taxa, [&](const Tree& t) { out.push_back(t); });
  return out;
}

OracleResult brute_force_completable(const Tree& t, const CharacterSet& cs, OracleOptions options) {
  require_plain_tree(t);
  require_characters_within(cs, t.taxa(), t.leaf_taxa());
  const std::size_t limit = options.widen ? 6 : 12;
  if (t.edge_count() > limit)
    throw InputError("oracle: tree has " + std::to_string(t.edge_count()) +
                     " edges, limit is " + std::to_string(limit));
  Tree work = subdivide_all_edges(t).tree;
  if (options.widen) work = subdivide_all_edges(work).tree;
  TransferSearch search(std::move(work), !options.widen);
  FastExplainer fast(search.tree(), cs);
  OracleResult result;
  std::vector<TransferEdge> found;
  result.found = search.search(cs.size(), [&](const std::vector<TransferEdge>& transfers) {
    ++result.explored;
    if (!fast.explains(transfers)) return false;
    found = transfers;
    return true;
  });
  if (result.found) {
    LgtNetwork witness(search.tree(), found);
    if (!is_galled(witness) || !explains(witness, cs).all())
      throw std::logic_error("oracle witness fails the direct galled/explains check");
    result.witness = std::move(witness);
  }
  return result;
}

CompatOracleResult brute_force_compatible(const CharacterSet& cs, const TaxonSet& taxa) {
  if (taxa.size() != cs.taxa().size()) throw InputError("oracle: taxa over another table");
  if (taxa.count() > 5) throw InputError("oracle: compatibility search is limited to 5 taxa");
  if (cs.size() > 4) throw InputError("oracle: compatibility search is limited to 4 characters");
  for (const auto& c : cs)
    if (!c.members.is_subset_of(taxa))
      throw InputError("oracle: character '" + c.name + "' leaves the taxon set");
  CompatOracleResult result;
  for (Tree& tree : all_trees(cs.taxa_ptr(), taxa)) {
    auto r = brute_force_completable(tree, cs);
    if (r.found) {
      result.found = true;
      result.tree = std::move(tree);
      result.witness = std::move(r.witness);
      break;
    }
  }
  return result;
}

void enumerate_galled_networks(const Tree& t, std::size_t k,
                               const std::function<void(const LgtNetwork&)>& visit) {
  require_plain_tree(t);
  if (t.edge_count() > 12) throw InputError("oracle: tree has more than 12 edges");
  TransferSearch search(subdivide_all_edges(t).tree, true);
  search.search(k, [&](const std::vector<TransferEdge>& transfers) {
    visit(LgtNetwork(search.tree(), transfers));
    return false;
  });
}

Tree random_tree(const TaxonTablePtr& table, const TaxonSet& taxa, std::mt19937_64& rng) {
  const auto ids = members(taxa);
  if (ids.empty()) throw InputError("random tree without taxa");
  std::vector<Shape> pool;
  std::vector<std::uint32_t> open;
  for (TaxonId t : ids) {
    pool.push_back({t, {}});
    open.push_back(static_cast<std::uint32_t>(pool.size() - 1));
  }
  std::shuffle(open.begin(), open.end(), rng);
  while (open.size() > 1) {
    std::size_t take = 2;
    if (open.size() >= 3 && std::uniform_int_distribution<int>(0, 3)(rng) == 0) take = 3;
    Shape joined;
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
      const std::size_t at = pick(rng);
      joined.kids.push_back(open[at]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(at));
    }
    pool.push_back(std::move(joined));
    open.push_back(static_cast<std::uint32_t>(pool.size() - 1));
  }
  return build_shape(table, pool, open.front());
}

CharacterSet random_characters(const Tree& t, std::size_t count, std::mt19937_64& rng) {
  CharacterSet cs(t.taxa_ptr());
  const auto leaves = members(t.leaf_taxa());
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(t.size() - 1));
  std::bernoulli_distribution coin(0.5);
  for (std::size_t attempt = 0; attempt < count; ++attempt) {
    TaxonSet s = t.taxa().empty_set();
    if (coin(rng)) {
      while (s.none())
        for (TaxonId x : leaves)
          if (coin(rng)) s.set(x);
    } else {
      s |= t.clade_leaves(node(rng));
      if (coin(rng)) s |= t.clade_leaves(node(rng));
    }
    cs.add(Character{"c" + std::to_string(attempt + 1), std::move(s)});
  }
  return cs;
}

}  // namespace galled
