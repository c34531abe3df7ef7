// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Fixture paths come from GALLED_FIXTURES.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "galled/compatibility.hpp"
#include "galled/completion.hpp"
#include "galled/io.hpp"
#include "galled/oracle.hpp"
#include "galled/ptn.hpp"
#include "support/properties.hpp"

namespace {

using namespace galled;
using galled::testing::read_fixture;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
};

CharacterSet load_sets(const std::string& name, const TaxonTablePtr& table) {
  return parse_character_matrix(read_fixture(name), MatrixFormat::sets).characters.rebased(table);
}

std::set<std::string> clade_labels(const Tree& t, const std::vector<NodeId>& nodes) {
  std::set<std::string> out;
  for (NodeId v : nodes) out.insert(t.taxa().format(t.clade_leaves(v)));
  return out;
}

std::string fmt(const Tree& t, const std::vector<std::string>& labels) {
  return t.taxa().format(t.taxa().set_of(labels));
}

// First appearances on the four-character fixture.
Verdict first_appearance_sets() {
  Verdict v;
  const auto start = Clock::now();
  const Tree t = parse_newick(read_fixture("first_appearances.nwk"));
  const CharacterSet cs = load_sets("first_appearances.sets", t.taxa_ptr());
  const auto rows = fa_statistics(t, cs);
  const std::vector<std::set<std::string>> expected = {
      {fmt(t, {"s1", "s2"}), fmt(t, {"s4", "s5"})},
      {fmt(t, {"s4", "s5"}), fmt(t, {"s2"})},
      {fmt(t, {"s4", "s5", "s7"})},
      {fmt(t, {"s1", "s2", "s3"})},
  };
  v.require(rows.size() == expected.size(), "wrong number of rows");
  for (std::size_t i = 0; i < rows.size() && i < expected.size(); ++i) {
    v.require(clade_labels(t, rows[i].nodes) == expected[i], "FA set of " + rows[i].character);
    v.require(rows[i].nodes == galled::testing::naive_first_appearances(t, cs[i].members),
              "FA order differs from the direct scan for " + rows[i].character);
  }
  const double s = seconds_since(start);
  v.require(s < 1.0, "took " + std::to_string(s) + " s");
  return v;
}

// Completion of the five-taxon fixture plus verification of the two hand-built networks.
Verdict completion_example() {
  Verdict v;
  const auto start = Clock::now();
  const Tree t = parse_newick(read_fixture("completion.nwk"));
  const CharacterSet cs = load_sets("completion.sets", t.taxa_ptr());
  const auto outcome = galled_completion(t, cs);
  v.require(outcome.completable(), "completion rejected");
  if (const auto* c = std::get_if<Completable>(&outcome.verdict)) {
    v.require(is_galled(c->network), "witness not galled");
    v.require(galled::testing::naive_is_galled(c->network), "witness fails the cycle scan");
    v.require(explains(c->network, cs).all(), "witness does not explain");
  }
  for (const char* name : {"completion_nongalled.net", "completion_galled.net"}) {
    const LgtNetwork n = parse_network(read_fixture(name));
    const CharacterSet rebased = cs.rebased(n.support().taxa_ptr());
    v.require(explains(n, rebased).all(), std::string(name) + " not all-explained");
  }
  const LgtNetwork bad = parse_network(read_fixture("completion_nongalled.net"));
  v.require(!is_galled(bad), "two-transfer network reported galled");
  const LgtNetwork good = parse_network(read_fixture("completion_galled.net"));
  v.require(is_galled(good), "one-transfer network reported not galled");
  const double s = seconds_since(start);
  v.require(s < 1.0, "took " + std::to_string(s) + " s");
  return v;
}

// Transfers of the redundancy-free network on the seven-character fixture.
Verdict redundancy_free_edges() {
  Verdict v;
  const auto start = Clock::now();
  const Tree t = parse_newick(read_fixture("redundancy_free.nwk"));
  const CharacterSet cs = load_sets("redundancy_free.sets", t.taxa_ptr());
  const auto idx = fa_neighbor_index(t, cs);
  const auto* index = std::get_if<FaNeighborIndex>(&idx);
  v.require(index != nullptr, "a character has more than two first appearances");
  if (!index) return v;
  const auto rf = redundancy_free_network(t, *index);
  const auto* net = std::get_if<RedundancyFree>(&rf);
  v.require(net != nullptr, "incomparable FA neighbours reported");
  if (!net) return v;
  auto node_with = [&](const std::vector<std::string>& labels) {
    const TaxonSet s = t.taxa().set_of(labels);
    for (NodeId x = 0; x < t.size(); ++x)
      if (t.clade_leaves(x) == s) return x;
    return kNoNode;
  };
  const NodeId z = node_with({"z"});
  const NodeId y = node_with({"y1", "y2"});
  const NodeId g1 = node_with({"g1"});
  const NodeId g3 = node_with({"g3"});
  const auto& transfers = net->network.transfers();
  const TransferEdge zy{net->above[z], net->above[y]};
  v.require(std::count(transfers.begin(), transfers.end(), zy) == 1,
            "missing transfer above z -> above y1,y2");
  std::size_t pair_edges = 0;
  for (const auto& e : transfers) {
    const std::set<NodeId> ends{e.donor, e.recipient};
    if (ends == std::set<NodeId>{net->above[g1], net->above[g3]}) ++pair_edges;
  }
  v.require(pair_edges == 1, "g1/g3 pair has " + std::to_string(pair_edges) + " edges");
  v.require(transfers.size() == 2, "expected exactly two transfers");
  const double s = seconds_since(start);
  v.require(s < 1.0, "took " + std::to_string(s) + " s");
  return v;
}

// Reconstruction from the thirteen-taxon chain fixture.
Verdict chain_reconstruction() {
  Verdict v;
  const auto start = Clock::now();
  const auto m = parse_character_matrix(read_fixture("chain.sets"), MatrixFormat::sets);
  const CharacterSet& cs = m.characters;
  const auto out = galled_compatible(cs);
  v.require(out.compatible, "reported not compatible");
  v.require(out.recursion_nodes <= 3 * std::max<std::size_t>(1, cs.size()),
            "recursion tree too large");
  if (!out.compatible || !out.tree || !out.network) return v;
  const Tree& t = *out.tree;
  const TaxonTable& tx = *m.taxa;
  const std::vector<std::vector<std::string>> clades = {
      {"d", "e"}, {"c", "d", "e"}, {"a", "b", "c", "d", "e"}, {"f", "g", "h"},
      {"f", "g", "h", "l"}, {"a", "b", "c", "d", "e", "m"}};
  for (const auto& c : clades)
    v.require(galled::testing::is_clade(t, tx.set_of(c)), "missing clade " + tx.format(tx.set_of(c)));
  v.require(is_galled(*out.network), "witness not galled");
  v.require(explains(*out.network, cs).all(), "witness does not explain");
  const double s = seconds_since(start);
  v.require(s < 1.0, "took " + std::to_string(s) + " s");
  return v;
}

struct PropertyTally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string first;

  void check(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    if (violations++ == 0) first = what;
  }
};

TaxonTablePtr small_table(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
  return make_taxa(labels);
}

// Completion verdicts against exhaustive search over every small tree. Also
// feeds the per-verdict properties.
Verdict completion_oracle(PropertyTally& props, std::size_t& instances, std::size_t& yes) {
  Verdict v;
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<std::size_t> count(1, 4);
  std::size_t disagreements = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    const TaxonTablePtr table = small_table(n);
    enumerate_trees(table, table->full_set(), [&](const Tree& t) {
      for (int rep = 0; rep < 200; ++rep) {
        const CharacterSet cs = random_characters(t, count(rng), rng);
        const auto fast = galled_completion(t, cs);
        const bool brute = brute_force_completable(t, cs).found;
        ++instances;
        if (fast.completable() != brute) {
          if (disagreements++ == 0)
            v.detail = "first disagreement on " + serialize_newick(t) + " with " +
                       std::to_string(cs.size()) + " characters";
        }
        if (!fast.completable()) continue;
        ++yes;
        const auto& c = std::get<Completable>(fast.verdict);
        for (const auto& ch : cs)
          props.check(galled::testing::naive_first_appearances(t, ch.members).size() <= 2,
                      "more than two first appearances in a completable instance");
        const auto idx = std::get<FaNeighborIndex>(fa_neighbor_index(t, cs));
        const auto rf = redundancy_free_network(t, idx);
        props.check(std::holds_alternative<RedundancyFree>(rf),
                    "redundancy-free construction failed on a completable instance");
        if (const auto* net = std::get_if<RedundancyFree>(&rf))
          props.check(galled::testing::one_transfer_per_node(net->network),
                      "redundancy-free node with two transfers");
        props.check(galled::testing::shared_fa_partners_comparable(t, cs),
                    "characters sharing a first appearance have incomparable partners");
        props.check(galled::testing::two_transfer_descendants_property(c.network),
                    "transfer-descendant property fails on a completion witness");
        props.check(galled::testing::single_transfer_reach_property(c.network),
                    "reach property fails on a completion witness");
      }
    });
  }
  v.pass = disagreements == 0;
  if (!v.pass) v.detail = std::to_string(disagreements) + " disagreements; " + v.detail;
  return v;
}

// Random characters over four or five taxa against exhaustive tree search.
Verdict compatibility_oracle(PropertyTally& props, std::size_t& recursion_violations,
                             std::size_t& yes) {
  Verdict v;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> taxa_count(4, 5);
  std::uniform_int_distribution<std::size_t> count(1, 4);
  std::bernoulli_distribution coin(0.5);
  std::size_t disagreements = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const TaxonTablePtr table = small_table(taxa_count(rng));
    CharacterSet cs(table);
    const std::size_t want = count(rng);
    if (coin(rng)) {
      const Tree t = random_tree(table, table->full_set(), rng);
      cs = random_characters(t, want, rng);
    } else {
      for (std::size_t i = 0; i < want; ++i) {
        TaxonSet s = table->empty_set();
        while (s.none())
          for (TaxonId x = 0; x < table->size(); ++x)
            if (coin(rng)) s.set(x);
        cs.add(Character{"r" + std::to_string(i + 1), s});
      }
    }
    const auto fast = galled_compatible(cs);
    if (fast.recursion_nodes > 3 * std::max<std::size_t>(1, cs.size())) ++recursion_violations;
    const auto brute = brute_force_compatible(cs, table->full_set());
    if (fast.compatible != brute.found) {
      if (disagreements++ == 0)
        v.detail = "first disagreement on " + format_matrix_sets(cs);
      continue;
    }
    if (fast.compatible) {
      ++yes;
      v.require(fast.network && is_galled(*fast.network) && explains(*fast.network, cs).all(),
                "yes-witness fails is_galled/explains");
      props.check(galled::testing::incompatible_pairs_split(*fast.tree, cs),
                  "incompatible pair without the clade split in a witness tree");
    }
  }
  if (disagreements > 0) {
    v.pass = false;
    v.detail = std::to_string(disagreements) + " disagreements; " + v.detail;
  }
  return v;
}

// Structural properties on every enumerated galled network.
void enumerated_network_properties(PropertyTally& props) {
  for (std::size_t n = 2; n <= 4; ++n) {
    const TaxonTablePtr table = small_table(n);
    enumerate_trees(table, table->full_set(), [&](const Tree& t) {
      enumerate_galled_networks(t, 3, [&](const LgtNetwork& net) {
        props.check(is_galled(net), "enumerated network fails is_galled");
        props.check(galled::testing::naive_is_galled(net), "enumerated network fails cycle scan");
        props.check(galled::testing::two_transfer_descendants_property(net),
                    "transfer-descendant property fails on " + serialize_newick(t));
        props.check(galled::testing::single_transfer_reach_property(net),
                    "reach property fails on " + serialize_newick(t));
      });
    });
  }
}

// Caterpillar-free random tree with many leaves; characters are distinct clades.
Verdict completion_scaling() {
  Verdict v;
  std::mt19937_64 rng(5);
  std::vector<std::string> labels;
  for (int i = 0; i < 2048; ++i) labels.push_back("x" + std::to_string(i));
  const TaxonTablePtr table = make_taxa(labels);
  const Tree t = random_tree(table, table->full_set(), rng);
  std::vector<NodeId> nodes(t.preorder().begin(), t.preorder().end());
  std::shuffle(nodes.begin(), nodes.end(), rng);
  std::ostringstream detail;
  double base = 0;
  for (std::size_t c : {10u, 100u, 1000u}) {
    CharacterSet cs(table);
    for (std::size_t i = 0; i < c; ++i)
      cs.add(Character{"k" + std::to_string(i), t.clade_leaves(nodes[i])});
    const auto out = galled_completion(t, cs);
    v.require(out.completable(), "clade characters rejected");
    const double per = static_cast<double>(out.work) / static_cast<double>(c);
    if (c == 10) base = per;
    detail << "ops(" << c << ")=" << out.work << ' ';
    v.require(per <= 3.0 * base, "ops per character at |C|=" + std::to_string(c) + " exceeds 3x");
  }
  if (v.pass) v.detail = detail.str();
  return v;
}

std::string random_label(std::mt19937_64& rng, std::size_t i) {
  static const std::string odd = " (),:;[]'_-.";
  std::string s = "t" + std::to_string(i);
  if (std::uniform_int_distribution<int>(0, 4)(rng) == 0)
    s += odd[std::uniform_int_distribution<std::size_t>(0, odd.size() - 1)(rng)];
  return s;
}

Verdict format_round_trips() {
  Verdict v;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> size(1, 40);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = size(rng);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(random_label(rng, i));
    const TaxonTablePtr table = make_taxa(labels);
    const Tree t = random_tree(table, table->full_set(), rng);
    const std::string text = serialize_newick(t);
    const Tree back = parse_newick(text);
    v.require(structurally_equal(t, back) && serialize_newick(back) == text,
              "newick round trip differs: " + text);

    const Tree sub = subdivide_all_edges(t).tree;
    std::vector<TransferEdge> transfers;
    std::vector<char> used(sub.size(), 0);
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(sub.size() - 1));
    for (int k = 0; k < 4; ++k) {
      const NodeId a = node(rng), b = node(rng);
      if (!sub.is_subdivision(a) || !sub.is_subdivision(b) || used[a] || used[b]) continue;
      if (sub.comparable(a, b)) continue;
      used[a] = used[b] = 1;
      transfers.push_back({a, b});
    }
    const LgtNetwork net(sub, transfers);
    std::vector<OriginLabel> origins;
    if (rep % 3 == 0) origins.push_back({"o" + std::to_string(rep), node(rng)});
    if (rep % 5 == 0) origins.push_back({"missing", std::nullopt});
    const std::string doc = export_network(net, origins, NetworkFormat::structured);
    const NetworkDocument parsed = parse_network_document(doc);
    v.require(structurally_equal(parsed.network.support(), net.support()) &&
                  parsed.network.transfers() == net.transfers() && parsed.origins == origins,
              "structured round trip differs");
    v.require(export_network(parsed.network, parsed.origins, NetworkFormat::structured) == doc,
              "structured re-export differs");
  }
  return v;
}

int failures = 0;

void line(int id, const std::string& name, const Verdict& v) {
  if (!v.pass) ++failures;
  std::cout << "criterion " << id << ' ' << (v.pass ? "PASS" : "FAIL") << ' ' << name;
  if (!v.detail.empty()) std::cout << " (" << v.detail << ')';
  std::cout << std::endl;
}

template <typename F>
Verdict guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return Verdict{false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  line(1, "first appearance sets", guarded(first_appearance_sets));
  line(2, "completion example and hand-built networks", guarded(completion_example));
  line(3, "redundancy-free transfers", guarded(redundancy_free_edges));
  line(4, "chain reconstruction", guarded(chain_reconstruction));

  PropertyTally props;
  std::size_t completion_instances = 0, completion_yes = 0;
  const auto t5 = Clock::now();
  Verdict c5 = guarded([&] { return completion_oracle(props, completion_instances, completion_yes); });
  if (c5.pass)
    c5.detail = std::to_string(completion_instances) + " instances, " +
                std::to_string(completion_yes) + " completable, " +
                std::to_string(static_cast<int>(seconds_since(t5))) + " s";
  line(5, "completion matches exhaustive search", c5);

  std::size_t recursion_violations = 0, compat_yes = 0;
  const auto t6 = Clock::now();
  Verdict c6 = guarded([&] { return compatibility_oracle(props, recursion_violations, compat_yes); });
  if (c6.pass)
    c6.detail = "500 instances, " + std::to_string(compat_yes) + " compatible, " + std::to_string(static_cast<int>(seconds_since(t6))) + " s";
  line(6, "compatibility matches exhaustive search", c6);

  Verdict c7 = guarded([&] {
    enumerated_network_properties(props);
    return Verdict{};
  });
  if (c7.pass) {
    c7.pass = props.violations == 0;
    c7.detail = std::to_string(props.checked) + " checks, " + std::to_string(props.violations) +
                " violations" + (props.first.empty() ? "" : "; first: " + props.first);
  }
  line(7, "structural properties", c7);

  Verdict c8 = guarded(completion_scaling);
  if (recursion_violations > 0)
    c8.require(false, std::to_string(recursion_violations) + " instances exceed the recursion bound");
  line(8, "operation-count scaling and recursion bound", c8);

  line(9, "format round trips", guarded(format_round_trips));
  return failures == 0 ? 0 : 1;
}
