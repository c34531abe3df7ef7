#include <gtest/gtest.h>

#include <random>

#include "galled/completion.hpp"
#include "galled/io.hpp"
#include "galled/oracle.hpp"
#include "galled/ptn.hpp"
#include "support/properties.hpp"

namespace galled {
namespace {

CharacterSet load_sets(const std::string& name, const TaxonTablePtr& table) {
  return parse_character_matrix(testing::read_fixture(name), MatrixFormat::sets)
      .characters.rebased(table);
}

NodeId node_with(const Tree& t, const std::vector<std::string>& labels) {
  const TaxonSet s = t.taxa().set_of(labels);
  for (NodeId v = 0; v < t.size(); ++v)
    if (t.clade_leaves(v) == s) return v;
  return kNoNode;
}

TEST(Completion, FixtureIsCompletableWithOneTransfer) {
  const Tree t = parse_newick(testing::read_fixture("completion.nwk"));
  const CharacterSet cs = load_sets("completion.sets", t.taxa_ptr());
  const auto out = galled_completion(t, cs);
  ASSERT_TRUE(out.completable());
  const auto& c = std::get<Completable>(out.verdict);
  EXPECT_EQ(c.network.transfers().size(), 1u);
  EXPECT_TRUE(is_galled(c.network));
  ASSERT_EQ(c.origins.size(), cs.size());
  for (const auto& o : c.origins) EXPECT_TRUE(o);
  // Compare with the hand-built galled network for the same instance.
  const LgtNetwork expected = parse_network(testing::read_fixture("completion_galled.net"));
  const Tree& st = c.network.support();
  const auto& e = c.network.transfers()[0];
  const Tree& et = expected.support();
  const auto& ee = expected.transfers()[0];
  EXPECT_EQ(st.taxa().format(st.clade_leaves(e.donor)), et.taxa().format(et.clade_leaves(ee.donor)));
  EXPECT_EQ(st.taxa().format(st.clade_leaves(e.recipient)),
            et.taxa().format(et.clade_leaves(ee.recipient)));
}

TEST(Completion, RedundancyFreeTransfers) {
  const Tree t = parse_newick(testing::read_fixture("redundancy_free.nwk"));
  const CharacterSet cs = load_sets("redundancy_free.sets", t.taxa_ptr());
  const auto idx = std::get<FaNeighborIndex>(fa_neighbor_index(t, cs));
  const auto rf = std::get<RedundancyFree>(redundancy_free_network(t, idx));
  const std::vector<TransferEdge> expected = {
      {rf.above[node_with(t, {"z"})], rf.above[node_with(t, {"y1", "y2"})]},
      {rf.above[node_with(t, {"g1"})], rf.above[node_with(t, {"g3"})]},
  };
  auto got = rf.network.transfers();
  std::sort(got.begin(), got.end());
  auto want = expected;
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
  EXPECT_TRUE(testing::one_transfer_per_node(rf.network));
}

TEST(Completion, FaNeighborsAreSymmetric) {
  const Tree t = parse_newick(testing::read_fixture("first_appearances.nwk"));
  const CharacterSet cs = load_sets("first_appearances.sets", t.taxa_ptr());
  const auto idx = std::get<FaNeighborIndex>(fa_neighbor_index(t, cs));
  for (NodeId v = 0; v < t.size(); ++v)
    for (const auto& nb : idx.neighbors[v]) {
      const auto& back = idx.neighbors[nb.node];
      EXPECT_TRUE(std::any_of(back.begin(), back.end(), [&](const FaNeighbor& x) {
        return x.node == v && x.character == nb.character;
      }));
    }
}

TEST(Completion, TooManyFirstAppearances) {
  const Tree t = parse_newick("((a,x),(b,y),(c,z));");
  CharacterSet cs(t.taxa_ptr());
  cs.add("ok", {"a", "b"});
  cs.add("bad", {"a", "b", "c"});
  const auto out = galled_completion(t, cs);
  const auto* r = std::get_if<TooManyFAs>(&out.verdict);
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->character, 1u);
  EXPECT_EQ(r->fas.size(), 3u);
  EXPECT_FALSE(brute_force_completable(t, cs).found);
}

TEST(Completion, IncomparableNeighbours) {
  const Tree t = parse_newick("(((a,x),(c,y)),(e,z));");
  CharacterSet cs(t.taxa_ptr());
  cs.add("ac", {"a", "c"});
  cs.add("ae", {"a", "e"});
  const auto out = galled_completion(t, cs);
  const auto* r = std::get_if<IncomparableFaNeighbors>(&out.verdict);
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->node, node_with(t, {"a"}));
  EXPECT_FALSE(t.comparable(r->first, r->second));
  EXPECT_FALSE(brute_force_completable(t, cs).found);
}

TEST(Completion, CrossingTransfersAreNotGalled) {
  const Tree t = parse_newick(testing::read_fixture("crossing.nwk"));
  const CharacterSet cs = load_sets("crossing.sets", t.taxa_ptr());
  const auto out = galled_completion(t, cs);
  const auto* r = std::get_if<NotGalled>(&out.verdict);
  ASSERT_NE(r, nullptr);
  EXPECT_NE(r->first, r->second);
  EXPECT_FALSE(is_galled(r->network));
  // Each reported transfer's cycle meets the other's.
  const auto a = transfer_cycle(r->network, r->first);
  const auto b = transfer_cycle(r->network, r->second);
  EXPECT_TRUE(std::any_of(a.begin(), a.end(), [&](NodeId v) {
    return std::find(b.begin(), b.end(), v) != b.end();
  }));
  EXPECT_FALSE(brute_force_completable(t, cs).found);
}

TEST(Completion, CladeCharactersNeedNoTransfers) {
  std::mt19937_64 rng(1);
  std::vector<std::string> labels;
  for (int i = 0; i < 100; ++i) labels.push_back("t" + std::to_string(i));
  const auto table = make_taxa(labels);
  const Tree t = random_tree(table, table->full_set(), rng);
  CharacterSet cs(table);
  for (NodeId v = 0; v < t.size(); ++v) cs.add(Character{"n" + std::to_string(v), t.clade_leaves(v)});
  const auto out = galled_completion(t, cs);
  ASSERT_TRUE(out.completable());
  EXPECT_TRUE(std::get<Completable>(out.verdict).network.transfers().empty());
}

TEST(Completion, ParallelMatchesSequential) {
  std::mt19937_64 rng(17);
  std::vector<std::string> labels;
  for (int i = 0; i < 30; ++i) labels.push_back("t" + std::to_string(i));
  const auto table = make_taxa(labels);
  for (int rep = 0; rep < 100; ++rep) {
    const Tree t = random_tree(table, table->full_set(), rng);
    const CharacterSet cs = random_characters(t, 8, rng);
    const auto a = galled_completion(t, cs, 1);
    const auto b = galled_completion(t, cs, 3);
    ASSERT_EQ(a.verdict.index(), b.verdict.index());
    if (a.completable())
      EXPECT_EQ(std::get<Completable>(a.verdict).network, std::get<Completable>(b.verdict).network);
  }
}

// Six-taxon trees lie beyond the acceptance sweep; sample them here.
TEST(Completion, AgreesWithExhaustiveSearchOnSixTaxa) {
  std::mt19937_64 rng(31);
  const auto table = make_taxa({"a", "b", "c", "d", "e", "f"});
  std::size_t yes = 0;
  for (int rep = 0; rep < 400; ++rep) {
    const Tree t = random_tree(table, table->full_set(), rng);
    const CharacterSet cs = random_characters(t, 1 + rep % 4, rng);
    const auto out = galled_completion(t, cs);
    ASSERT_EQ(out.completable(), brute_force_completable(t, cs).found)
        << serialize_newick(t) << '\n'
        << format_matrix_sets(cs);
    if (!out.completable()) continue;
    ++yes;
    const auto& c = std::get<Completable>(out.verdict);
    EXPECT_TRUE(testing::naive_is_galled(c.network));
    EXPECT_TRUE(testing::shared_fa_partners_comparable(t, cs));
    EXPECT_TRUE(testing::two_transfer_descendants_property(c.network));
    EXPECT_TRUE(testing::single_transfer_reach_property(c.network));
  }
  EXPECT_GT(yes, 50u);
  EXPECT_LT(yes, 350u);
}

}  // namespace
}  // namespace galled
