#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ceerlab/transversals.hpp"

using namespace ceerlab;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::SchemaError;
}

Bits bits_of(Nat word, Nat length) {
  Bits out(length);
  for (Nat k = 0; k < length; ++k) out[k] = (word >> k) & 1;
  return out;
}

FrozenCeer random_partition(std::mt19937_64& rng, Nat support, Nat max_labels) {
  std::vector<Nat> labels(support + 1);
  for (auto& l : labels) l = rng() % max_labels;
  return FrozenCeer::from_labels(labels);
}

std::set<std::string> as_strings(const std::vector<Bits>& nodes) {
  std::set<std::string> out;
  for (const auto& b : nodes) out.insert(bits_to_string(b));
  return out;
}

}  // namespace

TEST(PartialTransversal, Examples) {
  const FrozenCeer r = FrozenCeer::from_classes(6, {{1, 4, 5}});
  EXPECT_TRUE(is_partial_transversal({}, r, 0));
  for (Nat x = 0; x <= 6; ++x) EXPECT_TRUE(is_partial_transversal({x}, r, 0));
  EXPECT_FALSE(is_partial_transversal({1, 4, 5}, r, 0));
  EXPECT_TRUE(is_partial_transversal({0, 2, 3, 4, 6}, r, 0));
  EXPECT_TRUE(is_partial_transversal({0, 1, 2, 3, 4, 5, 6}, id_ceer(6), 0));
  EXPECT_EQ(kind_of([&] { is_partial_transversal({7}, r, 0); }), ErrorKind::SupportExceeded);
}

TEST(TrNode, Examples) {
  StagedCeer r(4);
  EXPECT_TRUE(tr_node(r, {}));
  r.next_stage();
  r.next_stage();
  r.collapse(0, 1);
  EXPECT_FALSE(tr_node(r, bits_from_string("11")));
  EXPECT_TRUE(tr_node(r, bits_from_string("1")));
  // At stage 1 the pair is not yet related.
  EXPECT_TRUE(tr_node(r.freeze(4, 1), bits_from_string("11")));
  for (Nat w = 0; w < 32; ++w) EXPECT_TRUE(tr_node(id_ceer(4), bits_of(w, 5)));
  EXPECT_EQ(kind_of([] { tr_node(id_ceer(2), bits_from_string("0000")); }), ErrorKind::SupportExceeded);
}

TEST(TrNode, MatchesTransversalDefinitionOnRandomCeers) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const FrozenCeer r = random_partition(rng, 11, 1 + rng() % 12);
    for (Nat len = 0; len <= 12; ++len) {
      for (Nat w = 0; w < (Nat{1} << len); ++w) {
        const Bits sigma = bits_of(w, len);
        ASSERT_EQ(tr_node(r, sigma), is_partial_transversal(selected(sigma), r, 0));
      }
    }
  }
}

TEST(TrNode, DownwardClosed) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 20; ++t) {
    StagedCeer r(12);
    for (Nat s = 1; s <= 12; ++s) {
      r.next_stage();
      if (rng() % 2) r.collapse(rng() % 13, rng() % 13);
    }
    const StrongArray blocks;
    for (Nat w = 0; w < (Nat{1} << 12); ++w) {
      const Bits sigma = bits_of(w, 12);
      const Bits parent(sigma.begin(), sigma.end() - 1);
      if (tr_node(r, sigma)) ASSERT_TRUE(tr_node(r, parent));
      if (pruned_node(r, blocks, sigma)) ASSERT_TRUE(pruned_node(r, blocks, parent));
    }
  }
}

TEST(StrongArray, Examples) {
  EXPECT_EQ(strong_array_block(0), FiniteSet{0});
  EXPECT_EQ(strong_array_block(1), (FiniteSet{1, 2, 3}));
  FiniteSet b2;
  for (Nat x = 4; x <= 12; ++x) b2.push_back(x);
  EXPECT_EQ(strong_array_block(2), b2);
}

TEST(StrongArray, AgainstIndependentRecursion) {
  // low(i+1) = high(i) + 1, high(i+1) = 3 * low(i+1); start {0}.
  Nat low = 0, high = 0;
  const StrongArray blocks;
  Nat previous_high = 0;
  for (Nat i = 0; i <= 20; ++i) {
    const Block b = blocks.block(i);
    EXPECT_EQ(b, (Block{low, high}));
    if (i > 0) EXPECT_GT(b.low, previous_high);
    previous_high = b.high;
    low = high + 1;
    high = 3 * low;
  }
  EXPECT_EQ(blocks.blocks_below(13).size(), 3u);
  EXPECT_EQ(blocks.blocks_below(12).size(), 2u);
}

TEST(PrunedNode, Examples) {
  const StrongArray blocks;
  EXPECT_FALSE(pruned_node(id_ceer(5), blocks, bits_from_string("00")));
  EXPECT_TRUE(pruned_node(id_ceer(5), blocks, bits_from_string("10")));
  EXPECT_FALSE(pruned_node(id_ceer(5), blocks, bits_from_string("1000")));
  EXPECT_TRUE(pruned_node(id_ceer(5), blocks, bits_from_string("1001")));
  // Block {1,2,3} is not wholly inside a string of length 3.
  EXPECT_TRUE(pruned_node(id_ceer(5), blocks, bits_from_string("100")));
}

TEST(PrunedNode, ImpliesTrNode) {
  std::mt19937_64 rng(3);
  const StrongArray blocks;
  for (int t = 0; t < 20; ++t) {
    const FrozenCeer r = random_partition(rng, 12, 1 + rng() % 8);
    for (Nat w = 0; w < (Nat{1} << 13); ++w) {
      const Bits sigma = bits_of(w, 13);
      if (pruned_node(r, blocks, sigma)) ASSERT_TRUE(tr_node(r, sigma));
    }
  }
}

TEST(PrunedNode, OneSingletonPerBlockIsANode) {
  // Three blocks below 13; pick one singleton in each, the rest related into one class.
  const FrozenCeer r = FrozenCeer::from_classes(12, {{1, 2, 5, 6, 7, 8, 9, 10, 11, 12}});
  const Bits sigma = bits_from_string("1001100000000");
  EXPECT_FALSE(tr_node(r, bits_from_string("0110")));
  EXPECT_TRUE(pruned_node(r, StrongArray{}, sigma));
}

TEST(Tree, Levels) {
  EXPECT_EQ(TransversalTree(id_ceer(5)).level(3).size(), 8u);
  const auto one = TransversalTree(id1_ceer(5)).level(3);
  EXPECT_EQ(as_strings(one), (std::set<std::string>{"000", "001", "010", "100"}));
  const auto ordered = TransversalTree(id1_ceer(5)).level(3);
  EXPECT_EQ(bits_to_string(ordered.front()), "000");
  EXPECT_EQ(bits_to_string(ordered.back()), "100");
  EXPECT_EQ(kind_of([] { TransversalTree(id_ceer(5)).level(4, 15); }), ErrorKind::LevelTooWide);
  EXPECT_EQ(kind_of([] { TransversalTree(id_ceer(5)).level(7); }), ErrorKind::SupportExceeded);
}

TEST(Tree, LevelsAreDownwardConsistentAndLeftmostIsFirst) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    const FrozenCeer r = random_partition(rng, 12, 1 + rng() % 6);
    for (bool pruned : {false, true}) {
      const TransversalTree tree(r, pruned);
      std::set<std::string> previous{""};
      std::optional<Bits> previous_left = Bits{};
      for (Nat d = 0; d <= 12; ++d) {
        const auto nodes = tree.level(d);
        for (const auto& n : nodes) {
          const Bits parent(n.begin(), n.end() - (d > 0 ? 1 : 0));
          ASSERT_TRUE(previous.count(bits_to_string(parent)));
        }
        const auto left = tree.leftmost(d);
        ASSERT_EQ(left.has_value(), !nodes.empty());
        if (left) {
          ASSERT_EQ(*left, nodes.front());
          ASSERT_TRUE(std::equal(previous_left->begin(), previous_left->end(), left->begin()) ||
                      !tree.extendible_to(*previous_left, d));
        }
        previous = as_strings(nodes);
        previous_left = left;
        if (!left) break;
      }
    }
  }
}

TEST(Tree, MoreCollapseOnlyShrinks) {
  std::mt19937_64 rng(64);
  for (int t = 0; t < 20; ++t) {
    StagedCeer r(10);
    const FrozenCeer before = r.freeze(10, 0);
    r.collapse(rng() % 11, rng() % 11);
    r.collapse(rng() % 11, rng() % 11);
    const FrozenCeer after = r.freeze(10, 0);
    for (bool pruned : {false, true}) {
      const auto wide = as_strings(TransversalTree(before, pruned).level(10));
      for (const auto& n : as_strings(TransversalTree(after, pruned).level(10))) EXPECT_TRUE(wide.count(n));
    }
  }
}

TEST(Tree, StagedSnapshotsFollowStringLength) {
  StagedCeer r(6);
  r.next_stage();
  r.next_stage();
  r.collapse(0, 1);
  r.advance_to(6);
  const TransversalTree tree(r, 6);
  EXPECT_TRUE(tree.member(bits_from_string("1")));
  EXPECT_FALSE(tree.member(bits_from_string("11")));
  EXPECT_EQ(tree.level(2).size(), 3u);
  EXPECT_EQ(kind_of([&] { const TransversalTree short_tree(r, 2); short_tree.level(3); }),
            ErrorKind::StageNotReached);
}

TEST(BoundedTransversal, Examples) {
  StagedCeer pairs(5);
  pairs.collapse(0, 1);
  pairs.collapse(2, 3);
  pairs.collapse(4, 5);
  EXPECT_EQ(bounded_transversal(pairs, 2, {}, 0), (FiniteSet{0, 2, 4}));
  StagedCeer id(7);
  EXPECT_EQ(bounded_transversal(id, 1, {}, 0), (FiniteSet{0, 1, 2, 3, 4, 5, 6, 7}));
  StagedCeer big(5);
  big.collapse(0, 1);
  big.collapse(1, 2);
  EXPECT_EQ(kind_of([&] { bounded_transversal(big, 2, {}, 0); }), ErrorKind::BoundViolated);
  EXPECT_EQ(bounded_transversal(big, 2, {2}, 0), FiniteSet{});
  EXPECT_TRUE(is_partial_transversal(bounded_transversal(pairs, 2, {}, 0), pairs, 0));
}
