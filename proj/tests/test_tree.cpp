#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace dmdst;
using namespace dmdst::testing;

TEST(InitialTree, PathIsUnique) {
  const auto g = gen_path(3);
  const auto t = build_initial_tree(g);
  EXPECT_EQ(t.parents(), (std::vector<Vertex>{kNoVertex, 0, 1}));
  EXPECT_EQ(t.degrees(), (std::vector<Degree>{1, 1, 0}));
  EXPECT_EQ(t.max_deg(), 1);
}

TEST(InitialTree, Instar) {
  const auto g = gen_instar(6);
  const auto t = build_initial_tree(g);
  EXPECT_EQ(t.deg(0), 5);
  EXPECT_EQ(t.max_deg(), 5);
  EXPECT_EQ(t.count(0), 5u);
}

TEST(InitialTree, CompleteIsValid) {
  const auto g = gen_complete(4);
  const auto t = build_initial_tree(g);
  EXPECT_TRUE(t.validate().empty());
  EXPECT_LE(t.max_deg(), 3);
}

TEST(InitialTree, CorpusValid) {
  for (const auto& e : small_corpus(100)) EXPECT_TRUE(build_initial_tree(e.g).validate().empty()) << e.seed;
  const auto big = gen_random(300, 900, 5);
  EXPECT_TRUE(build_initial_tree(big).validate().empty());
}

TEST(CutAndAppend, Reattach) {
  const auto g = Digraph::from_edges(3, 0, {{1, 0}, {2, 1}, {2, 0}});
  auto t = build_initial_tree(g);
  // BFS attaches 2 to 0 directly; move it under 1 and back.
  EXPECT_EQ(t.parent(2), 0);
  t.cut_and_append(2, 1);
  EXPECT_EQ(t.parents(), (std::vector<Vertex>{kNoVertex, 0, 1}));
  t.cut_and_append(2, 0);
  EXPECT_EQ(t.parents(), (std::vector<Vertex>{kNoVertex, 0, 0}));
  EXPECT_EQ(t.degrees(), (std::vector<Degree>{2, 0, 0}));
  EXPECT_EQ(t.max_deg(), 2);
  EXPECT_TRUE(t.validate().empty());
}

TEST(CutAndAppend, Errors) {
  const auto g = gen_path(3);
  auto t = build_initial_tree(g);
  try {
    t.cut_and_append(0, 1);
    FAIL();
  } catch (const TreeError& e) {
    EXPECT_EQ(e.kind(), TreeErrorKind::CutSink);
  }
  try {
    t.cut_and_append(2, 0);
    FAIL();
  } catch (const TreeError& e) {
    EXPECT_EQ(e.kind(), TreeErrorKind::NotAnEdge);
  }
}

TEST(CutAndAppend, HistogramTracksRandomMoves) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = gen_random(25, 80, seed);
    auto t = build_initial_tree(g);
    Rng rng(seed);
    for (int step = 0; step < 200; ++step) {
      const auto v = static_cast<Vertex>(1 + rng.below(static_cast<std::uint64_t>(g.n() - 1)));
      const auto& outs = g.out(v);
      const Vertex p = outs[rng.below(outs.size())];
      if (t.is_ancestor(v, p)) continue;  // would close a cycle
      t.cut_and_append(v, p);
    }
    ASSERT_TRUE(t.validate().empty()) << seed;
    const auto d = t.degrees();
    EXPECT_EQ(t.max_deg(), *std::max_element(d.begin(), d.end()));
    for (Degree k = 0; k <= t.max_deg(); ++k)
      EXPECT_EQ(t.count(k), static_cast<std::size_t>(std::count(d.begin(), d.end(), k)));
  }
}

TEST(Subtree, MatchesParentWalk) {
  for (const auto& e : small_corpus(60)) {
    const auto t = build_initial_tree(e.g);
    for (Vertex u = 0; u < t.n(); ++u) {
      auto s = t.subtree(u);
      EXPECT_EQ(std::set<Vertex>(s.begin(), s.end()), naive_subtree(t, u));
      EXPECT_EQ(s.front(), u);
    }
    EXPECT_EQ(t.subtree(t.sink()).size(), static_cast<std::size_t>(t.n()));
  }
}

TEST(Subtree, LeafIsItself) {
  const auto g = gen_instar(4);
  EXPECT_EQ(build_initial_tree(g).subtree(3), std::vector<Vertex>{3});
}

TEST(Unrelated, Basics) {
  const auto g = gen_instar(4);
  const auto t = build_initial_tree(g);
  EXPECT_TRUE(t.unrelated(1, 2));
  EXPECT_FALSE(t.unrelated(1, 1));
  EXPECT_FALSE(t.unrelated(0, 1));
}

TEST(Unrelated, MatchesSubtreeIntersection) {
  for (const auto& e : small_corpus(60, 77)) {
    const auto t = build_initial_tree(e.g);
    for (Vertex a = 0; a < t.n(); ++a)
      for (Vertex b = 0; b < t.n(); ++b) EXPECT_EQ(t.unrelated(a, b), naive_unrelated(t, a, b));
  }
}

TEST(UnrelatedChildren, BasisCase) {
  const auto g = gen_instar(3);
  const auto t = build_initial_tree(g);
  EXPECT_EQ(unrelated_children(t, 2), (std::vector<Vertex>{1, 2}));
}

TEST(UnrelatedChildren, NestedDegreeTwo) {
  // 0 <- 1, 0 <- 2, 1 <- 3, 1 <- 4, 3 <- 5, 3 <- 6: N_2 = {0, 1, 3}, nested.
  const auto f = make_fixture(7, {{1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 3}, {6, 3}}, {});
  const auto t = InTree::from_parents(f.g, f.parent);
  ASSERT_EQ(t.count(2), 3u);
  const auto w = unrelated_children(t, 2);
  EXPECT_GE(w.size(), 4u);
  // Brute force says 4 is the best possible here.
  std::vector<Vertex> pool;
  for (Vertex r : t.members(2)) pool.insert(pool.end(), t.children(r).begin(), t.children(r).end());
  EXPECT_EQ(max_unrelated_family(t, pool), 4u);
  EXPECT_EQ(w, (std::vector<Vertex>{2, 4, 5, 6}));
}

TEST(UnrelatedChildren, Errors) {
  const auto g = gen_path(3);
  const auto t = build_initial_tree(g);
  try {
    unrelated_children(t, 2);
    FAIL();
  } catch (const TreeError& e) {
    EXPECT_EQ(e.kind(), TreeErrorKind::EmptyDegreeClass);
  }
  EXPECT_THROW(unrelated_children(t, 0), std::invalid_argument);
}

TEST(UnrelatedChildren, BoundOnCorpus) {
  for (const auto& e : small_corpus(200, 31)) {
    const auto t = build_initial_tree(e.g);
    for (Degree d = 2; d <= t.max_deg(); ++d) {
      if (t.count(d) == 0) continue;
      const auto w = unrelated_children(t, d);
      EXPECT_GE(w.size(), static_cast<std::size_t>(d - 1) * t.count(d) + 1);
      for (Vertex x : w) EXPECT_EQ(t.deg(t.parent(x)), d);
      for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j) EXPECT_TRUE(naive_unrelated(t, w[i], w[j]));
    }
  }
}

TEST(Potential, HandValues) {
  const auto star = gen_instar(4);
  EXPECT_DOUBLE_EQ(build_initial_tree(star).potential(2.0), 11.0);
  EXPECT_EQ(build_initial_tree(star).potential2(), 11);
  const auto path = gen_path(3);
  EXPECT_DOUBLE_EQ(build_initial_tree(path).potential(2.0), 5.0);
  EXPECT_EQ(build_initial_tree(path).potential2(), 5);
}

TEST(Potential, ExactForLargeDegrees) {
  const auto star = gen_instar(200);
  EXPECT_EQ(build_initial_tree(star).potential2(), pow2(199) + 199);
}

TEST(Validate, DetectsFaults) {
  const auto g = Digraph::from_edges(3, 0, {{1, 0}, {1, 2}, {2, 1}});
  auto kinds = [&](std::vector<Vertex> parent) {
    std::vector<ViolationKind> k;
    for (const auto& v : validate_parents(g, parent)) k.push_back(v.kind);
    return k;
  };
  EXPECT_TRUE(kinds({kNoVertex, 0, 1}).empty());
  const auto cyc = kinds({kNoVertex, 2, 1});
  EXPECT_NE(std::find(cyc.begin(), cyc.end(), ViolationKind::CycleDetected), cyc.end());
  const auto bad_edge = kinds({kNoVertex, 0, 0});
  EXPECT_NE(std::find(bad_edge.begin(), bad_edge.end(), ViolationKind::NotAnEdge), bad_edge.end());
  EXPECT_EQ(kinds({kNoVertex, 0}).front(), ViolationKind::SizeMismatch);
  EXPECT_EQ(kinds({1, 0, 1}).front(), ViolationKind::SinkHasParent);
  EXPECT_EQ(kinds({kNoVertex, kNoVertex, 1}).front(), ViolationKind::MissingParent);
  EXPECT_EQ(kinds({kNoVertex, 0, 9}).front(), ViolationKind::ParentOutOfRange);
}

TEST(Validate, InTreeWithCycleReports) {
  const auto g = Digraph::from_edges(3, 0, {{1, 0}, {1, 2}, {2, 1}});
  const auto t = InTree::from_parents(g, {kNoVertex, 2, 1});
  const auto v = t.validate();
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().kind, ViolationKind::CycleDetected);
}

TEST(Depths, Postorder) {
  const auto g = gen_path(5);
  const auto t = build_initial_tree(g);
  EXPECT_EQ(t.depths(), (std::vector<Degree>{0, 1, 2, 3, 4}));
  const auto order = t.postorder();
  std::vector<std::size_t> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = i;
  for (Vertex v = 1; v < 5; ++v) EXPECT_LT(pos[static_cast<std::size_t>(v)], pos[static_cast<std::size_t>(t.parent(v))]);
}
