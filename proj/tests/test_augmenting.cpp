#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace dmdst;
using namespace dmdst::testing;

namespace {

constexpr double kEps = 0.1;
constexpr double kC = 10.000000001;  // the floor for eps = 0.1 and small n

// gen_blocker(3, 2, 1): sink 0, hub 1 with leaves 2,3,4; blockers 5 (-> 0)
// and 6 (-> 5); 7 hangs on 5, 8 and 9 on 6.
struct BlockerCase {
  Digraph g = gen_blocker(3, 2, 1);
  InTree t = build_initial_tree(g);
};

struct Snapshot {
  std::vector<Degree> deg;
  std::vector<std::size_t> hist;
};

Snapshot snap(const InTree& t) {
  Snapshot s{t.degrees(), std::vector<std::size_t>(static_cast<std::size_t>(t.n()) + 1, 0)};
  for (Degree d : s.deg) ++s.hist[static_cast<std::size_t>(d)];
  return s;
}

// Postconditions (1)-(4) of the multi-segment adjustment, from snapshots.
void audit(const AugmentingPath& p, const Snapshot& before, const InTree& after, const Vertex top) {
  const Degree k = p.k;
  const auto a = snap(after);
  EXPECT_EQ(before.deg[static_cast<std::size_t>(top)], k);
  EXPECT_EQ(a.deg[static_cast<std::size_t>(top)], k - 1);
  const std::size_t l = p.segments.size();
  const Vertex vl = p.segments.back().back();
  const Degree vl_before = before.deg[static_cast<std::size_t>(vl)], vl_after = a.deg[static_cast<std::size_t>(vl)];
  if (vl_before <= k - 3) { EXPECT_LE(vl_after, vl_before + 2); }
  else { EXPECT_EQ(vl_after, k - 1); }
  for (std::size_t i = 0; i + 1 < l; ++i) {
    const Vertex v = p.segments[i].back();
    EXPECT_EQ(a.deg[static_cast<std::size_t>(v)], before.deg[static_cast<std::size_t>(v)]) << "v_" << i + 1;
  }
  for (const auto& s : p.segments)
    for (std::size_t j = 1; j + 1 < s.size(); ++j)
      EXPECT_LE(a.deg[static_cast<std::size_t>(s[j])], before.deg[static_cast<std::size_t>(s[j])] + 1);
  EXPECT_EQ(a.hist[static_cast<std::size_t>(k)] + 1, before.hist[static_cast<std::size_t>(k)]);
  for (std::size_t j = static_cast<std::size_t>(k) + 1; j < a.hist.size(); ++j) EXPECT_LE(a.hist[j], before.hist[j]);
}

}  // namespace

TEST(Budget, Formula) {
  EXPECT_NEAR(layer_budget(0.1, 10.0, 3, 1), 0.9 * 0.1 / 1.1 * 100.0, 1e-9);
  EXPECT_NEAR(layer_budget(0.2, 4.0, 5, 3), 0.9 * 0.2 / std::pow(1.2, 3) * 256.0, 1e-9);
}

TEST(EligibleStarts, LeafChildrenAllQualify) {
  const auto g = gen_instar(6);
  const auto t = build_initial_tree(g);
  const auto st = LayeredState::start(t, 5);
  EXPECT_EQ(eligible_starts(t, st, 1, kEps, kC, summarize_subtrees(t, kC)), (std::vector<Vertex>{1, 2, 3, 4, 5}));
}

TEST(EligibleStarts, ExcludesHeavySubtree) {
  BlockerCase b;
  auto st = LayeredState::start(b.t, 3);
  st.levels_V.push_back({5});
  st.levels_U.push_back({});
  // 5's children: 6 (degree 2 = k-1, excluded) and leaf 7.
  EXPECT_EQ(eligible_starts(b.t, st, 2, kEps, kC, summarize_subtrees(b.t, kC)), std::vector<Vertex>{7});
}

TEST(EligibleStarts, MatchesNaiveRecomputation) {
  for (const auto& e : small_corpus(120, 44)) {
    const auto t = build_initial_tree(e.g);
    const auto sums = summarize_subtrees(t, kC);
    for (Degree k = 1; k <= t.max_deg(); ++k) {
      if (t.count(k) == 0) continue;
      const auto st = LayeredState::start(t, k);
      std::vector<Vertex> expect;
      for (Vertex r : st.levels_V[0])
        for (Vertex u : t.children(r)) {
          bool light = true;
          double pot = 0.0;
          for (Vertex x : naive_subtree(t, u)) {
            light = light && t.deg(x) < k - 2;
            pot += std::pow(kC, t.deg(x));
          }
          if (light && pot <= layer_budget(kEps, kC, k, 1)) expect.push_back(u);
        }
      std::sort(expect.begin(), expect.end());
      EXPECT_EQ(eligible_starts(t, st, 1, kEps, kC, sums), expect);
    }
  }
}

TEST(ExitSet, LeafWithTwoExits) {
  const auto g = Digraph::from_edges(4, 0, {{1, 0}, {2, 0}, {3, 0}, {3, 1}, {3, 2}});
  const auto t = build_initial_tree(g);
  const auto x = exit_set(t, 3, 5);
  ASSERT_EQ(x.size(), 3u);
  EXPECT_EQ(x.at(1), (std::vector<Vertex>{3, 1}));
  EXPECT_EQ(x.at(2), (std::vector<Vertex>{3, 2}));
}

TEST(ExitSet, MatchesBruteForcePaths) {
  for (const auto& e : small_corpus(150, 8)) {
    const auto t = build_initial_tree(e.g);
    for (Vertex u = 0; u < t.n(); ++u) {
      if (u == t.sink()) continue;
      const auto sub = naive_subtree(t, u);
      Degree top = 0;
      for (Vertex x : sub) top = std::max(top, t.deg(x));
      const Degree k = top + 3;
      std::map<Vertex, std::size_t> shortest;
      for_each_exit_path(e.g, u, sub, [&](const std::vector<Vertex>& p) {
        auto [it, fresh] = shortest.emplace(p.back(), p.size());
        if (!fresh) it->second = std::min(it->second, p.size());
      });
      const auto got = exit_set(t, u, k);
      ASSERT_EQ(got.size(), shortest.size());
      for (const auto& [x, path] : got) {
        ASSERT_TRUE(shortest.count(x));
        EXPECT_EQ(path.size(), shortest[x]);
        EXPECT_EQ(path.front(), u);
      }
    }
  }
}

TEST(ExitSet, RejectsHeavySubtree) {
  BlockerCase b;
  EXPECT_THROW(exit_set(b.t, 6, 3), std::invalid_argument);
}

TEST(ExtendLayer, TwoLayerFixture) {
  BlockerCase b;
  auto st = LayeredState::start(b.t, 3);
  EXPECT_EQ(st.levels_V[0], std::vector<Vertex>{1});
  const auto sums = summarize_subtrees(b.t, kC);
  const auto u1 = eligible_starts(b.t, st, 1, kEps, kC, sums);
  EXPECT_EQ(u1, (std::vector<Vertex>{2, 3, 4}));
  const auto l1 = extend_layer(b.t, st, 1, u1);
  ASSERT_TRUE(std::holds_alternative<LayerComplete>(l1));
  EXPECT_EQ(std::get<LayerComplete>(l1).added, std::vector<Vertex>{5});
  const auto u2 = eligible_starts(b.t, st, 2, kEps, kC, sums);
  const auto l2 = extend_layer(b.t, st, 2, u2);
  ASSERT_TRUE(std::holds_alternative<FoundEndpoint>(l2));
  const auto& f = std::get<FoundEndpoint>(l2);
  EXPECT_EQ(f.level, 2u);
  EXPECT_EQ(f.u, 7);
  EXPECT_EQ(f.x, 3);

  const auto p = reconstruct_path(b.t, st, f, kEps, kC);
  ASSERT_EQ(p.segments.size(), 2u);
  EXPECT_EQ(p.segments[0], (std::vector<Vertex>{2, 5}));
  EXPECT_EQ(p.segments[1], (std::vector<Vertex>{7, 3}));
  EXPECT_EQ(augmenting_path_problem(b.t, p, kEps, kC), "");

  const auto before = snap(b.t);
  apply_augmenting_path(b.t, p, kEps, kC);
  audit(p, before, b.t, 1);
  EXPECT_EQ(b.t.max_deg(), 2);
  EXPECT_EQ(b.t.degrees(), (std::vector<Degree>{2, 2, 0, 1, 0, 2, 2, 0, 0, 0}));
}

TEST(Validator, CatchesBrokenPaths) {
  BlockerCase b;
  const AugmentingPath good{3, {{2, 5}, {7, 3}}};
  ASSERT_EQ(augmenting_path_problem(b.t, good, kEps, kC), "");
  EXPECT_NE(augmenting_path_problem(b.t, {3, {{7, 3}, {2, 5}}}, kEps, kC), "");
  EXPECT_NE(augmenting_path_problem(b.t, {2, good.segments}, kEps, kC), "");
  EXPECT_NE(augmenting_path_problem(b.t, {3, {{2, 5}, {8, 9}}}, kEps, kC), "");  // 8's parent is 6, not 5
  EXPECT_NE(augmenting_path_problem(b.t, {3, {{2, 1}}}, kEps, kC), "");          // ends at degree k
  EXPECT_NE(augmenting_path_problem(b.t, {3, {{2, 6}}}, kEps, kC), "");          // not an edge
  EXPECT_NE(augmenting_path_problem(b.t, {3, {}}, kEps, kC), "");
  // A budget of almost nothing rules out every start.
  EXPECT_NE(augmenting_path_problem(b.t, good, 1e-9, kC), "");
}

TEST(Apply, NeedsLowEndpoint) {
  BlockerCase b;
  // Single segment ending at blocker 5 (degree k-1) is a valid augmenting
  // path but cannot be applied.
  const AugmentingPath p{3, {{2, 5}}};
  ASSERT_EQ(augmenting_path_problem(b.t, p, kEps, kC), "");
  EXPECT_THROW(apply_augmenting_path(b.t, p, kEps, kC), TreeError);
}

TEST(AugmentSearch, BlockerReachesOptimum) {
  BlockerCase b;
  Config cfg;
  const auto r = run_augmenting_search(b.g, cfg);
  EXPECT_EQ(r.delta_initial, 3);
  EXPECT_EQ(r.delta_final, 2);
  EXPECT_EQ(exact_min_degree(b.g).delta, 2);
  ASSERT_FALSE(r.layers_trace.empty());
  EXPECT_EQ(r.layers_trace[0].v_sizes, (std::vector<std::size_t>{1, 1}));
  EXPECT_TRUE(r.layers_trace[0].found);
}

TEST(AugmentSearch, PathReturnsImmediately) {
  const auto g = gen_path(9);
  const auto r = run_augmenting_search(g, Config{});
  EXPECT_EQ(r.delta_final, 1);
  EXPECT_EQ(r.iterations, 0u);
}

TEST(AugmentSearch, FuzzedApplicationsKeepContract) {
  std::size_t applied = 0, multi = 0;
  for (const auto& e : small_corpus(300, 901)) {
    std::optional<Snapshot> before;
    AugmentHooks hooks;
    hooks.on_step = [&](const AugmentStepEvent& ev) {
      Snapshot s{std::vector<Degree>(ev.degrees_before.begin(), ev.degrees_before.end()), {}};
      s.hist.assign(static_cast<std::size_t>(ev.tree_after.n()) + 1, 0);
      for (Degree d : s.deg) ++s.hist[static_cast<std::size_t>(d)];
      // The deg-k parent of u_1 is the vertex whose degree fell from k to k-1.
      Vertex top = kNoVertex;
      for (const auto& c : ev.delta.changes)
        if (c.before == ev.path.k && c.after == ev.path.k - 1) top = c.v;
      ASSERT_NE(top, kNoVertex);
      audit(ev.path, s, ev.tree_after, top);
      EXPECT_TRUE(ev.tree_after.validate().empty());
      ++applied;
      multi += ev.path.segments.size() > 1;
    };
    const auto r = run_augmenting_search(e.g, Config{}, hooks);
    EXPECT_TRUE(validate_parents(e.g, r.parent).empty());
  }
  EXPECT_GT(applied, 100u);
  RecordProperty("multi_segment", static_cast<int>(multi));
}

TEST(AugmentSearch, BlockerFamilyMultiSegment) {
  std::size_t multi = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (Vertex fanout : {1, 2, 3, 5}) {
      for (Degree k : {3, 4, 6}) {
        const auto g = gen_blocker(k, fanout, seed);
        AugmentHooks hooks;
        hooks.on_step = [&](const AugmentStepEvent& ev) {
          multi += ev.path.segments.size() > 1;
          EXPECT_TRUE(ev.tree_after.validate().empty());
        };
        const auto r = run_augmenting_search(g, Config{}, hooks);
        EXPECT_LE(r.delta_final, r.delta_initial);
      }
    }
  }
  EXPECT_GT(multi, 20u);
}

TEST(AugmentSearch, CorpusAgainstOracle) {
  for (const auto& e : small_corpus(200, 5150)) {
    const auto r = run_augmenting_search(e.g, Config{});
    const auto best = exact_min_degree(e.g);
    EXPECT_GE(r.delta_final, best.delta);
    EXPECT_EQ(r.delta_final, max_in_degree(r.parent));
    if (r.certificate) {
      EXPECT_TRUE(verify_blocking(e.g, *r.certificate));
      EXPECT_TRUE(at_least(best.delta, *r.lower_bound)) << "seed " << e.seed;
    }
  }
}

TEST(AugmentSearch, LayerGrowthAndDisjointness) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = gen_random(80, 160, seed);
    AugmentHooks hooks;
    hooks.on_layer = [&](const LayeredState& st) {
      std::set<Vertex> seen;
      for (const auto& level : st.levels_V)
        for (Vertex v : level) EXPECT_TRUE(seen.insert(v).second) << "levels overlap at " << v;
    };
    const auto r = run_augmenting_search(g, Config{}, hooks);
    for (const auto& round : r.layers_trace) {
      // Every layer but the last grew the union by a factor 1 + eps.
      std::size_t total = round.v_sizes[0];
      for (std::size_t i = 1; i < round.v_sizes.size(); ++i) {
        const std::size_t next = total + round.v_sizes[i];
        if (i + 1 < round.v_sizes.size() || round.found) { EXPECT_GE(static_cast<double>(next), 1.1 * static_cast<double>(total)); }
        total = next;
      }
      EXPECT_LE(static_cast<double>(round.u_sizes.size()), 10.0 / 0.1 * std::log2(80.0));
    }
  }
}

TEST(AugmentCertificate, EmptyWhenNoStarts) {
  const auto g = gen_instar(5);
  const auto t = build_initial_tree(g);
  auto st = LayeredState::start(t, 2);
  extend_layer(t, st, 1, {});
  EXPECT_THROW(extract_augment_certificate(t, st), CertificateError);
}

TEST(AugmentCertificate, InstarHandCount) {
  const auto g = gen_instar(7);
  const auto r = run_augmenting_search(g, Config{});
  ASSERT_TRUE(r.certificate);
  EXPECT_EQ(r.certificate->U, (std::vector<Vertex>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(r.certificate->B, std::vector<Vertex>{0});
  EXPECT_EQ(*r.lower_bound, (Rational{6, 1}));
}
