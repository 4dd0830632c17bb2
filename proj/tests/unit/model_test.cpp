#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "fixtures.hpp"
#include "tbn/errors.hpp"
#include "tbn/model/bitvector.hpp"
#include "tbn/model/likelihood.hpp"

namespace tbn {
namespace {

using boost::multiprecision::cpp_bin_float_50;
using boost::multiprecision::cpp_rational;
using testing::joint_probability;
using testing::leaf_tree;
using testing::split_tree;

cpp_rational exact_leaf_prob(std::uint64_t t, std::uint64_t f, double alpha) {
  const cpp_rational a(alpha);
  return (cpp_rational(t) + a) / (cpp_rational(t + f) + 2 * a);
}

cpp_bin_float_50 exact_leaf_ll(SufficientStats s, double alpha) {
  if (s.total() == 0) return 0;
  const cpp_bin_float_50 p(exact_leaf_prob(s.count_true, s.count_false, alpha));
  cpp_bin_float_50 ll = 0;
  if (s.count_true) ll += cpp_bin_float_50(s.count_true) * log(p);
  if (s.count_false) ll += cpp_bin_float_50(s.count_false) * log(1 - p);
  return ll;
}

double exact_gain(SufficientStats parent, SufficientStats t, SufficientStats f, double alpha) {
  return static_cast<double>(exact_leaf_ll(t, alpha) + exact_leaf_ll(f, alpha) -
                             exact_leaf_ll(parent, alpha));
}

Dataset all_assignments(std::size_t vars, const std::vector<std::string>& names) {
  std::vector<std::vector<std::uint8_t>> rows;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars); ++a) {
    std::vector<std::uint8_t> row;
    for (std::size_t v = 0; v < vars; ++v) row.push_back((a >> v) & 1u);
    rows.push_back(row);
  }
  return Dataset::from_rows(names, rows);
}

Dataset sample_rows(Rng& rng, std::size_t vars, std::size_t rows) {
  std::vector<std::vector<std::uint8_t>> data(rows, std::vector<std::uint8_t>(vars));
  for (auto& row : data) {
    for (auto& cell : row) cell = rng.bernoulli(0.4) ? 1 : 0;
  }
  return Dataset::from_rows(testing::numbered_names(vars), data);
}

std::uint64_t row_assignment(const Dataset& d, std::size_t row) {
  std::uint64_t a = 0;
  for (std::size_t v = 0; v < d.cols(); ++v) a |= std::uint64_t{d.get(row, variable(v))} << v;
  return a;
}

TEST(LeafEstimate, PosteriorMean) {
  EXPECT_DOUBLE_EQ(estimate_leaf_prob(3, 7, 1.0), 4.0 / 12.0);
  EXPECT_DOUBLE_EQ(estimate_leaf_prob(0, 0, 1.0), 0.5);
}

TEST(LeafEstimate, TinyAlphaMatchesRational) {
  const double p = estimate_leaf_prob(1000, 0, 0.00001);
  EXPECT_GT(p, 0.99999);
  EXPECT_LT(p, 1.0);
  const double exact = static_cast<double>(exact_leaf_prob(1000, 0, 0.00001));
  EXPECT_NEAR(p, exact, 1e-15);
}

TEST(LeafEstimate, RejectsNonPositiveAlpha) {
  EXPECT_THROW(estimate_leaf_prob(1, 1, 0.0), ConfigError);
  EXPECT_THROW(estimate_leaf_prob(1, 1, -1.0), ConfigError);
}

TEST(LogLikelihood, UniformSingleVariable) {
  const BayesianNetwork bn = testing::single_variable(0.5);
  const Dataset d = Dataset::from_rows({"X"}, {{1}, {0}, {1}, {1}});
  EXPECT_NEAR(log_likelihood(bn, d), 4 * std::log(0.5), 1e-12);
}

TEST(LogLikelihood, ChainMatchesJointEnumeration) {
  const BayesianNetwork bn({"A", "B", "C"}, {variable(0), variable(1), variable(2)},
                           {leaf_tree(0.3), split_tree(variable(0), 0.8, 0.1),
                            split_tree(variable(1), 0.6, 0.25)},
                           1.0);
  const Dataset d = all_assignments(3, bn.names());
  ASSERT_EQ(d.rows(), 8u);
  double expected = 0.0;
  for (std::size_t r = 0; r < d.rows(); ++r) expected += std::log(joint_probability(bn, row_assignment(d, r)));
  EXPECT_NEAR(log_likelihood(bn, d), expected, 1e-12);
}

TEST(LogLikelihood, EmptyDatasetIsZero) {
  const BayesianNetwork bn = testing::chain_xy();
  const Dataset d = Dataset::from_rows({"X", "Y"}, {});
  EXPECT_EQ(log_likelihood(bn, d), 0.0);
}

TEST(LogLikelihood, ColumnMismatchIsSchemaError) {
  const BayesianNetwork bn = testing::chain_xy();
  EXPECT_THROW(log_likelihood(bn, Dataset::from_rows({"X"}, {{1}})), SchemaError);
  EXPECT_THROW(log_likelihood(bn, Dataset::from_rows({"Y", "X"}, {{1, 0}})), SchemaError);
}

TEST(LogLikelihood, DecomposesIntoPerRowTerms) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const BayesianNetwork bn = testing::random_network(rng, 6, 3);
    const Dataset d = sample_rows(rng, 6, 150);
    double expected = 0.0;
    for (std::size_t r = 0; r < d.rows(); ++r) expected += std::log(joint_probability(bn, row_assignment(d, r)));
    EXPECT_NEAR(log_likelihood(bn, d), expected, 1e-9);

    // Same total from the leaf statistics of the fitted network.
    const BayesianNetwork fitted = fit(bn, d);
    double from_leaves = 0.0;
    for (const CptTree& tree : fitted.cpts()) {
      for (const auto& leaf : tree.leaves()) {
        const auto& node = tree.node(leaf.node);
        from_leaves += leaf_log_likelihood(node.counts, node.prob_true);
      }
    }
    EXPECT_NEAR(log_likelihood(fitted, d), from_leaves, 1e-9);
  }
}

TEST(LogLikelihood, FittedLeavesRespectSmoothingBounds) {
  Rng rng(5);
  const BayesianNetwork bn = testing::random_network(rng, 7, 3);
  const Dataset d = sample_rows(rng, 7, 90);
  for (double alpha : {1.0, 0.1, 0.001}) {
    const BayesianNetwork fitted = fit(bn, d).refit(alpha);
    for (const CptTree& tree : fitted.cpts()) {
      for (const auto& leaf : tree.leaves()) {
        const auto& node = tree.node(leaf.node);
        const double n = static_cast<double>(node.counts.total());
        EXPECT_GE(node.prob_true, alpha / (n + 2 * alpha) - 1e-15);
        EXPECT_LE(node.prob_true, (n + alpha) / (n + 2 * alpha) + 1e-15);
      }
    }
  }
}

TEST(SplitGain, PerfectSplitApproachesHundredLogTwo) {
  const double gain = split_gain({50, 50}, {50, 0}, {0, 50}, 1e-9);
  EXPECT_NEAR(gain, 100 * std::log(2.0), 1e-5);
  EXPECT_NEAR(gain, exact_gain({50, 50}, {50, 0}, {0, 50}, 1e-9), 1e-9);
}

TEST(SplitGain, UninformativeSplit) {
  EXPECT_LE(split_gain({40, 60}, {20, 30}, {20, 30}, 1.0), 0.0);
  EXPECT_NEAR(split_gain({40, 60}, {20, 30}, {20, 30}, 1e-9), 0.0, 1e-6);
}

TEST(SplitGain, MatchesRationalOracle) {
  for (auto [t, f] : {std::pair<SufficientStats, SufficientStats>{{1, 0}, {0, 0}},
                      {{0, 0}, {1, 0}}}) {
    EXPECT_NEAR(split_gain({1, 0}, t, f, 1.0), exact_gain({1, 0}, t, f, 1.0), 1e-12);
  }
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const SufficientStats t{rng.below(40), rng.below(40)};
    const SufficientStats f{rng.below(40), rng.below(40)};
    const SufficientStats parent{t.count_true + f.count_true, t.count_false + f.count_false};
    for (double alpha : {1.0, 0.1, 0.00001}) {
      EXPECT_NEAR(split_gain(parent, t, f, alpha), exact_gain(parent, t, f, alpha), 1e-9);
    }
  }
}

TEST(SplitGain, NonPartitionIsConsistencyError) {
  EXPECT_THROW(split_gain({5, 5}, {3, 3}, {3, 3}, 1.0), ConsistencyError);
}

TEST(ApplySplit, OrphanGainsOneParent) {
  const BayesianNetwork bn = BayesianNetwork::independent({"A", "B", "C"}, 1.0);
  const Dataset d = Dataset::from_rows({"A", "B", "C"}, {{1, 1, 0}, {0, 1, 1}, {1, 0, 0}});
  const BayesianNetwork out = apply_split(fit(bn, d), variable(2), {}, variable(1), d);
  ASSERT_EQ(out.parents(variable(2)).size(), 1u);
  EXPECT_EQ(out.parents(variable(2))[0], variable(1));
  EXPECT_EQ(out.cpt(variable(0)), fit(bn, d).cpt(variable(0)));
}

TEST(ApplySplit, LikelihoodDifferenceEqualsGain) {
  Rng rng(9);
  const Dataset d = sample_rows(rng, 4, 300);
  const BayesianNetwork bn = fit(BayesianNetwork::independent(d.names(), 1.0), d);
  const BayesianNetwork once = apply_split(bn, variable(3), {}, variable(1), d);
  const LeafPath path{{variable(1), true}};
  const BayesianNetwork twice = apply_split(once, variable(3), path, variable(0), d);

  const SufficientStats parent = leaf_stats(d, variable(3), {});
  const SufficientStats t = leaf_stats(d, variable(3), path);
  const SufficientStats f = leaf_stats(d, variable(3), {{variable(1), false}});
  EXPECT_NEAR(log_likelihood(once, d) - log_likelihood(bn, d), split_gain(parent, t, f, 1.0), 1e-9);

  const SufficientStats tt = leaf_stats(d, variable(3), {{variable(1), true}, {variable(0), true}});
  const SufficientStats tf = leaf_stats(d, variable(3), {{variable(1), true}, {variable(0), false}});
  EXPECT_NEAR(log_likelihood(twice, d) - log_likelihood(once, d), split_gain(t, tt, tf, 1.0), 1e-9);
}

TEST(ApplySplit, IllegalSplits) {
  const Dataset d = Dataset::from_rows({"A", "B"}, {{1, 0}, {0, 1}});
  const BayesianNetwork bn = fit(BayesianNetwork::independent(d.names(), 1.0), d);
  EXPECT_THROW(apply_split(bn, variable(0), {}, variable(1), d), StructuralError);
  const BayesianNetwork split = apply_split(bn, variable(1), {}, variable(0), d);
  EXPECT_THROW(apply_split(split, variable(1), {{variable(0), true}}, variable(0), d),
               StructuralError);
  const Dataset d3 = Dataset::from_rows({"A", "B", "C"}, {{1, 0, 1}, {0, 1, 1}});
  const BayesianNetwork flat = fit(BayesianNetwork::independent(d3.names(), 1.0), d3);
  EXPECT_THROW(apply_split(flat, variable(2), {{variable(0), true}}, variable(1), d3), LookupError);
}

TEST(CptTree, RejectsMalformedTrees) {
  EXPECT_THROW(CptTree::single_leaf({}, 1.0), StructuralError);
  EXPECT_THROW(CptTree::single_leaf({}, 0.0), StructuralError);
  std::vector<CptTree::Node> nodes(5);
  nodes[0] = {0, 1, 2, {}, 0.5};
  nodes[1] = {0, 3, 4, {}, 0.5};
  EXPECT_THROW(CptTree{nodes}, StructuralError);  // tests variable 0 twice
  std::vector<CptTree::Node> dangling(2);
  dangling[0] = {0, 1, 7, {}, 0.5};
  EXPECT_THROW(CptTree{dangling}, StructuralError);
}

TEST(CptTree, WalkReachesExactlyOneLeafPerContext) {
  Rng rng(21);
  const BayesianNetwork bn = testing::random_network(rng, 8, 3);
  for (const CptTree& tree : bn.cpts()) {
    std::size_t hits = 0;
    for (const auto& leaf : tree.leaves()) {
      EXPECT_EQ(tree.find_leaf(leaf.path), leaf.node);
      ++hits;
    }
    EXPECT_EQ(hits, tree.leaf_count());
    EXPECT_LE(tree.depth(), 3u);
  }
}

TEST(Network, OrderingConsistency) {
  EXPECT_THROW(BayesianNetwork({"X", "Y"}, {variable(1), variable(0)},
                               {leaf_tree(0.3), split_tree(variable(0), 0.8, 0.1)}, 1.0),
               StructuralError);
  EXPECT_THROW(BayesianNetwork({"X", "Y"}, {variable(0), variable(0)},
                               {leaf_tree(0.3), leaf_tree(0.4)}, 1.0),
               StructuralError);
  const BayesianNetwork bn = testing::chain_xy();
  EXPECT_TRUE(bn.precedes(variable(0), variable(1)));
  EXPECT_EQ(bn.edge_count(), 1u);
  EXPECT_EQ(bn.leaf_count(), 3u);
}

TEST(BitVector, CountsAndMasks) {
  BitVector a(130);
  BitVector b(130);
  for (std::size_t i = 0; i < 130; i += 3) a.set(i, true);
  for (std::size_t i = 0; i < 130; i += 2) b.set(i, true);
  EXPECT_EQ(a.count(), 44u);
  EXPECT_EQ(b.count(), 65u);
  EXPECT_EQ(count_and(a, b), 22u);
  BitVector c = a;
  c.and_not(b);
  EXPECT_EQ(c.count(), 22u);
  EXPECT_EQ(BitVector(70, true).count(), 70u);
}

TEST(Dataset, RejectsNonBinaryValues) {
  EXPECT_THROW(Dataset::from_rows({"A"}, {{2}}), InputError);
  const Dataset d = Dataset::from_rows({"A", "B"}, {{1, 0}, {0, 1}, {1, 1}});
  EXPECT_EQ(d.find("B"), variable(1));
  EXPECT_THROW(d.find("C"), LookupError);
  const std::vector<std::size_t> keep{2, 0};
  const Dataset s = d.select_rows(keep);
  EXPECT_EQ(s.rows(), 2u);
  EXPECT_TRUE(s.get(0, variable(1)));
  EXPECT_FALSE(s.get(1, variable(1)));
}

}  // namespace
}  // namespace tbn
