#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "needreplay/agents/per_sr.hpp"
#include "needreplay/envs/blind_cliffwalk.hpp"
#include "needreplay/envs/environment.hpp"
#include "needreplay/errors.hpp"

using namespace needreplay;

namespace {

PerSrConfig base_config(bool use_need) {
  PerSrConfig c;
  c.gamma = 0.9;
  c.step_size = 0.25;
  c.alpha = 0.6;
  c.use_need = use_need;
  return c;
}

PerSrAgent make_agent(const PerSrConfig& config) {
  PerSrAgent agent(3, 2, config, LinearApproxSR::one_hot(3, 2, config.gamma, 0.05));
  agent.store({0, kCliffRight, 0.0, 1, false, 0.0});
  agent.store({1, kCliffRight, 0.0, 2, false, 0.0});
  agent.store({2, kCliffRight, 1.0, 0, true, 0.0});
  LinearQ& q = agent.q();
  q.theta()(q.feature_index(0, kCliffRight)) = 0.1;
  q.theta()(q.feature_index(1, kCliffRight)) = 0.4;
  q.theta()(q.feature_index(1, kCliffWrong)) = 0.5;
  q.theta()(q.feature_index(2, kCliffRight)) = 0.7;
  return agent;
}

// TD errors of the three stored transitions under the Q values above:
//   0.9 * max(0.4, 0.5) - 0.1,  0.9 * 0.7 - 0.4,  1 - 0.7.
constexpr double kTd[3] = {0.35, 0.23, 0.3};

}  // namespace

TEST(PerSrAgent, StoreUsesMaxPriorityAndSetsReference) {
  PerSrAgent agent = make_agent(base_config(true));
  EXPECT_EQ(agent.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(agent.sampler().priority(i), 1.0);
  ASSERT_TRUE(agent.reference_sr_vector().has_value());
  // Identity heads: the reference of the last store is phi(s_2).
  EXPECT_EQ(*agent.reference_sr_vector(), Eigen::Vector3d(0.0, 0.0, 1.0));
}

TEST(PerSrAgent, HandComputedWeightChange) {
  PerSrAgent agent = make_agent(base_config(true));
  agent.set_reference_sr_vector(Eigen::Vector3d(-0.5, 0.5, 1.0));
  const Eigen::VectorXd theta = agent.q().theta();
  const std::vector<std::size_t> batch{0, 1, 2};
  const ReplayStepReport r = agent.replay(batch);

  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.td_errors[static_cast<std::size_t>(i)], kTd[i], 1e-15);
  EXPECT_EQ(r.raw_needs, (std::vector<double>{-0.5, 0.5, 1.0}));
  EXPECT_NEAR(r.needs[0], 0.0, 1e-15);
  EXPECT_NEAR(r.needs[1], 1.0, 1e-15);
  EXPECT_NEAR(r.needs[2], 1.5, 1e-15);

  Eigen::VectorXd expected = Eigen::VectorXd::Zero(6);
  expected(agent.q().feature_index(1, kCliffRight)) = 0.23 * 1.0;
  expected(agent.q().feature_index(2, kCliffRight)) = 0.3 * 1.5;
  EXPECT_LT((r.q_weight_change - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((agent.q().theta() - (theta + 0.25 * expected)).cwiseAbs().maxCoeff(), 1e-15);

  // The zero-need transition changes nothing in Q but still gets a fresh priority.
  EXPECT_EQ(agent.q().theta()(agent.q().feature_index(0, kCliffRight)), 0.1);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(agent.sampler().priority(static_cast<std::size_t>(i)), kTd[i], 1e-15);
}

TEST(PerSrAgent, WithoutNeedEveryTransitionCountsOnce) {
  PerSrAgent agent = make_agent(base_config(false));
  const std::vector<std::size_t> batch{0, 1, 2};
  const ReplayStepReport r = agent.replay(batch);
  EXPECT_EQ(r.needs, (std::vector<double>{1.0, 1.0, 1.0}));
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(6);
  expected(agent.q().feature_index(0, kCliffRight)) = kTd[0];
  expected(agent.q().feature_index(1, kCliffRight)) = kTd[1];
  expected(agent.q().feature_index(2, kCliffRight)) = kTd[2];
  EXPECT_LT((r.q_weight_change - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PerSrAgent, UnitNeedsMatchPlainReplay) {
  PerSrAgent needy = make_agent(base_config(true));
  PerSrAgent plain = make_agent(base_config(false));
  // A reference with equal entries projects to the same need for every state.
  needy.set_reference_sr_vector(Eigen::Vector3d(1.0, 1.0, 1.0));
  const std::vector<std::size_t> batch{2, 0, 2, 1};
  const ReplayStepReport a = needy.replay(batch);
  const ReplayStepReport b = plain.replay(batch);
  EXPECT_EQ(a.q_weight_change, b.q_weight_change);
  EXPECT_EQ(needy.q().theta(), plain.q().theta());
}

TEST(PerSrAgent, SrStepFollowsSummedGradient) {
  PerSrAgent agent = make_agent(base_config(true));
  const LinearApproxSR before = agent.sr();
  const std::vector<std::size_t> batch{0, 1, 2};
  // Greedy next actions under the Q above: state 1 -> wrong, 2 -> right, 0 -> right.
  SRLossReport total;
  total += before.losses({one_hot(0, 3), kCliffRight, 0.0, one_hot(1, 3), false, 0.0}, kCliffWrong);
  total += before.losses({one_hot(1, 3), kCliffRight, 0.0, one_hot(2, 3), false, 0.0}, kCliffRight);
  total += before.losses({one_hot(2, 3), kCliffRight, 1.0, one_hot(0, 3), true, 0.0}, kCliffRight);
  agent.replay(batch);

  Eigen::VectorXd expected = before.parameters() - 0.05 * total.gradients;
  const int encoder = before.feature_dim() * before.input_dim();
  expected.head(encoder) = before.parameters().head(encoder);
  EXPECT_LT((agent.sr().parameters() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PerSrAgent, ImportanceWeightsNormalisedByBufferMaximum) {
  PerSrConfig config = base_config(true);
  config.beta = 1.0;
  PerSrAgent agent = make_agent(config);
  const std::vector<std::size_t> batch{0, 1, 2};
  agent.replay(batch);
  std::vector<double> p;
  double norm = 0.0;
  for (double td : kTd) {
    p.push_back(std::pow(td, 0.6));
    norm += p.back();
  }
  const double p_min = *std::min_element(p.begin(), p.end()) / norm;
  double largest = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double w = agent.importance_weight(i);
    EXPECT_NEAR(w, p_min / (p[i] / norm), 1e-12);
    largest = std::max(largest, w);
  }
  EXPECT_NEAR(largest, 1.0, 1e-15);
}

TEST(PerSrAgent, ErrorsOnMissingData) {
  PerSrAgent empty(3, 2, base_config(true), LinearApproxSR::one_hot(3, 2, 0.9, 0.05));
  Rng rng(1);
  EXPECT_THROW(empty.sample_minibatch(1, rng), InsufficientDataError);
  const std::vector<std::size_t> batch{0};
  EXPECT_THROW(empty.replay(batch), InsufficientDataError);

  PerSrAgent agent = make_agent(base_config(true));
  EXPECT_THROW(agent.sample_minibatch(4, rng), InsufficientDataError);
  EXPECT_EQ(agent.sample_minibatch(3, rng).size(), 3u);
  const std::vector<std::size_t> out_of_range{5};
  EXPECT_THROW(agent.replay(out_of_range), RangeError);
  EXPECT_THROW(PerSrAgent(4, 2, base_config(true), LinearApproxSR::one_hot(3, 2, 0.9, 0.05)), ShapeError);
}

TEST(PerSrChain, ConvergesAndIsDeterministic) {
  for (bool use_need : {false, true}) {
    PerSrToyConfig config;
    config.chain_length = 3;
    config.agent.use_need = use_need;
    config.update_budget = 200000;
    const PerSrRunResult a = run_per_sr_chain(config, 9);
    const PerSrRunResult b = run_per_sr_chain(config, 9);
    EXPECT_TRUE(a.converged) << (use_need ? "per-sr" : "per");
    EXPECT_EQ(a.q_updates, b.q_updates);
    EXPECT_EQ(a.q_updates % config.agent.minibatch, 0);
    EXPECT_GE(a.env_steps * config.agent.minibatch, a.q_updates);
  }
}
