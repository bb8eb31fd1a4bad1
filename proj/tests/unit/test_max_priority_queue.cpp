#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "needreplay/errors.hpp"
#include "needreplay/replay/max_priority_queue.hpp"

using namespace needreplay;

TEST(MaxPriorityQueue, SingleInsertIsBest) {
  MaxPriorityQueue q;
  q.insert(3, 1, 0.5);
  ASSERT_EQ(q.size(), 1u);
  const QueueEntry best = q.pop_best();
  EXPECT_EQ(best.state, 3);
  EXPECT_EQ(best.action, 1);
  EXPECT_DOUBLE_EQ(best.priority, 0.5);
  EXPECT_TRUE(q.empty());
}

TEST(MaxPriorityQueue, ReinsertKeepsLargerPriority) {
  MaxPriorityQueue q;
  q.insert(3, 1, 0.5);
  q.insert(3, 1, 0.2);
  EXPECT_EQ(q.size(), 1u);
  EXPECT_DOUBLE_EQ(*q.priority_of(3, 1), 0.5);
  q.insert(3, 1, 0.9);
  EXPECT_EQ(q.size(), 1u);
  EXPECT_DOUBLE_EQ(*q.priority_of(3, 1), 0.9);
}

TEST(MaxPriorityQueue, PopsLargestPriority) {
  MaxPriorityQueue q;
  q.insert(1, 0, 2.0);
  q.insert(2, 0, 5.0);
  const QueueEntry best = q.pop_best();
  EXPECT_EQ(best.state, 2);
  EXPECT_DOUBLE_EQ(best.priority, 5.0);
}

TEST(MaxPriorityQueue, ScorerWeighsPriorityByNeed) {
  MaxPriorityQueue q;
  q.insert(1, 0, 2.0);
  q.insert(2, 0, 5.0);
  const auto need = [](StateId s) { return s == 1 ? 1.0 : 0.1; };
  const QueueEntry best = q.pop_best([&](const QueueEntry& e) { return e.priority * need(e.state); });
  EXPECT_EQ(best.state, 1);
  EXPECT_DOUBLE_EQ(best.priority, 2.0);
}

TEST(MaxPriorityQueue, TiesGoToLowestStateThenAction) {
  MaxPriorityQueue q;
  q.insert(2, 0, 1.0);
  q.insert(1, 3, 1.0);
  q.insert(1, 2, 1.0);
  EXPECT_EQ(q.pop_best(), (QueueEntry{1, 2, 1.0}));
  EXPECT_EQ(q.pop_best(), (QueueEntry{1, 3, 1.0}));
  EXPECT_EQ(q.pop_best(), (QueueEntry{2, 0, 1.0}));
}

TEST(MaxPriorityQueue, RejectsNegativePriority) {
  MaxPriorityQueue q;
  EXPECT_THROW(q.insert(0, 0, -0.1), ContractViolation);
  EXPECT_TRUE(q.empty());
}

TEST(MaxPriorityQueue, PopFromEmptyThrows) {
  MaxPriorityQueue q;
  EXPECT_THROW(q.pop_best(), EmptyQueueError);
  EXPECT_THROW(q.pop_best([](const QueueEntry&) { return 0.0; }), EmptyQueueError);
}

// Brute-force argmax over a snapshot, with ties resolved by (state, action).
TEST(MaxPriorityQueue, PopMatchesBruteForceArgmax) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> state(0, 20);
  std::uniform_int_distribution<int> action(0, 3);
  std::uniform_int_distribution<int> level(0, 5);
  for (int trial = 0; trial < 300; ++trial) {
    MaxPriorityQueue q;
    const int inserts = 1 + trial % 40;
    for (int i = 0; i < inserts; ++i) q.insert(state(rng), action(rng), 0.25 * level(rng));
    std::vector<double> weight(21);
    for (double& w : weight) w = 0.5 * level(rng);
    const auto scorer = [&](const QueueEntry& e) { return e.priority * weight[static_cast<std::size_t>(e.state)]; };
    while (!q.empty()) {
      const std::vector<QueueEntry> snapshot = q.entries();
      QueueEntry expected = snapshot.front();
      for (const QueueEntry& e : snapshot) {
        const bool better = scorer(e) > scorer(expected);
        const bool tie_lower = scorer(e) == scorer(expected) &&
                               std::pair(e.state, e.action) < std::pair(expected.state, expected.action);
        if (better || tie_lower) expected = e;
      }
      ASSERT_EQ(q.pop_best(scorer), expected);
    }
  }
}
