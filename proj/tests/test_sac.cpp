#include <cmath>
#include <vector>

#include "doctest.h"
#include "fd_check.hpp"
#include "qrl/sac.hpp"

using namespace qrl;

namespace {

TransitionBatch make_batch(Rng& rng, std::size_t n, std::size_t obs_dim, std::size_t act_dim,
                           bool all_done = false) {
  TransitionBatch b;
  b.resize(n, obs_dim, act_dim);
  for (double& v : b.obs) v = rng.normal();
  for (double& v : b.next_obs) v = rng.normal();
  for (double& v : b.action) v = std::tanh(rng.normal());
  for (double& v : b.reward) v = rng.normal();
  for (std::size_t i = 0; i < n; ++i) b.done[i] = all_done || rng.uniform() < 0.2;
  return b;
}

}  // namespace

TEST_CASE("terminal transitions bootstrap to the bare reward") {
  CHECK(SacAgent::q_target(1.25, true, 99.0, -3.0, 0.7, 0.99) == 1.25);
  CHECK(SacAgent::q_target(-2.0, true, -50.0, 11.0, 0.1, 0.99) == -2.0);
  CHECK(SacAgent::q_target(1.0, false, 2.0, -0.5, 0.5, 0.9) ==
        doctest::Approx(1.0 + 0.9 * (2.0 + 0.25)).epsilon(1e-12));
}

TEST_CASE("tau = 1 makes targets equal online networks after one step") {
  Rng init(21), rng(22);
  SacConfig cfg;
  cfg.hidden = {8};
  cfg.tau = 1.0;
  cfg.buffer_capacity = 64;
  cfg.batch_size = 8;
  SacAgent agent(3, 1, cfg, init);
  const TransitionBatch batch = make_batch(rng, 8, 3, 1);
  agent.update(batch, rng);
  CHECK(std::vector<double>(agent.q1_net().params().begin(), agent.q1_net().params().end()) ==
        std::vector<double>(agent.q1_target_net().params().begin(),
                            agent.q1_target_net().params().end()));
  CHECK(std::vector<double>(agent.q2_net().params().begin(), agent.q2_net().params().end()) ==
        std::vector<double>(agent.q2_target_net().params().begin(),
                            agent.q2_target_net().params().end()));
}

TEST_CASE("polyak blend moves targets by tau toward online") {
  Rng init(23);
  SacConfig cfg;
  cfg.hidden = {4};
  SacAgent agent(2, 1, cfg, init);
  const double before = agent.q1_target_net().params()[0];
  agent.mutable_q1().params()[0] = before + 1.0;
  agent.polyak_update(0.25);
  CHECK(agent.q1_target_net().params()[0] == doctest::Approx(before + 0.25).epsilon(1e-12));
}

TEST_CASE("temperature moves opposite the entropy surplus") {
  // temperature-loss gradient is -(mean log-prob + target entropy): entropy
  // above target (log-probs very negative) shrinks alpha, below raises it
  Rng init(33), rng(34);
  SacConfig cfg;
  cfg.hidden = {8};
  cfg.buffer_capacity = 64;
  cfg.batch_size = 32;
  cfg.lr = 1e-2;
  SacAgent agent(3, 1, cfg, init);
  const TransitionBatch batch = make_batch(rng, 32, 3, 1);
  const double alpha0 = agent.alpha();
  const SacLosses l = agent.update(batch, rng);
  // a fresh fan-in-uniform policy is wide: entropy over target, alpha drops
  CHECK(agent.alpha() < alpha0);
  CHECK(std::isfinite(l.q));
  CHECK(std::isfinite(l.policy));

  // near-deterministic policy: push the log-std head strongly negative so
  // entropy falls below the target and alpha must rise
  Rng init2(35), rng2(36);
  SacAgent tight(3, 1, cfg, init2);
  {
    auto p = tight.mutable_policy().params();
    // final layer bias for the log-std outputs sits at the very end
    p[p.size() - 1] = -9.0;
  }
  const double a0 = tight.alpha();
  tight.update(batch, rng2);
  CHECK(tight.alpha() > a0);
}

TEST_CASE("twin-Q symmetry: swapping critics leaves the actor loss unchanged") {
  Rng init(41), rng(42);
  SacConfig cfg;
  cfg.hidden = {8, 8};
  SacAgent agent(3, 2, cfg, init);
  const TransitionBatch batch = make_batch(rng, 16, 3, 2);
  std::vector<double> noise(16 * 2);
  rng.fill_normal(noise);
  const double before = agent.actor_loss_eval(batch, noise, 0.3);
  std::vector<double> q1(agent.q1_net().params().begin(), agent.q1_net().params().end());
  std::vector<double> q2(agent.q2_net().params().begin(), agent.q2_net().params().end());
  std::copy(q2.begin(), q2.end(), agent.mutable_q1().params().begin());
  std::copy(q1.begin(), q1.end(), agent.mutable_q2().params().begin());
  const double after = agent.actor_loss_eval(batch, noise, 0.3);
  CHECK(before == after);
}

TEST_CASE("critic loss gradient matches finite differences") {
  Rng init(51), rng(52);
  for (int trial = 0; trial < 8; ++trial) {
    SacConfig cfg;
    cfg.hidden = {6, 5};
    SacAgent agent(2 + trial % 2, 1 + trial % 2, cfg, init);
    const TransitionBatch batch = make_batch(rng, 5, agent.obs_dim(), agent.act_dim());
    std::vector<double> next_noise(5 * agent.act_dim());
    rng.fill_normal(next_noise);
    const double alpha = 0.4;

    std::vector<double> g1(agent.q1_net().param_count(), 0.0);
    std::vector<double> g2(agent.q2_net().param_count(), 0.0);
    agent.critic_loss_and_grads(batch, next_noise, alpha, g1, g2);

    auto eval = [&]() { return agent.critic_loss_eval(batch, next_noise, alpha); };
    const auto fd1 = testutil::finite_difference(agent.mutable_q1().params(), eval);
    const auto fd2 = testutil::finite_difference(agent.mutable_q2().params(), eval);
    CAPTURE(trial);
    CHECK(testutil::max_rel_err(g1, fd1) <= 1e-4);
    CHECK(testutil::max_rel_err(g2, fd2) <= 1e-4);
  }
}

TEST_CASE("actor loss gradient matches finite differences") {
  Rng init(61), rng(62);
  for (int trial = 0; trial < 8; ++trial) {
    SacConfig cfg;
    cfg.hidden = {6, 5};
    SacAgent agent(2 + trial % 3, 1 + trial % 2, cfg, init);
    const TransitionBatch batch = make_batch(rng, 5, agent.obs_dim(), agent.act_dim());
    std::vector<double> noise(5 * agent.act_dim());
    rng.fill_normal(noise);
    const double alpha = 0.3 + 0.2 * rng.uniform();

    std::vector<double> g(agent.policy_net().param_count(), 0.0);
    agent.actor_loss_and_grads(batch, noise, alpha, g);

    auto eval = [&]() { return agent.actor_loss_eval(batch, noise, alpha); };
    const auto fd = testutil::finite_difference(agent.mutable_policy().params(), eval);
    CAPTURE(trial);
    CHECK(testutil::max_rel_err(g, fd) <= 1e-4);
  }
}

TEST_CASE("temperature loss gradient matches finite differences") {
  // loss(log_alpha) = -log_alpha * c with c = mean(logp) + target_entropy
  Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = rng.normal();
    double log_alpha = rng.normal();
    const double analytic = -c;
    const double h = 1e-6;
    const double fd = (-(log_alpha + h) * c - -(log_alpha - h) * c) / (2 * h);
    CHECK(std::abs(analytic - fd) <= 1e-6 * std::max(1.0, std::abs(analytic)));
  }
}

TEST_CASE("update is deterministic") {
  auto run = [](std::uint64_t seed) {
    Rng init(seed), rng(seed + 1);
    SacConfig cfg;
    cfg.hidden = {8};
    cfg.batch_size = 8;
    cfg.buffer_capacity = 32;
    SacAgent agent(3, 1, cfg, init);
    TransitionBatch batch = make_batch(rng, 8, 3, 1);
    for (int i = 0; i < 5; ++i) agent.update(batch, rng);
    return std::vector<double>(agent.policy_net().params().begin(),
                               agent.policy_net().params().end());
  };
  CHECK(run(60) == run(60));
  CHECK(run(60) != run(61));
}
