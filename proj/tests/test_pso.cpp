#include <gtest/gtest.h>

#include <sstream>

#include "dpvne/generator.hpp"
#include "dpvne/local_control.hpp"
#include "dpvne/pso.hpp"
#include "oracles.hpp"

using namespace dpvne;

namespace {

CandidateNode cand(NodeId vnode, NodeId snode, const SubstrateNetwork& net) {
  CandidateNode c;
  c.virtual_node = vnode;
  c.substrate_node = snode;
  c.domain = net.nodes[snode].domain;
  c.node_delay = net.nodes[snode].delay;
  c.cpu_residual = net.nodes[snode].cpu_residual;
  c.incident_bw_residual = 1000;
  return c;
}

// Two virtual nodes (cpu 2, 3) joined by a bw-4 link; substrate nodes with
// delays 1 and 2 joined by a delay-3 link.
struct TwoNodeCase {
  SubstrateNetwork net;
  VirtualNetworkRequest vnr;
  TwoNodeCase(Delay d0 = 1, Delay d1 = 2, Delay link = 3) {
    net.add_node(0, 10, d0);
    net.add_node(0, 10, d1);
    net.add_node(1, 10, 1);
    net.add_link(0, 1, 50, link);
    net.add_link(1, 2, 50, 1);
    vnr.add_node(2, 0, 1);
    vnr.add_node(3, 0, 1);
    vnr.add_link(0, 1, 4);
  }
  PseudoTopology pseudo(std::vector<std::vector<CandidateNode>> c) const {
    return *build_pseudo_topology(vnr, std::move(c), net);
  }
};

std::optional<PseudoTopology> pipeline_pseudo(std::uint64_t seed, int k = 3) {
  GeneratorParams p;
  Rng rng = make_rng(seed, 9);
  const auto net = generate_substrate(p, rng);
  const auto vnr = generate_request(p, rng, 0);
  const auto est = build_delay_estimates(net);
  return build_pseudo_topology(vnr, collect_candidates(vnr, net, k, est), net, est);
}

}  // namespace

TEST(Fitness, NodeAndLinkTerms) {
  TwoNodeCase t;
  const auto p = t.pseudo({{cand(0, 0, t.net)}, {cand(1, 1, t.net)}});
  EXPECT_DOUBLE_EQ(fitness({0, 0}, p), 20.0);
}

TEST(Fitness, DuplicateSubstrateNodeIsInfinite) {
  TwoNodeCase t;
  const auto p = t.pseudo({{cand(0, 0, t.net)}, {cand(1, 0, t.net)}});
  EXPECT_EQ(fitness({0, 0}, p), kInfinity);
}

TEST(Fitness, ZeroDelaysGiveZero) {
  TwoNodeCase t(0, 0, 0);
  const auto p = t.pseudo({{cand(0, 0, t.net)}, {cand(1, 1, t.net)}});
  EXPECT_DOUBLE_EQ(fitness({0, 0}, p), 0.0);
}

TEST(Fitness, InsufficientIncidentBandwidthIsInfinite) {
  TwoNodeCase t;
  auto a = cand(0, 0, t.net);
  a.incident_bw_residual = 3;  // the link needs 4
  const auto p = t.pseudo({{a}, {cand(1, 1, t.net)}});
  EXPECT_EQ(fitness({0, 0}, p), kInfinity);
}

TEST(Fitness, RejectsMalformedPositions) {
  TwoNodeCase t;
  const auto p = t.pseudo({{cand(0, 0, t.net)}, {cand(1, 1, t.net)}});
  EXPECT_THROW(fitness({0}, p), std::invalid_argument);
  EXPECT_THROW(fitness({0, 1}, p), std::invalid_argument);
}

TEST(VelocityUpdate, WeightsOnVelocityOnlyIsIdentity) {
  PsoParams params;
  params.a = 1;
  params.b = 0;
  params.c = 0;
  Particle p;
  p.position = {0, 1, 2, 0};
  p.velocity = {1, 0, 1, 0};
  p.personal_best_position = {0, 1, 2, 0};
  EXPECT_EQ(velocity_update(p, {0, 1, 2, 0}, params), p.velocity);
}

TEST(VelocityUpdate, RoundsAtOneHalf) {
  PsoParams params;  // 0.3, 0.4, 0.3
  Particle p;
  p.position = {1, 1, 1, 1};
  p.velocity = {1, 0, 0, 1};
  p.personal_best_position = {1, 0, 1, 0};
  // s = 0.7, 0.3, 0.7, 0.3 + 0.3
  EXPECT_EQ(velocity_update(p, {0, 1, 1, 1}, params), (Velocity{1, 0, 1, 1}));

  p.personal_best_position = {0, 0, 0, 0};
  p.velocity = {0, 0, 0, 0};
  EXPECT_EQ(velocity_update(p, {0, 0, 0, 0}, params), (Velocity{0, 0, 0, 0}));
}

TEST(PositionUpdate, Rules) {
  TwoNodeCase t;
  // vnode 0: candidates 0, 1 in domain 0 and 2 in domain 1. vnode 1: one candidate.
  const auto p = t.pseudo({{cand(0, 0, t.net), cand(0, 1, t.net), cand(0, 2, t.net)},
                           {cand(1, 1, t.net)}});
  Rng rng = make_rng(4);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(position_update({1, 0}, {1, 1}, p, rng), (Position{1, 0}));
    EXPECT_EQ(position_update({0, 0}, {0, 0}, p, rng), (Position{2, 0}));
    const auto back = position_update({2, 0}, {0, 0}, p, rng);
    EXPECT_TRUE(back[0] == 0 || back[0] == 1);
  }
  EXPECT_THROW(position_update({0, 0}, {2, 0}, p, rng), std::invalid_argument);
}

TEST(PositionUpdate, SingleDomainListPicksAnotherIndex) {
  TwoNodeCase t;
  const auto p = t.pseudo({{cand(0, 0, t.net), cand(0, 1, t.net)}, {cand(1, 2, t.net)}});
  Rng rng = make_rng(5);
  EXPECT_EQ(position_update({0, 0}, {0, 0}, p, rng), (Position{1, 0}));
  EXPECT_EQ(position_update({1, 0}, {0, 0}, p, rng), (Position{0, 0}));
}

TEST(RunPso, SingletonCandidatesReturnTheOnlyPosition) {
  TwoNodeCase t;
  const auto p = t.pseudo({{cand(0, 0, t.net)}, {cand(1, 1, t.net)}});
  Rng rng = make_rng(1);
  const auto r = run_pso(p, PsoParams{}, rng);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.best_position, (Position{0, 0}));
  EXPECT_DOUBLE_EQ(r.best_fitness, 20.0);
  ASSERT_EQ(r.trace.size(), 51u);
  for (Scalar f : r.trace) EXPECT_DOUBLE_EQ(f, 20.0);
}

TEST(RunPso, AllInfeasibleReportsInfeasible) {
  TwoNodeCase t;
  const auto p = t.pseudo({{cand(0, 0, t.net)}, {cand(1, 0, t.net)}});
  Rng rng = make_rng(1);
  const auto r = run_pso(p, PsoParams{}, rng);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.best_fitness, kInfinity);
}

TEST(RunPso, TraceIsNonIncreasingAndNeverBeatsExhaustiveMinimum) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto p = pipeline_pseudo(seed);
    if (!p) continue;
    Rng rng = make_rng(seed, 3);
    const auto r = run_pso(*p, PsoParams{}, rng);
    for (std::size_t i = 1; i < r.trace.size(); ++i) ASSERT_LE(r.trace[i], r.trace[i - 1]);
    EXPECT_EQ(r.trace.back(), r.best_fitness);
    const double opt = oracle::exhaustive_minimum(*p);
    EXPECT_GE(r.best_fitness, opt);
    if (r.feasible) {
      EXPECT_DOUBLE_EQ(fitness(r.best_position, *p), r.best_fitness);
      EXPECT_NO_THROW(check_position(r.best_position, *p));
    }
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(RunPso, EnlargedSwarmFindsExhaustiveMinimum) {
  PsoParams big;
  big.n_particles = 40;
  big.n_iterations = 200;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = pipeline_pseudo(seed);
    if (!p) continue;
    Rng rng = make_rng(seed, 3);
    EXPECT_DOUBLE_EQ(run_pso(*p, big, rng).best_fitness, oracle::exhaustive_minimum(*p))
        << "seed " << seed;
  }
}

TEST(RunPso, SameSeedSameResult) {
  const auto p = pipeline_pseudo(2);
  ASSERT_TRUE(p.has_value());
  Rng a = make_rng(77), b = make_rng(77);
  const auto ra = run_pso(*p, PsoParams{}, a);
  const auto rb = run_pso(*p, PsoParams{}, b);
  EXPECT_EQ(ra.best_position, rb.best_position);
  EXPECT_EQ(ra.trace, rb.trace);
}

TEST(RunPso, ParameterValidation) {
  const auto p = pipeline_pseudo(2);
  ASSERT_TRUE(p.has_value());
  Rng rng = make_rng(1);
  PsoParams bad;
  bad.a = 0.5;  // sums to 1.2
  EXPECT_THROW(run_pso(*p, bad, rng), std::invalid_argument);
  bad = {};
  bad.n_particles = 0;
  EXPECT_THROW(run_pso(*p, bad, rng), std::invalid_argument);
  bad = {};
  bad.mutation_probability = 1.5;
  EXPECT_THROW(run_pso(*p, bad, rng), std::invalid_argument);
  EXPECT_NO_THROW(check_params(PsoParams{}));
}

TEST(WriteTraceCsv, Layout) {
  std::ostringstream os;
  write_trace_csv(os, {kInfinity, 12.5, 12.5});
  EXPECT_EQ(os.str(), "iteration,global_best_fitness\n0,inf\n1,12.500000\n2,12.500000\n");
}
