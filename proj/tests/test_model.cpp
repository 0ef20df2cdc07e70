#include <gtest/gtest.h>

#include "dpvne/generator.hpp"
#include "dpvne/model.hpp"
#include "dpvne/text_format.hpp"

using namespace dpvne;

namespace {

SubstrateNetwork triangle() {
  SubstrateNetwork net;
  net.n_domains = 1;
  for (int i = 0; i < 3; ++i) net.add_node(0, 10, 1);
  net.add_link(0, 1, 50, 1);
  net.add_link(1, 2, 50, 2);
  net.add_link(0, 2, 50, 9);
  return net;
}

bool mentions(const std::vector<Violation>& v, const std::string& subject) {
  for (const auto& x : v) {
    if (x.subject == subject) return true;
  }
  return false;
}

}  // namespace

TEST(ValidateSubstrate, WellFormedTriangleHasNoViolations) {
  EXPECT_TRUE(validate_substrate(triangle()).empty());
}

TEST(ValidateSubstrate, LinkToMissingNode) {
  auto net = triangle();
  SubstrateLink bad;
  bad.id = 3;
  bad.u = 0;
  bad.v = 7;
  bad.bw_capacity = bad.bw_residual = 5;
  net.links.push_back(bad);
  const auto v = validate_substrate(net);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].subject, "link 3");
}

TEST(ValidateSubstrate, ResidualAboveCapacity) {
  auto net = triangle();
  net.nodes[1].cpu_residual = net.nodes[1].cpu_capacity + 1;
  const auto v = validate_substrate(net);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].subject, "node 1");
  EXPECT_NE(v[0].rule.find("residual"), std::string::npos);
}

TEST(ValidateSubstrate, StructuralRules) {
  auto net = triangle();
  net.nodes[2].is_boundary = true;  // no inter-domain link
  EXPECT_TRUE(mentions(validate_substrate(net), "node 2"));

  SubstrateNetwork split;
  split.n_domains = 2;
  for (int i = 0; i < 4; ++i) split.add_node(i / 2, 10, 1);
  split.add_link(0, 1, 5, 1);
  split.add_link(2, 3, 5, 1);
  EXPECT_TRUE(mentions(validate_substrate(split), "domains"));

  SubstrateNetwork disconnected;
  disconnected.n_domains = 1;
  for (int i = 0; i < 3; ++i) disconnected.add_node(0, 10, 1);
  disconnected.add_link(0, 1, 5, 1);
  EXPECT_TRUE(mentions(validate_substrate(disconnected), "domain 0"));

  auto parallel = triangle();
  SubstrateLink dup = parallel.links[0];
  dup.id = 3;
  parallel.links.push_back(dup);
  EXPECT_TRUE(mentions(validate_substrate(parallel), "link 3"));
}

TEST(SubstrateNetwork, AddLinkRejectsMalformedLinks) {
  auto net = triangle();
  EXPECT_THROW(net.add_link(1, 1, 5, 1), std::invalid_argument);
  EXPECT_THROW(net.add_link(0, 1, 5, 1), std::invalid_argument);
  EXPECT_THROW(net.add_link(0, 9, 5, 1), std::invalid_argument);
}

TEST(SubstrateNetwork, InterDomainLinkFlagsBoundaryNodes) {
  SubstrateNetwork net;
  net.add_node(0, 10, 1);
  net.add_node(1, 10, 1);
  net.add_node(1, 10, 1);
  net.add_link(1, 2, 5, 1);
  EXPECT_FALSE(net.nodes[1].is_boundary);
  net.add_link(0, 1, 5, 1);
  EXPECT_TRUE(net.nodes[0].is_boundary);
  EXPECT_TRUE(net.nodes[1].is_boundary);
  EXPECT_FALSE(net.nodes[2].is_boundary);
  EXPECT_EQ(net.links[1].kind, LinkKind::inter_domain);
  EXPECT_TRUE(validate_substrate(net).empty());
}

TEST(ResidualSnapshot, FreshAllocateRelease) {
  auto net = triangle();
  const auto fresh = residual_snapshot(net);
  for (std::size_t i = 0; i < net.nodes.size(); ++i) EXPECT_EQ(fresh.cpu[i], net.nodes[i].cpu_capacity);
  for (std::size_t i = 0; i < net.links.size(); ++i) EXPECT_EQ(fresh.bw[i], net.links[i].bw_capacity);

  allocate_cpu(net, 0, 5);
  EXPECT_EQ(residual_snapshot(net).cpu[0], 5);
  EXPECT_EQ(fresh.cpu[0], 10);  // snapshots are copies

  release_cpu(net, 0, 5);
  EXPECT_EQ(residual_snapshot(net), fresh);
}

TEST(ResidualSnapshot, UnderflowAndOverflowAreContractViolations) {
  auto net = triangle();
  EXPECT_THROW(allocate_cpu(net, 0, 11), std::logic_error);
  EXPECT_THROW(release_cpu(net, 0, 1), std::logic_error);
  EXPECT_THROW(allocate_bw(net, 0, 51), std::logic_error);
  EXPECT_THROW(release_bw(net, 0, 1), std::logic_error);
}

TEST(ValidateRequest, Rules) {
  VirtualNetworkRequest vnr;
  vnr.add_node(3, 0, 1);
  vnr.add_node(2, 1, 2);
  vnr.add_link(0, 1, 4);
  EXPECT_FALSE(validate_request(vnr).has_value());

  auto same_domains = vnr;
  same_domains.nodes[0].candidate_domains = {2, 2};
  EXPECT_TRUE(validate_request(same_domains).has_value());

  auto disconnected = vnr;
  disconnected.add_node(1, 0, 1);
  EXPECT_TRUE(validate_request(disconnected).has_value());

  auto zero_cpu = vnr;
  zero_cpu.nodes[1].cpu_demand = 0;
  EXPECT_TRUE(validate_request(zero_cpu).has_value());
}

TEST(TextFormat, SubstrateLayout) {
  EXPECT_EQ(to_text(triangle()),
            "domains=1 nodes=3 links=3\n"
            "N 0 0 10 1 0\nN 1 0 10 1 0\nN 2 0 10 1 0\n"
            "L 0 1 50 1\nL 1 2 50 2\nL 0 2 50 9\n");
}

TEST(TextFormat, RoundTripIsBitExactOverGeneratedFiles) {
  GeneratorParams p;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng = make_rng(seed);
    const auto net = generate_substrate(p, rng);
    const auto vnr = generate_request(p, rng, static_cast<RequestId>(seed));
    const std::string net_text = to_text(net);
    const std::string vnr_text = to_text(vnr);
    const auto net2 = substrate_from_text(net_text);
    EXPECT_EQ(to_text(net2), net_text);
    EXPECT_EQ(residual_snapshot(net2), residual_snapshot(net));
    EXPECT_TRUE(validate_substrate(net2).empty());
    EXPECT_EQ(to_text(request_from_text(vnr_text)), vnr_text);
  }
}

TEST(TextFormat, MalformedInputIsRejected) {
  EXPECT_THROW(substrate_from_text(""), ParseError);
  EXPECT_THROW(substrate_from_text("domains=1 nodes=1 links=0\nN 0 0 10\n"), ParseError);
  EXPECT_THROW(substrate_from_text("domains=1 nodes=2 links=0\nN 0 0 10 1 0\n"), ParseError);
  EXPECT_THROW(substrate_from_text("domains=1 nodes=1 links=1\nN 0 0 10 1 0\nL 0 4 1 1\n"),
               ParseError);
  EXPECT_THROW(request_from_text("request=0 nodes=1 links=0\nQ 0\n"), ParseError);
  EXPECT_THROW(request_from_text("request=x nodes=1 links=0\n"), ParseError);
}

TEST(TextFormat, ResultLines) {
  EmbeddingResult r;
  r.request_id = 4;
  r.accepted = true;
  r.node_map = {{0, 2, 3}, {1, 5, 1}};
  LinkMapping lm;
  lm.vlink = 0;
  lm.vu = 0;
  lm.vv = 1;
  lm.bw = 2;
  lm.node_path = {2, 3, 5};
  lm.link_path = {7, 8};
  r.link_map = {lm};
  r.node_delay_term = 9;
  r.link_delay_term = 10;
  r.total_delay = 19;
  EXPECT_EQ(to_text(r),
            "R 4 accepted\nM 0 2\nM 1 5\nP 0 1 2 3 5\n"
            "D 9.000000 10.000000 19.000000\n");
  EXPECT_EQ(to_text(EmbeddingResult::rejected(3, RejectReason::node_cpu)),
            "R 3 rejected(node-cpu)\n");
}
