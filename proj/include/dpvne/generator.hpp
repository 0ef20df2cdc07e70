#ifndef DPVNE_GENERATOR_HPP_
#define DPVNE_GENERATOR_HPP_

// Seeded random multi-domain substrates and virtual network requests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dpvne/model.hpp"

namespace dpvne {

using Rng = std::mt19937_64;

// Independent stream for (seed, stream, index); used so that request i of a
// run does not depend on how many draws earlier requests consumed.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0,
                    std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

struct IntRange {
  std::int64_t lo = 1;
  std::int64_t hi = 1;

  bool contains(std::int64_t x) const { return lo <= x && x <= hi; }
  bool operator==(const IntRange&) const = default;
};

inline std::int64_t draw(Rng& rng, IntRange r) {
  return std::uniform_int_distribution<std::int64_t>(r.lo, r.hi)(rng);
}

inline bool coin(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(rng);
}

inline int pick_index(Rng& rng, std::size_t n) {
  return static_cast<int>(
      std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
}

struct GeneratorParams {
  int n_domains = 5;
  int n_substrate_nodes = 30;  // total over all domains
  IntRange substrate_cpu_range{100, 300};
  IntRange substrate_bw_range{1000, 3000};
  IntRange substrate_link_delay_range{1, 10};
  IntRange substrate_node_delay_range{1, 10};
  double intra_connection_rate = 0.6;
  int boundary_nodes_per_domain = 2;
  int vnr_nodes = 4;
  IntRange vnr_cpu_range{1, 10};
  IntRange vnr_bw_range{1, 10};
  std::uint64_t seed = 1;

  // Nodes in domain d; the remainder goes round-robin to the first domains.
  int domain_size(int d) const {
    return n_substrate_nodes / n_domains + (d < n_substrate_nodes % n_domains);
  }
};

// Throws std::invalid_argument naming the first offending parameter.
inline void check_params(const GeneratorParams& p) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("generator params: " + what);
  };
  auto check_range = [&](IntRange r, const char* name) {
    if (r.lo <= 0 || r.lo > r.hi) fail(std::string(name) + " must be [lo,hi], 0 < lo <= hi");
  };
  if (p.n_domains < 2) fail("n_domains must be >= 2");
  if (p.n_substrate_nodes < p.n_domains) fail("n_substrate_nodes < n_domains");
  check_range(p.substrate_cpu_range, "substrate_cpu_range");
  check_range(p.substrate_bw_range, "substrate_bw_range");
  check_range(p.substrate_link_delay_range, "substrate_link_delay_range");
  check_range(p.substrate_node_delay_range, "substrate_node_delay_range");
  check_range(p.vnr_cpu_range, "vnr_cpu_range");
  check_range(p.vnr_bw_range, "vnr_bw_range");
  if (!(p.intra_connection_rate >= 0.0 && p.intra_connection_rate <= 1.0)) {
    fail("intra_connection_rate must lie in [0,1]");
  }
  if (p.boundary_nodes_per_domain < 1) fail("boundary_nodes_per_domain must be >= 1");
  if (p.boundary_nodes_per_domain > p.domain_size(p.n_domains - 1)) {
    fail("boundary_nodes_per_domain exceeds nodes in the smallest domain");
  }
  if (p.vnr_nodes < 1) fail("vnr_nodes must be >= 1");
}

inline SubstrateNetwork generate_substrate(const GeneratorParams& p, Rng& rng) {
  check_params(p);
  SubstrateNetwork net;
  net.n_domains = p.n_domains;

  std::vector<std::vector<NodeId>> members(p.n_domains);
  for (DomainId d = 0; d < p.n_domains; ++d) {
    for (int i = 0; i < p.domain_size(d); ++i) {
      const Resource cpu = draw(rng, p.substrate_cpu_range);
      const Delay delay = draw(rng, p.substrate_node_delay_range);
      members[d].push_back(net.add_node(d, cpu, delay));
    }
  }

  auto link = [&](NodeId a, NodeId b) {
    const Resource bw = draw(rng, p.substrate_bw_range);
    const Delay delay = draw(rng, p.substrate_link_delay_range);
    net.add_link(a, b, bw, delay);
  };

  // Intra-domain: random spanning tree, then independent extra pairs.
  for (DomainId d = 0; d < p.n_domains; ++d) {
    const auto& m = members[d];
    std::vector<NodeId> order = m;
    std::shuffle(order.begin(), order.end(), rng);
    std::set<std::pair<NodeId, NodeId>> linked;
    for (std::size_t i = 1; i < order.size(); ++i) {
      const NodeId parent = order[pick_index(rng, i)];
      const NodeId a = std::min(order[i], parent), b = std::max(order[i], parent);
      linked.insert({a, b});
      link(a, b);
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        if (linked.count({m[i], m[j]})) continue;
        if (coin(rng, p.intra_connection_rate)) link(m[i], m[j]);
      }
    }
  }

  // Boundary candidates per domain, sorted by id.
  std::vector<std::vector<NodeId>> boundary(p.n_domains);
  for (DomainId d = 0; d < p.n_domains; ++d) {
    std::vector<NodeId> pool = members[d];
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(p.boundary_nodes_per_domain);
    std::sort(pool.begin(), pool.end());
    boundary[d] = std::move(pool);
  }

  // Domain graph: ring plus one random chord when a non-ring pair exists.
  std::set<std::pair<DomainId, DomainId>> domain_edges;
  for (DomainId d = 0; d < p.n_domains; ++d) {
    const DomainId e = (d + 1) % p.n_domains;
    domain_edges.insert({std::min(d, e), std::max(d, e)});
  }
  std::vector<std::pair<DomainId, DomainId>> chords;
  for (DomainId d = 0; d < p.n_domains; ++d) {
    for (DomainId e = d + 1; e < p.n_domains; ++e) {
      if (!domain_edges.count({d, e})) chords.emplace_back(d, e);
    }
  }
  std::vector<std::pair<DomainId, DomainId>> domain_links(domain_edges.begin(),
                                                          domain_edges.end());
  if (!chords.empty()) domain_links.push_back(chords[pick_index(rng, chords.size())]);

  std::vector<int> inter_degree(net.node_count(), 0);
  auto by_usage = [&](DomainId d) {
    std::vector<NodeId> c = boundary[d];
    std::stable_sort(c.begin(), c.end(), [&](NodeId a, NodeId b) {
      return inter_degree[a] < inter_degree[b];
    });
    return c;
  };
  auto connect_domains = [&](DomainId d, DomainId e, std::optional<NodeId> from) {
    const std::vector<NodeId> left = from ? std::vector<NodeId>{*from} : by_usage(d);
    for (NodeId a : left) {
      for (NodeId b : by_usage(e)) {
        if (net.find_link(a, b)) continue;
        link(a, b);
        ++inter_degree[a];
        ++inter_degree[b];
        return;
      }
    }
  };
  for (auto [d, e] : domain_links) connect_domains(d, e, std::nullopt);

  // Every flagged boundary node gets at least one inter-domain link.
  std::vector<std::vector<DomainId>> neighbours(p.n_domains);
  for (auto [d, e] : domain_links) {
    neighbours[d].push_back(e);
    neighbours[e].push_back(d);
  }
  for (DomainId d = 0; d < p.n_domains; ++d) {
    for (NodeId b : boundary[d]) {
      if (inter_degree[b] > 0) continue;
      const DomainId e = neighbours[d][pick_index(rng, neighbours[d].size())];
      connect_domains(d, e, b);
    }
  }
  return net;
}

inline VirtualNetworkRequest generate_request(const GeneratorParams& p, Rng& rng,
                                              RequestId id) {
  check_params(p);
  VirtualNetworkRequest vnr;
  vnr.id = id;
  for (int i = 0; i < p.vnr_nodes; ++i) {
    const Resource cpu = draw(rng, p.vnr_cpu_range);
    DomainId a = pick_index(rng, p.n_domains);
    DomainId b = pick_index(rng, p.n_domains - 1);
    if (b >= a) ++b;
    vnr.add_node(cpu, std::min(a, b), std::max(a, b));
  }

  std::set<std::pair<NodeId, NodeId>> pairs;
  for (int i = 1; i < p.vnr_nodes; ++i) {
    pairs.insert({pick_index(rng, i), i});
  }
  for (int i = 0; i < p.vnr_nodes; ++i) {
    for (int j = i + 1; j < p.vnr_nodes; ++j) {
      if (pairs.count({i, j})) continue;
      if (coin(rng, 0.5)) pairs.insert({i, j});
    }
  }
  for (auto [u, v] : pairs) vnr.add_link(u, v, draw(rng, p.vnr_bw_range));
  return vnr;
}

}  // namespace dpvne

#endif  // DPVNE_GENERATOR_HPP_
