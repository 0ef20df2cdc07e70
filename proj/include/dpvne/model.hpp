#ifndef DPVNE_MODEL_HPP_
#define DPVNE_MODEL_HPP_

// Substrate and virtual network types shared by every stage of the
// embedding pipeline, plus structural validation and residual bookkeeping.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dpvne {

using NodeId = int;
using LinkId = int;
using DomainId = int;
using RequestId = int;

// Resource and delay quantities are integers; everything derived from them
// (DelayUnit, fitness, path estimates) is a double.
using Resource = std::int64_t;
using Delay = std::int64_t;
using Scalar = double;

inline constexpr Scalar kInfinity = std::numeric_limits<Scalar>::infinity();
inline constexpr Scalar kTolerance = 1e-9;

inline bool is_finite(Scalar x) { return std::isfinite(x); }

enum class LinkKind { intra_domain, inter_domain };

struct SubstrateNode {
  NodeId id = 0;
  DomainId domain = 0;
  Resource cpu_capacity = 0;
  Resource cpu_residual = 0;
  Delay delay = 0;
  bool is_boundary = false;
};

struct SubstrateLink {
  LinkId id = 0;
  NodeId u = 0;
  NodeId v = 0;
  Resource bw_capacity = 0;
  Resource bw_residual = 0;
  Delay delay = 0;
  LinkKind kind = LinkKind::intra_domain;

  NodeId other(NodeId x) const { return x == u ? v : u; }
  bool joins(NodeId a, NodeId b) const {
    return (u == a && v == b) || (u == b && v == a);
  }
};

// Node and link ids are dense: nodes[i].id == i and links[i].id == i for a
// network built through add_node/add_link. The vectors stay public so tests
// can construct malformed networks for validate_substrate.
struct SubstrateNetwork {
  int n_domains = 0;
  std::vector<SubstrateNode> nodes;
  std::vector<SubstrateLink> links;

  NodeId add_node(DomainId domain, Resource cpu, Delay delay) {
    SubstrateNode n;
    n.id = static_cast<NodeId>(nodes.size());
    n.domain = domain;
    n.cpu_capacity = cpu;
    n.cpu_residual = cpu;
    n.delay = delay;
    nodes.push_back(n);
    n_domains = std::max(n_domains, domain + 1);
    return n.id;
  }

  // Adds an undirected link and refreshes the boundary flags of its endpoints.
  LinkId add_link(NodeId u, NodeId v, Resource bw, Delay delay) {
    if (u == v) throw std::invalid_argument("add_link: self-loop");
    if (!has_node(u) || !has_node(v)) {
      throw std::invalid_argument("add_link: unknown endpoint");
    }
    if (find_link(u, v)) throw std::invalid_argument("add_link: duplicate link");
    SubstrateLink l;
    l.id = static_cast<LinkId>(links.size());
    l.u = std::min(u, v);
    l.v = std::max(u, v);
    l.bw_capacity = bw;
    l.bw_residual = bw;
    l.delay = delay;
    l.kind = nodes[u].domain == nodes[v].domain ? LinkKind::intra_domain
                                                : LinkKind::inter_domain;
    if (l.kind == LinkKind::inter_domain) {
      nodes[u].is_boundary = true;
      nodes[v].is_boundary = true;
    }
    links.push_back(l);
    return l.id;
  }

  bool has_node(NodeId id) const {
    return id >= 0 && id < static_cast<NodeId>(nodes.size()) &&
           nodes[id].id == id;
  }

  std::optional<LinkId> find_link(NodeId a, NodeId b) const {
    for (const auto& l : links) {
      if (l.joins(a, b)) return l.id;
    }
    return std::nullopt;
  }

  int node_count() const { return static_cast<int>(nodes.size()); }
  int link_count() const { return static_cast<int>(links.size()); }

  // Sorted ids of the nodes in `domain`.
  std::vector<NodeId> domain_nodes(DomainId domain) const {
    std::vector<NodeId> out;
    for (const auto& n : nodes) {
      if (n.domain == domain) out.push_back(n.id);
    }
    return out;
  }

  std::vector<NodeId> boundary_nodes(DomainId domain) const {
    std::vector<NodeId> out;
    for (const auto& n : nodes) {
      if (n.domain == domain && n.is_boundary) out.push_back(n.id);
    }
    return out;
  }

  // adjacency()[u] lists incident link ids in ascending id order.
  std::vector<std::vector<LinkId>> adjacency() const {
    std::vector<std::vector<LinkId>> adj(nodes.size());
    for (const auto& l : links) {
      adj[l.u].push_back(l.id);
      adj[l.v].push_back(l.id);
    }
    return adj;
  }
};

struct VirtualNode {
  NodeId id = 0;
  Resource cpu_demand = 0;
  std::pair<DomainId, DomainId> candidate_domains{0, 1};

  bool accepts_domain(DomainId d) const {
    return candidate_domains.first == d || candidate_domains.second == d;
  }
};

struct VirtualLink {
  LinkId id = 0;
  NodeId u = 0;
  NodeId v = 0;
  Resource bw_demand = 0;

  NodeId other(NodeId x) const { return x == u ? v : u; }
};

struct VirtualNetworkRequest {
  RequestId id = 0;
  std::vector<VirtualNode> nodes;
  std::vector<VirtualLink> links;

  NodeId add_node(Resource cpu, DomainId d1, DomainId d2) {
    VirtualNode n;
    n.id = static_cast<NodeId>(nodes.size());
    n.cpu_demand = cpu;
    n.candidate_domains = {d1, d2};
    nodes.push_back(n);
    return n.id;
  }

  LinkId add_link(NodeId u, NodeId v, Resource bw) {
    VirtualLink l;
    l.id = static_cast<LinkId>(links.size());
    l.u = std::min(u, v);
    l.v = std::max(u, v);
    l.bw_demand = bw;
    links.push_back(l);
    return l.id;
  }

  int node_count() const { return static_cast<int>(nodes.size()); }
  int link_count() const { return static_cast<int>(links.size()); }
};

// Why a request was not embedded.
enum class RejectReason {
  none,
  no_candidates,
  infeasible_assignment,
  node_cpu,
  node_conflict,
  link_unreachable,
  sampling_exhausted,
};

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::no_candidates: return "no-candidates";
    case RejectReason::infeasible_assignment: return "infeasible-assignment";
    case RejectReason::node_cpu: return "node-cpu";
    case RejectReason::node_conflict: return "node-conflict";
    case RejectReason::link_unreachable: return "link-unreachable";
    case RejectReason::sampling_exhausted: return "sampling-exhausted";
  }
  return "unknown";
}

struct NodeMapping {
  NodeId vnode = 0;
  NodeId snode = 0;
  Resource cpu = 0;
};

struct LinkMapping {
  LinkId vlink = 0;
  NodeId vu = 0;
  NodeId vv = 0;
  Resource bw = 0;
  std::vector<NodeId> node_path;  // mapped(vu) ... mapped(vv)
  std::vector<LinkId> link_path;  // node_path.size() - 1 substrate links
};

struct EmbeddingResult {
  RequestId request_id = 0;
  bool accepted = false;
  RejectReason reason = RejectReason::none;
  std::vector<NodeMapping> node_map;  // ascending vnode
  std::vector<LinkMapping> link_map;  // ascending vlink
  Scalar node_delay_term = 0;
  Scalar link_delay_term = 0;
  Scalar total_delay = 0;
  // True while the resources of an accepted result are debited.
  bool allocated = false;

  static EmbeddingResult rejected(RequestId id, RejectReason why) {
    EmbeddingResult r;
    r.request_id = id;
    r.reason = why;
    return r;
  }
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string subject;  // e.g. "node 3", "link 7", "domain 2"
  std::string rule;
};

namespace detail {

inline bool connected_over(int n, const std::vector<std::pair<int, int>>& edges,
                           const std::vector<int>& members) {
  if (members.size() <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(members.front());
  seen[members.front()] = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : adj[x]) {
      if (!seen[y]) {
        seen[y] = 1;
        q.push(y);
      }
    }
  }
  return std::all_of(members.begin(), members.end(),
                     [&](int m) { return seen[m] != 0; });
}

}  // namespace detail

inline std::vector<Violation> validate_substrate(const SubstrateNetwork& net) {
  std::vector<Violation> out;
  auto node_subject = [](NodeId id) { return "node " + std::to_string(id); };
  auto link_subject = [](LinkId id) { return "link " + std::to_string(id); };
  const int n = net.node_count();

  for (int i = 0; i < n; ++i) {
    const auto& node = net.nodes[i];
    if (node.id != i) out.push_back({node_subject(node.id), "id not dense"});
    if (node.cpu_residual < 0 || node.cpu_residual > node.cpu_capacity) {
      out.push_back({node_subject(node.id), "cpu residual outside [0, capacity]"});
    }
    if (node.delay < 0) out.push_back({node_subject(node.id), "negative delay"});
    if (node.domain < 0 || node.domain >= net.n_domains) {
      out.push_back({node_subject(node.id), "unknown domain"});
    }
  }

  std::vector<char> crosses(n, 0);
  std::map<std::pair<NodeId, NodeId>, int> pair_count;
  std::vector<std::pair<int, int>> intra_edges, domain_edges;
  for (const auto& l : net.links) {
    const bool endpoints_ok = net.has_node(l.u) && net.has_node(l.v);
    if (!endpoints_ok) {
      out.push_back({link_subject(l.id), "endpoint references missing node"});
      continue;
    }
    if (l.u == l.v) {
      out.push_back({link_subject(l.id), "self-loop"});
      continue;
    }
    if (++pair_count[{std::min(l.u, l.v), std::max(l.u, l.v)}] == 2) {
      out.push_back({link_subject(l.id), "parallel link"});
    }
    if (l.bw_residual < 0 || l.bw_residual > l.bw_capacity) {
      out.push_back({link_subject(l.id), "bw residual outside [0, capacity]"});
    }
    if (l.delay < 0) out.push_back({link_subject(l.id), "negative delay"});
    const DomainId du = net.nodes[l.u].domain, dv = net.nodes[l.v].domain;
    const bool inter = du != dv;
    if (inter != (l.kind == LinkKind::inter_domain)) {
      out.push_back({link_subject(l.id), "kind disagrees with endpoint domains"});
    }
    if (inter) {
      crosses[l.u] = crosses[l.v] = 1;
      if (du >= 0 && dv >= 0 && du < net.n_domains && dv < net.n_domains) {
        domain_edges.emplace_back(du, dv);
      }
    } else {
      intra_edges.emplace_back(l.u, l.v);
    }
  }

  for (int i = 0; i < n; ++i) {
    if (net.nodes[i].is_boundary != (crosses[i] != 0)) {
      out.push_back({node_subject(i), "boundary flag disagrees with links"});
    }
  }

  if (net.n_domains > 0) {
    for (DomainId d = 0; d < net.n_domains; ++d) {
      if (!detail::connected_over(n, intra_edges, net.domain_nodes(d))) {
        out.push_back({"domain " + std::to_string(d),
                       "intra-domain subgraph disconnected"});
      }
    }
    std::vector<int> all_domains(net.n_domains);
    std::iota(all_domains.begin(), all_domains.end(), 0);
    if (!detail::connected_over(net.n_domains, domain_edges, all_domains)) {
      out.push_back({"domains", "inter-domain graph disconnected"});
    }
  }
  return out;
}

// Returns a human-readable reason when the request is malformed.
inline std::optional<std::string> validate_request(
    const VirtualNetworkRequest& vnr) {
  const int n = vnr.node_count();
  for (int i = 0; i < n; ++i) {
    const auto& v = vnr.nodes[i];
    if (v.id != i) return "virtual node ids not dense";
    if (v.cpu_demand <= 0) return "non-positive cpu demand";
    if (v.candidate_domains.first == v.candidate_domains.second) {
      return "candidate domains not distinct";
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& l : vnr.links) {
    if (l.u < 0 || l.v < 0 || l.u >= n || l.v >= n) return "unknown endpoint";
    if (l.u == l.v) return "self-loop";
    if (l.bw_demand <= 0) return "non-positive bw demand";
    edges.emplace_back(l.u, l.v);
  }
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  if (!detail::connected_over(n, edges, all)) return "request disconnected";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Residual bookkeeping

struct ResidualSnapshot {
  std::vector<Resource> cpu;  // by node id
  std::vector<Resource> bw;   // by link id

  bool operator==(const ResidualSnapshot&) const = default;
};

inline ResidualSnapshot residual_snapshot(const SubstrateNetwork& net) {
  ResidualSnapshot s;
  s.cpu.reserve(net.nodes.size());
  s.bw.reserve(net.links.size());
  for (const auto& n : net.nodes) s.cpu.push_back(n.cpu_residual);
  for (const auto& l : net.links) s.bw.push_back(l.bw_residual);
  return s;
}

inline void allocate_cpu(SubstrateNetwork& net, NodeId id, Resource amount) {
  auto& n = net.nodes.at(id);
  if (amount < 0 || n.cpu_residual < amount) {
    throw std::logic_error("allocate_cpu: residual underflow on node " +
                           std::to_string(id));
  }
  n.cpu_residual -= amount;
}

inline void release_cpu(SubstrateNetwork& net, NodeId id, Resource amount) {
  auto& n = net.nodes.at(id);
  if (amount < 0 || n.cpu_residual + amount > n.cpu_capacity) {
    throw std::logic_error("release_cpu: residual overflow on node " +
                           std::to_string(id));
  }
  n.cpu_residual += amount;
}

inline void allocate_bw(SubstrateNetwork& net, LinkId id, Resource amount) {
  auto& l = net.links.at(id);
  if (amount < 0 || l.bw_residual < amount) {
    throw std::logic_error("allocate_bw: residual underflow on link " +
                           std::to_string(id));
  }
  l.bw_residual -= amount;
}

inline void release_bw(SubstrateNetwork& net, LinkId id, Resource amount) {
  auto& l = net.links.at(id);
  if (amount < 0 || l.bw_residual + amount > l.bw_capacity) {
    throw std::logic_error("release_bw: residual overflow on link " +
                           std::to_string(id));
  }
  l.bw_residual += amount;
}

}  // namespace dpvne

#endif  // DPVNE_MODEL_HPP_
