#ifndef DPVNE_EMBEDDING_HPP_
#define DPVNE_EMBEDDING_HPP_

// Turns a node assignment into a committed embedding: CPU and bandwidth
// constraint checks, delay-weighted Floyd routing over bandwidth-feasible
// links, all-or-nothing allocation, delay accounting and release.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpvne/local_control.hpp"
#include "dpvne/model.hpp"
#include "dpvne/pso.hpp"

namespace dpvne {

struct MappingRequest {
  RequestId request_id = 0;
  std::vector<NodeMapping> assignments;  // ascending vnode
  std::vector<VirtualLink> links;        // ascending id
};

struct NodeCheck {
  bool ok = true;
  RejectReason reason = RejectReason::none;
  NodeId node = -1;          // offending substrate node
  Resource shortfall = 0;    // demand - residual for node-cpu
};

inline NodeCheck check_node_constraint(const std::vector<NodeMapping>& assignments,
                                       const SubstrateNetwork& net) {
  std::set<NodeId> used;
  for (const auto& a : assignments) {
    if (!net.has_node(a.snode)) {
      throw std::invalid_argument("check_node_constraint: unknown substrate node");
    }
    if (!used.insert(a.snode).second) {
      return {false, RejectReason::node_conflict, a.snode, 0};
    }
  }
  for (const auto& a : assignments) {
    const Resource residual = net.nodes[a.snode].cpu_residual;
    if (residual < a.cpu) return {false, RejectReason::node_cpu, a.snode, a.cpu - residual};
  }
  return {};
}

// All-pairs minimal delay over links with bw_residual >= bw_filter. Ties on
// delay prefer fewer hops, then the smaller next-hop id.
struct PathMatrix {
  int n = 0;
  std::vector<Scalar> dist;
  std::vector<int> hops;
  std::vector<NodeId> next;  // first hop from i toward j, -1 if unreachable
  std::vector<LinkId> link;  // link id of a direct edge i-j, -1 otherwise

  Scalar at(NodeId i, NodeId j) const { return dist[static_cast<std::size_t>(i) * n + j]; }
  bool reachable(NodeId i, NodeId j) const { return is_finite(at(i, j)); }

  std::vector<NodeId> node_path(NodeId i, NodeId j) const {
    if (!reachable(i, j)) return {};
    std::vector<NodeId> path{i};
    while (i != j) {
      i = next[static_cast<std::size_t>(i) * n + j];
      path.push_back(i);
      if (static_cast<int>(path.size()) > n) {
        throw std::logic_error("PathMatrix: next-hop cycle");
      }
    }
    return path;
  }

  std::vector<LinkId> link_path(const std::vector<NodeId>& nodes) const {
    std::vector<LinkId> out;
    for (std::size_t k = 1; k < nodes.size(); ++k) {
      out.push_back(link[static_cast<std::size_t>(nodes[k - 1]) * n + nodes[k]]);
    }
    return out;
  }
};

inline PathMatrix floyd(const SubstrateNetwork& net, Resource bw_filter) {
  PathMatrix m;
  const int n = net.node_count();
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  m.n = n;
  m.dist.assign(nn, kInfinity);
  m.hops.assign(nn, 0);
  m.next.assign(nn, -1);
  m.link.assign(nn, -1);
  for (int i = 0; i < n; ++i) {
    m.dist[static_cast<std::size_t>(i) * n + i] = 0;
    m.next[static_cast<std::size_t>(i) * n + i] = i;
  }
  for (const auto& l : net.links) {
    if (l.bw_residual < bw_filter) continue;
    for (auto [a, b] : {std::pair{l.u, l.v}, std::pair{l.v, l.u}}) {
      const std::size_t ab = static_cast<std::size_t>(a) * n + b;
      m.dist[ab] = static_cast<Scalar>(l.delay);
      m.hops[ab] = 1;
      m.next[ab] = b;
      m.link[ab] = l.id;
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const std::size_t ik = static_cast<std::size_t>(i) * n + k;
      if (!is_finite(m.dist[ik]) || i == k) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const std::size_t kj = static_cast<std::size_t>(k) * n + j;
        const std::size_t ij = static_cast<std::size_t>(i) * n + j;
        const Scalar d = m.dist[ik] + m.dist[kj];
        if (!is_finite(d)) continue;
        const int h = m.hops[ik] + m.hops[kj];
        bool better = d < m.dist[ij];
        if (!better && d == m.dist[ij]) {
          better = h < m.hops[ij] || (h == m.hops[ij] && m.next[ik] < m.next[ij]);
        }
        if (better) {
          m.dist[ij] = d;
          m.hops[ij] = h;
          m.next[ij] = m.next[ik];
        }
      }
    }
  }
  return m;
}

// Translates candidate indices into substrate nodes. nullopt when the
// position is out of range or reuses a substrate node.
inline std::optional<MappingRequest> pre_map(const Position& best_position,
                                             const PseudoTopology& pseudo,
                                             const VirtualNetworkRequest& vnr) {
  if (best_position.size() != vnr.nodes.size() ||
      pseudo.candidates.size() != vnr.nodes.size()) {
    return std::nullopt;
  }
  MappingRequest req;
  req.request_id = vnr.id;
  std::set<NodeId> used;
  for (const auto& v : vnr.nodes) {
    const int idx = best_position[v.id];
    if (idx < 0 || idx >= static_cast<int>(pseudo.candidates[v.id].size())) {
      return std::nullopt;
    }
    const NodeId s = pseudo.candidates[v.id][idx].substrate_node;
    if (!used.insert(s).second) return std::nullopt;
    req.assignments.push_back({v.id, s, v.cpu_demand});
  }
  req.links = vnr.links;
  return req;
}

struct DelayTerms {
  Scalar node_term = 0;
  Scalar link_term = 0;
  Scalar total = 0;
};

// Recomputes the delay objective of an accepted result from its node map and
// mapped paths against the delays currently stored in `net`.
inline DelayTerms evaluate_delay(const EmbeddingResult& result,
                                 const SubstrateNetwork& net) {
  if (!result.accepted) {
    throw std::logic_error("evaluate_delay: result is not accepted");
  }
  DelayTerms t;
  for (const auto& m : result.node_map) {
    t.node_term += static_cast<Scalar>(m.cpu) * static_cast<Scalar>(net.nodes.at(m.snode).delay);
  }
  for (const auto& p : result.link_map) {
    Delay path_delay = 0;
    for (LinkId l : p.link_path) path_delay += net.links.at(l).delay;
    t.link_term += static_cast<Scalar>(p.bw) * static_cast<Scalar>(path_delay);
  }
  t.total = t.node_term + t.link_term;
  return t;
}

inline void rollback(const EmbeddingResult& partial, SubstrateNetwork& net) {
  for (const auto& p : partial.link_map) {
    for (LinkId l : p.link_path) release_bw(net, l, p.bw);
  }
  for (const auto& m : partial.node_map) release_cpu(net, m.snode, m.cpu);
}

inline EmbeddingResult map_substrate(const MappingRequest& req, SubstrateNetwork& net) {
  const NodeCheck check = check_node_constraint(req.assignments, net);
  if (!check.ok) return EmbeddingResult::rejected(req.request_id, check.reason);

  EmbeddingResult r;
  r.request_id = req.request_id;
  std::map<NodeId, NodeId> host;
  for (const auto& a : req.assignments) {
    allocate_cpu(net, a.snode, a.cpu);
    r.node_map.push_back(a);
    host[a.vnode] = a.snode;
  }

  std::vector<VirtualLink> links = req.links;
  std::sort(links.begin(), links.end(),
            [](const auto& x, const auto& y) { return x.id < y.id; });
  for (const auto& vl : links) {
    const NodeId src = host.at(vl.u), dst = host.at(vl.v);
    const PathMatrix pm = floyd(net, vl.bw_demand);
    if (!pm.reachable(src, dst)) {
      rollback(r, net);
      return EmbeddingResult::rejected(req.request_id, RejectReason::link_unreachable);
    }
    LinkMapping lm;
    lm.vlink = vl.id;
    lm.vu = vl.u;
    lm.vv = vl.v;
    lm.bw = vl.bw_demand;
    lm.node_path = pm.node_path(src, dst);
    lm.link_path = pm.link_path(lm.node_path);
    for (LinkId l : lm.link_path) allocate_bw(net, l, lm.bw);
    r.link_map.push_back(std::move(lm));
  }

  r.accepted = true;
  r.allocated = true;
  const DelayTerms t = evaluate_delay(r, net);
  r.node_delay_term = t.node_term;
  r.link_delay_term = t.link_term;
  r.total_delay = t.total;
  return r;
}

inline void release(EmbeddingResult& result, SubstrateNetwork& net) {
  if (!result.accepted) throw std::logic_error("release: result was rejected");
  if (!result.allocated) throw std::logic_error("release: result already released");
  rollback(result, net);
  result.allocated = false;
}

// Post-hoc audit of an accepted result against the request and network:
// node coverage, injectivity, candidate domains, CPU and per-link bandwidth
// within capacity, contiguous paths with matching endpoints, and delay terms.
inline std::vector<Violation> audit_embedding(const EmbeddingResult& r,
                                              const VirtualNetworkRequest& vnr,
                                              const SubstrateNetwork& net) {
  std::vector<Violation> out;
  if (!r.accepted) return out;
  auto vn = [](NodeId id) { return "vnode " + std::to_string(id); };
  auto vl = [](LinkId id) { return "vlink " + std::to_string(id); };
  if (r.node_map.size() != vnr.nodes.size()) out.push_back({"node_map", "does not cover the request"});
  std::map<NodeId, NodeId> host;
  std::set<NodeId> used;
  for (const auto& m : r.node_map) {
    if (m.vnode < 0 || m.vnode >= vnr.node_count() || !net.has_node(m.snode)) {
      out.push_back({vn(m.vnode), "unknown node"});
      continue;
    }
    host[m.vnode] = m.snode;
    if (!used.insert(m.snode).second) out.push_back({vn(m.vnode), "substrate node reused"});
    const auto& v = vnr.nodes[m.vnode];
    if (m.cpu != v.cpu_demand) out.push_back({vn(m.vnode), "cpu differs from demand"});
    if (!v.accepts_domain(net.nodes[m.snode].domain)) {
      out.push_back({vn(m.vnode), "mapped outside candidate domains"});
    }
    if (v.cpu_demand > net.nodes[m.snode].cpu_capacity) {
      out.push_back({vn(m.vnode), "cpu demand exceeds capacity"});
    }
  }
  std::map<LinkId, Resource> bw_use;
  if (r.link_map.size() != vnr.links.size()) out.push_back({"link_map", "does not cover the request"});
  for (const auto& p : r.link_map) {
    if (p.vlink < 0 || p.vlink >= vnr.link_count()) {
      out.push_back({vl(p.vlink), "unknown virtual link"});
      continue;
    }
    const auto& v = vnr.links[p.vlink];
    if (p.bw != v.bw_demand) out.push_back({vl(p.vlink), "bw differs from demand"});
    if (p.node_path.empty() || p.link_path.size() + 1 != p.node_path.size()) {
      out.push_back({vl(p.vlink), "malformed path"});
      continue;
    }
    if (!host.count(v.u) || !host.count(v.v) || p.node_path.front() != host[v.u] ||
        p.node_path.back() != host[v.v]) {
      out.push_back({vl(p.vlink), "path endpoints differ from node map"});
    }
    for (std::size_t k = 0; k < p.link_path.size(); ++k) {
      const LinkId id = p.link_path[k];
      if (id < 0 || id >= net.link_count() ||
          !net.links[id].joins(p.node_path[k], p.node_path[k + 1])) {
        out.push_back({vl(p.vlink), "path is not a contiguous walk"});
        break;
      }
      if (p.bw > net.links[id].bw_capacity) {
        out.push_back({vl(p.vlink), "bw demand exceeds a link capacity"});
      }
      bw_use[id] += p.bw;
    }
  }
  for (auto [id, use] : bw_use) {
    if (use > net.links[id].bw_capacity) {
      out.push_back({"link " + std::to_string(id), "aggregate bw exceeds capacity"});
    }
  }
  const DelayTerms t = evaluate_delay(r, net);
  if (std::abs(t.node_term - r.node_delay_term) > kTolerance ||
      std::abs(t.link_term - r.link_delay_term) > kTolerance ||
      std::abs(r.total_delay - (r.node_delay_term + r.link_delay_term)) > kTolerance) {
    out.push_back({"delay", "stored terms disagree with mapped paths"});
  }
  return out;
}

}  // namespace dpvne

#endif  // DPVNE_EMBEDDING_HPP_
