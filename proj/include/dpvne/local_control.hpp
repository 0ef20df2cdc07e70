#ifndef DPVNE_LOCAL_CONTROL_HPP_
#define DPVNE_LOCAL_CONTROL_HPP_

// Local controller stage: request partitioning, DelayUnit scoring, candidate
// selection and assembly of the pseudo-topology handed to the optimizer.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpvne/model.hpp"

namespace dpvne {

struct Subgraph {
  struct Incident {
    VirtualLink link;
    VirtualNode neighbor;
  };
  VirtualNode center;
  std::vector<Incident> incident_links;  // ascending link id
};

inline std::vector<Subgraph> partition_request(const VirtualNetworkRequest& vnr) {
  std::vector<Subgraph> out(vnr.nodes.size());
  for (const auto& n : vnr.nodes) out[n.id].center = n;
  for (const auto& l : vnr.links) {
    out[l.u].incident_links.push_back({l, vnr.nodes[l.v]});
    out[l.v].incident_links.push_back({l, vnr.nodes[l.u]});
  }
  return out;
}

namespace detail {

inline void floyd_closure(std::vector<Scalar>& d, int n) {
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const Scalar dik = d[i * n + k];
      if (!is_finite(dik)) continue;
      for (int j = 0; j < n; ++j) {
        const Scalar cand = dik + d[k * n + j];
        if (cand < d[i * n + j]) d[i * n + j] = cand;
      }
    }
  }
}

}  // namespace detail

// All-pairs shortest delay inside one domain, over intra-domain links only.
// Bandwidth residuals are ignored at estimate time.
struct DomainDelayMatrix {
  DomainId domain = 0;
  std::vector<NodeId> members;  // sorted
  std::vector<int> index;       // by substrate node id, -1 when not a member
  std::vector<Scalar> dist;     // members.size()^2, row-major

  bool contains(NodeId x) const {
    return x >= 0 && x < static_cast<NodeId>(index.size()) && index[x] >= 0;
  }
  Scalar at(NodeId a, NodeId b) const {
    if (!contains(a) || !contains(b)) return kInfinity;
    return dist[index[a] * members.size() + index[b]];
  }
};

inline DomainDelayMatrix intra_domain_delay_matrix(const SubstrateNetwork& net,
                                                   DomainId domain) {
  if (domain < 0 || domain >= net.n_domains) {
    throw std::invalid_argument("intra_domain_delay_matrix: unknown domain");
  }
  DomainDelayMatrix m;
  m.domain = domain;
  m.members = net.domain_nodes(domain);
  m.index.assign(net.nodes.size(), -1);
  const int n = static_cast<int>(m.members.size());
  for (int i = 0; i < n; ++i) m.index[m.members[i]] = i;
  m.dist.assign(static_cast<std::size_t>(n) * n, kInfinity);
  for (int i = 0; i < n; ++i) m.dist[i * n + i] = 0;
  for (const auto& l : net.links) {
    if (l.kind != LinkKind::intra_domain || !m.contains(l.u)) continue;
    const int a = m.index[l.u], b = m.index[l.v];
    const Scalar w = static_cast<Scalar>(l.delay);
    if (w < m.dist[a * n + b]) m.dist[a * n + b] = m.dist[b * n + a] = w;
  }
  detail::floyd_closure(m.dist, n);
  return m;
}

// Everything the local controllers derive from the substrate before any
// virtual node is scored: per-domain delay matrices, the cost of leaving a
// node's domain toward each other domain, and shortest delays between
// boundary nodes across domains.
struct DelayEstimates {
  int n_domains = 0;
  std::vector<DomainDelayMatrix> domains;
  std::vector<int> domain_hops;  // n_domains^2, BFS hops on the domain graph
  // exit_delay[node * n_domains + target]: min over exits b of the node's
  // domain of intra(node, b) + delay of an inter-domain link (b, x) whose far
  // domain is as close as possible (in domain hops) to `target`.
  std::vector<Scalar> exit_delay;
  std::vector<NodeId> boundary;     // all boundary nodes, ascending
  std::vector<int> boundary_index;  // by node id, -1 when not boundary
  std::vector<Scalar> boundary_dist;
  std::vector<Resource> incident_bw;  // residual bandwidth summed per node

  Scalar hops(DomainId a, DomainId b) const {
    const int h = domain_hops[a * n_domains + b];
    return h < 0 ? kInfinity : h;
  }

  Scalar intra(NodeId a, NodeId b, DomainId domain) const {
    return domains[domain].at(a, b);
  }

  Scalar between_boundaries(NodeId a, NodeId b) const {
    const int ia = boundary_index[a], ib = boundary_index[b];
    return boundary_dist[ia * boundary.size() + ib];
  }
};

inline DelayEstimates build_delay_estimates(const SubstrateNetwork& net) {
  DelayEstimates est;
  const int nd = net.n_domains;
  const int n = net.node_count();
  est.n_domains = nd;
  for (DomainId d = 0; d < nd; ++d) {
    est.domains.push_back(intra_domain_delay_matrix(net, d));
  }

  std::vector<std::vector<DomainId>> dadj(nd);
  for (const auto& l : net.links) {
    if (l.kind != LinkKind::inter_domain) continue;
    dadj[net.nodes[l.u].domain].push_back(net.nodes[l.v].domain);
    dadj[net.nodes[l.v].domain].push_back(net.nodes[l.u].domain);
  }
  est.domain_hops.assign(static_cast<std::size_t>(nd) * nd, -1);
  for (DomainId s = 0; s < nd; ++s) {
    std::queue<DomainId> q;
    q.push(s);
    est.domain_hops[s * nd + s] = 0;
    while (!q.empty()) {
      const DomainId x = q.front();
      q.pop();
      for (DomainId y : dadj[x]) {
        if (est.domain_hops[s * nd + y] < 0) {
          est.domain_hops[s * nd + y] = est.domain_hops[s * nd + x] + 1;
          q.push(y);
        }
      }
    }
  }

  // Inter-domain links leaving each domain, as (boundary, far domain, delay).
  struct Exit {
    NodeId from;
    DomainId to;
    Scalar delay;
  };
  std::vector<std::vector<Exit>> exits(nd);
  for (const auto& l : net.links) {
    if (l.kind != LinkKind::inter_domain) continue;
    const DomainId du = net.nodes[l.u].domain, dv = net.nodes[l.v].domain;
    exits[du].push_back({l.u, dv, static_cast<Scalar>(l.delay)});
    exits[dv].push_back({l.v, du, static_cast<Scalar>(l.delay)});
  }
  est.exit_delay.assign(static_cast<std::size_t>(n) * nd, kInfinity);
  for (DomainId d = 0; d < nd; ++d) {
    const auto& matrix = est.domains[d];
    for (DomainId target = 0; target < nd; ++target) {
      if (target == d) continue;
      Scalar best_hops = kInfinity;
      for (const auto& e : exits[d]) best_hops = std::min(best_hops, est.hops(e.to, target));
      if (!is_finite(best_hops)) continue;
      for (NodeId x : matrix.members) {
        Scalar best = kInfinity;
        for (const auto& e : exits[d]) {
          if (est.hops(e.to, target) != best_hops) continue;
          best = std::min(best, matrix.at(x, e.from) + e.delay);
        }
        est.exit_delay[static_cast<std::size_t>(x) * nd + target] = best;
      }
    }
  }

  // Boundary graph: inter-domain links plus intra-domain boundary closures.
  est.boundary_index.assign(n, -1);
  for (const auto& node : net.nodes) {
    if (node.is_boundary) {
      est.boundary_index[node.id] = static_cast<int>(est.boundary.size());
      est.boundary.push_back(node.id);
    }
  }
  const int nb = static_cast<int>(est.boundary.size());
  est.boundary_dist.assign(static_cast<std::size_t>(nb) * nb, kInfinity);
  for (int i = 0; i < nb; ++i) {
    const NodeId a = est.boundary[i];
    for (int j = 0; j < nb; ++j) {
      const NodeId b = est.boundary[j];
      if (net.nodes[a].domain == net.nodes[b].domain) {
        est.boundary_dist[i * nb + j] = est.intra(a, b, net.nodes[a].domain);
      }
    }
  }
  for (const auto& l : net.links) {
    if (l.kind != LinkKind::inter_domain) continue;
    const int a = est.boundary_index[l.u], b = est.boundary_index[l.v];
    if (a < 0 || b < 0) continue;
    const Scalar w = static_cast<Scalar>(l.delay);
    if (w < est.boundary_dist[a * nb + b]) {
      est.boundary_dist[a * nb + b] = est.boundary_dist[b * nb + a] = w;
    }
  }
  detail::floyd_closure(est.boundary_dist, nb);

  est.incident_bw.assign(n, 0);
  for (const auto& l : net.links) {
    est.incident_bw[l.u] += l.bw_residual;
    est.incident_bw[l.v] += l.bw_residual;
  }
  return est;
}

// Link delay measure for a candidate in `cand_domain` whose neighbour may map
// into `neighbor_domain`: zero inside one domain, otherwise the cheapest exit.
inline Scalar ldelay(const DelayEstimates& est, NodeId cand, DomainId cand_domain,
                     DomainId neighbor_domain) {
  if (cand_domain == neighbor_domain) return 0;
  return est.exit_delay[static_cast<std::size_t>(cand) * est.n_domains +
                        neighbor_domain];
}

inline Scalar delay_unit(const VirtualNode& center, NodeId cand,
                         const Subgraph& subgraph, const SubstrateNetwork& net,
                         const DelayEstimates& est) {
  const auto& node = net.nodes.at(cand);
  if (!center.accepts_domain(node.domain)) {
    throw std::invalid_argument("delay_unit: substrate node " +
                                std::to_string(cand) +
                                " is outside the candidate domains");
  }
  const Scalar node_term = static_cast<Scalar>(center.cpu_demand) *
                           static_cast<Scalar>(node.delay);
  if (subgraph.incident_links.empty()) return node_term;
  Scalar link_sum = 0;
  for (const auto& inc : subgraph.incident_links) {
    const Scalar bw = static_cast<Scalar>(inc.link.bw_demand);
    const auto [d1, d2] = inc.neighbor.candidate_domains;
    link_sum += bw * ldelay(est, cand, node.domain, d1);
    link_sum += bw * ldelay(est, cand, node.domain, d2);
  }
  return node_term + link_sum / static_cast<Scalar>(subgraph.incident_links.size());
}

struct CandidateNode {
  NodeId virtual_node = 0;
  NodeId substrate_node = 0;
  DomainId domain = 0;
  Scalar delay_unit = 0;
  Resource cpu_residual = 0;
  Delay node_delay = 0;
  Resource incident_bw_residual = 0;  // sum over incident substrate links
};

// Strict ordering on (DelayUnit, node id) with DelayUnit ties at kTolerance.
inline bool delay_unit_less(Scalar a, NodeId ida, Scalar b, NodeId idb) {
  const Scalar scale = std::max({Scalar{1}, std::abs(a), std::abs(b)});
  if (is_finite(a) && is_finite(b) && std::abs(a - b) <= kTolerance * scale) {
    return ida < idb;
  }
  if (a == b) return ida < idb;
  return a < b;
}

// Per-request marks; a marked node is already a candidate of another virtual
// node of the same request.
using CandidateMarks = std::vector<char>;

inline std::vector<CandidateNode> select_candidates(const Subgraph& subgraph,
                                                    const SubstrateNetwork& net,
                                                    int k,
                                                    const DelayEstimates& est,
                                                    CandidateMarks& marks) {
  if (k < 1) throw std::invalid_argument("select_candidates: k must be >= 1");
  marks.resize(net.nodes.size(), 0);
  const VirtualNode& center = subgraph.center;
  std::vector<CandidateNode> out;
  for (DomainId d : {center.candidate_domains.first, center.candidate_domains.second}) {
    std::vector<CandidateNode> scored;
    for (NodeId x : est.domains.at(d).members) {
      const auto& node = net.nodes[x];
      if (marks[x] || node.cpu_residual < center.cpu_demand) continue;
      CandidateNode c;
      c.virtual_node = center.id;
      c.substrate_node = x;
      c.domain = d;
      c.delay_unit = delay_unit(center, x, subgraph, net, est);
      c.cpu_residual = node.cpu_residual;
      c.node_delay = node.delay;
      scored.push_back(c);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      return delay_unit_less(a.delay_unit, a.substrate_node, b.delay_unit,
                             b.substrate_node);
    });
    if (static_cast<int>(scored.size()) > k) scored.resize(k);
    for (auto& c : scored) {
      marks[c.substrate_node] = 1;
      out.push_back(c);
    }
  }
  for (auto& c : out) c.incident_bw_residual = est.incident_bw[c.substrate_node];
  return out;
}

inline std::vector<CandidateNode> select_candidates(const Subgraph& subgraph,
                                                    const SubstrateNetwork& net,
                                                    int k) {
  CandidateMarks marks(net.nodes.size(), 0);
  return select_candidates(subgraph, net, k, build_delay_estimates(net), marks);
}

// Runs candidate selection for every virtual node in id order, sharing one
// set of marks across the request.
inline std::vector<std::vector<CandidateNode>> collect_candidates(
    const VirtualNetworkRequest& vnr, const SubstrateNetwork& net, int k,
    const DelayEstimates& est) {
  CandidateMarks marks(net.nodes.size(), 0);
  std::vector<std::vector<CandidateNode>> out;
  for (const auto& sg : partition_request(vnr)) {
    out.push_back(select_candidates(sg, net, k, est, marks));
  }
  return out;
}

struct InterDomainLink {
  NodeId u = 0;
  NodeId v = 0;
  Delay delay = 0;
};

struct PseudoTopology {
  RequestId request_id = 0;
  std::vector<VirtualNode> vnodes;
  std::vector<VirtualLink> vlinks;
  std::vector<std::vector<CandidateNode>> candidates;  // per virtual node
  // link_estimates[l][i * |cand(v)| + j]: delay estimate between candidate i
  // of vlinks[l].u and candidate j of vlinks[l].v.
  std::vector<std::vector<Scalar>> link_estimates;
  std::vector<std::pair<NodeId, Resource>> boundary_cpu;
  std::vector<InterDomainLink> inter_links;
  DelayEstimates estimates;

  Scalar estimate(int link, int i, int j) const {
    const auto& l = vlinks[link];
    return link_estimates[link][static_cast<std::size_t>(i) * candidates[l.v].size() + j];
  }
};

// Delay estimate between two substrate nodes. Same-domain pairs stay inside
// the domain; cross-domain pairs go candidate -> boundary -> ... -> boundary
// -> candidate through the boundary graph.
inline Scalar estimate_pair_delay(const DelayEstimates& est,
                                  const SubstrateNetwork& net, NodeId a, NodeId b) {
  const DomainId da = net.nodes[a].domain, db = net.nodes[b].domain;
  if (da == db) return est.intra(a, b, da);
  Scalar best = kInfinity;
  for (NodeId b1 : est.boundary) {
    if (net.nodes[b1].domain != da) continue;
    const Scalar head = est.intra(a, b1, da);
    if (!is_finite(head)) continue;
    for (NodeId b2 : est.boundary) {
      if (net.nodes[b2].domain != db) continue;
      best = std::min(best, head + est.between_boundaries(b1, b2) + est.intra(b2, b, db));
    }
  }
  return best;
}

// nullopt when some virtual node has no candidate.
inline std::optional<PseudoTopology> build_pseudo_topology(
    const VirtualNetworkRequest& vnr,
    std::vector<std::vector<CandidateNode>> candidates,
    const SubstrateNetwork& net, DelayEstimates est) {
  if (candidates.size() != vnr.nodes.size()) {
    throw std::invalid_argument("build_pseudo_topology: one candidate list per virtual node");
  }
  for (const auto& c : candidates) {
    if (c.empty()) return std::nullopt;
  }
  PseudoTopology p;
  p.request_id = vnr.id;
  p.vnodes = vnr.nodes;
  p.vlinks = vnr.links;
  p.candidates = std::move(candidates);
  for (const auto& l : vnr.links) {
    const auto& cu = p.candidates[l.u];
    const auto& cv = p.candidates[l.v];
    std::vector<Scalar> m;
    m.reserve(cu.size() * cv.size());
    for (const auto& a : cu) {
      for (const auto& b : cv) {
        m.push_back(estimate_pair_delay(est, net, a.substrate_node, b.substrate_node));
      }
    }
    p.link_estimates.push_back(std::move(m));
  }
  for (NodeId b : est.boundary) p.boundary_cpu.emplace_back(b, net.nodes[b].cpu_residual);
  for (const auto& l : net.links) {
    if (l.kind == LinkKind::inter_domain) p.inter_links.push_back({l.u, l.v, l.delay});
  }
  p.estimates = std::move(est);
  return p;
}

inline std::optional<PseudoTopology> build_pseudo_topology(
    const VirtualNetworkRequest& vnr,
    std::vector<std::vector<CandidateNode>> candidates,
    const SubstrateNetwork& net) {
  return build_pseudo_topology(vnr, std::move(candidates), net,
                               build_delay_estimates(net));
}

//   pseudo request=<id> vnodes=<n> vlinks=<n>
//   C <vnode> <snode> <domain> <delay_unit> <cpu_residual> <node_delay>
//   X <vlink> <i> <j> <estimate>
inline void write_pseudo_topology(std::ostream& os, const PseudoTopology& p) {
  auto num = [](Scalar x) {
    if (!is_finite(x)) return std::string("inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return std::string(buf);
  };
  os << "pseudo request=" << p.request_id << " vnodes=" << p.vnodes.size()
     << " vlinks=" << p.vlinks.size() << '\n';
  for (const auto& list : p.candidates) {
    for (const auto& c : list) {
      os << "C " << c.virtual_node << ' ' << c.substrate_node << ' ' << c.domain
         << ' ' << num(c.delay_unit) << ' ' << c.cpu_residual << ' '
         << c.node_delay << '\n';
    }
  }
  for (std::size_t l = 0; l < p.vlinks.size(); ++l) {
    const auto& vl = p.vlinks[l];
    for (std::size_t i = 0; i < p.candidates[vl.u].size(); ++i) {
      for (std::size_t j = 0; j < p.candidates[vl.v].size(); ++j) {
        os << "X " << vl.id << ' ' << i << ' ' << j << ' '
           << num(p.estimate(static_cast<int>(l), static_cast<int>(i),
                             static_cast<int>(j)))
           << '\n';
      }
    }
  }
}

}  // namespace dpvne

#endif  // DPVNE_LOCAL_CONTROL_HPP_
