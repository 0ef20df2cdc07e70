#ifndef DPVNE_BASELINES_HPP_
#define DPVNE_BASELINES_HPP_

// The full delay-predictive pipeline plus simplified comparison embedders.
// Every embedder ends in map_substrate, so they differ only in how node
// assignments are chosen.

#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dpvne/embedding.hpp"
#include "dpvne/generator.hpp"
#include "dpvne/local_control.hpp"
#include "dpvne/pso.hpp"

namespace dpvne {

enum class EmbedderKind { dp_vne, greedy_delay, random_candidate, min_bw_cost };

inline const char* to_string(EmbedderKind k) {
  switch (k) {
    case EmbedderKind::dp_vne: return "dp-vne";
    case EmbedderKind::greedy_delay: return "greedy-delay";
    case EmbedderKind::random_candidate: return "random-candidate";
    case EmbedderKind::min_bw_cost: return "min-bw-cost";
  }
  return "unknown";
}

inline std::optional<EmbedderKind> parse_embedder_kind(std::string_view tag) {
  for (auto k : {EmbedderKind::dp_vne, EmbedderKind::greedy_delay,
                 EmbedderKind::random_candidate, EmbedderKind::min_bw_cost}) {
    if (tag == to_string(k)) return k;
  }
  return std::nullopt;
}

namespace detail {

inline EmbeddingResult commit(const std::vector<NodeId>& hosts,
                              const VirtualNetworkRequest& vnr,
                              SubstrateNetwork& net) {
  MappingRequest req;
  req.request_id = vnr.id;
  for (const auto& v : vnr.nodes) req.assignments.push_back({v.id, hosts[v.id], v.cpu_demand});
  req.links = vnr.links;
  return map_substrate(req, net);
}

}  // namespace detail

inline EmbeddingResult dp_vne_embed(const VirtualNetworkRequest& vnr,
                                    SubstrateNetwork& net, int k,
                                    const PsoParams& pso, Rng& rng,
                                    std::vector<Scalar>* trace = nullptr) {
  DelayEstimates est = build_delay_estimates(net);
  auto candidates = collect_candidates(vnr, net, k, est);
  auto pseudo = build_pseudo_topology(vnr, std::move(candidates), net, std::move(est));
  if (!pseudo) return EmbeddingResult::rejected(vnr.id, RejectReason::no_candidates);
  const PsoResult best = run_pso(*pseudo, pso, rng);
  if (trace) *trace = best.trace;
  if (!best.feasible) {
    return EmbeddingResult::rejected(vnr.id, RejectReason::infeasible_assignment);
  }
  const auto req = pre_map(best.best_position, *pseudo, vnr);
  if (!req) return EmbeddingResult::rejected(vnr.id, RejectReason::infeasible_assignment);
  return map_substrate(*req, net);
}

// Lowest-DelayUnit candidate per virtual node, no optimisation.
inline EmbeddingResult greedy_delay_embed(const VirtualNetworkRequest& vnr,
                                          SubstrateNetwork& net, int k = 1) {
  const DelayEstimates est = build_delay_estimates(net);
  const auto candidates = collect_candidates(vnr, net, k, est);
  std::vector<NodeId> hosts;
  for (const auto& list : candidates) {
    if (list.empty()) return EmbeddingResult::rejected(vnr.id, RejectReason::no_candidates);
    const CandidateNode* best = &list.front();
    for (const auto& c : list) {
      // Strict: the first candidate domain is listed first and wins ties.
      if (c.delay_unit < best->delay_unit - kTolerance) best = &c;
    }
    hosts.push_back(best->substrate_node);
  }
  return detail::commit(hosts, vnr, net);
}

inline EmbeddingResult random_candidate_embed(const VirtualNetworkRequest& vnr,
                                              SubstrateNetwork& net, Rng& rng,
                                              int max_tries = 100) {
  std::vector<std::vector<NodeId>> feasible(vnr.nodes.size());
  for (const auto& v : vnr.nodes) {
    for (const auto& s : net.nodes) {
      if (v.accepts_domain(s.domain) && s.cpu_residual >= v.cpu_demand) {
        feasible[v.id].push_back(s.id);
      }
    }
    if (feasible[v.id].empty()) {
      return EmbeddingResult::rejected(vnr.id, RejectReason::no_candidates);
    }
  }
  std::vector<NodeId> hosts(vnr.nodes.size());
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::set<NodeId> used;
    bool injective = true;
    for (std::size_t i = 0; i < hosts.size(); ++i) {
      hosts[i] = feasible[i][pick_index(rng, feasible[i].size())];
      injective = used.insert(hosts[i]).second && injective;
    }
    if (injective) return detail::commit(hosts, vnr, net);
  }
  return EmbeddingResult::rejected(vnr.id, RejectReason::sampling_exhausted);
}

// Hop counts over every substrate link, from `source`.
inline std::vector<int> hop_distances(const SubstrateNetwork& net,
                                      const std::vector<std::vector<LinkId>>& adj,
                                      NodeId source) {
  std::vector<int> d(net.nodes.size(), -1);
  std::queue<NodeId> q;
  d[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const NodeId x = q.front();
    q.pop();
    for (LinkId l : adj[x]) {
      const NodeId y = net.links[l].other(x);
      if (d[y] < 0) {
        d[y] = d[x] + 1;
        q.push(y);
      }
    }
  }
  return d;
}

inline constexpr long long kMaxExhaustiveCombinations = 100000;

// Chooses among DelayUnit candidates the assignment minimising
// sum(bw * hop count); falls back to greedy_delay_embed on large spaces.
inline EmbeddingResult min_bw_cost_embed(const VirtualNetworkRequest& vnr,
                                         SubstrateNetwork& net, int k = 3) {
  const DelayEstimates est = build_delay_estimates(net);
  const auto candidates = collect_candidates(vnr, net, k, est);
  long long space = 1;
  for (const auto& list : candidates) {
    if (list.empty()) return EmbeddingResult::rejected(vnr.id, RejectReason::no_candidates);
    space *= static_cast<long long>(list.size());
    if (space > kMaxExhaustiveCombinations) return greedy_delay_embed(vnr, net);
  }

  const auto adj = net.adjacency();
  std::vector<std::vector<int>> hops(net.nodes.size());
  for (const auto& list : candidates) {
    for (const auto& c : list) {
      if (hops[c.substrate_node].empty()) {
        hops[c.substrate_node] = hop_distances(net, adj, c.substrate_node);
      }
    }
  }

  const std::size_t n = candidates.size();
  std::vector<int> idx(n, 0), best_idx;
  Scalar best_cost = kInfinity;
  for (long long combo = 0; combo < space; ++combo) {
    std::set<NodeId> used;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      ok = used.insert(candidates[i][idx[i]].substrate_node).second;
    }
    Scalar cost = 0;
    for (const auto& l : vnr.links) {
      if (!ok) break;
      const int h = hops[candidates[l.u][idx[l.u]].substrate_node]
                        [candidates[l.v][idx[l.v]].substrate_node];
      if (h < 0) {
        ok = false;
        break;
      }
      cost += static_cast<Scalar>(l.bw_demand) * h;
    }
    if (ok && cost < best_cost) {
      best_cost = cost;
      best_idx = idx;
    }
    for (std::size_t i = n; i-- > 0;) {
      if (++idx[i] < static_cast<int>(candidates[i].size())) break;
      idx[i] = 0;
    }
  }
  if (best_idx.empty()) {
    return EmbeddingResult::rejected(vnr.id, RejectReason::infeasible_assignment);
  }
  std::vector<NodeId> hosts;
  for (std::size_t i = 0; i < n; ++i) hosts.push_back(candidates[i][best_idx[i]].substrate_node);
  return detail::commit(hosts, vnr, net);
}

struct EmbedOptions {
  int candidates_per_domain = 3;
  PsoParams pso;
};

inline EmbeddingResult embed(EmbedderKind kind, const VirtualNetworkRequest& vnr,
                             SubstrateNetwork& net, const EmbedOptions& opts,
                             Rng& rng, std::vector<Scalar>* trace = nullptr) {
  switch (kind) {
    case EmbedderKind::dp_vne:
      return dp_vne_embed(vnr, net, opts.candidates_per_domain, opts.pso, rng, trace);
    case EmbedderKind::greedy_delay:
      return greedy_delay_embed(vnr, net);
    case EmbedderKind::random_candidate:
      return random_candidate_embed(vnr, net, rng);
    case EmbedderKind::min_bw_cost:
      return min_bw_cost_embed(vnr, net, opts.candidates_per_domain);
  }
  throw std::logic_error("embed: unknown embedder");
}

}  // namespace dpvne

#endif  // DPVNE_BASELINES_HPP_
