#ifndef DPVNE_PSO_HPP_
#define DPVNE_PSO_HPP_

// Discrete particle swarm over a pseudo-topology. A position picks one
// candidate per virtual node; a velocity component of 1 keeps that choice
// and 0 re-selects a candidate from the node's other candidate domain.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "dpvne/generator.hpp"
#include "dpvne/local_control.hpp"
#include "dpvne/model.hpp"

namespace dpvne {

struct PsoParams {
  int n_particles = 10;
  int n_iterations = 50;
  double a = 0.3;  // weight of the previous velocity
  double b = 0.4;  // weight of agreement with the personal best
  double c = 0.3;  // weight of agreement with the global best
  double mutation_probability = 0.1;
  std::uint64_t seed = 1;
};

inline void check_params(const PsoParams& p) {
  if (p.n_particles < 1 || p.n_iterations < 1) {
    throw std::invalid_argument("pso params: counts must be >= 1");
  }
  if (p.a < 0 || p.b < 0 || p.c < 0) {
    throw std::invalid_argument("pso params: weights must be >= 0");
  }
  if (std::abs(p.a + p.b + p.c - 1.0) > kTolerance) {
    throw std::invalid_argument("pso params: a + b + c must equal 1");
  }
  if (!(p.mutation_probability >= 0 && p.mutation_probability <= 1)) {
    throw std::invalid_argument("pso params: mutation_probability outside [0,1]");
  }
}

using Position = std::vector<int>;
using Velocity = std::vector<int>;

struct Particle {
  Position position;
  Velocity velocity;
  Position personal_best_position;
  Scalar personal_best_fitness = kInfinity;
  Scalar fitness = kInfinity;
};

struct Swarm {
  std::vector<Particle> particles;
  Position global_best_position;
  Scalar global_best_fitness = kInfinity;
};

inline void check_position(const Position& position, const PseudoTopology& pseudo) {
  if (position.size() != pseudo.candidates.size()) {
    throw std::invalid_argument("fitness: position length mismatch");
  }
  for (std::size_t i = 0; i < position.size(); ++i) {
    if (position[i] < 0 ||
        position[i] >= static_cast<int>(pseudo.candidates[i].size())) {
      throw std::invalid_argument("fitness: candidate index out of range");
    }
  }
}

// Total delay of the assignment under pseudo-topology estimates; +inf when
// the assignment reuses a substrate node, crosses an unreachable pair, or
// asks more bandwidth of a node than its incident links have left.
inline Scalar fitness(const Position& position, const PseudoTopology& pseudo) {
  check_position(position, pseudo);
  const std::size_t n = position.size();
  Scalar total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cand = pseudo.candidates[i][position[i]];
    for (std::size_t j = 0; j < i; ++j) {
      if (pseudo.candidates[j][position[j]].substrate_node == cand.substrate_node) {
        return kInfinity;
      }
    }
    total += static_cast<Scalar>(pseudo.vnodes[i].cpu_demand) *
             static_cast<Scalar>(cand.node_delay);
  }
  std::vector<Resource> bw_needed(n, 0);
  for (std::size_t l = 0; l < pseudo.vlinks.size(); ++l) {
    const auto& vl = pseudo.vlinks[l];
    const Scalar est = pseudo.estimate(static_cast<int>(l), position[vl.u], position[vl.v]);
    if (!is_finite(est)) return kInfinity;
    total += static_cast<Scalar>(vl.bw_demand) * est;
    bw_needed[vl.u] += vl.bw_demand;
    bw_needed[vl.v] += vl.bw_demand;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (bw_needed[i] > pseudo.candidates[i][position[i]].incident_bw_residual) {
      return kInfinity;
    }
  }
  return total;
}

// Per component: s = a*v + b*[x == x_sp] + c*[x == x_gp], rounded half-up.
inline Velocity velocity_update(const Particle& particle,
                                const Position& global_best,
                                const PsoParams& params) {
  const std::size_t n = particle.position.size();
  if (particle.velocity.size() != n || particle.personal_best_position.size() != n ||
      global_best.size() != n) {
    throw std::invalid_argument("velocity_update: length mismatch");
  }
  Velocity out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int x = particle.position[i];
    const double s = params.a * particle.velocity[i] +
                     params.b * (x == particle.personal_best_position[i] ? 1 : 0) +
                     params.c * (x == global_best[i] ? 1 : 0);
    out[i] = s >= 0.5 - kTolerance ? 1 : 0;
  }
  return out;
}

inline Position position_update(const Position& position, const Velocity& velocity,
                                const PseudoTopology& pseudo, Rng& rng) {
  if (velocity.size() != position.size()) {
    throw std::invalid_argument("position_update: length mismatch");
  }
  Position out = position;
  std::vector<int> pool;
  for (std::size_t i = 0; i < position.size(); ++i) {
    if (velocity[i] != 0 && velocity[i] != 1) {
      throw std::invalid_argument("position_update: velocity must be binary");
    }
    if (velocity[i] == 1) continue;
    const auto& cands = pseudo.candidates[i];
    if (cands.size() <= 1) continue;
    const DomainId current = cands[position[i]].domain;
    pool.clear();
    for (int j = 0; j < static_cast<int>(cands.size()); ++j) {
      if (cands[j].domain != current) pool.push_back(j);
    }
    if (pool.empty()) {
      for (int j = 0; j < static_cast<int>(cands.size()); ++j) {
        if (j != position[i]) pool.push_back(j);
      }
    }
    out[i] = pool[pick_index(rng, pool.size())];
  }
  return out;
}

inline Position random_position(const PseudoTopology& pseudo, Rng& rng) {
  Position p(pseudo.candidates.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = pick_index(rng, pseudo.candidates[i].size());
  }
  return p;
}

struct PsoResult {
  bool feasible = false;
  Position best_position;
  Scalar best_fitness = kInfinity;
  // trace[0] is the best initial fitness, trace[t] the global best after
  // iteration t.
  std::vector<Scalar> trace;
};

inline PsoResult run_pso(const PseudoTopology& pseudo, const PsoParams& params,
                         Rng& rng) {
  check_params(params);
  for (const auto& c : pseudo.candidates) {
    if (c.empty()) throw std::invalid_argument("run_pso: empty candidate list");
  }
  Swarm swarm;
  swarm.particles.resize(params.n_particles);
  for (auto& p : swarm.particles) {
    p.position = random_position(pseudo, rng);
    p.velocity.resize(p.position.size());
    for (auto& v : p.velocity) v = coin(rng, 0.5) ? 1 : 0;
    p.fitness = fitness(p.position, pseudo);
    p.personal_best_position = p.position;
    p.personal_best_fitness = p.fitness;
    if (swarm.global_best_position.empty() || p.fitness < swarm.global_best_fitness) {
      swarm.global_best_position = p.position;
      swarm.global_best_fitness = p.fitness;
    }
  }

  PsoResult result;
  result.trace.reserve(params.n_iterations + 1);
  result.trace.push_back(swarm.global_best_fitness);
  for (int it = 0; it < params.n_iterations; ++it) {
    for (auto& p : swarm.particles) {
      p.velocity = velocity_update(p, swarm.global_best_position, params);
      p.position = position_update(p.position, p.velocity, pseudo, rng);
      if (coin(rng, params.mutation_probability)) {
        p.position = random_position(pseudo, rng);
      }
      p.fitness = fitness(p.position, pseudo);
      if (p.fitness < p.personal_best_fitness) {
        p.personal_best_fitness = p.fitness;
        p.personal_best_position = p.position;
      }
      if (p.fitness < swarm.global_best_fitness) {
        swarm.global_best_fitness = p.fitness;
        swarm.global_best_position = p.position;
      }
    }
    result.trace.push_back(swarm.global_best_fitness);
  }
  result.best_position = swarm.global_best_position;
  result.best_fitness = swarm.global_best_fitness;
  result.feasible = is_finite(result.best_fitness);
  return result;
}

// CSV trace: `iteration,global_best_fitness`.
inline void write_trace_csv(std::ostream& os, const std::vector<Scalar>& trace) {
  os << "iteration,global_best_fitness\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << i << ',';
    if (is_finite(trace[i])) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", trace[i]);
      os << buf;
    } else {
      os << "inf";
    }
    os << '\n';
  }
}

}  // namespace dpvne

#endif  // DPVNE_PSO_HPP_
