#ifndef DPVNE_TEXT_FORMAT_HPP_
#define DPVNE_TEXT_FORMAT_HPP_

// Line-oriented text encoding of substrate networks, virtual network
// requests and embedding results.
//
//   domains=<n> nodes=<n> links=<n>
//   N <id> <domain> <cpu> <delay> <boundary:0|1>
//   L <u> <v> <bw> <delay>
//
//   request=<id> nodes=<n> links=<n>
//   V <id> <cpu> <dom1> <dom2>
//   E <u> <v> <bw>
//
// Capacities are written; residuals are not part of the format and a parsed
// network starts with residual == capacity.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dpvne/model.hpp"

namespace dpvne {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

inline void write_substrate(std::ostream& os, const SubstrateNetwork& net) {
  os << "domains=" << net.n_domains << " nodes=" << net.node_count()
     << " links=" << net.link_count() << '\n';
  for (const auto& n : net.nodes) {
    os << "N " << n.id << ' ' << n.domain << ' ' << n.cpu_capacity << ' '
       << n.delay << ' ' << (n.is_boundary ? 1 : 0) << '\n';
  }
  for (const auto& l : net.links) {
    os << "L " << l.u << ' ' << l.v << ' ' << l.bw_capacity << ' ' << l.delay
       << '\n';
  }
}

inline std::string to_text(const SubstrateNetwork& net) {
  std::ostringstream os;
  write_substrate(os, net);
  return os.str();
}

namespace detail {

// Reads `key=<int>` tokens of a header line in the given order.
template <std::size_t N>
inline void parse_header(const std::string& line, int line_no,
                         const char* const (&keys)[N], long long (&values)[N]) {
  std::istringstream is(line);
  for (std::size_t i = 0; i < N; ++i) {
    std::string tok;
    if (!(is >> tok)) throw ParseError(line_no, "truncated header");
    const std::string prefix = std::string(keys[i]) + "=";
    if (tok.rfind(prefix, 0) != 0) {
      throw ParseError(line_no, "expected " + prefix);
    }
    try {
      std::size_t used = 0;
      values[i] = std::stoll(tok.substr(prefix.size()), &used);
      if (used != tok.size() - prefix.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad integer in " + tok);
    }
  }
  std::string extra;
  if (is >> extra) throw ParseError(line_no, "trailing token " + extra);
}

template <typename... T>
inline void parse_fields(std::istringstream& is, int line_no, T&... out) {
  if (!((is >> out) && ...)) throw ParseError(line_no, "malformed record");
  std::string extra;
  if (is >> extra) throw ParseError(line_no, "trailing token " + extra);
}

}  // namespace detail

inline SubstrateNetwork read_substrate(std::istream& is) {
  SubstrateNetwork net;
  std::string line;
  int line_no = 1;
  if (!std::getline(is, line)) throw ParseError(line_no, "missing header");
  static constexpr const char* keys[] = {"domains", "nodes", "links"};
  long long hdr[3] = {};
  detail::parse_header(line, line_no, keys, hdr);
  net.n_domains = static_cast<int>(hdr[0]);

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream rec(line);
    char tag = 0;
    rec >> tag;
    if (tag == 'N') {
      SubstrateNode n;
      int boundary = 0;
      detail::parse_fields(rec, line_no, n.id, n.domain, n.cpu_capacity,
                           n.delay, boundary);
      if (n.id != net.node_count()) throw ParseError(line_no, "node ids not dense");
      n.cpu_residual = n.cpu_capacity;
      n.is_boundary = boundary != 0;
      net.nodes.push_back(n);
    } else if (tag == 'L') {
      SubstrateLink l;
      detail::parse_fields(rec, line_no, l.u, l.v, l.bw_capacity, l.delay);
      if (!net.has_node(l.u) || !net.has_node(l.v)) {
        throw ParseError(line_no, "link references unknown node");
      }
      l.id = net.link_count();
      l.bw_residual = l.bw_capacity;
      l.kind = net.nodes[l.u].domain == net.nodes[l.v].domain
                   ? LinkKind::intra_domain
                   : LinkKind::inter_domain;
      net.links.push_back(l);
    } else {
      throw ParseError(line_no, "unknown record tag");
    }
  }
  if (net.node_count() != hdr[1] || net.link_count() != hdr[2]) {
    throw ParseError(line_no, "record counts disagree with header");
  }
  return net;
}

inline SubstrateNetwork substrate_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_substrate(is);
}

inline void write_request(std::ostream& os, const VirtualNetworkRequest& vnr) {
  os << "request=" << vnr.id << " nodes=" << vnr.node_count()
     << " links=" << vnr.link_count() << '\n';
  for (const auto& n : vnr.nodes) {
    os << "V " << n.id << ' ' << n.cpu_demand << ' ' << n.candidate_domains.first
       << ' ' << n.candidate_domains.second << '\n';
  }
  for (const auto& l : vnr.links) {
    os << "E " << l.u << ' ' << l.v << ' ' << l.bw_demand << '\n';
  }
}

inline std::string to_text(const VirtualNetworkRequest& vnr) {
  std::ostringstream os;
  write_request(os, vnr);
  return os.str();
}

inline VirtualNetworkRequest read_request(std::istream& is) {
  VirtualNetworkRequest vnr;
  std::string line;
  int line_no = 1;
  if (!std::getline(is, line)) throw ParseError(line_no, "missing header");
  static constexpr const char* keys[] = {"request", "nodes", "links"};
  long long hdr[3] = {};
  detail::parse_header(line, line_no, keys, hdr);
  vnr.id = static_cast<RequestId>(hdr[0]);

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream rec(line);
    char tag = 0;
    rec >> tag;
    if (tag == 'V') {
      VirtualNode n;
      detail::parse_fields(rec, line_no, n.id, n.cpu_demand,
                           n.candidate_domains.first, n.candidate_domains.second);
      if (n.id != vnr.node_count()) throw ParseError(line_no, "node ids not dense");
      vnr.nodes.push_back(n);
    } else if (tag == 'E') {
      VirtualLink l;
      detail::parse_fields(rec, line_no, l.u, l.v, l.bw_demand);
      l.id = vnr.link_count();
      vnr.links.push_back(l);
    } else {
      throw ParseError(line_no, "unknown record tag");
    }
  }
  if (vnr.node_count() != hdr[1] || vnr.link_count() != hdr[2]) {
    throw ParseError(line_no, "record counts disagree with header");
  }
  return vnr;
}

inline VirtualNetworkRequest request_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_request(is);
}

inline std::string format_fixed6(Scalar x) {
  if (!is_finite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline std::string status_token(const EmbeddingResult& r) {
  if (r.accepted) return "accepted";
  return std::string("rejected(") + to_string(r.reason) + ")";
}

//   R <request_id> <status>
//   M <vnode> <snode>
//   P <vlink-u> <vlink-v> <node path...>
//   D <node_term> <link_term> <total>
inline void write_result(std::ostream& os, const EmbeddingResult& r) {
  os << "R " << r.request_id << ' ' << status_token(r) << '\n';
  if (!r.accepted) return;
  for (const auto& m : r.node_map) os << "M " << m.vnode << ' ' << m.snode << '\n';
  for (const auto& p : r.link_map) {
    os << "P " << p.vu << ' ' << p.vv;
    for (NodeId x : p.node_path) os << ' ' << x;
    os << '\n';
  }
  os << "D " << format_fixed6(r.node_delay_term) << ' '
     << format_fixed6(r.link_delay_term) << ' ' << format_fixed6(r.total_delay)
     << '\n';
}

inline std::string to_text(const EmbeddingResult& r) {
  std::ostringstream os;
  write_result(os, r);
  return os.str();
}

}  // namespace dpvne

#endif  // DPVNE_TEXT_FORMAT_HPP_
