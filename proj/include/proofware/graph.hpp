// proofware: desk-scale decentralised application-credit economy
// Copyright 2026 The proofware Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "proofware/ledger.hpp"
#include "proofware/types.hpp"

namespace proofware::graph {

// Undirected weighted transaction graph; communities are the credits the
// addresses mostly transact in.
struct TransactionGraph {
  std::vector<Address> nodes;
  std::map<std::pair<Address, Address>, std::uint64_t> edges;  // key ordered (lo, hi), weight = tx count
  std::map<Address, CreditUnitId> partition;

  std::uint64_t total_weight() const {
    std::uint64_t m = 0;
    for (const auto& [_, w] : edges) m += w;
    return m;
  }
};

// One node per address, one weighted edge per communicating pair (self-loops
// excluded). Each address is assigned the credit it most frequently
// transacted; ties break to the lexicographically smallest credit id.
inline TransactionGraph build_transaction_graph(std::span<const ExecutedTx> txs) {
  if (txs.empty()) fail(Errc::EmptyInput, "no transactions to build a graph from");
  TransactionGraph g;
  std::map<Address, std::map<CreditUnitId, std::uint64_t>> credit_counts;
  for (const auto& e : txs) {
    const Transaction& tx = e.tx;
    credit_counts[tx.from][tx.credit]++;
    credit_counts[tx.to][tx.credit]++;
    if (tx.from == tx.to) continue;
    auto key = tx.from < tx.to ? std::make_pair(tx.from, tx.to) : std::make_pair(tx.to, tx.from);
    g.edges[key]++;
  }
  for (const auto& [addr, counts] : credit_counts) {
    g.nodes.push_back(addr);
    const CreditUnitId* best = nullptr;
    std::uint64_t best_count = 0;
    for (const auto& [credit, count] : counts) {
      if (count > best_count) {  // map order makes ties resolve to the smallest id
        best = &credit;
        best_count = count;
      }
    }
    g.partition[addr] = *best;
  }
  return g;
}

// Newman modularity: Q = sum_c [ e_c/m - (d_c/2m)^2 ] with m the total edge
// weight, e_c the intra-community weight and d_c the community degree sum.
inline double modularity(const TransactionGraph& g) {
  if (g.edges.empty()) fail(Errc::NoEdges, "modularity needs at least one edge");
  double m = static_cast<double>(g.total_weight());
  std::map<CreditUnitId, double> intra, degree;
  for (const auto& [key, w] : g.edges) {
    const CreditUnitId& ca = g.partition.at(key.first);
    const CreditUnitId& cb = g.partition.at(key.second);
    degree[ca] += static_cast<double>(w);
    degree[cb] += static_cast<double>(w);
    if (ca == cb) intra[ca] += static_cast<double>(w);
  }
  double q = 0.0;
  for (const auto& [community, d] : degree) {
    double e = intra.count(community) ? intra[community] : 0.0;
    q += e / m - (d / (2.0 * m)) * (d / (2.0 * m));
  }
  return q;
}

inline void export_edge_list(const TransactionGraph& g, std::ostream& os) {
  for (const auto& [key, w] : g.edges)
    os << key.first.hex() << " " << key.second.hex() << " " << w << "\n";
}

inline void export_communities(const TransactionGraph& g, std::ostream& os) {
  for (const auto& [addr, credit] : g.partition) os << addr.hex() << " " << credit << "\n";
}

}  // namespace proofware::graph
