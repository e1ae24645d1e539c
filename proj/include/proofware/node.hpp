// proofware: desk-scale decentralised application-credit economy
// Copyright 2026 The proofware Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "proofware/ledger.hpp"
#include "proofware/market.hpp"
#include "proofware/swap.hpp"
#include "proofware/types.hpp"

namespace proofware {

// Opaque transaction payloads, ASCII '|'-separated. These are the bytes the
// gateway hex-encodes into unsigned transaction envelopes.
namespace payload {

inline std::vector<std::uint8_t> from_string(const std::string& s) {
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

inline std::string to_string(const std::vector<std::uint8_t>& p) {
  return std::string(p.begin(), p.end());
}

inline std::vector<std::uint8_t> market_buy(const CreditUnitId& credit, Amount deposit) {
  return from_string("buy|" + credit + "|" + std::to_string(deposit));
}
inline std::vector<std::uint8_t> market_sell(const CreditUnitId& credit, Amount tokens) {
  return from_string("sell|" + credit + "|" + std::to_string(tokens));
}
inline std::vector<std::uint8_t> market_convert(const CreditUnitId& from, const CreditUnitId& to, Amount amount) {
  return from_string("convert|" + from + "|" + to + "|" + std::to_string(amount));
}
inline std::vector<std::uint8_t> swap_init(const Address& receiver, const CreditUnitId& credit, Amount value,
                                           const Hash32& hashlock, std::uint64_t timelock) {
  return from_string("swap-init|" + receiver.hex() + "|" + credit + "|" + std::to_string(value) + "|" +
                     hashlock.hex() + "|" + std::to_string(timelock));
}
inline std::vector<std::uint8_t> swap_participate(const Address& receiver, const CreditUnitId& credit,
                                                  Amount value, const Hash32& hashlock,
                                                  std::uint64_t timelock) {
  return from_string("swap-part|" + receiver.hex() + "|" + credit + "|" + std::to_string(value) + "|" +
                     hashlock.hex() + "|" + std::to_string(timelock));
}
inline std::vector<std::uint8_t> swap_redeem(const Hash32& contract_id, const swap::Preimage& preimage) {
  return from_string("swap-redeem|" + contract_id.hex() + "|" +
                     to_hex(preimage.data(), preimage.size()));
}
inline std::vector<std::uint8_t> swap_refund(const Hash32& contract_id) {
  return from_string("swap-refund|" + contract_id.hex());
}

inline std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = s.find('|', start);
    if (bar == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, bar - start));
    start = bar + 1;
  }
}

inline Amount parse_amount(const std::string& s) {
  if (s.empty()) fail(Errc::BadPayload, "empty amount");
  Amount v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') fail(Errc::BadPayload, "non-decimal amount '" + s + "'");
    Amount next = v * 10 + static_cast<Amount>(c - '0');
    if (next / 10 != v) fail(Errc::AmountOverflow, "amount '" + s + "' too large");
    v = next;
  }
  return v;
}

}  // namespace payload

struct NodeConfig {
  Address treasury = address_from_seed("proofware-treasury");
  Amount main_supply = credits(100'000'000);
  GasSchedule gas;
  Amount gas_price = 2'000;  // main-credit micro-units per gas unit
};

// One in-process chain: ledger, market book, swap book and the payload
// dispatch that routes metered transactions into them.
class Node {
 public:
  explicit Node(const NodeConfig& cfg = NodeConfig{})
      : config_(cfg), ledger_(cfg.treasury, cfg.main_supply) {}

  Ledger& ledger() { return ledger_; }
  const Ledger& ledger() const { return ledger_; }
  market::Book& market() { return market_; }
  const market::Book& market() const { return market_; }
  swap::Book& swaps() { return swaps_; }
  const swap::Book& swaps() const { return swaps_; }

  const GasSchedule& gas_schedule() const { return config_.gas; }
  Amount gas_price() const { return gas_price_override_ ? gas_price_override_ : config_.gas_price; }
  void set_gas_price(Amount p) { gas_price_override_ = p; }
  const Address& treasury() const { return config_.treasury; }

  Receipt execute(const Transaction& tx) {
    return ledger_.execute(tx, config_.gas, [this](Ledger& l, const Transaction& t) { dispatch(l, t); });
  }

  // --- transaction builders (nonce and gas filled from current state) -------

  Transaction build_transfer(const Address& from, const Address& to, const CreditUnitId& credit,
                             Amount value, std::uint64_t gas_limit = 0, Amount gas_price = 0) {
    Transaction tx;
    tx.from = from;
    tx.to = to;
    tx.credit = credit;
    tx.value = value;
    tx.kind = TxKind::Transfer;
    finish_tx(tx, gas_limit, gas_price);
    return tx;
  }

  Transaction build_market(const Address& from, const CreditUnitId& credit, Amount value,
                           std::vector<std::uint8_t> body, std::uint64_t gas_limit = 0,
                           Amount gas_price = 0) {
    Transaction tx;
    tx.from = from;
    tx.to = market_.has(credit) ? market_.entry(credit).account : Address{};
    tx.credit = credit;
    tx.value = value;
    tx.kind = TxKind::MarketTrade;
    tx.payload = std::move(body);
    finish_tx(tx, gas_limit, gas_price);
    return tx;
  }

  Transaction build_swap(const Address& from, const Address& to, const CreditUnitId& credit, Amount value,
                         std::vector<std::uint8_t> body, std::uint64_t gas_limit = 0,
                         Amount gas_price = 0) {
    Transaction tx;
    tx.from = from;
    tx.to = to;
    tx.credit = credit;
    tx.value = value;
    tx.kind = TxKind::SwapStep;
    tx.payload = std::move(body);
    finish_tx(tx, gas_limit, gas_price);
    return tx;
  }

  // id of the most recently opened swap contract (for metered initiates)
  Hash32 last_contract_id() const {
    if (created_contracts_.empty()) fail(Errc::UnknownContract, "no contract has been opened");
    return created_contracts_.back();
  }

  // --- snapshot --------------------------------------------------------------

  void save_snapshot(std::ostream& os) const {
    os << "proofware-node v1\n";
    os << "gasprice " << gas_price() << "\n";
    char buf[96];
    for (const auto& [credit, entry] : market_.entries()) {
      std::snprintf(buf, sizeof(buf), "%a %a", entry.adaptor.reserve, entry.adaptor.supply);
      os << "adaptor " << credit << " " << entry.adaptor.weight_ppm << " " << buf << "\n";
    }
    ledger_.export_snapshot(os);
  }

  void save_snapshot_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(Errc::IoFailure, "cannot open '" + path + "' for writing");
    save_snapshot(f);
    if (!f.good()) fail(Errc::IoFailure, "short write to '" + path + "'");
  }

  static Node load_snapshot(std::istream& is, const NodeConfig& cfg = NodeConfig{}) {
    std::string line;
    if (!std::getline(is, line) || line != "proofware-node v1") fail(Errc::IoFailure, "not a node snapshot");
    Node node(cfg);
    struct AdaptorLine {
      CreditUnitId credit;
      std::uint32_t weight_ppm;
      double reserve, supply;
    };
    std::vector<AdaptorLine> adaptors;
    std::ostringstream ledger_part;
    bool in_ledger = false;
    while (std::getline(is, line)) {
      if (line == "proofware-snapshot v1") in_ledger = true;
      if (in_ledger) {
        ledger_part << line << "\n";
        continue;
      }
      std::istringstream ls(line);
      std::string tag;
      ls >> tag;
      if (tag == "gasprice") {
        Amount p = 0;
        ls >> p;
        node.set_gas_price(p);
      } else if (tag == "adaptor") {
        AdaptorLine a;
        std::string rhex, shex;
        ls >> a.credit >> a.weight_ppm >> rhex >> shex;
        if (ls.fail()) fail(Errc::IoFailure, "malformed adaptor line: " + line);
        a.reserve = std::strtod(rhex.c_str(), nullptr);
        a.supply = std::strtod(shex.c_str(), nullptr);
        adaptors.push_back(a);
      } else if (!line.empty()) {
        fail(Errc::IoFailure, "unknown node snapshot record '" + tag + "'");
      }
    }
    std::istringstream ledger_stream(ledger_part.str());
    node.ledger_ = Ledger::import_snapshot(ledger_stream);
    for (const auto& a : adaptors) node.market_.restore(a.credit, a.weight_ppm, a.reserve, a.supply);
    return node;
  }

  static Node load_snapshot_file(const std::string& path, const NodeConfig& cfg = NodeConfig{}) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(Errc::IoFailure, "cannot open '" + path + "'");
    return load_snapshot(f, cfg);
  }

 private:
  void finish_tx(Transaction& tx, std::uint64_t gas_limit, Amount gas_price) {
    tx.nonce = ledger_.next_nonce(tx.from);
    tx.gas_limit = gas_limit ? gas_limit : config_.gas.for_kind(tx.kind);
    tx.gas_price = gas_price ? gas_price : this->gas_price();
  }

  void dispatch(Ledger& ledger, const Transaction& tx) {
    if (tx.kind == TxKind::Transfer) {
      ledger.move(tx.from, tx.to, tx.credit, tx.value);
      return;
    }
    auto parts = payload::split(payload::to_string(tx.payload));
    const std::string& op = parts.empty() ? std::string() : parts[0];
    if (tx.kind == TxKind::MarketTrade) {
      if (op == "buy" && parts.size() == 3) {
        market_.exec_buy(ledger, tx.from, parts[1], payload::parse_amount(parts[2]));
      } else if (op == "sell" && parts.size() == 3) {
        market_.exec_sell(ledger, tx.from, parts[1], payload::parse_amount(parts[2]));
      } else if (op == "convert" && parts.size() == 4) {
        market_.exec_convert(ledger, tx.from, parts[1], parts[2], payload::parse_amount(parts[3]));
      } else {
        fail(Errc::BadPayload, "bad market payload '" + payload::to_string(tx.payload) + "'");
      }
      return;
    }
    // swap steps
    if (op == "swap-init" && parts.size() == 6) {
      Hash32 id = swaps_.initiate_with_hashlock(ledger, tx.from, Address::from_hex(parts[1]), parts[2],
                                                payload::parse_amount(parts[3]), Hash32::from_hex(parts[4]),
                                                payload::parse_amount(parts[5]));
      note_contract(ledger, id);
    } else if (op == "swap-part" && parts.size() == 6) {
      Hash32 id = swaps_.participate(ledger, tx.from, Address::from_hex(parts[1]), parts[2],
                                     payload::parse_amount(parts[3]), Hash32::from_hex(parts[4]),
                                     payload::parse_amount(parts[5]));
      note_contract(ledger, id);
    } else if (op == "swap-redeem" && parts.size() == 3) {
      swap::Preimage preimage{};
      if (!parse_hex(parts[2], preimage.data(), preimage.size()))
        fail(Errc::BadPayload, "bad preimage hex");
      swaps_.redeem(ledger, Hash32::from_hex(parts[1]), tx.from, preimage);
    } else if (op == "swap-refund" && parts.size() == 2) {
      swaps_.refund(ledger, Hash32::from_hex(parts[1]), tx.from);
    } else {
      fail(Errc::BadPayload, "bad swap payload '" + payload::to_string(tx.payload) + "'");
    }
  }

  void note_contract(Ledger& ledger, const Hash32& id) {
    std::size_t n = created_contracts_.size();
    ledger.on_journal([this, n] { created_contracts_.resize(n); });
    created_contracts_.push_back(id);
  }

  NodeConfig config_;
  Ledger ledger_;
  market::Book market_;
  swap::Book swaps_;
  Amount gas_price_override_ = 0;
  std::vector<Hash32> created_contracts_;
};

// Deterministic two-credit world used by the CLI and the gateway demos: two
// application credits with weight-0.5 adaptors, a funded demo owner, genesis
// block sealed.
struct DemoWorld {
  Node node;
  Address owner;
  CreditUnitId ourtube;
  CreditUnitId acme;
};

inline DemoWorld make_demo_world(const NodeConfig& cfg = NodeConfig{}) {
  DemoWorld w{Node(cfg), address_from_seed("proofware-demo-owner"), {}, {}};
  Ledger& ledger = w.node.ledger();
  w.ourtube = ledger.register_credit("ourtube", credits(500), w.owner);
  w.acme = ledger.register_credit("acme", credits(500), w.owner);
  w.node.market().create(ledger, w.ourtube, 1.0, 500'000, w.node.treasury());
  w.node.market().create(ledger, w.acme, 1.0, 500'000, w.node.treasury());
  ledger.transfer(w.node.treasury(), w.owner, kMainCreditId, credits(10'000));
  ledger.seal_block(0.0);
  return w;
}

}  // namespace proofware
