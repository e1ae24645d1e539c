// proofware: desk-scale decentralised application-credit economy
// Copyright 2026 The proofware Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "proofware/sha256.hpp"
#include "proofware/types.hpp"

namespace proofware {

enum class TxKind { Transfer, MarketTrade, SwapStep };

inline const char* tx_kind_name(TxKind k) {
  switch (k) {
    case TxKind::Transfer: return "transfer";
    case TxKind::MarketTrade: return "market-trade";
    case TxKind::SwapStep: return "swap-step";
  }
  return "?";
}

inline std::optional<TxKind> tx_kind_from_name(std::string_view s) {
  if (s == "transfer") return TxKind::Transfer;
  if (s == "market-trade") return TxKind::MarketTrade;
  if (s == "swap-step") return TxKind::SwapStep;
  return std::nullopt;
}

// Per-kind gas costs. Scenario-configurable; these are the defaults.
struct GasSchedule {
  std::uint64_t transfer = 21'000;
  std::uint64_t market_trade = 60'000;
  std::uint64_t swap_step = 45'000;

  std::uint64_t for_kind(TxKind k) const {
    switch (k) {
      case TxKind::Transfer: return transfer;
      case TxKind::MarketTrade: return market_trade;
      case TxKind::SwapStep: return swap_step;
    }
    return transfer;
  }
};

struct Transaction {
  Address from;
  Address to;
  CreditUnitId credit;
  Amount value = 0;
  std::uint64_t nonce = 0;
  std::uint64_t gas_limit = 0;
  Amount gas_price = 0;  // main-credit micro-units per gas unit
  TxKind kind = TxKind::Transfer;
  std::vector<std::uint8_t> payload;

  Hash32 id() const {
    Sha256 h;
    h.update("proofware-tx:");
    h.update(from.bytes.data(), from.bytes.size());
    h.update(to.bytes.data(), to.bytes.size());
    h.update(credit);
    std::uint64_t scalars[4] = {value, nonce, gas_limit, gas_price};
    h.update(scalars, sizeof(scalars));
    std::uint8_t k = static_cast<std::uint8_t>(kind);
    h.update(&k, 1);
    h.update(payload.data(), payload.size());
    return h.finish();
  }
};

struct Receipt {
  Hash32 tx_id;
  std::uint64_t gas_used = 0;
  Amount fee = 0;  // main-credit micro-units, = gas_used * gas_price
  std::uint64_t block_height = 0;
  bool success = true;

  const char* status() const { return success ? "success" : "reverted"; }
};

struct ExecutedTx {
  Transaction tx;
  Receipt receipt;
};

struct Block {
  std::uint64_t height = 0;
  double timestamp_hours = 0.0;
  std::vector<Hash32> tx_ids;
};

// In-memory multi-asset ledger. Single writer: all mutating calls come from
// one owner; copies of a quiescent ledger are safe to use independently.
class Ledger {
 public:
  struct CreditInfo {
    CreditUnitId id;
    std::string name;
    Address owner;
    Amount total_supply = 0;
  };

  using TxHandler = std::function<void(Ledger&, const Transaction&)>;

  Ledger() : Ledger(Address{}, 0) {}

  Ledger(const Address& treasury, Amount main_initial_supply,
         const Address& fee_sink = address_from_seed("proofware-fee-sink"))
      : fee_sink_(fee_sink) {
    CreditInfo main{kMainCreditId, "proofware", treasury, 0};
    registry_.emplace(kMainCreditId, main);
    by_name_.emplace("proofware", kMainCreditId);
    if (main_initial_supply > 0) mint(treasury, kMainCreditId, main_initial_supply);
  }

  // --- registry ------------------------------------------------------------

  CreditUnitId register_credit(const std::string& name, Amount initial_supply, const Address& owner) {
    validate_name(name);
    if (by_name_.count(name)) fail(Errc::DuplicateName, "credit name '" + name + "' already registered");
    CreditUnitId id = credit_id_from_name(name);
    registry_.emplace(id, CreditInfo{id, name, owner, 0});
    by_name_.emplace(name, id);
    if (initial_supply > 0) mint(owner, id, initial_supply);
    return id;
  }

  bool has_credit(const CreditUnitId& id) const { return registry_.count(id) != 0; }

  const CreditInfo& credit_info(const CreditUnitId& id) const {
    auto it = registry_.find(id);
    if (it == registry_.end()) fail(Errc::UnknownCredit, "credit id '" + id + "'");
    return it->second;
  }

  std::optional<CreditUnitId> resolve_name(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<CreditUnitId, CreditInfo>& registry() const { return registry_; }

  // --- balances --------------------------------------------------------------

  Amount balance(const Address& addr, const CreditUnitId& credit) const {
    auto it = balances_.find({addr, credit});
    return it == balances_.end() ? 0 : it->second;
  }

  // sum over all accounts; equals registry total supply at all times
  Amount total_in_circulation(const CreditUnitId& credit) const {
    Amount sum = 0;
    for (const auto& [key, amount] : balances_)
      if (key.second == credit) sum = checked_add(sum, amount);
    return sum;
  }

  bool known_address(const Address& addr) const {
    if (nonces_.count(addr)) return true;
    auto it = balances_.lower_bound({addr, CreditUnitId{}});
    return it != balances_.end() && it->first.first == addr;
  }

  // Journal-aware primitives: inside execute() these are rolled back when the
  // transaction reverts. The market and swap engines build on them.

  void move(const Address& from, const Address& to, const CreditUnitId& credit, Amount value) {
    require_credit(credit);
    Amount from_bal = balance(from, credit);
    if (from_bal < value)
      fail(Errc::InsufficientBalance,
           "balance " + std::to_string(from_bal) + " < " + std::to_string(value));
    write_balance(from, credit, from_bal - value);
    write_balance(to, credit, checked_add(balance(to, credit), value));
  }

  void mint(const Address& to, const CreditUnitId& credit, Amount value) {
    auto it = registry_.find(credit);
    if (it == registry_.end()) fail(Errc::UnknownCredit, "credit id '" + credit + "'");
    Amount new_supply = checked_add(it->second.total_supply, value);
    write_supply(it->second, new_supply);
    write_balance(to, credit, checked_add(balance(to, credit), value));
  }

  void burn(const Address& from, const CreditUnitId& credit, Amount value) {
    auto it = registry_.find(credit);
    if (it == registry_.end()) fail(Errc::UnknownCredit, "credit id '" + credit + "'");
    Amount from_bal = balance(from, credit);
    if (from_bal < value)
      fail(Errc::InsufficientBalance,
           "balance " + std::to_string(from_bal) + " < " + std::to_string(value));
    write_supply(it->second, checked_sub(it->second.total_supply, value));
    write_balance(from, credit, from_bal - value);
  }

  // Registers an undo step with the active transaction journal, if any.
  // Lets engines that keep state outside the ledger revert with it.
  void on_journal(std::function<void()> undo) {
    if (journaling_) undo_.push_back(std::move(undo));
  }

  // --- operations ------------------------------------------------------------

  // Unmetered transfer: balances adjusted immediately, record queued for the
  // next block. Fee-free (gas price zero).
  Transaction transfer(const Address& from, const Address& to, const CreditUnitId& credit, Amount value) {
    move(from, to, credit, value);
    Transaction tx;
    tx.from = from;
    tx.to = to;
    tx.credit = credit;
    tx.value = value;
    tx.nonce = nonces_[from]++;
    tx.gas_limit = 1;
    tx.gas_price = 0;
    tx.kind = TxKind::Transfer;
    queue_.push_back(tx);
    return tx;
  }

  // Gas-metered execution. Rejects on bad nonce or an unaffordable gas cap;
  // everything else (out of gas, failed mutation) becomes a reverted receipt
  // that still consumes gas and pays its fee.
  Receipt execute(const Transaction& tx, const GasSchedule& schedule, const TxHandler& handler = {}) {
    if (tx.gas_limit == 0) fail(Errc::CannotAffordGasCap, "gas limit must be positive");
    auto nonce_it = nonces_.find(tx.from);
    std::uint64_t expected = nonce_it == nonces_.end() ? 0 : nonce_it->second;
    if (tx.nonce != expected)
      fail(Errc::BadNonce, "expected nonce " + std::to_string(expected) + ", got " + std::to_string(tx.nonce));

    unsigned __int128 cap128 = static_cast<unsigned __int128>(tx.gas_limit) * tx.gas_price;
    Amount main_bal = balance(tx.from, kMainCreditId);
    if (cap128 > main_bal)
      fail(Errc::CannotAffordGasCap, "gas cap exceeds main-credit balance " + std::to_string(main_bal));
    Amount cap = static_cast<Amount>(cap128);

    // fee prepaid at cap, remainder refunded after metering
    write_balance(tx.from, kMainCreditId, main_bal - cap);
    nonces_[tx.from] = expected + 1;

    std::uint64_t required = schedule.for_kind(tx.kind);
    bool success = false;
    std::uint64_t gas_used = 0;
    if (required > tx.gas_limit) {
      gas_used = tx.gas_limit;  // out of gas: whole cap consumed, no mutation attempted
    } else {
      gas_used = required;
      journaling_ = true;
      try {
        apply_mutation(tx, handler);
        success = true;
        undo_.clear();
      } catch (const Error&) {
        for (auto it = undo_.rbegin(); it != undo_.rend(); ++it) (*it)();
        undo_.clear();
      }
      journaling_ = false;
    }

    Amount fee = static_cast<Amount>(gas_used) * tx.gas_price;
    write_balance(tx.from, kMainCreditId, checked_add(balance(tx.from, kMainCreditId), cap - fee));
    write_balance(fee_sink_, kMainCreditId, checked_add(balance(fee_sink_, kMainCreditId), fee));

    Receipt receipt;
    receipt.tx_id = tx.id();
    receipt.gas_used = gas_used;
    receipt.fee = fee;
    receipt.block_height = current_height();
    receipt.success = success;
    queue_.push_back(tx);
    executed_.push_back({tx, receipt});
    return receipt;
  }

  Block seal_block(double timestamp_hours) {
    if (!blocks_.empty() && timestamp_hours < blocks_.back().timestamp_hours)
      fail(Errc::ClockRegression, "timestamp " + std::to_string(timestamp_hours) + " before last block");
    Block b;
    b.height = blocks_.size();
    b.timestamp_hours = timestamp_hours;
    b.tx_ids.reserve(queue_.size());
    for (const auto& tx : queue_) b.tx_ids.push_back(tx.id());
    queue_.clear();
    blocks_.push_back(b);
    return b;
  }

  std::uint64_t current_height() const { return blocks_.size(); }
  std::uint64_t next_nonce(const Address& addr) const {
    auto it = nonces_.find(addr);
    return it == nonces_.end() ? 0 : it->second;
  }

  const Address& fee_sink() const { return fee_sink_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Transaction>& pending() const { return queue_; }
  const std::vector<ExecutedTx>& executed() const { return executed_; }
  const std::map<std::pair<Address, CreditUnitId>, Amount>& balances() const { return balances_; }

  // --- snapshot --------------------------------------------------------------
  // Line-delimited, deterministically ordered, diffable.

  void export_snapshot(std::ostream& os) const {
    os << "proofware-snapshot v1\n";
    for (const auto& [id, info] : registry_)
      os << "credit " << id << " " << info.name << " " << info.owner.hex() << " " << info.total_supply << "\n";
    for (const auto& [addr, n] : nonces_) os << "nonce " << addr.hex() << " " << n << "\n";
    for (const auto& [key, amount] : balances_)
      if (amount > 0) os << "balance " << key.first.hex() << " " << key.second << " " << amount << "\n";
    for (const auto& b : blocks_) {
      os << "block " << b.height << " " << format_hours(b.timestamp_hours) << " ";
      if (b.tx_ids.empty()) {
        os << "-";
      } else {
        for (std::size_t i = 0; i < b.tx_ids.size(); ++i) {
          if (i) os << ",";
          os << b.tx_ids[i].hex();
        }
      }
      os << "\n";
    }
    for (const auto& tx : queue_) {
      os << "pending " << tx.from.hex() << " " << tx.to.hex() << " " << tx.credit << " " << tx.value
         << " " << tx.nonce << " " << tx.gas_limit << " " << tx.gas_price << " " << tx_kind_name(tx.kind)
         << " " << (tx.payload.empty() ? "-" : to_hex(tx.payload.data(), tx.payload.size())) << "\n";
    }
  }

  static Ledger import_snapshot(std::istream& is) {
    Ledger ledger(Address{}, 0);
    ledger.registry_.clear();
    ledger.by_name_.clear();
    std::string line;
    if (!std::getline(is, line) || line != "proofware-snapshot v1")
      fail(Errc::IoFailure, "not a proofware snapshot");
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string tag;
      ls >> tag;
      if (tag == "credit") {
        CreditInfo info;
        std::string owner_hex;
        ls >> info.id >> info.name >> owner_hex >> info.total_supply;
        check_stream(ls, line);
        info.owner = Address::from_hex(owner_hex);
        ledger.registry_.emplace(info.id, info);
        ledger.by_name_.emplace(info.name, info.id);
      } else if (tag == "nonce") {
        std::string addr_hex;
        std::uint64_t n = 0;
        ls >> addr_hex >> n;
        check_stream(ls, line);
        ledger.nonces_[Address::from_hex(addr_hex)] = n;
      } else if (tag == "balance") {
        std::string addr_hex, credit;
        Amount amount = 0;
        ls >> addr_hex >> credit >> amount;
        check_stream(ls, line);
        ledger.balances_[{Address::from_hex(addr_hex), credit}] = amount;
      } else if (tag == "block") {
        Block b;
        std::string txids;
        ls >> b.height >> b.timestamp_hours >> txids;
        check_stream(ls, line);
        if (txids != "-") {
          std::size_t start = 0;
          while (start < txids.size()) {
            std::size_t comma = txids.find(',', start);
            if (comma == std::string::npos) comma = txids.size();
            b.tx_ids.push_back(Hash32::from_hex(txids.substr(start, comma - start)));
            start = comma + 1;
          }
        }
        ledger.blocks_.push_back(b);
      } else if (tag == "pending") {
        Transaction tx;
        std::string from_hex, to_hex_s, kind, payload_hex;
        ls >> from_hex >> to_hex_s >> tx.credit >> tx.value >> tx.nonce >> tx.gas_limit >> tx.gas_price >>
            kind >> payload_hex;
        check_stream(ls, line);
        tx.from = Address::from_hex(from_hex);
        tx.to = Address::from_hex(to_hex_s);
        auto k = tx_kind_from_name(kind);
        if (!k) fail(Errc::IoFailure, "bad tx kind in snapshot: " + kind);
        tx.kind = *k;
        if (payload_hex != "-") {
          tx.payload.resize(payload_hex.size() / 2);
          if (!parse_hex(payload_hex, tx.payload.data(), tx.payload.size()))
            fail(Errc::IoFailure, "bad payload hex in snapshot");
        }
        ledger.queue_.push_back(tx);
      } else {
        fail(Errc::IoFailure, "unknown snapshot record '" + tag + "'");
      }
    }
    return ledger;
  }

 private:
  static void validate_name(const std::string& name) {
    if (name.empty()) fail(Errc::BadName, "credit name is empty");
    for (char c : name)
      if (std::isspace(static_cast<unsigned char>(c)) || !std::isprint(static_cast<unsigned char>(c)))
        fail(Errc::BadName, "credit name must be printable without whitespace");
  }

  static std::string format_hours(double h) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", h);
    return buf;
  }

  static void check_stream(std::istringstream& ls, const std::string& line) {
    if (ls.fail()) fail(Errc::IoFailure, "malformed snapshot line: " + line);
  }

  void require_credit(const CreditUnitId& credit) const {
    if (!registry_.count(credit)) fail(Errc::UnknownCredit, "credit id '" + credit + "'");
  }

  void write_balance(const Address& addr, const CreditUnitId& credit, Amount value) {
    auto key = std::make_pair(addr, credit);
    auto it = balances_.find(key);
    if (journaling_) {
      if (it == balances_.end()) {
        undo_.push_back([this, key] { balances_.erase(key); });
      } else {
        Amount old = it->second;
        undo_.push_back([this, key, old] { balances_[key] = old; });
      }
    }
    if (it == balances_.end())
      balances_.emplace(key, value);
    else
      it->second = value;
  }

  void write_supply(CreditInfo& info, Amount new_supply) {
    if (journaling_) {
      Amount old = info.total_supply;
      CreditInfo* p = &info;
      undo_.push_back([p, old] { p->total_supply = old; });
    }
    info.total_supply = new_supply;
  }

  void apply_mutation(const Transaction& tx, const TxHandler& handler) {
    if (tx.kind == TxKind::Transfer && !handler) {
      move(tx.from, tx.to, tx.credit, tx.value);
      return;
    }
    if (!handler) fail(Errc::BadPayload, "no handler installed for " + std::string(tx_kind_name(tx.kind)));
    handler(*this, tx);
  }

  std::map<CreditUnitId, CreditInfo> registry_;
  std::map<std::string, CreditUnitId> by_name_;
  std::map<std::pair<Address, CreditUnitId>, Amount> balances_;
  std::map<Address, std::uint64_t> nonces_;
  std::vector<Transaction> queue_;
  std::vector<Block> blocks_;
  std::vector<ExecutedTx> executed_;
  Address fee_sink_;
  bool journaling_ = false;
  std::vector<std::function<void()>> undo_;
};

}  // namespace proofware
