// proofware: desk-scale decentralised application-credit economy
// Copyright 2026 The proofware Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "proofware/ledger.hpp"
#include "proofware/sha256.hpp"
#include "proofware/types.hpp"

namespace proofware::swap {

using Preimage = std::array<std::uint8_t, 32>;

inline Hash32 hashlock_of(const Preimage& secret) {
  return sha256(std::span<const std::uint8_t>(secret.data(), secret.size()));
}

enum class State { Initiated, Redeemed, Refunded };

inline const char* state_name(State s) {
  switch (s) {
    case State::Initiated: return "Initiated";
    case State::Redeemed: return "Redeemed";
    case State::Refunded: return "Refunded";
  }
  return "?";
}

// One leg of a hashed-timelock swap. The sender escrows value under a
// hashlock; the receiver redeems with the preimage strictly before the
// timelock, the sender refunds at or after it.
struct Contract {
  Hash32 id;
  Address sender;    // escrowed the value, may refund
  Address receiver;  // designated counterparty, may redeem
  CreditUnitId credit;
  Amount value = 0;
  Hash32 hashlock;
  std::uint64_t timelock = 0;  // logical block height
  State state = State::Initiated;
  std::optional<Preimage> revealed_preimage;

  Address escrow_account() const { return address_from_seed("proofware-escrow:" + id.hex()); }
};

// Bookkeeping linkage of the two legs; leg A (initiator's escrow) must keep
// the strictly longer refund window.
struct Session {
  Hash32 leg_a;
  Hash32 leg_b;
  Preimage secret{};
};

struct AuditRow {
  std::uint64_t block_height = 0;
  Hash32 contract_id;
  std::string operation;
  std::string outcome;
};

class Book {
 public:
  Hash32 initiate(Ledger& ledger, const Address& initiator, const Address& participant,
                  const CreditUnitId& credit, Amount value, const Preimage& secret,
                  std::uint64_t timelock) {
    return open_contract(ledger, initiator, participant, credit, value, hashlock_of(secret), timelock,
                         "initiate", /*require_longer_leg=*/false);
  }

  // escrow under a caller-supplied hashlock; the on-chain form of initiate
  Hash32 initiate_with_hashlock(Ledger& ledger, const Address& initiator, const Address& participant,
                                const CreditUnitId& credit, Amount value, const Hash32& hashlock,
                                std::uint64_t timelock) {
    return open_contract(ledger, initiator, participant, credit, value, hashlock, timelock, "initiate",
                         /*require_longer_leg=*/false);
  }

  // Second escrow under an already-published hashlock. When the matching
  // initiator leg is known, its refund window must be strictly longer.
  Hash32 participate(Ledger& ledger, const Address& participant, const Address& initiator,
                     const CreditUnitId& credit, Amount value, const Hash32& hashlock,
                     std::uint64_t timelock) {
    return open_contract(ledger, participant, initiator, credit, value, hashlock, timelock,
                         "participate", /*require_longer_leg=*/true);
  }

  void redeem(Ledger& ledger, const Hash32& contract_id, const Address& claimant, const Preimage& preimage) {
    Contract& c = mutable_contract(contract_id);
    try {
      if (c.state != State::Initiated) fail(Errc::AlreadySettled, "contract is " + std::string(state_name(c.state)));
      if (ledger.current_height() >= c.timelock)
        fail(Errc::Expired, "height " + std::to_string(ledger.current_height()) + " >= timelock");
      if (hashlock_of(preimage) != c.hashlock) fail(Errc::WrongPreimage, "sha256(preimage) != hashlock");
      if (claimant != c.receiver) fail(Errc::WrongClaimant, "only the designated counterparty may redeem");
    } catch (const Error& e) {
      audit(ledger, contract_id, "redeem", e.code_name());
      throw;
    }
    ledger.move(c.escrow_account(), claimant, c.credit, c.value);
    set_state(ledger, c, State::Redeemed, preimage);
    audit(ledger, contract_id, "redeem", "Redeemed");
  }

  void refund(Ledger& ledger, const Hash32& contract_id, const Address& claimant) {
    Contract& c = mutable_contract(contract_id);
    try {
      if (c.state != State::Initiated) fail(Errc::AlreadySettled, "contract is " + std::string(state_name(c.state)));
      if (ledger.current_height() < c.timelock)
        fail(Errc::NotYetExpired, "height " + std::to_string(ledger.current_height()) + " < timelock");
      if (claimant != c.sender) fail(Errc::WrongClaimant, "only the original escrower may refund");
    } catch (const Error& e) {
      audit(ledger, contract_id, "refund", e.code_name());
      throw;
    }
    ledger.move(c.escrow_account(), claimant, c.credit, c.value);
    set_state(ledger, c, State::Refunded, std::nullopt);
    audit(ledger, contract_id, "refund", "Refunded");
  }

  const Contract& contract(const Hash32& id) const {
    auto it = contracts_.find(id);
    if (it == contracts_.end()) fail(Errc::UnknownContract, "contract " + id.hex());
    return it->second;
  }

  bool has(const Hash32& id) const { return contracts_.count(id) != 0; }
  const std::map<Hash32, Contract>& contracts() const { return contracts_; }
  const std::vector<AuditRow>& audit_log() const { return audit_; }

  void export_audit_log(std::ostream& os) const {
    os << "blockHeight,contractId,operation,outcome\n";
    for (const auto& r : audit_)
      os << r.block_height << "," << r.contract_id.hex() << "," << r.operation << "," << r.outcome << "\n";
  }

 private:
  Hash32 open_contract(Ledger& ledger, const Address& sender, const Address& receiver,
                       const CreditUnitId& credit, Amount value, const Hash32& hashlock,
                       std::uint64_t timelock, const char* op, bool require_longer_leg) {
    if (timelock <= ledger.current_height())
      fail(Errc::TimelockInPast, "timelock " + std::to_string(timelock) + " not strictly in the future");
    if (require_longer_leg) {
      // ordering is checked against the counterparty's live leg, when visible
      for (const auto& [id, c] : contracts_)
        if (c.hashlock == hashlock && c.state == State::Initiated && c.sender == receiver &&
            timelock >= c.timelock)
          fail(Errc::TimelockOrderingViolated,
               "participant timelock " + std::to_string(timelock) + " >= initiator timelock " +
                   std::to_string(c.timelock));
    }
    Contract c;
    c.sender = sender;
    c.receiver = receiver;
    c.credit = credit;
    c.value = value;
    c.hashlock = hashlock;
    c.timelock = timelock;
    c.id = contract_id(c, sequence_);
    ledger.on_journal([this] { --sequence_; });
    ++sequence_;
    ledger.move(sender, c.escrow_account(), credit, value);
    ledger.on_journal([this, id = c.id] { contracts_.erase(id); });
    contracts_.emplace(c.id, c);
    audit(ledger, c.id, op, "Initiated");
    return c.id;
  }

  static Hash32 contract_id(const Contract& c, std::uint64_t sequence) {
    Sha256 h;
    h.update("proofware-swap:");
    h.update(c.sender.bytes.data(), c.sender.bytes.size());
    h.update(c.receiver.bytes.data(), c.receiver.bytes.size());
    h.update(c.credit);
    h.update(c.hashlock.bytes.data(), c.hashlock.bytes.size());
    std::uint64_t scalars[3] = {c.value, c.timelock, sequence};
    h.update(scalars, sizeof(scalars));
    return h.finish();
  }

  Contract& mutable_contract(const Hash32& id) {
    auto it = contracts_.find(id);
    if (it == contracts_.end()) fail(Errc::UnknownContract, "contract " + id.hex());
    return it->second;
  }

  void set_state(Ledger& ledger, Contract& c, State next, std::optional<Preimage> preimage) {
    Contract* p = &c;
    State old = c.state;
    auto old_preimage = c.revealed_preimage;
    ledger.on_journal([p, old, old_preimage] {
      p->state = old;
      p->revealed_preimage = old_preimage;
    });
    c.state = next;
    if (preimage) c.revealed_preimage = preimage;
  }

  void audit(Ledger& ledger, const Hash32& id, const char* op, const std::string& outcome) {
    audit_.push_back({ledger.current_height(), id, op, outcome});
  }

  std::map<Hash32, Contract> contracts_;
  std::vector<AuditRow> audit_;
  std::uint64_t sequence_ = 0;
};

}  // namespace proofware::swap
