// proofware: desk-scale decentralised application-credit economy
// Copyright 2026 The proofware Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "proofware/ledger.hpp"
#include "proofware/swap.hpp"

namespace proofware::swap {

// Adversarial-schedule checker for the two-leg swap. It drives the real
// contract book on real ledgers through every interleaving of the protocol
// actions and clock advances up to a horizon; every prefix counts as a
// schedule (a party may abort at any point).
//
// A terminal counts as a VIOLATION only when a party lost their escrow and at
// no point of the schedule had an open recovery window (counterpart leg still
// live, preimage known, before its timelock). A party that lets an open
// window lapse has forfeited recourse, not been denied it.

enum class ScheduleAction {
  Initiate,      // initiator escrows leg A (timelock t0 + 2D)
  Participate,   // participant escrows leg B under the same hashlock (t0 + D)
  RedeemLegB,    // initiator claims leg B, revealing the preimage
  RedeemLegA,    // participant claims leg A with the now-public preimage
  RefundLegA,    // initiator reclaims leg A at/after its timelock
  RefundLegB,    // participant reclaims leg B at/after its timelock
  AdvanceClock,  // seal one (empty) block
};

inline constexpr ScheduleAction kAllScheduleActions[] = {
    ScheduleAction::Initiate,   ScheduleAction::Participate, ScheduleAction::RedeemLegB,
    ScheduleAction::RedeemLegA, ScheduleAction::RefundLegA,  ScheduleAction::RefundLegB,
    ScheduleAction::AdvanceClock,
};

enum class Verdict { BothSettled, BothRefundable, Violation };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::BothSettled: return "both-settled";
    case Verdict::BothRefundable: return "both-refundable";
    case Verdict::Violation: return "VIOLATION";
  }
  return "?";
}

struct SessionParams {
  Amount value_a = credits(100);  // initiator's escrow, credit X
  Amount value_b = credits(80);   // participant's escrow, credit Y
  std::uint64_t delta_blocks = 3;  // leg B timelock = D, leg A = 2D
  Preimage secret{{0x5e, 0xc4, 0xe7}};
};

struct CheckerWorld {
  Ledger ledger;
  Book book;
  Address alice = address_from_seed("swap-check-alice");
  Address bob = address_from_seed("swap-check-bob");
  CreditUnitId credit_x;
  CreditUnitId credit_y;
  SessionParams params;
  std::optional<Hash32> leg_a;
  std::optional<Hash32> leg_b;
  bool preimage_public = false;
  bool alice_had_window = false;
  bool bob_had_window = false;
  double clock_hours = 0.0;

  static CheckerWorld make(const SessionParams& params) {
    CheckerWorld w;
    w.params = params;
    w.credit_x = w.ledger.register_credit("swap-check-x", params.value_a, w.alice);
    w.credit_y = w.ledger.register_credit("swap-check-y", params.value_b, w.bob);
    return w;
  }

  std::uint64_t timelock_a() const { return 2 * params.delta_blocks; }
  std::uint64_t timelock_b() const { return params.delta_blocks; }
  std::uint64_t height() const { return ledger.current_height(); }

  const Contract* contract_of(const std::optional<Hash32>& leg) const {
    return leg ? &book.contract(*leg) : nullptr;
  }

  bool enabled(ScheduleAction a) const {
    const Contract* la = contract_of(leg_a);
    const Contract* lb = contract_of(leg_b);
    switch (a) {
      case ScheduleAction::Initiate:
        return !leg_a && height() < timelock_a();
      case ScheduleAction::Participate:
        return leg_a && !leg_b && height() < timelock_b();
      case ScheduleAction::RedeemLegB:
        return lb && lb->state == State::Initiated && height() < timelock_b();
      case ScheduleAction::RedeemLegA:
        return la && la->state == State::Initiated && height() < timelock_a() && preimage_public;
      case ScheduleAction::RefundLegA:
        return la && la->state == State::Initiated && height() >= timelock_a();
      case ScheduleAction::RefundLegB:
        return lb && lb->state == State::Initiated && height() >= timelock_b();
      case ScheduleAction::AdvanceClock:
        return true;
    }
    return false;
  }

  void apply(ScheduleAction a) {
    switch (a) {
      case ScheduleAction::Initiate:
        leg_a = book.initiate(ledger, alice, bob, credit_x, params.value_a, params.secret, timelock_a());
        break;
      case ScheduleAction::Participate:
        leg_b = book.participate(ledger, bob, alice, credit_y, params.value_b,
                                 hashlock_of(params.secret), timelock_b());
        break;
      case ScheduleAction::RedeemLegB:
        book.redeem(ledger, *leg_b, alice, params.secret);
        preimage_public = true;  // on-chain reveal
        break;
      case ScheduleAction::RedeemLegA:
        book.redeem(ledger, *leg_a, bob, params.secret);
        break;
      case ScheduleAction::RefundLegA:
        book.refund(ledger, *leg_a, alice);
        break;
      case ScheduleAction::RefundLegB:
        book.refund(ledger, *leg_b, bob);
        break;
      case ScheduleAction::AdvanceClock:
        clock_hours += 1.0;
        ledger.seal_block(clock_hours);
        break;
    }
    note_windows();
  }

  // recovery windows currently open
  bool alice_window_open() const {
    const Contract* lb = contract_of(leg_b);
    return lb && lb->state == State::Initiated && height() < timelock_b();
  }
  bool bob_window_open() const {
    const Contract* la = contract_of(leg_a);
    return la && la->state == State::Initiated && height() < timelock_a() && preimage_public;
  }

  void note_windows() {
    alice_had_window = alice_had_window || alice_window_open();
    bob_had_window = bob_had_window || bob_window_open();
  }

  bool alice_lost_without_recourse() const {
    const Contract* la = contract_of(leg_a);
    const Contract* lb = contract_of(leg_b);
    bool lost = la && la->state == State::Redeemed && !(lb && lb->state == State::Redeemed);
    return lost && !alice_had_window && !alice_window_open();
  }
  bool bob_lost_without_recourse() const {
    const Contract* la = contract_of(leg_a);
    const Contract* lb = contract_of(leg_b);
    bool lost = lb && lb->state == State::Redeemed && !(la && la->state == State::Redeemed);
    return lost && !bob_had_window && !bob_window_open();
  }

  // every escrowed unit is in exactly one of: contract escrow, claimant
  // balance, refunder balance — and nowhere else
  bool value_conserved() const {
    Amount x = ledger.balance(alice, credit_x) + ledger.balance(bob, credit_x);
    Amount y = ledger.balance(alice, credit_y) + ledger.balance(bob, credit_y);
    if (const Contract* la = contract_of(leg_a)) x += ledger.balance(la->escrow_account(), credit_x);
    if (const Contract* lb = contract_of(leg_b)) y += ledger.balance(lb->escrow_account(), credit_y);
    return x == params.value_a && y == params.value_b &&
           ledger.total_in_circulation(credit_x) == params.value_a &&
           ledger.total_in_circulation(credit_y) == params.value_b;
  }

  Verdict verdict() const {
    if (alice_lost_without_recourse() || bob_lost_without_recourse()) return Verdict::Violation;
    const Contract* la = contract_of(leg_a);
    const Contract* lb = contract_of(leg_b);
    if (la && lb && la->state == State::Redeemed && lb->state == State::Redeemed)
      return Verdict::BothSettled;
    return Verdict::BothRefundable;
  }

  std::pair<std::string, std::string> histogram_key() const {
    const Contract* la = contract_of(leg_a);
    const Contract* lb = contract_of(leg_b);
    return {la ? state_name(la->state) : "absent", lb ? state_name(lb->state) : "absent"};
  }
};

// single-schedule verdict; disabled actions abort the schedule at that point
inline Verdict apply_schedule(const SessionParams& params, std::span<const ScheduleAction> schedule) {
  CheckerWorld w = CheckerWorld::make(params);
  for (ScheduleAction a : schedule) {
    if (!w.enabled(a)) break;
    w.apply(a);
  }
  return w.verdict();
}

struct Report {
  std::uint64_t total_schedules = 0;
  std::uint64_t violations = 0;
  std::uint64_t conservation_failures = 0;
  std::uint64_t both_settled = 0;
  std::uint64_t both_refundable = 0;
  int horizon = 0;
  std::map<std::pair<std::string, std::string>, std::uint64_t> terminal_histogram;

  bool clean() const { return violations == 0 && conservation_failures == 0; }

  void render(std::ostream& os) const {
    os << "schedule-checker report\n";
    os << "horizon-steps " << horizon << "\n";
    os << "total-schedules " << total_schedules << "\n";
    os << "verdict-both-settled " << both_settled << "\n";
    os << "verdict-both-refundable " << both_refundable << "\n";
    os << "verdict-violations " << violations << "\n";
    os << "conservation-failures " << conservation_failures << "\n";
    os << "terminal-histogram (legA legB count)\n";
    for (const auto& [key, count] : terminal_histogram)
      os << "  " << key.first << " " << key.second << " " << count << "\n";
  }
};

namespace detail {

inline void explore(const CheckerWorld& w, int depth, int horizon, Report& report) {
  ++report.total_schedules;
  ++report.terminal_histogram[w.histogram_key()];
  switch (w.verdict()) {
    case Verdict::Violation: ++report.violations; break;
    case Verdict::BothSettled: ++report.both_settled; break;
    case Verdict::BothRefundable: ++report.both_refundable; break;
  }
  if (!w.value_conserved()) ++report.conservation_failures;
  if (depth == horizon) return;
  for (ScheduleAction a : kAllScheduleActions) {
    if (!w.enabled(a)) continue;
    CheckerWorld child = w;
    child.apply(a);
    explore(child, depth + 1, horizon, report);
  }
}

}  // namespace detail

inline Report check_atomicity(const SessionParams& params, int horizon) {
  Report report;
  report.horizon = horizon;
  detail::explore(CheckerWorld::make(params), 0, horizon, report);
  return report;
}

}  // namespace proofware::swap
