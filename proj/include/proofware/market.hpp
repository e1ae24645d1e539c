// proofware: desk-scale decentralised application-credit economy
// Copyright 2026 The proofware Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "proofware/ledger.hpp"
#include "proofware/types.hpp"

namespace proofware::market {

inline constexpr std::uint32_t kWeightScale = 1'000'000;  // weight stored as parts-per-million

// Reserve-backed market maker for one application credit. The curve state is
// carried at double precision in micro-units: supply stays integral (whole
// micro-units issued/burned), reserve tracks the exact cost of that supply on
// the curve. Ledger transfers are integers rounded in the adaptor's favor, so
// the adaptor's account can only run ahead of the curve, never behind it.
struct CreditAdaptor {
  CreditUnitId credit;
  double reserve = 0.0;  // B: main-credit micro-units backing the curve
  double supply = 0.0;   // S: outstanding application-credit micro-units
  std::uint32_t weight_ppm = kWeightScale;

  double weight() const { return static_cast<double>(weight_ppm) / kWeightScale; }

  bool initialized() const {
    return reserve > 0.0 && supply > 0.0 && weight_ppm >= 1 && weight_ppm <= kWeightScale;
  }
};

// External valuation of the main credit; market cap is derived.
struct MainCreditStats {
  double price = 1.0;       // external numeraire per main-credit unit
  Amount total_units = 0;   // micro-units

  double market_cap() const { return price * static_cast<double>(total_units) / kMicroPerCredit; }
};

enum class TradeDirection { Buy, Sell, QuoteDeposit };

struct TradeQuote {
  TradeDirection direction = TradeDirection::Buy;
  Amount input = 0;        // what the trader provides, micro-units
  Amount output = 0;       // what the trader receives, micro-units (adaptor-favored rounding)
  double coefficient = 0.0;  // supply coefficient for buys, payout coefficient for deposit quotes
  CreditAdaptor pre_state;
  CreditAdaptor post_state;
  Amount deposit = 0;  // main credit in
  Amount issued = 0;   // application credit out
};

inline void require_initialized(const CreditAdaptor& a) {
  if (!a.initialized()) fail(Errc::UninitializedAdaptor, "adaptor '" + a.credit + "' has no live curve state");
}

// spot price in main-credit units per application-credit unit: B / (S * W)
inline double spot_price(const CreditAdaptor& a) {
  require_initialized(a);
  return a.reserve / (a.supply * a.weight());
}

inline double implied_weight(double reserve, double price, double supply) {
  if (price <= 0.0 || supply <= 0.0) fail(Errc::ZeroDenominator, "implied weight needs price > 0 and supply > 0");
  return reserve / (price * supply);
}

namespace detail {

// pow with the W = 1 case kept exact so a weight-1 adaptor stays pegged
// through arbitrarily long trade paths.
inline double ratio_pow(double base, double exponent) {
  return exponent == 1.0 ? base : std::pow(base, exponent);
}

// application credit issued for a main-credit deposit, before rounding
inline double issued_for_deposit(const CreditAdaptor& a, double deposit_micro) {
  double w = a.weight();
  if (a.weight_ppm == kWeightScale) return a.supply * (deposit_micro / a.reserve);
  return a.supply * (ratio_pow(1.0 + deposit_micro / a.reserve, w) - 1.0);
}

// exact reserve cost of issuing a given number of application-credit micro-units
inline double deposit_for_issued(const CreditAdaptor& a, double issued_micro) {
  if (a.weight_ppm == kWeightScale) return a.reserve * (issued_micro / a.supply);
  return a.reserve * (ratio_pow(1.0 + issued_micro / a.supply, 1.0 / a.weight()) - 1.0);
}

// main credit returned for burning tokens, before rounding
inline double returned_for_tokens(const CreditAdaptor& a, double tokens_micro) {
  if (a.weight_ppm == kWeightScale) return a.reserve * (tokens_micro / a.supply);
  return a.reserve * (1.0 - ratio_pow(1.0 - tokens_micro / a.supply, 1.0 / a.weight()));
}

inline Amount floor_amount(double v) {
  if (v <= 0.0) return 0;
  return static_cast<Amount>(std::floor(v));
}

}  // namespace detail

// Issue application credit against a main-credit deposit. The buyer receives
// the issuance rounded down to whole micro-units; the curve advances by that
// whole issuance and its exact reserve cost. The sub-micro-unit remainder of
// the deposit stays with the adaptor's account.
inline TradeQuote buy(const CreditAdaptor& a, Amount deposit) {
  require_initialized(a);
  TradeQuote q;
  q.direction = TradeDirection::Buy;
  q.pre_state = a;
  q.post_state = a;
  q.input = deposit;
  q.deposit = deposit;
  if (deposit == 0) return q;

  double e = static_cast<double>(deposit);
  q.coefficient = detail::issued_for_deposit(a, e) / a.supply;
  Amount issued = detail::floor_amount(detail::issued_for_deposit(a, e));
  q.issued = issued;
  q.output = issued;
  if (issued > 0) {
    q.post_state.reserve = a.reserve + detail::deposit_for_issued(a, static_cast<double>(issued));
    q.post_state.supply = a.supply + static_cast<double>(issued);
  }
  return q;
}

// Main-credit deposit needed to obtain at least the target issuance. Rounded
// up, then nudged until a buy at the quoted deposit actually covers the target.
inline TradeQuote quote_deposit(const CreditAdaptor& a, Amount target_issued) {
  require_initialized(a);
  TradeQuote q;
  q.direction = TradeDirection::QuoteDeposit;
  q.pre_state = a;
  q.post_state = a;
  q.input = target_issued;
  q.issued = target_issued;
  if (target_issued == 0) return q;

  double t = static_cast<double>(target_issued);
  q.coefficient = detail::deposit_for_issued(a, t) / a.reserve;
  Amount deposit = static_cast<Amount>(std::ceil(detail::deposit_for_issued(a, t)));
  while (detail::floor_amount(detail::issued_for_deposit(a, static_cast<double>(deposit))) < target_issued)
    ++deposit;
  q.deposit = deposit;
  q.output = deposit;
  q.post_state.reserve = a.reserve + detail::deposit_for_issued(a, t);
  q.post_state.supply = a.supply + t;
  return q;
}

// Burn application credit back into the reserve. Payout rounded down; the
// curve retreats by the exact reserve value of the burned tokens.
inline TradeQuote sell(const CreditAdaptor& a, Amount tokens) {
  require_initialized(a);
  if (static_cast<double>(tokens) > a.supply)
    fail(Errc::TokensExceedSupply,
         std::to_string(tokens) + " micro-units offered against supply " + std::to_string(a.supply));
  TradeQuote q;
  q.direction = TradeDirection::Sell;
  q.pre_state = a;
  q.post_state = a;
  q.input = tokens;
  q.issued = tokens;
  if (tokens == 0) return q;

  double returned = detail::returned_for_tokens(a, static_cast<double>(tokens));
  Amount payout = detail::floor_amount(returned);
  q.output = payout;
  q.deposit = payout;
  q.post_state.reserve = a.reserve - returned;
  q.post_state.supply = a.supply - static_cast<double>(tokens);
  return q;
}

struct ConvertQuote {
  TradeQuote leg_sell;
  TradeQuote leg_buy;
  Amount input = 0;
  Amount output = 0;
};

// Cross-credit conversion through the main credit: sell into the source
// adaptor, buy from the destination with the proceeds. Self-conversion chains
// the legs on the updated state.
inline ConvertQuote convert(const CreditAdaptor& from, const CreditAdaptor& to, Amount amount) {
  ConvertQuote q;
  q.input = amount;
  q.leg_sell = sell(from, amount);
  const CreditAdaptor& to_state = (from.credit == to.credit) ? q.leg_sell.post_state : to;
  q.leg_buy = buy(to_state, q.leg_sell.output);
  q.output = q.leg_buy.output;
  return q;
}

// --- ledger-backed market engine ------------------------------------------

struct TradeLogRow {
  double time_hours = 0.0;
  TradeDirection direction = TradeDirection::Buy;
  Amount input = 0;
  Amount output = 0;
  double post_reserve = 0.0;
  double post_supply = 0.0;
  double post_price = 0.0;
};

// Holds the adaptors of one ledger world and executes quotes against it.
// Mutations are journal-aware, so trades revert cleanly inside execute().
class Book {
 public:
  struct Entry {
    CreditAdaptor adaptor;
    Address account;  // holds the main-credit reserve on the ledger
  };

  // Seeds the adaptor so Eq. (3) holds at genesis: B0 = P0 * S0 * W. The
  // funder provides the integer reserve (rounded up), the credit's current
  // registered supply becomes the outstanding supply.
  const Entry& create(Ledger& ledger, const CreditUnitId& credit, double initial_price,
                      std::uint32_t weight_ppm, const Address& funder) {
    const auto& info = ledger.credit_info(credit);
    if (entries_.count(credit)) fail(Errc::DuplicateName, "adaptor for '" + credit + "' already exists");
    if (weight_ppm < 1 || weight_ppm > kWeightScale)
      fail(Errc::BadScenario, "weight ppm out of range: " + std::to_string(weight_ppm));
    if (info.total_supply == 0 || initial_price <= 0.0)
      fail(Errc::UninitializedAdaptor, "adaptor needs positive initial supply and price");
    CreditAdaptor a;
    a.credit = credit;
    a.supply = static_cast<double>(info.total_supply);
    a.weight_ppm = weight_ppm;
    a.reserve = initial_price * a.supply * a.weight();
    Amount reserve_int = static_cast<Amount>(std::ceil(a.reserve));
    Address account = address_from_seed("proofware-adaptor:" + credit);
    ledger.move(funder, account, kMainCreditId, reserve_int);
    auto [it, _] = entries_.emplace(credit, Entry{a, account});
    return it->second;
  }

  // snapshot load path: reattach an adaptor with its persisted curve state
  void restore(const CreditUnitId& credit, std::uint32_t weight_ppm, double reserve, double supply) {
    CreditAdaptor a;
    a.credit = credit;
    a.weight_ppm = weight_ppm;
    a.reserve = reserve;
    a.supply = supply;
    entries_[credit] = Entry{a, address_from_seed("proofware-adaptor:" + credit)};
  }

  bool has(const CreditUnitId& credit) const { return entries_.count(credit) != 0; }

  const Entry& entry(const CreditUnitId& credit) const {
    auto it = entries_.find(credit);
    if (it == entries_.end()) fail(Errc::UnknownCredit, "no adaptor for credit '" + credit + "'");
    return it->second;
  }

  const CreditAdaptor& adaptor(const CreditUnitId& credit) const { return entry(credit).adaptor; }
  const std::map<CreditUnitId, Entry>& entries() const { return entries_; }

  TradeQuote exec_buy(Ledger& ledger, const Address& buyer, const CreditUnitId& credit, Amount deposit) {
    Entry& e = mutable_entry(credit);
    TradeQuote q = buy(e.adaptor, deposit);
    ledger.move(buyer, e.account, kMainCreditId, deposit);
    if (q.issued > 0) ledger.mint(buyer, credit, q.issued);
    commit_state(ledger, e, q.post_state);
    log_trade(ledger, q);
    return q;
  }

  TradeQuote exec_sell(Ledger& ledger, const Address& seller, const CreditUnitId& credit, Amount tokens) {
    Entry& e = mutable_entry(credit);
    TradeQuote q = sell(e.adaptor, tokens);
    ledger.burn(seller, credit, tokens);
    if (q.output > 0) ledger.move(e.account, seller, kMainCreditId, q.output);
    commit_state(ledger, e, q.post_state);
    log_trade(ledger, q);
    return q;
  }

  ConvertQuote exec_convert(Ledger& ledger, const Address& owner, const CreditUnitId& from,
                            const CreditUnitId& to, Amount amount) {
    ConvertQuote q;
    q.input = amount;
    q.leg_sell = exec_sell(ledger, owner, from, amount);
    q.leg_buy = exec_buy(ledger, owner, to, q.leg_sell.output);
    q.output = q.leg_buy.output;
    return q;
  }

  // Pure quote against current snapshots; never touches ledger or book state.
  ConvertQuote quote_convert(const CreditUnitId& from, const CreditUnitId& to, Amount amount) const {
    return convert(adaptor(from), adaptor(to), amount);
  }

  void enable_trade_log(bool on) { log_enabled_ = on; }
  void set_log_clock(double hours) { log_clock_hours_ = hours; }
  const std::vector<TradeLogRow>& trade_log() const { return trade_log_; }

  void export_trade_log(std::ostream& os) const {
    os << "time,direction,input,output,postReserve,postSupply,postPrice\n";
    char buf[160];
    for (const auto& r : trade_log_) {
      const char* dir = r.direction == TradeDirection::Buy ? "buy" : "sell";
      std::snprintf(buf, sizeof(buf), "%.6f,%s,%llu,%llu,%.6f,%.6f,%.9f\n", r.time_hours, dir,
                    static_cast<unsigned long long>(r.input), static_cast<unsigned long long>(r.output),
                    r.post_reserve, r.post_supply, r.post_price);
      os << buf;
    }
  }

 private:
  Entry& mutable_entry(const CreditUnitId& credit) {
    auto it = entries_.find(credit);
    if (it == entries_.end()) fail(Errc::UnknownCredit, "no adaptor for credit '" + credit + "'");
    return it->second;
  }

  // state write goes last so ledger failures leave the curve untouched;
  // journal hook covers reverts of enclosing metered transactions
  void commit_state(Ledger& ledger, Entry& e, const CreditAdaptor& post) {
    CreditAdaptor old = e.adaptor;
    Entry* p = &e;
    ledger.on_journal([p, old] { p->adaptor = old; });
    e.adaptor = post;
  }

  void log_trade(Ledger& ledger, const TradeQuote& q) {
    if (!log_enabled_) return;
    TradeLogRow r;
    r.time_hours = log_clock_hours_;
    r.direction = q.direction;
    r.input = q.input;
    r.output = q.output;
    r.post_reserve = q.post_state.reserve / kMicroPerCredit;
    r.post_supply = q.post_state.supply / kMicroPerCredit;
    r.post_price = q.post_state.initialized() ? spot_price(q.post_state) : 0.0;
    std::size_t idx = trade_log_.size();
    ledger.on_journal([this, idx] { trade_log_.resize(idx); });
    trade_log_.push_back(r);
  }

  std::map<CreditUnitId, Entry> entries_;
  std::vector<TradeLogRow> trade_log_;
  bool log_enabled_ = false;
  double log_clock_hours_ = 0.0;
};

}  // namespace proofware::market
