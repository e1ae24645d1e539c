// proofware: desk-scale decentralised application-credit economy
// Copyright 2026 The proofware Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "proofware/graph.hpp"
#include "proofware/market.hpp"
#include "proofware/node.hpp"
#include "proofware/rng.hpp"
#include "proofware/types.hpp"

namespace proofware::sim {

struct DemandProcess {
  double net_buy_rate = 1.0;     // expected main-credit deposit per bot-hour, in credits
  double buy_probability = 0.7;  // a bot otherwise sells a fraction of its holdings
};

struct GasPriceProcess {
  double mean = 2'000.0;  // main-credit micro-units per gas unit
  double spread = 0.25;   // log-space sigma of the per-day draw
};

struct Scenario {
  std::uint64_t seed = 42;
  int bot_count = 500;
  int horizon_hours = 16;
  std::vector<std::uint32_t> weight_rounds = {1'000'000, 500'000, 800'000};
  Amount initial_supply = credits(500);
  double initial_price = 1.0;
  DemandProcess demand;
  int days = 31;
  std::uint64_t daily_tx_min = 2'000;
  std::uint64_t daily_tx_max = 8'000;
  GasPriceProcess gas_price;

  void validate() const {
    if (bot_count <= 0) fail(Errc::BadScenario, "botCount must be positive");
    if (horizon_hours < 0) fail(Errc::BadScenario, "horizonHours must be nonnegative");
    if (weight_rounds.empty()) fail(Errc::BadScenario, "weightRounds must not be empty");
    for (auto w : weight_rounds)
      if (w < 1 || w > market::kWeightScale)
        fail(Errc::BadScenario, "weight ppm out of (0, 1000000]: " + std::to_string(w));
    if (initial_supply == 0) fail(Errc::BadScenario, "initialSupply must be positive");
    if (initial_price <= 0.0) fail(Errc::BadScenario, "initialPrice must be positive");
    if (demand.buy_probability < 0.0 || demand.buy_probability > 1.0)
      fail(Errc::BadScenario, "buyProbability must be in [0, 1]");
    if (demand.net_buy_rate <= 0.0) fail(Errc::BadScenario, "netBuyRate must be positive");
    if (days < 0) fail(Errc::BadScenario, "days must be nonnegative");
    if (daily_tx_min > daily_tx_max) fail(Errc::BadScenario, "dailyTxRange min exceeds max");
    if (gas_price.mean <= 0.0) fail(Errc::BadScenario, "gas price mean must be positive");
  }

  static Scenario from_json(const nlohmann::json& j) {
    Scenario sc;
    try {
      if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("botCount")) sc.bot_count = j.at("botCount").get<int>();
      if (j.contains("horizonHours")) sc.horizon_hours = j.at("horizonHours").get<int>();
      if (j.contains("weightRounds")) sc.weight_rounds = j.at("weightRounds").get<std::vector<std::uint32_t>>();
      if (j.contains("initialSupply"))
        sc.initial_supply = static_cast<Amount>(j.at("initialSupply").get<double>() * kMicroPerCredit);
      if (j.contains("initialPrice")) sc.initial_price = j.at("initialPrice").get<double>();
      if (j.contains("demandProcess")) {
        const auto& d = j.at("demandProcess");
        if (d.contains("netBuyRate")) sc.demand.net_buy_rate = d.at("netBuyRate").get<double>();
        if (d.contains("buyProbability")) sc.demand.buy_probability = d.at("buyProbability").get<double>();
      }
      if (j.contains("days")) sc.days = j.at("days").get<int>();
      if (j.contains("dailyTxRange")) {
        const auto& r = j.at("dailyTxRange");
        sc.daily_tx_min = r.at(0).get<std::uint64_t>();
        sc.daily_tx_max = r.at(1).get<std::uint64_t>();
      }
      if (j.contains("gasPriceProcess")) {
        const auto& g = j.at("gasPriceProcess");
        if (g.contains("mean")) sc.gas_price.mean = g.at("mean").get<double>();
        if (g.contains("spread")) sc.gas_price.spread = g.at("spread").get<double>();
      }
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::BadScenario, std::string("scenario parse: ") + e.what());
    }
    sc.validate();
    return sc;
  }

  static Scenario from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(Errc::IoFailure, "cannot open scenario '" + path + "'");
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::BadScenario, std::string("scenario parse: ") + e.what());
    }
    return from_json(j);
  }
};

// --- weight sweep (hourly price series per adaptor weight) ------------------

struct PriceSample {
  int hour = 0;
  double price = 0.0;
  double supply_micro = 0.0;
  double reserve_micro = 0.0;
};

struct RoundSeries {
  std::uint32_t weight_ppm = 0;
  std::string label;
  std::vector<PriceSample> samples;  // horizon_hours + 1 entries
};

struct PriceSeries {
  std::vector<RoundSeries> rounds;
};

inline std::string weight_label(std::uint32_t weight_ppm) {
  if (weight_ppm % 100'000 == 0) return "w" + std::to_string(weight_ppm / 100'000);
  return "w" + std::to_string(weight_ppm);
}

inline PriceSeries run_weight_sweep(const Scenario& sc) {
  sc.validate();
  PriceSeries series;
  for (std::size_t round = 0; round < sc.weight_rounds.size(); ++round) {
    std::uint32_t weight_ppm = sc.weight_rounds[round];
    Rng rng(split_seed(sc.seed, round));

    Address treasury = address_from_seed("sim-treasury");
    Address issuer = address_from_seed("sim-issuer");
    Ledger ledger(treasury, credits(1'000'000'000));
    market::Book book;
    CreditUnitId credit = ledger.register_credit("ourtube", sc.initial_supply, issuer);
    book.create(ledger, credit, sc.initial_price, weight_ppm, treasury);

    std::vector<Address> bots(static_cast<std::size_t>(sc.bot_count));
    Amount stake = credits(static_cast<std::uint64_t>(
        std::max(1'000.0, sc.demand.net_buy_rate * sc.horizon_hours * 20.0)));
    for (int i = 0; i < sc.bot_count; ++i) {
      bots[static_cast<std::size_t>(i)] = address_from_seed("sim-bot-" + std::to_string(i));
      ledger.transfer(treasury, bots[static_cast<std::size_t>(i)], kMainCreditId, stake);
    }
    ledger.seal_block(0.0);

    RoundSeries rs;
    rs.weight_ppm = weight_ppm;
    rs.label = weight_label(weight_ppm);
    auto sample = [&](int hour) {
      const auto& a = book.adaptor(credit);
      rs.samples.push_back({hour, market::spot_price(a), a.supply, a.reserve});
    };
    sample(0);

    for (int hour = 1; hour <= sc.horizon_hours; ++hour) {
      for (const Address& bot : bots) {
        if (rng.bernoulli(sc.demand.buy_probability)) {
          Amount deposit = static_cast<Amount>(
              std::llround(rng.exponential(sc.demand.net_buy_rate) * kMicroPerCredit));
          deposit = std::min(deposit, ledger.balance(bot, kMainCreditId));
          if (deposit > 0) book.exec_buy(ledger, bot, credit, deposit);
        } else {
          // sell a random slice (up to a quarter) of current holdings
          Amount held = ledger.balance(bot, credit);
          Amount tokens = static_cast<Amount>(std::floor(static_cast<double>(held) * 0.25 * rng.uniform()));
          if (tokens > 0) book.exec_sell(ledger, bot, credit, tokens);
        }
      }
      ledger.seal_block(static_cast<double>(hour));
      sample(hour);
    }
    series.rounds.push_back(std::move(rs));
  }
  return series;
}

inline void export_price_csv(const PriceSeries& series, std::ostream& os) {
  os << "time";
  for (const auto& r : series.rounds) os << "," << r.label;
  os << "\n";
  if (series.rounds.empty()) return;
  std::size_t rows = series.rounds.front().samples.size();
  char buf[40];
  for (std::size_t i = 0; i < rows; ++i) {
    os << series.rounds.front().samples[i].hour;
    for (const auto& r : series.rounds) {
      std::snprintf(buf, sizeof(buf), ",%.9f", r.samples[i].price);
      os << buf;
    }
    os << "\n";
  }
}

// --- gas study (daily mixed-load transaction aggregates) --------------------

struct DailyAggregate {
  int day = 0;  // 1-based day index (the tx_date column)
  std::uint64_t tx_count = 0;
  std::uint64_t sum_receipt_gas_used = 0;
  Amount sum_receipt_gas_fee_paid = 0;
  std::uint64_t sum_gas = 0;  // sum of gas limits: the capped usage
};

struct GasStudyResult {
  std::vector<DailyAggregate> days;
  std::vector<ExecutedTx> executed;
  graph::TransactionGraph graph;
  double modularity_q = 0.0;
  bool has_graph = false;
};

namespace detail {

struct PendingSwap {
  Hash32 contract_id;
  Address receiver;
  Address sender;
  swap::Preimage secret;
};

inline swap::Preimage draw_preimage(Rng& rng) {
  swap::Preimage p{};
  for (int i = 0; i < 4; ++i) {
    std::uint64_t v = rng.next_u64();
    for (int b = 0; b < 8; ++b) p[static_cast<std::size_t>(8 * i + b)] = static_cast<std::uint8_t>(v >> (8 * b));
  }
  return p;
}

}  // namespace detail

inline GasStudyResult run_gas_study(const Scenario& sc) {
  sc.validate();
  GasStudyResult result;
  if (sc.days == 0) return result;

  Rng rng(split_seed(sc.seed, 0x9a5));
  NodeConfig cfg;
  cfg.main_supply = credits(4'000'000'000ULL);
  Node node(cfg);
  Ledger& ledger = node.ledger();

  // two disjoint bot populations, one application credit each
  const int group_size = std::max(1, sc.bot_count / 2);
  struct Group {
    CreditUnitId credit;
    std::vector<Address> bots;
    std::optional<detail::PendingSwap> pending;
  };
  Group groups[2];
  groups[0].credit = ledger.register_credit("ourtube", credits(10'000'000), node.treasury());
  groups[1].credit = ledger.register_credit("acme", credits(10'000'000), node.treasury());
  node.market().create(ledger, groups[0].credit, sc.initial_price, 500'000, node.treasury());
  node.market().create(ledger, groups[1].credit, sc.initial_price, 500'000, node.treasury());
  for (int g = 0; g < 2; ++g) {
    for (int i = 0; i < group_size; ++i) {
      Address bot = address_from_seed("gas-bot-" + std::to_string(g) + "-" + std::to_string(i));
      ledger.transfer(node.treasury(), bot, kMainCreditId, credits(1'000'000));
      ledger.transfer(node.treasury(), bot, groups[g].credit, credits(10'000));
      groups[g].bots.push_back(bot);
    }
  }
  ledger.seal_block(0.0);

  auto jitter_limit = [&](std::uint64_t cost) {
    return static_cast<std::uint64_t>(std::ceil(static_cast<double>(cost) * (1.0 + 0.25 * rng.uniform())));
  };
  auto small_amount = [&](double mean_credits) {
    return static_cast<Amount>(std::llround(rng.exponential(mean_credits) * kMicroPerCredit)) + 1;
  };

  for (int day = 1; day <= sc.days; ++day) {
    Amount day_gas_price = static_cast<Amount>(
        std::max<long long>(1, std::llround(rng.lognormal_mean(sc.gas_price.mean, sc.gas_price.spread))));
    std::uint64_t n = rng.uniform_u64(sc.daily_tx_min, sc.daily_tx_max);
    std::size_t first_executed = ledger.executed().size();

    for (std::uint64_t i = 0; i < n; ++i) {
      Group& group = groups[rng.bernoulli(0.5) ? 1 : 0];
      const Address& sender = group.bots[rng.uniform_u64(0, group.bots.size() - 1)];
      double roll = rng.uniform();
      if (roll < 0.60) {
        const Address& receiver = group.bots[rng.uniform_u64(0, group.bots.size() - 1)];
        Amount value = std::min(small_amount(0.5), ledger.balance(sender, group.credit));
        Transaction tx = node.build_transfer(sender, receiver, group.credit, value,
                                             jitter_limit(cfg.gas.transfer), day_gas_price);
        node.execute(tx);
      } else if (roll < 0.90) {
        if (rng.bernoulli(0.5)) {
          Amount deposit = small_amount(1.0);
          Transaction tx = node.build_market(sender, group.credit, deposit,
                                             payload::market_buy(group.credit, deposit),
                                             jitter_limit(cfg.gas.market_trade), day_gas_price);
          node.execute(tx);
        } else {
          Amount tokens = std::min(small_amount(1.0), ledger.balance(sender, group.credit));
          Transaction tx = node.build_market(sender, group.credit, tokens,
                                             payload::market_sell(group.credit, tokens),
                                             jitter_limit(cfg.gas.market_trade), day_gas_price);
          node.execute(tx);
        }
      } else {
        if (!group.pending) {
          detail::PendingSwap p;
          p.secret = detail::draw_preimage(rng);
          p.sender = sender;
          p.receiver = group.bots[rng.uniform_u64(0, group.bots.size() - 1)];
          Amount value = std::min(small_amount(0.5), ledger.balance(sender, group.credit));
          std::uint64_t timelock = ledger.current_height() + 1'000;
          Transaction tx = node.build_swap(
              sender, p.receiver, group.credit, value,
              payload::swap_init(p.receiver, group.credit, value, swap::hashlock_of(p.secret), timelock),
              jitter_limit(cfg.gas.swap_step), day_gas_price);
          node.execute(tx);
          p.contract_id = node.last_contract_id();
          group.pending = p;
        } else {
          const detail::PendingSwap& p = *group.pending;
          Transaction tx = node.build_swap(p.receiver, p.sender, group.credit, 0,
                                           payload::swap_redeem(p.contract_id, p.secret),
                                           jitter_limit(cfg.gas.swap_step), day_gas_price);
          node.execute(tx);
          group.pending.reset();
        }
      }
    }

    ledger.seal_block(24.0 * day);

    DailyAggregate agg;
    agg.day = day;
    const auto& executed = ledger.executed();
    for (std::size_t k = first_executed; k < executed.size(); ++k) {
      agg.tx_count++;
      agg.sum_receipt_gas_used += executed[k].receipt.gas_used;
      agg.sum_receipt_gas_fee_paid = checked_add(agg.sum_receipt_gas_fee_paid, executed[k].receipt.fee);
      agg.sum_gas += executed[k].tx.gas_limit;
    }
    result.days.push_back(agg);
  }

  result.executed = ledger.executed();
  if (!result.executed.empty()) {
    result.graph = graph::build_transaction_graph(result.executed);
    if (!result.graph.edges.empty()) {
      result.modularity_q = graph::modularity(result.graph);
      result.has_graph = true;
    }
  }
  return result;
}

inline void export_daily_csv(const std::vector<DailyAggregate>& days, std::ostream& os) {
  os << "tx_date,tx_count,sum_receipt_gas_used,sum_receipt_gas_fee_paid,sum_gas\n";
  for (const auto& d : days)
    os << d.day << "," << d.tx_count << "," << d.sum_receipt_gas_used << ","
       << d.sum_receipt_gas_fee_paid << "," << d.sum_gas << "\n";
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Errc::IoFailure, "cannot open '" + path + "' for writing");
  f << contents;
  if (!f.good()) fail(Errc::IoFailure, "short write to '" + path + "'");
}

}  // namespace proofware::sim
