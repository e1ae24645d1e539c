// proofware: desk-scale decentralised application-credit economy
// Copyright 2026 The proofware Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Operator entry point: scenario runners, ad-hoc trades and swaps, CSV
// exporters and the HTTP gateway. Batch-style: one subcommand per invocation,
// data to files or stdout, diagnostics to stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "proofware/gateway.hpp"
#include "proofware/graph.hpp"
#include "proofware/node.hpp"
#include "proofware/sim.hpp"
#include "proofware/swap.hpp"
#include "proofware/swap_check.hpp"

namespace fs = std::filesystem;
using namespace proofware;

namespace {

sim::Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed) {
  sim::Scenario sc = path.empty() ? sim::Scenario{} : sim::Scenario::from_file(path);
  if (seed) sc.seed = *seed;
  sc.validate();
  return sc;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(Errc::IoFailure, "cannot create output directory '" + dir + "': " + ec.message());
}

// decimal credits ("1.5") to micro-units
Amount parse_credit_amount(const std::string& s) {
  auto dot = s.find('.');
  std::string whole = dot == std::string::npos ? s : s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) fail(Errc::MalformedAmount, "empty amount");
  if (frac.size() > 6) fail(Errc::MalformedAmount, "at most 6 decimal places (micro-units)");
  while (frac.size() < 6) frac.push_back('0');
  Amount v = 0;
  for (char c : whole + frac) {
    if (c < '0' || c > '9') fail(Errc::MalformedAmount, "bad amount '" + s + "'");
    v = checked_add(v * 10, static_cast<Amount>(c - '0'));
  }
  return v;
}

std::string format_credits(Amount micro) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%llu.%06llu", static_cast<unsigned long long>(micro / kMicroPerCredit),
                static_cast<unsigned long long>(micro % kMicroPerCredit));
  return buf;
}

int cmd_sweep(const std::string& scenario_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed) {
  sim::Scenario sc = load_scenario(scenario_path, seed);
  sim::PriceSeries series = sim::run_weight_sweep(sc);
  ensure_out_dir(out_dir);
  std::ostringstream csv;
  sim::export_price_csv(series, csv);
  std::string path = out_dir + "/simulated.csv";
  sim::write_file(path, csv.str());
  std::cout << "wrote " << path << " (" << series.rounds.size() << " rounds, "
            << (series.rounds.empty() ? 0 : series.rounds.front().samples.size()) << " samples each)\n";
  return 0;
}

int cmd_gas_study(const std::string& scenario_path, const std::string& out_dir,
                  std::optional<std::uint64_t> seed) {
  sim::Scenario sc = load_scenario(scenario_path, seed);
  sim::GasStudyResult result = sim::run_gas_study(sc);
  ensure_out_dir(out_dir);

  std::ostringstream daily;
  sim::export_daily_csv(result.days, daily);
  sim::write_file(out_dir + "/gas_daily.csv", daily.str());

  std::ostringstream edges, communities;
  if (result.has_graph) {
    graph::export_edge_list(result.graph, edges);
    graph::export_communities(result.graph, communities);
  }
  sim::write_file(out_dir + "/tx_graph.edges", edges.str());
  sim::write_file(out_dir + "/tx_graph.communities", communities.str());

  std::cout << "wrote " << out_dir << "/gas_daily.csv (" << result.days.size() << " days)\n";
  if (result.has_graph) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", result.modularity_q);
    std::cout << "modularity " << buf << "\n";
  }
  return 0;
}

int cmd_trade(const std::string& snapshot_path, const std::string& credit_arg,
              const std::string& direction, const std::string& amount_arg,
              const std::string& owner_hex) {
  Node node = fs::exists(snapshot_path) ? Node::load_snapshot_file(snapshot_path)
                                        : make_demo_world().node;
  Ledger& ledger = node.ledger();
  Address owner = owner_hex.empty() ? address_from_seed("proofware-demo-owner")
                                    : Address::from_hex(owner_hex);
  CreditUnitId credit = ledger.has_credit(credit_arg)
                            ? credit_arg
                            : ledger.resolve_name(credit_arg).value_or(CreditUnitId{});
  if (credit.empty() || !ledger.has_credit(credit)) fail(Errc::UnknownCredit, "credit '" + credit_arg + "'");
  Amount amount = parse_credit_amount(amount_arg);

  // quote first for a crisp diagnostic, then run the metered transaction
  market::TradeQuote quote;
  std::vector<std::uint8_t> body;
  if (direction == "buy") {
    if (ledger.balance(owner, kMainCreditId) < amount)
      fail(Errc::InsufficientBalance, "owner holds " + format_credits(ledger.balance(owner, kMainCreditId)) +
                                          " main credit, needs " + format_credits(amount));
    quote = market::buy(node.market().adaptor(credit), amount);
    body = payload::market_buy(credit, amount);
  } else if (direction == "sell") {
    if (ledger.balance(owner, credit) < amount)
      fail(Errc::InsufficientBalance,
           "owner holds " + format_credits(ledger.balance(owner, credit)) + " of '" + credit_arg + "'");
    quote = market::sell(node.market().adaptor(credit), amount);
    body = payload::market_sell(credit, amount);
  } else {
    fail(Errc::MalformedRequest, "direction must be buy or sell");
  }

  Transaction tx = node.build_market(owner, credit, amount, std::move(body));
  Receipt receipt = node.execute(tx);
  if (!receipt.success) fail(Errc::MalformedRequest, "trade reverted; see quote preconditions");
  ledger.seal_block(static_cast<double>(ledger.blocks().size()));
  node.save_snapshot_file(snapshot_path);

  const auto& post = node.market().adaptor(credit);
  std::cout << direction << " " << format_credits(quote.input) << " -> " << format_credits(quote.output)
            << " (fee " << format_credits(receipt.fee) << " main credit)\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9f", market::spot_price(post));
  std::cout << "post price " << buf << ", snapshot " << snapshot_path << "\n";
  return 0;
}

int cmd_swap_demo(std::uint64_t delta_blocks) {
  DemoWorld world = make_demo_world();
  Node& node = world.node;
  Ledger& ledger = node.ledger();

  Address alice = address_from_seed("swap-demo-alice");
  Address bob = address_from_seed("swap-demo-bob");
  ledger.transfer(node.treasury(), alice, kMainCreditId, credits(1'000));
  ledger.transfer(node.treasury(), bob, kMainCreditId, credits(1'000));
  ledger.transfer(world.owner, alice, world.ourtube, credits(100));
  ledger.transfer(world.owner, bob, world.acme, credits(100));
  ledger.seal_block(1.0);

  swap::Preimage secret{};
  Hash32 seed_hash = sha256("swap-demo-secret");
  std::copy(seed_hash.bytes.begin(), seed_hash.bytes.end(), secret.begin());
  Hash32 hashlock = swap::hashlock_of(secret);
  std::uint64_t h = ledger.current_height();

  Amount value_a = credits(40);
  Amount value_b = credits(25);
  node.execute(node.build_swap(alice, bob, world.ourtube, value_a,
                               payload::swap_init(bob, world.ourtube, value_a, hashlock,
                                                  h + 2 * delta_blocks)));
  Hash32 leg_a = node.last_contract_id();
  node.execute(node.build_swap(bob, alice, world.acme, value_b,
                               payload::swap_participate(alice, world.acme, value_b, hashlock,
                                                         h + delta_blocks)));
  Hash32 leg_b = node.last_contract_id();
  node.execute(node.build_swap(alice, bob, world.acme, 0, payload::swap_redeem(leg_b, secret)));
  node.execute(node.build_swap(bob, alice, world.ourtube, 0, payload::swap_redeem(leg_a, secret)));
  ledger.seal_block(2.0);

  node.swaps().export_audit_log(std::cout);
  bool settled = node.swaps().contract(leg_a).state == swap::State::Redeemed &&
                 node.swaps().contract(leg_b).state == swap::State::Redeemed;
  if (!settled) {
    std::cerr << "swap demo did not settle both legs\n";
    return 1;
  }
  return 0;
}

int cmd_serve(int port, const std::string& snapshot_path) {
  static Node node = (!snapshot_path.empty() && fs::exists(snapshot_path))
                         ? Node::load_snapshot_file(snapshot_path)
                         : make_demo_world().node;
  static std::shared_mutex mutex;
  httplib::Server http;
  gateway::install_routes(http, node, mutex);
  std::cerr << "gateway listening on port " << port << " (POST /1.0/price, /1.0/swap, /1.0/submit)\n";
  if (!http.listen("0.0.0.0", port)) {
    std::cerr << "cannot bind port " << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proofware: multi-asset ledger, bonding-curve credit markets, atomic swaps and the simulation harness"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", snapshot_path = "out/node.snapshot";
  std::string credit, direction, amount, owner_hex;
  std::optional<std::uint64_t> seed;
  std::uint64_t delta_blocks = 3;
  int port = 8080;

  auto* sweep = app.add_subcommand("sweep", "run the 3-round weight sweep and export simulated.csv");
  sweep->add_option("--scenario", scenario_path, "scenario JSON file");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--seed", seed, "override the scenario seed");

  auto* gas = app.add_subcommand("gas-study", "run the daily gas/fee study and export CSV + graph files");
  gas->add_option("--scenario", scenario_path, "scenario JSON file");
  gas->add_option("--out", out_dir, "output directory");
  gas->add_option("--seed", seed, "override the scenario seed");

  auto* trade = app.add_subcommand("trade", "apply one market trade against a node snapshot");
  trade->add_option("--snapshot", snapshot_path, "node snapshot path (created from the demo world if absent)");
  trade->add_option("--credit", credit, "credit name or id")->required();
  trade->add_option("--direction", direction, "buy or sell")->required();
  trade->add_option("--amount", amount, "amount in credits, up to 6 decimals")->required();
  trade->add_option("--owner", owner_hex, "trading address (default: demo owner)");

  auto* swap_demo = app.add_subcommand("swap-demo", "run the two-leg atomic swap happy path, print the audit log");
  swap_demo->add_option("--delta", delta_blocks, "timelock spacing D in blocks (legA = 2D, legB = D)");

  auto* serve = app.add_subcommand("serve", "serve the price/swap/submit HTTP gateway");
  serve->add_option("--port", port, "listen port");
  serve->add_option("--snapshot", snapshot_path, "node snapshot to serve (demo world if absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) return cmd_sweep(scenario_path, out_dir, seed);
    if (gas->parsed()) return cmd_gas_study(scenario_path, out_dir, seed);
    if (trade->parsed()) return cmd_trade(snapshot_path, credit, direction, amount, owner_hex);
    if (swap_demo->parsed()) return cmd_swap_demo(delta_blocks);
    if (serve->parsed()) return cmd_serve(port, snapshot_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
