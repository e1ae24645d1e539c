// proofware: desk-scale decentralised application-credit economy
// Copyright 2026 The proofware Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "proofware/market.hpp"
#include "proofware/node.hpp"
#include "proofware/types.hpp"

namespace proofware::gateway {

using ojson = nlohmann::ordered_json;

// Wire DTOs. Rendering is canonical: compact JSON, fields in the published
// order, hex fields 0x-prefixed lowercase. Parsing accepts any field order
// and mixed-case hex.

struct PriceRequest {
  std::string main_app_credit;
  std::string from_app_credit_id;
  std::string to_app_credit_id;
  std::string amount;

  std::string render() const {
    ojson j{{"MainAppCredit", main_app_credit},
            {"fromAppCreditId", from_app_credit_id},
            {"toAppCreditId", to_app_credit_id},
            {"amount", amount}};
    return j.dump();
  }
};

struct PriceResponse {
  std::string price;

  std::string render() const { return ojson{{"price", price}}.dump(); }
};

struct SwapRequest {
  std::string blockchain_type;
  std::string from_app_credit_id;
  std::string to_app_credit_id;
  std::string amount;
  std::string owner_address;

  std::string render() const {
    ojson j{{"blockchainType", blockchain_type},
            {"fromAppCreditId", from_app_credit_id},
            {"toAppCreditId", to_app_credit_id},
            {"amount", amount},
            {"ownerAddress", owner_address}};
    return j.dump();
  }
};

struct TxEnvelope {
  std::string from;
  std::string to;
  std::string data;       // 0x-hex transaction payload
  std::string value;      // 0x-hex quantity
  std::string gas_price;  // 0x-hex quantity
  std::string nonce;      // 0x-hex quantity
  std::string gas_limit;  // 0x-hex quantity

  ojson to_json() const {
    return ojson{{"from", from},   {"to", to},       {"data", data},         {"value", value},
                 {"gasPrice", gas_price}, {"nonce", nonce}, {"gasLimit", gas_limit}};
  }
  std::string render() const { return to_json().dump(); }
};

struct SwapResponse {
  std::vector<TxEnvelope> data;

  std::string render() const {
    ojson arr = ojson::array();
    for (const auto& e : data) arr.push_back(e.to_json());
    return ojson{{"data", arr}}.dump();
  }
};

struct SubmitResponse {
  Receipt receipt;

  std::string render() const {
    ojson j{{"txId", receipt.tx_id.hex()},
            {"status", receipt.status()},
            {"gasUsed", to_hex_quantity(receipt.gas_used)},
            {"fee", to_hex_quantity(receipt.fee)},
            {"blockHeight", to_hex_quantity(receipt.block_height)}};
    return j.dump();
  }
};

inline std::string render_error(Errc code, const std::string& message) {
  return ojson{{"error", ojson{{"code", errc_name(code)}, {"message", message}}}}.dump();
}

namespace detail {

inline ojson parse_json(const std::string& body) {
  try {
    return ojson::parse(body);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::MalformedRequest, std::string("invalid json: ") + e.what());
  }
}

inline std::string string_field(const ojson& j, const char* name) {
  if (!j.contains(name) || !j.at(name).is_string())
    fail(Errc::MalformedRequest, std::string("missing string field '") + name + "'");
  return j.at(name).get<std::string>();
}

// canonical lowercase 0x-hex form of a possibly mixed-case hex string
inline std::string canonical_hex(const std::string& s, Errc on_error) {
  if (s.size() < 2 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X'))
    fail(on_error, "expected 0x-prefixed hex, got '" + s + "'");
  std::string out = "0x";
  for (std::size_t i = 2; i < s.size(); ++i) {
    int v = hex_value(s[i]);
    if (v < 0) fail(on_error, "bad hex digit in '" + s + "'");
    out.push_back(hex_digit(static_cast<unsigned>(v)));
  }
  return out;
}

inline Amount parse_decimal_amount(const std::string& s) {
  if (s.empty()) fail(Errc::MalformedAmount, "amount is empty");
  Amount v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') fail(Errc::MalformedAmount, "amount '" + s + "' is not a nonnegative integer");
    Amount next = v * 10 + static_cast<Amount>(c - '0');
    if (next / 10 != v) fail(Errc::MalformedAmount, "amount '" + s + "' out of range");
    v = next;
  }
  return v;
}

inline std::string u128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  char buf[40];
  int i = 39;
  buf[i] = '\0';
  while (v != 0) {
    buf[--i] = static_cast<char>('0' + static_cast<int>(v % 10));
    v /= 10;
  }
  return std::string(&buf[i]);
}

}  // namespace detail

inline PriceRequest parse_price_request(const std::string& body) {
  ojson j = detail::parse_json(body);
  PriceRequest r;
  r.main_app_credit = detail::string_field(j, "MainAppCredit");
  r.from_app_credit_id = detail::string_field(j, "fromAppCreditId");
  r.to_app_credit_id = detail::string_field(j, "toAppCreditId");
  r.amount = detail::string_field(j, "amount");
  return r;
}

inline PriceResponse parse_price_response(const std::string& body) {
  ojson j = detail::parse_json(body);
  return PriceResponse{detail::string_field(j, "price")};
}

inline SwapRequest parse_swap_request(const std::string& body) {
  ojson j = detail::parse_json(body);
  SwapRequest r;
  r.blockchain_type = detail::string_field(j, "blockchainType");
  r.from_app_credit_id = detail::string_field(j, "fromAppCreditId");
  r.to_app_credit_id = detail::string_field(j, "toAppCreditId");
  r.amount = detail::string_field(j, "amount");
  r.owner_address = detail::string_field(j, "ownerAddress");
  return r;
}

inline TxEnvelope parse_envelope(const ojson& j) {
  TxEnvelope e;
  e.from = detail::canonical_hex(detail::string_field(j, "from"), Errc::BadEnvelope);
  e.to = detail::canonical_hex(detail::string_field(j, "to"), Errc::BadEnvelope);
  e.data = detail::canonical_hex(detail::string_field(j, "data"), Errc::BadEnvelope);
  e.value = to_hex_quantity(parse_hex_quantity(detail::string_field(j, "value")));
  e.gas_price = to_hex_quantity(parse_hex_quantity(detail::string_field(j, "gasPrice")));
  e.nonce = to_hex_quantity(parse_hex_quantity(detail::string_field(j, "nonce")));
  e.gas_limit = to_hex_quantity(parse_hex_quantity(detail::string_field(j, "gasLimit")));
  return e;
}

inline SwapResponse parse_swap_response(const std::string& body) {
  ojson j = detail::parse_json(body);
  if (!j.contains("data") || !j.at("data").is_array())
    fail(Errc::MalformedRequest, "missing 'data' array");
  SwapResponse r;
  for (const auto& item : j.at("data")) r.data.push_back(parse_envelope(item));
  return r;
}

// --- handlers ----------------------------------------------------------------

// Units of the destination credit receivable per one whole unit of the source
// credit, floor-truncated, quoted against current adaptor snapshots. Never
// mutates state.
inline PriceResponse handle_price(const Node& node, const PriceRequest& req) {
  Amount amount = detail::parse_decimal_amount(req.amount);
  if (amount == 0) fail(Errc::MalformedAmount, "amount must be positive to quote a unit price");
  if (!node.ledger().has_credit(req.from_app_credit_id))
    fail(Errc::UnknownCredit, "fromAppCreditId '" + req.from_app_credit_id + "'");
  if (!node.ledger().has_credit(req.to_app_credit_id))
    fail(Errc::UnknownCredit, "toAppCreditId '" + req.to_app_credit_id + "'");
  if (req.from_app_credit_id == req.to_app_credit_id)
    return PriceResponse{std::to_string(kMicroPerCredit)};
  market::ConvertQuote q =
      node.market().quote_convert(req.from_app_credit_id, req.to_app_credit_id, amount);
  unsigned __int128 scaled = static_cast<unsigned __int128>(q.output) * kMicroPerCredit;
  return PriceResponse{detail::u128_to_string(scaled / amount)};
}

// Unsigned envelope for a market conversion; quoting only, no state change.
inline SwapResponse handle_swap(const Node& node, const SwapRequest& req) {
  Amount amount = detail::parse_decimal_amount(req.amount);
  if (!node.ledger().has_credit(req.from_app_credit_id))
    fail(Errc::UnknownCredit, "fromAppCreditId '" + req.from_app_credit_id + "'");
  if (!node.ledger().has_credit(req.to_app_credit_id))
    fail(Errc::UnknownCredit, "toAppCreditId '" + req.to_app_credit_id + "'");
  Address owner = Address::from_hex(req.owner_address);
  if (!node.ledger().known_address(owner))
    fail(Errc::UnknownOwner, "ownerAddress '" + req.owner_address + "' has no ledger history");

  auto body = payload::market_convert(req.from_app_credit_id, req.to_app_credit_id, amount);
  TxEnvelope e;
  e.from = owner.hex();
  e.to = node.market().entry(req.from_app_credit_id).account.hex();
  e.data = "0x" + to_hex(body.data(), body.size());
  e.value = to_hex_quantity(amount);
  e.gas_price = to_hex_quantity(node.gas_price());
  e.nonce = to_hex_quantity(node.ledger().next_nonce(owner));
  e.gas_limit = to_hex_quantity(node.gas_schedule().market_trade);
  return SwapResponse{{e}};
}

// Decodes an envelope back into a transaction and executes it.
inline Receipt submit(Node& node, const TxEnvelope& env) {
  Transaction tx;
  tx.from = Address::from_hex(env.from);
  tx.to = Address::from_hex(env.to);
  tx.value = parse_hex_quantity(env.value);
  tx.nonce = parse_hex_quantity(env.nonce);
  tx.gas_price = parse_hex_quantity(env.gas_price);
  tx.gas_limit = parse_hex_quantity(env.gas_limit);
  if (env.data.size() < 2 || env.data.size() % 2 != 0) fail(Errc::BadEnvelope, "bad data hex");
  tx.payload.resize(env.data.size() / 2 - 1);
  if (!parse_hex(std::string_view(env.data).substr(2), tx.payload.data(), tx.payload.size()))
    fail(Errc::BadEnvelope, "bad data hex");

  auto parts = payload::split(payload::to_string(tx.payload));
  const std::string& op = parts.empty() ? std::string() : parts[0];
  if (op == "buy" || op == "sell" || op == "convert") {
    tx.kind = TxKind::MarketTrade;
    if (parts.size() < 2) fail(Errc::BadEnvelope, "market payload missing credit id");
    tx.credit = parts[1];
  } else if (op == "swap-init" || op == "swap-part") {
    tx.kind = TxKind::SwapStep;
    if (parts.size() < 3) fail(Errc::BadEnvelope, "swap payload missing credit id");
    tx.credit = parts[2];
  } else if (op == "swap-redeem" || op == "swap-refund") {
    tx.kind = TxKind::SwapStep;
    tx.credit = kMainCreditId;
  } else {
    fail(Errc::BadEnvelope, "unrecognized payload op '" + op + "'");
  }
  return node.execute(tx);
}

// --- HTTP transport ----------------------------------------------------------
// POST /1.0/price, /1.0/swap (concurrent reads), POST /1.0/submit (serialized
// through the ledger writer).

template <typename HttpServer>
void install_routes(HttpServer& http, Node& node, std::shared_mutex& mutex) {
  auto respond_error = [](auto& res, const Error& e) {
    res.status = 400;
    res.set_content(render_error(e.code(), e.what()), "application/json");
  };
  http.Post("/1.0/price", [&node, &mutex, respond_error](const auto& req, auto& res) {
    try {
      std::shared_lock lock(mutex);
      PriceResponse out = handle_price(node, parse_price_request(req.body));
      res.set_content(out.render(), "application/json");
    } catch (const Error& e) {
      respond_error(res, e);
    }
  });
  http.Post("/1.0/swap", [&node, &mutex, respond_error](const auto& req, auto& res) {
    try {
      std::shared_lock lock(mutex);
      SwapResponse out = handle_swap(node, parse_swap_request(req.body));
      res.set_content(out.render(), "application/json");
    } catch (const Error& e) {
      respond_error(res, e);
    }
  });
  http.Post("/1.0/submit", [&node, &mutex, respond_error](const auto& req, auto& res) {
    try {
      std::unique_lock lock(mutex);
      ojson j = detail::parse_json(req.body);
      Receipt r = submit(node, parse_envelope(j));
      res.set_content(SubmitResponse{r}.render(), "application/json");
    } catch (const Error& e) {
      respond_error(res, e);
    }
  });
}

}  // namespace proofware::gateway
