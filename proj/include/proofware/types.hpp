// proofware: desk-scale decentralised application-credit economy
// Copyright 2026 The proofware Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace proofware {

// Amounts are nonnegative integer counts of micro-units. 1 credit = 10^6 micro-units.
using Amount = std::uint64_t;
inline constexpr Amount kMicroPerCredit = 1'000'000;

inline constexpr Amount credits(std::uint64_t whole) { return whole * kMicroPerCredit; }

enum class Errc {
  // ledger
  DuplicateName,
  BadName,
  UnknownCredit,
  InsufficientBalance,
  BadNonce,
  CannotAffordGasCap,
  ClockRegression,
  AmountOverflow,
  PendingQueueNotEmpty,
  // market
  UninitializedAdaptor,
  ZeroDenominator,
  TokensExceedSupply,
  // swap
  TimelockInPast,
  TimelockOrderingViolated,
  WrongPreimage,
  Expired,
  WrongClaimant,
  AlreadySettled,
  NotYetExpired,
  UnknownContract,
  // simulator / graph
  EmptyInput,
  NoEdges,
  IoFailure,
  BadScenario,
  // gateway
  MalformedRequest,
  MalformedAmount,
  UnknownOwner,
  BadPayload,
  BadEnvelope,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DuplicateName: return "duplicate-name";
    case Errc::BadName: return "bad-name";
    case Errc::UnknownCredit: return "unknown-credit";
    case Errc::InsufficientBalance: return "insufficient-balance";
    case Errc::BadNonce: return "bad-nonce";
    case Errc::CannotAffordGasCap: return "cannot-afford-gas-cap";
    case Errc::ClockRegression: return "clock-regression";
    case Errc::AmountOverflow: return "amount-overflow";
    case Errc::PendingQueueNotEmpty: return "pending-queue-not-empty";
    case Errc::UninitializedAdaptor: return "uninitialized-adaptor";
    case Errc::ZeroDenominator: return "zero-denominator";
    case Errc::TokensExceedSupply: return "tokens-exceed-supply";
    case Errc::TimelockInPast: return "timelock-in-past";
    case Errc::TimelockOrderingViolated: return "timelock-ordering-violated";
    case Errc::WrongPreimage: return "wrong-preimage";
    case Errc::Expired: return "expired";
    case Errc::WrongClaimant: return "wrong-claimant";
    case Errc::AlreadySettled: return "already-settled";
    case Errc::NotYetExpired: return "not-yet-expired";
    case Errc::UnknownContract: return "unknown-contract";
    case Errc::EmptyInput: return "empty-input";
    case Errc::NoEdges: return "no-edges";
    case Errc::IoFailure: return "io-failure";
    case Errc::BadScenario: return "bad-scenario";
    case Errc::MalformedRequest: return "malformed-request";
    case Errc::MalformedAmount: return "malformed-amount";
    case Errc::UnknownOwner: return "unknown-owner";
    case Errc::BadPayload: return "bad-payload";
    case Errc::BadEnvelope: return "bad-envelope";
  }
  return "unknown-error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}
  Errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& detail) { throw Error(code, detail); }

inline Amount checked_add(Amount a, Amount b) {
  if (a > std::numeric_limits<Amount>::max() - b) fail(Errc::AmountOverflow, "amount addition overflows");
  return a + b;
}

inline Amount checked_sub(Amount a, Amount b) {
  if (b > a) fail(Errc::AmountOverflow, "amount subtraction underflows");
  return a - b;
}

// --- hex helpers -----------------------------------------------------------

inline char hex_digit(unsigned v) { return "0123456789abcdef"[v & 0xf]; }

inline int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline std::string to_hex(const std::uint8_t* data, std::size_t n) {
  std::string out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(hex_digit(data[i] >> 4));
    out.push_back(hex_digit(data[i]));
  }
  return out;
}

inline bool parse_hex(std::string_view hex, std::uint8_t* out, std::size_t n) {
  if (hex.size() != 2 * n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return false;
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return true;
}

// Ethereum-style quantity rendering: lowercase, no leading zeros, "0x0" for zero.
inline std::string to_hex_quantity(std::uint64_t v) {
  if (v == 0) return "0x0";
  char buf[17];
  int i = 16;
  buf[16] = '\0';
  while (v != 0) {
    buf[--i] = hex_digit(static_cast<unsigned>(v & 0xf));
    v >>= 4;
  }
  return "0x" + std::string(&buf[i]);
}

inline std::uint64_t parse_hex_quantity(std::string_view s) {
  if (s.size() < 3 || s.size() > 18 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X'))
    fail(Errc::BadEnvelope, "bad hex quantity '" + std::string(s) + "'");
  std::uint64_t v = 0;
  for (std::size_t i = 2; i < s.size(); ++i) {
    int d = hex_value(s[i]);
    if (d < 0) fail(Errc::BadEnvelope, "bad hex quantity '" + std::string(s) + "'");
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  return v;
}

// --- domain identifiers ----------------------------------------------------

struct Hash32 {
  std::array<std::uint8_t, 32> bytes{};

  auto operator<=>(const Hash32&) const = default;

  std::string hex() const { return "0x" + to_hex(bytes.data(), bytes.size()); }

  static Hash32 from_hex(std::string_view s) {
    Hash32 h;
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
    if (!parse_hex(s, h.bytes.data(), h.bytes.size())) fail(Errc::BadEnvelope, "bad 32-byte hash hex");
    return h;
  }
};

// 20-byte account identifier, rendered 0x-prefixed lowercase (42 chars).
struct Address {
  std::array<std::uint8_t, 20> bytes{};

  auto operator<=>(const Address&) const = default;

  std::string hex() const { return "0x" + to_hex(bytes.data(), bytes.size()); }

  static Address from_hex(std::string_view s) {
    Address a;
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
    if (!parse_hex(s, a.bytes.data(), a.bytes.size()))
      fail(Errc::MalformedRequest, "bad address '" + std::string(s) + "'");
    return a;
  }

  bool is_zero() const {
    for (auto b : bytes)
      if (b != 0) return false;
    return true;
  }
};

// Application credits are keyed by UUID-shaped strings; the main credit uses
// the reserved symbolic id.
using CreditUnitId = std::string;
inline const CreditUnitId kMainCreditId = "proofware";

inline bool looks_like_uuid(std::string_view s) {
  static constexpr std::size_t dash_at[] = {8, 13, 18, 23};
  if (s.size() != 36) return false;
  std::size_t d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (d < 4 && i == dash_at[d]) {
      if (s[i] != '-') return false;
      ++d;
    } else if (!((s[i] >= '0' && s[i] <= '9') || (s[i] >= 'a' && s[i] <= 'f'))) {
      return false;
    }
  }
  return true;
}

}  // namespace proofware
