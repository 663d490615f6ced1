#include "kbsc/fusion.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace kbsc {

std::string_view to_string(ControlDecision d) {
  switch (d) {
    case ControlDecision::on:
      return "on";
    case ControlDecision::off:
      return "off";
    case ControlDecision::won:
      return "won";
    case ControlDecision::woff:
      return "woff";
    case ControlDecision::abstain:
      return "abstain";
  }
  return "?";
}

std::string_view to_string(FusedDecision d) {
  return d == FusedDecision::enable ? "enable" : "disable";
}

std::optional<ControlDecision> parse_control_decision(std::string_view s) {
  for (auto d : {ControlDecision::on, ControlDecision::off, ControlDecision::won,
                 ControlDecision::woff, ControlDecision::abstain}) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

std::optional<FusedDecision> parse_fused_decision(std::string_view s) {
  if (s == "enable") return FusedDecision::enable;
  if (s == "disable") return FusedDecision::disable;
  return std::nullopt;
}

FusedDecision fuse(std::span<const ControlDecision> bag, FusedDecision dft) {
  auto has = [&](ControlDecision d) { return std::find(bag.begin(), bag.end(), d) != bag.end(); };
  const bool on = has(ControlDecision::on);
  const bool off = has(ControlDecision::off);
  if (on && off) throw ControlConflict();
  if (on) return FusedDecision::enable;
  if (off) return FusedDecision::disable;

  const bool won = has(ControlDecision::won);
  const bool woff = has(ControlDecision::woff);
  if (won && woff) throw UndefinedFusion("undefined fusion: won and woff issued without on or off");
  if (won) return FusedDecision::enable;
  if (woff) return FusedDecision::disable;
  return dft;
}

FusedDecision fuse_four_valued(ControlDecision a, ControlDecision b) {
  using CD = ControlDecision;
  constexpr auto E = FusedDecision::enable;
  constexpr auto D = FusedDecision::disable;
  struct Row {
    CD first, second;
    FusedDecision fused;
  };
  static constexpr std::array<Row, 10> table{{
      {CD::on, CD::on, E},
      {CD::on, CD::woff, E},
      {CD::on, CD::abstain, E},
      {CD::off, CD::off, D},
      {CD::off, CD::on, D},
      {CD::off, CD::abstain, D},
      {CD::woff, CD::off, D},
      {CD::woff, CD::woff, D},
      {CD::woff, CD::abstain, D},
      {CD::abstain, CD::abstain, E},
  }};
  for (const auto& row : table) {
    if ((row.first == a && row.second == b) || (row.first == b && row.second == a)) return row.fused;
  }
  throw UndefinedFusion("undefined fusion: no row for (" + std::string(to_string(a)) + ", " +
                        std::string(to_string(b)) + ")");
}

}  // namespace kbsc
