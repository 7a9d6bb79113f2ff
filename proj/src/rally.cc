#include "rallyshap/rally.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rallyshap/error.h"

namespace rallyshap {

namespace {

constexpr std::array<std::string_view, kNumShotTypes> kShotNames = {
    "clear", "net_shot",       "smash",         "push_rush",   "drop",
    "drive", "lob",            "defensive_shot", "short_service",
    "long_service"};

}  // namespace

std::string_view ShotTypeName(ShotType shot) {
  return kShotNames.at(ShotCode(shot));
}

std::optional<ShotType> ParseShotType(std::string_view name) {
  for (int i = 0; i < kNumShotTypes; ++i) {
    if (kShotNames[i] == name) return static_cast<ShotType>(i);
  }
  return std::nullopt;
}

ShotType ShotFromCode(int code) {
  Require(code >= 0 && code < kNumShotTypes,
          fmt::format("shot code {} outside 0..9", code));
  return static_cast<ShotType>(code);
}

bool InCourt(const Coord& c) {
  return std::isfinite(c.x) && std::isfinite(c.y) && c.x >= kCourtMinX &&
         c.x <= kCourtMaxX && c.y >= kCourtMinY && c.y <= kCourtMaxY;
}

Coord ClampToCourt(const Coord& c) {
  return {std::clamp(c.x, kCourtMinX, kCourtMaxX),
          std::clamp(c.y, kCourtMinY, kCourtMaxY)};
}

std::string_view RoleName(PlayerRole role) {
  return role == PlayerRole::kA ? "A" : "B";
}

std::optional<PlayerRole> ParseRole(std::string_view name) {
  if (name == "A") return PlayerRole::kA;
  if (name == "B") return PlayerRole::kB;
  return std::nullopt;
}

Rally WithTau(Rally rally, int tau) {
  rally.tau = tau;
  return rally;
}

std::string_view ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kLength:
      return "length";
    case ViolationKind::kAlternation:
      return "alternation";
    case ViolationKind::kServeType:
      return "serve type";
    case ViolationKind::kCoordinate:
      return "coordinate";
    case ViolationKind::kTau:
      return "tau";
    case ViolationKind::kUnknownPlayer:
      return "unknown player";
  }
  return "unknown";
}

std::string ValidationReport::Summary() const {
  if (ok()) return "ok";
  std::string out;
  for (const Violation& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationReport ValidateRally(const Rally& rally) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, int index, std::string message) {
    report.violations.push_back({kind, index, std::move(message)});
  };

  const int n = rally.size();
  if (n < 2) add(ViolationKind::kLength, 0, fmt::format("length {} < 2", n));
  if (n > kMaxRallyLength) {
    add(ViolationKind::kLength, 0,
        fmt::format("length {} > {}", n, kMaxRallyLength));
  }
  for (int i = 1; i <= n; ++i) {
    const Stroke& s = rally.stroke(i);
    if (s.role != RoleAt(i)) {
      add(ViolationKind::kAlternation, i,
          fmt::format("alternation: stroke {} has role {}", i,
                      RoleName(s.role)));
    }
    if (!InCourt(s.area)) {
      add(ViolationKind::kCoordinate, i,
          fmt::format("coordinate: stroke {} lands at ({}, {})", i, s.area.x,
                      s.area.y));
    }
    if (s.player_id != rally.player_a && s.player_id != rally.player_b) {
      add(ViolationKind::kUnknownPlayer, i,
          fmt::format("unknown player: stroke {} by '{}'", i, s.player_id));
    }
  }
  if (n >= 1 && !IsService(rally.stroke(1).shot)) {
    add(ViolationKind::kServeType, 1,
        fmt::format("serve type: stroke 1 is {}",
                    ShotTypeName(rally.stroke(1).shot)));
  }
  if (rally.tau != 0 && (rally.tau < 2 || rally.tau > n - 1)) {
    add(ViolationKind::kTau, 0,
        fmt::format("tau {} outside [2, {}]", rally.tau, n - 1));
  }
  return report;
}

Stroke ReferenceStroke(PlayerRole role, std::string player_id) {
  return Stroke{role, std::move(player_id), kReferenceShot, kReferenceArea};
}

Rally ImputePast(const Rally& rally, std::span<const int> keep) {
  const int tau = rally.tau;
  Require(tau >= 2 && tau <= rally.size() - 1,
          fmt::format("ImputePast: tau {} invalid for rally '{}' of length {}",
                      tau, rally.id, rally.size()));
  std::vector<char> kept(tau + 1, 0);
  for (const int index : keep) {
    Require(index >= 2 && index <= tau,
            fmt::format("ImputePast: keep index {} outside 2..{}", index, tau));
    kept[index] = 1;
  }
  Rally out = rally;
  for (int i = 2; i <= tau; ++i) {
    if (kept[i]) continue;
    Stroke& s = out.stroke(i);
    s.shot = kReferenceShot;
    s.area = kReferenceArea;
  }
  return out;
}

Rally ImputePlayer(const Rally& rally, PlayerRole target, int horizon) {
  Require(horizon >= 0 && horizon <= rally.size(),
          fmt::format("ImputePlayer: horizon {} exceeds rally length {}",
                      horizon, rally.size()));
  const std::string& replacement = rally.PlayerId(Opponent(target));
  Rally out = rally;
  for (int i = target == PlayerRole::kA ? 3 : 2; i <= horizon; i += 2) {
    Stroke& s = out.stroke(i);
    s.player_id = replacement;
    if (i <= rally.tau) {
      s.shot = kReferenceShot;
      s.area = kReferenceArea;
    }
  }
  return out;
}

}  // namespace rallyshap
