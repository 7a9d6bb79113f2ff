#ifndef RALLYSHAP_RALLY_H_
#define RALLYSHAP_RALLY_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rallyshap {

inline constexpr int kNumShotTypes = 10;
inline constexpr int kMaxRallyLength = 35;

enum class ShotType : uint8_t {
  kClear = 0,
  kNetShot = 1,
  kSmash = 2,
  kPushRush = 3,
  kDrop = 4,
  kDrive = 5,
  kLob = 6,
  kDefensiveShot = 7,
  kShortService = 8,
  kLongService = 9,
};

std::string_view ShotTypeName(ShotType shot);
std::optional<ShotType> ParseShotType(std::string_view name);
inline constexpr int ShotCode(ShotType shot) { return static_cast<int>(shot); }
ShotType ShotFromCode(int code);
inline constexpr bool IsService(ShotType shot) {
  return shot == ShotType::kShortService || shot == ShotType::kLongService;
}

// Landing position in the receiving player's half-court. x runs across the
// court in half-widths [-0.5, 0.5]; y runs from the net (0) to the baseline
// (1).
struct Coord {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

inline constexpr double kCourtMinX = -0.5;
inline constexpr double kCourtMaxX = 0.5;
inline constexpr double kCourtMinY = 0.0;
inline constexpr double kCourtMaxY = 1.0;

bool InCourt(const Coord& c);
Coord ClampToCourt(const Coord& c);

// A is always the server.
enum class PlayerRole : uint8_t { kA = 0, kB = 1 };

std::string_view RoleName(PlayerRole role);
std::optional<PlayerRole> ParseRole(std::string_view name);
inline constexpr PlayerRole Opponent(PlayerRole role) {
  return role == PlayerRole::kA ? PlayerRole::kB : PlayerRole::kA;
}
// Role owning 1-based stroke index i.
inline constexpr PlayerRole RoleAt(int index) {
  return index % 2 == 1 ? PlayerRole::kA : PlayerRole::kB;
}

struct Stroke {
  PlayerRole role = PlayerRole::kA;
  std::string player_id;
  ShotType shot = ShotType::kDefensiveShot;
  Coord area;

  friend bool operator==(const Stroke&, const Stroke&) = default;
};

// Strokes are stored 0-based but every public index in this library is
// 1-based: stroke(i) is strokes[i - 1].
struct Rally {
  std::string id;
  std::string player_a;
  std::string player_b;
  std::vector<Stroke> strokes;
  // Number of given strokes. 0 means "not set" (a plain dataset rally); any
  // other value must lie in [2, size() - 1].
  int tau = 0;

  int size() const { return static_cast<int>(strokes.size()); }
  const Stroke& stroke(int index) const { return strokes.at(index - 1); }
  Stroke& stroke(int index) { return strokes.at(index - 1); }
  const std::string& PlayerId(PlayerRole role) const {
    return role == PlayerRole::kA ? player_a : player_b;
  }

  friend bool operator==(const Rally&, const Rally&) = default;
};

using Dataset = std::vector<Rally>;

// Copy of `rally` with the given-stroke count set.
Rally WithTau(Rally rally, int tau);

enum class ViolationKind {
  kLength,
  kAlternation,
  kServeType,
  kCoordinate,
  kTau,
  kUnknownPlayer,
};

std::string_view ViolationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int stroke_index = 0;  // 0 when not tied to a stroke.
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string Summary() const;
};

// Checks the structural rally invariants. Violations are returned as data.
ValidationReport ValidateRally(const Rally& rally);

// Defensive shot to the middle of the half-court.
inline constexpr ShotType kReferenceShot = ShotType::kDefensiveShot;
inline constexpr Coord kReferenceArea{0.0, 0.5};

Stroke ReferenceStroke(PlayerRole role, std::string player_id);

// Replaces the content of every given stroke 2..tau not listed in `keep`
// with the reference stroke. Identities, the serve and the future strokes
// are untouched. Throws ContractViolation for indices outside 2..tau.
Rally ImputePast(const Rally& rally, std::span<const int> keep);

// Removes `target` from the rally: every stroke of `target` with index
// 2 <= i <= horizon (the serve is never touched) is re-attributed to the
// opponent; strokes with i <= tau additionally get the reference content.
// Rally-level player ids are left as the original match-up.
Rally ImputePlayer(const Rally& rally, PlayerRole target, int horizon);

}  // namespace rallyshap

#endif  // RALLYSHAP_RALLY_H_
