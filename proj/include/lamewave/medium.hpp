#pragma once

// Material constants, wave speeds, Mach numbers and the speed-regime switch.
//
// The library is unit-agnostic: every formula is homogeneous, so SI and
// nondimensional inputs both work as long as they are used consistently.

#include <array>
#include <cmath>
#include <string>

#include "lamewave/error.hpp"

namespace lamewave {

struct ElasticMedium {
  double lambda = 0.0;
  double mu = 0.0;
  double rho = 0.0;

  bool valid() const { return mu > 0.0 && lambda + 2.0 * mu > 0.0 && rho > 0.0; }

  void validate() const {
    if (!valid())
      throw Error(ErrorCode::InvalidMaterial,
                  "need mu > 0, lambda + 2 mu > 0, rho > 0");
  }
};

struct WaveSpeeds {
  double c1;  // dilatational
  double c2;  // shear
};

inline WaveSpeeds wave_speeds(const ElasticMedium& m) {
  m.validate();
  return {std::sqrt((m.lambda + 2.0 * m.mu) / m.rho), std::sqrt(m.mu / m.rho)};
}

enum class Regime { Subsonic, Sonic2, Transonic, Sonic1, Supersonic };
enum class BranchKind { Elliptic, Parabolic, Hyperbolic };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Subsonic: return "Subsonic";
    case Regime::Sonic2: return "Sonic2";
    case Regime::Transonic: return "Transonic";
    case Regime::Sonic1: return "Sonic1";
    case Regime::Supersonic: return "Supersonic";
  }
  return "?";
}

inline const char* to_string(BranchKind k) {
  switch (k) {
    case BranchKind::Elliptic: return "Elliptic";
    case BranchKind::Parabolic: return "Parabolic";
    case BranchKind::Hyperbolic: return "Hyperbolic";
  }
  return "?";
}

inline constexpr double kDefaultSonicTol = 1e-9;

/// m = sqrt(|1 - M^2|); undefined at the sonic point.
inline double m_parameter(double mach, double sonic_tol = kDefaultSonicTol) {
  if (!(mach >= 0.0)) throw Error(ErrorCode::InvalidArgument, "Mach number must be >= 0");
  if (std::abs(mach - 1.0) <= sonic_tol)
    throw Error(ErrorCode::SonicDegenerate, "m parameter undefined at M = 1");
  return mach < 1.0 ? std::sqrt((1.0 - mach) * (1.0 + mach))
                    : std::sqrt((mach - 1.0) * (mach + 1.0));
}

/// Load speed together with everything derived from it. Branch index 0 is
/// the dilatational branch (c1), index 1 the shear branch (c2).
struct RegimeContext {
  double c = 0.0;
  std::array<double, 2> mach{};
  std::array<double, 2> m{};  // NaN on a sonic branch
  Regime regime = Regime::Subsonic;
  std::array<BranchKind, 2> kind{};
  WaveSpeeds speeds{};

  bool sonic() const { return regime == Regime::Sonic1 || regime == Regime::Sonic2; }

  void require_non_sonic() const {
    if (sonic())
      throw Error(ErrorCode::SonicRegime,
                  std::string("no steady field at sonic speed (") + to_string(regime) + ")");
  }
};

inline RegimeContext classify_regime(const WaveSpeeds& s, double c,
                                     double sonic_tol = kDefaultSonicTol) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw Error(ErrorCode::InvalidArgument, "load speed must be finite and >= 0");
  RegimeContext ctx;
  ctx.c = c;
  ctx.speeds = s;
  const std::array<double, 2> cj{s.c1, s.c2};
  for (int j = 0; j < 2; ++j) {
    const double M = c / cj[j];
    ctx.mach[j] = M;
    if (std::abs(M - 1.0) <= sonic_tol) {
      ctx.kind[j] = BranchKind::Parabolic;
      ctx.m[j] = std::nan("");
    } else {
      ctx.kind[j] = M < 1.0 ? BranchKind::Elliptic : BranchKind::Hyperbolic;
      ctx.m[j] = m_parameter(M, sonic_tol);
    }
  }
  if (ctx.kind[1] == BranchKind::Parabolic)
    ctx.regime = Regime::Sonic2;
  else if (ctx.kind[0] == BranchKind::Parabolic)
    ctx.regime = Regime::Sonic1;
  else if (ctx.kind[1] == BranchKind::Elliptic)
    ctx.regime = Regime::Subsonic;
  else if (ctx.kind[0] == BranchKind::Elliptic)
    ctx.regime = Regime::Transonic;
  else
    ctx.regime = Regime::Supersonic;
  return ctx;
}

inline RegimeContext classify_regime(const ElasticMedium& medium, double c,
                                     double sonic_tol = kDefaultSonicTol) {
  return classify_regime(wave_speeds(medium), c, sonic_tol);
}

}  // namespace lamewave
