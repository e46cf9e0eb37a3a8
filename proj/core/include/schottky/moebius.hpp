#pragma once

// PGL(2,C) acting on the Riemann sphere.
//
// Derivatives are measured in the spherical metric, so the point at infinity
// is regular and PSU(2) acts by isometries:
//   ‖m'(z)‖ = |m'(z)| (1 + |z|²) / (1 + |m(z)|²).

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schottky/freegroup.hpp"

namespace schottky {

using Complex = std::complex<double>;

/// A point of P¹(C): a complex number or ∞. Points with |z| > 1 are handled
/// through the chart at ∞ (homogeneous coordinates [1 : 1/z]) so very large
/// moduli never overflow.
class SpherePoint {
 public:
  SpherePoint(Complex z = {}) : z_(z) {}  // NOLINT: implicit from a complex value
  static SpherePoint infinity() {
    SpherePoint p;
    p.at_infinity_ = true;
    return p;
  }

  bool is_infinity() const noexcept { return at_infinity_; }
  /// Throws InputError at ∞.
  Complex value() const;
  /// Homogeneous coordinates with max(|z0|, |z1|) = 1.
  std::pair<Complex, Complex> homogeneous() const;

  std::string str() const;

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  Complex z_;
  bool at_infinity_ = false;
};

/// Chordal distance, 2|z - w| / sqrt((1 + |z|²)(1 + |w|²)); at most 2.
double chordal_distance(const SpherePoint& p, const SpherePoint& q);

/// z ↦ (az + b)/(cz + d), stored with determinant 1 (the sign ambiguity of
/// PSL(2,C) is irrelevant to everything computed here).
class MoebiusMap {
 public:
  /// Throws InputError if the matrix is singular relative to its entries.
  MoebiusMap(Complex a, Complex b, Complex c, Complex d);
  static MoebiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Complex a() const noexcept { return a_; }
  Complex b() const noexcept { return b_; }
  Complex c() const noexcept { return c_; }
  Complex d() const noexcept { return d_; }
  Complex trace() const noexcept { return a_ + d_; }

  MoebiusMap inverse() const { return {Unchecked{}, d_, -b_, -c_, a_}; }
  SpherePoint operator()(const SpherePoint& p) const;

  /// Products are not renormalized: their determinant is 1 by
  /// construction, while ad - bc recomputed from large entries is not.
  friend MoebiusMap operator*(const MoebiusMap& x, const MoebiusMap& y);

 private:
  struct Unchecked {};
  MoebiusMap(Unchecked, Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {}

  Complex a_, b_, c_, d_;
};

SpherePoint apply(const MoebiusMap& m, const SpherePoint& p);

/// Spherical derivative norm, strictly positive; regular at ∞.
double spherical_derivative(const MoebiusMap& m, const SpherePoint& p);

/// Distance of trace² from the segment [0, 4]; the map is loxodromic when
/// this exceeds `kLoxodromyTolerance`.
double loxodromy_margin(const MoebiusMap& m);
inline constexpr double kLoxodromyTolerance = 1e-9;
bool is_loxodromic(const MoebiusMap& m);

enum class FixedPointKind { loxodromic, elliptic, parabolic };

/// For loxodromic maps `first` is the attracting point. Parabolic maps have
/// first == second.
struct FixedPoints {
  SpherePoint first;
  SpherePoint second;
  FixedPointKind kind;
};

/// Throws InputError for the identity.
FixedPoints fixed_points(const MoebiusMap& m);

struct Circle {
  Complex center;
  double radius;
};

bool contains(const Circle& disk, const SpherePoint& p, double slack = 0.0);

/// Image of a circle, or nullopt when it maps to a line. The image of the
/// enclosed disk is the enclosed disk of the result exactly when the pole
/// m⁻¹(∞) lies outside \p circle.
std::optional<Circle> image_circle(const MoebiusMap& m, const Circle& circle);

/// The standard pairing z ↦ c₂ - r₁r₂/(z - c₁): it maps the exterior of
/// \p from onto the interior of \p to and preserves the upper half-plane
/// when both centers are real.
MoebiusMap circle_pairing(const Circle& from, const Circle& to);

/// A PSU(2) element [[α, β], [-conj β, conj α]] (normalized internally).
MoebiusMap sphere_rotation(Complex alpha, Complex beta);

/// A marked Schottky group ρ : F_g → PGL(2,C) with a basepoint x₀ and
/// optionally its 2g pairing disks. Generator i (0-based) maps the exterior
/// of disks[2i] into the closed disk disks[2i+1].
class SchottkyGroupSpec {
 public:
  /// Throws InputError for rank < 2, wrong disk count or nonpositive radii.
  SchottkyGroupSpec(std::vector<MoebiusMap> generators, SpherePoint basepoint,
                    std::optional<std::vector<Circle>> disks = std::nullopt);

  int rank() const noexcept { return static_cast<int>(generators_.size()); }
  const std::vector<MoebiusMap>& generators() const noexcept { return generators_; }
  const SpherePoint& basepoint() const noexcept { return basepoint_; }
  const std::optional<std::vector<Circle>>& disks() const noexcept { return disks_; }

  /// ρ(l) for a single letter.
  const MoebiusMap& letter_map(Letter l) const;

  /// Disk that ρ(l) maps the exterior of its source disk into: disks[2i+1]
  /// for a_{i+1}, disks[2i] for its inverse. Requires disks.
  const Circle& target_disk(Letter l) const;

 private:
  std::vector<MoebiusMap> generators_;
  std::vector<MoebiusMap> inverses_;
  SpherePoint basepoint_;
  std::optional<std::vector<Circle>> disks_;
};

/// ρ(w) as the ordered product of generator matrices; ρ(e) = identity.
MoebiusMap evaluate_word(const SchottkyGroupSpec& spec, const Word& w);

/// ρ(w) for every word of length n, in canonical order, built incrementally.
std::vector<MoebiusMap> word_maps(const SchottkyGroupSpec& spec, int length,
                                  const DepthLimits& limits = {});

/// ρ(w)(x₀), the sample point of the cylinder →w.
SpherePoint cylinder_center(const SchottkyGroupSpec& spec, const Word& w);

struct SchottkyReport {
  bool pass = false;
  /// Smallest gap between two disks, |cᵢ - cⱼ| - rᵢ - rⱼ.
  double disjointness_margin = 0.0;
  /// Smallest r₊ - (|c' - c₊| + r'), where c', r' is the image of a source
  /// circle and c₊, r₊ its partner; 0 for an exact pairing.
  double containment_margin = 0.0;
  double loxodromy_margin = 0.0;
  std::vector<std::string> failures;
};

/// Classical Schottky certificate. Throws InputError if the spec has no disks.
SchottkyReport check_schottky(const SchottkyGroupSpec& spec);

/// Generators u g u⁻¹, basepoint u(x₀). Disks are transported when u maps
/// each of them to a proper disk; otherwise the result carries no disks.
SchottkyGroupSpec conjugate(const SchottkyGroupSpec& spec, const MoebiusMap& u);

/// Entrywise complex conjugation of generators, basepoint and disks.
SchottkyGroupSpec complex_conjugate(const SchottkyGroupSpec& spec);

}  // namespace schottky
