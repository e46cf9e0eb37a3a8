#include "schottky/moebius.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "schottky/error.hpp"

namespace schottky {

Complex SpherePoint::value() const {
  if (at_infinity_) throw InputError("value() of the point at infinity");
  return z_;
}

std::pair<Complex, Complex> SpherePoint::homogeneous() const {
  if (at_infinity_) return {1.0, 0.0};
  if (std::abs(z_) > 1.0) return {1.0, 1.0 / z_};
  return {z_, 1.0};
}

std::string SpherePoint::str() const {
  if (at_infinity_) return "inf";
  return fmt::format("{:.17g}{:+.17g}i", z_.real(), z_.imag());
}

double chordal_distance(const SpherePoint& p, const SpherePoint& q) {
  auto [z0, z1] = p.homogeneous();
  auto [w0, w1] = q.homogeneous();
  double np = std::norm(z0) + std::norm(z1);
  double nq = std::norm(w0) + std::norm(w1);
  return 2.0 * std::abs(z0 * w1 - z1 * w0) / std::sqrt(np * nq);
}

MoebiusMap::MoebiusMap(Complex a, Complex b, Complex c, Complex d) {
  Complex det = a * d - b * c;
  double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (!(scale > 0.0) || !std::isfinite(scale) || std::abs(det) <= 1e-14 * scale * scale) {
    throw InputError("Moebius matrix is not invertible");
  }
  // already unimodular up to rounding: keep the entries, so parsing the
  // canonical serialization is a fixed point
  const double slack = 16 * std::numeric_limits<double>::epsilon() * (std::abs(a * d) + std::abs(b * c));
  if (std::abs(det - 1.0) <= slack) {
    a_ = a;
    b_ = b;
    c_ = c;
    d_ = d;
    return;
  }
  Complex root = std::sqrt(det);
  a_ = a / root;
  b_ = b / root;
  c_ = c / root;
  d_ = d / root;
}

SpherePoint MoebiusMap::operator()(const SpherePoint& p) const {
  auto [z0, z1] = p.homogeneous();
  Complex w0 = a_ * z0 + b_ * z1;
  Complex w1 = c_ * z0 + d_ * z1;
  if (w1 == Complex{}) return SpherePoint::infinity();
  return SpherePoint(w0 / w1);
}

MoebiusMap operator*(const MoebiusMap& x, const MoebiusMap& y) {
  return MoebiusMap(MoebiusMap::Unchecked{}, x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_,
                    x.c_ * y.a_ + x.d_ * y.c_, x.c_ * y.b_ + x.d_ * y.d_);
}

SpherePoint apply(const MoebiusMap& m, const SpherePoint& p) { return m(p); }

double spherical_derivative(const MoebiusMap& m, const SpherePoint& p) {
  // With det = 1 and p = [z0 : z1]:
  //   ‖m'(p)‖ = (|z0|² + |z1|²) / (|a z0 + b z1|² + |c z0 + d z1|²)
  auto [z0, z1] = p.homogeneous();
  double num = std::norm(z0) + std::norm(z1);
  double den = std::norm(m.a() * z0 + m.b() * z1) + std::norm(m.c() * z0 + m.d() * z1);
  return num / den;
}

double loxodromy_margin(const MoebiusMap& m) {
  Complex t2 = m.trace() * m.trace();
  double x = std::clamp(t2.real(), 0.0, 4.0);
  return std::abs(t2 - Complex(x, 0.0));
}

bool is_loxodromic(const MoebiusMap& m) { return loxodromy_margin(m) > kLoxodromyTolerance; }

namespace {

bool is_identity(const MoebiusMap& m) {
  constexpr double tol = 1e-14;
  return std::abs(m.b()) <= tol && std::abs(m.c()) <= tol && std::abs(m.a() - m.d()) <= tol;
}

FixedPointKind classify(const MoebiusMap& m) {
  if (is_loxodromic(m)) return FixedPointKind::loxodromic;
  Complex t2 = m.trace() * m.trace();
  if (std::abs(t2 - 4.0) <= kLoxodromyTolerance) return FixedPointKind::parabolic;
  return FixedPointKind::elliptic;
}

// |multiplier| at a fixed point; < 1 means attracting.
double multiplier_modulus(const MoebiusMap& m, const SpherePoint& p) {
  if (p.is_infinity()) return std::abs(m.d() / m.a());
  return 1.0 / std::norm(m.c() * p.value() + m.d());
}

}  // namespace

FixedPoints fixed_points(const MoebiusMap& m) {
  if (is_identity(m)) throw InputError("the identity has no isolated fixed points");
  const FixedPointKind kind = classify(m);
  const double scale = std::max({std::abs(m.a()), std::abs(m.b()), std::abs(m.c()), std::abs(m.d())});

  SpherePoint p, q;
  if (std::abs(m.c()) <= 1e-15 * scale) {
    // upper triangular: ∞ is fixed, the other point is b/(d - a)
    p = SpherePoint::infinity();
    if (kind == FixedPointKind::parabolic) return {p, p, kind};
    q = SpherePoint(m.b() / (m.d() - m.a()));
  } else {
    // c z² + (d - a) z - b = 0, discriminant tr² - 4
    Complex disc = std::sqrt(m.trace() * m.trace() - 4.0);
    Complex amd = m.a() - m.d();
    if (kind == FixedPointKind::parabolic) {
      SpherePoint z(amd / (2.0 * m.c()));
      return {z, z, kind};
    }
    // stable root pairing: the larger-magnitude numerator first
    Complex s = (std::abs(amd + disc) >= std::abs(amd - disc)) ? amd + disc : amd - disc;
    Complex z1 = s / (2.0 * m.c());
    Complex z2 = (s == Complex{}) ? z1 : -2.0 * m.b() / s;
    p = SpherePoint(z1);
    q = SpherePoint(z2);
  }
  if (multiplier_modulus(m, q) < multiplier_modulus(m, p)) std::swap(p, q);
  return {p, q, kind};
}

bool contains(const Circle& disk, const SpherePoint& p, double slack) {
  if (p.is_infinity()) return false;
  return std::abs(p.value() - disk.center) <= disk.radius + slack;
}

std::optional<Circle> image_circle(const MoebiusMap& m, const Circle& circle) {
  std::array<Complex, 3> pts;
  const std::array<Complex, 3> dirs{Complex(1, 0), Complex(0, 1), Complex(-1, 0)};
  for (std::size_t i = 0; i < 3; ++i) {
    SpherePoint w = m(SpherePoint(circle.center + circle.radius * dirs[i]));
    if (w.is_infinity()) return std::nullopt;
    pts[i] = w.value();
  }
  // circumcircle of three points
  Complex z1 = pts[0], z2 = pts[1], z3 = pts[2];
  Complex w = (z3 - z1) / (z2 - z1);
  if (std::abs(w.imag()) <= 1e-14 * std::abs(w)) return std::nullopt;
  Complex center = (z2 - z1) * (w - std::norm(w)) / (2.0 * Complex(0, 1) * w.imag()) + z1;
  return Circle{center, std::abs(z1 - center)};
}

MoebiusMap circle_pairing(const Circle& from, const Circle& to) {
  // w = c₂ - r₁r₂ / (z - c₁)
  const double rr = from.radius * to.radius;
  return {to.center, -rr - to.center * from.center, 1.0, -from.center};
}

MoebiusMap sphere_rotation(Complex alpha, Complex beta) {
  double n = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (!(n > 0.0)) throw InputError("rotation parameters must not both vanish");
  alpha /= n;
  beta /= n;
  return {alpha, beta, -std::conj(beta), std::conj(alpha)};
}

SchottkyGroupSpec::SchottkyGroupSpec(std::vector<MoebiusMap> generators, SpherePoint basepoint,
                                     std::optional<std::vector<Circle>> disks)
    : generators_(std::move(generators)), basepoint_(basepoint), disks_(std::move(disks)) {
  if (generators_.size() < 2) throw InputError("a Schottky group needs rank >= 2");
  if (disks_) {
    if (disks_->size() != 2 * generators_.size()) {
      throw InputError(fmt::format("expected {} disks for rank {}, got {}",
                                   2 * generators_.size(), generators_.size(), disks_->size()));
    }
    for (const auto& d : *disks_) {
      if (!(d.radius > 0.0) || !std::isfinite(d.radius)) throw InputError("disk radius must be positive");
    }
  }
  inverses_.reserve(generators_.size());
  for (const auto& g : generators_) inverses_.push_back(g.inverse());
}

const MoebiusMap& SchottkyGroupSpec::letter_map(Letter l) const {
  if (l.generator() < 1 || l.generator() > rank()) {
    throw InputError(fmt::format("letter {} outside rank {}", l.str(), rank()));
  }
  auto i = static_cast<std::size_t>(l.generator() - 1);
  return l.inverted() ? inverses_[i] : generators_[i];
}

const Circle& SchottkyGroupSpec::target_disk(Letter l) const {
  if (!disks_) throw InputError("group spec has no disks");
  auto i = static_cast<std::size_t>(l.generator() - 1);
  return (*disks_)[l.inverted() ? 2 * i : 2 * i + 1];
}

MoebiusMap evaluate_word(const SchottkyGroupSpec& spec, const Word& w) {
  MoebiusMap m = MoebiusMap::identity();
  for (auto l : w.letters()) m = m * spec.letter_map(l);
  return m;
}

std::vector<MoebiusMap> word_maps(const SchottkyGroupSpec& spec, int length, const DepthLimits& limits) {
  const int g = spec.rank();
  check_depth(g, length, limits);
  std::vector<MoebiusMap> level{MoebiusMap::identity()};
  std::vector<int> last{-1};  // canonical code of the terminal letter
  const auto letters = alphabet(g);
  for (int n = 1; n <= length; ++n) {
    std::vector<MoebiusMap> next;
    std::vector<int> next_last;
    next.reserve(word_count(g, n));
    next_last.reserve(word_count(g, n));
    for (std::size_t r = 0; r < level.size(); ++r) {
      const int skipped = last[r] < 0 ? -1 : (last[r] + g) % (2 * g);
      for (int c = 0; c < 2 * g; ++c) {
        if (c == skipped) continue;
        next.push_back(level[r] * spec.letter_map(letters[static_cast<std::size_t>(c)]));
        next_last.push_back(c);
      }
    }
    level = std::move(next);
    last = std::move(next_last);
  }
  return level;
}

SpherePoint cylinder_center(const SchottkyGroupSpec& spec, const Word& w) {
  return evaluate_word(spec, w)(spec.basepoint());
}

SchottkyReport check_schottky(const SchottkyGroupSpec& spec) {
  if (!spec.disks()) throw InputError("check_schottky needs pairing disks");
  const auto& disks = *spec.disks();
  SchottkyReport report;
  report.disjointness_margin = std::numeric_limits<double>::infinity();
  report.containment_margin = std::numeric_limits<double>::infinity();
  report.loxodromy_margin = std::numeric_limits<double>::infinity();

  for (int i = 0; i < spec.rank(); ++i) {
    double lox = loxodromy_margin(spec.generators()[static_cast<std::size_t>(i)]);
    report.loxodromy_margin = std::min(report.loxodromy_margin, lox);
    if (lox <= kLoxodromyTolerance) {
      report.failures.push_back(fmt::format("generator {} is not loxodromic", i + 1));
    }
  }

  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      double gap = std::abs(disks[i].center - disks[j].center) - disks[i].radius - disks[j].radius;
      report.disjointness_margin = std::min(report.disjointness_margin, gap);
      if (gap <= 0.0) report.failures.push_back(fmt::format("disks {} and {} intersect", i, j));
    }
  }

  for (int i = 0; i < spec.rank(); ++i) {
    const auto& gen = spec.generators()[static_cast<std::size_t>(i)];
    const Circle& source = disks[2 * static_cast<std::size_t>(i)];
    const Circle& target = disks[2 * static_cast<std::size_t>(i) + 1];
    // the exterior of the source lands in a bounded disk only if the pole
    // ρ⁻¹(∞) lies inside the source disk
    SpherePoint pole = gen.inverse()(SpherePoint::infinity());
    auto image = image_circle(gen, source);
    if (!image || !contains(source, pole)) {
      report.containment_margin = -std::numeric_limits<double>::infinity();
      report.failures.push_back(
          fmt::format("generator {} does not map the exterior of disk {} into a disk", i + 1, 2 * i));
      continue;
    }
    double margin = target.radius - (std::abs(image->center - target.center) + image->radius);
    report.containment_margin = std::min(report.containment_margin, margin);
    if (margin < -1e-9 * std::max(1.0, target.radius)) {
      report.failures.push_back(
          fmt::format("image of disk {} under generator {} escapes disk {}", 2 * i, i + 1, 2 * i + 1));
    }
  }
  report.pass = report.failures.empty();
  return report;
}

SchottkyGroupSpec conjugate(const SchottkyGroupSpec& spec, const MoebiusMap& u) {
  const MoebiusMap ui = u.inverse();
  std::vector<MoebiusMap> gens;
  gens.reserve(spec.generators().size());
  for (const auto& g : spec.generators()) gens.push_back(u * g * ui);

  std::optional<std::vector<Circle>> disks;
  if (spec.disks()) {
    std::vector<Circle> moved;
    const SpherePoint pole = ui(SpherePoint::infinity());
    bool ok = true;
    for (const auto& d : *spec.disks()) {
      auto image = image_circle(u, d);
      if (!image || contains(d, pole)) {
        ok = false;
        break;
      }
      moved.push_back(*image);
    }
    if (ok) disks = std::move(moved);
  }
  return SchottkyGroupSpec(std::move(gens), u(spec.basepoint()), std::move(disks));
}

SchottkyGroupSpec complex_conjugate(const SchottkyGroupSpec& spec) {
  std::vector<MoebiusMap> gens;
  for (const auto& g : spec.generators()) {
    gens.emplace_back(std::conj(g.a()), std::conj(g.b()), std::conj(g.c()), std::conj(g.d()));
  }
  SpherePoint base = spec.basepoint().is_infinity() ? SpherePoint::infinity()
                                                    : SpherePoint(std::conj(spec.basepoint().value()));
  std::optional<std::vector<Circle>> disks;
  if (spec.disks()) {
    disks.emplace();
    for (const auto& d : *spec.disks()) disks->push_back({std::conj(d.center), d.radius});
  }
  return SchottkyGroupSpec(std::move(gens), base, std::move(disks));
}

}  // namespace schottky
