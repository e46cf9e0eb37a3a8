#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "schottky/error.hpp"
#include "schottky/fixtures.hpp"
#include "schottky/moebius.hpp"

using namespace schottky;

namespace {

Word w(std::string_view text) { return Word::parse(text); }

MoebiusMap random_map(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  auto z = [&] { return Complex(n(rng), n(rng)); };
  return MoebiusMap(z(), z(), z(), z());
}

Complex random_point(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.5);
  return {n(rng), n(rng)};
}

// |m'(z)| by a central difference, converted to the spherical metric
double finite_difference_derivative(const MoebiusMap& m, Complex z) {
  const double h = 1e-6;
  Complex f1 = m(SpherePoint(z + h)).value();
  Complex f0 = m(SpherePoint(z - h)).value();
  double d = std::abs((f1 - f0) / (2.0 * h));
  Complex mz = m(SpherePoint(z)).value();
  return d * (1.0 + std::norm(z)) / (1.0 + std::norm(mz));
}

void expect_point_near(const SpherePoint& p, const SpherePoint& q, double tol) {
  EXPECT_LE(chordal_distance(p, q), tol) << p.str() << " vs " << q.str();
}

bool maps_equal(const MoebiusMap& x, const MoebiusMap& y, double tol) {
  // equal in PSL(2,C): up to an overall sign
  auto diff = [&](double s) {
    return std::max({std::abs(x.a() - s * y.a()), std::abs(x.b() - s * y.b()), std::abs(x.c() - s * y.c()),
                     std::abs(x.d() - s * y.d())});
  };
  return std::min(diff(1.0), diff(-1.0)) <= tol;
}

}  // namespace

TEST(Apply, Examples) {
  EXPECT_EQ(schottky::apply(MoebiusMap::identity(), Complex(2, 1)).value(), Complex(2, 1));
  const MoebiusMap swap(0.0, 1.0, 1.0, 0.0);
  EXPECT_NEAR(std::abs(schottky::apply(swap, Complex(2.0)).value() - 0.5), 0.0, 1e-15);
  EXPECT_TRUE(schottky::apply(swap, Complex(0.0)).is_infinity());
  EXPECT_EQ(schottky::apply(swap, SpherePoint::infinity()), SpherePoint(Complex(0.0)));
  EXPECT_TRUE(schottky::apply(MoebiusMap(1.0, 1.0, 0.0, 1.0), SpherePoint::infinity()).is_infinity());
}

TEST(MoebiusMap, NormalizedAndRejectsSingular) {
  const MoebiusMap m(2.0, 6.0, 2.0, 4.0);
  EXPECT_NEAR(std::abs(m.a() * m.d() - m.b() * m.c() - 1.0), 0.0, 1e-14);
  EXPECT_THROW(MoebiusMap(1.0, 2.0, 2.0, 4.0), InputError);
  EXPECT_THROW(MoebiusMap(0.0, 0.0, 0.0, 0.0), InputError);
}

TEST(SphericalDerivative, Examples) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(spherical_derivative(MoebiusMap::identity(), random_point(rng)), 1.0, 1e-15);
  }
  EXPECT_NEAR(spherical_derivative(MoebiusMap(0.0, 1.0, 1.0, 0.0), Complex(1.0)), 1.0, 1e-15);
  // z -> 2z: 2 at 0, 1/2 at ∞
  const MoebiusMap dilate(2.0, 0.0, 0.0, 1.0);
  EXPECT_NEAR(spherical_derivative(dilate, Complex(0.0)), 2.0, 1e-14);
  EXPECT_NEAR(spherical_derivative(dilate, SpherePoint::infinity()), 0.5, 1e-14);
}

TEST(SphericalDerivative, MatchesFiniteDifference) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const MoebiusMap m = random_map(rng);
    const Complex z = random_point(rng);
    if (std::abs(m.c() * z + m.d()) < 0.1) continue;
    EXPECT_NEAR(spherical_derivative(m, z) / finite_difference_derivative(m, z), 1.0, 1e-6);
  }
}

TEST(SphericalDerivative, ChainRule) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const MoebiusMap m1 = random_map(rng);
    const MoebiusMap m2 = random_map(rng);
    const SpherePoint p = i % 50 == 0 ? SpherePoint::infinity() : SpherePoint(random_point(rng));
    const double lhs = spherical_derivative(m2 * m1, p);
    const double rhs = spherical_derivative(m2, m1(p)) * spherical_derivative(m1, p);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-10);
  }
}

TEST(SphericalDerivative, InverseIsReciprocal) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) {
    const MoebiusMap m = random_map(rng);
    const SpherePoint p(random_point(rng));
    EXPECT_NEAR(spherical_derivative(m.inverse(), m(p)) * spherical_derivative(m, p), 1.0, 1e-10);
  }
}

TEST(SphericalDerivative, RotationsAreIsometries) {
  std::mt19937_64 rng(5);
  for (int r = 0; r < 5; ++r) {
    const MoebiusMap u = sphere_rotation(random_point(rng), random_point(rng));
    for (int i = 0; i < 100; ++i) {
      const SpherePoint p = i == 0 ? SpherePoint::infinity() : SpherePoint(random_point(rng));
      EXPECT_NEAR(spherical_derivative(u, p), 1.0, 1e-12);
    }
  }
}

TEST(ChordalDistance, Basics) {
  EXPECT_NEAR(chordal_distance(Complex(0.0), SpherePoint::infinity()), 2.0, 1e-15);
  EXPECT_NEAR(chordal_distance(Complex(1.0), Complex(-1.0)), 2.0, 1e-15);
  EXPECT_EQ(chordal_distance(SpherePoint::infinity(), SpherePoint::infinity()), 0.0);
  // rotations preserve it
  const MoebiusMap u = sphere_rotation({0.3, 0.4}, {0.5, -0.1});
  const SpherePoint p(Complex(0.2, 3.0)), q(Complex(-4.0, 1.0));
  EXPECT_NEAR(chordal_distance(u(p), u(q)), chordal_distance(p, q), 1e-14);
}

TEST(FixedPoints, Examples) {
  const auto up = fixed_points(MoebiusMap(2.0, 0.0, 0.0, 1.0));
  EXPECT_EQ(up.kind, FixedPointKind::loxodromic);
  EXPECT_TRUE(up.first.is_infinity());
  expect_point_near(up.second, Complex(0.0), 1e-15);

  const auto down = fixed_points(MoebiusMap(1.0, 0.0, 0.0, 2.0));
  expect_point_near(down.first, Complex(0.0), 1e-15);
  EXPECT_TRUE(down.second.is_infinity());

  const auto shift = fixed_points(MoebiusMap(1.0, 1.0, 0.0, 1.0));
  EXPECT_EQ(shift.kind, FixedPointKind::parabolic);
  EXPECT_TRUE(shift.first.is_infinity());
  EXPECT_EQ(shift.first, shift.second);

  EXPECT_THROW(fixed_points(MoebiusMap::identity()), InputError);
  EXPECT_EQ(fixed_points(sphere_rotation({0.6, 0.0}, {0.8, 0.0})).kind, FixedPointKind::elliptic);
}

TEST(FixedPoints, AreFixedAndOrdered) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const MoebiusMap m = random_map(rng);
    if (!is_loxodromic(m)) continue;
    const auto fp = fixed_points(m);
    expect_point_near(m(fp.first), fp.first, 1e-9);
    expect_point_near(m(fp.second), fp.second, 1e-9);
    EXPECT_LT(spherical_derivative(m, fp.first), 1.0);
    EXPECT_GT(spherical_derivative(m, fp.second), 1.0);
  }
}

TEST(ReferenceSpec, Generators) {
  const auto spec = reference_spec();
  ASSERT_EQ(spec.rank(), 2);
  const auto& g1 = spec.generators()[0];
  const auto& g2 = spec.generators()[1];
  EXPECT_TRUE(maps_equal(g1, MoebiusMap(2.0, 3.0, 1.0, 2.0), 1e-15));
  EXPECT_TRUE(maps_equal(g2, MoebiusMap(6.0, 35.0, 1.0, 6.0), 1e-14));
  EXPECT_EQ(spec.basepoint(), SpherePoint(Complex(0.0)));
}

TEST(CheckSchottky, ReferencePasses) {
  const auto report = check_schottky(reference_spec());
  EXPECT_TRUE(report.pass);
  EXPECT_TRUE(report.failures.empty());
  EXPECT_NEAR(report.disjointness_margin, 2.0, 1e-15);
  EXPECT_GT(report.loxodromy_margin, 1.0);
  // exact pairing: the image circle is the partner circle
  EXPECT_NEAR(report.containment_margin, 0.0, 1e-12);
}

TEST(CheckSchottky, BoundaryImagesLandOnPartner) {
  // independent of image_circle: push boundary samples through the map
  const auto spec = reference_spec();
  const auto& disks = *spec.disks();
  for (int i = 0; i < spec.rank(); ++i) {
    const auto& gen = spec.generators()[static_cast<std::size_t>(i)];
    const Circle& from = disks[2 * static_cast<std::size_t>(i)];
    const Circle& to = disks[2 * static_cast<std::size_t>(i) + 1];
    for (int k = 0; k < 64; ++k) {
      const double t = 2 * std::numbers::pi * k / 64.0;
      const Complex z = from.center + from.radius * std::polar(1.0, t);
      const Complex img = gen(SpherePoint(z)).value();
      EXPECT_NEAR(std::abs(img - to.center), to.radius, 1e-12);
      // points just outside the source land inside the partner
      const Complex out = from.center + 1.5 * from.radius * std::polar(1.0, t);
      EXPECT_LT(std::abs(gen(SpherePoint(out)).value() - to.center), to.radius);
    }
  }
}

TEST(CheckSchottky, Failures) {
  const double c1[] = {2.0, 2.5};
  const double r1[] = {1.0, 1.0};
  const auto overlap = check_schottky(real_line_spec(c1, r1));
  EXPECT_FALSE(overlap.pass);
  ASSERT_FALSE(overlap.failures.empty());
  EXPECT_NE(overlap.failures.front().find("intersect"), std::string::npos);

  const auto& ref = reference_spec();
  SchottkyGroupSpec with_identity({ref.generators()[0], MoebiusMap::identity()}, ref.basepoint(), ref.disks());
  const auto report = check_schottky(with_identity);
  EXPECT_FALSE(report.pass);
  bool flagged = false;
  for (const auto& f : report.failures) flagged |= f.find("not loxodromic") != std::string::npos;
  EXPECT_TRUE(flagged);

  EXPECT_THROW(check_schottky(SchottkyGroupSpec(ref.generators(), ref.basepoint())), InputError);
}

TEST(EvaluateWord, Homomorphism) {
  const auto spec = reference_spec();
  EXPECT_TRUE(maps_equal(evaluate_word(spec, Word()), MoebiusMap::identity(), 0.0));
  EXPECT_TRUE(maps_equal(evaluate_word(spec, w("a1.a2")), spec.generators()[0] * spec.generators()[1], 1e-12));
  EXPECT_TRUE(maps_equal(evaluate_word(spec, w("a1'")), spec.generators()[0].inverse(), 0.0));
  const Letter a{1};
  EXPECT_TRUE(maps_equal(evaluate_word(spec, reduce(std::vector{a, a.inverse()})), MoebiusMap::identity(), 0.0));

  const auto words = enumerate_words(2, 3);
  for (const auto& x : words) {
    for (const auto& y : enumerate_words(2, 2)) {
      if (x.letters().back() == y.initial().inverse()) continue;
      std::vector<Letter> joined(x.letters().begin(), x.letters().end());
      joined.insert(joined.end(), y.letters().begin(), y.letters().end());
      const MoebiusMap lhs = evaluate_word(spec, Word::from_letters(joined));
      const MoebiusMap rhs = evaluate_word(spec, x) * evaluate_word(spec, y);
      const double scale = std::abs(lhs.a()) + std::abs(lhs.b()) + std::abs(lhs.c()) + std::abs(lhs.d());
      EXPECT_TRUE(maps_equal(lhs, rhs, 1e-12 * scale));
    }
  }
}

TEST(WordMaps, MatchEvaluateWord) {
  const auto spec = reference_spec();
  for (int n = 0; n <= 4; ++n) {
    const auto maps = word_maps(spec, n);
    const auto words = enumerate_words(2, n);
    ASSERT_EQ(maps.size(), words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      const MoebiusMap m = evaluate_word(spec, words[i]);
      const double scale = std::abs(m.a()) + std::abs(m.b()) + std::abs(m.c()) + std::abs(m.d());
      EXPECT_TRUE(maps_equal(maps[i], m, 1e-12 * scale));
    }
  }
}

TEST(CylinderCenter, LiesInDiskChain) {
  const auto spec = reference_spec();
  for (const auto& v : enumerate_words(2, 5)) {
    const SpherePoint c = cylinder_center(spec, v);
    for (std::size_t k = 1; k <= v.length(); ++k) {
      // D_u = ρ(u without its last letter)(target disk of the last letter)
      const Word u = v.prefix(k);
      const Word head = u.prefix(k - 1);
      const auto disk = image_circle(evaluate_word(spec, head), spec.target_disk(u.letters().back()));
      ASSERT_TRUE(disk.has_value());
      EXPECT_TRUE(contains(*disk, c, 1e-12)) << v.str() << " prefix " << u.str();
    }
  }
  EXPECT_EQ(cylinder_center(spec, w("a1")), spec.generators()[0](spec.basepoint()));
}

TEST(CylinderCenter, PowersConvergeToAttractingPoint) {
  const auto spec = reference_spec();
  for (int i = 1; i <= 2; ++i) {
    for (bool inv : {false, true}) {
      const Letter l{i, inv};
      const auto target = fixed_points(spec.letter_map(l)).first;
      double previous = 3.0;
      std::vector<Letter> letters;
      for (int n = 1; n <= 12; ++n) {
        letters.push_back(l);
        const double d = chordal_distance(cylinder_center(spec, Word::from_letters(letters)), target);
        EXPECT_LE(d, previous);
        previous = d;
      }
      EXPECT_LT(previous, 1e-10);
    }
  }
}

TEST(Conjugate, TransportsDisksAndKeepsCertificate) {
  const auto spec = reference_spec();
  const MoebiusMap u = sphere_rotation({std::cos(0.7), 0.2}, {std::sin(0.7) * 0.6, std::sin(0.7) * 0.8});
  const auto moved = conjugate(spec, u);
  ASSERT_TRUE(moved.disks().has_value());
  EXPECT_TRUE(check_schottky(moved).pass);
  expect_point_near(moved.basepoint(), u(spec.basepoint()), 1e-15);
  const auto mirrored = complex_conjugate(moved);
  EXPECT_TRUE(check_schottky(mirrored).pass);
}
