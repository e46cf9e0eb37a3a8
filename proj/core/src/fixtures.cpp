#include "schottky/fixtures.hpp"

#include <array>
#include <vector>

#include "schottky/error.hpp"

namespace schottky {

SchottkyGroupSpec real_line_spec(std::span<const double> centers, std::span<const double> radii) {
  if (centers.size() != radii.size()) throw InputError("centers and radii differ in length");
  std::vector<MoebiusMap> gens;
  std::vector<Circle> disks;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    Circle from{-centers[i], radii[i]};
    Circle to{centers[i], radii[i]};
    gens.push_back(circle_pairing(from, to));
    disks.push_back(from);
    disks.push_back(to);
  }
  return SchottkyGroupSpec(std::move(gens), SpherePoint(0.0), std::move(disks));
}

SchottkyGroupSpec reference_spec() {
  constexpr std::array centers{2.0, 6.0};
  constexpr std::array radii{1.0, 1.0};
  return real_line_spec(centers, radii);
}

SchottkyGroupSpec widely_separated_spec() {
  constexpr std::array centers{2.0, 20.0};
  constexpr std::array radii{1.0, 1.0};
  return real_line_spec(centers, radii);
}

SchottkyGroupSpec perturbed_radius_spec() {
  constexpr std::array centers{2.0, 6.0};
  constexpr std::array radii{0.5, 1.0};
  return real_line_spec(centers, radii);
}

SchottkyGroupSpec evenly_spaced_spec(int rank) {
  if (rank < 2) throw InputError("rank must be >= 2");
  std::vector<double> centers, radii;
  for (int i = 0; i < rank; ++i) {
    centers.push_back(2.0 + 4.0 * i);
    radii.push_back(1.0);
  }
  return real_line_spec(centers, radii);
}

}  // namespace schottky
