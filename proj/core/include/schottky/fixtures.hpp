#pragma once

// Fuchsian Schottky groups with pairing disks centred on the real line.

#include <span>

#include "schottky/moebius.hpp"

namespace schottky {

/// Generator i pairs D(-centers[i], radii[i]) with D(centers[i], radii[i])
/// via circle_pairing; basepoint 0.
SchottkyGroupSpec real_line_spec(std::span<const double> centers, std::span<const double> radii);

/// Rank 2, disks centred at ±2 and ±6 with radius 1, x₀ = 0:
///   a1 = [[2, 3], [1, 2]],  a2 = [[6, 35], [1, 6]].
SchottkyGroupSpec reference_spec();

/// Reference spec with the second pair moved to ±20.
SchottkyGroupSpec widely_separated_spec();

/// Reference spec with the first pair of radii shrunk from 1 to 0.5.
SchottkyGroupSpec perturbed_radius_spec();

/// Rank g, disks centred at ±2, ±6, ±10, ... with radius 1.
SchottkyGroupSpec evenly_spaced_spec(int rank);

}  // namespace schottky
