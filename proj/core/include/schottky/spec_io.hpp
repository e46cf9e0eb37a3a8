#pragma once

// Group-spec JSON:
//
//   {
//     "rank": 2,
//     "generators": [ [[a_re,a_im],[b_re,b_im],[c_re,c_im],[d_re,d_im]], ... ],
//     "basepoint": [re, im]            // or "inf"
//     "disks": [ {"center": [re, im], "radius": r}, ... ]   // optional, 2g entries
//   }
//
// Generator i maps the exterior of disks[2i] into disks[2i+1].

#include <filesystem>
#include <string>
#include <string_view>

#include "schottky/moebius.hpp"

namespace schottky {

/// Throws InputError on malformed JSON, schema violations or singular
/// matrices.
SchottkyGroupSpec parse_group_spec(std::string_view json_text);
SchottkyGroupSpec load_group_spec(const std::filesystem::path& path);

/// Canonical JSON (normalized matrices, 17 significant digits).
std::string group_spec_to_json(const SchottkyGroupSpec& spec);

/// Hex SHA-256 of the canonical JSON; keys the measure cache.
std::string group_spec_hash(const SchottkyGroupSpec& spec);

}  // namespace schottky
