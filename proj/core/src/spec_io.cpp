#include "schottky/spec_io.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "schottky/error.hpp"

namespace schottky {

namespace {

using nlohmann::json;

Complex parse_complex(const json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError(fmt::format("{}: expected [re, im]", what));
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

SpherePoint parse_point(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return SpherePoint::infinity();
    throw InputError("basepoint: expected [re, im] or \"inf\"");
  }
  return SpherePoint(parse_complex(j, "basepoint"));
}

std::string number(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  return fmt::format("{:.17g}", x);
}

std::string complex_text(Complex z) { return fmt::format("[{}, {}]", number(z.real()), number(z.imag())); }

}  // namespace

SchottkyGroupSpec parse_group_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("group spec is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw InputError("group spec must be a JSON object");
  if (!doc.contains("rank") || !doc["rank"].is_number_integer()) {
    throw InputError("group spec: missing integer 'rank'");
  }
  if (!doc.contains("generators") || !doc["generators"].is_array()) {
    throw InputError("group spec: missing 'generators' array");
  }
  const auto rank = doc["rank"].get<long long>();
  const auto& gens_json = doc["generators"];
  if (rank < 2 || static_cast<std::size_t>(rank) != gens_json.size()) {
    throw InputError(fmt::format("group spec: rank {} does not match {} generators", rank, gens_json.size()));
  }
  std::vector<MoebiusMap> gens;
  for (std::size_t i = 0; i < gens_json.size(); ++i) {
    const auto& m = gens_json[i];
    if (!m.is_array() || m.size() != 4) {
      throw InputError(fmt::format("generator {}: expected four [re, im] entries a, b, c, d", i + 1));
    }
    const std::string what = fmt::format("generator {}", i + 1);
    gens.emplace_back(parse_complex(m[0], what), parse_complex(m[1], what), parse_complex(m[2], what),
                      parse_complex(m[3], what));
  }
  SpherePoint base(0.0);
  if (doc.contains("basepoint")) base = parse_point(doc["basepoint"]);

  std::optional<std::vector<Circle>> disks;
  if (doc.contains("disks") && !doc["disks"].is_null()) {
    const auto& dj = doc["disks"];
    if (!dj.is_array()) throw InputError("group spec: 'disks' must be an array");
    disks.emplace();
    for (const auto& d : dj) {
      if (!d.is_object() || !d.contains("center") || !d.contains("radius") || !d["radius"].is_number()) {
        throw InputError("disk: expected {\"center\": [re, im], \"radius\": r}");
      }
      disks->push_back({parse_complex(d["center"], "disk center"), d["radius"].get<double>()});
    }
  }
  return SchottkyGroupSpec(std::move(gens), base, std::move(disks));
}

SchottkyGroupSpec load_group_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open group spec '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_group_spec(buffer.str());
}

std::string group_spec_to_json(const SchottkyGroupSpec& spec) {
  std::string out = fmt::format("{{\n  \"rank\": {},\n  \"generators\": [\n", spec.rank());
  for (std::size_t i = 0; i < spec.generators().size(); ++i) {
    const auto& g = spec.generators()[i];
    out += fmt::format("    [{}, {}, {}, {}]{}\n", complex_text(g.a()), complex_text(g.b()),
                       complex_text(g.c()), complex_text(g.d()),
                       i + 1 < spec.generators().size() ? "," : "");
  }
  out += "  ],\n  \"basepoint\": ";
  out += spec.basepoint().is_infinity() ? std::string("\"inf\"") : complex_text(spec.basepoint().value());
  if (spec.disks()) {
    out += ",\n  \"disks\": [\n";
    const auto& disks = *spec.disks();
    for (std::size_t i = 0; i < disks.size(); ++i) {
      out += fmt::format("    {{\"center\": {}, \"radius\": {}}}{}\n", complex_text(disks[i].center),
                         number(disks[i].radius), i + 1 < disks.size() ? "," : "");
    }
    out += "  ]";
  }
  out += "\n}\n";
  return out;
}

std::string group_spec_hash(const SchottkyGroupSpec& spec) {
  const std::string text = group_spec_to_json(spec);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace schottky
