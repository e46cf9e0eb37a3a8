#include <gtest/gtest.h>

#include <filesystem>

#include "schottky/error.hpp"
#include "schottky/fixtures.hpp"
#include "schottky/spec_io.hpp"

using namespace schottky;

namespace {

const std::filesystem::path kData = SCHOTTKY_DATA_DIR;

}  // namespace

TEST(SpecIo, ReferenceFileMatchesFixture) {
  const auto loaded = load_group_spec(kData / "reference.json");
  EXPECT_EQ(group_spec_hash(loaded), group_spec_hash(reference_spec()));
  EXPECT_EQ(group_spec_to_json(loaded), group_spec_to_json(reference_spec()));
}

TEST(SpecIo, RoundTrip) {
  for (const char* name : {"reference.json", "reference_rotated.json", "reference_rotated_mirror.json",
                           "rank3.json", "perturbed_radius.json", "widely_separated.json"}) {
    const auto spec = load_group_spec(kData / name);
    const std::string text = group_spec_to_json(spec);
    const auto again = parse_group_spec(text);
    EXPECT_EQ(group_spec_to_json(again), text) << name;
    EXPECT_EQ(group_spec_hash(again), group_spec_hash(spec)) << name;
    ASSERT_EQ(again.generators().size(), spec.generators().size());
    for (std::size_t i = 0; i < spec.generators().size(); ++i) {
      EXPECT_EQ(again.generators()[i].a(), spec.generators()[i].a());
      EXPECT_EQ(again.generators()[i].d(), spec.generators()[i].d());
    }
  }
}

TEST(SpecIo, HashIgnoresFormattingAndScale) {
  const auto spaced = parse_group_spec(R"({"rank":2,"generators":[[[4,0],[6,0],[2,0],[4,0]],
      [[6,0],[35,0],[1,0],[6,0]]],"basepoint":[0,0],
      "disks":[{"center":[-2,0],"radius":1},{"center":[2,0],"radius":1},
               {"center":[-6,0],"radius":1},{"center":[6,0],"radius":1}]})");
  EXPECT_EQ(group_spec_hash(spaced), group_spec_hash(reference_spec()));
  EXPECT_EQ(group_spec_hash(reference_spec()).size(), 64u);
  EXPECT_NE(group_spec_hash(perturbed_radius_spec()), group_spec_hash(reference_spec()));
}

TEST(SpecIo, BasepointAtInfinityAndNoDisks) {
  const auto spec = parse_group_spec(
      R"({"rank":2,"generators":[[[2,0],[3,0],[1,0],[2,0]],[[6,0],[35,0],[1,0],[6,0]]],"basepoint":"inf"})");
  EXPECT_TRUE(spec.basepoint().is_infinity());
  EXPECT_FALSE(spec.disks().has_value());
  EXPECT_TRUE(parse_group_spec(group_spec_to_json(spec)).basepoint().is_infinity());
}

TEST(SpecIo, Rejects) {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"generators":[]})",
      R"({"rank":2,"generators":[[[2,0],[3,0],[1,0],[2,0]]],"basepoint":[0,0]})",
      R"({"rank":2,"generators":[[[1,0],[2,0],[2,0],[4,0]],[[6,0],[35,0],[1,0],[6,0]]],"basepoint":[0,0]})",
      R"({"rank":2,"generators":[[[2,0],[3,0],[1,0]],[[6,0],[35,0],[1,0],[6,0]]],"basepoint":[0,0]})",
      R"({"rank":2,"generators":[[[2,0],[3,0],[1,0],[2,0]],[[6,0],[35,0],[1,0],[6,0]]],"basepoint":"zero"})",
      R"({"rank":2,"generators":[[[2,0],[3,0],[1,0],[2,0]],[[6,0],[35,0],[1,0],[6,0]]],"basepoint":[0,0],
          "disks":[{"center":[-2,0],"radius":1}]})",
      R"({"rank":2,"generators":[[[2,0],[3,0],[1,0],[2,0]],[[6,0],[35,0],[1,0],[6,0]]],"basepoint":[0,0],
          "disks":[{"center":[-2,0],"radius":-1},{"center":[2,0],"radius":1},
                   {"center":[-6,0],"radius":1},{"center":[6,0],"radius":1}]})",
  };
  for (const char* text : bad) EXPECT_THROW(parse_group_spec(text), InputError) << text;
  EXPECT_THROW(load_group_spec(kData / "missing.json"), InputError);
}
