// Copyright 2026 The ladder360 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ladder360/error.hpp"
#include "ladder360/omaf.hpp"
#include "ladder360/run_record.hpp"
#include "test_util.hpp"

using namespace ladder360;
namespace pt = boost::property_tree;

namespace {

std::map<size_t, EncodeResult> fake_results(const EncodePlan& plan) {
  std::map<size_t, EncodeResult> out;
  for (size_t i = 0; i < plan.nodes.size(); ++i) {
    EncodeResult r;
    r.bitrate_kbps = 100.0 + 10.0 * static_cast<double>(i) + 0.25;
    out[i] = r;
  }
  return out;
}

pt::ptree parse(const std::string& xml) {
  std::istringstream in(xml);
  pt::ptree tree;
  pt::read_xml(in, tree);
  return tree;
}

std::vector<const pt::ptree*> children(const pt::ptree& t, const std::string& name) {
  std::vector<const pt::ptree*> out;
  for (const auto& [k, v] : t) {
    if (k == name) out.push_back(&v);
  }
  return out;
}

const ManifestOptions kOpts{2.0, {30, 1}, "bitstreams/"};

}  // namespace

TEST_SUITE("omaf") {

TEST_CASE("face regions tile the 3x2 grid") {
  std::set<std::pair<int, int>> cells;
  for (FaceId f : kAllFaces) {
    const RegionDescriptor r = face_region(f);
    CHECK(r.total_width == 3);
    CHECK(r.total_height == 2);
    CHECK(r.object_width == 1);
    CHECK(r.object_height == 1);
    cells.insert({r.object_x, r.object_y});
  }
  CHECK(cells.size() == 6);
}

TEST_CASE("ERP manifest: one set, fifteen representations") {
  const EncodePlan plan = build_plan(Variant::kErpCrc, Ladder::reference_erp(), AnchorPolicy::kHq);
  const PresentationManifest m = build_manifest(fake_results(plan), plan, kOpts);
  REQUIRE(m.adaptation_sets.size() == 1);
  CHECK(m.adaptation_sets[0].representations.size() == 15);
  CHECK_FALSE(m.adaptation_sets[0].region);
  const std::string xml = serialize_mpd(m);
  CHECK(xml == serialize_mpd(m));

  const pt::ptree tree = parse(xml);
  const pt::ptree& period = tree.get_child("MPD.Period");
  const auto sets = children(period, "AdaptationSet");
  REQUIRE(sets.size() == 1);
  const auto pf = children(*sets[0], "EssentialProperty");
  REQUIRE(pf.size() == 1);
  CHECK(pf[0]->get<std::string>("<xmlattr>.schemeIdUri") == kOmafProjectionScheme);
  CHECK(pf[0]->get<std::string>("<xmlattr>.value") == "0");
  CHECK(children(*sets[0], "SupplementalProperty").empty());
  const auto reps = children(*sets[0], "Representation");
  REQUIRE(reps.size() == 15);
  // Tier then quality order.
  CHECK(reps.front()->get<std::string>("<xmlattr>.id") == "erp_2048x1024_22");
  CHECK(reps.back()->get<std::string>("<xmlattr>.id") == "erp_8192x4096_42");
  for (const pt::ptree* r : reps) {
    CHECK(r->get<int64_t>("<xmlattr>.bandwidth") > 0);
    CHECK(r->get<std::string>("<xmlattr>.codecs") == kDefaultCodecTag);
    CHECK(r->get<std::string>("BaseURL").rfind("bitstreams/", 0) == 0);
  }
  CHECK(tree.get<std::string>("MPD.<xmlattr>.mediaPresentationDuration") == "PT2.000S");
}

TEST_CASE("CMP manifest: six sets with region descriptors") {
  const EncodePlan plan =
      build_plan(Variant::kCmpPra, Ladder::reference_cmp(), AnchorPolicy::kMq);
  const std::string xml = serialize_mpd(build_manifest(fake_results(plan), plan, kOpts));
  const pt::ptree tree = parse(xml);
  const auto sets = children(tree.get_child("MPD.Period"), "AdaptationSet");
  REQUIRE(sets.size() == 6);
  std::set<std::string> srds;
  for (size_t k = 0; k < sets.size(); ++k) {
    CHECK(children(*sets[k], "Representation").size() == 15);
    const auto pf = children(*sets[k], "EssentialProperty");
    REQUIRE(pf.size() == 1);
    CHECK(pf[0]->get<std::string>("<xmlattr>.value") == "1");
    const auto srd = children(*sets[k], "SupplementalProperty");
    REQUIRE(srd.size() == 1);
    CHECK(srd[0]->get<std::string>("<xmlattr>.schemeIdUri") == kSrdScheme);
    const RegionDescriptor r = face_region(kAllFaces[k]);
    CHECK(srd[0]->get<std::string>("<xmlattr>.value") ==
          "0," + std::to_string(r.object_x) + "," + std::to_string(r.object_y) + ",1,1,3,2");
    srds.insert(srd[0]->get<std::string>("<xmlattr>.value"));
    const std::string first = children(*sets[k], "Representation")[0]->get<std::string>(
        "<xmlattr>.id");
    CHECK(first.rfind(face_name(kAllFaces[k]), 0) == 0);
  }
  CHECK(srds.size() == 6);
}

TEST_CASE("codec tags flow into the manifest") {
  const EncodePlan plan = build_plan(Variant::kErpDefault, Ladder::reference_erp(), AnchorPolicy::kHq);
  auto results = fake_results(plan);
  results[0].codec_tag = "hvc1.1.6.L120.90";
  const PresentationManifest m = build_manifest(results, plan, kOpts);
  CHECK(m.adaptation_sets[0].representations[0].codecs == "hvc1.1.6.L120.90");
  CHECK(m.adaptation_sets[0].representations[1].codecs == kDefaultCodecTag);
}

TEST_CASE("invalid manifests are rejected") {
  const EncodePlan plan = build_plan(Variant::kErpDefault, Ladder::reference_erp(), AnchorPolicy::kHq);
  CHECK_THROWS_AS(build_manifest({}, plan, kOpts), Error);
  auto partial = fake_results(plan);
  partial.erase(3);
  CHECK_THROWS_AS(build_manifest(partial, plan, kOpts), Error);
  auto zero = fake_results(plan);
  zero[2].bitrate_kbps = 0.0;
  CHECK_THROWS_AS(build_manifest(zero, plan, kOpts), Error);
  PresentationManifest m = build_manifest(fake_results(plan), plan, kOpts);
  m.adaptation_sets[0].representations[1].id = m.adaptation_sets[0].representations[0].id;
  CHECK_THROWS_AS(serialize_mpd(m), Error);
  m = build_manifest(fake_results(plan), plan, kOpts);
  m.adaptation_sets.push_back(m.adaptation_sets[0]);
  CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("golden two-representation manifest") {
  Ladder l;
  l.resolutions = {{64, 32, "T0"}};
  l.qualities = {22, 27};
  const EncodePlan plan = build_plan(Variant::kErpDefault, l, AnchorPolicy::kHq);
  std::map<size_t, EncodeResult> results;
  results[0].bitrate_kbps = 1234.5;
  results[1].bitrate_kbps = 789.125;
  results[1].codec_tag = "hvc1.1.6.L93.90";
  const std::string xml = serialize_mpd(build_manifest(results, plan, kOpts));
  const std::filesystem::path golden =
      std::filesystem::path(LADDER360_GOLDEN_DIR) / "erp_two_reps.mpd";
  if (std::getenv("LADDER360_UPDATE_GOLDEN")) std::ofstream(golden, std::ios::binary) << xml;
  REQUIRE(std::filesystem::exists(golden));
  CHECK(xml == ladder360::testing::slurp(golden));
}

}  // TEST_SUITE
