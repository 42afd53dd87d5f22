// tests/test_dataio.cc

// Copyright 2026  The svb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <cstdlib>
#include <random>
#include <string>

#include "svb/dataio.h"
#include "svb/errors.h"
#include "svb/model_io.h"
#include "svb/normalizer.h"
#include "svb/plda.h"
#include "test_util.h"

using namespace svb;
namespace fs = std::filesystem;

namespace {

fs::path TempDir() {
  fs::path dir = fs::temp_directory_path() / "svb_test_dataio";
  fs::create_directories(dir);
  return dir;
}

EmbeddingSet RandomSet(std::size_t n, std::size_t dim, std::mt19937_64* rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  EmbeddingSet set;
  set.dim = dim;
  for (std::size_t i = 0; i < n; ++i)
    set.records.push_back({"utt" + std::to_string(i),
                           coin(*rng) ? "spk" + std::to_string(i % 7) : "",
                           testing::RandomVector(dim, rng, 1e3)});
  return set;
}

template <typename F>
std::string ErrorText(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

bool Contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("EVF1 layout") {
  EmbeddingSet set;
  set.dim = 2;
  set.records.push_back({"u1", "s1", {0.5, -1.25}});
  const std::string bytes = EncodeEvf(set);
  REQUIRE(bytes.size() == 4 + 4 + 8 + 2 + 2 + 2 + 2 + 16);
  CHECK(bytes.substr(0, 4) == "EVF1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 2);  // u32 dim, little-endian
  CHECK(static_cast<unsigned char>(bytes[8]) == 1);  // u64 count
  CHECK(bytes.substr(18, 2) == "u1");
  double v;
  std::memcpy(&v, bytes.data() + 24, 8);
  CHECK(v == 0.5);
  CHECK(DecodeEvf(bytes) == set);

  EmbeddingSet empty;
  empty.dim = 3;
  const std::string e = EncodeEvf(empty);
  CHECK(e.size() == 16);
  CHECK(DecodeEvf(e) == empty);
}

TEST_CASE("EVF1 errors carry byte offsets") {
  EmbeddingSet set;
  set.dim = 2;
  set.records.push_back({"u1", "s1", {0.5, -1.25}});
  std::string bytes = EncodeEvf(set);
  CHECK_THROWS_AS(DecodeEvf("EVF2" + bytes.substr(4)), ParseError);
  const std::string truncated = ErrorText([&] { DecodeEvf(bytes.substr(0, bytes.size() - 3)); });
  CHECK(Contains(truncated, "offset"));
  CHECK_THROWS_AS(DecodeEvf(bytes + "x"), ParseError);
  EmbeddingSet dup = set;
  dup.records.push_back(dup.records[0]);
  std::string dup_bytes;
  {
    // Duplicate-id file built by hand.
    ByteWriter w;
    w.Bytes("EVF1");
    w.U32(2);
    w.U64(2);
    for (int i = 0; i < 2; ++i) {
      w.ShortString("u1");
      w.ShortString("s1");
      w.F64(0.5);
      w.F64(-1.25);
    }
    dup_bytes = w.Take();
  }
  CHECK(Contains(ErrorText([&] { DecodeEvf(dup_bytes); }), "duplicate"));
}

TEST_CASE("CSV format") {
  auto set = DecodeEmbeddingCsv("u1,s1,0.5,-1.25\n", 2);
  REQUIRE(set.size() == 1);
  CHECK(set.records[0] == EmbeddingRecord{"u1", "s1", {0.5, -1.25}});
  CHECK(DecodeEmbeddingCsv("utterance_id,speaker_id,v1,v2\nu1,s1,0.5,-1.25\n") == set);
  auto unlabeled = DecodeEmbeddingCsv("u1,,1,2\n");
  CHECK(unlabeled.records[0].speaker_id.empty());
  CHECK_FALSE(unlabeled.IsLabeled());
  const std::string err = ErrorText([] { DecodeEmbeddingCsv("u1,s1,1,2,3\n", 2); });
  CHECK(Contains(err, "line 1"));
  CHECK_THROWS_AS(DecodeEmbeddingCsv("u1,s1,1,2\nu2,s1,1,x\n"), ParseError);
  CHECK(Contains(ErrorText([] { DecodeEmbeddingCsv("u1,s1,1\nu1,s1,2\n"); }), "line 2"));
}

TEST_CASE("trial and score files") {
  auto trials = DecodeTrials("e1 t1 target\ne1 t2 nontarget\ne2 t3\n");
  REQUIRE(trials.size() == 3);
  CHECK(trials[0] == Trial{"e1", "t1", true});
  CHECK(trials[1] == Trial{"e1", "t2", false});
  CHECK_FALSE(trials[2].is_target.has_value());
  CHECK(DecodeTrials(EncodeTrials(trials)) == trials);
  CHECK(Contains(ErrorText([] { DecodeTrials("e1 t1 target\ne1 t1 maybe\n"); }), "line 2"));
  CHECK_THROWS_AS(DecodeTrials("e1 t1 maybe\n"), ParseError);

  std::vector<TrialScore> scores = {{"e1", "t1", 0.1, std::nullopt},
                                    {"e1", "t2", -1.0 / 3.0, false},
                                    {"e2", "t3", 1e300, true}};
  const std::string text = EncodeScores(scores);
  CHECK(text.substr(0, text.find('\n')) == "e1 t1 0.1");
  CHECK(text.find("e2 t3 1e+300 target") != std::string::npos);
  CHECK(DecodeScores(text) == scores);
  CHECK_THROWS_AS(DecodeScores("e1 t1\n"), ParseError);
}

TEST_CASE("files and formats round-trip") {
  std::mt19937_64 rng(9);
  const auto set = RandomSet(3, 5, &rng);
  const fs::path dir = TempDir();
  WriteEmbeddings(set, dir / "a.evf");
  WriteEmbeddings(set, dir / "a.csv");
  const auto bin = ReadEmbeddings(dir / "a.evf");
  CHECK(bin == set);
  WriteEmbeddings(bin, dir / "b.evf");
  CHECK(ReadFileBytes(dir / "a.evf") == ReadFileBytes(dir / "b.evf"));
  CHECK(ReadEmbeddings(dir / "a.csv") == set);
  CHECK(FormatFromPath("x.csv") == EmbeddingFormat::kCsv);
  CHECK(FormatFromPath("x.evf") == EmbeddingFormat::kBinary);
  CHECK_THROWS_AS(ReadEmbeddings(dir / "missing.evf"), IoError);
  CHECK(Contains(ErrorText([&] { ReadEmbeddings(dir / "missing.evf"); }), "missing.evf"));
}

TEST_CASE("random sets round-trip through both formats") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<std::size_t> size_dist(0, 1000), dim_dist(1, 512);
  std::vector<std::pair<std::size_t, std::size_t>> shapes = {{0, 1}, {1, 1}, {1000, 1}, {2, 512}};
  for (int i = 0; i < 12; ++i) shapes.emplace_back(size_dist(rng) / 4, dim_dist(rng));
  for (auto [n, dim] : shapes) {
    CAPTURE(n);
    CAPTURE(dim);
    const auto set = RandomSet(n, dim, &rng);
    const std::string bytes = EncodeEvf(set);
    const auto back = DecodeEvf(bytes);
    CHECK(back == set);
    CHECK(EncodeEvf(back) == bytes);
    if (n * dim <= 20000) CHECK(DecodeEmbeddingCsv(EncodeEmbeddingCsv(set), dim) == set);
  }
}

TEST_CASE("FormatDouble is exact") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = testing::RandomVector(1, &rng, 1e-3 + i)[0];
    CHECK(std::stod(FormatDouble(x)) == x);
  }
  CHECK(FormatDouble(0.6) == "0.6");
  CHECK(FormatDouble(0.1 + 0.2) == "0.30000000000000004");
  CHECK(FormatDouble(-2.0) == "-2");
  CHECK(std::strtod(FormatDouble(5e-324).c_str(), nullptr) == 5e-324);
}

TEST_CASE("model containers round-trip bit-exactly") {
  std::mt19937_64 rng(77);
  const EmbeddingSet train = testing::RandomLabeledSet(5, 12, 6, &rng);
  NormalizerParams params;
  params.linear_dim = 3;
  params.vae.latent_dim = 2;
  params.vae.hidden = {7, 5};
  params.vae.epochs = 2;
  params.vae.batch_size = 16;

  std::vector<AnyModel> models;
  models.push_back(IdentityNormalizer{5});
  models.push_back(ToAnyModel(FitNormalizer(NormalizerKind::kPca, train, params).model));
  models.push_back(ToAnyModel(FitNormalizer(NormalizerKind::kLda, train, params).model));
  models.push_back(ToAnyModel(FitNormalizer(NormalizerKind::kVae, train, params).model));
  models.push_back(ToAnyModel(FitNormalizer(NormalizerKind::kCvae, train, params).model));
  models.push_back(FitPlda(train, {}));

  const fs::path dir = TempDir();
  for (const auto& m : models) {
    CAPTURE(ModelKindTag(m));
    const std::string bytes = EncodeModel(m);
    const AnyModel back = DecodeModel(bytes);
    CHECK(back == m);
    CHECK(EncodeModel(back) == bytes);
    const fs::path path = dir / (std::string(ModelKindTag(m)) + ".model");
    SaveModel(m, path);
    const AnyModel loaded = LoadModel(path);
    CHECK(loaded == m);
    // Outputs on a probe batch are identical bit for bit.
    if (std::holds_alternative<PldaModel>(m)) {
      const auto& a = std::get<PldaModel>(m);
      const auto& b = std::get<PldaModel>(loaded);
      for (std::size_t i = 0; i + 1 < train.size(); i += 7)
        CHECK(ScoreLlr(a, train.records[i].vector, train.records[i + 1].vector) ==
              ScoreLlr(b, train.records[i].vector, train.records[i + 1].vector));
    } else {
      CHECK(ApplyNormalizer(ToNormalizer(m), train) ==
            ApplyNormalizer(ToNormalizer(loaded), train));
    }
    // Truncation and version errors.
    CHECK_THROWS_AS(DecodeModel(bytes.substr(0, bytes.size() - 1)), ParseError);
    CHECK_THROWS_AS(DecodeModel(bytes.substr(0, 2)), ParseError);
    std::string wrong = bytes;
    wrong[0] = static_cast<char>(kModelFormatVersion + 1);
    CHECK_THROWS_AS(DecodeModel(wrong), UnsupportedVersion);
  }
  const auto& vae = std::get<VaeModel>(models[3]);
  const VaeModel vae_back = std::get<VaeModel>(DecodeModel(EncodeModel(models[3])));
  CHECK(vae_back.train_seed == vae.train_seed);
  CHECK(vae_back.config.hidden == vae.config.hidden);
  CHECK(vae_back.cohesive_weight == vae.cohesive_weight);
  CHECK_THROWS_AS(ToPlda(models[1]), InvalidInput);
  CHECK_THROWS_AS(ToNormalizer(models[5]), InvalidInput);
}
