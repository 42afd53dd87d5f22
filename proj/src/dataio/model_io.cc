// src/dataio/model_io.cc

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

#include "svb/model_io.h"

#include <string>

#include "svb/dataio.h"
#include "svb/errors.h"

namespace svb {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void WriteNetwork(const MlpNetwork& net, ByteWriter* w) {
  w->U32(static_cast<std::uint32_t>(net.layers.size()));
  for (const auto& l : net.layers) {
    w->U16(static_cast<std::uint16_t>(l.activation));
    w->MatrixValue(l.weights);
    w->DoubleVector(l.bias);
  }
}

MlpNetwork ReadNetwork(ByteReader* r) {
  MlpNetwork net;
  const std::uint32_t layers = r->U32();
  for (std::uint32_t i = 0; i < layers; ++i) {
    const std::size_t offset = r->offset();
    const std::uint16_t act = r->U16();
    if (act > static_cast<std::uint16_t>(Activation::kLinear))
      throw ParseError("unknown activation code " + std::to_string(act) +
                       " at byte offset " + std::to_string(offset));
    DenseLayer l;
    l.activation = static_cast<Activation>(act);
    l.weights = r->MatrixValue();
    l.bias = r->DoubleVector();
    net.layers.push_back(std::move(l));
  }
  return net;
}

void WriteVaeConfig(const VaeConfig& c, ByteWriter* w) {
  w->U64(c.latent_dim);
  w->U32(static_cast<std::uint32_t>(c.hidden.size()));
  for (std::size_t h : c.hidden) w->U64(h);
  w->U64(static_cast<std::uint64_t>(static_cast<std::int64_t>(c.epochs)));
  w->U64(c.batch_size);
  w->F64(c.learning_rate);
  w->F64(c.finetune_learning_rate);
  w->F64(c.beta1);
  w->F64(c.beta2);
  w->F64(c.epsilon);
  w->F64(c.cohesive_weight);
  w->U64(c.seed);
}

VaeConfig ReadVaeConfig(ByteReader* r) {
  VaeConfig c;
  c.latent_dim = r->U64();
  const std::uint32_t hidden = r->U32();
  if (r->Remaining() / 8 < hidden) throw ParseError("truncated VAE config");
  c.hidden.clear();
  for (std::uint32_t i = 0; i < hidden; ++i) c.hidden.push_back(r->U64());
  c.epochs = static_cast<int>(static_cast<std::int64_t>(r->U64()));
  c.batch_size = r->U64();
  c.learning_rate = r->F64();
  c.finetune_learning_rate = r->F64();
  c.beta1 = r->F64();
  c.beta2 = r->F64();
  c.epsilon = r->F64();
  c.cohesive_weight = r->F64();
  c.seed = r->U64();
  return c;
}

void WritePayload(const AnyModel& model, ByteWriter* w) {
  std::visit(Overloaded{
                 [&](const IdentityNormalizer& m) { w->U64(m.dim); },
                 [&](const PcaModel& m) {
                   w->DoubleVector(m.mean);
                   w->MatrixValue(m.projection);
                   w->DoubleVector(m.eigenvalues);
                 },
                 [&](const LdaModel& m) {
                   w->DoubleVector(m.mean);
                   w->MatrixValue(m.projection);
                   w->DoubleVector(m.eigenvalues);
                   w->F64(m.ridge);
                   w->U16(m.degenerate ? 1 : 0);
                 },
                 [&](const VaeModel& m) {
                   w->U64(m.latent_dim);
                   w->F64(m.cohesive_weight);
                   w->U64(m.train_seed);
                   w->U16(static_cast<std::uint16_t>(m.adapt_mode));
                   w->DoubleVector(m.input_mean);
                   w->DoubleVector(m.input_scale);
                   WriteVaeConfig(m.config, w);
                   WriteNetwork(m.encoder, w);
                   WriteNetwork(m.decoder, w);
                 },
                 [&](const PldaModel& m) {
                   w->U32(static_cast<std::uint32_t>(m.iterations));
                   w->DoubleVector(m.mean);
                   w->MatrixValue(m.between_cov);
                   w->MatrixValue(m.within_cov);
                 },
             },
             model);
}

}  // namespace

std::string_view ModelKindTag(const AnyModel& model) {
  return std::visit(Overloaded{
                        [](const IdentityNormalizer&) { return std::string_view("identity"); },
                        [](const PcaModel&) { return std::string_view("pca"); },
                        [](const LdaModel&) { return std::string_view("lda"); },
                        [](const VaeModel&) { return std::string_view("vae"); },
                        [](const PldaModel&) { return std::string_view("plda"); },
                    },
                    model);
}

std::string EncodeModel(const AnyModel& model) {
  ByteWriter w;
  w.U32(kModelFormatVersion);
  w.ShortString(ModelKindTag(model));
  WritePayload(model, &w);
  return w.Take();
}

AnyModel DecodeModel(std::string_view bytes) {
  ByteReader r(bytes);
  const std::uint32_t version = r.U32();
  if (version != kModelFormatVersion)
    throw UnsupportedVersion("unsupported model format version " + std::to_string(version) +
                             " (expected " + std::to_string(kModelFormatVersion) + ")");
  const std::string kind = r.ShortString();
  AnyModel model;
  if (kind == "identity") {
    model = IdentityNormalizer{r.U64()};
  } else if (kind == "pca") {
    PcaModel m;
    m.mean = r.DoubleVector();
    m.projection = r.MatrixValue();
    m.eigenvalues = r.DoubleVector();
    if (m.projection.cols() != m.mean.size()) throw ParseError("pca: shape mismatch");
    model = std::move(m);
  } else if (kind == "lda") {
    LdaModel m;
    m.mean = r.DoubleVector();
    m.projection = r.MatrixValue();
    m.eigenvalues = r.DoubleVector();
    m.ridge = r.F64();
    m.degenerate = r.U16() != 0;
    if (m.projection.cols() != m.mean.size()) throw ParseError("lda: shape mismatch");
    model = std::move(m);
  } else if (kind == "vae") {
    VaeModel m;
    m.latent_dim = r.U64();
    m.cohesive_weight = r.F64();
    m.train_seed = r.U64();
    const std::uint16_t mode = r.U16();
    if (mode > static_cast<std::uint16_t>(VaeAdaptMode::kFinetune))
      throw ParseError("vae: unknown adaptation mode " + std::to_string(mode));
    m.adapt_mode = static_cast<VaeAdaptMode>(mode);
    m.input_mean = r.DoubleVector();
    m.input_scale = r.DoubleVector();
    m.config = ReadVaeConfig(&r);
    m.encoder = ReadNetwork(&r);
    m.decoder = ReadNetwork(&r);
    try {
      m.Validate();
    } catch (const InvalidInput& e) {
      throw ParseError(std::string("vae: ") + e.what());
    }
    model = std::move(m);
  } else if (kind == "plda") {
    PldaModel m;
    m.iterations = static_cast<int>(r.U32());
    m.mean = r.DoubleVector();
    m.between_cov = r.MatrixValue();
    m.within_cov = r.MatrixValue();
    if (m.between_cov.rows() != m.mean.size() || m.within_cov.rows() != m.mean.size())
      throw ParseError("plda: shape mismatch");
    model = std::move(m);
  } else {
    throw ParseError("unknown model kind tag '" + kind + "'");
  }
  if (!r.AtEnd())
    throw ParseError("trailing bytes at byte offset " + std::to_string(r.offset()));
  return model;
}

void SaveModel(const AnyModel& model, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeModel(model));
}

AnyModel LoadModel(const std::filesystem::path& path) {
  try {
    return DecodeModel(ReadFileBytes(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

AnyModel ToAnyModel(const Normalizer& normalizer) {
  return std::visit([](const auto& m) -> AnyModel { return m; }, normalizer);
}

Normalizer ToNormalizer(const AnyModel& model) {
  return std::visit(Overloaded{
                        [](const PldaModel&) -> Normalizer {
                          throw InvalidInput("expected a normalizer model, got a PLDA model");
                        },
                        [](const auto& m) -> Normalizer { return m; },
                    },
                    model);
}

PldaModel ToPlda(const AnyModel& model) {
  if (const auto* p = std::get_if<PldaModel>(&model)) return *p;
  throw InvalidInput("expected a PLDA model, got '" + std::string(ModelKindTag(model)) + "'");
}

}  // namespace svb
