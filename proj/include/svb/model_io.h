// include/svb/model_io.h

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

#ifndef SVB_MODEL_IO_H_
#define SVB_MODEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "svb/normalizer.h"
#include "svb/plda.h"

namespace svb {

/// Container layout: u32 format version, u16-prefixed kind tag
/// ("identity", "pca", "lda", "vae", "plda"), then the model payload with
/// vectors as u32 length + f64 values and matrices as u32 rows, u32 cols +
/// row-major f64 values, all little-endian.
inline constexpr std::uint32_t kModelFormatVersion = 1;

using AnyModel = std::variant<IdentityNormalizer, PcaModel, LdaModel, VaeModel, PldaModel>;

std::string_view ModelKindTag(const AnyModel& model);

std::string EncodeModel(const AnyModel& model);
/// Throws UnsupportedVersion on a version mismatch and ParseError on
/// truncated or malformed payloads.
AnyModel DecodeModel(std::string_view bytes);

void SaveModel(const AnyModel& model, const std::filesystem::path& path);
AnyModel LoadModel(const std::filesystem::path& path);

AnyModel ToAnyModel(const Normalizer& normalizer);
/// Throws InvalidInput if the model is a PLDA model.
Normalizer ToNormalizer(const AnyModel& model);
/// Throws InvalidInput if the model is not a PLDA model.
PldaModel ToPlda(const AnyModel& model);

}  // namespace svb

#endif  // SVB_MODEL_IO_H_
