// include/svb/dataio.h

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

#ifndef SVB_DATAIO_H_
#define SVB_DATAIO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "svb/matrix.h"

namespace svb {

/// One embedding ("x-vector"). An empty speaker_id means unlabeled.
struct EmbeddingRecord {
  std::string utterance_id;
  std::string speaker_id;
  Vector vector;

  bool operator==(const EmbeddingRecord&) const = default;
};

struct EmbeddingSet {
  std::size_t dim = 0;
  std::vector<EmbeddingRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  /// True when every record carries a speaker id.
  bool IsLabeled() const;
  std::vector<Vector> Vectors() const;
  /// Checks dimensions, finiteness, id syntax and id uniqueness.
  /// Throws InvalidInput.
  void Validate() const;
  /// utterance id -> record index. Throws InvalidInput on duplicates.
  std::unordered_map<std::string, std::size_t> IndexById() const;

  bool operator==(const EmbeddingSet&) const = default;
};

enum class EmbeddingFormat { kBinary, kCsv };

/// ".csv" -> kCsv, anything else -> kBinary.
EmbeddingFormat FormatFromPath(const std::filesystem::path& path);

/// Binary "EVF1" layout: magic, u32 dim, u64 count, then per record
/// u16 id length + id bytes, u16 speaker length + speaker bytes,
/// dim little-endian f64 values.
std::string EncodeEvf(const EmbeddingSet& set);
EmbeddingSet DecodeEvf(std::string_view bytes);

/// `utterance_id,speaker_id,v1,...,vd` lines with a header line.
std::string EncodeEmbeddingCsv(const EmbeddingSet& set);
/// The header is optional. With expected_dim unset the dimension comes
/// from the first data row.
EmbeddingSet DecodeEmbeddingCsv(std::string_view text,
                                std::optional<std::size_t> expected_dim = {});

EmbeddingSet ReadEmbeddings(const std::filesystem::path& path, EmbeddingFormat format,
                            std::optional<std::size_t> expected_dim = {});
EmbeddingSet ReadEmbeddings(const std::filesystem::path& path);
void WriteEmbeddings(const EmbeddingSet& set, const std::filesystem::path& path,
                     EmbeddingFormat format);
void WriteEmbeddings(const EmbeddingSet& set, const std::filesystem::path& path);

struct Trial {
  std::string enroll;
  std::string test;
  std::optional<bool> is_target;

  bool operator==(const Trial&) const = default;
};

/// Whitespace separated `enroll test [target|nontarget]` lines.
std::vector<Trial> DecodeTrials(std::string_view text);
std::string EncodeTrials(std::span<const Trial> trials);
std::vector<Trial> ReadTrials(const std::filesystem::path& path);
void WriteTrials(std::span<const Trial> trials, const std::filesystem::path& path);

struct TrialScore {
  std::string enroll;
  std::string test;
  double score = 0.0;
  std::optional<bool> is_target;

  bool operator==(const TrialScore&) const = default;
};

/// `enroll test score [label]` lines, score printed with 17 significant
/// digits; the label column is written when known.
std::string EncodeScores(std::span<const TrialScore> scores);
/// Accepts an optional fourth `target|nontarget` column.
std::vector<TrialScore> DecodeScores(std::string_view text);
void WriteScores(std::span<const TrialScore> scores, const std::filesystem::path& path);
std::vector<TrialScore> ReadScores(const std::filesystem::path& path);

std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes);

/// Fewest significant digits (15 to 17) that read back to exactly `value`.
std::string FormatDouble(double value);

// Little-endian primitive encoding shared by the EVF1 and model formats.
class ByteWriter {
 public:
  void U16(std::uint16_t v);
  void U32(std::uint32_t v);
  void U64(std::uint64_t v);
  void F64(double v);
  void Bytes(std::string_view bytes);
  /// u16 length prefix; throws InvalidInput above 65535 bytes.
  void ShortString(std::string_view s);
  /// u32 length + values.
  void DoubleVector(std::span<const double> v);
  /// u32 rows, u32 cols, row-major values.
  void MatrixValue(const Matrix& m);

  const std::string& bytes() const { return bytes_; }
  std::string Take() { return std::move(bytes_); }

 private:
  std::string bytes_;
};

/// Reads the ByteWriter encoding; truncation raises ParseError with the
/// byte offset.
class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint16_t U16();
  std::uint32_t U32();
  std::uint64_t U64();
  double F64();
  std::string_view Bytes(std::size_t n);
  std::string ShortString();
  Vector DoubleVector();
  Matrix MatrixValue();

  std::size_t offset() const { return offset_; }
  bool AtEnd() const { return offset_ == bytes_.size(); }
  std::size_t Remaining() const { return bytes_.size() - offset_; }

 private:
  std::string_view Take(std::size_t n, const char* what);

  std::string_view bytes_;
  std::size_t offset_ = 0;
};

}  // namespace svb

#endif  // SVB_DATAIO_H_
