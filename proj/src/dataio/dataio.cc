// src/dataio/dataio.cc

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

#include "svb/dataio.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "svb/errors.h"

namespace svb {

namespace {

constexpr std::string_view kEvfMagic = "EVF1";

bool HasWhitespace(std::string_view s) {
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f')
      return true;
  return false;
}

std::vector<std::string_view> SplitOn(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<double> ParseDouble(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    return std::nullopt;
  return value;
}

// Calls fn(line_number, line) for every non-empty line, CR stripped.
template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) fn(line_no, line);
    if (end == text.size()) break;
    start = end + 1;
  }
}

std::string LineError(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

std::optional<bool> ParseLabel(std::string_view token, std::size_t line_no) {
  if (token == "target") return true;
  if (token == "nontarget") return false;
  throw ParseError(LineError(line_no, "malformed label token '" + std::string(token) +
                                          "' (expected target or nontarget)"));
}

}  // namespace

// ---------------------------------------------------------------------------
// EmbeddingSet

bool EmbeddingSet::IsLabeled() const {
  for (const auto& r : records)
    if (r.speaker_id.empty()) return false;
  return true;
}

std::vector<Vector> EmbeddingSet::Vectors() const {
  std::vector<Vector> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.vector);
  return out;
}

void EmbeddingSet::Validate() const {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.utterance_id.empty() || HasWhitespace(r.utterance_id))
      throw InvalidInput("record " + std::to_string(i) +
                         ": utterance id must be nonempty without whitespace");
    if (HasWhitespace(r.speaker_id))
      throw InvalidInput("record " + std::to_string(i) +
                         ": speaker id contains whitespace");
    if (r.vector.size() != dim)
      throw InvalidInput("record '" + r.utterance_id + "' has dimension " +
                         std::to_string(r.vector.size()) + ", expected " +
                         std::to_string(dim));
    if (!AllFinite(r.vector))
      throw InvalidInput("record '" + r.utterance_id + "' has a non-finite entry");
    if (!seen.insert(r.utterance_id).second)
      throw InvalidInput("duplicate utterance id '" + r.utterance_id + "'");
  }
}

std::unordered_map<std::string, std::size_t> EmbeddingSet::IndexById() const {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!index.emplace(records[i].utterance_id, i).second)
      throw InvalidInput("duplicate utterance id '" + records[i].utterance_id + "'");
  return index;
}

EmbeddingFormat FormatFromPath(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? EmbeddingFormat::kCsv : EmbeddingFormat::kBinary;
}

// ---------------------------------------------------------------------------
// Byte-level encoding

void ByteWriter::U16(std::uint16_t v) {
  for (int i = 0; i < 2; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void ByteWriter::U32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void ByteWriter::U64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void ByteWriter::F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::Bytes(std::string_view bytes) { bytes_.append(bytes); }

void ByteWriter::ShortString(std::string_view s) {
  if (s.size() > 0xffff)
    throw InvalidInput("string longer than 65535 bytes cannot be encoded");
  U16(static_cast<std::uint16_t>(s.size()));
  Bytes(s);
}

void ByteWriter::DoubleVector(std::span<const double> v) {
  U32(static_cast<std::uint32_t>(v.size()));
  for (double x : v) F64(x);
}

void ByteWriter::MatrixValue(const Matrix& m) {
  U32(static_cast<std::uint32_t>(m.rows()));
  U32(static_cast<std::uint32_t>(m.cols()));
  for (double x : m.data()) F64(x);
}

std::string_view ByteReader::Take(std::size_t n, const char* what) {
  if (Remaining() < n)
    throw ParseError("truncated input at byte offset " + std::to_string(offset_) +
                     " reading " + what + " (need " + std::to_string(n) +
                     " bytes, have " + std::to_string(Remaining()) + ")");
  std::string_view out = bytes_.substr(offset_, n);
  offset_ += n;
  return out;
}

std::uint16_t ByteReader::U16() {
  auto b = Take(2, "u16");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[0]) |
                                    (static_cast<unsigned char>(b[1]) << 8));
}

std::uint32_t ByteReader::U32() {
  auto b = Take(4, "u32");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
  return v;
}

std::uint64_t ByteReader::U64() {
  auto b = Take(8, "u64");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
  return v;
}

double ByteReader::F64() { return std::bit_cast<double>(U64()); }

std::string_view ByteReader::Bytes(std::size_t n) { return Take(n, "bytes"); }

std::string ByteReader::ShortString() {
  std::uint16_t n = U16();
  return std::string(Take(n, "string"));
}

Vector ByteReader::DoubleVector() {
  std::uint32_t n = U32();
  if (Remaining() / 8 < n)
    throw ParseError("truncated vector at byte offset " + std::to_string(offset_));
  Vector v(n);
  for (auto& x : v) x = F64();
  return v;
}

Matrix ByteReader::MatrixValue() {
  std::uint32_t rows = U32();
  std::uint32_t cols = U32();
  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  if (Remaining() / 8 < count)
    throw ParseError("truncated matrix at byte offset " + std::to_string(offset_));
  Vector v(count);
  for (auto& x : v) x = F64();
  return Matrix::FromData(rows, cols, std::move(v));
}

// ---------------------------------------------------------------------------
// EVF1

std::string EncodeEvf(const EmbeddingSet& set) {
  set.Validate();
  ByteWriter w;
  w.Bytes(kEvfMagic);
  w.U32(static_cast<std::uint32_t>(set.dim));
  w.U64(set.records.size());
  for (const auto& r : set.records) {
    w.ShortString(r.utterance_id);
    w.ShortString(r.speaker_id);
    for (double x : r.vector) w.F64(x);
  }
  return w.Take();
}

EmbeddingSet DecodeEvf(std::string_view bytes) {
  ByteReader r(bytes);
  if (bytes.size() < kEvfMagic.size() || r.Bytes(kEvfMagic.size()) != kEvfMagic)
    throw ParseError("magic mismatch at byte offset 0 (expected EVF1)");
  EmbeddingSet set;
  set.dim = r.U32();
  const std::uint64_t count = r.U64();
  std::unordered_set<std::string> seen;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t record_offset = r.offset();
    EmbeddingRecord rec;
    rec.utterance_id = r.ShortString();
    rec.speaker_id = r.ShortString();
    if (r.Remaining() / 8 < set.dim)
      throw ParseError("truncated record " + std::to_string(i) + " at byte offset " +
                       std::to_string(r.offset()));
    rec.vector.resize(set.dim);
    for (auto& x : rec.vector) x = r.F64();
    if (rec.utterance_id.empty())
      throw ParseError("empty utterance id at byte offset " +
                       std::to_string(record_offset));
    if (!seen.insert(rec.utterance_id).second)
      throw ParseError("duplicate utterance id '" + rec.utterance_id +
                       "' at byte offset " + std::to_string(record_offset));
    set.records.push_back(std::move(rec));
  }
  if (!r.AtEnd())
    throw ParseError("trailing bytes at byte offset " + std::to_string(r.offset()));
  return set;
}

// ---------------------------------------------------------------------------
// CSV

std::string EncodeEmbeddingCsv(const EmbeddingSet& set) {
  set.Validate();
  for (const auto& r : set.records)
    if (r.utterance_id.find(',') != std::string::npos ||
        r.speaker_id.find(',') != std::string::npos)
      throw InvalidInput("ids containing ',' cannot be written as csv");
  std::string out = "utterance_id,speaker_id";
  for (std::size_t d = 0; d < set.dim; ++d) out += ",v" + std::to_string(d + 1);
  out += '\n';
  for (const auto& r : set.records) {
    out += r.utterance_id;
    out += ',';
    out += r.speaker_id;
    for (double x : r.vector) {
      out += ',';
      out += FormatDouble(x);
    }
    out += '\n';
  }
  return out;
}

EmbeddingSet DecodeEmbeddingCsv(std::string_view text,
                                std::optional<std::size_t> expected_dim) {
  EmbeddingSet set;
  std::optional<std::size_t> dim = expected_dim;
  std::optional<std::size_t> header_dim;
  std::unordered_set<std::string> seen;
  bool first = true;
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = SplitOn(line, ',');
    if (first && line.starts_with("utterance_id,")) {
      first = false;
      header_dim = fields.size() >= 2 ? fields.size() - 2 : 0;
      return;
    }
    first = false;
    if (fields.size() < 2)
      throw ParseError(LineError(line_no, "expected utterance_id,speaker_id,values"));
    const std::size_t values = fields.size() - 2;
    if (!dim) dim = values;
    if (values != *dim)
      throw ParseError(LineError(line_no, "found " + std::to_string(values) +
                                              " values, expected " +
                                              std::to_string(*dim)));
    EmbeddingRecord rec;
    rec.utterance_id = std::string(fields[0]);
    rec.speaker_id = std::string(fields[1]);
    if (rec.utterance_id.empty() || HasWhitespace(rec.utterance_id))
      throw ParseError(LineError(line_no, "invalid utterance id"));
    rec.vector.reserve(values);
    for (std::size_t k = 0; k < values; ++k) {
      auto v = ParseDouble(fields[k + 2]);
      if (!v || !std::isfinite(*v))
        throw ParseError(LineError(line_no, "bad number '" +
                                                std::string(fields[k + 2]) + "'"));
      rec.vector.push_back(*v);
    }
    if (!seen.insert(rec.utterance_id).second)
      throw ParseError(LineError(line_no, "duplicate utterance id '" +
                                              rec.utterance_id + "'"));
    set.records.push_back(std::move(rec));
  });
  if (!dim) dim = header_dim;
  set.dim = dim.value_or(0);
  return set;
}

// ---------------------------------------------------------------------------
// Files

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return std::move(ss).str();
}

void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

EmbeddingSet ReadEmbeddings(const std::filesystem::path& path, EmbeddingFormat format,
                            std::optional<std::size_t> expected_dim) {
  std::string bytes = ReadFileBytes(path);
  try {
    EmbeddingSet set = format == EmbeddingFormat::kBinary
                           ? DecodeEvf(bytes)
                           : DecodeEmbeddingCsv(bytes, expected_dim);
    if (expected_dim && set.dim != *expected_dim)
      throw ParseError("dimension " + std::to_string(set.dim) + ", expected " +
                       std::to_string(*expected_dim));
    return set;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

EmbeddingSet ReadEmbeddings(const std::filesystem::path& path) {
  return ReadEmbeddings(path, FormatFromPath(path));
}

void WriteEmbeddings(const EmbeddingSet& set, const std::filesystem::path& path,
                     EmbeddingFormat format) {
  WriteFileBytes(path, format == EmbeddingFormat::kBinary ? EncodeEvf(set)
                                                          : EncodeEmbeddingCsv(set));
}

void WriteEmbeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
  WriteEmbeddings(set, path, FormatFromPath(path));
}

// ---------------------------------------------------------------------------
// Trials and scores

std::vector<Trial> DecodeTrials(std::string_view text) {
  std::vector<Trial> trials;
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    auto tokens = SplitWhitespace(line);
    if (tokens.empty()) return;
    if (tokens.size() < 2 || tokens.size() > 3)
      throw ParseError(LineError(line_no, "expected 'enroll test [target|nontarget]'"));
    Trial t{std::string(tokens[0]), std::string(tokens[1]), std::nullopt};
    if (tokens.size() == 3) t.is_target = ParseLabel(tokens[2], line_no);
    trials.push_back(std::move(t));
  });
  return trials;
}

std::string EncodeTrials(std::span<const Trial> trials) {
  std::string out;
  for (const auto& t : trials) {
    out += t.enroll + ' ' + t.test;
    if (t.is_target) out += *t.is_target ? " target" : " nontarget";
    out += '\n';
  }
  return out;
}

std::vector<Trial> ReadTrials(const std::filesystem::path& path) {
  try {
    return DecodeTrials(ReadFileBytes(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void WriteTrials(std::span<const Trial> trials, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeTrials(trials));
}

std::string FormatDouble(double value) {
  char buf[64];
  int n = 0;
  for (int precision = 15; precision <= 17; ++precision) {
    n = std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (!std::isfinite(value) || std::strtod(buf, nullptr) == value) break;
  }
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string EncodeScores(std::span<const TrialScore> scores) {
  std::string out;
  for (const auto& s : scores) {
    out += s.enroll + ' ' + s.test + ' ' + FormatDouble(s.score);
    if (s.is_target) out += *s.is_target ? " target" : " nontarget";
    out += '\n';
  }
  return out;
}

std::vector<TrialScore> DecodeScores(std::string_view text) {
  std::vector<TrialScore> scores;
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    auto tokens = SplitWhitespace(line);
    if (tokens.empty()) return;
    if (tokens.size() < 3 || tokens.size() > 4)
      throw ParseError(LineError(line_no, "expected 'enroll test score [label]'"));
    auto value = ParseDouble(tokens[2]);
    if (!value) throw ParseError(LineError(line_no, "bad score '" + std::string(tokens[2]) + "'"));
    TrialScore s{std::string(tokens[0]), std::string(tokens[1]), *value, std::nullopt};
    if (tokens.size() == 4) s.is_target = ParseLabel(tokens[3], line_no);
    scores.push_back(std::move(s));
  });
  return scores;
}

void WriteScores(std::span<const TrialScore> scores, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeScores(scores));
}

std::vector<TrialScore> ReadScores(const std::filesystem::path& path) {
  try {
    return DecodeScores(ReadFileBytes(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace svb
