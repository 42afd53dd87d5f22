// src/pipeline/pipeline.cc

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

#include "svb/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <set>
#include <sstream>

#include "svb/errors.h"
#include "svb/evalkit.h"
#include "svb/plda.h"

namespace svb {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitList(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(',', start);
    if (end == std::string_view::npos) end = s.size();
    std::string_view item = Trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view text) {
  T value{};
  std::string_view t = Trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw InvalidInput("config key '" + std::string(key) + "': bad value '" +
                       std::string(text) + "'");
  return value;
}

bool ParseBool(std::string_view key, std::string_view text) {
  std::string_view t = Trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw InvalidInput("config key '" + std::string(key) + "': expected true/false");
}

template <typename T>
std::string JoinNumbers(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

struct KeySpec {
  std::string_view name;
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

#define SVB_SIZE_KEY(key, field)                                                       \
  KeySpec{key, [](PipelineConfig& c, std::string_view v) {                             \
            c.field = ParseNumber<std::size_t>(key, v);                                \
          },                                                                           \
          [](const PipelineConfig& c) { return std::to_string(c.field); }}
#define SVB_INT_KEY(key, field)                                                        \
  KeySpec{key, [](PipelineConfig& c, std::string_view v) {                             \
            c.field = ParseNumber<int>(key, v);                                        \
          },                                                                           \
          [](const PipelineConfig& c) { return std::to_string(c.field); }}
#define SVB_DOUBLE_KEY(key, field)                                                     \
  KeySpec{key, [](PipelineConfig& c, std::string_view v) {                             \
            c.field = ParseNumber<double>(key, v);                                     \
          },                                                                           \
          [](const PipelineConfig& c) { return FormatDouble(c.field); }}

const std::vector<KeySpec>& Keys() {
  static const std::vector<KeySpec> keys = {
      SVB_SIZE_KEY("dim", dim),
      SVB_SIZE_KEY("ind_train_speakers", ind_train_speakers),
      SVB_SIZE_KEY("ind_test_speakers", ind_test_speakers),
      SVB_SIZE_KEY("utts_per_speaker", utts_per_speaker),
      SVB_DOUBLE_KEY("between_scale", between_scale),
      SVB_DOUBLE_KEY("within_scale", within_scale),
      SVB_DOUBLE_KEY("warp_strength", warp_strength),
      SVB_DOUBLE_KEY("heavy_tail_dof", heavy_tail_dof),
      KeySpec{"shared_tail_scale",
              [](PipelineConfig& c, std::string_view v) {
                c.shared_tail_scale = ParseBool("shared_tail_scale", v);
              },
              [](const PipelineConfig& c) {
                return std::string(c.shared_tail_scale ? "true" : "false");
              }},
      SVB_SIZE_KEY("speaker_rank", speaker_rank),
      SVB_SIZE_KEY("ood_speakers", ood_speakers),
      SVB_SIZE_KEY("adapt_speakers", adapt_speakers),
      SVB_SIZE_KEY("test_speakers", test_speakers),
      SVB_DOUBLE_KEY("ood_within_scale", ood_within_scale),
      SVB_DOUBLE_KEY("ood_rotation", ood_rotation),
      SVB_DOUBLE_KEY("ood_scale_min", ood_scale_min),
      SVB_DOUBLE_KEY("ood_scale_max", ood_scale_max),
      SVB_DOUBLE_KEY("ood_bias", ood_bias),
      SVB_DOUBLE_KEY("ood_nonlinear", ood_nonlinear),
      SVB_SIZE_KEY("n_target", n_target),
      SVB_SIZE_KEY("n_nontarget", n_nontarget),
      KeySpec{"systems",
              [](PipelineConfig& c, std::string_view v) {
                c.systems.clear();
                for (auto item : SplitList(v)) c.systems.push_back(ParseNormalizerKind(item));
              },
              [](const PipelineConfig& c) {
                std::string out;
                for (std::size_t i = 0; i < c.systems.size(); ++i)
                  out += (i ? "," : "") + std::string(NormalizerKindName(c.systems[i]));
                return out;
              }},
      KeySpec{"adaptation_modes",
              [](PipelineConfig& c, std::string_view v) {
                c.adaptation_modes.clear();
                for (auto item : SplitList(v)) {
                  AdaptationMode m = ParseAdaptationMode(item);
                  if (m != AdaptationMode::kNone) c.adaptation_modes.push_back(m);
                }
              },
              [](const PipelineConfig& c) {
                std::string out;
                for (std::size_t i = 0; i < c.adaptation_modes.size(); ++i)
                  out += (i ? "," : "") +
                         std::string(AdaptationModeName(c.adaptation_modes[i]));
                return out.empty() ? std::string("none") : out;
              }},
      SVB_SIZE_KEY("linear_dim", normalizer.linear_dim),
      SVB_SIZE_KEY("vae_latent_dim", normalizer.vae.latent_dim),
      KeySpec{"vae_hidden",
              [](PipelineConfig& c, std::string_view v) {
                c.normalizer.vae.hidden.clear();
                for (auto item : SplitList(v))
                  c.normalizer.vae.hidden.push_back(ParseNumber<std::size_t>("vae_hidden", item));
              },
              [](const PipelineConfig& c) { return JoinNumbers(c.normalizer.vae.hidden); }},
      SVB_INT_KEY("vae_epochs", normalizer.vae.epochs),
      SVB_SIZE_KEY("vae_batch_size", normalizer.vae.batch_size),
      SVB_DOUBLE_KEY("vae_learning_rate", normalizer.vae.learning_rate),
      SVB_DOUBLE_KEY("vae_finetune_learning_rate", normalizer.vae.finetune_learning_rate),
      KeySpec{"vae_adapt_epochs",
              [](PipelineConfig& c, std::string_view v) {
                if (Trim(v) == "default") c.normalizer.vae_adapt_epochs.reset();
                else c.normalizer.vae_adapt_epochs = ParseNumber<int>("vae_adapt_epochs", v);
              },
              [](const PipelineConfig& c) {
                return c.normalizer.vae_adapt_epochs
                           ? std::to_string(*c.normalizer.vae_adapt_epochs)
                           : std::string("default");
              }},
      SVB_DOUBLE_KEY("cvae_cohesive_weight", normalizer.cvae_cohesive_weight),
      KeySpec{"length_norm",
              [](PipelineConfig& c, std::string_view v) {
                c.length_norm = ParseBool("length_norm", v);
              },
              [](const PipelineConfig& c) {
                return std::string(c.length_norm ? "true" : "false");
              }},
      SVB_INT_KEY("plda_iterations", plda_iterations),
      SVB_DOUBLE_KEY("uat_alpha_within", uat_alpha_within),
      SVB_DOUBLE_KEY("uat_alpha_between", uat_alpha_between),
      KeySpec{"seeds",
              [](PipelineConfig& c, std::string_view v) {
                c.seeds.clear();
                for (auto item : SplitList(v))
                  c.seeds.push_back(ParseNumber<std::uint64_t>("seeds", item));
              },
              [](const PipelineConfig& c) { return JoinNumbers(c.seeds); }},
      SVB_SIZE_KEY("jobs", jobs),
  };
  return keys;
}

#undef SVB_SIZE_KEY
#undef SVB_INT_KEY
#undef SVB_DOUBLE_KEY

EmbeddingSet Prepare(const Normalizer& norm, const EmbeddingSet& set, bool length_norm) {
  EmbeddingSet out = ApplyNormalizer(norm, set);
  return length_norm ? LengthNormalize(out) : out;
}

double Eer(const Normalizer& norm, const PldaModel& plda, const EmbeddingSet& set,
           const std::vector<Trial>& trials, bool length_norm) {
  ScoreReport report = ScoreTrials(nullptr, plda, Prepare(norm, set, length_norm), trials);
  if (!report.eer) throw InvalidInput("trial list lacks target or nontarget trials");
  return report.eer->eer;
}

std::set<std::string> SpeakersOf(const EmbeddingSet& set) {
  std::set<std::string> out;
  for (const auto& r : set.records) out.insert(r.speaker_id);
  return out;
}

void RequireDisjoint(const EmbeddingSet& a, const EmbeddingSet& b, const char* what) {
  const auto sa = SpeakersOf(a);
  for (const auto& s : SpeakersOf(b))
    if (sa.count(s)) throw Error(std::string("speaker overlap between ") + what + ": " + s);
}

GaussianityCell MakeGaussianityCell(std::uint64_t seed, std::string group,
                                    NormalizerKind system, const EmbeddingSet& set) {
  GaussianityReport g = ComputeGaussianity(set);
  return {seed, std::move(group), system, g.aggregate_skew, g.aggregate_kurt,
          g.mean_abs_skew, g.mean_abs_kurt};
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

std::string Fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string_view AdaptationModeName(AdaptationMode mode) {
  switch (mode) {
    case AdaptationMode::kNone: return "none";
    case AdaptationMode::kPldaRet: return "plda-ret";
    case AdaptationMode::kPldaUat: return "plda-uat";
    case AdaptationMode::kNormAdapt: return "norm-adapt";
    case AdaptationMode::kNormAdaptPldaRet: return "norm-adapt+plda-ret";
  }
  return "unknown";
}

AdaptationMode ParseAdaptationMode(std::string_view name) {
  for (AdaptationMode m : {AdaptationMode::kNone, AdaptationMode::kPldaRet,
                           AdaptationMode::kPldaUat, AdaptationMode::kNormAdapt,
                           AdaptationMode::kNormAdaptPldaRet})
    if (AdaptationModeName(m) == name) return m;
  throw InvalidInput("unknown adaptation mode '" + std::string(name) + "'");
}

void PipelineConfig::Set(std::string_view key, std::string_view value) {
  for (const auto& k : Keys()) {
    if (k.name == key) {
      k.set(*this, value);
      return;
    }
  }
  throw InvalidInput("unknown config key '" + std::string(key) + "'");
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::Entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : Keys()) out.emplace_back(std::string(k.name), k.get(*this));
  return out;
}

std::string PipelineConfig::ToText() const {
  std::string out;
  for (const auto& [k, v] : Entries()) out += k + " = " + v + "\n";
  return out;
}

PipelineConfig PresetConfig(std::string_view name) {
  PipelineConfig c;
  if (name == "desk") return c;
  if (name == "full") {
    c.dim = 512;
    c.speaker_rank = 150;
    c.normalizer.linear_dim = 150;
    c.normalizer.vae = FullScaleVaeConfig();
    c.normalizer.vae_adapt_epochs.reset();
    return c;
  }
  throw InvalidInput("unknown preset '" + std::string(name) + "' (desk, full)");
}

PipelineConfig ParseConfigText(std::string_view text, PipelineConfig base) {
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (!line.empty()) {
      auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
      base.Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return base;
}

DomainSpec IndDomainSpec(const PipelineConfig& c, std::uint64_t seed, bool test) {
  DomainSpec s;
  s.dim = c.dim;
  s.n_speakers = test ? c.ind_test_speakers : c.ind_train_speakers;
  s.utts_per_speaker = c.utts_per_speaker;
  s.between_scale = c.between_scale;
  s.within_scale = c.within_scale;
  s.warp_strength = c.warp_strength;
  s.heavy_tail_dof = c.heavy_tail_dof;
  s.shared_tail_scale = c.shared_tail_scale;
  s.speaker_rank = c.speaker_rank;
  s.basis_seed = seed;
  s.seed = seed * 1000 + (test ? 2 : 1);
  s.speaker_prefix = test ? "indtest" : "indtrain";
  return s;
}

DomainSpec OodDomainSpec(const PipelineConfig& c, std::uint64_t seed) {
  DomainSpec s = IndDomainSpec(c, seed, false);
  s.n_speakers = c.ood_speakers;
  s.within_scale = c.ood_within_scale;
  s.seed = seed * 1000 + 3;
  s.speaker_prefix = "ood";
  s.shift.affine = MakeRandomAffineShift(c.dim, seed * 1000 + 4, c.ood_rotation,
                                         c.ood_scale_min, c.ood_scale_max, c.ood_bias);
  s.shift.nonlinear_strength = c.ood_nonlinear;
  return s;
}

ExperimentData GenerateExperimentData(const PipelineConfig& c, std::uint64_t seed) {
  ExperimentData d;
  d.ind_train = GenerateDomain(IndDomainSpec(c, seed, false));
  d.ind_test = GenerateDomain(IndDomainSpec(c, seed, true));
  auto [adapt, test] = SplitBySpeaker(GenerateDomain(OodDomainSpec(c, seed)),
                                      SplitSpec{c.adapt_speakers, c.test_speakers});
  d.ood_adapt = std::move(adapt);
  d.ood_test = std::move(test);
  d.ind_trials = MakeTrials(d.ind_test, c.n_target, c.n_nontarget, seed * 1000 + 5);
  d.ood_trials = MakeTrials(d.ood_test, c.n_target, c.n_nontarget, seed * 1000 + 6);
  return d;
}

std::vector<double> ExperimentResult::EersOf(NormalizerKind system,
                                             std::string_view condition) const {
  std::vector<double> out;
  for (const auto& c : eers)
    if (c.system == system && c.condition == condition) out.push_back(c.eer);
  return out;
}

std::optional<double> ExperimentResult::MedianEer(NormalizerKind system,
                                                  std::string_view condition) const {
  auto v = EersOf(system, condition);
  if (v.empty()) return std::nullopt;
  return Median(std::move(v));
}

std::vector<const GaussianityCell*> ExperimentResult::GaussianityOf(
    std::string_view group, NormalizerKind system) const {
  std::vector<const GaussianityCell*> out;
  for (const auto& g : gaussianity)
    if (g.group == group && g.system == system) out.push_back(&g);
  return out;
}

ExperimentResult RunReplica(const PipelineConfig& config, std::uint64_t seed) {
  ExperimentResult result;
  result.config = config;
  const ExperimentData data = GenerateExperimentData(config, seed);
  RequireDisjoint(data.ood_adapt, data.ood_test, "OOD adaptation and test splits");
  RequireDisjoint(data.ind_train, data.ood_test, "IND training and OOD test sets");

  NormalizerParams params = config.normalizer;
  params.vae.seed = seed;
  const PldaFitOptions plda_opts{config.plda_iterations};
  const bool ln = config.length_norm;
  auto add = [&](NormalizerKind kind, std::string_view cond, double eer) {
    result.eers.push_back({seed, kind, std::string(cond), eer});
  };

  result.gaussianity.push_back(
      MakeGaussianityCell(seed, "raw", NormalizerKind::kNone, data.ood_test));

  for (NormalizerKind kind : config.systems) {
    const Normalizer norm = FitNormalizer(kind, data.ind_train, params).model;
    const PldaModel plda = FitPlda(Prepare(norm, data.ind_train, ln), plda_opts);
    add(kind, kCondInd, Eer(norm, plda, data.ind_test, data.ind_trials, ln));
    add(kind, kCondOod, Eer(norm, plda, data.ood_test, data.ood_trials, ln));
    if (kind != NormalizerKind::kNone)
      result.gaussianity.push_back(
          MakeGaussianityCell(seed, "original", kind, ApplyNormalizer(norm, data.ood_test)));

    std::optional<Normalizer> adapted;
    for (AdaptationMode mode : config.adaptation_modes) {
      const std::string_view cond = AdaptationModeName(mode);
      switch (mode) {
        case AdaptationMode::kNone:
          break;
        case AdaptationMode::kPldaRet: {
          PldaModel ret = FitPlda(Prepare(norm, data.ood_adapt, ln), plda_opts);
          add(kind, cond, Eer(norm, ret, data.ood_test, data.ood_trials, ln));
          break;
        }
        case AdaptationMode::kPldaUat: {
          EmbeddingSet unlabeled = Prepare(norm, data.ood_adapt, ln);
          PldaModel uat = AdaptPldaUnsupervised(plda, unlabeled, config.uat_alpha_within,
                                                config.uat_alpha_between);
          add(kind, cond, Eer(norm, uat, data.ood_test, data.ood_trials, ln));
          break;
        }
        case AdaptationMode::kNormAdapt:
        case AdaptationMode::kNormAdaptPldaRet: {
          if (kind == NormalizerKind::kNone) break;
          if (!adapted) {
            adapted = AdaptNormalizer(norm, data.ood_adapt, params).model;
            result.gaussianity.push_back(MakeGaussianityCell(
                seed, "adapted", kind, ApplyNormalizer(*adapted, data.ood_test)));
          }
          const PldaModel& backend =
              mode == AdaptationMode::kNormAdapt
                  ? plda
                  : FitPlda(Prepare(*adapted, data.ood_adapt, ln), plda_opts);
          add(kind, cond, Eer(*adapted, backend, data.ood_test, data.ood_trials, ln));
          break;
        }
      }
    }
  }
  return result;
}

ExperimentResult RunExperiment(const PipelineConfig& config) {
  if (config.seeds.empty()) throw InvalidInput("experiment needs at least one seed");
  if (config.seeds.size() < 5)
    std::cerr << "WARNING: " << config.seeds.size()
              << " seed(s); desk-scale EERs are noisy, medians over >= 5 seeds are "
                 "the headline numbers\n";
  std::vector<ExperimentResult> replicas(config.seeds.size());
  const std::size_t jobs = std::max<std::size_t>(1, config.jobs);
  for (std::size_t start = 0; start < config.seeds.size(); start += jobs) {
    std::vector<std::future<ExperimentResult>> running;
    for (std::size_t i = start; i < std::min(start + jobs, config.seeds.size()); ++i)
      running.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                   RunReplica, std::cref(config), config.seeds[i]));
    for (std::size_t i = 0; i < running.size(); ++i) replicas[start + i] = running[i].get();
  }
  ExperimentResult all;
  all.config = config;
  for (auto& r : replicas) {
    all.eers.insert(all.eers.end(), r.eers.begin(), r.eers.end());
    all.gaussianity.insert(all.gaussianity.end(), r.gaussianity.begin(), r.gaussianity.end());
  }
  return all;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidInput("quantile of an empty list");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double Median(std::vector<double> values) { return Quantile(std::move(values), 0.5); }

std::string ResultsCsv(const ExperimentResult& result) {
  std::string out = "seed,system,condition,eer\n";
  for (const auto& c : result.eers)
    out += std::to_string(c.seed) + "," + std::string(NormalizerKindName(c.system)) + "," +
           c.condition + "," + FormatDouble(c.eer) + "\n";
  return out;
}

std::string GaussianityResultsCsv(const ExperimentResult& result) {
  std::string out =
      "seed,group,system,aggregate_skew,aggregate_kurt,mean_abs_skew,mean_abs_kurt\n";
  for (const auto& g : result.gaussianity)
    out += std::to_string(g.seed) + "," + g.group + "," +
           std::string(NormalizerKindName(g.system)) + "," + FormatDouble(g.aggregate_skew) +
           "," + FormatDouble(g.aggregate_kurt) + "," + FormatDouble(g.mean_abs_skew) + "," +
           FormatDouble(g.mean_abs_kurt) + "\n";
  return out;
}

namespace {

std::string_view DisplayName(NormalizerKind kind) {
  switch (kind) {
    case NormalizerKind::kNone: return "Baseline";
    case NormalizerKind::kPca: return "PCA";
    case NormalizerKind::kLda: return "LDA";
    case NormalizerKind::kVae: return "VAE";
    case NormalizerKind::kCvae: return "C-VAE";
  }
  return "?";
}

}  // namespace

std::string ResultsMarkdown(const ExperimentResult& result) {
  const auto& systems = result.config.systems;
  auto header = [&](bool skip_baseline) {
    std::string h = "| |", sep = "|---|";
    for (auto s : systems) {
      if (skip_baseline && s == NormalizerKind::kNone) continue;
      h += " " + std::string(DisplayName(s)) + " |";
      sep += "---|";
    }
    return h + "\n" + sep + "\n";
  };
  auto row = [&](std::string_view label, std::string_view cond, bool skip_baseline) {
    std::string r = "| " + std::string(label) + " |";
    for (auto s : systems) {
      if (skip_baseline && s == NormalizerKind::kNone) continue;
      auto v = result.EersOf(s, cond);
      if (v.empty()) {
        r += " - |";
      } else {
        r += " " + Percent(Median(v)) + " [" + Percent(Quantile(v, 0.25)) + ", " +
             Percent(Quantile(v, 0.75)) + "] |";
      }
    }
    return r + "\n";
  };

  std::string md = "# Back-end experiment (synthetic embeddings)\n\n";
  md += "Seeds: " + JoinNumbers(result.config.seeds) +
        ". Cells: median EER % [25th, 75th percentile] over seeds.\n\n";
  md += "## IND vs OOD\n\n" + header(false) + row("IND", kCondInd, false) +
        row("OOD", kCondOod, false) + "\n";
  md += "## PLDA adaptation (OOD test)\n\n" + header(false) + row("PLDA", kCondOod, false) +
        row("PLDA-RET", "plda-ret", false) + row("PLDA-UAT", "plda-uat", false) + "\n";
  md += "## Normalizer adaptation (OOD test)\n\n" + header(true) +
        row("PLDA-RET", "plda-ret", true) + row("Norm-Adapt", "norm-adapt", true) +
        row("Norm-Adapt+PLDA-RET", "norm-adapt+plda-ret", true) + "\n";

  md += "## Skewness / kurtosis of OOD test vectors\n\n";
  md += "Median over seeds of the per-dimension mean (signed) and the mean of absolute "
        "values.\n\n| group | system | skew | kurt | mean abs skew | mean abs kurt |\n"
        "|---|---|---|---|---|---|\n";
  auto grow = [&](std::string_view group, NormalizerKind s) {
    auto cells = result.GaussianityOf(group, s);
    if (cells.empty()) return std::string();
    std::vector<double> sk, ku, ask, aku;
    for (auto* c : cells) {
      sk.push_back(c->aggregate_skew);
      ku.push_back(c->aggregate_kurt);
      ask.push_back(c->mean_abs_skew);
      aku.push_back(c->mean_abs_kurt);
    }
    return "| " + std::string(group) + " | " +
           std::string(DisplayName(s)) +
           " | " + Fixed4(Median(sk)) + " | " + Fixed4(Median(ku)) + " | " +
           Fixed4(Median(ask)) + " | " + Fixed4(Median(aku)) + " |\n";
  };
  md += grow("raw", NormalizerKind::kNone);
  for (const char* group : {"original", "adapted"})
    for (auto s : systems) md += grow(group, s);
  return md;
}

void WriteExperimentOutputs(const ExperimentResult& result,
                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteFileBytes(dir / "results.csv", ResultsCsv(result));
  WriteFileBytes(dir / "gaussianity.csv", GaussianityResultsCsv(result));
  WriteFileBytes(dir / "results.md", ResultsMarkdown(result));
  WriteFileBytes(dir / "config.resolved", result.config.ToText());
}

}  // namespace svb
