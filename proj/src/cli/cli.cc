// src/cli/cli.cc

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

#include "svb/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "svb/dataio.h"
#include "svb/errors.h"
#include "svb/evalkit.h"
#include "svb/linear_norm.h"
#include "svb/model_io.h"
#include "svb/normalizer.h"
#include "svb/pipeline.h"
#include "svb/plda.h"

namespace svb {

namespace {

namespace fs = std::filesystem;

// Options shared by the config-driven subcommands (gen, experiment).
struct ConfigOptions {
  std::string preset = "desk";
  std::string config_file;
  std::vector<std::string> overrides;
};

void AddConfigOptions(CLI::App* cmd, ConfigOptions* o) {
  cmd->add_option("--preset", o->preset, "desk or full")->capture_default_str();
  cmd->add_option("--config", o->config_file, "key = value config file");
  cmd->add_option("--set", o->overrides, "key=value override (repeatable)");
}

// Config and name errors exit as usage errors.
template <typename F>
auto AsUsage(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    throw CLI::ValidationError(what, e.what());
  } catch (const ParseError& e) {
    throw CLI::ValidationError(what, e.what());
  }
}

PipelineConfig ResolveConfig(const ConfigOptions& o) {
  PipelineConfig config = AsUsage("--preset", [&] { return PresetConfig(o.preset); });
  if (!o.config_file.empty()) {
    const std::string text = ReadFileBytes(o.config_file);
    config = AsUsage("--config", [&] { return ParseConfigText(text, config); });
  }
  for (const auto& kv : o.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
    AsUsage("--set", [&] { config.Set(kv.substr(0, eq), kv.substr(eq + 1)); });
  }
  return config;
}

EmbeddingFormat ParseFormat(const std::string& name) {
  if (name == "evf") return EmbeddingFormat::kBinary;
  if (name == "csv") return EmbeddingFormat::kCsv;
  throw CLI::ValidationError("--format", "expected evf or csv");
}

// Sidecar with every option value of a subcommand, next to its output.
void WriteResolvedOptions(const CLI::App* cmd, const fs::path& output) {
  fs::path sidecar = output;
  sidecar += ".resolved";
  WriteFileBytes(sidecar, cmd->config_to_str(true, false));
}

// Full precision, with ".0" kept on integral values.
std::string FormatRate(double value) {
  std::string s = FormatDouble(value);
  if (std::isfinite(value) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

EmbeddingSet MaybeLengthNormalize(EmbeddingSet set, bool length_norm) {
  return length_norm ? LengthNormalize(set) : set;
}

void PrintGaussianity(const GaussianityReport& g, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "dims %zu\naggregate_skew %.6f\naggregate_kurt %.6f\n"
                "mean_abs_skew %.6f\nmean_abs_kurt %.6f\npooled_skew %.6f\n"
                "pooled_kurt %.6f\n",
                g.skewness.size(), g.aggregate_skew, g.aggregate_kurt, g.mean_abs_skew,
                g.mean_abs_kurt, g.pooled_skew, g.pooled_kurt);
  out << buf;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Speaker-verification back-end: normalization, PLDA, adaptation"};
  app.name("svb");
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic IND/OOD corpus and trials");
  ConfigOptions gen_cfg;
  std::uint64_t gen_seed = 1;
  std::string gen_out = ".", gen_format = "evf";
  AddConfigOptions(gen, &gen_cfg);
  gen->add_option("--seed", gen_seed, "replica seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output directory")->capture_default_str();
  gen->add_option("--format", gen_format, "evf or csv")->capture_default_str();

  // fit-norm
  auto* fit_norm = app.add_subcommand("fit-norm", "train a normalizer");
  std::string fn_kind = "pca", fn_train, fn_out, fn_loss_log;
  NormalizerParams fn_params;
  fit_norm->add_option("--kind", fn_kind, "none, pca, lda, vae or cvae")->capture_default_str();
  fit_norm->add_option("--train", fn_train, "training embeddings")->required();
  fit_norm->add_option("--out", fn_out, "model file")->required();
  fit_norm->add_option("--dim", fn_params.linear_dim, "PCA/LDA output dimension")
      ->capture_default_str();
  fit_norm->add_option("--latent-dim", fn_params.vae.latent_dim)->capture_default_str();
  fit_norm->add_option("--hidden", fn_params.vae.hidden, "hidden layer sizes")
      ->delimiter(',')
      ->capture_default_str();
  fit_norm->add_option("--epochs", fn_params.vae.epochs)->capture_default_str();
  fit_norm->add_option("--batch-size", fn_params.vae.batch_size)->capture_default_str();
  fit_norm->add_option("--lr", fn_params.vae.learning_rate)->capture_default_str();
  fit_norm->add_option("--seed", fn_params.vae.seed)->capture_default_str();
  fit_norm->add_option("--cohesive-weight", fn_params.cvae_cohesive_weight, "C-VAE lambda")
      ->capture_default_str();
  fit_norm->add_option("--loss-log", fn_loss_log, "per-epoch VAE loss CSV");

  // apply-norm
  auto* apply_norm = app.add_subcommand("apply-norm", "normalize embeddings");
  std::string an_model, an_in, an_out, an_format;
  bool an_length_norm = false;
  apply_norm->add_option("--model", an_model, "normalizer model")->required();
  apply_norm->add_option("--in", an_in, "input embeddings")->required();
  apply_norm->add_option("--out", an_out, "output embeddings")->required();
  apply_norm->add_option("--format", an_format, "evf or csv (default: from extension)");
  apply_norm->add_flag("--length-norm", an_length_norm, "length-normalize the output");

  // fit-plda
  auto* fit_plda = app.add_subcommand("fit-plda", "train a two-covariance PLDA");
  std::string fp_train, fp_out;
  PldaFitOptions fp_opts;
  fit_plda->add_option("--train", fp_train, "labeled embeddings")->required();
  fit_plda->add_option("--out", fp_out, "model file")->required();
  fit_plda->add_option("--iterations", fp_opts.iterations)->capture_default_str();

  // adapt
  auto* adapt = app.add_subcommand("adapt", "adapt a PLDA or normalizer to new data");
  std::string ad_mode, ad_model, ad_data, ad_out, ad_loss_log, ad_vae_mode = "retrain";
  double ad_alpha_w = 0.5, ad_alpha_b = 0.5;
  int ad_iterations = 10;
  std::optional<int> ad_epochs;
  adapt->add_option("--mode", ad_mode, "plda-ret, plda-uat or norm-adapt")->required();
  adapt->add_option("--model", ad_model, "model to adapt");
  adapt->add_option("--data", ad_data, "adaptation embeddings")->required();
  adapt->add_option("--out", ad_out, "adapted model file")->required();
  adapt->add_option("--alpha-within", ad_alpha_w)->capture_default_str();
  adapt->add_option("--alpha-between", ad_alpha_b)->capture_default_str();
  adapt->add_option("--iterations", ad_iterations, "PLDA-RET EM iterations")
      ->capture_default_str();
  adapt->add_option("--epochs", ad_epochs, "VAE re-training epochs");
  adapt->add_option("--vae-mode", ad_vae_mode, "retrain or finetune")->capture_default_str();
  adapt->add_option("--loss-log", ad_loss_log, "per-epoch VAE loss CSV");

  // score
  auto* score = app.add_subcommand("score", "score trials with PLDA");
  std::string sc_plda, sc_norm, sc_emb, sc_trials, sc_out;
  bool sc_length_norm = false;
  score->add_option("--plda", sc_plda, "PLDA model")->required();
  score->add_option("--norm", sc_norm, "normalizer applied before scoring");
  score->add_option("--embeddings", sc_emb, "embeddings referenced by the trials")->required();
  score->add_option("--trials", sc_trials, "trial list")->required();
  score->add_option("--out", sc_out, "score file")->required();
  score->add_flag("--length-norm", sc_length_norm, "length-normalize after the normalizer");

  // eval
  auto* eval = app.add_subcommand("eval", "EER and DET from a score file");
  std::string ev_scores, ev_trials, ev_det, ev_metrics;
  eval->add_option("--scores", ev_scores, "score file")->required();
  eval->add_option("--trials", ev_trials, "labeled trials (if scores are unlabeled)");
  eval->add_option("--det", ev_det, "DET CSV output");
  eval->add_option("--metrics", ev_metrics, "metrics CSV output");

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "skewness/kurtosis report");
  std::string dg_in, dg_model, dg_out;
  diagnose->add_option("--in", dg_in, "embeddings")->required();
  diagnose->add_option("--model", dg_model, "normalizer applied first");
  diagnose->add_option("--out", dg_out, "per-dimension CSV output");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run the full system x adaptation matrix");
  ConfigOptions ex_cfg;
  std::string ex_out = "results";
  std::vector<std::uint64_t> ex_seeds;
  std::size_t ex_jobs = 0;
  AddConfigOptions(experiment, &ex_cfg);
  experiment->add_option("--out", ex_out, "output directory")->capture_default_str();
  experiment->add_option("--seeds", ex_seeds, "replica seeds")->delimiter(',');
  experiment->add_option("--jobs", ex_jobs, "concurrent replicas");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      PipelineConfig config = ResolveConfig(gen_cfg);
      config.seeds = {gen_seed};
      const EmbeddingFormat format = ParseFormat(gen_format);
      const std::string ext = format == EmbeddingFormat::kCsv ? ".csv" : ".evf";
      const ExperimentData data = GenerateExperimentData(config, gen_seed);
      const fs::path dir = gen_out;
      fs::create_directories(dir);
      WriteEmbeddings(data.ind_train, dir / ("ind_train" + ext), format);
      WriteEmbeddings(data.ind_test, dir / ("ind_test" + ext), format);
      WriteEmbeddings(data.ood_adapt, dir / ("ood_adapt" + ext), format);
      WriteEmbeddings(data.ood_test, dir / ("ood_test" + ext), format);
      WriteTrials(data.ind_trials, dir / "ind_trials.txt");
      WriteTrials(data.ood_trials, dir / "ood_trials.txt");
      WriteFileBytes(dir / "config.resolved", config.ToText());
      out << "wrote corpus for seed " << gen_seed << " to " << dir.string() << "\n";
    } else if (fit_norm->parsed()) {
      const NormalizerKind kind =
          AsUsage("--kind", [&] { return ParseNormalizerKind(fn_kind); });
      const EmbeddingSet train = ReadEmbeddings(fn_train);
      NormalizerFit fit = FitNormalizer(kind, train, fn_params);
      SaveModel(ToAnyModel(fit.model), fn_out);
      WriteResolvedOptions(fit_norm, fn_out);
      if (!fn_loss_log.empty()) WriteLossLog(fit.loss_log, fn_loss_log);
      out << "fitted " << NormalizerKindName(kind) << ": " << NormalizerInputDim(fit.model)
          << " -> " << NormalizerOutputDim(fit.model) << "\n";
    } else if (apply_norm->parsed()) {
      const Normalizer norm = ToNormalizer(LoadModel(an_model));
      EmbeddingSet set = MaybeLengthNormalize(ApplyNormalizer(norm, ReadEmbeddings(an_in)),
                                              an_length_norm);
      if (an_format.empty()) WriteEmbeddings(set, an_out);
      else WriteEmbeddings(set, an_out, ParseFormat(an_format));
    } else if (fit_plda->parsed()) {
      PldaFitTrace trace;
      PldaModel plda = FitPlda(ReadEmbeddings(fp_train), fp_opts, &trace);
      SaveModel(plda, fp_out);
      WriteResolvedOptions(fit_plda, fp_out);
      out << "log-likelihood " << FormatDouble(trace.log_likelihoods.back()) << "\n";
    } else if (adapt->parsed()) {
      const AdaptationMode mode =
          AsUsage("--mode", [&] { return ParseAdaptationMode(ad_mode); });
      const EmbeddingSet data = ReadEmbeddings(ad_data);
      if (mode == AdaptationMode::kPldaRet) {
        if (!ad_model.empty() && ToPlda(LoadModel(ad_model)).dim() != data.dim)
          throw InvalidInput("adaptation data dimension does not match the PLDA model");
        SaveModel(FitPlda(data, PldaFitOptions{ad_iterations}), ad_out);
      } else if (mode == AdaptationMode::kPldaUat) {
        if (ad_model.empty()) throw CLI::RequiredError("--model");
        UatReport report;
        PldaModel adapted = AdaptPldaUnsupervised(ToPlda(LoadModel(ad_model)), data,
                                                  ad_alpha_w, ad_alpha_b, &report);
        if (report.rank_deficient)
          err << "warning: fewer adaptation vectors than dim + 1; covariance shrunk by "
              << report.shrinkage << "\n";
        SaveModel(adapted, ad_out);
      } else if (mode == AdaptationMode::kNormAdapt) {
        if (ad_model.empty()) throw CLI::RequiredError("--model");
        const Normalizer norm = ToNormalizer(LoadModel(ad_model));
        std::vector<double> losses;
        Normalizer adapted;
        if (ad_vae_mode == "finetune") {
          const auto* vae = std::get_if<VaeModel>(&norm);
          if (!vae) throw InvalidInput("--vae-mode finetune needs a VAE model");
          VaeTrainResult r = AdaptVae(*vae, data, {VaeAdaptMode::kFinetune, ad_epochs});
          adapted = std::move(r.model);
          losses = std::move(r.epoch_losses);
        } else if (ad_vae_mode == "retrain") {
          NormalizerParams params;
          params.vae_adapt_epochs = ad_epochs;
          NormalizerFit fit = AdaptNormalizer(norm, data, params);
          adapted = std::move(fit.model);
          losses = std::move(fit.loss_log);
        } else {
          throw CLI::ValidationError("--vae-mode", "expected retrain or finetune");
        }
        SaveModel(ToAnyModel(adapted), ad_out);
        if (!ad_loss_log.empty()) WriteLossLog(losses, ad_loss_log);
      } else {
        throw CLI::ValidationError("--mode", "expected plda-ret, plda-uat or norm-adapt");
      }
      WriteResolvedOptions(adapt, ad_out);
    } else if (score->parsed()) {
      const PldaModel plda = ToPlda(LoadModel(sc_plda));
      EmbeddingSet emb = ReadEmbeddings(sc_emb);
      if (!sc_norm.empty()) emb = ApplyNormalizer(ToNormalizer(LoadModel(sc_norm)), emb);
      emb = MaybeLengthNormalize(std::move(emb), sc_length_norm);
      ScoreReport report = ScoreTrials(nullptr, plda, emb, ReadTrials(sc_trials));
      WriteScores(report.scores, sc_out);
      if (report.eer) out << "EER " << FormatRate(report.eer->eer) << "\n";
    } else if (eval->parsed()) {
      ScoreReport report;
      report.scores = ReadScores(ev_scores);
      if (!ev_trials.empty()) {
        const auto trials = ReadTrials(ev_trials);
        if (trials.size() != report.scores.size())
          throw InvalidInput("score and trial files have different lengths");
        for (std::size_t i = 0; i < trials.size(); ++i) {
          if (trials[i].enroll != report.scores[i].enroll ||
              trials[i].test != report.scores[i].test)
            throw InvalidInput("score line " + std::to_string(i + 1) +
                               " does not match the trial list");
          report.scores[i].is_target = trials[i].is_target;
        }
      }
      Evaluate(&report);
      if (!report.eer) throw InvalidInput("scores need target and nontarget labels");
      out << "EER " << FormatRate(report.eer->eer) << "\n";
      out << "threshold " << FormatDouble(report.eer->threshold) << "\n";
      if (!ev_det.empty()) WriteDetCsv(report.det, ev_det);
      if (!ev_metrics.empty()) {
        std::vector<std::pair<std::string, double>> metrics = {
            {"eer", report.eer->eer}, {"eer_threshold", report.eer->threshold}};
        WriteMetricsCsv(metrics, ev_metrics);
      }
    } else if (diagnose->parsed()) {
      EmbeddingSet set = ReadEmbeddings(dg_in);
      if (!dg_model.empty()) set = ApplyNormalizer(ToNormalizer(LoadModel(dg_model)), set);
      const GaussianityReport g = ComputeGaussianity(set);
      PrintGaussianity(g, out);
      if (!dg_out.empty()) WriteFileBytes(dg_out, GaussianityCsv(g));
    } else if (experiment->parsed()) {
      PipelineConfig config = ResolveConfig(ex_cfg);
      if (!ex_seeds.empty()) config.seeds = ex_seeds;
      if (ex_jobs > 0) config.jobs = ex_jobs;
      const ExperimentResult result = RunExperiment(config);
      WriteExperimentOutputs(result, ex_out);
      out << ResultsMarkdown(result);
    }
  } catch (const CLI::Error& e) {
    err << "svb: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "svb: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace svb
