/* Copyright 2026 The ptner Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "ptner/repro.hpp"

#include <chrono>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "ptner/error.hpp"
#include "ptner/eval.hpp"
#include "ptner/model_io.hpp"
#include "ptner/propagate.hpp"
#include "ptner/util.hpp"

namespace ptner {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

ReproRow score_row(const std::string& regime, const std::string& setting,
                   const Model& model, const Corpus& test, int best_epoch,
                   double seconds) {
  std::vector<TypeSet> singletons;
  for (int t = 0; t < test.space.num_types(); ++t) {
    singletons.push_back(TypeSet::single(t));
  }
  EvalReport report = evaluate(test, model, singletons, true);
  ReproRow row;
  row.regime = regime;
  row.setting = setting;
  row.micro_f1 = 100.0 * report.micro_f1();
  row.precision = 100.0 * precision_of(report.micro);
  row.recall = 100.0 * recall_of(report.micro);
  row.e_all = report.e_all;
  for (const auto& entry : report.partial_errors) row.sum_partial += entry.rate;
  row.best_epoch = best_epoch;
  row.seconds = seconds;
  return row;
}

void log_line(std::ostream* log, const std::string& line) {
  if (log != nullptr) *log << line << "\n" << std::flush;
}

}  // namespace

ReproResult run_repro(const ReproConfig& config, std::ostream* log) {
  config.train.validate();
  require(config.folds >= 1, "need at least one fold");
  const bool persist = !config.out_dir.empty();
  if (persist) std::filesystem::create_directories(config.out_dir);

  log_line(log, "[repro] generating synthetic corpus (seed " +
                    std::to_string(config.synth.seed) + ")");
  SynthResult data = generate_synthetic(config.synth);
  const LabelSpace& space = data.train.space;

  log_line(log, "[repro] masking into " + std::to_string(config.folds) +
                    " single-type folds (seed " + std::to_string(config.mask_seed) + ")");
  MaskResult mask = mask_split(data.train, config.folds, config.mask_seed);
  require(mask.reduced_space == space,
          "masking with fewer folds than types is not part of this comparison");
  std::vector<const Corpus*> fold_ptrs;
  for (const Corpus& f : mask.folds) fold_ptrs.push_back(&f);

  if (persist) {
    write_conll(data.train, config.out_dir + "/train.conll");
    write_conll(data.dev, config.out_dir + "/dev.conll");
    write_conll(data.test, config.out_dir + "/test.conll");
    for (size_t j = 0; j < mask.folds.size(); ++j) {
      write_conll(mask.folds[j], config.out_dir + "/fold" + std::to_string(j) + ".conll");
    }
  }

  auto derive = [&](uint64_t k) {
    TrainConfig c = config.train;
    c.seed = splitmix64(config.train.seed ^ (0xA24BAED4963EE407ULL * (k + 1)));
    return c;
  };
  ReproResult result;

  {
    log_line(log, "[repro] training concat");
    auto t0 = std::chrono::steady_clock::now();
    TrainConfig cfg = derive(1);
    cfg.objective = "standard";
    TrainResult tr = train_regime(fold_ptrs, data.dev, Regime::kConcat, space, cfg);
    result.rows.push_back(score_row("concat", "1/3 sent. w. 1 type", tr.model,
                                    data.test, tr.best_epoch, seconds_since(t0)));
    if (persist) save_model(tr.model, config.out_dir + "/concat.model.json");
  }
  {
    log_line(log, "[repro] training propagate");
    auto t0 = std::chrono::steady_clock::now();
    PropagateOptions opts;
    opts.fold_config = derive(2);
    opts.fold_config.objective = "standard";
    opts.final_config = derive(3);
    opts.final_config.objective = "marginal";
    opts.hard = config.hard_propagate;
    opts.work_dir = persist ? config.out_dir + "/propagate" : "";
    PropagateResult pr = propagate_train(mask.folds, data.dev, opts);
    log_line(log, "[repro]   propagated spans: " + std::to_string(pr.propagated_spans) +
                      ", merge conflicts: " + std::to_string(pr.conflicts));
    result.rows.push_back(score_row("propagate", "1/3 sent. w. 1 type",
                                    pr.final_result.model, data.test,
                                    pr.final_result.best_epoch, seconds_since(t0)));
    if (persist) {
      save_model(pr.final_result.model, config.out_dir + "/propagate.model.json");
    }
  }
  {
    log_line(log, "[repro] training partial");
    auto t0 = std::chrono::steady_clock::now();
    TrainConfig cfg = derive(4);
    cfg.objective = "marginal";
    TrainResult tr = train_regime(fold_ptrs, data.dev, Regime::kPartial, space, cfg);
    result.rows.push_back(score_row("partial", "1/3 sent. w. 1 type", tr.model,
                                    data.test, tr.best_epoch, seconds_since(t0)));
    if (persist) save_model(tr.model, config.out_dir + "/partial.model.json");
  }
  {
    log_line(log, "[repro] training standard (all sentences, all types)");
    auto t0 = std::chrono::steady_clock::now();
    TrainConfig cfg = derive(5);
    cfg.objective = "standard";
    TrainResult tr = train_regime({&data.train}, data.dev, Regime::kStandard,
                                  space, cfg);
    result.rows.push_back(score_row("standard-all", "all sent. w. 3 types", tr.model,
                                    data.test, tr.best_epoch, seconds_since(t0)));
    if (persist) save_model(tr.model, config.out_dir + "/standard-all.model.json");
  }

  std::ostringstream csv;
  csv << "regime,setting,micro_f1,precision,recall,e_all,sum_partial_errors,"
         "best_epoch,seconds\n";
  for (const ReproRow& r : result.rows) {
    csv << r.regime << ",\"" << r.setting << "\"," << fixed3(r.micro_f1) << ","
        << fixed3(r.precision) << "," << fixed3(r.recall) << "," << fixed3(r.e_all)
        << "," << fixed3(r.sum_partial) << "," << r.best_epoch << ","
        << fixed3(r.seconds) << "\n";
  }
  result.csv = csv.str();

  std::ostringstream md;
  md << "| Model | Micro F1 | Precision | Recall | E_all | sum E_Ti |\n";
  md << "|---|---|---|---|---|---|\n";
  for (const ReproRow& r : result.rows) {
    md << "| " << r.regime << " (" << r.setting << ") | " << fixed3(r.micro_f1)
       << " | " << fixed3(r.precision) << " | " << fixed3(r.recall) << " | "
       << fixed3(r.e_all) << " | " << fixed3(r.sum_partial) << " |\n";
  }
  result.markdown = md.str();

  for (const ReproRow& r : result.rows) {
    log_line(log, "[repro] " + r.regime + ": micro F1 " + fixed3(r.micro_f1) +
                      " (" + fixed3(r.seconds) + "s)");
  }
  return result;
}

}  // namespace ptner
