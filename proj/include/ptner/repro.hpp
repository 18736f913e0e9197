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

#ifndef PTNER_REPRO_HPP_
#define PTNER_REPRO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "ptner/synth.hpp"
#include "ptner/trainer.hpp"

namespace ptner {

// The four-way comparison: a synthetic fully-typed corpus is masked into
// single-type folds, then one model per training regime is fitted on the
// same sentences and scored on the same fully-typed test split.
struct ReproConfig {
  SynthConfig synth;
  TrainConfig train;      // shared hyperparameters; per-regime seeds derived
  int folds = 3;
  uint64_t mask_seed = 11;
  bool hard_propagate = false;
  std::string out_dir;    // non-empty: persist corpora, models, fold artifacts
};

struct ReproRow {
  std::string regime;
  std::string setting;
  double micro_f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double e_all = 0.0;
  double sum_partial = 0.0;  // sum of per-type partial error rates
  int best_epoch = -1;
  double seconds = 0.0;
};

struct ReproResult {
  std::vector<ReproRow> rows;  // concat, propagate, partial, standard-all
  std::string csv;
  std::string markdown;
};

// `log`, when non-null, receives one progress line per pipeline stage.
ReproResult run_repro(const ReproConfig& config, std::ostream* log);

}  // namespace ptner

#endif  // PTNER_REPRO_HPP_
