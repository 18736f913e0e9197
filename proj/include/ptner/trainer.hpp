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

#ifndef PTNER_TRAINER_HPP_
#define PTNER_TRAINER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ptner/corpus.hpp"
#include "ptner/objectives.hpp"

namespace ptner {

struct TrainConfig {
  int batch_size = 32;
  double momentum = 0.9;
  double eta0 = 0.015;
  double rho = 0.02;   // learning-rate decay: eta_t = eta0 / (1 + rho * epoch)
  double clip = 5.0;   // global gradient L2 threshold
  int epochs = 60;
  int patience = 12;   // early stop after this many non-improving epochs
  double weight_decay = 0.0;
  int min_feature_count = 1;
  uint64_t seed = 1;
  std::string objective = "standard";  // "standard" | "marginal"
  bool hard_transitions = false;

  void validate() const;
  std::string to_json() const;
  // Fields present in the JSON override the defaults; unknown keys rejected.
  static TrainConfig from_json_text(const std::string& text);
  static TrainConfig from_file(const std::string& path);
};

// How a training corpus's labels are interpreted:
//   kConcat   - folds pooled, labels taken at face value (O stays hard O)
//   kPartial  - marginal likelihood over each sentence's source typeset
//   kStandard - fully-typed supervision (subsampled corpora)
//   kOneType  - standard training on a single-type corpus
//   kPropagate- pipeline regime; training itself happens via merged lattices
enum class Regime { kConcat, kPartial, kStandard, kOneType, kPropagate };

Regime parse_regime(const std::string& name);
std::string regime_name(Regime regime);

struct TrainExample {
  FeaturizedSentence fsent;
  Lattice lattice;
};

struct EpochLog {
  int epoch = 0;
  double eta = 0.0;
  double train_loss = 0.0;  // mean per-sentence loss this epoch
  double dev_micro_f1 = 0.0;
};

struct TrainResult {
  Model model;
  std::vector<EpochLog> log;
  int best_epoch = -1;
  double best_dev_f1 = 0.0;
};

// Featurizes `corpora` into `vocab` (grown here, then frozen by the caller or
// by train_regime) and builds each sentence's training lattice per regime.
std::vector<TrainExample> build_examples(const std::vector<const Corpus*>& corpora,
                                         Regime regime, const LabelSpace& space,
                                         FeatureVocab& vocab);

// Minibatch SGD with classical momentum, decaying learning rate and global
// gradient-norm clipping; deterministic for a fixed seed (single-threaded).
// Snapshot with the best dev micro-F1 wins (earliest epoch on ties); with an
// empty dev corpus the final epoch is returned and early stopping is off.
TrainResult sgd_train(const std::vector<TrainExample>& examples,
                      const Corpus& dev, const LabelSpace& space,
                      const FeatureVocab& vocab, const TrainConfig& config);

// Vocabulary construction + example building + sgd_train in one call.
TrainResult train_regime(const std::vector<const Corpus*>& train, const Corpus& dev,
                         Regime regime, const LabelSpace& space,
                         const TrainConfig& config);

}  // namespace ptner

#endif  // PTNER_TRAINER_HPP_
