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

#ifndef PTNER_PROPAGATE_HPP_
#define PTNER_PROPAGATE_HPP_

#include <string>
#include <vector>

#include "ptner/trainer.hpp"

namespace ptner {

struct PropagatedSpan {
  EntitySpan span;       // typed in the folds' shared label space
  int source_model = 0;  // fold index of the model that predicted it
};

struct PropagatedFold {
  const Corpus* corpus = nullptr;
  // spans[i]: predictions of the other folds' models on sentence i.
  std::vector<std::vector<PropagatedSpan>> spans;
};

// Rewrites a single-type fold into a one-type label space (the fold models'
// training space); gold ids are remapped onto type 0.
Corpus restrict_to_type(const Corpus& fold, int type);

// Every model j != i decodes fold i and contributes its predicted spans,
// mapped back into the folds' shared space by type name.
std::vector<PropagatedFold> cross_annotate(const std::vector<Corpus>& folds,
                                           const std::vector<Model>& models);

struct MergeResult {
  Lattice lattice;
  int conflicts = 0;  // positions where merging emptied the allowed set
};

// Starts from the Partial constraint lattice of (gold, source) and narrows
// every position covered by propagated spans to {propagated labels} + {O}
// (just the propagated labels when `hard`). A position whose intersection
// would become empty keeps its unmerged allowed set and counts a conflict,
// so gold singletons always win.
MergeResult merge_constraints(const LabelSeq& gold, const TypeSet& source,
                              const std::vector<PropagatedSpan>& spans,
                              const LabelSpace& space, bool hard);

struct PropagateOptions {
  TrainConfig fold_config;   // per-fold single-type models
  TrainConfig final_config;  // marginal retrain over merged lattices
  bool hard = false;         // hard-assign propagated labels (drop the O out)
  std::string work_dir;      // when non-empty: persist fold models + annotations
};

struct PropagateResult {
  TrainResult final_result;
  std::vector<Model> fold_models;
  long conflicts = 0;
  long propagated_spans = 0;
};

// The full pipeline: train one model per fold, cross-annotate, retrain on
// the merged constraint lattices. `dev` is fully typed over the folds' space.
PropagateResult propagate_train(const std::vector<Corpus>& folds, const Corpus& dev,
                                const PropagateOptions& options);

}  // namespace ptner

#endif  // PTNER_PROPAGATE_HPP_
