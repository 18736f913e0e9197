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

#ifndef PTNER_EVAL_HPP_
#define PTNER_EVAL_HPP_

#include <string>
#include <vector>

#include "ptner/corpus.hpp"
#include "ptner/crf.hpp"

namespace ptner {

struct TypeCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

double precision_of(const TypeCounts& c);
double recall_of(const TypeCounts& c);
double f1_of(const TypeCounts& c);

struct PartialErrorEntry {
  TypeSet typeset;
  std::string name;  // e.g. "DNA+protein"
  long errors = 0;
  double rate = 0.0;
};

struct EvalReport {
  std::vector<std::string> type_names;
  std::vector<TypeCounts> per_type;  // indexed like type_names
  TypeCounts micro;                  // pooled over types
  int sentence_count = 0;
  long decode_repairs = 0;  // ill-formed predicted chunks repaired

  bool has_errors = false;  // sentence-level error rates populated?
  long all_errors = 0;
  double e_all = 0.0;
  std::vector<PartialErrorEntry> partial_errors;

  double micro_f1() const { return f1_of(micro); }
};

std::string report_json(const EvalReport& report);

// Unconstrained argmax decode of one featurized sentence.
LabelSeq predict_labels(const FeaturizedSentence& fsent, const Model& model);

// Entity-level exact-match F1; preds[i] aligned with gold.sentences[i].
EvalReport f1_report(const Corpus& gold, const std::vector<LabelSeq>& preds);

// Indicator of Eq-style sentence error: 1 iff the gold path does not beat
// every other sequence strictly (ties count as errors).
int sentence_error(const ScoreTable& scores, const LabelSeq& gold);
int sentence_error(const FeaturizedSentence& fsent, const LabelSeq& gold,
                   const Model& model);

// Partial variant over the constraint lattice of `typeset`. Gold may be fully
// typed; it is projected onto the typeset internally, so the value is the
// same whether gold arrives fully or partially typed.
int partial_error(const ScoreTable& scores, const LabelSeq& gold,
                  const TypeSet& typeset, const LabelSpace& space);
int partial_error(const FeaturizedSentence& fsent, const LabelSeq& gold,
                  const TypeSet& typeset, const Model& model);

// F1 plus, when `partial_typesets` is non-empty or `with_errors` is set, the
// sentence-level error rates over the corpus. Parallel over sentences.
EvalReport evaluate(const Corpus& test, const Model& model,
                    const std::vector<TypeSet>& partial_typesets = {},
                    bool with_errors = false);

}  // namespace ptner

#endif  // PTNER_EVAL_HPP_
