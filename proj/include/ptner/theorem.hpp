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

#ifndef PTNER_THEOREM_HPP_
#define PTNER_THEOREM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ptner/corpus.hpp"
#include "ptner/crf.hpp"
#include "ptner/util.hpp"

namespace ptner {

// True iff the N constraint lattices of `typesets` pin gold down to a single
// sequence (position-wise intersection singleton everywhere). Gold may be
// fully typed; it is projected onto each typeset internally.
bool check_no_ambiguity(const LabelSeq& gold, const std::vector<TypeSet>& typesets,
                        const LabelSpace& space);

// Random partition of {0..n_types-1} into n_splits non-empty disjoint sets
// (their union covers all types, so the no-ambiguity premise always holds).
std::vector<TypeSet> random_partition(int n_types, int n_splits, Rng& rng);

struct Lemma1Report {
  int trials = 0;
  int checked = 0;            // trials whose premise held
  int premise_failures = 0;   // trials skipped (must be 0 for covering splits)
  int violations = 0;         // delta != max_i delta_i (must be 0)
  int monotonicity_violations = 0;  // some delta_i > delta (must be 0)
  int delta_one = 0;          // sentence errors seen, for reporting
};

// Random (scores, gold, typesets) trials; one in ten uses an all-zero score
// table and three in ten quantized scores so exact ties are exercised.
Lemma1Report verify_lemma1(int trials, int max_len, int n_types, int n_splits,
                           uint64_t seed);

struct Theorem1Report {
  int sentences = 0;
  int excluded = 0;  // sentences whose no-ambiguity premise failed
  long count_all = 0;
  std::vector<std::string> typeset_names;
  std::vector<long> count_partial;
  double e_all = 0.0;
  double lower = 0.0;  // (sum_i E_i) / N
  double upper = 0.0;  // sum_i E_i
  bool lower_ok = false;  // sum counts <= N * count_all (integer arithmetic)
  bool upper_ok = false;  // count_all <= sum counts
  bool holds() const { return lower_ok && upper_ok; }
};

Theorem1Report verify_theorem1(const Model& model, const Corpus& test,
                               const std::vector<TypeSet>& typesets);

// Random battery: each trial draws a model with i.i.d. uniform [-1,1] weights
// (trial 0 keeps the zero model) and a synthetic corpus, then runs
// verify_theorem1 with a random covering partition.
std::vector<Theorem1Report> verify_theorem1_random(int trials, int max_len,
                                                   int n_types, int n_splits,
                                                   int sentences_per_trial,
                                                   uint64_t seed);

}  // namespace ptner

#endif  // PTNER_THEOREM_HPP_
