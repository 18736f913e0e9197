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

#include "ptner/theorem.hpp"

#include <algorithm>
#include <numeric>

#include "ptner/error.hpp"
#include "ptner/eval.hpp"
#include "ptner/features.hpp"

namespace ptner {

bool check_no_ambiguity(const LabelSeq& gold, const std::vector<TypeSet>& typesets,
                        const LabelSpace& space) {
  require(!typesets.empty(), "need at least one typeset");
  const int t_len = static_cast<int>(gold.size());
  const int n = space.num_labels();
  std::vector<uint8_t> allowed(static_cast<size_t>(t_len) * static_cast<size_t>(n), 1);
  for (const TypeSet& ts : typesets) {
    LabelSeq projected = project_labels(gold, ts, space);
    Lattice lat = constraint_lattice(projected, ts, space);
    for (int t = 0; t < t_len; ++t) {
      for (int l = 0; l < n; ++l) {
        if (!lat.allowed(t, l)) {
          allowed[static_cast<size_t>(t) * static_cast<size_t>(n) +
                  static_cast<size_t>(l)] = 0;
        }
      }
    }
  }
  for (int t = 0; t < t_len; ++t) {
    int count = 0;
    for (int l = 0; l < n; ++l) {
      count += allowed[static_cast<size_t>(t) * static_cast<size_t>(n) +
                       static_cast<size_t>(l)];
    }
    if (count != 1) return false;
  }
  return true;
}

std::vector<TypeSet> random_partition(int n_types, int n_splits, Rng& rng) {
  require(n_splits >= 1 && n_splits <= n_types,
          "need 1 <= n_splits <= n_types for a covering partition");
  std::vector<int> perm(static_cast<size_t>(n_types));
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  std::vector<std::vector<int>> groups(static_cast<size_t>(n_splits));
  for (int i = 0; i < n_types; ++i) {
    size_t g = i < n_splits ? static_cast<size_t>(i)
                            : rng.uniform_index(static_cast<size_t>(n_splits));
    groups[g].push_back(perm[static_cast<size_t>(i)]);
  }
  std::vector<TypeSet> out;
  out.reserve(groups.size());
  for (auto& g : groups) out.emplace_back(std::move(g));
  return out;
}

namespace {

std::vector<std::string> generic_type_names(int n_types) {
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(n_types));
  for (int i = 1; i <= n_types; ++i) names.push_back("T" + std::to_string(i));
  return names;
}

// Scores drawn uniform, on a coarse grid (frequent exact ties), or all zero.
void fill_scores(ScoreTable* sc, Rng* rng, int mode) {
  auto draw = [&](double& slot) {
    if (mode == 0) {
      slot = 0.0;
    } else if (mode == 1) {
      slot = 0.5 * (static_cast<double>(rng->uniform_index(5)) - 2.0);
    } else {
      slot = rng->uniform(-1.0, 1.0);
    }
  };
  for (double& v : sc->emission) draw(v);
  for (double& v : sc->transition) draw(v);
  for (double& v : sc->start) draw(v);
  for (double& v : sc->stop) draw(v);
}

}  // namespace

Lemma1Report verify_lemma1(int trials, int max_len, int n_types, int n_splits,
                           uint64_t seed) {
  require(trials >= 1 && max_len >= 1, "need positive trials and max_len");
  LabelSpace space(generic_type_names(n_types), Schema::kIobes);
  const int n = space.num_labels();

  Lemma1Report report;
  report.trials = trials;
  Rng master(seed);
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = master.fork(static_cast<uint64_t>(trial));
    const int t_len = 1 + static_cast<int>(rng.uniform_index(static_cast<size_t>(max_len)));
    ScoreTable sc(t_len, n);
    const int mode = trial % 10 == 0 ? 0 : (trial % 10 <= 3 ? 1 : 2);
    fill_scores(&sc, &rng, mode);
    LabelSeq gold(static_cast<size_t>(t_len));
    for (int& g : gold) g = static_cast<int>(rng.uniform_index(static_cast<size_t>(n)));
    std::vector<TypeSet> typesets = random_partition(n_types, n_splits, rng);

    if (!check_no_ambiguity(gold, typesets, space)) {
      ++report.premise_failures;
      continue;
    }
    ++report.checked;
    const int delta = sentence_error(sc, gold);
    int max_partial = 0;
    for (const TypeSet& ts : typesets) {
      const int di = partial_error(sc, gold, ts, space);
      max_partial = std::max(max_partial, di);
      if (di > delta) ++report.monotonicity_violations;
    }
    if (delta != max_partial) ++report.violations;
    report.delta_one += delta;
  }
  return report;
}

Theorem1Report verify_theorem1(const Model& model, const Corpus& test,
                               const std::vector<TypeSet>& typesets) {
  require(test.space == model.space, "corpus and model label spaces differ");
  require(!typesets.empty(), "need at least one typeset");
  const size_t n_sent = test.sentences.size();
  const size_t n_sets = typesets.size();

  struct Slot {
    bool excluded = false;
    int err = 0;
    std::vector<int> partial;
  };
  std::vector<Slot> slots(n_sent);
  parallel_for(n_sent, env_thread_count(), [&](size_t i) {
    const Sentence& sent = test.sentences[i];
    if (!check_no_ambiguity(sent.gold, typesets, model.space)) {
      slots[i].excluded = true;
      return;
    }
    FeaturizedSentence fsent = extract_features(sent, model.vocab);
    ScoreTable sc = score_table(fsent, model);
    slots[i].err = sentence_error(sc, sent.gold);
    slots[i].partial.reserve(n_sets);
    for (const TypeSet& ts : typesets) {
      slots[i].partial.push_back(partial_error(sc, sent.gold, ts, model.space));
    }
  });

  Theorem1Report report;
  report.count_partial.assign(n_sets, 0);
  for (const TypeSet& ts : typesets) {
    report.typeset_names.push_back(model.space.typeset_name(ts));
  }
  for (const Slot& s : slots) {
    if (s.excluded) {
      ++report.excluded;
      continue;
    }
    ++report.sentences;
    report.count_all += s.err;
    for (size_t k = 0; k < n_sets; ++k) report.count_partial[k] += s.partial[k];
  }

  const long n_splits = static_cast<long>(n_sets);
  const long sum_partial =
      std::accumulate(report.count_partial.begin(), report.count_partial.end(), 0L);
  report.lower_ok = sum_partial <= n_splits * report.count_all;
  report.upper_ok = report.count_all <= sum_partial;
  if (report.sentences > 0) {
    const double denom = static_cast<double>(report.sentences);
    report.e_all = static_cast<double>(report.count_all) / denom;
    report.upper = static_cast<double>(sum_partial) / denom;
    report.lower = report.upper / static_cast<double>(n_splits);
  }
  return report;
}

std::vector<Theorem1Report> verify_theorem1_random(int trials, int max_len,
                                                   int n_types, int n_splits,
                                                   int sentences_per_trial,
                                                   uint64_t seed) {
  require(trials >= 1 && sentences_per_trial >= 1, "need positive trial sizes");
  LabelSpace space(generic_type_names(n_types), Schema::kIobes);
  const int n = space.num_labels();

  std::vector<Theorem1Report> reports;
  reports.reserve(static_cast<size_t>(trials));
  Rng master(seed);
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = master.fork(static_cast<uint64_t>(trial) + 0x7001);
    Corpus corpus(space, "synthetic");
    for (int i = 0; i < sentences_per_trial; ++i) {
      Sentence s;
      const int t_len = 1 + static_cast<int>(rng.uniform_index(static_cast<size_t>(max_len)));
      for (int t = 0; t < t_len; ++t) {
        s.tokens.push_back("w" + std::to_string(rng.uniform_index(20)));
        s.gold.push_back(static_cast<int>(rng.uniform_index(static_cast<size_t>(n))));
      }
      s.source_typeset = space.all_types();
      corpus.sentences.push_back(std::move(s));
    }
    FeatureVocab vocab = build_vocab({&corpus}, 1);
    Model model = Model::zeros(space, vocab);
    if (trial != 0) {  // trial 0 keeps the all-ties zero model
      for (double& w : model.emission) w = rng.uniform(-1.0, 1.0);
      for (double& w : model.transition) w = rng.uniform(-1.0, 1.0);
      for (double& w : model.start) w = rng.uniform(-1.0, 1.0);
      for (double& w : model.stop) w = rng.uniform(-1.0, 1.0);
    }
    std::vector<TypeSet> typesets = random_partition(n_types, n_splits, rng);
    reports.push_back(verify_theorem1(model, corpus, typesets));
  }
  return reports;
}

}  // namespace ptner
