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

#include "ptner/eval.hpp"

#include <algorithm>

#include "json.hpp"
#include "ptner/error.hpp"
#include "ptner/util.hpp"

namespace ptner {

double precision_of(const TypeCounts& c) {
  long denom = c.tp + c.fp;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double recall_of(const TypeCounts& c) {
  long denom = c.tp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double f1_of(const TypeCounts& c) {
  double p = precision_of(c);
  double r = recall_of(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

namespace {

nlohmann::json counts_json(const TypeCounts& c) {
  return {{"tp", c.tp},
          {"fp", c.fp},
          {"fn", c.fn},
          {"precision", precision_of(c)},
          {"recall", recall_of(c)},
          {"f1", f1_of(c)}};
}

}  // namespace

std::string report_json(const EvalReport& report) {
  nlohmann::json j;
  j["sentence_count"] = report.sentence_count;
  j["decode_repairs"] = report.decode_repairs;
  j["micro"] = counts_json(report.micro);
  nlohmann::json per_type = nlohmann::json::object();
  for (size_t t = 0; t < report.type_names.size(); ++t) {
    per_type[report.type_names[t]] = counts_json(report.per_type[t]);
  }
  j["per_type"] = std::move(per_type);
  if (report.has_errors) {
    j["e_all"] = report.e_all;
    j["all_errors"] = report.all_errors;
    nlohmann::json partial = nlohmann::json::array();
    for (const auto& entry : report.partial_errors) {
      partial.push_back({{"typeset", entry.name},
                         {"errors", entry.errors},
                         {"rate", entry.rate}});
    }
    j["partial_errors"] = std::move(partial);
  }
  return j.dump(2) + "\n";
}

LabelSeq predict_labels(const FeaturizedSentence& fsent, const Model& model) {
  ScoreTable sc = score_table(fsent, model);
  return viterbi(sc, Lattice::full(sc.length, sc.n_labels)).path;
}

EvalReport f1_report(const Corpus& gold, const std::vector<LabelSeq>& preds) {
  require(preds.size() == gold.sentences.size(),
          "prediction/gold sentence counts differ");
  const LabelSpace& space = gold.space;
  EvalReport report;
  for (const auto& t : space.types()) report.type_names.push_back(t.name);
  report.per_type.assign(static_cast<size_t>(space.num_types()), TypeCounts{});
  report.sentence_count = static_cast<int>(gold.sentences.size());

  for (size_t i = 0; i < preds.size(); ++i) {
    const Sentence& sent = gold.sentences[i];
    require(preds[i].size() == sent.gold.size(),
            "prediction length mismatch at sentence " + std::to_string(i));
    int repairs = 0;
    std::vector<EntitySpan> pred_spans = decode_labels(preds[i], space, &repairs);
    report.decode_repairs += repairs;
    std::vector<EntitySpan> gold_spans = decode_labels(sent.gold, space);
    // Both span lists are sorted and non-overlapping; walk them in lockstep.
    size_t a = 0;
    size_t b = 0;
    while (a < pred_spans.size() || b < gold_spans.size()) {
      if (a == pred_spans.size()) {
        ++report.per_type[static_cast<size_t>(gold_spans[b].type)].fn;
        ++b;
      } else if (b == gold_spans.size()) {
        ++report.per_type[static_cast<size_t>(pred_spans[a].type)].fp;
        ++a;
      } else if (pred_spans[a] == gold_spans[b]) {
        ++report.per_type[static_cast<size_t>(pred_spans[a].type)].tp;
        ++a;
        ++b;
      } else if (pred_spans[a] < gold_spans[b]) {
        ++report.per_type[static_cast<size_t>(pred_spans[a].type)].fp;
        ++a;
      } else {
        ++report.per_type[static_cast<size_t>(gold_spans[b].type)].fn;
        ++b;
      }
    }
  }
  for (const TypeCounts& c : report.per_type) {
    report.micro.tp += c.tp;
    report.micro.fp += c.fp;
    report.micro.fn += c.fn;
  }
  return report;
}

int sentence_error(const ScoreTable& scores, const LabelSeq& gold) {
  Lattice lat = Lattice::singleton(gold, scores.n_labels);
  double gold_score = path_score(scores, gold);
  double best_other = best_score_outside(scores, lat);
  return gold_score <= best_other ? 1 : 0;
}

int sentence_error(const FeaturizedSentence& fsent, const LabelSeq& gold,
                   const Model& model) {
  return sentence_error(score_table(fsent, model), gold);
}

int partial_error(const ScoreTable& scores, const LabelSeq& gold,
                  const TypeSet& typeset, const LabelSpace& space) {
  LabelSeq projected = project_labels(gold, typeset, space);
  Lattice lat = constraint_lattice(projected, typeset, space);
  double best_inside = viterbi(scores, lat).score;
  double best_outside = best_score_outside(scores, lat);
  return best_inside <= best_outside ? 1 : 0;
}

int partial_error(const FeaturizedSentence& fsent, const LabelSeq& gold,
                  const TypeSet& typeset, const Model& model) {
  return partial_error(score_table(fsent, model), gold, typeset, model.space);
}

EvalReport evaluate(const Corpus& test, const Model& model,
                    const std::vector<TypeSet>& partial_typesets,
                    bool with_errors) {
  require(test.space == model.space, "corpus and model label spaces differ");
  const size_t n = test.sentences.size();
  const bool errors = with_errors || !partial_typesets.empty();

  struct Slot {
    LabelSeq pred;
    int err = 0;
    std::vector<int> partial;
  };
  std::vector<Slot> slots(n);
  parallel_for(n, env_thread_count(), [&](size_t i) {
    FeaturizedSentence fsent = extract_features(test.sentences[i], model.vocab);
    ScoreTable sc = score_table(fsent, model);
    slots[i].pred = viterbi(sc, Lattice::full(sc.length, sc.n_labels)).path;
    if (errors) {
      slots[i].err = sentence_error(sc, test.sentences[i].gold);
      slots[i].partial.reserve(partial_typesets.size());
      for (const TypeSet& ts : partial_typesets) {
        slots[i].partial.push_back(
            partial_error(sc, test.sentences[i].gold, ts, model.space));
      }
    }
  });

  std::vector<LabelSeq> preds;
  preds.reserve(n);
  for (Slot& s : slots) preds.push_back(std::move(s.pred));
  EvalReport report = f1_report(test, preds);

  if (errors) {
    report.has_errors = true;
    std::vector<long> partial_counts(partial_typesets.size(), 0);
    for (const Slot& s : slots) {
      report.all_errors += s.err;
      for (size_t k = 0; k < partial_typesets.size(); ++k) {
        partial_counts[k] += s.partial[k];
      }
    }
    double denom = n == 0 ? 1.0 : static_cast<double>(n);
    report.e_all = static_cast<double>(report.all_errors) / denom;
    for (size_t k = 0; k < partial_typesets.size(); ++k) {
      PartialErrorEntry entry;
      entry.typeset = partial_typesets[k];
      entry.name = model.space.typeset_name(partial_typesets[k]);
      entry.errors = partial_counts[k];
      entry.rate = static_cast<double>(partial_counts[k]) / denom;
      report.partial_errors.push_back(std::move(entry));
    }
  }
  return report;
}

}  // namespace ptner
