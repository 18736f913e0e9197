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

#include "ptner/propagate.hpp"

#include <filesystem>

#include "ptner/error.hpp"
#include "ptner/eval.hpp"
#include "ptner/model_io.hpp"
#include "ptner/util.hpp"

namespace ptner {

namespace {

// The single type a mask fold is annotated for.
int fold_type(const Corpus& fold) {
  require(!fold.sentences.empty(), "empty fold");
  const TypeSet& ts = fold.sentences[0].source_typeset;
  require(ts.size() == 1, "fold is not single-type annotated");
  int type = ts.members()[0];
  for (const Sentence& s : fold.sentences) {
    require(s.source_typeset == ts, "fold mixes source typesets");
  }
  return type;
}

Kind span_kind_at(const EntitySpan& span, int pos) {
  if (span.start == span.end) return Kind::kS;
  if (pos == span.start) return Kind::kB;
  if (pos == span.end) return Kind::kE;
  return Kind::kI;
}

}  // namespace

Corpus restrict_to_type(const Corpus& fold, int type) {
  const LabelSpace& space = fold.space;
  require(type >= 0 && type < space.num_types(), "type index out of range");
  LabelSpace narrow({space.type_name(type)}, space.schema());
  Corpus out(narrow, fold.split_tag);
  out.sentences.reserve(fold.sentences.size());
  for (const Sentence& s : fold.sentences) {
    Sentence ns;
    ns.tokens = s.tokens;
    ns.source_typeset = TypeSet::single(0);
    ns.gold.reserve(s.gold.size());
    for (int label : s.gold) {
      if (label == LabelSpace::kOutside) {
        ns.gold.push_back(LabelSpace::kOutside);
      } else {
        require(space.type_of(label) == type,
                "fold sentence carries an entity outside its own type");
        ns.gold.push_back(narrow.label_id(space.kind_of(label), 0));
      }
    }
    out.sentences.push_back(std::move(ns));
  }
  return out;
}

std::vector<PropagatedFold> cross_annotate(const std::vector<Corpus>& folds,
                                           const std::vector<Model>& models) {
  require(!folds.empty() && folds.size() == models.size(),
          "need one model per fold");
  const LabelSpace& space = folds[0].space;
  std::vector<int> model_type(models.size());
  for (size_t j = 0; j < models.size(); ++j) {
    require(folds[j].space == space, "folds use different label spaces");
    require(models[j].space.num_types() == 1 &&
                models[j].space.schema() == space.schema(),
            "fold model " + std::to_string(j) + " is not a single-type model");
    int tj = space.type_index(models[j].space.type_name(0));
    require(tj >= 0, "fold model type '" + models[j].space.type_name(0) +
                         "' unknown to the folds' label space");
    require(tj == fold_type(folds[j]),
            "fold model " + std::to_string(j) + " does not match its fold's type");
    model_type[j] = tj;
  }

  std::vector<PropagatedFold> out(folds.size());
  for (size_t i = 0; i < folds.size(); ++i) {
    out[i].corpus = &folds[i];
    out[i].spans.assign(folds[i].sentences.size(), {});
    parallel_for(folds[i].sentences.size(), env_thread_count(), [&](size_t k) {
      const Sentence& sent = folds[i].sentences[k];
      for (size_t j = 0; j < models.size(); ++j) {
        if (j == i) continue;
        FeaturizedSentence fsent = extract_features(sent, models[j].vocab);
        LabelSeq pred = predict_labels(fsent, models[j]);
        for (EntitySpan span : decode_labels(pred, models[j].space)) {
          span.type = model_type[j];
          out[i].spans[k].push_back(PropagatedSpan{span, static_cast<int>(j)});
        }
      }
    });
  }
  return out;
}

MergeResult merge_constraints(const LabelSeq& gold, const TypeSet& source,
                              const std::vector<PropagatedSpan>& spans,
                              const LabelSpace& space, bool hard) {
  MergeResult res{constraint_lattice(gold, source, space), 0};
  const int t_len = res.lattice.length();
  std::vector<std::vector<int>> pinned(static_cast<size_t>(t_len));
  for (const PropagatedSpan& ps : spans) {
    const EntitySpan& span = ps.span;
    require(span.start >= 0 && span.start <= span.end && span.end < t_len,
            "propagated span out of range");
    require(!source.contains(span.type),
            "propagated span typed inside the fold's own typeset");
    for (int p = span.start; p <= span.end; ++p) {
      pinned[static_cast<size_t>(p)].push_back(
          space.label_id(span_kind_at(span, p), span.type));
    }
  }
  const int n = space.num_labels();
  std::vector<uint8_t> keep(static_cast<size_t>(n));
  for (int t = 0; t < t_len; ++t) {
    const auto& pins = pinned[static_cast<size_t>(t)];
    if (pins.empty()) continue;
    std::fill(keep.begin(), keep.end(), uint8_t{0});
    if (!hard) keep[LabelSpace::kOutside] = 1;
    for (int label : pins) keep[static_cast<size_t>(label)] = 1;
    bool any = false;
    for (int l = 0; l < n; ++l) {
      if (keep[static_cast<size_t>(l)] && res.lattice.allowed(t, l)) any = true;
    }
    if (!any) {
      ++res.conflicts;  // gold singletons and other unmergeable rows stand
      continue;
    }
    for (int l = 0; l < n; ++l) {
      if (!keep[static_cast<size_t>(l)]) res.lattice.set_allowed(t, l, false);
    }
  }
  return res;
}

namespace {

// Inspection artifact: fold labels with propagated spans written over O runs
// (gold wins; overlapping propagations keep the first writer).
Corpus materialize_annotations(const Corpus& fold, const PropagatedFold& ann) {
  Corpus out = fold;
  for (size_t k = 0; k < out.sentences.size(); ++k) {
    LabelSeq& gold = out.sentences[k].gold;
    for (const PropagatedSpan& ps : ann.spans[k]) {
      bool free = true;
      for (int p = ps.span.start; p <= ps.span.end; ++p) {
        if (gold[static_cast<size_t>(p)] != LabelSpace::kOutside) free = false;
      }
      if (!free) continue;
      for (int p = ps.span.start; p <= ps.span.end; ++p) {
        gold[static_cast<size_t>(p)] =
            fold.space.label_id(span_kind_at(ps.span, p), ps.span.type);
      }
    }
  }
  return out;
}

}  // namespace

PropagateResult propagate_train(const std::vector<Corpus>& folds, const Corpus& dev,
                                const PropagateOptions& options) {
  require(!folds.empty(), "propagate needs at least one fold");
  const LabelSpace& space = folds[0].space;
  require(dev.space == space, "dev corpus label space does not match the folds");
  options.fold_config.validate();
  options.final_config.validate();

  std::vector<Model> fold_models;
  long conflicts = 0;
  long propagated_spans = 0;

  for (size_t j = 0; j < folds.size(); ++j) {
    int tj = fold_type(folds[j]);
    Corpus fold_train = restrict_to_type(folds[j], tj);

    Corpus dev_proj(space, dev.split_tag);
    dev_proj.sentences = dev.sentences;
    for (Sentence& s : dev_proj.sentences) {
      s.gold = project_labels(s.gold, TypeSet::single(tj), space);
      s.source_typeset = TypeSet::single(tj);
    }
    Corpus fold_dev = restrict_to_type(dev_proj, tj);

    TrainConfig cfg = options.fold_config;
    cfg.seed = splitmix64(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (j + 1)));
    cfg.objective = "standard";
    TrainResult tr = train_regime({&fold_train}, fold_dev, Regime::kOneType,
                                  fold_train.space, cfg);
    fold_models.push_back(std::move(tr.model));
  }

  std::vector<PropagatedFold> annotated = cross_annotate(folds, fold_models);
  for (const PropagatedFold& pf : annotated) {
    for (const auto& spans : pf.spans) propagated_spans += static_cast<long>(spans.size());
  }

  if (!options.work_dir.empty()) {
    std::filesystem::create_directories(options.work_dir);
    for (size_t j = 0; j < folds.size(); ++j) {
      std::string stem = options.work_dir + "/fold" + std::to_string(j) + "." +
                         fold_models[j].space.type_name(0);
      save_model(fold_models[j], stem + ".model.json");
      write_conll(materialize_annotations(folds[j], annotated[j]),
                  stem + ".annotated.conll");
    }
  }

  FeatureVocab vocab;
  if (options.final_config.min_feature_count > 1) {
    std::vector<const Corpus*> ptrs;
    for (const Corpus& f : folds) ptrs.push_back(&f);
    vocab = build_vocab(ptrs, options.final_config.min_feature_count);
  }
  const bool grow = !vocab.frozen();
  std::vector<TrainExample> examples;
  for (size_t i = 0; i < folds.size(); ++i) {
    for (size_t k = 0; k < folds[i].sentences.size(); ++k) {
      const Sentence& s = folds[i].sentences[k];
      FeaturizedSentence fsent = extract_features(s, vocab, grow);
      MergeResult merged = merge_constraints(s.gold, s.source_typeset,
                                             annotated[i].spans[k], space,
                                             options.hard);
      conflicts += merged.conflicts;
      examples.push_back(TrainExample{std::move(fsent), std::move(merged.lattice)});
    }
  }
  if (!vocab.frozen()) vocab.freeze();
  return PropagateResult{sgd_train(examples, dev, space, vocab, options.final_config),
                         std::move(fold_models), conflicts, propagated_spans};
}

}  // namespace ptner
