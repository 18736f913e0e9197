// Copyright 2026 The ptner Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "ptner/error.hpp"
#include "ptner/eval.hpp"
#include "ptner/propagate.hpp"
#include "test_util.hpp"

using namespace ptner;

namespace {

// Fully-typed sentences where every surface determines its label: "Ada" and
// "Ava" are A entities, "BIX CORP" is a two-token B entity. Entities never
// start a sentence and the two types have disjoint shapes, so a model trained
// on one fold generalizes cleanly to the other fold's text.
Corpus base_corpus(const LabelSpace& sp, int copies) {
  Corpus c(sp, "train");
  auto add = [&](std::vector<std::string> tokens, std::vector<EntitySpan> spans) {
    Sentence s;
    s.tokens = std::move(tokens);
    s.gold = encode_spans(spans, static_cast<int>(s.tokens.size()), sp);
    s.source_typeset = sp.all_types();
    c.sentences.push_back(std::move(s));
  };
  for (int i = 0; i < copies; ++i) {
    add({"met", "Ada", "slept"}, {{1, 1, 0}});
    add({"saw", "BIX", "CORP", "slept"}, {{1, 2, 1}});
    add({"near", "Ada", "met", "BIX", "CORP"}, {{1, 1, 0}, {3, 4, 1}});
    add({"near", "BIX", "CORP", "Ava"}, {{1, 2, 1}, {3, 3, 0}});
    add({"met", "Ava", "saw"}, {{1, 1, 0}});
    add({"slept", "near", "BIX", "CORP"}, {{2, 3, 1}});
    add({"saw", "Ava", "slept"}, {{1, 1, 0}});
    add({"met", "saw", "BIX", "CORP"}, {{2, 3, 1}});
  }
  return c;
}

// Masks the corpus by hand: fold j keeps only type-j entities, sentences
// split round-robin (the mask_split setting).
std::vector<Corpus> two_folds(const Corpus& full, const LabelSpace& sp) {
  std::vector<Corpus> folds(2, Corpus(sp, "train"));
  for (size_t i = 0; i < full.size(); ++i) {
    int j = static_cast<int>(i % 2);
    Sentence s = full.sentences[i];
    s.gold = project_labels(s.gold, TypeSet::single(j), sp);
    s.source_typeset = TypeSet::single(j);
    folds[static_cast<size_t>(j)].sentences.push_back(std::move(s));
  }
  return folds;
}

// Complementary views: every sentence appears in both folds, each time
// annotated for one type. The per-sentence lattices then intersect in
// exactly the gold sequence, which makes the end-to-end pipeline's optimum
// unique — the right fixture for asserting a perfect dev score.
std::vector<Corpus> two_views(const Corpus& full, const LabelSpace& sp) {
  std::vector<Corpus> folds(2, Corpus(sp, "train"));
  for (size_t i = 0; i < full.size(); ++i) {
    for (int j = 0; j < 2; ++j) {
      Sentence s = full.sentences[i];
      s.gold = project_labels(s.gold, TypeSet::single(j), sp);
      s.source_typeset = TypeSet::single(j);
      folds[static_cast<size_t>(j)].sentences.push_back(std::move(s));
    }
  }
  return folds;
}

TrainConfig fast_config() {
  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.patience = 40;
  cfg.eta0 = 0.2;
  cfg.rho = 0.0;
  cfg.batch_size = 4;
  return cfg;
}

}  // namespace

TEST_CASE("restrict_to_type remaps gold ids onto a one-type space") {
  LabelSpace sp = ptest::space2();
  Corpus fold(sp, "train");
  Sentence s;
  s.tokens = {"bix", "corp", "x"};
  s.gold = ptest::seq(sp, {"B-B", "E-B", "O"});
  s.source_typeset = TypeSet::single(1);
  fold.sentences.push_back(s);

  Corpus narrow = restrict_to_type(fold, 1);
  CHECK(narrow.space.num_types() == 1);
  CHECK(narrow.space.type_name(0) == "B");
  CHECK(narrow.space.num_labels() == 5);
  CHECK(narrow.sentences[0].gold ==
        ptest::seq(narrow.space, {"B-B", "E-B", "O"}));
  CHECK(narrow.sentences[0].source_typeset == TypeSet::single(0));

  // Labels of another type violate the single-type precondition.
  fold.sentences[0].gold = ptest::seq(sp, {"S-A", "O", "O"});
  CHECK_THROWS_AS(restrict_to_type(fold, 1), Error);
}

TEST_CASE("cross_annotate with a single fold propagates nothing") {
  LabelSpace sp = ptest::space2();
  Corpus full = base_corpus(sp, 1);
  std::vector<Corpus> folds = two_folds(full, sp);
  folds.erase(folds.begin() + 1);

  Corpus narrow = restrict_to_type(folds[0], 0);
  FeatureVocab vocab = build_vocab({&narrow}, 1);
  std::vector<Model> models;
  models.push_back(Model::zeros(narrow.space, vocab));

  auto annotated = cross_annotate(folds, models);
  REQUIRE(annotated.size() == 1);
  for (const auto& spans : annotated[0].spans) CHECK(spans.empty());
}

TEST_CASE("a model that predicts nothing leaves the other fold unchanged") {
  LabelSpace sp = ptest::space2();
  Corpus full = base_corpus(sp, 2);
  std::vector<Corpus> folds = two_folds(full, sp);

  // Zero models decode everything as O (smallest label on ties).
  std::vector<Model> models;
  for (int j = 0; j < 2; ++j) {
    Corpus narrow = restrict_to_type(folds[static_cast<size_t>(j)], j);
    FeatureVocab vocab = build_vocab({&narrow}, 1);
    models.push_back(Model::zeros(narrow.space, vocab));
  }
  auto annotated = cross_annotate(folds, models);
  REQUIRE(annotated.size() == 2);
  for (const auto& pf : annotated)
    for (const auto& spans : pf.spans) CHECK(spans.empty());
}

TEST_CASE("cross_annotate recovers the withheld entities on separable folds") {
  LabelSpace sp = ptest::space2();
  Corpus full = base_corpus(sp, 3);  // 12 sentences, 6 per fold
  std::vector<Corpus> folds = two_folds(full, sp);

  std::vector<Model> models;
  for (int j = 0; j < 2; ++j) {
    Corpus narrow = restrict_to_type(folds[static_cast<size_t>(j)], j);
    Corpus no_dev(narrow.space, "dev");
    TrainResult tr =
        train_regime({&narrow}, no_dev, Regime::kOneType, narrow.space, fast_config());
    models.push_back(std::move(tr.model));
  }

  auto annotated = cross_annotate(folds, models);
  REQUIRE(annotated.size() == 2);
  // Fold j's sentences get exactly the withheld entities of the other type.
  for (int j = 0; j < 2; ++j) {
    const Corpus& fold = folds[static_cast<size_t>(j)];
    int other = 1 - j;
    for (size_t i = 0; i < fold.size(); ++i) {
      // Recompute the withheld truth from the fully-typed original.
      const Sentence* orig = nullptr;
      for (const Sentence& s : full.sentences)
        if (s.tokens == fold.sentences[i].tokens) orig = &s;
      REQUIRE(orig != nullptr);
      std::vector<EntitySpan> expect;
      for (const EntitySpan& es : decode_labels(orig->gold, sp))
        if (es.type == other) expect.push_back(es);

      std::vector<EntitySpan> got;
      for (const PropagatedSpan& ps : annotated[static_cast<size_t>(j)].spans[i]) {
        CHECK(ps.source_model == other);
        CHECK(ps.span.type == other);
        got.push_back(ps.span);
      }
      std::sort(got.begin(), got.end());
      CHECK(got == expect);
    }
  }
}

TEST_CASE("cross_annotate validates fold and model alignment") {
  LabelSpace sp = ptest::space2();
  Corpus full = base_corpus(sp, 1);
  std::vector<Corpus> folds = two_folds(full, sp);
  Corpus narrow0 = restrict_to_type(folds[0], 0);
  FeatureVocab vocab = build_vocab({&narrow0}, 1);
  std::vector<Model> models;
  models.push_back(Model::zeros(narrow0.space, vocab));
  // One model for two folds.
  CHECK_THROWS_AS(cross_annotate(folds, models), Error);
  // Model of the wrong type for fold 1.
  models.push_back(Model::zeros(narrow0.space, vocab));
  CHECK_THROWS_AS(cross_annotate(folds, models), Error);
}

TEST_CASE("merge_constraints narrows O positions to propagated labels plus O") {
  LabelSpace sp = ptest::space2();
  LabelSeq gold = ptest::seq(sp, {"S-A", "O"});
  TypeSet src({0});

  // Partial lattice alone: {S-A} x {O, B-B, I-B, E-B, S-B}.
  MergeResult plain = merge_constraints(gold, src, {}, sp, false);
  CHECK(plain.conflicts == 0);
  CHECK(plain.lattice == constraint_lattice(gold, src, sp));
  CHECK(plain.lattice.sequence_count() == doctest::Approx(5.0));

  // A propagated single-token B entity at position 1 narrows it to {O, S-B}.
  PropagatedSpan ps{{1, 1, 1}, 1};
  MergeResult merged = merge_constraints(gold, src, {ps}, sp, false);
  CHECK(merged.conflicts == 0);
  CHECK(merged.lattice.allowed_count(0) == 1);
  CHECK(merged.lattice.allowed_count(1) == 2);
  CHECK(merged.lattice.allowed(1, ptest::lid(sp, "O")));
  CHECK(merged.lattice.allowed(1, ptest::lid(sp, "S-B")));
  CHECK(merged.lattice.sequence_count() == doctest::Approx(2.0));

  // Hard propagation drops the O escape hatch.
  MergeResult hard = merge_constraints(gold, src, {ps}, sp, true);
  CHECK(hard.lattice.allowed_count(1) == 1);
  CHECK(hard.lattice.allowed(1, ptest::lid(sp, "S-B")));
}

TEST_CASE("merge_constraints spells multi-token spans positionally") {
  LabelSpace sp = ptest::space2();
  LabelSeq gold = ptest::seq(sp, {"O", "O", "O"});
  TypeSet src({0});
  PropagatedSpan ps{{0, 2, 1}, 1};  // three-token B entity
  MergeResult m = merge_constraints(gold, src, {ps}, sp, false);
  CHECK(m.lattice.allowed(0, ptest::lid(sp, "B-B")));
  CHECK(m.lattice.allowed(1, ptest::lid(sp, "I-B")));
  CHECK(m.lattice.allowed(2, ptest::lid(sp, "E-B")));
  CHECK(m.lattice.allowed_count(0) == 2);  // plus O
  CHECK(!m.lattice.allowed(0, ptest::lid(sp, "S-B")));
}

TEST_CASE("merge conflicts keep the unmerged row and gold wins") {
  LabelSpace sp = ptest::space2();
  LabelSeq gold = ptest::seq(sp, {"S-A", "O"});
  TypeSet src({0});
  // A propagated B span on the gold-pinned position cannot merge.
  PropagatedSpan clash{{0, 0, 1}, 1};
  MergeResult m = merge_constraints(gold, src, {clash}, sp, false);
  CHECK(m.conflicts == 1);
  CHECK(m.lattice.allowed_count(0) == 1);
  CHECK(m.lattice.allowed(0, ptest::lid(sp, "S-A")));
  CHECK(m.lattice == constraint_lattice(gold, src, sp));
}

TEST_CASE("overlapping propagated spans union their labels") {
  LabelSpace sp({"A", "B", "C"}, Schema::kIobes);
  LabelSeq gold(2, 0);
  TypeSet src({0});
  PropagatedSpan b{{0, 0, 1}, 1};
  PropagatedSpan c{{0, 1, 2}, 2};
  MergeResult m = merge_constraints(gold, src, {b, c}, sp, false);
  // Position 0: O + S-B + B-C.
  CHECK(m.lattice.allowed_count(0) == 3);
  CHECK(m.lattice.allowed(0, sp.parse_label("S-B")));
  CHECK(m.lattice.allowed(0, sp.parse_label("B-C")));
  CHECK(m.lattice.allowed(0, 0));
  // Position 1: O + E-C.
  CHECK(m.lattice.allowed_count(1) == 2);
}

TEST_CASE("merge_constraints validates spans") {
  LabelSpace sp = ptest::space2();
  LabelSeq gold = ptest::seq(sp, {"S-A", "O"});
  TypeSet src({0});
  CHECK_THROWS_AS(merge_constraints(gold, src, {{{0, 0, 0}, 1}}, sp, false),
                  Error);  // typed inside the source
  CHECK_THROWS_AS(merge_constraints(gold, src, {{{1, 2, 1}, 1}}, sp, false),
                  Error);  // out of range
}

TEST_CASE("soft merges always keep the gold sequence available") {
  LabelSpace sp = ptest::space2();
  Rng rng(311);
  for (int trial = 0; trial < 50; ++trial) {
    int t_len = 2 + static_cast<int>(rng.uniform_index(3));
    TypeSet src = TypeSet::single(static_cast<int>(rng.uniform_index(2)));
    int other = src.contains(0) ? 1 : 0;
    LabelSeq gold(static_cast<size_t>(t_len), 0);
    if (rng.uniform_index(2) == 0) {
      int pos = static_cast<int>(rng.uniform_index(static_cast<size_t>(t_len)));
      gold[static_cast<size_t>(pos)] = sp.label_id(Kind::kS, src.members()[0]);
    }
    std::vector<PropagatedSpan> spans;
    int pos = static_cast<int>(rng.uniform_index(static_cast<size_t>(t_len)));
    spans.push_back({{pos, pos, other}, other});
    MergeResult m = merge_constraints(gold, src, spans, sp, false);
    CHECK(m.lattice.contains(gold));
    // Merged lattice is a sub-lattice of the plain partial lattice.
    Lattice partial = constraint_lattice(gold, src, sp);
    for (int t = 0; t < t_len; ++t)
      for (int l = 0; l < sp.num_labels(); ++l)
        if (m.lattice.allowed(t, l)) CHECK(partial.allowed(t, l));
  }
}

TEST_CASE("propagate_train runs the full pipeline and persists artifacts") {
  LabelSpace sp = ptest::space2();
  Corpus full = base_corpus(sp, 2);
  std::vector<Corpus> folds = two_views(full, sp);
  Corpus dev = base_corpus(sp, 1);
  dev.split_tag = "dev";

  ptest::TempDir dir("prop_work");
  PropagateOptions opt;
  opt.fold_config = fast_config();
  opt.final_config = fast_config();
  opt.work_dir = dir.file("work");

  PropagateResult r = propagate_train(folds, dev, opt);
  CHECK(r.fold_models.size() == 2);
  CHECK(r.fold_models[0].space.type_name(0) == "A");
  CHECK(r.fold_models[1].space.type_name(0) == "B");
  CHECK(r.propagated_spans > 0);
  CHECK(r.conflicts >= 0);
  CHECK(r.final_result.model.space == sp);
  // On this separable toy the pipeline reaches a perfect dev score.
  CHECK(r.final_result.best_dev_f1 == doctest::Approx(1.0));

  namespace fs = std::filesystem;
  CHECK(fs::exists(dir.file("work") + "/fold0.A.model.json"));
  CHECK(fs::exists(dir.file("work") + "/fold0.A.annotated.conll"));
  CHECK(fs::exists(dir.file("work") + "/fold1.B.model.json"));
  CHECK(fs::exists(dir.file("work") + "/fold1.B.annotated.conll"));
}
