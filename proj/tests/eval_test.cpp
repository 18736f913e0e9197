// Copyright 2026 The ptner Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "ptner/error.hpp"
#include "ptner/eval.hpp"
#include "ptner/features.hpp"
#include "test_util.hpp"

using namespace ptner;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Enumeration oracle for the sentence-level error: the gold sequence must
// strictly beat every other sequence.
int oracle_sentence_error(const ScoreTable& sc, const LabelSeq& gold) {
  double gold_score = path_score(sc, gold);
  double best_other = -kInf;
  ptest::for_each_sequence(sc.length, sc.n_labels, [&](const LabelSeq& y) {
    if (y == gold) return;
    best_other = std::max(best_other, path_score(sc, y));
  });
  return gold_score <= best_other ? 1 : 0;
}

// Enumeration oracle for the partial error over a constraint lattice.
int oracle_partial_error(const ScoreTable& sc, const LabelSeq& gold,
                         const TypeSet& ts, const LabelSpace& sp) {
  Lattice lat = constraint_lattice(project_labels(gold, ts, sp), ts, sp);
  double inside = -kInf, outside = -kInf;
  ptest::for_each_sequence(sc.length, sc.n_labels, [&](const LabelSeq& y) {
    double s = path_score(sc, y);
    if (ptest::lattice_contains(lat, y)) {
      inside = std::max(inside, s);
    } else {
      outside = std::max(outside, s);
    }
  });
  return inside <= outside ? 1 : 0;
}

}  // namespace

TEST_CASE("precision, recall and F1 handle empty denominators") {
  TypeCounts c;
  CHECK(precision_of(c) == 0.0);
  CHECK(recall_of(c) == 0.0);
  CHECK(f1_of(c) == 0.0);
  c = {3, 1, 2};
  CHECK(precision_of(c) == doctest::Approx(0.75));
  CHECK(recall_of(c) == doctest::Approx(0.6));
  CHECK(f1_of(c) == doctest::Approx(2.0 * 0.75 * 0.6 / 1.35));
}

TEST_CASE("f1_report scores exact span matches") {
  // pred {(0,2,A)} against gold {(0,2,A), (4,4,B)}:
  // precision 1, recall 1/2, micro F1 2/3.
  LabelSpace sp = ptest::space2();
  Corpus gold(sp, "test");
  Sentence s;
  s.tokens = {"a", "b", "c", "d", "e"};
  s.gold = encode_spans({{0, 2, 0}, {4, 4, 1}}, 5, sp);
  s.source_typeset = sp.all_types();
  gold.sentences.push_back(s);

  std::vector<LabelSeq> preds = {encode_spans({{0, 2, 0}}, 5, sp)};
  EvalReport r = f1_report(gold, preds);
  CHECK(r.micro.tp == 1);
  CHECK(r.micro.fp == 0);
  CHECK(r.micro.fn == 1);
  CHECK(precision_of(r.micro) == doctest::Approx(1.0));
  CHECK(recall_of(r.micro) == doctest::Approx(0.5));
  CHECK(r.micro_f1() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  REQUIRE(r.type_names.size() == 2);
  CHECK(r.per_type[0].tp == 1);
  CHECK(r.per_type[1].fn == 1);
  CHECK(r.sentence_count == 1);
  CHECK(r.decode_repairs == 0);
  CHECK(!r.has_errors);
}

TEST_CASE("f1_report requires a span's type to match") {
  LabelSpace sp = ptest::space2();
  Corpus gold(sp, "test");
  Sentence s;
  s.tokens = {"a", "b"};
  s.gold = encode_spans({{0, 1, 0}}, 2, sp);
  s.source_typeset = sp.all_types();
  gold.sentences.push_back(s);
  // Right boundaries, wrong type: one fp and one fn.
  std::vector<LabelSeq> preds = {encode_spans({{0, 1, 1}}, 2, sp)};
  EvalReport r = f1_report(gold, preds);
  CHECK(r.micro.tp == 0);
  CHECK(r.micro.fp == 1);
  CHECK(r.micro.fn == 1);
}

TEST_CASE("f1_report counts decode repairs on ill-formed predictions") {
  LabelSpace sp = ptest::space2();
  Corpus gold(sp, "test");
  Sentence s;
  s.tokens = {"a", "b", "c"};
  s.gold = encode_spans({{0, 1, 0}}, 3, sp);
  s.source_typeset = sp.all_types();
  gold.sentences.push_back(s);
  // Prediction starts a chunk with I: repaired to (0,1,A), still a match.
  std::vector<LabelSeq> preds = {ptest::seq(sp, {"I-A", "E-A", "O"})};
  EvalReport r = f1_report(gold, preds);
  CHECK(r.micro.tp == 1);
  CHECK(r.decode_repairs == 1);
  CHECK_THROWS_AS(f1_report(gold, std::vector<LabelSeq>{}), Error);
}

TEST_CASE("sentence_error counts ties as errors") {
  ScoreTable sc = ptest::zero_scores(2, 9);
  CHECK(sentence_error(sc, LabelSeq({0, 0})) == 1);  // everything ties
  sc.em(0, 4) = 1.0;
  sc.em(1, 0) = 1.0;
  CHECK(sentence_error(sc, LabelSeq({4, 0})) == 0);  // gold strictly best
  CHECK(sentence_error(sc, LabelSeq({0, 0})) == 1);  // gold beaten
}

TEST_CASE("sentence_error matches exhaustive enumeration") {
  Rng rng(211);
  for (int trial = 0; trial < 80; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(4));
    // Quantized scores every third trial force exact ties.
    ScoreTable sc = ptest::random_scores(t_len, 5, rng);
    if (trial % 3 == 0)
      for (double& v : sc.emission)
        v = 0.5 * std::floor(v * 2.0);
    LabelSeq gold;
    for (int t = 0; t < t_len; ++t) gold.push_back(static_cast<int>(rng.uniform_index(5)));
    CHECK(sentence_error(sc, gold) == oracle_sentence_error(sc, gold));
  }
}

TEST_CASE("partial_error matches exhaustive enumeration") {
  LabelSpace sp = ptest::space2();
  Rng rng(223);
  std::vector<TypeSet> typesets = {TypeSet({0}), TypeSet({1}), TypeSet({0, 1})};
  for (int trial = 0; trial < 60; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(3));
    ScoreTable sc = ptest::random_scores(t_len, 9, rng);
    if (trial % 3 == 0)
      for (double& v : sc.emission) v = 0.5 * std::floor(v * 2.0);
    LabelSeq gold;
    for (int t = 0; t < t_len; ++t) gold.push_back(static_cast<int>(rng.uniform_index(9)));
    for (const TypeSet& ts : typesets) {
      CHECK(partial_error(sc, gold, ts, sp) == oracle_partial_error(sc, gold, ts, sp));
    }
  }
}

TEST_CASE("partial_error with the full typeset is the sentence error") {
  LabelSpace sp = ptest::space2();
  Rng rng(227);
  for (int trial = 0; trial < 60; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(4));
    ScoreTable sc = ptest::random_scores(t_len, 9, rng);
    if (trial % 2 == 0)
      for (double& v : sc.emission) v = std::floor(v * 2.0);
    LabelSeq gold;
    for (int t = 0; t < t_len; ++t) gold.push_back(static_cast<int>(rng.uniform_index(9)));
    CHECK(partial_error(sc, gold, sp.all_types(), sp) == sentence_error(sc, gold));
  }
}

TEST_CASE("partial_error is invariant to pre-projecting the gold sequence") {
  LabelSpace sp = ptest::space2();
  Rng rng(229);
  for (int trial = 0; trial < 60; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(4));
    ScoreTable sc = ptest::random_scores(t_len, 9, rng);
    LabelSeq gold;
    for (int t = 0; t < t_len; ++t) gold.push_back(static_cast<int>(rng.uniform_index(9)));
    for (int type = 0; type < 2; ++type) {
      TypeSet ts = TypeSet::single(type);
      LabelSeq projected = project_labels(gold, ts, sp);
      CHECK(partial_error(sc, gold, ts, sp) == partial_error(sc, projected, ts, sp));
    }
  }
}

TEST_CASE("a fully-covering lattice has no outside competitor") {
  // With one type and an empty typeset the lattice admits every sequence,
  // so the partial error is 0 regardless of the scores.
  LabelSpace sp = ptest::space1();
  Rng rng(233);
  ScoreTable sc = ptest::random_scores(3, 5, rng);
  LabelSeq gold(3, 0);
  CHECK(partial_error(sc, gold, TypeSet(), sp) == 0);
}

TEST_CASE("predict_labels decodes the unconstrained argmax") {
  LabelSpace sp = ptest::space1();
  FeatureVocab vocab = FeatureVocab::from_names({"f0", "f1"});
  Model m = Model::zeros(sp, vocab);
  m.emit(0, ptest::lid(sp, "S-A")) = 5.0;
  m.emit(1, 0) = 5.0;
  FeaturizedSentence f;
  f.feats = {{0}, {1}};
  f.gold = {0, 0};
  f.source_typeset = sp.all_types();
  CHECK(predict_labels(f, m) == ptest::seq(sp, {"S-A", "O"}));
}

TEST_CASE("evaluate ties F1 and error rates together on a separable toy") {
  LabelSpace sp = ptest::space2();
  Corpus test(sp, "test");
  for (int i = 0; i < 4; ++i) {
    Sentence s;
    s.tokens = {"anna", "went", "to", "bonn"};
    s.gold = encode_spans({{0, 0, 0}, {3, 3, 1}}, 4, sp);
    s.source_typeset = sp.all_types();
    test.sentences.push_back(s);
  }
  FeatureVocab vocab = build_vocab({&test}, 1);
  Model m = Model::zeros(sp, vocab);
  // Drive the correct labels with large margins on token-identity features.
  m.emit(vocab.lookup("w[0]=anna"), ptest::lid(sp, "S-A")) = 20.0;
  m.emit(vocab.lookup("w[0]=bonn"), ptest::lid(sp, "S-B")) = 20.0;
  m.emit(vocab.lookup("w[0]=went"), 0) = 20.0;
  m.emit(vocab.lookup("w[0]=to"), 0) = 20.0;

  EvalReport r = evaluate(test, m, {TypeSet({0}), TypeSet({1})}, true);
  CHECK(r.micro_f1() == doctest::Approx(1.0));
  CHECK(r.sentence_count == 4);
  CHECK(r.has_errors);
  CHECK(r.all_errors == 0);
  CHECK(r.e_all == 0.0);
  REQUIRE(r.partial_errors.size() == 2);
  CHECK(r.partial_errors[0].name == "A");
  CHECK(r.partial_errors[1].name == "B");
  CHECK(r.partial_errors[0].errors == 0);
  CHECK(r.partial_errors[0].rate == 0.0);

  // The report serializes to valid JSON with the headline numbers.
  nlohmann::json j = nlohmann::json::parse(report_json(r));
  CHECK(j["micro"]["f1"].get<double>() == doctest::Approx(1.0));
  CHECK(j["sentence_count"] == 4);
  CHECK(j["e_all"].get<double>() == 0.0);
  CHECK(j["partial_errors"].size() == 2);

  // The zero model ties everything: every sentence is an error.
  Model z = Model::zeros(sp, vocab);
  EvalReport rz = evaluate(test, z, {}, true);
  CHECK(rz.e_all == doctest::Approx(1.0));
  CHECK(rz.all_errors == 4);
}
