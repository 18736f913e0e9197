// Copyright 2026 The ptner Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "ptner/crf.hpp"
#include "ptner/error.hpp"
#include "test_util.hpp"

using namespace ptner;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent per-sequence score. Plain left-to-right sum; only used where a
// tolerance is applied.
double naive_path_score(const ScoreTable& sc, const LabelSeq& y) {
  double s = sc.start[static_cast<size_t>(y[0])] + sc.em(0, y[0]);
  for (int t = 1; t < sc.length; ++t)
    s += sc.tr(y[static_cast<size_t>(t - 1)], y[static_cast<size_t>(t)]) +
         sc.em(t, y[static_cast<size_t>(t)]);
  return s + sc.stop[static_cast<size_t>(y.back())];
}

FeaturizedSentence hand_fsent(std::vector<std::vector<int>> feats, LabelSeq gold,
                              const LabelSpace& sp) {
  FeaturizedSentence f;
  f.feats = std::move(feats);
  f.gold = std::move(gold);
  f.source_typeset = sp.all_types();
  return f;
}

}  // namespace

TEST_CASE("Lattice basics") {
  Lattice full = Lattice::full(3, 9);
  CHECK(full.is_full());
  CHECK(full.allowed_count(1) == 9);
  CHECK(full.sequence_count() == doctest::Approx(729.0));

  LabelSeq y = {4, 0, 2};
  Lattice single = Lattice::singleton(y, 9);
  CHECK(single.contains(y));
  CHECK(!single.contains(LabelSeq({4, 0, 3})));
  CHECK(single.sequence_count() == doctest::Approx(1.0));
  CHECK(single.allowed_count(0) == 1);
  CHECK(!single.is_full());
}

TEST_CASE("score_table of the zero model is all zeros") {
  LabelSpace sp = ptest::space2();
  FeatureVocab vocab = FeatureVocab::from_names({"f0", "f1", "f2"});
  Model m = Model::zeros(sp, vocab);
  FeaturizedSentence f = hand_fsent({{0, 1}, {2}}, {0, 0}, sp);
  ScoreTable sc = score_table(f, m);
  CHECK(sc.length == 2);
  CHECK(sc.n_labels == 9);
  for (double v : sc.emission) CHECK(v == 0.0);
  for (double v : sc.transition) CHECK(v == 0.0);
  for (double v : sc.start) CHECK(v == 0.0);
  for (double v : sc.stop) CHECK(v == 0.0);
}

TEST_CASE("score_table sums active feature weights per label") {
  LabelSpace sp = ptest::space2();
  FeatureVocab vocab = FeatureVocab::from_names({"f0", "f1"});
  Model m = Model::zeros(sp, vocab);
  m.emit(0, 4) = 1.0;   // f0 pushes S-A
  m.emit(1, 4) = 0.5;   // f1 pushes S-A a little
  m.emit(1, 0) = -2.0;  // f1 pulls O down
  m.trans(0, 4) = 0.25;
  m.start[4] = 0.125;
  m.stop[0] = -0.5;

  FeaturizedSentence f = hand_fsent({{0, 1}, {0}}, {4, 0}, sp);
  ScoreTable sc = score_table(f, m);
  CHECK(sc.em(0, 4) == 1.5);  // both features active at position 0
  CHECK(sc.em(0, 0) == -2.0);
  CHECK(sc.em(1, 4) == 1.0);  // only f0 at position 1
  CHECK(sc.em(1, 0) == 0.0);
  CHECK(sc.tr(0, 4) == 0.25);
  CHECK(sc.start[4] == 0.125);
  CHECK(sc.stop[0] == -0.5);
}

TEST_CASE("duplicate active feature ids count once") {
  LabelSpace sp = ptest::space2();
  FeatureVocab vocab = FeatureVocab::from_names({"f0", "f1"});
  Model m = Model::zeros(sp, vocab);
  m.emit(0, 4) = 1.0;
  m.emit(1, 4) = 0.5;

  FeaturizedSentence clean = hand_fsent({{0, 1}}, {4}, sp);
  FeaturizedSentence dups = hand_fsent({{1, 0, 0, 1, 0}}, {4}, sp);
  ScoreTable a = score_table(clean, m);
  ScoreTable b = score_table(dups, m);
  CHECK(a.em(0, 4) == 1.5);
  CHECK(b.em(0, 4) == 1.5);
  CHECK(a.emission == b.emission);
}

TEST_CASE("constraint_lattice pins typed positions and frees O positions") {
  LabelSpace sp = ptest::space2();
  LabelSeq gold = ptest::seq(sp, {"S-A", "O"});
  TypeSet src({0});  // only type A annotated
  Lattice lat = constraint_lattice(gold, src, sp);

  CHECK(lat.allowed_count(0) == 1);
  CHECK(lat.allowed(0, ptest::lid(sp, "S-A")));
  // O position admits O plus every label of the unannotated type B.
  CHECK(lat.allowed_count(1) == 5);
  CHECK(lat.allowed(1, ptest::lid(sp, "O")));
  CHECK(lat.allowed(1, ptest::lid(sp, "B-B")));
  CHECK(lat.allowed(1, ptest::lid(sp, "S-B")));
  CHECK(!lat.allowed(1, ptest::lid(sp, "S-A")));
  CHECK(!lat.allowed(1, ptest::lid(sp, "I-A")));
  CHECK(lat.sequence_count() == doctest::Approx(5.0));
}

TEST_CASE("constraint_lattice matches its projection semantics exactly") {
  // y is in the lattice iff projecting y onto the source typeset reproduces
  // the projected gold. Exhaustive over all 9^3 sequences.
  LabelSpace sp = ptest::space2();
  std::vector<TypeSet> sources = {TypeSet({0}), TypeSet({1}), TypeSet({0, 1}), TypeSet()};
  std::vector<LabelSeq> golds = {
      ptest::seq(sp, {"S-A", "O", "O"}),
      ptest::seq(sp, {"B-B", "E-B", "O"}),
      ptest::seq(sp, {"O", "O", "O"}),
  };
  for (const LabelSeq& gold : golds) {
    for (const TypeSet& src : sources) {
      bool ok = true;
      for (int g : gold)
        if (g != 0 && !src.contains(sp.type_of(g))) ok = false;
      if (!ok) continue;  // precondition violated; covered below
      Lattice lat = constraint_lattice(gold, src, sp);
      LabelSeq pgold = project_labels(gold, src, sp);
      ptest::for_each_sequence(3, 9, [&](const LabelSeq& y) {
        bool member = project_labels(y, src, sp) == pgold;
        CHECK(lat.contains(y) == member);
      });
    }
  }
}

TEST_CASE("constraint_lattice with all types annotated is the singleton") {
  LabelSpace sp = ptest::space2();
  LabelSeq gold = ptest::seq(sp, {"B-A", "E-A", "O", "S-B"});
  Lattice lat = constraint_lattice(gold, sp.all_types(), sp);
  CHECK(lat == Lattice::singleton(gold, sp.num_labels()));
}

TEST_CASE("constraint_lattice rejects gold typed outside the source") {
  LabelSpace sp = ptest::space2();
  LabelSeq gold = ptest::seq(sp, {"S-B", "O"});
  CHECK_THROWS_AS(constraint_lattice(gold, TypeSet({0}), sp), Error);
  CHECK_THROWS_AS(constraint_lattice({99, 0}, TypeSet({0}), sp), Error);
}

TEST_CASE("path_score decomposes into start, emissions, transitions, stop") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(5));
    ScoreTable sc = ptest::random_scores(t_len, 9, rng);
    LabelSeq y;
    for (int t = 0; t < t_len; ++t) y.push_back(static_cast<int>(rng.uniform_index(9)));
    CHECK(path_score(sc, y) == doctest::Approx(naive_path_score(sc, y)).epsilon(1e-12));
  }
}

TEST_CASE("log_partition of zero scores counts sequences") {
  // Full lattice: 9^2 = 81 equally weighted sequences.
  ScoreTable sc = ptest::zero_scores(2, 9);
  CHECK(log_partition(sc, Lattice::full(2, 9)) ==
        doctest::Approx(std::log(81.0)).epsilon(1e-12));

  // The Partial lattice of ([S-A, O], {A}) keeps 5 sequences.
  LabelSpace sp = ptest::space2();
  Lattice lat = constraint_lattice(ptest::seq(sp, {"S-A", "O"}), TypeSet({0}), sp);
  CHECK(log_partition(sc, lat) == doctest::Approx(std::log(5.0)).epsilon(1e-12));

  // Singleton: exactly one sequence.
  CHECK(log_partition(sc, Lattice::singleton({0, 0}, 9)) == 0.0);
}

TEST_CASE("log_partition agrees with brute-force enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(4));
    int n_labels = trial % 2 == 0 ? 5 : 9;
    ScoreTable sc = ptest::random_scores(t_len, n_labels, rng, -2.0, 2.0);
    Lattice lat = trial % 3 == 0 ? Lattice::full(t_len, n_labels)
                                 : ptest::random_lattice(t_len, n_labels, rng);
    double dp = log_partition(sc, lat);
    double brute = brute_force_log_partition(sc, lat);
    CHECK(dp == doctest::Approx(brute).epsilon(1e-10));
  }
}

TEST_CASE("log_partition shifts by a constant under emission shifts") {
  Rng rng(13);
  ScoreTable sc = ptest::random_scores(4, 9, rng);
  Lattice lat = ptest::random_lattice(4, 9, rng);
  double before = log_partition(sc, lat);
  const double c = 0.7;
  for (int l = 0; l < 9; ++l) sc.em(2, l) += c;
  CHECK(log_partition(sc, lat) == doctest::Approx(before + c).epsilon(1e-12));
}

TEST_CASE("complementary lattices partition the full mass") {
  Rng rng(17);
  ScoreTable sc = ptest::random_scores(3, 5, rng);
  Lattice a = Lattice::full(3, 5);
  Lattice b = Lattice::full(3, 5);
  // Split on position 1: a allows labels {0,1}, b the rest.
  for (int l = 0; l < 5; ++l) {
    a.set_allowed(1, l, l <= 1);
    b.set_allowed(1, l, l > 1);
  }
  double z = std::exp(log_partition(sc, Lattice::full(3, 5)));
  double za = std::exp(log_partition(sc, a));
  double zb = std::exp(log_partition(sc, b));
  CHECK(za + zb == doctest::Approx(z).epsilon(1e-12));
}

TEST_CASE("marginals of a singleton lattice are indicators") {
  Rng rng(19);
  ScoreTable sc = ptest::random_scores(3, 9, rng);
  LabelSeq y = {4, 0, 7};
  Marginals m = marginals(sc, Lattice::singleton(y, 9));
  for (int t = 0; t < 3; ++t)
    for (int l = 0; l < 9; ++l)
      CHECK(m.node_at(t, l, 9) ==
            doctest::Approx(l == y[static_cast<size_t>(t)] ? 1.0 : 0.0).epsilon(1e-12));
  for (int t = 0; t < 2; ++t)
    CHECK(m.edge_at(t, y[static_cast<size_t>(t)], y[static_cast<size_t>(t + 1)], 9) ==
          doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.log_z == doctest::Approx(path_score(sc, y)).epsilon(1e-12));
}

TEST_CASE("marginals of zero scores are uniform") {
  ScoreTable sc = ptest::zero_scores(2, 9);
  Marginals m = marginals(sc, Lattice::full(2, 9));
  for (int t = 0; t < 2; ++t)
    for (int l = 0; l < 9; ++l)
      CHECK(m.node_at(t, l, 9) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b)
      CHECK(m.edge_at(0, a, b, 9) == doctest::Approx(1.0 / 81.0).epsilon(1e-12));
}

TEST_CASE("marginal rows sum to one, disallowed mass is zero") {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(4));
    ScoreTable sc = ptest::random_scores(t_len, 9, rng);
    Lattice lat = ptest::random_lattice(t_len, 9, rng);
    Marginals m = marginals(sc, lat);
    for (int t = 0; t < t_len; ++t) {
      double row = 0.0;
      for (int l = 0; l < 9; ++l) {
        double p = m.node_at(t, l, 9);
        CHECK(p >= 0.0);
        if (!lat.allowed(t, l)) CHECK(p == 0.0);
        row += p;
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Edge marginals are consistent with node marginals.
    for (int t = 0; t + 1 < t_len; ++t) {
      for (int a = 0; a < 9; ++a) {
        double s = 0.0;
        for (int b = 0; b < 9; ++b) s += m.edge_at(t, a, b, 9);
        CHECK(s == doctest::Approx(m.node_at(t, a, 9)).epsilon(1e-10));
      }
      for (int b = 0; b < 9; ++b) {
        double s = 0.0;
        for (int a = 0; a < 9; ++a) s += m.edge_at(t, a, b, 9);
        CHECK(s == doctest::Approx(m.node_at(t + 1, b, 9)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("marginals agree with brute-force enumeration") {
  Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(3));
    ScoreTable sc = ptest::random_scores(t_len, 5, rng, -2.0, 2.0);
    Lattice lat = ptest::random_lattice(t_len, 5, rng);
    Marginals dp = marginals(sc, lat);
    Marginals bf = brute_force_marginals(sc, lat);
    CHECK(dp.log_z == doctest::Approx(bf.log_z).epsilon(1e-10));
    for (size_t i = 0; i < dp.node.size(); ++i)
      CHECK(dp.node[i] == doctest::Approx(bf.node[i]).epsilon(1e-10));
    for (size_t i = 0; i < dp.edge.size(); ++i)
      CHECK(dp.edge[i] == doctest::Approx(bf.edge[i]).epsilon(1e-10));
  }
}

TEST_CASE("viterbi breaks ties toward the smallest label id") {
  ScoreTable sc = ptest::zero_scores(3, 9);
  ViterbiResult r = viterbi(sc, Lattice::full(3, 9));
  CHECK(r.path == LabelSeq({0, 0, 0}));  // all-O
  CHECK(r.score == 0.0);
}

TEST_CASE("viterbi follows emission evidence") {
  LabelSpace sp = ptest::space2();
  ScoreTable sc = ptest::zero_scores(2, 9);
  sc.em(0, ptest::lid(sp, "S-A")) = 2.0;
  sc.em(1, ptest::lid(sp, "S-B")) = 1.0;
  ViterbiResult r = viterbi(sc, Lattice::full(2, 9));
  CHECK(r.path == ptest::seq(sp, {"S-A", "S-B"}));
  CHECK(r.score == 3.0);
}

TEST_CASE("viterbi matches brute force and stays in the lattice") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(4));
    ScoreTable sc = ptest::random_scores(t_len, 9, rng);
    Lattice lat = trial % 4 == 0 ? Lattice::full(t_len, 9)
                                 : ptest::random_lattice(t_len, 9, rng);
    ViterbiResult dp = viterbi(sc, lat);
    ViterbiResult bf = brute_force_best(sc, lat);
    // Scores are bit-exact by shared accumulation order; paths may differ
    // only between equal-scoring optima.
    CHECK(dp.score == bf.score);
    CHECK(lat.contains(dp.path));
    CHECK(path_score(sc, dp.path) == dp.score);
    CHECK(log_partition(sc, lat) >= dp.score - 1e-12);
  }
}

TEST_CASE("viterbi is deterministic") {
  Rng rng(37);
  ScoreTable sc = ptest::random_scores(5, 9, rng);
  Lattice lat = ptest::random_lattice(5, 9, rng);
  ViterbiResult a = viterbi(sc, lat);
  ViterbiResult b = viterbi(sc, lat);
  CHECK(a.path == b.path);
  CHECK(a.score == b.score);
}

TEST_CASE("best_score_outside of a singleton covers everything else") {
  ScoreTable sc = ptest::zero_scores(2, 9);
  Lattice single = Lattice::singleton({0, 0}, 9);
  // All 80 other sequences also score 0.
  CHECK(best_score_outside(sc, single) == 0.0);
  // Complement of the full lattice is empty.
  CHECK(best_score_outside(sc, Lattice::full(2, 9)) == -kInf);
}

TEST_CASE("best_score_outside matches the brute-force complement") {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(4));
    int n_labels = trial % 2 == 0 ? 5 : 9;
    ScoreTable sc = ptest::random_scores(t_len, n_labels, rng);
    Lattice lat = trial % 5 == 0 ? Lattice::full(t_len, n_labels)
                                 : ptest::random_lattice(t_len, n_labels, rng);
    CHECK(best_score_outside(sc, lat) == brute_force_best_outside(sc, lat));
  }
}

TEST_CASE("inside and outside optima together give the global optimum") {
  Rng rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    int t_len = 1 + static_cast<int>(rng.uniform_index(5));
    ScoreTable sc = ptest::random_scores(t_len, 9, rng);
    Lattice lat = ptest::random_lattice(t_len, 9, rng);
    double inside = viterbi(sc, lat).score;
    double outside = best_score_outside(sc, lat);
    double global = viterbi(sc, Lattice::full(t_len, 9)).score;
    CHECK(std::max(inside, outside) == global);
  }
}

TEST_CASE("hard transitions keep exactly the schema-valid sequences") {
  LabelSpace sp = ptest::space1();  // O, B-A, I-A, E-A, S-A
  ScoreTable sc = ptest::zero_scores(2, 5);
  apply_hard_transitions(sc, sp);

  CHECK(sc.tr(ptest::lid(sp, "B-A"), ptest::lid(sp, "E-A")) == 0.0);
  CHECK(sc.tr(ptest::lid(sp, "O"), ptest::lid(sp, "I-A")) == -kInf);
  CHECK(sc.tr(ptest::lid(sp, "B-A"), ptest::lid(sp, "B-A")) == -kInf);
  CHECK(sc.start[static_cast<size_t>(ptest::lid(sp, "I-A"))] == -kInf);
  CHECK(sc.start[static_cast<size_t>(ptest::lid(sp, "O"))] == 0.0);
  CHECK(sc.stop[static_cast<size_t>(ptest::lid(sp, "B-A"))] == -kInf);

  // Valid length-2 sequences: OO, O S, S O, S S, B E -> log 5.
  CHECK(log_partition(sc, Lattice::full(2, 5)) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-12));
  ViterbiResult r = viterbi(sc, Lattice::full(2, 5));
  CHECK(r.score == 0.0);
  CHECK(r.path == LabelSeq({0, 0}));
  // Brute force agrees under -inf scores too.
  CHECK(brute_force_log_partition(sc, Lattice::full(2, 5)) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("a model's hard_transitions flag reaches its score tables") {
  LabelSpace sp = ptest::space1();
  FeatureVocab vocab = FeatureVocab::from_names({"f0"});
  Model m = Model::zeros(sp, vocab);
  m.hard_transitions = true;
  FeaturizedSentence f = hand_fsent({{0}, {0}}, {0, 0}, sp);
  ScoreTable sc = score_table(f, m);
  CHECK(sc.tr(ptest::lid(sp, "O"), ptest::lid(sp, "I-A")) == -kInf);
  CHECK(log_partition(sc, Lattice::full(2, 5)) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("brute-force oracles reject oversized instances") {
  ScoreTable sc = ptest::zero_scores(12, 9);  // 9^12 > 1e7
  CHECK_THROWS_AS(brute_force_log_partition(sc, Lattice::full(12, 9)), Error);
}

TEST_CASE("log_sum_exp handles -inf and extremes") {
  double v1[] = {-kInf, -kInf};
  CHECK(log_sum_exp(v1, 2) == -kInf);
  double v2[] = {0.0, -kInf};
  CHECK(log_sum_exp(v2, 2) == 0.0);
  double v3[] = {1000.0, 1000.0};
  CHECK(log_sum_exp(v3, 2) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-12));
  double v4[] = {-1.0, -2.0, -3.0};
  CHECK(log_sum_exp(v4, 3) ==
        doctest::Approx(std::log(std::exp(-1.0) + std::exp(-2.0) + std::exp(-3.0)))
            .epsilon(1e-12));
}
