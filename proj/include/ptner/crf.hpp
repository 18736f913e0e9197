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

#ifndef PTNER_CRF_HPP_
#define PTNER_CRF_HPP_

#include <vector>

#include "ptner/features.hpp"
#include "ptner/labels.hpp"

namespace ptner {

// Linear-chain CRF parameters. The path score of y decomposes as
//   start[y_0] + sum_t emission(t, y_t) + sum_{t>0} transition(y_{t-1}, y_t)
//   + stop[y_{T-1}]
// with emission(t, l) = sum of emission weights of the features active at t.
// Weights are always finite; the hard-transition mode is a flag applied when
// score tables are built, never baked into the weights.
struct Model {
  LabelSpace space;
  FeatureVocab vocab;
  std::vector<double> emission;    // vocab.size() x L, row-major by feature
  std::vector<double> transition;  // L x L, [from * L + to]
  std::vector<double> start;       // L
  std::vector<double> stop;        // L
  bool hard_transitions = false;

  static Model zeros(LabelSpace space, FeatureVocab vocab);

  int num_labels() const { return space.num_labels(); }
  double emit(int f, int l) const {
    return emission[static_cast<size_t>(f) * static_cast<size_t>(num_labels()) +
                    static_cast<size_t>(l)];
  }
  double& emit(int f, int l) {
    return emission[static_cast<size_t>(f) * static_cast<size_t>(num_labels()) +
                    static_cast<size_t>(l)];
  }
  double trans(int from, int to) const {
    return transition[static_cast<size_t>(from) * static_cast<size_t>(num_labels()) +
                      static_cast<size_t>(to)];
  }
  double& trans(int from, int to) {
    return transition[static_cast<size_t>(from) * static_cast<size_t>(num_labels()) +
                      static_cast<size_t>(to)];
  }
};

// Log-domain scores of one sentence under a model.
struct ScoreTable {
  int length = 0;
  int n_labels = 0;
  std::vector<double> emission;    // T x L
  std::vector<double> transition;  // L x L
  std::vector<double> start;       // L
  std::vector<double> stop;        // L

  ScoreTable() = default;
  ScoreTable(int t, int l)
      : length(t),
        n_labels(l),
        emission(static_cast<size_t>(t) * static_cast<size_t>(l), 0.0),
        transition(static_cast<size_t>(l) * static_cast<size_t>(l), 0.0),
        start(static_cast<size_t>(l), 0.0),
        stop(static_cast<size_t>(l), 0.0) {}

  double em(int t, int l) const {
    return emission[static_cast<size_t>(t) * static_cast<size_t>(n_labels) +
                    static_cast<size_t>(l)];
  }
  double& em(int t, int l) {
    return emission[static_cast<size_t>(t) * static_cast<size_t>(n_labels) +
                    static_cast<size_t>(l)];
  }
  double tr(int from, int to) const {
    return transition[static_cast<size_t>(from) * static_cast<size_t>(n_labels) +
                      static_cast<size_t>(to)];
  }
  double& tr(int from, int to) {
    return transition[static_cast<size_t>(from) * static_cast<size_t>(n_labels) +
                      static_cast<size_t>(to)];
  }
};

// Per-position allowed-label sets. A lattice always represents a product set
// of label sequences; every position keeps at least one allowed label.
class Lattice {
 public:
  Lattice(int length, int n_labels, bool allow_all);
  static Lattice full(int length, int n_labels) {
    return Lattice(length, n_labels, true);
  }
  static Lattice singleton(const LabelSeq& y, int n_labels);

  int length() const { return length_; }
  int n_labels() const { return n_labels_; }
  bool allowed(int t, int l) const {
    return mask_[static_cast<size_t>(t) * static_cast<size_t>(n_labels_) +
                 static_cast<size_t>(l)] != 0;
  }
  void set_allowed(int t, int l, bool on) {
    mask_[static_cast<size_t>(t) * static_cast<size_t>(n_labels_) +
          static_cast<size_t>(l)] = on ? 1 : 0;
  }
  size_t allowed_count(int t) const;
  bool is_full() const;
  bool contains(const LabelSeq& y) const;
  // Product of the per-position counts; may overflow doubles only far beyond
  // anything this library enumerates.
  double sequence_count() const;

  bool operator==(const Lattice& o) const {
    return length_ == o.length_ && n_labels_ == o.n_labels_ && mask_ == o.mask_;
  }

 private:
  int length_;
  int n_labels_;
  std::vector<uint8_t> mask_;
};

double log_sum_exp(const double* v, int n);

// Emission rows summed over each position's active features (set semantics:
// ids are unique per position), transitions copied from the model. Applies
// the hard-transition mask when the model carries it.
ScoreTable score_table(const FeaturizedSentence& fsent, const Model& model);

// Sets scores of transitions that are invalid under the space's schema to
// -inf (also start/stop of labels that cannot begin/end a sequence).
void apply_hard_transitions(ScoreTable& scores, const LabelSpace& space);

// The set of sequences whose projection onto `source` equals the projection
// of `gold`: entity positions of types in `source` are pinned, O positions
// allow O plus every label typed outside `source`.
Lattice constraint_lattice(const LabelSeq& gold, const TypeSet& source,
                           const LabelSpace& space);

double path_score(const ScoreTable& scores, const LabelSeq& y);

// log sum over lattice-consistent sequences of exp(path score).
double log_partition(const ScoreTable& scores, const Lattice& lattice);

struct Marginals {
  double log_z = 0.0;
  std::vector<double> node;  // T x L, rows sum to 1
  std::vector<double> edge;  // (T-1) x L x L

  double node_at(int t, int l, int n_labels) const {
    return node[static_cast<size_t>(t) * static_cast<size_t>(n_labels) +
                static_cast<size_t>(l)];
  }
  double edge_at(int t, int from, int to, int n_labels) const {
    return edge[(static_cast<size_t>(t) * static_cast<size_t>(n_labels) +
                 static_cast<size_t>(from)) *
                    static_cast<size_t>(n_labels) +
                static_cast<size_t>(to)];
  }
};

// Forward-backward restricted to the lattice. Disallowed labels get zero mass.
Marginals marginals(const ScoreTable& scores, const Lattice& lattice);

struct ViterbiResult {
  LabelSeq path;
  double score = 0.0;
};

// Argmax within the lattice; ties broken toward the smaller label id at the
// final position and at every backtracking step.
ViterbiResult viterbi(const ScoreTable& scores, const Lattice& lattice);

// Exact max path score over every sequence that leaves the lattice's allowed
// set in at least one position, via a Viterbi DP carrying a has-deviated bit.
// Returns -inf when the complement is empty.
double best_score_outside(const ScoreTable& scores, const Lattice& lattice);

// Exhaustive-enumeration oracles; reject instances above the size guard
// (L^T <= 10^7). Summation order is leftmost-position-outermost so that path
// scores are bit-identical to the DP accumulation order.
double brute_force_log_partition(const ScoreTable& scores, const Lattice& lattice);
ViterbiResult brute_force_best(const ScoreTable& scores, const Lattice& lattice);
double brute_force_best_outside(const ScoreTable& scores, const Lattice& lattice);
Marginals brute_force_marginals(const ScoreTable& scores, const Lattice& lattice);

}  // namespace ptner

#endif  // PTNER_CRF_HPP_
