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

#include "ptner/objectives.hpp"

#include <cmath>

#include "ptner/error.hpp"

namespace ptner {

GradAccumulator::GradAccumulator(int n_labels)
    : transition(static_cast<size_t>(n_labels) * static_cast<size_t>(n_labels), 0.0),
      start(static_cast<size_t>(n_labels), 0.0),
      stop(static_cast<size_t>(n_labels), 0.0),
      n_labels_(n_labels) {}

void GradAccumulator::clear() {
  slot_of_.clear();
  feat_of_slot_.clear();
  emit_.clear();
  std::fill(transition.begin(), transition.end(), 0.0);
  std::fill(start.begin(), start.end(), 0.0);
  std::fill(stop.begin(), stop.end(), 0.0);
}

double* GradAccumulator::emission_row(int f) {
  auto [it, inserted] = slot_of_.try_emplace(f, static_cast<int>(feat_of_slot_.size()));
  if (inserted) {
    feat_of_slot_.push_back(f);
    emit_.resize(feat_of_slot_.size() * static_cast<size_t>(n_labels_), 0.0);
  }
  return &emit_[static_cast<size_t>(it->second) * static_cast<size_t>(n_labels_)];
}

double GradAccumulator::l2_norm() const {
  double sq = 0.0;
  for (double v : emit_) sq += v * v;
  for (double v : transition) sq += v * v;
  for (double v : start) sq += v * v;
  for (double v : stop) sq += v * v;
  return std::sqrt(sq);
}

void GradAccumulator::scale(double c) {
  for (double& v : emit_) v *= c;
  for (double& v : transition) v *= c;
  for (double& v : start) v *= c;
  for (double& v : stop) v *= c;
}

namespace {

bool singleton_path(const Lattice& lattice, LabelSeq* path) {
  path->assign(static_cast<size_t>(lattice.length()), -1);
  for (int t = 0; t < lattice.length(); ++t) {
    int only = -1;
    for (int l = 0; l < lattice.n_labels(); ++l) {
      if (!lattice.allowed(t, l)) continue;
      if (only != -1) return false;
      only = l;
    }
    if (only == -1) return false;
    (*path)[static_cast<size_t>(t)] = only;
  }
  return true;
}

// Adds sign * E_lattice[feature counts] into grad.
void add_expectations(const FeaturizedSentence& fsent, const Marginals& m,
                      double sign, int n, GradAccumulator* grad) {
  const int t_len = fsent.length();
  std::vector<int> scratch;
  for (int t = 0; t < t_len; ++t) {
    for (int f : active_set(fsent.feats[static_cast<size_t>(t)], scratch)) {
      double* row = grad->emission_row(f);
      for (int l = 0; l < n; ++l) row[l] += sign * m.node_at(t, l, n);
    }
  }
  for (int t = 0; t + 1 < t_len; ++t) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        grad->transition[static_cast<size_t>(a) * static_cast<size_t>(n) +
                         static_cast<size_t>(b)] += sign * m.edge_at(t, a, b, n);
      }
    }
  }
  for (int l = 0; l < n; ++l) {
    grad->start[static_cast<size_t>(l)] += sign * m.node_at(0, l, n);
    grad->stop[static_cast<size_t>(l)] += sign * m.node_at(t_len - 1, l, n);
  }
}

// Adds sign * observed feature counts of `path` into grad.
void add_indicators(const FeaturizedSentence& fsent, const LabelSeq& path,
                    double sign, int n, GradAccumulator* grad) {
  const int t_len = fsent.length();
  std::vector<int> scratch;
  for (int t = 0; t < t_len; ++t) {
    int l = path[static_cast<size_t>(t)];
    for (int f : active_set(fsent.feats[static_cast<size_t>(t)], scratch)) {
      grad->emission_row(f)[l] += sign;
    }
  }
  for (int t = 0; t + 1 < t_len; ++t) {
    grad->transition[static_cast<size_t>(path[static_cast<size_t>(t)]) *
                         static_cast<size_t>(n) +
                     static_cast<size_t>(path[static_cast<size_t>(t + 1)])] += sign;
  }
  grad->start[static_cast<size_t>(path[0])] += sign;
  grad->stop[static_cast<size_t>(path[static_cast<size_t>(t_len - 1)])] += sign;
}

}  // namespace

double lattice_nll(const FeaturizedSentence& fsent, const Model& model,
                   const Lattice& lattice, GradAccumulator* grad) {
  require(fsent.length() == lattice.length(), "lattice/sentence length mismatch");
  ScoreTable sc = score_table(fsent, model);
  const int n = sc.n_labels;
  Lattice full = Lattice::full(sc.length, n);

  double loss;
  LabelSeq path;
  const bool single = singleton_path(lattice, &path);
  if (grad == nullptr) {
    double inside = single ? path_score(sc, path) : log_partition(sc, lattice);
    return log_partition(sc, full) - inside;
  }

  Marginals m_full = marginals(sc, full);
  add_expectations(fsent, m_full, 1.0, n, grad);
  if (single) {
    loss = m_full.log_z - path_score(sc, path);
    add_indicators(fsent, path, -1.0, n, grad);
  } else {
    Marginals m_in = marginals(sc, lattice);
    loss = m_full.log_z - m_in.log_z;
    add_expectations(fsent, m_in, -1.0, n, grad);
  }
  return loss;
}

double standard_nll(const FeaturizedSentence& fsent, const Model& model,
                    GradAccumulator* grad) {
  return lattice_nll(fsent, model,
                     Lattice::singleton(fsent.gold, model.num_labels()), grad);
}

double marginal_nll(const FeaturizedSentence& fsent, const Model& model,
                    GradAccumulator* grad) {
  Lattice lat = constraint_lattice(fsent.gold, fsent.source_typeset, model.space);
  return lattice_nll(fsent, model, lat, grad);
}

}  // namespace ptner
