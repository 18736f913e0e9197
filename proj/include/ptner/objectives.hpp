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

#ifndef PTNER_OBJECTIVES_HPP_
#define PTNER_OBJECTIVES_HPP_

#include <unordered_map>
#include <vector>

#include "ptner/crf.hpp"

namespace ptner {

// Sparse gradient buffer reused across batches: only emission rows of
// features that actually fired get storage; transition/start/stop are dense.
class GradAccumulator {
 public:
  explicit GradAccumulator(int n_labels);

  void clear();
  // Row of n_labels() entries for feature f, created on first touch.
  double* emission_row(int f);
  double l2_norm() const;
  void scale(double c);

  int n_labels() const { return n_labels_; }
  const std::vector<int>& touched_features() const { return feat_of_slot_; }
  const double* emission_slot(size_t slot) const {
    return &emit_[slot * static_cast<size_t>(n_labels_)];
  }

  std::vector<double> transition;  // L x L
  std::vector<double> start;       // L
  std::vector<double> stop;        // L

 private:
  int n_labels_;
  std::unordered_map<int, int> slot_of_;
  std::vector<int> feat_of_slot_;
  std::vector<double> emit_;  // slots x L
};

// Shared engine: loss = log Z(full) - log Z(lattice); the gradient
// E_full[features] - E_lattice[features] is added into *grad when non-null.
// Singleton lattices take an exact shortcut (path score and indicator
// counts), so the marginal objective reduces to the standard one bit for bit.
double lattice_nll(const FeaturizedSentence& fsent, const Model& model,
                   const Lattice& lattice, GradAccumulator* grad);

// Negative log-likelihood of the gold path (Concat/Standard training).
double standard_nll(const FeaturizedSentence& fsent, const Model& model,
                    GradAccumulator* grad);

// Marginal likelihood over the constraint lattice built from the sentence's
// own source typeset (Partial training).
double marginal_nll(const FeaturizedSentence& fsent, const Model& model,
                    GradAccumulator* grad);

}  // namespace ptner

#endif  // PTNER_OBJECTIVES_HPP_
