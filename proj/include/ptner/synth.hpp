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

#ifndef PTNER_SYNTH_HPP_
#define PTNER_SYNTH_HPP_

#include <cstdint>
#include <string>

#include "ptner/corpus.hpp"

namespace ptner {

// Three-type corpus generator. Entities are separable from surface features
// (per-type lexicons) and context (per-type trigger words), with two noise
// sources: surfaces shared across types that are only typed by their trigger,
// and triggers that are sometimes dropped, leaving the type irrecoverable.
struct SynthConfig {
  int train_sentences = 2400;
  int dev_sentences = 800;
  int test_sentences = 1600;
  uint64_t seed = 7;
  int min_len = 6;
  int max_len = 12;
  // Probability that a shared-pool entity loses its disambiguating trigger.
  double trigger_drop = 0.45;
  // Probability that an emitted trigger comes from the wrong type, so
  // triggers are a strong but fallible cue.
  double trigger_confusion = 0.1;
  // Probability that an entity surface comes from the cross-type shared pool.
  double ambiguous_fraction = 0.4;
  // Probability that a filler position carries a capitalized non-entity.
  double distractor_rate = 0.08;
  int lexicon_size = 24;  // per-type entity surfaces
  int shared_size = 16;   // shared ambiguous surfaces

  void validate() const;
  std::string to_json() const;
  static SynthConfig from_json_text(const std::string& text);
  static SynthConfig from_file(const std::string& path);
};

struct SynthResult {
  Corpus train;
  Corpus dev;
  Corpus test;
};

SynthResult generate_synthetic(const SynthConfig& config);

}  // namespace ptner

#endif  // PTNER_SYNTH_HPP_
