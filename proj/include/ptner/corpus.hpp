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

#ifndef PTNER_CORPUS_HPP_
#define PTNER_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ptner/labels.hpp"

namespace ptner {

struct Sentence {
  std::vector<std::string> tokens;
  LabelSeq gold;
  // The type set under which this sentence was annotated. Every non-O gold
  // label's type must be a member.
  TypeSet source_typeset;
};

struct Corpus {
  std::vector<Sentence> sentences;
  LabelSpace space;
  std::string split_tag;  // "train" / "dev" / "test" / ""

  Corpus(LabelSpace s, std::string tag = "")
      : space(std::move(s)), split_tag(std::move(tag)) {}
  size_t size() const { return sentences.size(); }
};

// Reads a two-column CoNLL file (token TAB label, blank line between
// sentences, UTF-8). Under an IOBES space, IOB2-style label sequences are
// converted to IOBES on the fly. Unknown label strings raise an Error with
// the offending line number. Sentences get source_typeset = all types.
Corpus read_conll(const std::string& path, const LabelSpace& space);

void write_conll(const Corpus& corpus, const std::string& path);

struct FoldStats {
  int fold = 0;
  std::string type_name;
  size_t sentences = 0;
  size_t entities = 0;
};

struct MaskResult {
  std::vector<Corpus> folds;   // fold j annotated only for type j
  std::vector<FoldStats> stats;
  LabelSpace reduced_space;    // the first n types of the input space
};

// Splits a fully-typed corpus into n single-type folds: sentences are
// shuffled with `seed` (Fisher–Yates) and chunked contiguously, remainder
// going to the earliest folds; fold j keeps only entities of the j-th type
// in canonical order and rewrites everything else to O. Types beyond the
// first n are dropped from the output space entirely.
MaskResult mask_split(const Corpus& corpus, int n_folds, uint64_t seed);

// Seeded uniform sample of s sentences (original order preserved), fully
// annotated but restricted to the first n_types types.
Corpus subsample_standard(const Corpus& corpus, int n_types, size_t s_sentences,
                          uint64_t seed);

// Table-style canonical ordering used by `mask`: the JNLPBA convention when
// the observed type names match that dataset, lexicographic otherwise.
std::vector<std::string> canonical_type_order(std::vector<std::string> names);

// Scans a CoNLL file for the entity type names it uses (order of first use).
std::vector<std::string> scan_conll_types(const std::string& path);

}  // namespace ptner

#endif  // PTNER_CORPUS_HPP_
