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

#ifndef PTNER_FEATURES_HPP_
#define PTNER_FEATURES_HPP_

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "ptner/corpus.hpp"
#include "ptner/labels.hpp"

namespace ptner {

// Dense feature-string interner. Unfrozen vocabs grow on lookup; frozen
// vocabs drop unknown features.
class FeatureVocab {
 public:
  FeatureVocab() = default;

  int add_or_get(const std::string& name);       // grows; requires !frozen
  int lookup(const std::string& name) const;     // -1 if absent
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  static FeatureVocab from_names(std::vector<std::string> names);

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

struct FeaturizedSentence {
  std::vector<std::vector<int>> feats;  // per position, sorted unique ids
  LabelSeq gold;
  TypeSet source_typeset;

  int length() const { return static_cast<int>(feats.size()); }
};

// Active features have set semantics. extract_features already emits sorted
// unique ids (returned untouched); hand-built duplicates are deduplicated
// into `scratch` so they count once in scores and gradients alike.
inline const std::vector<int>& active_set(const std::vector<int>& ids,
                                          std::vector<int>& scratch) {
  if (std::is_sorted(ids.begin(), ids.end()) &&
      std::adjacent_find(ids.begin(), ids.end()) == ids.end()) {
    return ids;
  }
  scratch.assign(ids.begin(), ids.end());
  std::sort(scratch.begin(), scratch.end());
  scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
  return scratch;
}

// Case/digit pattern: uppercase -> 'A', lowercase -> 'a', digit -> '0',
// anything else kept verbatim ("IL-2" -> "AA-0").
std::string word_shape(const std::string& token);

// Emits token identity for every offset in a +/-1 window around each
// position, plus lowercased token, shape and length-1..3 prefixes and
// suffixes at the center. Positions outside the sentence contribute a
// single BOS/EOS sentinel feature.
FeaturizedSentence extract_features(const Sentence& sentence, FeatureVocab& vocab,
                                    bool grow);
// Lookup-only variant; features absent from the vocabulary are dropped.
FeaturizedSentence extract_features(const Sentence& sentence,
                                    const FeatureVocab& vocab);

std::vector<FeaturizedSentence> featurize_corpus(const Corpus& corpus,
                                                 FeatureVocab& vocab, bool grow);
std::vector<FeaturizedSentence> featurize_corpus(const Corpus& corpus,
                                                 const FeatureVocab& vocab);

// Builds a frozen vocab over all corpora, keeping features seen at least
// min_count times, then featurizes everything against it.
FeatureVocab build_vocab(const std::vector<const Corpus*>& corpora, int min_count);

}  // namespace ptner

#endif  // PTNER_FEATURES_HPP_
