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

#include "ptner/features.hpp"

#include <algorithm>
#include <cctype>

#include "ptner/error.hpp"

namespace ptner {

int FeatureVocab::add_or_get(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  require(!frozen_, "cannot grow a frozen feature vocab");
  int id = static_cast<int>(names_.size());
  ids_.emplace(name, id);
  names_.push_back(name);
  return id;
}

int FeatureVocab::lookup(const std::string& name) const {
  auto it = ids_.find(name);
  return it == ids_.end() ? -1 : it->second;
}

FeatureVocab FeatureVocab::from_names(std::vector<std::string> names) {
  FeatureVocab vocab;
  vocab.names_ = std::move(names);
  vocab.ids_.reserve(vocab.names_.size());
  for (size_t i = 0; i < vocab.names_.size(); ++i) {
    bool inserted = vocab.ids_.emplace(vocab.names_[i], static_cast<int>(i)).second;
    require(inserted, "duplicate feature name: " + vocab.names_[i]);
  }
  vocab.frozen_ = true;
  return vocab;
}

std::string word_shape(const std::string& token) {
  std::string shape;
  shape.reserve(token.size());
  for (char c : token) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isupper(u)) {
      shape.push_back('A');
    } else if (std::islower(u)) {
      shape.push_back('a');
    } else if (std::isdigit(u)) {
      shape.push_back('0');
    } else {
      shape.push_back(c);
    }
  }
  return shape;
}

namespace {

std::string lowercased(const std::string& token) {
  std::string out = token;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

constexpr const char* kBos = "<BOS>";
constexpr const char* kEos = "<EOS>";

// Collects template instances for one (position, offset) pair.
void emit_window(const std::vector<std::string>& tokens, int t, int offset,
                 std::vector<std::string>* out) {
  std::string tag = "[" + std::to_string(offset) + "]=";
  int pos = t + offset;
  if (pos < 0) {
    out->push_back("w" + tag + kBos);
    return;
  }
  if (pos >= static_cast<int>(tokens.size())) {
    out->push_back("w" + tag + kEos);
    return;
  }
  const std::string& u = tokens[static_cast<size_t>(pos)];
  out->push_back("w" + tag + u);
  // Rich templates only fire at the center; off-center context stays
  // identity-only so pinned evidence generalizes across contexts instead
  // of being absorbed into per-neighbor weights.
  if (offset != 0) return;
  out->push_back("lw" + tag + lowercased(u));
  out->push_back("sh" + tag + word_shape(u));
  for (size_t k = 1; k <= 3 && k <= u.size(); ++k) {
    out->push_back("p" + std::to_string(k) + tag + u.substr(0, k));
    out->push_back("s" + std::to_string(k) + tag + u.substr(u.size() - k));
  }
}

}  // namespace

FeaturizedSentence extract_features(const Sentence& sentence, FeatureVocab& vocab,
                                    bool grow) {
  require(!grow || !vocab.frozen(), "grow requested on a frozen vocab");
  FeaturizedSentence out;
  out.gold = sentence.gold;
  out.source_typeset = sentence.source_typeset;
  out.feats.resize(sentence.tokens.size());

  std::vector<std::string> names;
  for (int t = 0; t < static_cast<int>(sentence.tokens.size()); ++t) {
    names.clear();
    for (int offset = -1; offset <= 1; ++offset) {
      emit_window(sentence.tokens, t, offset, &names);
    }
    std::vector<int>& ids = out.feats[static_cast<size_t>(t)];
    ids.reserve(names.size());
    for (const std::string& name : names) {
      int id = grow ? vocab.add_or_get(name) : vocab.lookup(name);
      if (id >= 0) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  return out;
}

FeaturizedSentence extract_features(const Sentence& sentence,
                                    const FeatureVocab& vocab) {
  // grow=false never mutates the vocab, so the cast is safe.
  return extract_features(sentence, const_cast<FeatureVocab&>(vocab), false);
}

std::vector<FeaturizedSentence> featurize_corpus(const Corpus& corpus,
                                                 FeatureVocab& vocab, bool grow) {
  std::vector<FeaturizedSentence> out;
  out.reserve(corpus.size());
  for (const Sentence& s : corpus.sentences) {
    out.push_back(extract_features(s, vocab, grow));
  }
  return out;
}

std::vector<FeaturizedSentence> featurize_corpus(const Corpus& corpus,
                                                 const FeatureVocab& vocab) {
  std::vector<FeaturizedSentence> out;
  out.reserve(corpus.size());
  for (const Sentence& s : corpus.sentences) {
    out.push_back(extract_features(s, vocab));
  }
  return out;
}

FeatureVocab build_vocab(const std::vector<const Corpus*>& corpora, int min_count) {
  if (min_count <= 1) {
    FeatureVocab vocab;
    for (const Corpus* c : corpora) {
      for (const Sentence& s : c->sentences) extract_features(s, vocab, true);
    }
    vocab.freeze();
    return vocab;
  }
  // Two passes: count with a throwaway vocab, then keep the frequent ones.
  FeatureVocab counting;
  std::vector<long> counts;
  for (const Corpus* c : corpora) {
    for (const Sentence& s : c->sentences) {
      FeaturizedSentence f = extract_features(s, counting, true);
      counts.resize(counting.size(), 0);
      for (const auto& ids : f.feats) {
        for (int id : ids) ++counts[static_cast<size_t>(id)];
      }
    }
  }
  FeatureVocab vocab;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] >= min_count) vocab.add_or_get(counting.names()[i]);
  }
  vocab.freeze();
  return vocab;
}

}  // namespace ptner
