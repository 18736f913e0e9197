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

#include "ptner/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>

#include "ptner/error.hpp"
#include "ptner/util.hpp"

namespace ptner {

namespace {

// IOB2 -> IOBES on label ids; identity on sequences that are already
// well-formed IOBES.
void to_iobes_inplace(LabelSeq& labels, const LabelSpace& space) {
  int n = static_cast<int>(labels.size());
  for (int t = 0; t < n; ++t) {
    int label = labels[static_cast<size_t>(t)];
    if (label == LabelSpace::kOutside) continue;
    Kind k = space.kind_of(label);
    if (k != Kind::kB && k != Kind::kI) continue;
    bool continued = false;
    if (t + 1 < n) {
      int next = labels[static_cast<size_t>(t + 1)];
      if (next != LabelSpace::kOutside &&
          space.type_of(next) == space.type_of(label)) {
        Kind nk = space.kind_of(next);
        continued = (nk == Kind::kI || nk == Kind::kE);
      }
    }
    if (!continued) {
      labels[static_cast<size_t>(t)] =
          space.label_id(k == Kind::kB ? Kind::kS : Kind::kE, space.type_of(label));
    }
  }
}

void split_line(const std::string& line, size_t line_no, const std::string& path,
                std::string* token, std::string* label) {
  size_t pos = line.find_last_of('\t');
  if (pos == std::string::npos) pos = line.find_last_of(' ');
  require(pos != std::string::npos && pos > 0 && pos + 1 < line.size(),
          path + ":" + std::to_string(line_no) +
              ": expected 'token<TAB>label'");
  *token = line.substr(0, pos);
  *label = line.substr(pos + 1);
}

}  // namespace

Corpus read_conll(const std::string& path, const LabelSpace& space) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path);

  Corpus corpus(space);
  TypeSet all = space.all_types();
  std::vector<std::string> tokens;
  LabelSeq labels;

  auto flush = [&]() {
    if (tokens.empty()) return;
    if (space.schema() == Schema::kIobes) to_iobes_inplace(labels, space);
    corpus.sentences.push_back(Sentence{std::move(tokens), std::move(labels), all});
    tokens.clear();
    labels.clear();
  };

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    std::string token, label_str;
    split_line(line, line_no, path, &token, &label_str);
    int label = space.parse_label(label_str);
    require(label >= 0, path + ":" + std::to_string(line_no) +
                            ": unknown label '" + label_str + "'");
    tokens.push_back(std::move(token));
    labels.push_back(label);
  }
  flush();
  return corpus;
}

void write_conll(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot open " + path + " for writing");
  for (const Sentence& s : corpus.sentences) {
    for (size_t t = 0; t < s.tokens.size(); ++t) {
      out << s.tokens[t] << '\t' << corpus.space.label_string(s.gold[t]) << '\n';
    }
    out << '\n';
  }
  require(static_cast<bool>(out), "write failed: " + path);
}

MaskResult mask_split(const Corpus& corpus, int n_folds, uint64_t seed) {
  int n_types = corpus.space.num_types();
  require(n_folds >= 1 && n_folds <= n_types,
          "fold count " + std::to_string(n_folds) + " exceeds type count " +
              std::to_string(n_types));
  TypeSet all = corpus.space.all_types();
  for (const Sentence& s : corpus.sentences) {
    require(s.source_typeset == all, "mask_split needs a fully-typed corpus");
  }

  std::vector<std::string> kept_names;
  for (int t = 0; t < n_folds; ++t) kept_names.push_back(corpus.space.type_name(t));
  LabelSpace reduced(kept_names, corpus.space.schema());

  std::vector<size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  size_t base = corpus.size() / static_cast<size_t>(n_folds);
  size_t remainder = corpus.size() % static_cast<size_t>(n_folds);

  MaskResult result{{}, {}, reduced};
  size_t cursor = 0;
  for (int j = 0; j < n_folds; ++j) {
    size_t fold_size = base + (static_cast<size_t>(j) < remainder ? 1 : 0);
    Corpus fold(reduced, corpus.split_tag);
    TypeSet kept = TypeSet::single(j);
    size_t entities = 0;
    for (size_t i = 0; i < fold_size; ++i, ++cursor) {
      const Sentence& src = corpus.sentences[order[cursor]];
      // Type j has the same index and label ids in the reduced space, so the
      // projected sequence carries over unchanged.
      LabelSeq gold = project_labels(src.gold, kept, corpus.space);
      entities += decode_labels(gold, reduced).size();
      fold.sentences.push_back(Sentence{src.tokens, std::move(gold), kept});
    }
    result.stats.push_back(
        FoldStats{j, reduced.type_name(j), fold.size(), entities});
    result.folds.push_back(std::move(fold));
  }
  return result;
}

Corpus subsample_standard(const Corpus& corpus, int n_types, size_t s_sentences,
                          uint64_t seed) {
  require(n_types >= 1 && n_types <= corpus.space.num_types(),
          "type count out of range in subsample_standard");
  require(s_sentences <= corpus.size(),
          "sample size exceeds corpus size in subsample_standard");

  std::vector<std::string> kept_names;
  for (int t = 0; t < n_types; ++t) kept_names.push_back(corpus.space.type_name(t));
  LabelSpace reduced(kept_names, corpus.space.schema());
  TypeSet kept = TypeSet::all(n_types);

  std::vector<size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  order.resize(s_sentences);
  std::sort(order.begin(), order.end());

  Corpus out(reduced, corpus.split_tag);
  for (size_t idx : order) {
    const Sentence& src = corpus.sentences[idx];
    LabelSeq gold = project_labels(src.gold, kept, corpus.space);
    out.sentences.push_back(Sentence{src.tokens, std::move(gold), kept});
  }
  return out;
}

std::vector<std::string> canonical_type_order(std::vector<std::string> names) {
  auto norm = [](std::string s) {
    for (char& c : s) {
      if (c == '-') c = '_';
      c = static_cast<char>(std::tolower(c));
    }
    return s;
  };
  static const char* kJnlpba[] = {"dna", "protein", "cell_type", "cell_line", "rna"};
  std::set<std::string> normed;
  for (const auto& n : names) normed.insert(norm(n));
  std::set<std::string> jnlpba(std::begin(kJnlpba), std::end(kJnlpba));
  if (normed == jnlpba) {
    std::vector<std::string> ordered;
    for (const char* key : kJnlpba) {
      for (const auto& n : names) {
        if (norm(n) == key) ordered.push_back(n);
      }
    }
    return ordered;
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<std::string> scan_conll_types(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path);
  std::vector<std::string> names;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string token, label;
    split_line(line, line_no, path, &token, &label);
    if (label == "O") continue;
    require(label.size() >= 3 && label[1] == '-',
            path + ":" + std::to_string(line_no) + ": unknown label '" + label + "'");
    std::string name = label.substr(2);
    if (seen.insert(name).second) names.push_back(name);
  }
  return names;
}

}  // namespace ptner
