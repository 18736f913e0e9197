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

#include "ptner/synth.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "ptner/error.hpp"
#include "ptner/util.hpp"

namespace ptner {

void SynthConfig::validate() const {
  require(train_sentences >= 1 && dev_sentences >= 0 && test_sentences >= 0,
          "sentence counts must be positive");
  require(min_len >= 4 && max_len >= min_len, "need 4 <= min_len <= max_len");
  require(trigger_drop >= 0.0 && trigger_drop <= 1.0, "trigger_drop in [0,1]");
  require(trigger_confusion >= 0.0 && trigger_confusion <= 1.0,
          "trigger_confusion in [0,1]");
  require(ambiguous_fraction >= 0.0 && ambiguous_fraction <= 1.0,
          "ambiguous_fraction in [0,1]");
  require(distractor_rate >= 0.0 && distractor_rate <= 1.0,
          "distractor_rate in [0,1]");
  require(lexicon_size >= 4 && shared_size >= 0, "lexicons too small");
}

std::string SynthConfig::to_json() const {
  nlohmann::json j;
  j["train_sentences"] = train_sentences;
  j["dev_sentences"] = dev_sentences;
  j["test_sentences"] = test_sentences;
  j["seed"] = seed;
  j["min_len"] = min_len;
  j["max_len"] = max_len;
  j["trigger_drop"] = trigger_drop;
  j["trigger_confusion"] = trigger_confusion;
  j["ambiguous_fraction"] = ambiguous_fraction;
  j["distractor_rate"] = distractor_rate;
  j["lexicon_size"] = lexicon_size;
  j["shared_size"] = shared_size;
  return j.dump(2) + "\n";
}

SynthConfig SynthConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid synth config JSON: ") + e.what());
  }
  require(j.is_object(), "synth config must be a JSON object");
  SynthConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    try {
      if (key == "train_sentences") {
        c.train_sentences = it.value().get<int>();
      } else if (key == "dev_sentences") {
        c.dev_sentences = it.value().get<int>();
      } else if (key == "test_sentences") {
        c.test_sentences = it.value().get<int>();
      } else if (key == "seed") {
        c.seed = it.value().get<uint64_t>();
      } else if (key == "min_len") {
        c.min_len = it.value().get<int>();
      } else if (key == "max_len") {
        c.max_len = it.value().get<int>();
      } else if (key == "trigger_drop") {
        c.trigger_drop = it.value().get<double>();
      } else if (key == "trigger_confusion") {
        c.trigger_confusion = it.value().get<double>();
      } else if (key == "ambiguous_fraction") {
        c.ambiguous_fraction = it.value().get<double>();
      } else if (key == "distractor_rate") {
        c.distractor_rate = it.value().get<double>();
      } else if (key == "lexicon_size") {
        c.lexicon_size = it.value().get<int>();
      } else if (key == "shared_size") {
        c.shared_size = it.value().get<int>();
      } else {
        throw Error("unknown synth config key: " + key);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error("bad value for synth config key '" + key + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

SynthConfig SynthConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open synth config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

namespace {

const char* kSyllables[] = {"bar", "don", "fel", "gor",  "hal", "jin", "kor",
                            "lam", "mir", "nor", "pel",  "quin", "ral", "sim",
                            "tor", "ul",  "ven", "wex",  "yor", "zan"};
constexpr size_t kNumSyllables = sizeof(kSyllables) / sizeof(kSyllables[0]);

const char* kFillers[] = {
    "the",  "a",     "and",   "then",  "while", "after",  "before", "said",
    "saw",  "met",   "went",  "came",  "left",  "stayed", "again",  "slowly",
    "very", "quite", "some",  "many",  "few",   "other",  "early",  "late",
    "old",  "new",   "small", "large", "quiet", "busy",   "here",   "there",
    "soon", "still", "once",  "twice", "also",  "only",   "ever",   "never",
    "was",  "is",    "had",   "has",   "did",   "does",   "not",    "too"};
constexpr size_t kNumFillers = sizeof(kFillers) / sizeof(kFillers[0]);

// Triggers are disjoint from the fillers; one set per type, in the same
// order as the type names below.
const std::vector<std::vector<std::string>> kTriggers = {
    {"near", "toward", "outside"},     // LOC
    {"company", "agency", "bureau"},   // ORG
    {"mr", "mrs", "dr"},               // PER
};
const std::vector<std::string> kTypeNames = {"LOC", "ORG", "PER"};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
  return s;
}

std::string random_surface(Rng* rng) {
  size_t parts = 2 + rng->uniform_index(2);  // 2 or 3 syllables
  std::string s;
  for (size_t i = 0; i < parts; ++i) s += kSyllables[rng->uniform_index(kNumSyllables)];
  return capitalize(s);
}

// Draws `count` surfaces not already in `taken`.
std::vector<std::string> draw_lexicon(int count, Rng* rng,
                                      std::unordered_set<std::string>* taken) {
  std::vector<std::string> out;
  while (static_cast<int>(out.size()) < count) {
    std::string s = random_surface(rng);
    if (taken->insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

struct Lexicons {
  std::vector<std::vector<std::string>> typed;  // one per type
  std::vector<std::string> shared;
  std::vector<std::string> distractors;
};

Lexicons build_lexicons(const SynthConfig& config, Rng* rng) {
  Lexicons lex;
  std::unordered_set<std::string> taken;
  for (size_t t = 0; t < kTypeNames.size(); ++t) {
    lex.typed.push_back(draw_lexicon(config.lexicon_size, rng, &taken));
  }
  lex.shared = draw_lexicon(config.shared_size, rng, &taken);
  lex.distractors = draw_lexicon(16, rng, &taken);
  return lex;
}

void append_fillers(const SynthConfig& config, Rng* rng, int count,
                    const Lexicons& lex, std::vector<std::string>* tokens) {
  for (int i = 0; i < count; ++i) {
    if (rng->uniform() < config.distractor_rate) {
      tokens->push_back(lex.distractors[rng->uniform_index(lex.distractors.size())]);
    } else {
      tokens->push_back(kFillers[rng->uniform_index(kNumFillers)]);
    }
  }
}

Sentence make_sentence(const SynthConfig& config, const Lexicons& lex,
                       const LabelSpace& space, Rng* rng) {
  Sentence sent;
  std::vector<EntitySpan> spans;

  double roll = rng->uniform();
  int n_entities = roll < 0.05 ? 0 : (roll < 0.45 ? 1 : (roll < 0.85 ? 2 : 3));
  int budget = config.min_len +
               static_cast<int>(rng->uniform_index(
                   static_cast<size_t>(config.max_len - config.min_len + 1)));

  append_fillers(config, rng, 1 + static_cast<int>(rng->uniform_index(2)), lex,
                 &sent.tokens);
  for (int e = 0; e < n_entities; ++e) {
    int type = static_cast<int>(rng->uniform_index(kTypeNames.size()));
    bool shared = !lex.shared.empty() && rng->uniform() < config.ambiguous_fraction;
    // Shared surfaces are typed by their trigger alone, so they keep it
    // unless the noise removes it; typed surfaces only sometimes carry one.
    bool trigger = shared ? rng->uniform() >= config.trigger_drop
                          : rng->uniform() < 0.5;
    const auto& pool = shared ? lex.shared : lex.typed[static_cast<size_t>(type)];
    int len = rng->uniform() < 0.35 ? 2 : 1;
    // Entities only go in while they (plus a separating filler) fit the
    // budget, so lengths always land in [min_len, max_len].
    int cost = (trigger ? 1 : 0) + len + 1;
    if (static_cast<int>(sent.tokens.size()) + cost > budget) break;
    if (trigger) {
      size_t tt = static_cast<size_t>(type);
      if (rng->uniform() < config.trigger_confusion) {
        tt = (tt + 1 + rng->uniform_index(kTypeNames.size() - 1)) % kTypeNames.size();
      }
      const auto& tr = kTriggers[tt];
      sent.tokens.push_back(tr[rng->uniform_index(tr.size())]);
    }
    int start = static_cast<int>(sent.tokens.size());
    for (int k = 0; k < len; ++k) {
      sent.tokens.push_back(pool[rng->uniform_index(pool.size())]);
    }
    spans.push_back(EntitySpan{start, start + len - 1, type});
    append_fillers(config, rng, 1, lex, &sent.tokens);
  }
  while (static_cast<int>(sent.tokens.size()) < budget) {
    append_fillers(config, rng, 1, lex, &sent.tokens);
  }

  sent.gold = encode_spans(spans, static_cast<int>(sent.tokens.size()), space);
  sent.source_typeset = space.all_types();
  return sent;
}

Corpus make_split(const SynthConfig& config, const Lexicons& lex,
                  const LabelSpace& space, int count, const std::string& tag,
                  Rng rng) {
  Corpus corpus(space, tag);
  corpus.sentences.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    corpus.sentences.push_back(make_sentence(config, lex, space, &rng));
  }
  return corpus;
}

}  // namespace

SynthResult generate_synthetic(const SynthConfig& config) {
  config.validate();
  LabelSpace space(kTypeNames, Schema::kIobes);
  Rng master(config.seed);
  Rng lex_rng = master.fork(0);
  Lexicons lex = build_lexicons(config, &lex_rng);
  return SynthResult{
      make_split(config, lex, space, config.train_sentences, "train", master.fork(1)),
      make_split(config, lex, space, config.dev_sentences, "dev", master.fork(2)),
      make_split(config, lex, space, config.test_sentences, "test", master.fork(3)),
  };
}

}  // namespace ptner
