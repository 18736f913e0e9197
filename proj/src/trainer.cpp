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

#include "ptner/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "ptner/error.hpp"
#include "ptner/eval.hpp"
#include "ptner/util.hpp"

namespace ptner {

void TrainConfig::validate() const {
  require(batch_size >= 1, "batch_size must be >= 1");
  require(momentum >= 0.0 && momentum < 1.0, "momentum must be in [0, 1)");
  require(eta0 > 0.0, "eta0 must be positive");
  require(rho >= 0.0, "rho must be non-negative");
  require(clip > 0.0, "clip must be positive");
  require(epochs >= 1, "epochs must be >= 1");
  require(patience >= 1, "patience must be >= 1");
  require(weight_decay >= 0.0, "weight_decay must be non-negative");
  require(min_feature_count >= 1, "min_feature_count must be >= 1");
  require(objective == "standard" || objective == "marginal",
          "objective must be 'standard' or 'marginal'");
}

std::string TrainConfig::to_json() const {
  nlohmann::json j;
  j["batch_size"] = batch_size;
  j["momentum"] = momentum;
  j["eta0"] = eta0;
  j["rho"] = rho;
  j["clip"] = clip;
  j["epochs"] = epochs;
  j["patience"] = patience;
  j["weight_decay"] = weight_decay;
  j["min_feature_count"] = min_feature_count;
  j["seed"] = seed;
  j["objective"] = objective;
  j["hard_transitions"] = hard_transitions;
  return j.dump(2) + "\n";
}

TrainConfig TrainConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid train config JSON: ") + e.what());
  }
  require(j.is_object(), "train config must be a JSON object");
  TrainConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    try {
      if (key == "batch_size") {
        c.batch_size = it.value().get<int>();
      } else if (key == "momentum") {
        c.momentum = it.value().get<double>();
      } else if (key == "eta0") {
        c.eta0 = it.value().get<double>();
      } else if (key == "rho") {
        c.rho = it.value().get<double>();
      } else if (key == "clip") {
        c.clip = it.value().get<double>();
      } else if (key == "epochs") {
        c.epochs = it.value().get<int>();
      } else if (key == "patience") {
        c.patience = it.value().get<int>();
      } else if (key == "weight_decay") {
        c.weight_decay = it.value().get<double>();
      } else if (key == "min_feature_count") {
        c.min_feature_count = it.value().get<int>();
      } else if (key == "seed") {
        c.seed = it.value().get<uint64_t>();
      } else if (key == "objective") {
        c.objective = it.value().get<std::string>();
      } else if (key == "hard_transitions") {
        c.hard_transitions = it.value().get<bool>();
      } else {
        throw Error("unknown train config key: " + key);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error("bad value for train config key '" + key + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

TrainConfig TrainConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open train config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

Regime parse_regime(const std::string& name) {
  if (name == "concat") return Regime::kConcat;
  if (name == "partial") return Regime::kPartial;
  if (name == "standard") return Regime::kStandard;
  if (name == "one-type" || name == "one_type") return Regime::kOneType;
  if (name == "propagate") return Regime::kPropagate;
  throw Error("unknown regime '" + name +
              "' (expected concat|partial|propagate|standard|one-type)");
}

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::kConcat:
      return "concat";
    case Regime::kPartial:
      return "partial";
    case Regime::kStandard:
      return "standard";
    case Regime::kOneType:
      return "one-type";
    case Regime::kPropagate:
      return "propagate";
  }
  throw Error("unreachable regime");
}

std::vector<TrainExample> build_examples(const std::vector<const Corpus*>& corpora,
                                         Regime regime, const LabelSpace& space,
                                         FeatureVocab& vocab) {
  require(regime != Regime::kPropagate,
          "propagate is a pipeline regime; use propagate_train");
  const bool grow = !vocab.frozen();
  std::vector<TrainExample> examples;
  for (const Corpus* corpus : corpora) {
    require(corpus != nullptr, "null corpus");
    require(corpus->space == space, "corpus label space does not match");
    for (const Sentence& s : corpus->sentences) {
      FeaturizedSentence fsent = extract_features(s, vocab, grow);
      Lattice lattice =
          regime == Regime::kPartial
              ? constraint_lattice(s.gold, s.source_typeset, space)
              : Lattice::singleton(s.gold, space.num_labels());
      examples.push_back(TrainExample{std::move(fsent), std::move(lattice)});
    }
  }
  return examples;
}

namespace {

struct Snapshot {
  std::vector<double> emission, transition, start, stop;

  void take(const Model& m) {
    emission = m.emission;
    transition = m.transition;
    start = m.start;
    stop = m.stop;
  }
  void restore(Model* m) const {
    m->emission = emission;
    m->transition = transition;
    m->start = start;
    m->stop = stop;
  }
};

double dev_micro_f1(const Corpus& dev,
                    const std::vector<FeaturizedSentence>& dev_feats,
                    const Model& model) {
  std::vector<LabelSeq> preds(dev_feats.size());
  parallel_for(dev_feats.size(), env_thread_count(), [&](size_t i) {
    preds[i] = predict_labels(dev_feats[i], model);
  });
  return f1_report(dev, preds).micro_f1();
}

}  // namespace

TrainResult sgd_train(const std::vector<TrainExample>& examples,
                      const Corpus& dev, const LabelSpace& space,
                      const FeatureVocab& vocab, const TrainConfig& config) {
  config.validate();
  require(!examples.empty(), "training pool is empty");
  require(vocab.frozen(), "feature vocab must be frozen before training");
  for (const TrainExample& ex : examples) {
    require(ex.lattice.n_labels() == space.num_labels() &&
                ex.lattice.length() == ex.fsent.length(),
            "example lattice does not match the label space or sentence");
  }

  TrainResult result{Model::zeros(space, vocab), {}, -1, 0.0};
  Model& model = result.model;
  model.hard_transitions = config.hard_transitions;

  std::vector<FeaturizedSentence> dev_feats = featurize_corpus(dev, vocab);
  const bool select = !dev.sentences.empty();

  std::vector<double> v_emission(model.emission.size(), 0.0);
  std::vector<double> v_transition(model.transition.size(), 0.0);
  std::vector<double> v_start(model.start.size(), 0.0);
  std::vector<double> v_stop(model.stop.size(), 0.0);

  auto decay_and_apply = [&](std::vector<double>& v, std::vector<double>& w,
                             double m, double eta_wd) {
    if (eta_wd > 0.0) {
      for (size_t i = 0; i < v.size(); ++i) v[i] = m * v[i] - eta_wd * w[i];
    } else {
      for (double& x : v) x *= m;
    }
  };

  Rng rng(config.seed);
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), size_t{0});

  GradAccumulator grad(space.num_labels());
  Snapshot best;
  int since_improve = 0;
  const int n_labels = space.num_labels();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double eta = config.eta0 / (1.0 + config.rho * static_cast<double>(epoch));
    rng.shuffle(order);
    double loss_sum = 0.0;

    for (size_t begin = 0; begin < order.size(); begin += static_cast<size_t>(config.batch_size)) {
      const size_t end = std::min(order.size(), begin + static_cast<size_t>(config.batch_size));
      grad.clear();
      for (size_t k = begin; k < end; ++k) {
        const TrainExample& ex = examples[order[k]];
        loss_sum += lattice_nll(ex.fsent, model, ex.lattice, &grad);
      }
      grad.scale(1.0 / static_cast<double>(end - begin));
      const double norm = grad.l2_norm();
      const double step = eta * (norm > config.clip ? config.clip / norm : 1.0);

      decay_and_apply(v_emission, model.emission, config.momentum,
                      eta * config.weight_decay);
      decay_and_apply(v_transition, model.transition, config.momentum,
                      eta * config.weight_decay);
      decay_and_apply(v_start, model.start, config.momentum, eta * config.weight_decay);
      decay_and_apply(v_stop, model.stop, config.momentum, eta * config.weight_decay);

      const auto& touched = grad.touched_features();
      for (size_t slot = 0; slot < touched.size(); ++slot) {
        const double* g = grad.emission_slot(slot);
        double* v = &v_emission[static_cast<size_t>(touched[slot]) *
                                static_cast<size_t>(n_labels)];
        for (int l = 0; l < n_labels; ++l) v[l] -= step * g[l];
      }
      for (size_t i = 0; i < v_transition.size(); ++i) v_transition[i] -= step * grad.transition[i];
      for (size_t i = 0; i < v_start.size(); ++i) v_start[i] -= step * grad.start[i];
      for (size_t i = 0; i < v_stop.size(); ++i) v_stop[i] -= step * grad.stop[i];

      for (size_t i = 0; i < model.emission.size(); ++i) model.emission[i] += v_emission[i];
      for (size_t i = 0; i < model.transition.size(); ++i) model.transition[i] += v_transition[i];
      for (size_t i = 0; i < model.start.size(); ++i) model.start[i] += v_start[i];
      for (size_t i = 0; i < model.stop.size(); ++i) model.stop[i] += v_stop[i];
    }

    EpochLog log;
    log.epoch = epoch;
    log.eta = eta;
    log.train_loss = loss_sum / static_cast<double>(examples.size());
    log.dev_micro_f1 = select ? dev_micro_f1(dev, dev_feats, model) : 0.0;
    result.log.push_back(log);

    if (select) {
      if (log.dev_micro_f1 > result.best_dev_f1 || result.best_epoch < 0) {
        result.best_dev_f1 = log.dev_micro_f1;
        result.best_epoch = epoch;
        best.take(model);
        since_improve = 0;
      } else if (++since_improve >= config.patience) {
        break;
      }
    }
  }

  if (select) {
    best.restore(&model);
  } else {
    result.best_epoch = static_cast<int>(result.log.size()) - 1;
  }
  return result;
}

TrainResult train_regime(const std::vector<const Corpus*>& train, const Corpus& dev,
                         Regime regime, const LabelSpace& space,
                         const TrainConfig& config) {
  config.validate();
  FeatureVocab vocab;
  if (config.min_feature_count > 1) {
    vocab = build_vocab(train, config.min_feature_count);
  }
  std::vector<TrainExample> examples = build_examples(train, regime, space, vocab);
  if (!vocab.frozen()) vocab.freeze();
  return sgd_train(examples, dev, space, vocab, config);
}

}  // namespace ptner
