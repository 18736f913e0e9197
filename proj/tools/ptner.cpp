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

// Command-line front end: mask / subsample / synth / train / propagate /
// predict / eval / verify-theorem / repro. Every run drops a metadata JSON
// (command, config, seeds, input fingerprints) next to its primary output.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ptner/corpus.hpp"
#include "ptner/error.hpp"
#include "ptner/eval.hpp"
#include "ptner/model_io.hpp"
#include "ptner/propagate.hpp"
#include "ptner/repro.hpp"
#include "ptner/synth.hpp"
#include "ptner/theorem.hpp"
#include "ptner/trainer.hpp"
#include "ptner/util.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

using ptner::Corpus;
using ptner::LabelSpace;
using ptner::Model;
using ptner::TypeSet;

nlohmann::json input_hashes(const std::vector<std::string>& paths) {
  nlohmann::json j = nlohmann::json::object();
  for (const std::string& p : paths) j[p] = ptner::file_fingerprint(p);
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  ptner::require(out.good(), "cannot open '" + path + "' for writing");
  out << text;
  ptner::require(out.good(), "failed writing '" + path + "'");
}

void write_metadata(const std::string& path, const std::string& command,
                    nlohmann::json details, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["tool"] = "ptner";
  j["version"] = kVersion;
  j["command"] = command;
  j["details"] = std::move(details);
  j["inputs"] = input_hashes(inputs);
  j["outputs"] = outputs;
  write_text(path, j.dump(2) + "\n");
}

ptner::Schema parse_schema_flag(const std::string& s) { return ptner::parse_schema(s); }

// The union of entity types used across the given CoNLL files, in the
// canonical order the toolkit trains with.
LabelSpace space_from_files(const std::vector<std::string>& paths,
                            const std::string& schema) {
  std::vector<std::string> names;
  for (const std::string& p : paths) {
    for (std::string& n : ptner::scan_conll_types(p)) {
      if (std::find(names.begin(), names.end(), n) == names.end()) {
        names.push_back(std::move(n));
      }
    }
  }
  ptner::require(!names.empty(), "no entity types found in the input files");
  return LabelSpace(ptner::canonical_type_order(names), parse_schema_flag(schema));
}

TypeSet parse_typeset(const std::string& text, const LabelSpace& space) {
  std::vector<int> members;
  std::string name;
  std::stringstream ss(text);
  while (std::getline(ss, name, '+')) {
    int idx = space.type_index(name);
    ptner::require(idx >= 0, "unknown entity type '" + name + "'");
    members.push_back(idx);
  }
  ptner::require(!members.empty(), "empty typeset '" + text + "'");
  return TypeSet(std::move(members));
}

TypeSet observed_typeset(const Corpus& corpus) {
  std::vector<uint8_t> seen(static_cast<size_t>(corpus.space.num_types()), 0);
  for (const ptner::Sentence& s : corpus.sentences) {
    for (int label : s.gold) {
      if (label != LabelSpace::kOutside) {
        seen[static_cast<size_t>(corpus.space.type_of(label))] = 1;
      }
    }
  }
  std::vector<int> members;
  for (size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) members.push_back(static_cast<int>(i));
  }
  return TypeSet(std::move(members));
}

// Loads the training corpora and stamps each sentence's source typeset,
// either from --typesets (one '+'-joined entry per file) or from the entity
// types observed in that file.
std::vector<Corpus> load_train_corpora(const std::vector<std::string>& paths,
                                       const std::vector<std::string>& typesets,
                                       const LabelSpace& space, bool need_source) {
  ptner::require(typesets.empty() || typesets.size() == paths.size(),
                 "--typesets needs exactly one entry per --train file");
  std::vector<Corpus> corpora;
  for (size_t i = 0; i < paths.size(); ++i) {
    Corpus c = ptner::read_conll(paths[i], space);
    c.split_tag = "train";
    if (!typesets.empty()) {
      TypeSet ts = parse_typeset(typesets[i], space);
      for (ptner::Sentence& s : c.sentences) s.source_typeset = ts;
    } else if (need_source) {
      TypeSet ts = observed_typeset(c);
      ptner::require(!ts.empty(), "'" + paths[i] +
                                      "' has no entities; pass --typesets to name "
                                      "its annotated types");
      for (ptner::Sentence& s : c.sentences) s.source_typeset = ts;
    }
    corpora.push_back(std::move(c));
  }
  return corpora;
}

nlohmann::json epoch_log_json(const std::vector<ptner::EpochLog>& log) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ptner::EpochLog& e : log) {
    rows.push_back({{"epoch", e.epoch},
                    {"eta", e.eta},
                    {"train_loss", e.train_loss},
                    {"dev_micro_f1", e.dev_micro_f1}});
  }
  return rows;
}

nlohmann::json theorem_report_json(const ptner::Theorem1Report& r) {
  nlohmann::json j;
  j["sentences"] = r.sentences;
  j["excluded"] = r.excluded;
  j["count_all"] = r.count_all;
  j["count_partial"] = r.count_partial;
  j["typesets"] = r.typeset_names;
  j["e_all"] = r.e_all;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["lower_ok"] = r.lower_ok;
  j["upper_ok"] = r.upper_ok;
  j["holds"] = r.holds();
  return j;
}

// ---- subcommand payloads -------------------------------------------------

struct MaskArgs {
  std::string input;
  int folds = 3;
  uint64_t seed = 1;
  std::string out_dir = "masked";
  std::string schema = "iobes";
};

int run_mask(const MaskArgs& a) {
  std::filesystem::create_directories(a.out_dir);
  LabelSpace space = space_from_files({a.input}, a.schema);
  Corpus corpus = ptner::read_conll(a.input, space);
  ptner::MaskResult res = ptner::mask_split(corpus, a.folds, a.seed);

  nlohmann::json stats = nlohmann::json::array();
  std::vector<std::string> outputs;
  for (size_t j = 0; j < res.folds.size(); ++j) {
    std::string path = a.out_dir + "/fold" + std::to_string(j) + "." +
                       res.stats[j].type_name + ".conll";
    ptner::write_conll(res.folds[j], path);
    outputs.push_back(path);
    stats.push_back({{"fold", res.stats[j].fold},
                     {"type", res.stats[j].type_name},
                     {"sentences", res.stats[j].sentences},
                     {"entities", res.stats[j].entities}});
  }
  std::string stats_path = a.out_dir + "/mask_stats.json";
  write_text(stats_path, stats.dump(2) + "\n");
  outputs.push_back(stats_path);
  write_metadata(a.out_dir + "/metadata.json", "mask",
                 {{"folds", a.folds}, {"seed", a.seed}, {"schema", a.schema}},
                 {a.input}, outputs);
  std::cout << stats.dump(2) << "\n";
  return 0;
}

struct SubsampleArgs {
  std::string input;
  int types = 1;
  size_t sentences = 0;
  uint64_t seed = 1;
  std::string output;
  std::string schema = "iobes";
};

int run_subsample(const SubsampleArgs& a) {
  LabelSpace space = space_from_files({a.input}, a.schema);
  Corpus corpus = ptner::read_conll(a.input, space);
  size_t take = a.sentences == 0 ? corpus.size() : a.sentences;
  Corpus out = ptner::subsample_standard(corpus, a.types, take, a.seed);
  ptner::write_conll(out, a.output);
  write_metadata(a.output + ".meta.json", "subsample",
                 {{"types", a.types},
                  {"sentences", take},
                  {"seed", a.seed},
                  {"schema", a.schema}},
                 {a.input}, {a.output});
  return 0;
}

struct SynthArgs {
  std::string config_path;
  std::string out_dir = "synth";
  uint64_t seed = 0;
  bool seed_set = false;
};

int run_synth(const SynthArgs& a) {
  ptner::SynthConfig config = a.config_path.empty()
                                  ? ptner::SynthConfig{}
                                  : ptner::SynthConfig::from_file(a.config_path);
  if (a.seed_set) config.seed = a.seed;
  std::filesystem::create_directories(a.out_dir);
  ptner::SynthResult res = ptner::generate_synthetic(config);
  ptner::write_conll(res.train, a.out_dir + "/train.conll");
  ptner::write_conll(res.dev, a.out_dir + "/dev.conll");
  ptner::write_conll(res.test, a.out_dir + "/test.conll");
  write_metadata(a.out_dir + "/metadata.json", "synth",
                 nlohmann::json::parse(config.to_json()),
                 a.config_path.empty() ? std::vector<std::string>{}
                                       : std::vector<std::string>{a.config_path},
                 {a.out_dir + "/train.conll", a.out_dir + "/dev.conll",
                  a.out_dir + "/test.conll"});
  return 0;
}

struct TrainArgs {
  std::string regime = "standard";
  std::vector<std::string> train;
  std::string dev;
  std::string config_path;
  std::string model_out;
  std::vector<std::string> typesets;
  std::string schema = "iobes";
};

int run_train(const TrainArgs& a) {
  ptner::Regime regime = ptner::parse_regime(a.regime);
  ptner::require(regime != ptner::Regime::kPropagate,
                 "use the 'propagate' subcommand for the propagate regime");
  ptner::TrainConfig config = a.config_path.empty()
                                  ? ptner::TrainConfig{}
                                  : ptner::TrainConfig::from_file(a.config_path);
  config.objective = regime == ptner::Regime::kPartial ? "marginal" : "standard";

  std::vector<std::string> all_paths = a.train;
  all_paths.push_back(a.dev);
  LabelSpace space = space_from_files(all_paths, a.schema);
  std::vector<Corpus> corpora = load_train_corpora(
      a.train, a.typesets, space, regime == ptner::Regime::kPartial);
  Corpus dev = ptner::read_conll(a.dev, space);
  dev.split_tag = "dev";

  std::vector<const Corpus*> ptrs;
  for (const Corpus& c : corpora) ptrs.push_back(&c);
  ptner::TrainResult result = ptner::train_regime(ptrs, dev, regime, space, config);
  ptner::save_model(result.model, a.model_out);

  write_metadata(a.model_out + ".meta.json", "train",
                 {{"regime", a.regime},
                  {"config", nlohmann::json::parse(config.to_json())},
                  {"best_epoch", result.best_epoch},
                  {"best_dev_micro_f1", result.best_dev_f1},
                  {"epochs", epoch_log_json(result.log)}},
                 all_paths, {a.model_out});
  std::cout << "best dev micro F1 " << result.best_dev_f1 << " at epoch "
            << result.best_epoch << "\n";
  return 0;
}

struct PropagateArgs {
  std::vector<std::string> train;
  std::string dev;
  std::string config_path;
  std::string model_out;
  std::string work_dir;
  std::vector<std::string> typesets;
  std::string schema = "iobes";
  bool hard = false;
};

int run_propagate(const PropagateArgs& a) {
  ptner::TrainConfig config = a.config_path.empty()
                                  ? ptner::TrainConfig{}
                                  : ptner::TrainConfig::from_file(a.config_path);
  std::vector<std::string> all_paths = a.train;
  all_paths.push_back(a.dev);
  LabelSpace space = space_from_files(all_paths, a.schema);
  std::vector<Corpus> folds = load_train_corpora(a.train, a.typesets, space, true);
  for (size_t j = 0; j < folds.size(); ++j) {
    ptner::require(!folds[j].sentences.empty() &&
                       folds[j].sentences[0].source_typeset.size() == 1,
                   "'" + a.train[j] + "' is not a single-type fold");
  }
  Corpus dev = ptner::read_conll(a.dev, space);
  dev.split_tag = "dev";

  ptner::PropagateOptions options;
  options.fold_config = config;
  options.final_config = config;
  options.final_config.objective = "marginal";
  options.hard = a.hard;
  options.work_dir = a.work_dir.empty() ? a.model_out + ".work" : a.work_dir;
  ptner::PropagateResult result = ptner::propagate_train(folds, dev, options);
  ptner::save_model(result.final_result.model, a.model_out);

  write_metadata(a.model_out + ".meta.json", "propagate",
                 {{"config", nlohmann::json::parse(config.to_json())},
                  {"hard", a.hard},
                  {"work_dir", options.work_dir},
                  {"propagated_spans", result.propagated_spans},
                  {"merge_conflicts", result.conflicts},
                  {"best_epoch", result.final_result.best_epoch},
                  {"best_dev_micro_f1", result.final_result.best_dev_f1},
                  {"epochs", epoch_log_json(result.final_result.log)}},
                 all_paths, {a.model_out});
  std::cout << "best dev micro F1 " << result.final_result.best_dev_f1
            << " at epoch " << result.final_result.best_epoch << "\n";
  return 0;
}

struct PredictArgs {
  std::string model;
  std::string input;
  std::string output;
};

int run_predict(const PredictArgs& a) {
  Model model = ptner::load_model(a.model);
  Corpus corpus = ptner::read_conll(a.input, model.space);
  Corpus out = corpus;
  std::vector<ptner::LabelSeq> preds(corpus.size());
  ptner::parallel_for(corpus.size(), ptner::env_thread_count(), [&](size_t i) {
    preds[i] = ptner::predict_labels(
        ptner::extract_features(corpus.sentences[i], model.vocab), model);
  });
  for (size_t i = 0; i < out.sentences.size(); ++i) out.sentences[i].gold = preds[i];
  ptner::write_conll(out, a.output);
  write_metadata(a.output + ".meta.json", "predict", nlohmann::json::object(),
                 {a.model, a.input}, {a.output});
  return 0;
}

struct EvalArgs {
  std::string model;
  std::string test;
  std::string report;
  std::string dump_pred;
  std::vector<std::string> typesets;
  bool no_errors = false;
};

int run_eval(const EvalArgs& a) {
  Model model = ptner::load_model(a.model);
  Corpus test = ptner::read_conll(a.test, model.space);

  std::vector<TypeSet> typesets;
  if (!a.typesets.empty()) {
    for (const std::string& t : a.typesets) {
      typesets.push_back(parse_typeset(t, model.space));
    }
  } else if (!a.no_errors) {
    for (int t = 0; t < model.space.num_types(); ++t) {
      typesets.push_back(TypeSet::single(t));
    }
  }
  ptner::EvalReport report = ptner::evaluate(test, model, typesets, !a.no_errors);
  write_text(a.report, ptner::report_json(report));
  std::vector<std::string> outputs{a.report};

  if (!a.dump_pred.empty()) {
    Corpus out = test;
    ptner::parallel_for(test.size(), ptner::env_thread_count(), [&](size_t i) {
      out.sentences[i].gold = ptner::predict_labels(
          ptner::extract_features(test.sentences[i], model.vocab), model);
    });
    ptner::write_conll(out, a.dump_pred);
    outputs.push_back(a.dump_pred);
  }
  write_metadata(a.report + ".meta.json", "eval", nlohmann::json::object(),
                 {a.model, a.test}, outputs);
  std::cout << "micro F1 " << report.micro_f1();
  if (report.has_errors) std::cout << ", E_all " << report.e_all;
  std::cout << "\n";
  return 0;
}

struct TheoremArgs {
  int trials = 1000;
  int max_len = 5;
  int types = 2;
  int splits = 2;
  uint64_t seed = 1;
  std::string report;
  std::string model;
  std::string test;
  std::vector<std::string> typesets;
};

int run_verify_theorem(const TheoremArgs& a) {
  nlohmann::json j;
  bool ok = true;
  std::vector<std::string> inputs;

  if (!a.model.empty()) {
    ptner::require(!a.test.empty(), "--model needs --test");
    Model model = ptner::load_model(a.model);
    Corpus test = ptner::read_conll(a.test, model.space);
    std::vector<TypeSet> typesets;
    if (!a.typesets.empty()) {
      for (const std::string& t : a.typesets) {
        typesets.push_back(parse_typeset(t, model.space));
      }
    } else {
      for (int t = 0; t < model.space.num_types(); ++t) {
        typesets.push_back(TypeSet::single(t));
      }
    }
    ptner::Theorem1Report rep = ptner::verify_theorem1(model, test, typesets);
    j["theorem1"] = theorem_report_json(rep);
    ok = rep.holds();
    inputs = {a.model, a.test};
  } else {
    ptner::Lemma1Report lemma =
        ptner::verify_lemma1(a.trials, a.max_len, a.types, a.splits, a.seed);
    j["lemma1"] = {{"trials", lemma.trials},
                   {"checked", lemma.checked},
                   {"premise_failures", lemma.premise_failures},
                   {"violations", lemma.violations},
                   {"monotonicity_violations", lemma.monotonicity_violations},
                   {"delta_one", lemma.delta_one}};
    ok = lemma.violations == 0 && lemma.monotonicity_violations == 0;

    int theorem_trials = std::max(1, a.trials / 50);
    std::vector<ptner::Theorem1Report> reps = ptner::verify_theorem1_random(
        theorem_trials, a.max_len, a.types, a.splits, 40, a.seed ^ 0x5EEDULL);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& rep : reps) {
      arr.push_back(theorem_report_json(rep));
      ok = ok && rep.holds();
    }
    j["theorem1_random"] = std::move(arr);
  }
  j["ok"] = ok;

  std::string text = j.dump(2) + "\n";
  if (!a.report.empty()) {
    write_text(a.report, text);
    write_metadata(a.report + ".meta.json", "verify-theorem",
                   {{"trials", a.trials},
                    {"max_len", a.max_len},
                    {"types", a.types},
                    {"splits", a.splits},
                    {"seed", a.seed}},
                   inputs, {a.report});
  }
  std::cout << text;
  if (!ok) {
    std::cerr << "verify-theorem: bound or lemma violated\n";
    return 1;
  }
  return 0;
}

struct ReproArgs {
  std::string out_dir = "repro-out";
  std::string synth_config;
  std::string train_config;
  uint64_t seed = 0;
  bool seed_set = false;
  uint64_t mask_seed = 11;
  int folds = 3;
  bool hard_propagate = false;
};

int run_repro_cmd(const ReproArgs& a) {
  ptner::ReproConfig config;
  if (!a.synth_config.empty()) {
    config.synth = ptner::SynthConfig::from_file(a.synth_config);
  }
  if (!a.train_config.empty()) {
    config.train = ptner::TrainConfig::from_file(a.train_config);
  }
  if (a.seed_set) config.train.seed = a.seed;
  config.folds = a.folds;
  config.mask_seed = a.mask_seed;
  config.hard_propagate = a.hard_propagate;
  config.out_dir = a.out_dir;
  std::filesystem::create_directories(a.out_dir);

  ptner::ReproResult result = ptner::run_repro(config, &std::cerr);
  write_text(a.out_dir + "/repro.csv", result.csv);
  write_text(a.out_dir + "/repro.md", result.markdown);

  std::vector<std::string> inputs;
  if (!a.synth_config.empty()) inputs.push_back(a.synth_config);
  if (!a.train_config.empty()) inputs.push_back(a.train_config);
  write_metadata(a.out_dir + "/metadata.json", "repro",
                 {{"synth", nlohmann::json::parse(config.synth.to_json())},
                  {"train", nlohmann::json::parse(config.train.to_json())},
                  {"folds", config.folds},
                  {"mask_seed", config.mask_seed},
                  {"hard_propagate", config.hard_propagate}},
                 inputs, {a.out_dir + "/repro.csv", a.out_dir + "/repro.md"});
  std::cout << result.markdown;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence labeling with partially-typed supervision"};
  app.set_version_flag("--version", std::string("ptner ") + kVersion);
  app.require_subcommand(1);

  MaskArgs mask;
  auto* mask_cmd = app.add_subcommand("mask", "Split a corpus into single-type folds");
  mask_cmd->add_option("--input", mask.input, "Fully-typed CoNLL file")->required();
  mask_cmd->add_option("--folds", mask.folds, "Number of folds/types to keep");
  mask_cmd->add_option("--seed", mask.seed, "Shuffle seed");
  mask_cmd->add_option("--out-dir", mask.out_dir, "Output directory");
  mask_cmd->add_option("--schema", mask.schema, "iobes or iob2");

  SubsampleArgs sub;
  auto* sub_cmd = app.add_subcommand("subsample", "Fully-typed subsample baselines");
  sub_cmd->add_option("--input", sub.input, "CoNLL file")->required();
  sub_cmd->add_option("--types", sub.types, "Keep the first n types");
  sub_cmd->add_option("--sentences", sub.sentences, "Sample size (0 = all)");
  sub_cmd->add_option("--seed", sub.seed, "Sampling seed");
  sub_cmd->add_option("--output", sub.output, "Output CoNLL path")->required();
  sub_cmd->add_option("--schema", sub.schema, "iobes or iob2");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate the synthetic corpus");
  synth_cmd->add_option("--config", synth.config_path, "Synth config JSON");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory");
  auto* synth_seed =
      synth_cmd->add_option("--seed", synth.seed, "Override the config seed");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train one model under a regime");
  train_cmd->add_option("--regime", train.regime, "concat|partial|standard|one-type")
      ->required();
  train_cmd->add_option("--train", train.train, "Training CoNLL files")->required();
  train_cmd->add_option("--dev", train.dev, "Dev CoNLL file")->required();
  train_cmd->add_option("--config", train.config_path, "Train config JSON");
  train_cmd->add_option("--model-out", train.model_out, "Model output path")->required();
  train_cmd->add_option("--typesets", train.typesets,
                        "Per-file annotated typesets, e.g. DNA+RNA protein");
  train_cmd->add_option("--schema", train.schema, "iobes or iob2");

  PropagateArgs prop;
  auto* prop_cmd = app.add_subcommand(
      "propagate", "Fold models -> cross-annotation -> marginal retrain");
  prop_cmd->add_option("--train", prop.train, "Single-type fold CoNLL files")->required();
  prop_cmd->add_option("--dev", prop.dev, "Dev CoNLL file")->required();
  prop_cmd->add_option("--config", prop.config_path, "Train config JSON");
  prop_cmd->add_option("--model-out", prop.model_out, "Final model path")->required();
  prop_cmd->add_option("--work-dir", prop.work_dir,
                       "Where fold models/annotations go (default <model>.work)");
  prop_cmd->add_option("--typesets", prop.typesets, "Per-fold type names");
  prop_cmd->add_option("--schema", prop.schema, "iobes or iob2");
  prop_cmd->add_flag("--hard-propagate", prop.hard,
                     "Pin propagated labels without the O alternative");

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "Decode a corpus with a model");
  pred_cmd->add_option("--model", pred.model, "Model file")->required();
  pred_cmd->add_option("--input", pred.input, "CoNLL file to decode")->required();
  pred_cmd->add_option("--output", pred.output, "Predictions CoNLL path")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Entity F1 and sentence error rates");
  eval_cmd->add_option("--model", eval.model, "Model file")->required();
  eval_cmd->add_option("--test", eval.test, "Test CoNLL file")->required();
  eval_cmd->add_option("--report", eval.report, "Report JSON path")->required();
  eval_cmd->add_option("--dump-pred", eval.dump_pred, "Optional predictions CoNLL");
  eval_cmd->add_option("--typesets", eval.typesets,
                       "Typesets for partial error rates (default: one per type)");
  eval_cmd->add_flag("--no-errors", eval.no_errors, "Skip sentence error rates");

  TheoremArgs thm;
  auto* thm_cmd = app.add_subcommand(
      "verify-theorem", "Exact checks of the error-rate bound and its lemma");
  thm_cmd->add_option("--trials", thm.trials, "Random trials");
  thm_cmd->add_option("--max-len", thm.max_len, "Max sentence length");
  thm_cmd->add_option("--types", thm.types, "Entity types in random instances");
  thm_cmd->add_option("--splits", thm.splits, "Disjoint covering typesets");
  thm_cmd->add_option("--seed", thm.seed, "Master seed");
  thm_cmd->add_option("--report", thm.report, "Report JSON path");
  thm_cmd->add_option("--model", thm.model, "Check a trained model instead");
  thm_cmd->add_option("--test", thm.test, "Test corpus for --model");
  thm_cmd->add_option("--typesets", thm.typesets, "Typesets for --model mode");

  ReproArgs repro;
  auto* repro_cmd = app.add_subcommand(
      "repro", "Synthetic four-regime comparison (concat/propagate/partial/standard)");
  repro_cmd->add_option("--out-dir", repro.out_dir, "Output directory");
  repro_cmd->add_option("--synth-config", repro.synth_config, "Synth config JSON");
  repro_cmd->add_option("--train-config", repro.train_config, "Train config JSON");
  auto* repro_seed =
      repro_cmd->add_option("--seed", repro.seed, "Override the train seed");
  repro_cmd->add_option("--mask-seed", repro.mask_seed, "Fold-split seed");
  repro_cmd->add_option("--folds", repro.folds, "Number of folds");
  repro_cmd->add_flag("--hard-propagate", repro.hard_propagate,
                      "Hard variant of label propagation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    synth.seed_set = synth_seed->count() > 0;
    repro.seed_set = repro_seed->count() > 0;
    if (*mask_cmd) return run_mask(mask);
    if (*sub_cmd) return run_subsample(sub);
    if (*synth_cmd) return run_synth(synth);
    if (*train_cmd) return run_train(train);
    if (*prop_cmd) return run_propagate(prop);
    if (*pred_cmd) return run_predict(pred);
    if (*eval_cmd) return run_eval(eval);
    if (*thm_cmd) return run_verify_theorem(thm);
    if (*repro_cmd) return run_repro_cmd(repro);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
