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

#include "ptner/model_io.hpp"

#include <fstream>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ptner/error.hpp"

namespace ptner {

namespace {
constexpr const char* kFormat = "ptner-model";
constexpr int kVersion = 1;
}  // namespace

void save_model(const Model& model, const std::string& path) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["schema"] = schema_name(model.space.schema());
  std::vector<std::string> type_names;
  for (const auto& t : model.space.types()) type_names.push_back(t.name);
  j["types"] = type_names;
  j["hard_transitions"] = model.hard_transitions;
  j["features"] = model.vocab.names();

  nlohmann::json triples = nlohmann::json::array();
  const int n = model.num_labels();
  for (size_t f = 0; f < model.vocab.size(); ++f) {
    for (int l = 0; l < n; ++l) {
      double w = model.emission[f * static_cast<size_t>(n) + static_cast<size_t>(l)];
      if (w != 0.0) triples.push_back({f, l, w});
    }
  }
  j["emission"] = std::move(triples);
  j["transition"] = model.transition;
  j["start"] = model.start;
  j["stop"] = model.stop;

  std::ofstream out(path);
  require(out.good(), "cannot open '" + path + "' for writing");
  out << j.dump() << "\n";
  require(out.good(), "failed writing model to '" + path + "'");
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open model file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("model file '" + path + "' is not valid JSON: " + e.what());
  }
  require(j.value("format", "") == kFormat, "'" + path + "' is not a ptner model file");
  require(j.value("version", -1) == kVersion,
          "unsupported model version in '" + path + "'");

  try {
    Schema schema = parse_schema(j.at("schema").get<std::string>());
    auto type_names = j.at("types").get<std::vector<std::string>>();
    LabelSpace space(type_names, schema);
    auto feature_names = j.at("features").get<std::vector<std::string>>();
    FeatureVocab vocab = FeatureVocab::from_names(feature_names);
    require(vocab.size() == feature_names.size(),
            "duplicate feature names in '" + path + "'");

    Model model = Model::zeros(std::move(space), std::move(vocab));
    model.hard_transitions = j.value("hard_transitions", false);

    const int n = model.num_labels();
    for (const auto& triple : j.at("emission")) {
      require(triple.is_array() && triple.size() == 3,
              "malformed emission triple in '" + path + "'");
      size_t f = triple[0].get<size_t>();
      int l = triple[1].get<int>();
      require(f < model.vocab.size() && l >= 0 && l < n,
              "emission triple out of range in '" + path + "'");
      model.emission[f * static_cast<size_t>(n) + static_cast<size_t>(l)] =
          triple[2].get<double>();
    }
    auto load_vec = [&](const char* key, size_t expect) {
      auto v = j.at(key).get<std::vector<double>>();
      require(v.size() == expect,
              std::string(key) + " has wrong length in '" + path + "'");
      return v;
    };
    model.transition =
        load_vec("transition", static_cast<size_t>(n) * static_cast<size_t>(n));
    model.start = load_vec("start", static_cast<size_t>(n));
    model.stop = load_vec("stop", static_cast<size_t>(n));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed model file '" + path + "': " + e.what());
  }
}

}  // namespace ptner
