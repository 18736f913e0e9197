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

#ifndef PTNER_MODEL_IO_HPP_
#define PTNER_MODEL_IO_HPP_

#include <string>

#include "ptner/crf.hpp"

namespace ptner {

// Self-describing JSON container; see README for the exact layout. Weights
// are written with enough digits to round-trip doubles exactly, emissions as
// sparse (feature, label, weight) triples.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace ptner

#endif  // PTNER_MODEL_IO_HPP_
