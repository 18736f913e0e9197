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

#include "ptner/labels.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "ptner/error.hpp"

namespace ptner {

std::string schema_name(Schema s) {
  return s == Schema::kIobes ? "IOBES" : "IOB2";
}

Schema parse_schema(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(c)));
  if (lower == "iobes") return Schema::kIobes;
  if (lower == "iob2" || lower == "iob") return Schema::kIob2;
  throw Error("unknown schema: " + name + " (expected IOBES or IOB2)");
}

TypeSet::TypeSet(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  require(members_.empty() || members_.front() >= 0, "negative type index in TypeSet");
}

TypeSet TypeSet::all(int n_types) {
  std::vector<int> m(static_cast<size_t>(n_types));
  for (int i = 0; i < n_types; ++i) m[static_cast<size_t>(i)] = i;
  return TypeSet(std::move(m));
}

bool TypeSet::contains(int type) const {
  return std::binary_search(members_.begin(), members_.end(), type);
}

bool TypeSet::subset_of(const TypeSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

TypeSet TypeSet::unite(const TypeSet& other) const {
  std::vector<int> out;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                 other.members_.end(), std::back_inserter(out));
  return TypeSet(std::move(out));
}

TypeSet TypeSet::intersect(const TypeSet& other) const {
  std::vector<int> out;
  std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out));
  return TypeSet(std::move(out));
}

LabelSpace::LabelSpace(std::vector<std::string> type_names, Schema schema)
    : schema_(schema) {
  std::set<std::string> seen;
  types_.reserve(type_names.size());
  for (size_t i = 0; i < type_names.size(); ++i) {
    require(!type_names[i].empty(), "empty entity type name");
    require(seen.insert(type_names[i]).second,
            "duplicate entity type name: " + type_names[i]);
    types_.push_back(EntityType{std::move(type_names[i]), static_cast<int>(i)});
  }
}

int LabelSpace::num_labels() const {
  int per_type = schema_ == Schema::kIobes ? 4 : 2;
  return per_type * num_types() + 1;
}

const std::string& LabelSpace::type_name(int type) const {
  require(type >= 0 && type < num_types(), "type index out of range");
  return types_[static_cast<size_t>(type)].name;
}

int LabelSpace::type_index(const std::string& name) const {
  for (const auto& t : types_) {
    if (t.name == name) return t.index;
  }
  return -1;
}

std::string LabelSpace::typeset_name(const TypeSet& ts) const {
  std::string out;
  for (int t : ts.members()) {
    if (!out.empty()) out += '+';
    out += type_name(t);
  }
  return out.empty() ? "(none)" : out;
}

int LabelSpace::label_id(Kind kind, int type) const {
  if (kind == Kind::kO) return kOutside;
  require(type >= 0 && type < num_types(), "type index out of range");
  if (schema_ == Schema::kIobes) {
    return 4 * type + 1 + static_cast<int>(kind);
  }
  require(kind == Kind::kB || kind == Kind::kI,
          "label kind not available under IOB2");
  return 2 * type + 1 + static_cast<int>(kind);
}

Kind LabelSpace::kind_of(int label) const {
  require(valid_label(label), "label id out of range");
  if (label == kOutside) return Kind::kO;
  int per_type = schema_ == Schema::kIobes ? 4 : 2;
  return static_cast<Kind>((label - 1) % per_type);
}

int LabelSpace::type_of(int label) const {
  require(valid_label(label), "label id out of range");
  if (label == kOutside) return -1;
  int per_type = schema_ == Schema::kIobes ? 4 : 2;
  return (label - 1) / per_type;
}

std::string LabelSpace::label_string(int label) const {
  if (label == kOutside) return "O";
  static const char kKindChar[] = {'B', 'I', 'E', 'S'};
  Kind k = kind_of(label);
  return std::string(1, kKindChar[static_cast<int>(k)]) + "-" +
         type_name(type_of(label));
}

int LabelSpace::parse_label(const std::string& s) const {
  if (s == "O") return kOutside;
  if (s.size() < 3 || s[1] != '-') return -1;
  Kind kind;
  switch (s[0]) {
    case 'B': kind = Kind::kB; break;
    case 'I': kind = Kind::kI; break;
    case 'E': kind = Kind::kE; break;
    case 'S': kind = Kind::kS; break;
    default: return -1;
  }
  if (schema_ == Schema::kIob2 && (kind == Kind::kE || kind == Kind::kS)) return -1;
  int type = type_index(s.substr(2));
  if (type < 0) return -1;
  return label_id(kind, type);
}

bool LabelSpace::operator==(const LabelSpace& other) const {
  if (schema_ != other.schema_ || types_.size() != other.types_.size()) return false;
  for (size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].name != other.types_[i].name) return false;
  }
  return true;
}

LabelSeq encode_spans(const std::vector<EntitySpan>& spans, int length,
                      const LabelSpace& space) {
  std::vector<EntitySpan> sorted = spans;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i) {
    const EntitySpan& s = sorted[i];
    require(s.start >= 0 && s.start <= s.end && s.end < length,
            "span [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                "] out of range for length " + std::to_string(length));
    require(s.type >= 0 && s.type < space.num_types(),
            "span type index out of range");
    if (i > 0) {
      const EntitySpan& prev = sorted[i - 1];
      require(prev.end < s.start,
              "overlapping spans [" + std::to_string(prev.start) + "," +
                  std::to_string(prev.end) + "] and [" + std::to_string(s.start) +
                  "," + std::to_string(s.end) + "]");
    }
  }

  LabelSeq labels(static_cast<size_t>(length), LabelSpace::kOutside);
  for (const EntitySpan& s : sorted) {
    if (space.schema() == Schema::kIobes) {
      if (s.start == s.end) {
        labels[static_cast<size_t>(s.start)] = space.label_id(Kind::kS, s.type);
      } else {
        labels[static_cast<size_t>(s.start)] = space.label_id(Kind::kB, s.type);
        for (int t = s.start + 1; t < s.end; ++t) {
          labels[static_cast<size_t>(t)] = space.label_id(Kind::kI, s.type);
        }
        labels[static_cast<size_t>(s.end)] = space.label_id(Kind::kE, s.type);
      }
    } else {
      labels[static_cast<size_t>(s.start)] = space.label_id(Kind::kB, s.type);
      for (int t = s.start + 1; t <= s.end; ++t) {
        labels[static_cast<size_t>(t)] = space.label_id(Kind::kI, s.type);
      }
    }
  }
  return labels;
}

namespace {

// Does the label at t+1 continue the chunk open at t? Under IOBES a chunk
// chains B/I -> I/E within one type; under IOB2 it chains B/I -> I.
bool continues_chunk(const LabelSpace& space, int cur, int next) {
  if (cur == LabelSpace::kOutside || next == LabelSpace::kOutside) return false;
  if (space.type_of(cur) != space.type_of(next)) return false;
  Kind ck = space.kind_of(cur);
  Kind nk = space.kind_of(next);
  if (ck != Kind::kB && ck != Kind::kI) return false;
  if (space.schema() == Schema::kIobes) return nk == Kind::kI || nk == Kind::kE;
  return nk == Kind::kI;
}

bool chunk_is_canonical(const LabelSpace& space, const LabelSeq& labels,
                        int start, int end) {
  Kind first = space.kind_of(labels[static_cast<size_t>(start)]);
  if (space.schema() == Schema::kIob2) return first == Kind::kB;
  if (start == end) return first == Kind::kS;
  if (first != Kind::kB) return false;
  if (space.kind_of(labels[static_cast<size_t>(end)]) != Kind::kE) return false;
  for (int t = start + 1; t < end; ++t) {
    if (space.kind_of(labels[static_cast<size_t>(t)]) != Kind::kI) return false;
  }
  return true;
}

}  // namespace

std::vector<EntitySpan> decode_labels(const LabelSeq& labels,
                                      const LabelSpace& space, int* repairs) {
  std::vector<EntitySpan> spans;
  int n = static_cast<int>(labels.size());
  int t = 0;
  while (t < n) {
    int label = labels[static_cast<size_t>(t)];
    require(space.valid_label(label), "label id out of range in decode_labels");
    if (label == LabelSpace::kOutside) {
      ++t;
      continue;
    }
    int start = t;
    while (t + 1 < n &&
           continues_chunk(space, labels[static_cast<size_t>(t)],
                           labels[static_cast<size_t>(t + 1)])) {
      ++t;
    }
    spans.push_back(EntitySpan{start, t, space.type_of(label)});
    if (repairs != nullptr && !chunk_is_canonical(space, labels, start, t)) {
      ++(*repairs);
    }
    ++t;
  }
  return spans;
}

LabelSeq project_labels(const LabelSeq& labels, const TypeSet& target,
                        const LabelSpace& space) {
  require(target.subset_of(space.all_types()),
          "projection target is not a subset of the label space's types");
  LabelSeq out(labels.size(), LabelSpace::kOutside);
  for (size_t i = 0; i < labels.size(); ++i) {
    int label = labels[i];
    require(space.valid_label(label), "label id out of range in project_labels");
    if (label != LabelSpace::kOutside && target.contains(space.type_of(label))) {
      out[i] = label;
    }
  }
  return out;
}

}  // namespace ptner
