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

#ifndef PTNER_LABELS_HPP_
#define PTNER_LABELS_HPP_

#include <string>
#include <vector>

namespace ptner {

enum class Schema { kIobes, kIob2 };

std::string schema_name(Schema s);
Schema parse_schema(const std::string& name);

// Position-wise role of a label. Integer values are the per-type label
// offsets, see LabelSpace::label_id.
enum class Kind : int { kO = -1, kB = 0, kI = 1, kE = 2, kS = 3 };

struct EntityType {
  std::string name;
  int index = -1;  // position in the canonical ordering
};

// An ordered subset of a LabelSpace's entity types, stored as sorted unique
// indices. Immutable after construction.
class TypeSet {
 public:
  TypeSet() = default;
  explicit TypeSet(std::vector<int> members);
  static TypeSet all(int n_types);
  static TypeSet single(int type) { return TypeSet({type}); }

  bool contains(int type) const;
  bool subset_of(const TypeSet& other) const;
  TypeSet unite(const TypeSet& other) const;
  TypeSet intersect(const TypeSet& other) const;

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool operator==(const TypeSet& other) const { return members_ == other.members_; }
  bool operator!=(const TypeSet& other) const { return !(*this == other); }

 private:
  std::vector<int> members_;
};

// A half-open token span would invite off-by-one mistakes against the
// label-per-token view, so both ends are inclusive.
struct EntitySpan {
  int start = 0;  // inclusive
  int end = 0;    // inclusive
  int type = 0;

  bool operator==(const EntitySpan& o) const {
    return start == o.start && end == o.end && type == o.type;
  }
  bool operator<(const EntitySpan& o) const {
    if (start != o.start) return start < o.start;
    if (end != o.end) return end < o.end;
    return type < o.type;
  }
};

// The label inventory induced by an ordered list of entity types under a
// tagging schema. Label ids are dense: O is 0; under IOBES type t owns
// ids 4t+1..4t+4 in the order B,I,E,S; under IOB2 it owns 2t+1..2t+2 in
// the order B,I.
class LabelSpace {
 public:
  LabelSpace(std::vector<std::string> type_names, Schema schema);

  int num_types() const { return static_cast<int>(types_.size()); }
  int num_labels() const;
  Schema schema() const { return schema_; }
  const std::vector<EntityType>& types() const { return types_; }
  const std::string& type_name(int type) const;
  int type_index(const std::string& name) const;  // -1 if unknown
  TypeSet all_types() const { return TypeSet::all(num_types()); }
  std::string typeset_name(const TypeSet& ts) const;  // "DNA+protein"

  static constexpr int kOutside = 0;
  int label_id(Kind kind, int type) const;
  Kind kind_of(int label) const;
  int type_of(int label) const;  // -1 for O
  bool valid_label(int label) const { return label >= 0 && label < num_labels(); }

  std::string label_string(int label) const;
  // Exact, case-sensitive parse of "O" / "B-<type>" / ...; -1 if unknown.
  int parse_label(const std::string& s) const;

  bool operator==(const LabelSpace& other) const;
  bool operator!=(const LabelSpace& other) const { return !(*this == other); }

 private:
  std::vector<EntityType> types_;
  Schema schema_;
};

using LabelSeq = std::vector<int>;

// Spans -> label sequence. Rejects overlapping or out-of-range spans.
LabelSeq encode_spans(const std::vector<EntitySpan>& spans, int length,
                      const LabelSpace& space);

// Label sequence -> maximal well-formed spans. Total: ill-formed fragments
// are repaired with the conlleval convention (a run of same-type labels is
// one chunk as long as each step is B/I followed by I/E; anything that
// breaks the chain starts a new chunk). Increments *repairs once per chunk
// whose tag pattern was not canonical.
std::vector<EntitySpan> decode_labels(const LabelSeq& labels,
                                      const LabelSpace& space,
                                      int* repairs = nullptr);

// Keeps labels whose type is in `target`, rewrites every other entity label
// to O. Rejects targets outside the space.
LabelSeq project_labels(const LabelSeq& labels, const TypeSet& target,
                        const LabelSpace& space);

}  // namespace ptner

#endif  // PTNER_LABELS_HPP_
