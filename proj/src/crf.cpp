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

#include "ptner/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ptner/error.hpp"

namespace ptner {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log-sum-exp; numerically safe for any mix of magnitudes.
struct LogSumAcc {
  double max_v = kNegInf;
  double sum = 0.0;

  void add(double x) {
    if (x == kNegInf) return;
    if (x <= max_v) {
      sum += std::exp(x - max_v);
    } else {
      sum = sum * std::exp(max_v - x) + 1.0;
      max_v = x;
    }
  }
  double value() const {
    return max_v == kNegInf ? kNegInf : max_v + std::log(sum);
  }
};

// Calls fn(y) for every sequence with y[t] drawn from choices[t], in
// lexicographic order (position 0 most significant). choices rows non-empty.
template <typename Fn>
void enumerate_sequences(const std::vector<std::vector<int>>& choices, Fn&& fn) {
  const int t_len = static_cast<int>(choices.size());
  std::vector<int> idx(static_cast<size_t>(t_len), 0);
  LabelSeq y(static_cast<size_t>(t_len));
  for (int t = 0; t < t_len; ++t) y[static_cast<size_t>(t)] = choices[static_cast<size_t>(t)][0];
  while (true) {
    fn(y);
    int t = t_len - 1;
    while (t >= 0) {
      size_t st = static_cast<size_t>(t);
      if (++idx[st] < static_cast<int>(choices[st].size())) {
        y[st] = choices[st][static_cast<size_t>(idx[st])];
        break;
      }
      idx[st] = 0;
      y[st] = choices[st][0];
      --t;
    }
    if (t < 0) break;
  }
}

std::vector<std::vector<int>> lattice_choices(const Lattice& lattice) {
  std::vector<std::vector<int>> choices(static_cast<size_t>(lattice.length()));
  for (int t = 0; t < lattice.length(); ++t) {
    for (int l = 0; l < lattice.n_labels(); ++l) {
      if (lattice.allowed(t, l)) choices[static_cast<size_t>(t)].push_back(l);
    }
    require(!choices[static_cast<size_t>(t)].empty(),
            "lattice has no allowed label at position " + std::to_string(t));
  }
  return choices;
}

std::vector<std::vector<int>> full_choices(int t_len, int n_labels) {
  std::vector<int> row(static_cast<size_t>(n_labels));
  for (int l = 0; l < n_labels; ++l) row[static_cast<size_t>(l)] = l;
  return std::vector<std::vector<int>>(static_cast<size_t>(t_len), row);
}

void check_enumeration_guard(int t_len, int n_labels) {
  double total = std::pow(static_cast<double>(n_labels), static_cast<double>(t_len));
  require(total <= 1e7, "enumeration guard: " + std::to_string(n_labels) + "^" +
                            std::to_string(t_len) + " sequences exceed 1e7");
}

void check_shapes(const ScoreTable& scores, const Lattice& lattice) {
  require(scores.length == lattice.length() && scores.n_labels == lattice.n_labels(),
          "score table and lattice shapes disagree");
  require(scores.length > 0, "empty sentence");
}

// Forward pass shared by log_partition and marginals so both produce
// bit-identical log Z. alpha rows include the emission at their position.
double forward_pass(const ScoreTable& sc, const Lattice& lat,
                    std::vector<double>* alpha_out) {
  const int t_len = sc.length;
  const int n = sc.n_labels;
  std::vector<double> alpha(static_cast<size_t>(t_len) * static_cast<size_t>(n), kNegInf);
  for (int l = 0; l < n; ++l) {
    if (lat.allowed(0, l)) alpha[static_cast<size_t>(l)] = sc.start[static_cast<size_t>(l)] + sc.em(0, l);
  }
  std::vector<double> terms(static_cast<size_t>(n));
  for (int t = 1; t < t_len; ++t) {
    for (int to = 0; to < n; ++to) {
      if (!lat.allowed(t, to)) continue;
      int cnt = 0;
      for (int from = 0; from < n; ++from) {
        if (!lat.allowed(t - 1, from)) continue;
        terms[static_cast<size_t>(cnt++)] =
            alpha[static_cast<size_t>(t - 1) * static_cast<size_t>(n) + static_cast<size_t>(from)] +
            sc.tr(from, to);
      }
      double lse = log_sum_exp(terms.data(), cnt);
      alpha[static_cast<size_t>(t) * static_cast<size_t>(n) + static_cast<size_t>(to)] =
          lse == kNegInf ? kNegInf : lse + sc.em(t, to);
    }
  }
  int cnt = 0;
  for (int l = 0; l < n; ++l) {
    if (!lat.allowed(t_len - 1, l)) continue;
    terms[static_cast<size_t>(cnt++)] =
        alpha[static_cast<size_t>(t_len - 1) * static_cast<size_t>(n) + static_cast<size_t>(l)] +
        sc.stop[static_cast<size_t>(l)];
  }
  double log_z = log_sum_exp(terms.data(), cnt);
  if (alpha_out != nullptr) *alpha_out = std::move(alpha);
  return log_z;
}

bool iobes_pair_ok(Kind a, int ta, Kind b, int tb) {
  bool a_open = (a == Kind::kB || a == Kind::kI);
  if (a_open) return (b == Kind::kI || b == Kind::kE) && tb == ta;
  // From O, E or S a fresh chunk (or O) must follow.
  return b == Kind::kO || b == Kind::kB || b == Kind::kS;
}

bool iob2_pair_ok(Kind a, int ta, Kind b, int tb) {
  if (b == Kind::kI) return (a == Kind::kB || a == Kind::kI) && tb == ta;
  return b == Kind::kO || b == Kind::kB;
}

}  // namespace

Model Model::zeros(LabelSpace space, FeatureVocab vocab) {
  Model m{std::move(space), std::move(vocab), {}, {}, {}, {}, false};
  size_t n = static_cast<size_t>(m.num_labels());
  m.emission.assign(m.vocab.size() * n, 0.0);
  m.transition.assign(n * n, 0.0);
  m.start.assign(n, 0.0);
  m.stop.assign(n, 0.0);
  return m;
}

Lattice::Lattice(int length, int n_labels, bool allow_all)
    : length_(length), n_labels_(n_labels) {
  require(length > 0 && n_labels > 0, "lattice must have positive dimensions");
  mask_.assign(static_cast<size_t>(length) * static_cast<size_t>(n_labels),
               allow_all ? 1 : 0);
}

Lattice Lattice::singleton(const LabelSeq& y, int n_labels) {
  Lattice lat(static_cast<int>(y.size()), n_labels, false);
  for (int t = 0; t < lat.length(); ++t) {
    int l = y[static_cast<size_t>(t)];
    require(l >= 0 && l < n_labels, "label id out of range in singleton lattice");
    lat.set_allowed(t, l, true);
  }
  return lat;
}

size_t Lattice::allowed_count(int t) const {
  size_t c = 0;
  for (int l = 0; l < n_labels_; ++l) c += allowed(t, l) ? 1 : 0;
  return c;
}

bool Lattice::is_full() const {
  for (uint8_t v : mask_) {
    if (v == 0) return false;
  }
  return true;
}

bool Lattice::contains(const LabelSeq& y) const {
  if (static_cast<int>(y.size()) != length_) return false;
  for (int t = 0; t < length_; ++t) {
    int l = y[static_cast<size_t>(t)];
    if (l < 0 || l >= n_labels_ || !allowed(t, l)) return false;
  }
  return true;
}

double Lattice::sequence_count() const {
  double total = 1.0;
  for (int t = 0; t < length_; ++t) total *= static_cast<double>(allowed_count(t));
  return total;
}

double log_sum_exp(const double* v, int n) {
  if (n == 0) return kNegInf;
  double m = v[0];
  for (int i = 1; i < n; ++i) m = std::max(m, v[i]);
  if (m == kNegInf) return m;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

ScoreTable score_table(const FeaturizedSentence& fsent, const Model& model) {
  const int t_len = fsent.length();
  const int n = model.num_labels();
  require(t_len > 0, "cannot score an empty sentence");
  ScoreTable sc(t_len, n);
  std::vector<int> scratch;
  for (int t = 0; t < t_len; ++t) {
    for (int f : active_set(fsent.feats[static_cast<size_t>(t)], scratch)) {
      require(f >= 0 && static_cast<size_t>(f) < model.vocab.size(),
              "feature id out of range for model vocabulary");
      const double* row = &model.emission[static_cast<size_t>(f) * static_cast<size_t>(n)];
      double* dst = &sc.emission[static_cast<size_t>(t) * static_cast<size_t>(n)];
      for (int l = 0; l < n; ++l) dst[l] += row[l];
    }
  }
  sc.transition = model.transition;
  sc.start = model.start;
  sc.stop = model.stop;
  if (model.hard_transitions) apply_hard_transitions(sc, model.space);
  return sc;
}

void apply_hard_transitions(ScoreTable& scores, const LabelSpace& space) {
  const int n = scores.n_labels;
  require(n == space.num_labels(), "score table does not match label space");
  const bool iobes = space.schema() == Schema::kIobes;
  for (int a = 0; a < n; ++a) {
    Kind ka = space.kind_of(a);
    int ta = space.type_of(a);
    for (int b = 0; b < n; ++b) {
      Kind kb = space.kind_of(b);
      int tb = space.type_of(b);
      bool ok = iobes ? iobes_pair_ok(ka, ta, kb, tb) : iob2_pair_ok(ka, ta, kb, tb);
      if (!ok) scores.tr(a, b) = kNegInf;
    }
    bool can_start = iobes ? (ka == Kind::kO || ka == Kind::kB || ka == Kind::kS)
                           : (ka == Kind::kO || ka == Kind::kB);
    bool can_stop = iobes ? (ka == Kind::kO || ka == Kind::kE || ka == Kind::kS) : true;
    if (!can_start) scores.start[static_cast<size_t>(a)] = kNegInf;
    if (!can_stop) scores.stop[static_cast<size_t>(a)] = kNegInf;
  }
}

Lattice constraint_lattice(const LabelSeq& gold, const TypeSet& source,
                           const LabelSpace& space) {
  const int n = space.num_labels();
  Lattice lat(static_cast<int>(gold.size()), n, false);
  for (int t = 0; t < lat.length(); ++t) {
    int g = gold[static_cast<size_t>(t)];
    require(space.valid_label(g), "gold label out of range at position " + std::to_string(t));
    if (g != LabelSpace::kOutside) {
      require(source.contains(space.type_of(g)),
              "gold entity type '" + space.type_name(space.type_of(g)) +
                  "' not in the source typeset at position " + std::to_string(t));
      lat.set_allowed(t, g, true);
    } else {
      lat.set_allowed(t, LabelSpace::kOutside, true);
      for (int l = 1; l < n; ++l) {
        if (!source.contains(space.type_of(l))) lat.set_allowed(t, l, true);
      }
    }
  }
  return lat;
}

double path_score(const ScoreTable& scores, const LabelSeq& y) {
  require(static_cast<int>(y.size()) == scores.length, "path length mismatch");
  int prev = y[0];
  require(prev >= 0 && prev < scores.n_labels, "label id out of range");
  double s = scores.start[static_cast<size_t>(prev)] + scores.em(0, prev);
  for (int t = 1; t < scores.length; ++t) {
    int cur = y[static_cast<size_t>(t)];
    require(cur >= 0 && cur < scores.n_labels, "label id out of range");
    s = s + scores.tr(prev, cur) + scores.em(t, cur);
    prev = cur;
  }
  return s + scores.stop[static_cast<size_t>(prev)];
}

double log_partition(const ScoreTable& scores, const Lattice& lattice) {
  check_shapes(scores, lattice);
  return forward_pass(scores, lattice, nullptr);
}

Marginals marginals(const ScoreTable& scores, const Lattice& lattice) {
  check_shapes(scores, lattice);
  const int t_len = scores.length;
  const int n = scores.n_labels;
  std::vector<double> alpha;
  Marginals out;
  out.log_z = forward_pass(scores, lattice, &alpha);
  require(out.log_z != kNegInf, "lattice carries no probability mass");

  std::vector<double> beta(static_cast<size_t>(t_len) * static_cast<size_t>(n), kNegInf);
  for (int l = 0; l < n; ++l) {
    if (lattice.allowed(t_len - 1, l)) {
      beta[static_cast<size_t>(t_len - 1) * static_cast<size_t>(n) + static_cast<size_t>(l)] =
          scores.stop[static_cast<size_t>(l)];
    }
  }
  std::vector<double> terms(static_cast<size_t>(n));
  for (int t = t_len - 2; t >= 0; --t) {
    for (int from = 0; from < n; ++from) {
      if (!lattice.allowed(t, from)) continue;
      int cnt = 0;
      for (int to = 0; to < n; ++to) {
        if (!lattice.allowed(t + 1, to)) continue;
        terms[static_cast<size_t>(cnt++)] =
            scores.tr(from, to) + scores.em(t + 1, to) +
            beta[static_cast<size_t>(t + 1) * static_cast<size_t>(n) + static_cast<size_t>(to)];
      }
      beta[static_cast<size_t>(t) * static_cast<size_t>(n) + static_cast<size_t>(from)] =
          log_sum_exp(terms.data(), cnt);
    }
  }

  out.node.assign(static_cast<size_t>(t_len) * static_cast<size_t>(n), 0.0);
  for (int t = 0; t < t_len; ++t) {
    for (int l = 0; l < n; ++l) {
      size_t i = static_cast<size_t>(t) * static_cast<size_t>(n) + static_cast<size_t>(l);
      if (alpha[i] == kNegInf || beta[i] == kNegInf) continue;
      out.node[i] = std::exp(alpha[i] + beta[i] - out.log_z);
    }
  }
  if (t_len > 1) {
    out.edge.assign(static_cast<size_t>(t_len - 1) * static_cast<size_t>(n) * static_cast<size_t>(n),
                    0.0);
    for (int t = 0; t + 1 < t_len; ++t) {
      for (int from = 0; from < n; ++from) {
        size_t ia = static_cast<size_t>(t) * static_cast<size_t>(n) + static_cast<size_t>(from);
        if (alpha[ia] == kNegInf) continue;
        for (int to = 0; to < n; ++to) {
          size_t ib = static_cast<size_t>(t + 1) * static_cast<size_t>(n) + static_cast<size_t>(to);
          if (beta[ib] == kNegInf) continue;
          double v = alpha[ia] + scores.tr(from, to) + scores.em(t + 1, to) + beta[ib];
          if (v == kNegInf) continue;
          out.edge[(static_cast<size_t>(t) * static_cast<size_t>(n) + static_cast<size_t>(from)) *
                       static_cast<size_t>(n) +
                   static_cast<size_t>(to)] = std::exp(v - out.log_z);
        }
      }
    }
  }
  return out;
}

ViterbiResult viterbi(const ScoreTable& scores, const Lattice& lattice) {
  check_shapes(scores, lattice);
  const int t_len = scores.length;
  const int n = scores.n_labels;
  std::vector<double> best(static_cast<size_t>(t_len) * static_cast<size_t>(n), kNegInf);
  std::vector<int> back(static_cast<size_t>(t_len) * static_cast<size_t>(n), -1);
  for (int l = 0; l < n; ++l) {
    if (lattice.allowed(0, l)) best[static_cast<size_t>(l)] = scores.start[static_cast<size_t>(l)] + scores.em(0, l);
  }
  for (int t = 1; t < t_len; ++t) {
    for (int to = 0; to < n; ++to) {
      if (!lattice.allowed(t, to)) continue;
      double b = kNegInf;
      int arg = -1;
      for (int from = 0; from < n; ++from) {
        if (!lattice.allowed(t - 1, from)) continue;
        double cand =
            best[static_cast<size_t>(t - 1) * static_cast<size_t>(n) + static_cast<size_t>(from)] +
            scores.tr(from, to);
        if (arg == -1 || cand > b) {
          b = cand;
          arg = from;
        }
      }
      size_t i = static_cast<size_t>(t) * static_cast<size_t>(n) + static_cast<size_t>(to);
      best[i] = b == kNegInf ? kNegInf : b + scores.em(t, to);
      back[i] = arg;
    }
  }
  double final_best = kNegInf;
  int final_arg = -1;
  for (int l = 0; l < n; ++l) {
    if (!lattice.allowed(t_len - 1, l)) continue;
    double cand =
        best[static_cast<size_t>(t_len - 1) * static_cast<size_t>(n) + static_cast<size_t>(l)] +
        scores.stop[static_cast<size_t>(l)];
    if (final_arg == -1 || cand > final_best) {
      final_best = cand;
      final_arg = l;
    }
  }
  require(final_arg != -1, "lattice has no allowed label at the final position");
  ViterbiResult res;
  res.score = final_best;
  res.path.assign(static_cast<size_t>(t_len), 0);
  res.path[static_cast<size_t>(t_len - 1)] = final_arg;
  for (int t = t_len - 1; t > 0; --t) {
    int cur = res.path[static_cast<size_t>(t)];
    res.path[static_cast<size_t>(t - 1)] =
        back[static_cast<size_t>(t) * static_cast<size_t>(n) + static_cast<size_t>(cur)];
  }
  return res;
}

double best_score_outside(const ScoreTable& scores, const Lattice& lattice) {
  check_shapes(scores, lattice);
  const int t_len = scores.length;
  const int n = scores.n_labels;
  // inside[l]: best prefix ending in l that has never left the lattice;
  // outside[l]: best prefix ending in l that has deviated at least once.
  std::vector<double> inside(static_cast<size_t>(n), kNegInf);
  std::vector<double> outside(static_cast<size_t>(n), kNegInf);
  for (int l = 0; l < n; ++l) {
    double s0 = scores.start[static_cast<size_t>(l)] + scores.em(0, l);
    if (lattice.allowed(0, l)) {
      inside[static_cast<size_t>(l)] = s0;
    } else {
      outside[static_cast<size_t>(l)] = s0;
    }
  }
  std::vector<double> next_in(static_cast<size_t>(n));
  std::vector<double> next_out(static_cast<size_t>(n));
  for (int t = 1; t < t_len; ++t) {
    for (int to = 0; to < n; ++to) {
      double best_in = kNegInf;
      double best_out = kNegInf;
      for (int from = 0; from < n; ++from) {
        double tr = scores.tr(from, to);
        double ci = inside[static_cast<size_t>(from)] + tr;
        double co = outside[static_cast<size_t>(from)] + tr;
        if (ci > best_in) best_in = ci;
        if (co > best_out) best_out = co;
      }
      double em = scores.em(t, to);
      if (lattice.allowed(t, to)) {
        next_in[static_cast<size_t>(to)] = best_in == kNegInf ? kNegInf : best_in + em;
        next_out[static_cast<size_t>(to)] = best_out == kNegInf ? kNegInf : best_out + em;
      } else {
        next_in[static_cast<size_t>(to)] = kNegInf;
        double b = std::max(best_in, best_out);
        next_out[static_cast<size_t>(to)] = b == kNegInf ? kNegInf : b + em;
      }
    }
    inside = next_in;
    outside = next_out;
  }
  double best = kNegInf;
  for (int l = 0; l < n; ++l) {
    if (outside[static_cast<size_t>(l)] == kNegInf) continue;
    double cand = outside[static_cast<size_t>(l)] + scores.stop[static_cast<size_t>(l)];
    if (cand > best) best = cand;
  }
  return best;
}

double brute_force_log_partition(const ScoreTable& scores, const Lattice& lattice) {
  check_shapes(scores, lattice);
  check_enumeration_guard(scores.length, scores.n_labels);
  LogSumAcc acc;
  enumerate_sequences(lattice_choices(lattice),
                      [&](const LabelSeq& y) { acc.add(path_score(scores, y)); });
  return acc.value();
}

ViterbiResult brute_force_best(const ScoreTable& scores, const Lattice& lattice) {
  check_shapes(scores, lattice);
  check_enumeration_guard(scores.length, scores.n_labels);
  ViterbiResult res;
  res.score = kNegInf;
  bool first = true;
  enumerate_sequences(lattice_choices(lattice), [&](const LabelSeq& y) {
    double s = path_score(scores, y);
    if (first || s > res.score) {
      res.score = s;
      res.path = y;
      first = false;
    }
  });
  return res;
}

double brute_force_best_outside(const ScoreTable& scores, const Lattice& lattice) {
  check_shapes(scores, lattice);
  check_enumeration_guard(scores.length, scores.n_labels);
  double best = kNegInf;
  enumerate_sequences(full_choices(scores.length, scores.n_labels),
                      [&](const LabelSeq& y) {
                        if (lattice.contains(y)) return;
                        double s = path_score(scores, y);
                        if (s > best) best = s;
                      });
  return best;
}

Marginals brute_force_marginals(const ScoreTable& scores, const Lattice& lattice) {
  check_shapes(scores, lattice);
  check_enumeration_guard(scores.length, scores.n_labels);
  const int t_len = scores.length;
  const int n = scores.n_labels;
  Marginals out;
  out.log_z = brute_force_log_partition(scores, lattice);
  require(out.log_z != kNegInf, "lattice carries no probability mass");
  out.node.assign(static_cast<size_t>(t_len) * static_cast<size_t>(n), 0.0);
  if (t_len > 1) {
    out.edge.assign(static_cast<size_t>(t_len - 1) * static_cast<size_t>(n) * static_cast<size_t>(n),
                    0.0);
  }
  enumerate_sequences(lattice_choices(lattice), [&](const LabelSeq& y) {
    double p = std::exp(path_score(scores, y) - out.log_z);
    for (int t = 0; t < t_len; ++t) {
      out.node[static_cast<size_t>(t) * static_cast<size_t>(n) +
               static_cast<size_t>(y[static_cast<size_t>(t)])] += p;
    }
    for (int t = 0; t + 1 < t_len; ++t) {
      out.edge[(static_cast<size_t>(t) * static_cast<size_t>(n) +
                static_cast<size_t>(y[static_cast<size_t>(t)])) *
                   static_cast<size_t>(n) +
               static_cast<size_t>(y[static_cast<size_t>(t + 1)])] += p;
    }
  });
  return out;
}

}  // namespace ptner
