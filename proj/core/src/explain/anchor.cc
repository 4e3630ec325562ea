// Copyright 2026 The ConvXAI Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "convxai/explain/anchor.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "convxai/error.h"
#include "convxai/tabular/schema.h"

namespace convxai::explain {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Kl(double p, double q) {
  constexpr double kEps = 1e-15;
  p = std::clamp(p, kEps, 1.0 - kEps);
  q = std::clamp(q, kEps, 1.0 - kEps);
  return p * std::log(p / q) + (1 - p) * std::log((1 - p) / (1 - q));
}

struct Arm {
  std::vector<Predicate> predicates;
  int n = 0;
  int positive = 0;
  double coverage = 0.0;

  double mean() const { return n > 0 ? static_cast<double>(positive) / n : 0.0; }
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (const auto& p : predicates) k |= std::uint64_t{1} << p.feature;
    return k;
  }
};

class Search {
 public:
  Search(const model::Classifier& model, const tabular::Instance& x,
         const tabular::PerturbationSampler& sampler,
         const AnchorConfig& config)
      : model_(model),
        x_(x),
        sampler_(sampler),
        config_(config),
        rng_(sampler.Stream(MixSeed(config.seed, 1))),
        target_(model.Predict(x)) {
    Rng cov_rng = sampler.Stream(MixSeed(config.seed, 2));
    coverage_draws_.reserve(config.coverage_samples);
    for (int i = 0; i < config.coverage_samples; ++i) {
      coverage_draws_.push_back(sampler.Draw(cov_rng));
    }
  }

  int target() const { return target_; }
  std::size_t evaluations() const { return evaluations_; }

  void Sample(Arm& arm, int count) {
    count = std::min(count, config_.max_samples_per_rule - arm.n);
    for (int i = 0; i < count; ++i) {
      tabular::Instance z = sampler_.Draw(rng_);
      for (const auto& p : arm.predicates) {
        if (p.categorical) {
          z[p.feature] = x_[p.feature];
        } else {
          z[p.feature] = sampler_.DrawFeatureInInterval(p.feature, p.lo, p.hi,
                                                        x_[p.feature], rng_);
        }
      }
      arm.positive += model_.Predict(z) == target_ ? 1 : 0;
      ++arm.n;
      ++evaluations_;
    }
  }

  void TopUp(Arm& arm) {
    if (arm.n < config_.min_samples) Sample(arm, config_.min_samples - arm.n);
  }

  double Coverage(const std::vector<Predicate>& predicates) const {
    if (coverage_draws_.empty()) return 0.0;
    int hits = 0;
    for (const auto& z : coverage_draws_) {
      bool ok = true;
      for (const auto& p : predicates) ok = ok && p.Holds(z);
      hits += ok ? 1 : 0;
    }
    return static_cast<double>(hits) / coverage_draws_.size();
  }

  // Samples until the lower bound clears tau or the upper bound falls
  // below it.
  bool IsAnchor(Arm& arm) {
    const double level = std::log(2.0 / config_.delta);
    TopUp(arm);
    while (true) {
      const double p = arm.mean();
      if (KlLowerBound(p, level, arm.n) >= config_.tau) return true;
      if (KlUpperBound(p, level, arm.n) < config_.tau) return false;
      if (arm.n >= config_.max_samples_per_rule) return false;
      Sample(arm, config_.batch);
    }
  }

  // KL-LUCB: indices of the `k` arms with the highest precision.
  std::vector<std::size_t> BestArms(std::vector<Arm>& arms, std::size_t k) {
    std::vector<std::size_t> order(arms.size());
    for (auto& a : arms) {
      if (a.n == 0) Sample(a, config_.batch);
    }
    auto rank = [&] {
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return arms[a].mean() > arms[b].mean();
      });
    };
    if (arms.size() <= k) {
      rank();
      return order;
    }
    for (int t = 1;; ++t) {
      rank();
      const double level = std::log(5.0 * arms.size() *
                                    std::pow(static_cast<double>(t), 1.1) /
                                    (4.0 * config_.delta));
      std::size_t weakest = order[0];
      double weakest_lb = kInf;
      for (std::size_t i = 0; i < k; ++i) {
        const Arm& a = arms[order[i]];
        const double lb = KlLowerBound(a.mean(), level, a.n);
        if (lb < weakest_lb) {
          weakest_lb = lb;
          weakest = order[i];
        }
      }
      std::size_t strongest = order[k];
      double strongest_ub = -kInf;
      for (std::size_t i = k; i < order.size(); ++i) {
        const Arm& a = arms[order[i]];
        const double ub = KlUpperBound(a.mean(), level, a.n);
        if (ub > strongest_ub) {
          strongest_ub = ub;
          strongest = order[i];
        }
      }
      if (strongest_ub - weakest_lb < config_.epsilon) break;
      const int before = arms[weakest].n + arms[strongest].n;
      Sample(arms[weakest], config_.batch);
      Sample(arms[strongest], config_.batch);
      if (arms[weakest].n + arms[strongest].n == before) break;
    }
    rank();
    order.resize(k);
    return order;
  }

 private:
  const model::Classifier& model_;
  const tabular::Instance& x_;
  const tabular::PerturbationSampler& sampler_;
  const AnchorConfig& config_;
  Rng rng_;
  int target_;
  std::size_t evaluations_ = 0;
  std::vector<tabular::Instance> coverage_draws_;
};

std::vector<Predicate> CandidatePredicates(
    const tabular::Instance& x, const tabular::PerturbationSampler& sampler,
    const AnchorConfig& config) {
  const auto& schema = sampler.schema();
  std::vector<Predicate> out;
  for (std::size_t j = 0; j < schema.num_features(); ++j) {
    Predicate p;
    p.feature = j;
    if (!schema.feature(j).numeric()) {
      p.categorical = true;
      p.category = x[j];
      out.push_back(p);
      continue;
    }
    auto it = config.bins.find(j);
    std::vector<double> edges =
        it != config.bins.end() ? it->second : sampler.QuartileEdges(j);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    // A single unbounded bin constrains nothing.
    if (edges.empty()) continue;
    p.lo = -kInf;
    p.hi = kInf;
    for (double e : edges) {
      if (x[j] <= e) {
        p.hi = e;
        break;
      }
      p.lo = e;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace

bool Predicate::Holds(const tabular::Instance& z) const {
  if (categorical) return z[feature] == category;
  return z[feature] > lo && z[feature] <= hi;
}

std::string Predicate::Describe(const tabular::Schema& schema) const {
  const auto& name = schema.feature(feature).name;
  if (categorical) return name + " = " + schema.FormatValue(feature, category);
  if (std::isinf(lo) && std::isinf(hi)) return name + " is any value";
  if (std::isinf(lo)) return name + " <= " + tabular::FormatNumber(hi);
  if (std::isinf(hi)) return name + " > " + tabular::FormatNumber(lo);
  return tabular::FormatNumber(lo) + " < " + name +
         " <= " + tabular::FormatNumber(hi);
}

Json Predicate::ToJson(const tabular::Schema& schema) const {
  Json j{{"feature", schema.feature(feature).name},
         {"text", Describe(schema)}};
  if (categorical) {
    j["equals"] = schema.FormatValue(feature, category);
  } else {
    j["lo"] = std::isinf(lo) ? Json(nullptr) : Json(lo);
    j["hi"] = std::isinf(hi) ? Json(nullptr) : Json(hi);
  }
  return j;
}

bool AnchorRule::Holds(const tabular::Instance& z) const {
  return std::all_of(predicates.begin(), predicates.end(),
                     [&](const Predicate& p) { return p.Holds(z); });
}

Json AnchorRule::ToJson(const tabular::Schema& schema) const {
  Json preds = Json::array();
  for (const auto& p : predicates) preds.push_back(p.ToJson(schema));
  return Json{{"predicates", preds},
              {"est_precision", est_precision},
              {"est_coverage", est_coverage},
              {"confidence", confidence},
              {"success", success},
              {"predicted_class", schema.class_name(predicted_class)},
              {"samples", samples}};
}

Json AnchorConfig::ToJson() const {
  return Json{{"tau", tau},
              {"delta", delta},
              {"beam_width", beam_width},
              {"max_predicates", max_predicates},
              {"batch", batch},
              {"epsilon", epsilon},
              {"min_samples", min_samples},
              {"max_samples_per_rule", max_samples_per_rule},
              {"coverage_samples", coverage_samples},
              {"seed", seed}};
}

AnchorConfig AnchorConfig::FromJson(const Json& json) {
  AnchorConfig c;
  c.tau = json.value("tau", c.tau);
  c.delta = json.value("delta", c.delta);
  c.beam_width = json.value("beam_width", c.beam_width);
  c.max_predicates = json.value("max_predicates", c.max_predicates);
  c.batch = json.value("batch", c.batch);
  c.epsilon = json.value("epsilon", c.epsilon);
  c.min_samples = json.value("min_samples", c.min_samples);
  c.max_samples_per_rule =
      json.value("max_samples_per_rule", c.max_samples_per_rule);
  c.coverage_samples = json.value("coverage_samples", c.coverage_samples);
  c.seed = json.value("seed", c.seed);
  std::vector<std::string> problems;
  if (!(c.tau > 0 && c.tau <= 1)) problems.push_back("anchor.tau not in (0, 1]");
  if (!(c.delta > 0 && c.delta < 1)) {
    problems.push_back("anchor.delta not in (0, 1)");
  }
  if (c.beam_width < 1) problems.push_back("anchor.beam_width < 1");
  if (c.batch < 1) problems.push_back("anchor.batch < 1");
  if (c.min_samples > c.max_samples_per_rule) {
    problems.push_back("anchor.min_samples > anchor.max_samples_per_rule");
  }
  if (!problems.empty()) throw ValidationError("E_CONFIG", problems);
  return c;
}

double KlUpperBound(double p, double level, double n) {
  if (n <= 0) return 1.0;
  double lo = p;
  double hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double q = 0.5 * (lo + hi);
    if (n * Kl(p, q) > level) hi = q; else lo = q;
  }
  return lo;
}

double KlLowerBound(double p, double level, double n) {
  if (n <= 0) return 0.0;
  double lo = 0.0;
  double hi = p;
  for (int i = 0; i < 60; ++i) {
    const double q = 0.5 * (lo + hi);
    if (n * Kl(p, q) > level) lo = q; else hi = q;
  }
  return hi;
}

AnchorRule FindAnchor(const model::Classifier& model,
                      const tabular::Instance& instance,
                      const tabular::PerturbationSampler& sampler,
                      const AnchorConfig& config) {
  if (instance.size() != sampler.num_features()) {
    throw PreconditionError("instance width differs from the sampler schema");
  }
  if (instance.size() > 64) throw PreconditionError("more than 64 features");
  Search search(model, instance, sampler, config);
  AnchorRule out;
  out.confidence = 1.0 - config.delta;
  out.predicted_class = search.target();

  auto finish = [&](Arm& arm, bool success) {
    search.TopUp(arm);
    out.predicates = arm.predicates;
    out.est_precision = arm.mean();
    out.est_coverage = search.Coverage(arm.predicates);
    out.success = success;
    out.samples = search.evaluations();
    return out;
  };

  Arm empty;
  if (search.IsAnchor(empty)) return finish(empty, true);

  const auto predicates = CandidatePredicates(instance, sampler, config);
  const std::size_t max_len =
      config.max_predicates > 0
          ? std::min<std::size_t>(config.max_predicates, predicates.size())
          : predicates.size();
  std::vector<Arm> beam = {empty};
  Arm best_effort = empty;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Arm> candidates;
    std::vector<std::uint64_t> seen;
    for (const auto& b : beam) {
      const std::uint64_t used = b.key();
      for (const auto& p : predicates) {
        if ((used >> p.feature) & 1ULL) continue;
        Arm a;
        a.predicates = b.predicates;
        a.predicates.push_back(p);
        if (std::find(seen.begin(), seen.end(), a.key()) != seen.end()) continue;
        seen.push_back(a.key());
        candidates.push_back(std::move(a));
      }
    }
    if (candidates.empty()) break;
    const auto chosen = search.BestArms(
        candidates, static_cast<std::size_t>(config.beam_width));
    std::vector<Arm> next;
    Arm* winner = nullptr;
    double winner_coverage = -1.0;
    for (std::size_t idx : chosen) next.push_back(candidates[idx]);
    for (auto& a : next) {
      if (!search.IsAnchor(a)) continue;
      const double cov = search.Coverage(a.predicates);
      if (cov > winner_coverage) {
        winner_coverage = cov;
        winner = &a;
      }
    }
    if (winner != nullptr) return finish(*winner, true);
    for (const auto& a : next) {
      if (a.mean() > best_effort.mean()) best_effort = a;
    }
    beam = std::move(next);
  }
  return finish(best_effort, false);
}

}  // namespace convxai::explain
