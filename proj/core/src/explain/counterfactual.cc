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

#include "convxai/explain/counterfactual.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "convxai/error.h"
#include "convxai/random.h"

namespace convxai::explain {
namespace {

constexpr int kBisectSteps = 40;
constexpr int kElites = 2;

double Logit(double p) {
  p = std::clamp(p, 1e-6, 1.0 - 1e-6);
  return std::log(p / (1.0 - p));
}

double RoundTo(double v, int digits) {
  const double f = std::pow(10.0, digits);
  return std::round(v * f) / f;
}

// Rounds `v` away from `from` to the fewest decimals that still flip the
// prediction and stay within 1% of the move; the feature's precision, when
// set, is used instead. Keeps `v` when nothing qualifies.
template <typename ValidFn>
double Snap(double from, double v, const std::optional<int>& precision,
            ValidFn valid) {
  auto away = [&](int digits) {
    const double f = std::pow(10.0, digits);
    return v > from ? std::ceil(v * f - 1e-9) / f : std::floor(v * f + 1e-9) / f;
  };
  if (precision) {
    const double r = away(*precision);
    return valid(r) ? r : v;
  }
  const double tol = 0.01 * std::abs(v - from);
  for (int d = 0; d <= 8; ++d) {
    const double r = away(d);
    if (std::abs(r - v) <= tol && valid(r)) return r;
  }
  return v;
}

void CheckTarget(const model::Classifier& model,
                 const tabular::Instance& instance, int target_class) {
  if (target_class < 0 ||
      static_cast<std::size_t>(target_class) >= model.num_classes()) {
    throw PreconditionError("target class out of range: " +
                            std::to_string(target_class));
  }
  if (model.Predict(instance) == target_class) {
    throw PreconditionError("instance is already predicted as the target class");
  }
}

class GeneticSearch {
 public:
  GeneticSearch(const model::Classifier& model, const tabular::Instance& x,
                int target, const tabular::PerturbationSampler& sampler,
                std::vector<std::size_t> features, const CfConstraints& cons,
                const CfConfig& config)
      : model_(model),
        x_(x),
        target_(target),
        sampler_(sampler),
        schema_(sampler.schema()),
        features_(std::move(features)),
        cons_(cons),
        config_(config),
        rng_(MixSeed(config.seed, 0xcf)) {}

  CfResult Run() {
    std::vector<tabular::Instance> pop;
    pop.reserve(config_.pop_size);
    for (int i = 0; i < config_.pop_size; ++i) pop.push_back(RandomCandidate());

    std::vector<tabular::Instance> elites;
    for (int gen = 0; gen < config_.generations; ++gen) {
      std::vector<double> base(pop.size());
      for (std::size_t i = 0; i < pop.size(); ++i) base[i] = Evaluate(pop[i]);
      // Diversity bonus relative to the previous generation's elites.
      std::vector<double> fitness(pop.size());
      for (std::size_t i = 0; i < pop.size(); ++i) {
        double div = 0.0;
        int n = 0;
        for (const auto& e : elites) {
          if (e == pop[i]) continue;
          div += Distance(pop[i], e);
          ++n;
        }
        fitness[i] = base[i] - config_.lambda_div * (n > 0 ? div / n : 0.0);
      }
      std::vector<std::size_t> order(pop.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return fitness[a] < fitness[b];
      });
      elites.clear();
      for (std::size_t i = 0; i < order.size() &&
                              elites.size() < static_cast<std::size_t>(cons_.k);
           ++i) {
        elites.push_back(pop[order[i]]);
      }
      std::vector<tabular::Instance> next;
      next.reserve(pop.size());
      for (int e = 0; e < kElites && e < static_cast<int>(order.size()); ++e) {
        next.push_back(pop[order[e]]);
      }
      while (next.size() < pop.size()) {
        const auto& a = pop[Tournament(fitness)];
        const auto& b = pop[Tournament(fitness)];
        tabular::Instance child = a;
        for (std::size_t f : features_) {
          if (UniformUnit(rng_) < 0.5) child[f] = b[f];
        }
        Mutate(child);
        next.push_back(std::move(child));
      }
      pop = std::move(next);
    }
    for (const auto& c : pop) Evaluate(c);
    return Finish();
  }

 private:
  double Distance(const tabular::Instance& a, const tabular::Instance& b) const {
    return CfDistance(schema_, sampler_, a, b);
  }

  std::vector<std::size_t> ChangedSet(const tabular::Instance& c) const {
    std::vector<std::size_t> fs;
    for (std::size_t f : features_) {
      if (c[f] != x_[f]) fs.push_back(f);
    }
    return fs;
  }

  bool Valid(const tabular::Instance& c) const {
    return model_.Predict(c) == target_;
  }

  // Hinge on the target logit plus the proximity term. Valid candidates are
  // archived as a side effect.
  double Evaluate(const tabular::Instance& c) {
    const double p = model_.PredictProba(c)[target_];
    const double hinge = std::max(0.0, 1.0 - Logit(p));
    const double dist = Distance(c, x_);
    if (Valid(c)) {
      archive_.emplace(c.values, dist);
    } else if (!best_invalid_ || p > best_invalid_p_ ||
               (p == best_invalid_p_ && dist < best_invalid_dist_)) {
      best_invalid_ = c;
      best_invalid_p_ = p;
      best_invalid_dist_ = dist;
    }
    return hinge + config_.lambda_prox * dist;
  }

  std::size_t Tournament(const std::vector<double>& fitness) {
    const std::size_t a = UniformIndex(rng_, fitness.size());
    const std::size_t b = UniformIndex(rng_, fitness.size());
    return fitness[b] < fitness[a] ? b : a;
  }

  double Propose(std::size_t f) {
    const auto& spec = schema_.feature(f);
    double v = sampler_.DrawFeature(f, rng_);
    if (spec.numeric() && spec.precision) v = RoundTo(v, *spec.precision);
    return v;
  }

  tabular::Instance RandomCandidate() {
    tabular::Instance c = x_;
    const std::size_t r =
        1 + UniformIndex(rng_, std::min<std::size_t>(3, features_.size()));
    std::vector<std::size_t> pick = features_;
    Shuffle(pick.begin(), pick.end(), rng_);
    for (std::size_t i = 0; i < r; ++i) c[pick[i]] = Propose(pick[i]);
    return c;
  }

  void Mutate(tabular::Instance& c) {
    const double rate = 1.0 / static_cast<double>(features_.size());
    for (std::size_t f : features_) {
      if (UniformUnit(rng_) >= rate) continue;
      const auto& spec = schema_.feature(f);
      const double u = UniformUnit(rng_);
      if (u < 0.3) {
        c[f] = x_[f];
      } else if (spec.numeric() && u < 0.65) {
        const auto [lo, hi] = SearchBounds(spec);
        double v = c[f] + sampler_.Scale(f) * StandardNormal(rng_);
        if (spec.precision) v = RoundTo(v, *spec.precision);
        c[f] = std::clamp(v, lo, hi);
      } else {
        c[f] = Propose(f);
      }
    }
  }

  // Reverts what is not needed, then pulls numerics back to the boundary.
  tabular::Instance Refine(tabular::Instance c) const {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::pair<double, std::size_t>> diffs;
      for (std::size_t f : features_) {
        if (c[f] == x_[f]) continue;
        tabular::Instance one = x_;
        one[f] = c[f];
        diffs.emplace_back(Distance(one, x_), f);
      }
      std::sort(diffs.begin(), diffs.end());
      for (auto it = diffs.rbegin(); it != diffs.rend(); ++it) {
        tabular::Instance t = c;
        t[it->second] = x_[it->second];
        if (Valid(t)) {
          c = std::move(t);
          changed = true;
          break;
        }
      }
    }
    for (std::size_t f : features_) {
      if (c[f] == x_[f] || !schema_.feature(f).numeric()) continue;
      c[f] = BisectTowardOriginal(c, f);
    }
    return c;
  }

  double BisectTowardOriginal(const tabular::Instance& c, std::size_t f) const {
    tabular::Instance t = c;
    double lo = 0.0;  // fraction of the move; 0 = original value
    double hi = 1.0;  // known valid
    const double from = x_[f];
    const double to = c[f];
    for (int i = 0; i < kBisectSteps; ++i) {
      const double mid = 0.5 * (lo + hi);
      t[f] = from + mid * (to - from);
      if (Valid(t)) hi = mid; else lo = mid;
    }
    const double v = from + hi * (to - from);
    return Snap(from, v, schema_.feature(f).precision, [&](double r) {
      t[f] = r;
      return Valid(t);
    });
  }

  CfResult Finish() {
    CfResult out;
    if (archive_.empty()) {
      out.best_invalid = best_invalid_;
      out.best_invalid_probability = best_invalid_p_;
      return out;
    }
    std::vector<std::pair<double, tabular::Instance>> ranked;
    for (const auto& [values, dist] : archive_) {
      tabular::Instance c;
      c.values = values;
      ranked.emplace_back(dist, std::move(c));
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    // Refine the closest few of every changed-feature set so one popular
    // set cannot crowd out the rest.
    const std::size_t budget = 20 * static_cast<std::size_t>(cons_.k);
    std::map<std::vector<std::size_t>, int> per_set;
    std::map<std::vector<double>, double> refined;
    std::size_t refined_count = 0;
    for (const auto& [dist, c] : ranked) {
      if (refined_count >= budget) break;
      if (++per_set[ChangedSet(c)] > 2) continue;
      ++refined_count;
      tabular::Instance r = Refine(c);
      if (Valid(r)) refined.emplace(r.values, Distance(r, x_));
    }
    std::vector<tabular::Instance> pool;
    for (const auto& [values, dist] : refined) {
      tabular::Instance c;
      c.values = values;
      pool.push_back(std::move(c));
    }
    std::stable_sort(pool.begin(), pool.end(), [&](const auto& a, const auto& b) {
      return refined.at(a.values) < refined.at(b.values);
    });
    // Greedy diverse pick: closest first, then trade proximity for distance
    // to what is already chosen.
    // The first pass only takes candidates changing a feature set not yet
    // covered.
    std::vector<tabular::Instance> chosen;
    std::vector<bool> used(pool.size(), false);
    std::set<std::vector<std::size_t>> covered;
    bool distinct_pass = true;
    while (chosen.size() < static_cast<std::size_t>(cons_.k)) {
      double best = -std::numeric_limits<double>::infinity();
      std::size_t pick = pool.size();
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (used[i]) continue;
        if (distinct_pass && covered.count(ChangedSet(pool[i]))) continue;
        double nearest = 0.0;
        if (!chosen.empty()) {
          nearest = std::numeric_limits<double>::infinity();
          for (const auto& s : chosen) nearest = std::min(nearest, Distance(pool[i], s));
        }
        const double score = -config_.lambda_prox * refined.at(pool[i].values) +
                             config_.lambda_div * nearest;
        if (score > best) {
          best = score;
          pick = i;
        }
      }
      if (pick == pool.size()) {
        if (!distinct_pass) break;
        distinct_pass = false;
        continue;
      }
      used[pick] = true;
      covered.insert(ChangedSet(pool[pick]));
      chosen.push_back(pool[pick]);
    }
    for (const auto& c : chosen) {
      out.counterfactuals.push_back(MakeCounterfactual(sampler_, x_, c, target_));
    }
    std::stable_sort(out.counterfactuals.begin(), out.counterfactuals.end(),
                     [](const auto& a, const auto& b) {
                       return a.proximity < b.proximity;
                     });
    return out;
  }

  const model::Classifier& model_;
  const tabular::Instance& x_;
  int target_;
  const tabular::PerturbationSampler& sampler_;
  const tabular::Schema& schema_;
  std::vector<std::size_t> features_;
  const CfConstraints& cons_;
  const CfConfig& config_;
  Rng rng_;
  std::map<std::vector<double>, double> archive_;
  std::optional<tabular::Instance> best_invalid_;
  double best_invalid_p_ = -1.0;
  double best_invalid_dist_ = 0.0;
};

}  // namespace

Json Counterfactual::ToJson(const tabular::Schema& schema) const {
  Json changes = Json::array();
  for (const auto& c : changed) {
    changes.push_back({{"feature", schema.feature(c.feature).name},
                       {"old", schema.FormatValue(c.feature, c.old_value)},
                       {"new", schema.FormatValue(c.feature, c.new_value)}});
  }
  Json values = Json::object();
  for (std::size_t j = 0; j < cf_instance.size(); ++j) {
    values[schema.feature(j).name] = schema.FormatValue(j, cf_instance[j]);
  }
  return Json{{"cf_instance", values},
              {"target_class", schema.class_name(target_class)},
              {"changed", changes},
              {"sparsity", sparsity},
              {"proximity", proximity}};
}

Json CfResult::ToJson(const tabular::Schema& schema) const {
  Json list = Json::array();
  for (const auto& c : counterfactuals) list.push_back(c.ToJson(schema));
  Json j{{"found", found()}, {"counterfactuals", list}};
  if (best_invalid) {
    j["best_invalid"] = best_invalid->values;
    j["best_invalid_probability"] = best_invalid_probability;
  }
  return j;
}

Json CfConfig::ToJson() const {
  return Json{{"pop_size", pop_size},       {"generations", generations},
              {"lambda_prox", lambda_prox}, {"lambda_div", lambda_div},
              {"seed", seed},               {"grid_resolution", grid_resolution}};
}

CfConfig CfConfig::FromJson(const Json& json) {
  CfConfig c;
  c.pop_size = json.value("pop_size", c.pop_size);
  c.generations = json.value("generations", c.generations);
  c.lambda_prox = json.value("lambda_prox", c.lambda_prox);
  c.lambda_div = json.value("lambda_div", c.lambda_div);
  c.seed = json.value("seed", c.seed);
  c.grid_resolution = json.value("grid_resolution", c.grid_resolution);
  std::vector<std::string> problems;
  if (c.pop_size < 4) problems.push_back("counterfactual.pop_size < 4");
  if (c.generations < 1) problems.push_back("counterfactual.generations < 1");
  if (c.lambda_prox < 0 || c.lambda_div < 0) {
    problems.push_back("counterfactual lambdas must be non-negative");
  }
  if (c.grid_resolution < 2) problems.push_back("counterfactual.grid_resolution < 2");
  if (!problems.empty()) throw ValidationError("E_CONFIG", problems);
  return c;
}

std::pair<double, double> SearchBounds(const tabular::FeatureSpec& feature) {
  const double range = feature.max - feature.min;
  return {feature.min - 0.2 * range, feature.max + 0.2 * range};
}

double CfDistance(const tabular::Schema& schema,
                  const tabular::PerturbationSampler& sampler,
                  const tabular::Instance& a, const tabular::Instance& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == b[j]) continue;
    d += schema.feature(j).numeric() ? std::abs(a[j] - b[j]) / sampler.Scale(j)
                                     : 1.0;
  }
  return d;
}

Counterfactual MakeCounterfactual(const tabular::PerturbationSampler& sampler,
                                  const tabular::Instance& original,
                                  const tabular::Instance& cf,
                                  int target_class) {
  Counterfactual c;
  c.cf_instance = cf;
  c.target_class = target_class;
  for (std::size_t j = 0; j < cf.size(); ++j) {
    if (cf[j] != original[j]) c.changed.push_back({j, original[j], cf[j]});
  }
  c.sparsity = c.changed.size();
  c.proximity = CfDistance(sampler.schema(), sampler, original, cf);
  return c;
}

CfResult Counterfactuals(const model::Classifier& model,
                         const tabular::Instance& instance, int target_class,
                         const tabular::PerturbationSampler& sampler,
                         const CfConstraints& constraints,
                         const CfConfig& config) {
  const auto& schema = sampler.schema();
  if (instance.size() != schema.num_features()) {
    throw PreconditionError("instance width differs from the sampler schema");
  }
  CheckTarget(model, instance, target_class);
  if (constraints.k < 1) throw PreconditionError("k must be at least 1");
  std::vector<std::size_t> features;
  for (std::size_t j = 0; j < schema.num_features(); ++j) {
    const bool allowed = !constraints.allowed_features ||
                         constraints.allowed_features->count(j) > 0;
    const bool frozen = constraints.immutable_features.count(j) > 0;
    if (allowed && frozen) {
      throw PreconditionError("feature is both allowed and immutable: " +
                              schema.feature(j).name);
    }
    if (allowed && !frozen && schema.feature(j).is_mutable) features.push_back(j);
  }
  if (features.empty()) throw PreconditionError("no feature may change");
  GeneticSearch search(model, instance, target_class, sampler,
                       std::move(features), constraints, config);
  return search.Run();
}

CfResult ConstrainedCounterfactual(const model::Classifier& model,
                                   const tabular::Instance& instance,
                                   int target_class, std::size_t feature,
                                   const tabular::PerturbationSampler& sampler,
                                   const CfConfig& config) {
  const auto& schema = sampler.schema();
  if (feature >= schema.num_features()) {
    throw PreconditionError("unknown feature index " + std::to_string(feature));
  }
  const auto& spec = schema.feature(feature);
  if (!spec.is_mutable) {
    throw PreconditionError("feature is immutable: " + spec.name);
  }
  CheckTarget(model, instance, target_class);

  CfResult out;
  tabular::Instance z = instance;
  auto consider_invalid = [&](const tabular::Instance& c, double p) {
    if (!out.best_invalid || p > out.best_invalid_probability) {
      out.best_invalid = c;
      out.best_invalid_probability = p;
    }
  };
  if (!spec.numeric()) {
    double best_p = -1.0;
    std::optional<tabular::Instance> best;
    for (std::size_t c = 0; c < spec.categories.size(); ++c) {
      if (static_cast<double>(c) == instance[feature]) continue;
      z[feature] = static_cast<double>(c);
      const double p = model.PredictProba(z)[target_class];
      if (model.Predict(z) != target_class) {
        consider_invalid(z, p);
        continue;
      }
      if (p > best_p) {
        best_p = p;
        best = z;
      }
    }
    if (best) {
      out.counterfactuals.push_back(
          MakeCounterfactual(sampler, instance, *best, target_class));
    }
    return out;
  }

  const auto [lo, hi] = SearchBounds(spec);
  const int steps = config.grid_resolution;
  std::optional<double> nearest;
  for (int i = 0; i <= steps; ++i) {
    double v = lo + (hi - lo) * i / steps;
    if (spec.precision) v = RoundTo(v, *spec.precision);
    if (v == instance[feature]) continue;
    z[feature] = v;
    if (model.Predict(z) != target_class) {
      consider_invalid(z, model.PredictProba(z)[target_class]);
      continue;
    }
    if (!nearest || std::abs(v - instance[feature]) <
                        std::abs(*nearest - instance[feature])) {
      nearest = v;
    }
  }
  if (!nearest) return out;
  // Pull the grid point back to the closest flipping value on the segment.
  const double from = instance[feature];
  const double to = *nearest;
  double lo_t = 0.0;
  double hi_t = 1.0;
  for (int i = 0; i < kBisectSteps; ++i) {
    const double mid = 0.5 * (lo_t + hi_t);
    z[feature] = from + mid * (to - from);
    if (model.Predict(z) == target_class) hi_t = mid; else lo_t = mid;
  }
  double v = Snap(from, from + hi_t * (to - from), spec.precision,
                  [&](double r) {
                    z[feature] = r;
                    return model.Predict(z) == target_class;
                  });
  z[feature] = v;
  if (v == from || model.Predict(z) != target_class) z[feature] = to;
  out.counterfactuals.push_back(
      MakeCounterfactual(sampler, instance, z, target_class));
  return out;
}

}  // namespace convxai::explain
