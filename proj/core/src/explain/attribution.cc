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

#include "convxai/explain/attribution.h"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "convxai/error.h"
#include "convxai/random.h"

namespace convxai::explain {
namespace {

void CheckInputs(const model::Classifier& model,
                 const tabular::Instance& instance,
                 const std::vector<tabular::Instance>& background,
                 int target_class) {
  if (background.empty()) throw PreconditionError("background set is empty");
  if (target_class < 0 ||
      static_cast<std::size_t>(target_class) >= model.num_classes()) {
    throw PreconditionError("target class out of range: " +
                            std::to_string(target_class));
  }
  for (const auto& b : background) {
    if (b.size() != instance.size()) {
      throw PreconditionError("background row width differs from instance");
    }
  }
  if (instance.size() == 0) throw PreconditionError("instance has no features");
  if (instance.size() > 63) throw PreconditionError("more than 63 features");
}

double Binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Values for all 2^M masks, through the model shortcut when allowed.
std::vector<double> AllValues(const model::Classifier& model,
                              const tabular::Instance& x,
                              const std::vector<tabular::Instance>& background,
                              int target, bool shortcut) {
  if (shortcut) {
    if (auto v = model.CoalitionValues(x, background, target)) return *v;
  }
  const std::size_t n = std::size_t{1} << x.size();
  std::vector<double> values(n);
  for (std::size_t s = 0; s < n; ++s) {
    values[s] = CoalitionValue(model, x, background, target, s);
  }
  return values;
}

}  // namespace

double Attribution::EfficiencyResidual() const {
  double sum = base_value;
  for (double p : phi) sum += p;
  return std::abs(sum - prediction);
}

Json Attribution::ToJson() const {
  return Json{{"base_value", base_value}, {"prediction", prediction},
              {"phi", phi},               {"target_class", target_class},
              {"instance", instance.values}, {"exact", exact}};
}

Json ShapConfig::ToJson() const {
  return Json{{"n_samples", n_samples},
              {"exact_below", exact_below},
              {"seed", seed},
              {"allow_model_shortcut", allow_model_shortcut}};
}

ShapConfig ShapConfig::FromJson(const Json& json) {
  ShapConfig c;
  c.n_samples = json.value("n_samples", c.n_samples);
  c.exact_below = json.value("exact_below", c.exact_below);
  c.seed = json.value("seed", c.seed);
  c.allow_model_shortcut =
      json.value("allow_model_shortcut", c.allow_model_shortcut);
  if (c.n_samples < 2) throw ValidationError("E_CONFIG", {"shap.n_samples < 2"});
  if (c.exact_below > 20) {
    throw ValidationError("E_CONFIG", {"shap.exact_below > 20"});
  }
  return c;
}

double CoalitionValue(const model::Classifier& model,
                      const tabular::Instance& instance,
                      const std::vector<tabular::Instance>& background,
                      int target_class, std::uint64_t mask) {
  double sum = 0.0;
  tabular::Instance z;
  for (const auto& b : background) {
    z = b;
    for (std::size_t j = 0; j < instance.size(); ++j) {
      if ((mask >> j) & 1ULL) z[j] = instance[j];
    }
    sum += model.PredictProba(z)[target_class];
  }
  return sum / static_cast<double>(background.size());
}

Attribution KernelShap(const model::Classifier& model,
                       const tabular::Instance& instance,
                       const std::vector<tabular::Instance>& background,
                       int target_class, const ShapConfig& config) {
  CheckInputs(model, instance, background, target_class);
  const int m = static_cast<int>(instance.size());
  Attribution out;
  out.target_class = target_class;
  out.instance = instance;
  out.prediction = model.PredictProba(instance)[target_class];
  out.phi.assign(m, 0.0);

  const bool exact = m <= config.exact_below && m <= 20;
  out.exact = exact;
  std::vector<double> all;
  if (m <= 16 && (exact || config.allow_model_shortcut)) {
    // Cheap enough to tabulate; sampled mode only does this with a shortcut.
    if (exact) {
      all = AllValues(model, instance, background, target_class,
                      config.allow_model_shortcut);
    } else if (auto v = model.CoalitionValues(instance, background,
                                              target_class)) {
      all = std::move(*v);
    }
  }
  auto value = [&](std::uint64_t mask) {
    if (!all.empty()) return all[mask];
    return CoalitionValue(model, instance, background, target_class, mask);
  };
  out.base_value = value(0);
  const double delta = out.prediction - out.base_value;
  if (m == 1) {
    out.phi[0] = delta;
    return out;
  }

  // Coalitions and their kernel weights.
  std::map<std::uint64_t, double> rows;
  if (exact) {
    const std::uint64_t full = (std::uint64_t{1} << m) - 1;
    for (std::uint64_t s = 1; s < full; ++s) {
      const int k = std::popcount(s);
      rows[s] = (m - 1) / (Binomial(m, k) * k * (m - k));
    }
  } else {
    // Sizes drawn from the kernel's size marginal, then a uniform subset of
    // that size; every draw is paired with its complement.
    std::vector<double> size_cdf(m - 1);
    double acc = 0.0;
    for (int k = 1; k < m; ++k) {
      acc += (m - 1.0) / (static_cast<double>(k) * (m - k));
      size_cdf[k - 1] = acc;
    }
    Rng rng(MixSeed(config.seed, 0x5a));
    std::vector<int> idx(m);
    const std::uint64_t full =
        m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    for (int draw = 0; draw < config.n_samples / 2; ++draw) {
      const double u = UniformUnit(rng) * acc;
      const int k = static_cast<int>(
          std::lower_bound(size_cdf.begin(), size_cdf.end(), u) -
          size_cdf.begin()) + 1;
      for (int j = 0; j < m; ++j) idx[j] = j;
      std::uint64_t s = 0;
      for (int j = 0; j < k; ++j) {
        const std::size_t r = j + UniformIndex(rng, m - j);
        std::swap(idx[j], idx[r]);
        s |= std::uint64_t{1} << idx[j];
      }
      rows[s] += 1.0;
      rows[full & ~s] += 1.0;
    }
  }

  // Eliminate the last feature through the constraint
  // phi_last = delta - sum(other phi).
  const int p = m - 1;
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  Eigen::Index r = 0;
  for (const auto& [s, w] : rows) {
    const double sw = std::sqrt(w);
    const double last = static_cast<double>((s >> (m - 1)) & 1ULL);
    for (int j = 0; j < p; ++j) {
      x(r, j) = sw * (static_cast<double>((s >> j) & 1ULL) - last);
    }
    y(r) = sw * (value(s) - out.base_value - last * delta);
    ++r;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    throw NumericError(
        "attribution system is singular; increase n_samples (now " +
        std::to_string(config.n_samples) + ")");
  }
  const Eigen::VectorXd sol = qr.solve(y);
  double rest = 0.0;
  for (int j = 0; j < p; ++j) {
    out.phi[j] = sol(j);
    rest += sol(j);
  }
  out.phi[p] = delta - rest;
  return out;
}

Attribution ExactShapley(const model::Classifier& model,
                         const tabular::Instance& instance,
                         const std::vector<tabular::Instance>& background,
                         int target_class) {
  CheckInputs(model, instance, background, target_class);
  const int m = static_cast<int>(instance.size());
  if (m > kMaxExactFeatures) {
    throw PreconditionError("exact Shapley refuses " + std::to_string(m) +
                            " features (limit " +
                            std::to_string(kMaxExactFeatures) + ")");
  }
  const std::vector<double> v =
      AllValues(model, instance, background, target_class, false);
  // |S|! (M - |S| - 1)! / M!
  std::vector<double> weight(m);
  for (int k = 0; k < m; ++k) weight[k] = 1.0 / (m * Binomial(m - 1, k));

  Attribution out;
  out.target_class = target_class;
  out.instance = instance;
  out.exact = true;
  out.base_value = v[0];
  out.prediction = model.PredictProba(instance)[target_class];
  out.phi.assign(m, 0.0);
  const std::uint64_t n = std::uint64_t{1} << m;
  for (int i = 0; i < m; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double phi = 0.0;
    for (std::uint64_t s = 0; s < n; ++s) {
      if (s & bit) continue;
      phi += weight[std::popcount(s)] * (v[s | bit] - v[s]);
    }
    out.phi[i] = phi;
  }
  return out;
}

}  // namespace convxai::explain
