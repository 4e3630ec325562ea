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

#include "convxai/nlu/matcher.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include "convxai/error.h"
#include "convxai/random.h"

namespace convxai::nlu {
namespace {

constexpr int kMatcherFormatVersion = 1;

double RbfFromDot(double sq_a, double sq_b, double dot, double gamma) {
  return std::exp(-gamma * std::max(0.0, sq_a + sq_b - 2.0 * dot));
}

KernelMatrix BuildKernel(const std::vector<SparseVector>& xs,
                         const std::vector<std::size_t>& rows, double gamma) {
  KernelMatrix k;
  k.n = rows.size();
  k.values.resize(k.n * k.n);
  std::vector<double> sq(k.n);
  for (std::size_t a = 0; a < k.n; ++a) sq[a] = xs[rows[a]].SquaredNorm();
  for (std::size_t a = 0; a < k.n; ++a) {
    k.values[a * k.n + a] = 1.0;
    for (std::size_t b = a + 1; b < k.n; ++b) {
      const double v =
          RbfFromDot(sq[a], sq[b], xs[rows[a]].Dot(xs[rows[b]]), gamma);
      k.values[a * k.n + b] = v;
      k.values[b * k.n + a] = v;
    }
  }
  return k;
}

// One-vs-rest solutions for `labels` over the given kernel matrix.
std::vector<BinarySvm> TrainOneVsRest(const KernelMatrix& kernel,
                                      const std::vector<int>& row_labels,
                                      const std::vector<int>& labels,
                                      const SvmParams& params) {
  std::vector<BinarySvm> out;
  out.reserve(labels.size());
  std::vector<int> y(row_labels.size());
  for (int label : labels) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = row_labels[i] == label ? 1 : -1;
    }
    out.push_back(SolveSmo(kernel, y, params));
  }
  return out;
}

std::vector<double> Softmax(const std::vector<double>& z, double temperature) {
  std::vector<double> p(z.size());
  if (z.empty()) return p;
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp((z[i] - m) / temperature);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

// Inverse temperature minimising the negative log likelihood; the objective
// is convex in beta, so a golden-section search suffices.
double FitTemperature(const std::vector<std::vector<double>>& decisions,
                      const std::vector<int>& truth) {
  if (decisions.empty()) return 1.0;
  auto nll = [&](double beta) {
    double total = 0.0;
    for (std::size_t r = 0; r < decisions.size(); ++r) {
      const auto& z = decisions[r];
      const double m = *std::max_element(z.begin(), z.end());
      double sum = 0.0;
      for (double v : z) sum += std::exp(beta * (v - m));
      total += -(beta * (z[truth[r]] - m) - std::log(sum));
    }
    return total;
  };
  double lo = 0.01;
  double hi = 500.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - g * (hi - lo);
  double b = lo + g * (hi - lo);
  double fa = nll(a);
  double fb = nll(b);
  for (int it = 0; it < 100 && hi - lo > 1e-6; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = nll(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = nll(b);
    }
  }
  return 2.0 / (lo + hi);
}

// Round-robin stratified assignment of `rows` into k parts.
std::vector<int> InnerFolds(const std::vector<int>& row_labels, int k,
                            std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    by_label[row_labels[i]].push_back(i);
  }
  std::vector<int> fold(row_labels.size(), 0);
  std::size_t pos = 0;
  for (auto& [label, members] : by_label) {
    Rng rng(MixSeed(seed, static_cast<std::uint64_t>(label)));
    Shuffle(members.begin(), members.end(), rng);
    for (std::size_t m : members) fold[m] = static_cast<int>(pos++ % k);
  }
  return fold;
}

Json SparseToJson(const SparseVector& v) {
  Json idx = Json::array();
  Json val = Json::array();
  for (const auto& [i, x] : v.items) {
    idx.push_back(i);
    val.push_back(x);
  }
  return {{"i", idx}, {"v", val}};
}

SparseVector SparseFromJson(const Json& j) {
  SparseVector v;
  const auto idx = j.at("i").get<std::vector<int>>();
  const auto val = j.at("v").get<std::vector<double>>();
  if (idx.size() != val.size()) throw ParseError("sparse vector size mismatch");
  for (std::size_t k = 0; k < idx.size(); ++k) v.items.emplace_back(idx[k], val[k]);
  return v;
}

}  // namespace

std::string_view BackendName(Backend backend) {
  return backend == Backend::kKernelSvm ? "KernelSvm" : "CosineNearest";
}

Backend ParseBackend(std::string_view name) {
  if (tabular::EqualsIgnoreCase(name, "KernelSvm") ||
      tabular::EqualsIgnoreCase(name, "svm")) {
    return Backend::kKernelSvm;
  }
  if (tabular::EqualsIgnoreCase(name, "CosineNearest") ||
      tabular::EqualsIgnoreCase(name, "cosine")) {
    return Backend::kCosineNearest;
  }
  throw PreconditionError("unknown matcher backend '" + std::string(name) +
                          "' (expected KernelSvm or CosineNearest)");
}

Json MatcherConfig::ToJson() const {
  return {{"backend", BackendName(backend)},
          {"theta", theta},
          {"max_df", tfidf.max_df},
          {"min_df", tfidf.min_df},
          {"C", svm.c},
          {"gamma", svm.gamma},
          {"tolerance", svm.tolerance},
          {"max_iterations", svm.max_iterations},
          {"calibrate", calibrate},
          {"calibration_folds", calibration_folds},
          {"seed", seed}};
}

MatcherConfig MatcherConfig::FromJson(const Json& j) {
  MatcherConfig c;
  if (j.contains("backend")) c.backend = ParseBackend(j.at("backend").get<std::string>());
  c.theta = j.value("theta", c.theta);
  c.tfidf.max_df = j.value("max_df", c.tfidf.max_df);
  c.tfidf.min_df = j.value("min_df", c.tfidf.min_df);
  c.svm.c = j.value("C", c.svm.c);
  c.svm.gamma = j.value("gamma", c.svm.gamma);
  c.svm.tolerance = j.value("tolerance", c.svm.tolerance);
  c.svm.max_iterations = j.value("max_iterations", c.svm.max_iterations);
  c.calibrate = j.value("calibrate", c.calibrate);
  c.calibration_folds = j.value("calibration_folds", c.calibration_folds);
  c.seed = j.value("seed", c.seed);
  if (!(c.theta > 0.0 && c.theta < 1.0)) {
    throw ValidationError("E_CONFIG", {"theta must lie in (0, 1)"});
  }
  return c;
}

namespace {

std::map<int, std::string> ReferenceTexts(const corpus::PhraseBank& bank) {
  std::map<int, std::string> refs;
  for (int label : bank.labels()) refs[label] = bank.ReferenceText(label);
  return refs;
}

TfidfModel FitOn(const std::vector<corpus::Entry>& entries,
                 const TfidfParams& params) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(entries.size());
  for (const auto& e : entries) docs.push_back(TokenizeAndStem(e.phrase));
  return TfidfModel::Fit(docs, params);
}

}  // namespace

Matcher Matcher::Train(const corpus::PhraseBank& bank,
                       const MatcherConfig& config) {
  return TrainOnEntries(bank.entries(), ReferenceTexts(bank), config);
}

Matcher Matcher::Train(const corpus::PhraseBank& bank, const TfidfModel& tfidf,
                       const MatcherConfig& config) {
  return TrainOnEntries(bank.entries(), ReferenceTexts(bank), tfidf, config);
}

Matcher Matcher::TrainOnEntries(const std::vector<corpus::Entry>& entries,
                                const std::map<int, std::string>& references,
                                const MatcherConfig& config) {
  if (entries.empty()) throw PreconditionError("no training entries");
  return TrainOnEntries(entries, references, FitOn(entries, config.tfidf),
                        config);
}

Matcher Matcher::TrainOnEntries(const std::vector<corpus::Entry>& entries,
                                const std::map<int, std::string>& references,
                                const TfidfModel& tfidf,
                                const MatcherConfig& config) {
  std::set<int> label_set;
  for (const auto& e : entries) label_set.insert(e.label);
  if (label_set.size() < 2) {
    throw PreconditionError("matcher training needs at least 2 labels, got " +
                            std::to_string(label_set.size()));
  }
  if (!(config.theta > 0.0 && config.theta < 1.0)) {
    throw PreconditionError("theta must lie in (0, 1)");
  }
  Matcher m;
  m.config_ = config;
  m.tfidf_ = tfidf;
  m.labels_.assign(label_set.begin(), label_set.end());
  for (int label : m.labels_) {
    auto it = references.find(label);
    m.reference_text_[label] = it == references.end() ? "" : it->second;
  }

  std::vector<std::string> zero;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    SparseVector v = tfidf.Transform(TokenizeAndStem(e.phrase));
    if (v.empty()) {
      zero.push_back("entry " + std::to_string(i + 1) + " (question " +
                     std::to_string(e.question_id) + ": \"" + e.phrase +
                     "\") has an all-zero TF-IDF vector");
    }
    m.vectors_.push_back(std::move(v));
    m.vector_labels_.push_back(e.label);
  }
  if (!zero.empty()) throw ValidationError("E_DEGENERATE_KERNEL", std::move(zero));
  if (config.backend == Backend::kCosineNearest) return m;

  std::vector<std::size_t> all(m.vectors_.size());
  std::iota(all.begin(), all.end(), 0);
  const KernelMatrix kernel = BuildKernel(m.vectors_, all, config.svm.gamma);
  m.svms_ = TrainOneVsRest(kernel, m.vector_labels_, m.labels_, config.svm);

  if (config.calibrate && config.calibration_folds >= 2) {
    const std::vector<int> fold =
        InnerFolds(m.vector_labels_, config.calibration_folds, config.seed);
    std::map<int, std::size_t> label_index;
    for (std::size_t l = 0; l < m.labels_.size(); ++l) label_index[m.labels_[l]] = l;
    std::vector<std::vector<double>> decisions;
    std::vector<int> truth;
    for (int f = 0; f < config.calibration_folds; ++f) {
      std::vector<std::size_t> train;
      std::vector<std::size_t> test;
      for (std::size_t i = 0; i < fold.size(); ++i) {
        (fold[i] == f ? test : train).push_back(i);
      }
      std::vector<int> train_labels;
      for (std::size_t i : train) train_labels.push_back(m.vector_labels_[i]);
      const std::set<int> present(train_labels.begin(), train_labels.end());
      if (present.size() < 2) continue;
      const std::vector<int> inner_labels(present.begin(), present.end());
      KernelMatrix sub;
      sub.n = train.size();
      sub.values.resize(sub.n * sub.n);
      for (std::size_t a = 0; a < sub.n; ++a) {
        for (std::size_t b = 0; b < sub.n; ++b) {
          sub.values[a * sub.n + b] = kernel(train[a], train[b]);
        }
      }
      const auto svms = TrainOneVsRest(sub, train_labels, inner_labels, config.svm);
      for (std::size_t t : test) {
        auto it = std::find(inner_labels.begin(), inner_labels.end(),
                            m.vector_labels_[t]);
        if (it == inner_labels.end()) continue;
        std::vector<double> z(inner_labels.size());
        for (std::size_t l = 0; l < inner_labels.size(); ++l) {
          double s = -svms[l].rho;
          for (std::size_t a = 0; a < train.size(); ++a) {
            if (svms[l].coef[a] != 0.0) s += svms[l].coef[a] * kernel(train[a], t);
          }
          z[l] = s;
        }
        decisions.push_back(std::move(z));
        truth.push_back(static_cast<int>(it - inner_labels.begin()));
      }
    }
    m.temperature_ = FitTemperature(decisions, truth);
  }
  return m;
}

std::vector<double> Matcher::KernelRow(const SparseVector& x) const {
  std::vector<double> row(vectors_.size());
  const double sq = x.SquaredNorm();
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    row[i] = RbfFromDot(sq, vectors_[i].SquaredNorm(), x.Dot(vectors_[i]),
                        config_.svm.gamma);
  }
  return row;
}

std::vector<double> Matcher::RawScores(const SparseVector& x) const {
  std::vector<double> out(labels_.size(), 0.0);
  if (config_.backend == Backend::kCosineNearest) {
    std::map<int, std::size_t> index;
    for (std::size_t l = 0; l < labels_.size(); ++l) index[labels_[l]] = l;
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
      const std::size_t l = index.at(vector_labels_[i]);
      out[l] = std::max(out[l], std::clamp(x.Dot(vectors_[i]), 0.0, 1.0));
    }
    return out;
  }
  const std::vector<double> row = KernelRow(x);
  for (std::size_t l = 0; l < svms_.size(); ++l) {
    double s = -svms_[l].rho;
    const auto& coef = svms_[l].coef;
    for (std::size_t i = 0; i < coef.size(); ++i) {
      if (coef[i] != 0.0) s += coef[i] * row[i];
    }
    out[l] = s;
  }
  return out;
}

std::vector<double> Matcher::DecisionValues(
    std::string_view canonical_text) const {
  return RawScores(tfidf_.Transform(TokenizeAndStem(canonical_text)));
}

std::vector<ScoredLabel> Matcher::Score(std::string_view canonical_text) const {
  const std::vector<double> raw = DecisionValues(canonical_text);
  const std::vector<double> conf =
      config_.backend == Backend::kKernelSvm ? Softmax(raw, temperature_) : raw;
  std::vector<ScoredLabel> out(labels_.size());
  for (std::size_t l = 0; l < labels_.size(); ++l) out[l] = {labels_[l], conf[l]};
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredLabel& a, const ScoredLabel& b) {
                     if (a.confidence != b.confidence) {
                       return a.confidence > b.confidence;
                     }
                     return a.label < b.label;
                   });
  return out;
}

int Matcher::Predict(std::string_view canonical_text) const {
  return Score(canonical_text).front().label;
}

MatchResult Matcher::Match(std::string_view question,
                           const tabular::Schema& schema, double theta) const {
  MatchResult r;
  r.question = SubstitutePlaceholders(question, schema);
  const SparseVector x =
      tfidf_.Transform(TokenizeAndStem(r.question.canonical_text));
  auto scored = Score(r.question.canonical_text);
  r.top.assign(scored.begin(),
               scored.begin() + std::min<std::size_t>(3, scored.size()));
  // A question sharing no vocabulary with the bank carries no evidence.
  if (x.empty()) {
    for (auto& s : r.top) s.confidence = 0.0;
    return r;
  }
  r.label = scored.front().label;
  r.confidence = scored.front().confidence;
  if (r.confidence >= theta) {
    r.matched = true;
    r.reference_text = ReferenceText(r.label);
  }
  return r;
}

const std::string& Matcher::ReferenceText(int label) const {
  auto it = reference_text_.find(label);
  if (it == reference_text_.end()) {
    throw NotFoundError("label " + std::to_string(label) + " is not in the matcher");
  }
  return it->second;
}

void Matcher::Save(const std::filesystem::path& path) const {
  Json j;
  j["format"] = "convxai.matcher";
  j["version"] = kMatcherFormatVersion;
  j["config"] = config_.ToJson();
  j["tfidf"] = tfidf_.ToJson();
  j["labels"] = labels_;
  Json refs = Json::object();
  for (const auto& [l, t] : reference_text_) refs[std::to_string(l)] = t;
  j["references"] = refs;
  j["temperature"] = temperature_;
  Json vecs = Json::array();
  for (const auto& v : vectors_) vecs.push_back(SparseToJson(v));
  j["vectors"] = vecs;
  j["vector_labels"] = vector_labels_;
  Json svms = Json::array();
  for (const auto& s : svms_) {
    svms.push_back({{"coef", s.coef}, {"rho", s.rho}});
  }
  j["svms"] = svms;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump();
  if (!out) throw IoError("write failed for " + path.string());
}

Matcher Matcher::Load(const std::filesystem::path& path) {
  const Json j = ReadJsonFile(path);
  try {
    if (j.at("format") != "convxai.matcher" ||
        j.at("version").get<int>() != kMatcherFormatVersion) {
      throw ParseError(path.string() + ": unsupported matcher format");
    }
    Matcher m;
    m.config_ = MatcherConfig::FromJson(j.at("config"));
    m.tfidf_ = TfidfModel::FromJson(j.at("tfidf"));
    m.labels_ = j.at("labels").get<std::vector<int>>();
    for (const auto& [l, t] : j.at("references").items()) {
      m.reference_text_[std::stoi(l)] = t.get<std::string>();
    }
    m.temperature_ = j.at("temperature").get<double>();
    for (const auto& v : j.at("vectors")) m.vectors_.push_back(SparseFromJson(v));
    m.vector_labels_ = j.at("vector_labels").get<std::vector<int>>();
    for (const auto& s : j.at("svms")) {
      BinarySvm b;
      b.coef = s.at("coef").get<std::vector<double>>();
      b.rho = s.at("rho").get<double>();
      b.converged = true;
      m.svms_.push_back(std::move(b));
    }
    return m;
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

CvResult CrossValidate(const corpus::PhraseBank& bank,
                       const MatcherConfig& config,
                       const corpus::FoldSplit& folds) {
  if (folds.assignments.size() != bank.size()) {
    throw PreconditionError("fold split does not match the bank size");
  }
  const auto start = std::chrono::steady_clock::now();
  CvResult result;
  for (int b = 0; b < 10; ++b) {
    result.reliability.push_back({b / 10.0, (b + 1) / 10.0, 0, 0});
  }
  std::map<int, std::string> refs;
  for (int label : bank.labels()) refs[label] = bank.ReferenceText(label);
  for (int f = 0; f < folds.k; ++f) {
    std::vector<corpus::Entry> train;
    for (std::size_t i : folds.TrainIndices(f)) train.push_back(bank.entries()[i]);
    const Matcher m = Matcher::TrainOnEntries(train, refs, config);
    std::vector<int> truth;
    std::vector<int> predicted;
    for (std::size_t i : folds.TestIndices(f)) {
      const auto& e = bank.entries()[i];
      const auto best = m.Score(e.phrase).front();
      truth.push_back(e.label);
      predicted.push_back(best.label);
      const int bin = std::clamp(static_cast<int>(best.confidence * 10), 0, 9);
      ++result.reliability[bin].count;
      if (best.label == e.label) ++result.reliability[bin].correct;
    }
    int correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) correct += truth[i] == predicted[i];
    result.fold_accuracy.push_back(
        truth.empty() ? 0.0 : static_cast<double>(correct) / truth.size());
    result.fold_macro_f1.push_back(MacroF1(truth, predicted));
    result.fold_micro_f1.push_back(MicroF1(truth, predicted));
  }
  result.accuracy = Summarize(result.fold_accuracy);
  result.macro_f1 = Summarize(result.fold_macro_f1);
  result.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start).count();
  return result;
}

double TrainingAccuracy(const corpus::PhraseBank& bank,
                        const MatcherConfig& config) {
  const Matcher m = Matcher::Train(bank, config);
  int correct = 0;
  for (const auto& e : bank.entries()) {
    if (m.Predict(e.phrase) == e.label) ++correct;
  }
  return static_cast<double>(correct) / bank.size();
}

}  // namespace convxai::nlu
