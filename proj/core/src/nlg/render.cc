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

#include "convxai/nlg/render.h"

#include <cmath>
#include <cstdio>

#include "convxai/error.h"
#include "convxai/nlg/relations.h"

namespace convxai::nlg {
namespace {

std::string Percent(double p) { return FormatDisplay(100.0 * p) + "%"; }

std::string Ordinal(std::size_t n) {
  const std::size_t mod100 = n % 100;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    if (n % 10 == 1) suffix = "st";
    if (n % 10 == 2) suffix = "nd";
    if (n % 10 == 3) suffix = "rd";
  }
  return std::to_string(n) + suffix;
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (l.empty()) continue;
    if (!out.empty()) out += "\n";
    out += l;
  }
  return out;
}

std::vector<std::string> TopNames(const ChartSpec& chart, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < chart.items.size() && i < n; ++i) {
    out.push_back(chart.items[i].feature);
  }
  return out;
}

}  // namespace

std::string FormatDisplay(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  std::string s = buf;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, ".0") == 0) {
    s.resize(s.size() - 2);
  }
  if (s == "-0") s = "0";
  return s;
}

std::string FormatValue(const tabular::Schema& schema, std::size_t feature,
                        double value) {
  if (schema.feature(feature).numeric()) return FormatDisplay(value);
  return schema.FormatValue(feature, value);
}

std::string JoinAnd(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += i + 1 == items.size() ? " and " : ", ";
    out += items[i];
  }
  return out;
}

Json RenderedAnswer::ToJson() const {
  Json j{{"text", text}};
  if (chart) j["chart"] = chart->ToJson();
  if (second_chart) j["second_chart"] = second_chart->ToJson();
  if (!diff_table.empty()) {
    Json rows = Json::array();
    for (const auto& r : diff_table) {
      rows.push_back({{"feature", r.feature},
                      {"original", r.original},
                      {"proposed", r.proposed},
                      {"changed", r.changed}});
    }
    j["diff_table"] = rows;
  }
  return j;
}

std::string Renderer::ClassFields(int c, Fields& f) const {
  const auto phrase = schema_.PhraseFor(c);
  f["class"] = schema_.class_name(c);
  f["class_to_get"] = phrase.to_get;
  f["outcome"] = phrase.outcome;
  f["target_noun"] = schema_.vocabulary().target_noun;
  f["subject"] = schema_.vocabulary().subject_outcome;
  return f["class"];
}

std::string Renderer::Profile(const tabular::Instance& x) const {
  std::vector<std::string> items;
  for (std::size_t f = 0; f < x.size(); ++f) {
    items.push_back(templates_.Render(
        "profile.item",
        {{"feature", schema_.feature(f).name}, {"value", FormatValue(schema_, f, x[f])}}));
  }
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += (i > 0 ? ", " : "") + items[i];
  }
  return out;
}

std::string Renderer::ProfileAnnouncement(const tabular::Instance& instance,
                                          int predicted_class) const {
  Fields f;
  ClassFields(predicted_class, f);
  f["profile"] = Profile(instance);
  return templates_.Render("prediction.profile", f);
}

std::string Renderer::NoMatch() const {
  return templates_.Render("clarification.no_match", {});
}

std::string Renderer::InternalError(const std::string& code) const {
  return templates_.Render("notice.internal", {{"code", code}});
}

RenderedAnswer Renderer::Render(const policy::AnswerPayload& payload) const {
  const std::string route(policy::RouteName(payload.route));
  return std::visit(
      [&](const auto& b) -> RenderedAnswer {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, policy::AttributionBody>) {
          return Attribution(b, route);
        } else if constexpr (std::is_same_v<T, policy::TwoAttributionBody>) {
          return TwoAttributions(b, route);
        } else if constexpr (std::is_same_v<T, policy::CounterfactualBody>) {
          return Counterfactual(b, route);
        } else if constexpr (std::is_same_v<T, policy::AnchorBody>) {
          return Anchor(b, route);
        } else if constexpr (std::is_same_v<T, policy::PredictionBody>) {
          return Prediction(b, route);
        } else if constexpr (std::is_same_v<T, policy::MetadataBody>) {
          return Metadata(b, route);
        } else if constexpr (std::is_same_v<T, policy::ClarificationBody>) {
          return Clarification(b, route);
        } else {
          return Notice(b, route);
        }
      },
      payload.body);
}

RenderedAnswer Renderer::Attribution(const policy::AttributionBody& b,
                                     const std::string& route) const {
  RenderedAnswer out;
  out.chart = MakeChartSpec(b.attribution, schema_, top_n_);
  const auto& chart = *out.chart;
  Fields f;
  ClassFields(b.attribution.target_class, f);
  std::vector<std::string> lines;
  if (chart.items.empty()) {
    lines.push_back(templates_.Render("attribution.empty", f, route));
  } else {
    lines.push_back(templates_.Render(schema_.num_classes() == 2
                                          ? "attribution.graph"
                                          : "attribution.graph_multiclass",
                                      f, route));
  }
  if (chart.dropped_count > 0) {
    f["count"] = std::to_string(chart.dropped_count);
    f["mass"] = FormatDisplay(100.0 * chart.dropped_mass) + " percentage points";
    lines.push_back(templates_.Render("attribution.dropped", f, route));
  }
  if (b.focus) {
    const std::size_t feat = *b.focus;
    const double v = b.attribution.phi.at(feat);
    f["feature"] = schema_.feature(feat).name;
    f["value"] = FormatValue(schema_, feat, b.attribution.instance[feat]);
    if (v == 0.0) {
      lines.push_back(templates_.Render("attribution.focus_zero", f, route));
    } else {
      std::size_t rank = 1;
      std::size_t nonzero = 0;
      for (double p : b.attribution.phi) {
        if (p != 0.0) ++nonzero;
        if (std::abs(p) > std::abs(v)) ++rank;
      }
      f["rank"] = Ordinal(rank);
      f["n"] = std::to_string(nonzero);
      lines.push_back(templates_.Render(
          v > 0 ? "attribution.focus_up" : "attribution.focus_down", f, route));
    }
  }
  if (b.caveat) lines.push_back(templates_.Render("attribution.caveat", f, route));
  out.text = JoinLines(lines);
  return out;
}

RenderedAnswer Renderer::TwoAttributions(const policy::TwoAttributionBody& b,
                                         const std::string& route) const {
  RenderedAnswer out;
  out.chart = MakeChartSpec(b.first, schema_, top_n_);
  out.second_chart = MakeChartSpec(b.second, schema_, top_n_);
  Fields f;
  ClassFields(b.first_class, f);
  f["first_class"] = schema_.class_name(b.first_class);
  f["second_class"] = schema_.class_name(b.second_class);
  auto first = TopNames(*out.chart, 3);
  auto second = TopNames(*out.second_chart, 3);
  f["first_top"] = first.empty() ? "none" : JoinAnd(first);
  f["second_top"] = second.empty() ? "none" : JoinAnd(second);
  std::vector<std::string> lines = {
      templates_.Render(schema_.num_classes() == 2 ? "attribution.graph"
                                                   : "attribution.graph_multiclass",
                        f, route),
      templates_.Render("two_attributions.summary", f, route)};
  out.text = JoinLines(lines);
  return out;
}

RenderedAnswer Renderer::Counterfactual(const policy::CounterfactualBody& b,
                                        const std::string& route) const {
  RenderedAnswer out;
  Fields f;
  ClassFields(b.target_class, f);
  const auto& cfs = b.result.counterfactuals;
  if (!cfs.empty()) {
    for (std::size_t feat = 0; feat < schema_.num_features(); ++feat) {
      DiffRow row;
      row.feature = schema_.feature(feat).name;
      row.original = FormatValue(schema_, feat, b.original[feat]);
      for (const auto& cf : cfs) {
        row.proposed.push_back(FormatValue(schema_, feat, cf.cf_instance[feat]));
        row.changed.push_back(cf.cf_instance[feat] != b.original[feat]);
      }
      out.diff_table.push_back(std::move(row));
    }
  }

  if (b.feature) {
    const std::size_t feat = *b.feature;
    f["feature"] = schema_.feature(feat).name;
    if (cfs.empty()) {
      f["probability"] = Percent(b.result.best_invalid_probability);
      out.text = templates_.Render("constrained.not_found", f, route);
    } else {
      f["value"] = FormatValue(schema_, feat, cfs.front().cf_instance[feat]);
      out.text = templates_.Render("constrained.found", f, route);
    }
    return out;
  }
  if (cfs.empty()) {
    f["probability"] = Percent(b.result.best_invalid_probability);
    out.text = templates_.Render("counterfactual.not_found", f, route);
    return out;
  }

  auto changes_for = [&](const tabular::Instance& cf) {
    std::vector<std::string> relations;
    std::vector<std::string> changes;
    for (const auto& r : DiffRelations(b.original, cf, schema_)) {
      Fields rf{{"feature", schema_.feature(r.feature).name},
                {"value", FormatValue(schema_, r.feature, r.target)}};
      relations.push_back(templates_.Render(
          "relation." + std::string(RelationName(r.kind)), rf, route));
      // "at least" / "at most" reads as a threshold; the model is not
      // guaranteed monotone beyond the proposed value.
      const char* id = r.kind == RelationKind::kTooLow    ? "change.increase"
                       : r.kind == RelationKind::kTooHigh ? "change.decrease"
                                                          : "change.categorical";
      changes.push_back(templates_.Render(id, rf, route));
    }
    return std::make_pair(relations, changes);
  };

  std::vector<std::string> lines;
  if (b.versus_second) {
    lines.push_back(templates_.Render("counterfactual.versus_second", f, route));
  }
  auto [relations, changes] = changes_for(cfs.front().cf_instance);
  f["relations"] = JoinAnd(relations);
  f["changes"] = JoinAnd(changes);
  lines.push_back(templates_.Render(relations.size() == 1
                                        ? "counterfactual.reasons_one"
                                        : "counterfactual.reasons_many",
                                    f, route));
  lines.push_back(templates_.Render("counterfactual.if", f, route));
  for (std::size_t i = 1; i < cfs.size(); ++i) {
    f["changes"] = JoinAnd(changes_for(cfs[i].cf_instance).second);
    lines.push_back(templates_.Render("counterfactual.alternative", f, route));
  }
  out.text = JoinLines(lines);
  return out;
}

RenderedAnswer Renderer::Anchor(const policy::AnchorBody& b,
                                const std::string& route) const {
  RenderedAnswer out;
  Fields f;
  ClassFields(b.rule.predicted_class, f);
  std::vector<std::string> conds;
  bool focus_in = false;
  for (const auto& p : b.rule.predicates) {
    conds.push_back(p.Describe(schema_));
    if (b.focus && p.feature == *b.focus) focus_in = true;
  }
  f["conditions"] = JoinAnd(conds);
  f["precision"] = Percent(b.rule.est_precision);
  f["coverage"] = Percent(b.rule.est_coverage);
  std::vector<std::string> lines;
  if (!b.rule.success) {
    lines.push_back(templates_.Render("anchor.partial", f, route));
  } else if (conds.empty()) {
    lines.push_back(templates_.Render("anchor.success_empty", f, route));
  } else {
    lines.push_back(templates_.Render("anchor.success", f, route));
  }
  if (b.focus) {
    f["feature"] = schema_.feature(*b.focus).name;
    lines.push_back(templates_.Render(focus_in ? "anchor.focus_in" : "anchor.focus_out",
                                      f, route));
  }
  out.text = JoinLines(lines);
  return out;
}

RenderedAnswer Renderer::Prediction(const policy::PredictionBody& b,
                                    const std::string& route) const {
  RenderedAnswer out;
  Fields f;
  ClassFields(b.predicted_class, f);
  f["profile"] = Profile(b.instance);
  if (!b.probabilities.empty()) {
    f["probability"] = Percent(b.probabilities.at(b.predicted_class));
  }
  std::vector<std::string> lines;
  if (b.what_if) {
    std::vector<std::string> changes;
    for (const auto& c : b.changes) {
      changes.push_back(templates_.Render(
          "change.categorical",
          {{"feature", schema_.feature(c.feature).name},
           {"value", FormatValue(schema_, c.feature, c.new_value)}},
          route));
    }
    f["changes"] = JoinAnd(changes);
    lines.push_back(templates_.Render(
        changes.empty() ? "prediction.unchanged" : "prediction.what_if", f, route));
    if (!b.warnings.empty()) {
      f["warnings"] = JoinAnd(b.warnings);
      lines.push_back(templates_.Render("prediction.warnings", f, route));
    }
  } else {
    lines.push_back(templates_.Render(
        b.second ? "prediction.second" : "prediction.profile", f, route));
  }
  out.text = JoinLines(lines);
  return out;
}

RenderedAnswer Renderer::Metadata(const policy::MetadataBody& b,
                                  const std::string& route) const {
  RenderedAnswer out;
  Fields f(b.values.begin(), b.values.end());
  f["target_noun"] = schema_.vocabulary().target_noun;
  if (b.source == "glossary") {
    f["definition"] = b.values.count("value") ? b.values.at("value") : "";
    out.text = templates_.Render("glossary.entry", f, route);
    return out;
  }
  const std::string id = b.source + "." + b.field;
  if (templates_.Has(id)) {
    out.text = templates_.Render(id, f, route);
  } else {
    out.text = templates_.Render(b.source + ".default", f, route);
  }
  return out;
}

RenderedAnswer Renderer::Clarification(const policy::ClarificationBody& b,
                                       const std::string& route) const {
  RenderedAnswer out;
  Fields f;
  f["details"] = JoinAnd(b.details);
  f["target_noun"] = schema_.vocabulary().target_noun;
  f["feature"] = b.details.empty() ? "" : b.details.front();
  f["class"] = f["feature"];
  const std::string id = "clarification." + b.reason;
  out.text = templates_.Render(templates_.Has(id) ? id : "clarification.default",
                               f, route);
  return out;
}

RenderedAnswer Renderer::Notice(const policy::NoticeBody& b,
                                const std::string& route) const {
  RenderedAnswer out;
  Fields f{{"code", b.code}, {"details", b.detail}, {"terms", b.detail}};
  f["target_noun"] = schema_.vocabulary().target_noun;
  out.text = templates_.Render("notice." + b.key, f, route);
  return out;
}

}  // namespace convxai::nlg
