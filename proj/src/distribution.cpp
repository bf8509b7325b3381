// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/distribution.h"

#include <algorithm>

#include "tptnd/error.h"
#include "tptnd/parser.h"

namespace tptnd::dist {
namespace {

std::string variable_text(const VariableRef& v) {
  return v.index ? v.name + "_" + *v.index : v.name;
}

bool is_dependency_entry(const TypedStatement& e) {
  return contains_dependency(e.subject) ||
         (e.output && e.output->kind == OutputType::Kind::Arrow);
}

}  // namespace

std::map<VariableRef, Rational> theoretical_mass(std::span<const TypedStatement> entries) {
  std::map<VariableRef, Rational> mass;
  for (const auto& e : entries) {
    auto v = as_variable(e.subject);
    if (!v) continue;
    const Annotation& a = e.annotation.stripped();
    if (a.kind == Annotation::Kind::Theoretical) mass[*v] += a.value;
  }
  return mass;
}

Distribution extend(const Distribution& d, const TypedStatement& entry) {
  auto v = as_variable(entry.subject);
  if (!v || !entry.output) {
    throw Error(ErrorKind::ShapeError, "distribution entries need a variable subject");
  }
  for (const auto& e : d.entries) {
    if (as_variable(e.subject) == v && e.output == entry.output) {
      throw Error(ErrorKind::DuplicateEntry,
                  variable_text(*v) + " : " + syntax::pretty_print(*entry.output) +
                      " already declared in " + (d.name.empty() ? "distribution" : d.name));
    }
  }
  Distribution out = d;
  out.entries.push_back(entry);
  auto mass = theoretical_mass(out.entries);
  if (mass[*v] > Rational(1)) {
    throw Error(ErrorKind::AdditivityViolation,
                "probabilities of " + variable_text(*v) + " sum to " + mass[*v].str());
  }
  return out;
}

Distribution make_unknown(std::span<const OutputType> outputs,
                          const VariableRef& variable, std::string name) {
  if (outputs.empty()) throw Error(ErrorKind::EmptyOutputs, "unknown needs outputs");
  Distribution d;
  d.name = std::move(name);
  for (const auto& o : outputs) {
    d = extend(d, statement(variable.term(), o,
                            Annotation::interval(Rational(0), Rational(1))));
  }
  return d;
}

void validate(const Distribution& d) {
  Distribution acc;
  acc.name = d.name;
  for (const auto& e : d.entries) acc = extend(acc, e);
}

bool is_complete(const Distribution& d) {
  auto mass = theoretical_mass(d.entries);
  if (mass.empty()) return false;
  return std::all_of(mass.begin(), mass.end(),
                     [](const auto& kv) { return kv.second == Rational(1); });
}

bool independent(std::span<const TypedStatement> a, std::span<const TypedStatement> b) {
  std::vector<std::set<std::string>> links;
  for (auto side : {a, b}) {
    for (const auto& e : side) {
      if (is_dependency_entry(e)) links.push_back(mentioned_names(e.subject));
    }
  }
  auto linked = [&](const std::string& v, const std::string& w) {
    return std::any_of(links.begin(), links.end(), [&](const auto& names) {
      return names.count(v) && names.count(w);
    });
  };
  for (const auto& e1 : a) {
    for (const auto& e2 : b) {
      if (e1 == e2) continue;
      for (const auto& v : mentioned_names(e1.subject)) {
        for (const auto& w : mentioned_names(e2.subject)) {
          if (v != w && linked(v, w)) return false;
        }
      }
    }
  }
  return true;
}

bool independent(const Distribution& a, const Distribution& b) {
  return independent(std::span<const TypedStatement>(a.entries),
                     std::span<const TypedStatement>(b.entries));
}

std::vector<TypedStatement> resolve(const std::vector<ContextItem>& context,
                                    const DistributionEnv& env) {
  std::vector<TypedStatement> out;
  auto add = [&](const TypedStatement& e) {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  };
  for (const auto& item : context) {
    if (item.kind == ContextItem::Kind::Ref) {
      auto it = env.find(item.name);
      if (it == env.end()) {
        throw Error(ErrorKind::UnresolvedContext, "no distribution named '" + item.name + "'");
      }
      for (const auto& e : it->second.entries) add(e);
    } else {
      for (const auto& e : item.entries) add(e);
    }
  }
  return out;
}

std::string annotation_kind(const Annotation& a) {
  switch (a.kind) {
    case Annotation::Kind::Deterministic: return "deterministic";
    case Annotation::Kind::Theoretical: return "theoretical";
    case Annotation::Kind::Expected: return "expected";
    case Annotation::Kind::Frequency: return "frequency";
    case Annotation::Kind::Interval: return "interval";
    case Annotation::Kind::Outside: return "outside";
    case Annotation::Kind::ArrowTagged: return "tagged";
  }
  return "";
}

nlohmann::json to_json(const Distribution& d) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : d.entries) {
    nlohmann::json j;
    j["var"] = syntax::pretty_print(e.subject);
    j["output"] = e.output ? syntax::pretty_print(*e.output) : "";
    j["kind"] = annotation_kind(e.annotation);
    const Annotation& a = e.annotation;
    if (a.is_interval()) {
      j["value"] = {a.lo.str(), a.hi.str()};
    } else if (a.kind == Annotation::Kind::Deterministic) {
      j["value"] = nullptr;
    } else if (a.kind == Annotation::Kind::Frequency) {
      j["value"] = std::to_string(a.successes) + "/" + std::to_string(a.trials);
    } else {
      j["value"] = a.probability().str();
    }
    entries.push_back(std::move(j));
  }
  return {{"name", d.name}, {"entries", std::move(entries)}};
}

}  // namespace tptnd::dist
