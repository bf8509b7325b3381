// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/parser.h"

namespace tptnd::syntax {
namespace {

std::string suffix(const Term& t) {
  std::string s;
  if (t.run) s += "^" + std::to_string(*t.run);
  if (t.sample) s += "[" + std::to_string(*t.sample) + "]";
  return s;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string print_derivation(const Derivation& d, std::size_t indent) {
  std::string pad(indent, ' ');
  if (d.is_assumption()) {
    return pad + "(premise " + pretty_print(d.conclusion) + ")";
  }
  std::string out = pad + "(rule " + std::string(rule_name(*d.rule)) + "\n";
  for (const auto& p : d.premises) out += print_derivation(p, indent + 2) + "\n";
  for (const auto& c : d.side_conditions) {
    out += pad + "  " + pretty_print(c) + "\n";
  }
  out += pad + "  " + pretty_print(d.conclusion) + ")";
  return out;
}

}  // namespace

std::string pretty_print(const Rational& r) { return r.str(); }

std::string pretty_print(const OutputType& o) {
  switch (o.kind) {
    case OutputType::Kind::Atom: return o.name;
    case OutputType::Kind::Complement: return "!" + pretty_print(*o.left);
    case OutputType::Kind::Product:
      return "(" + pretty_print(*o.left) + " * " + pretty_print(*o.right) + ")";
    case OutputType::Kind::Sum:
      return "(" + pretty_print(*o.left) + " + " + pretty_print(*o.right) + ")";
    case OutputType::Kind::Arrow:
      return "(" + pretty_print(*o.left) + " -> " + pretty_print(*o.right) + ")";
  }
  return {};
}

std::string pretty_print(const Annotation& a) {
  switch (a.kind) {
    case Annotation::Kind::Deterministic: return "";
    case Annotation::Kind::Theoretical: return "@ " + a.value.str();
    case Annotation::Kind::Expected: return "~ " + a.value.str();
    case Annotation::Kind::Frequency:
      return "# " + std::to_string(a.successes) + "/" + std::to_string(a.trials);
    case Annotation::Kind::Interval:
      return "in [" + a.lo.str() + ", " + a.hi.str() + "]";
    case Annotation::Kind::Outside:
      return "notin [" + a.lo.str() + ", " + a.hi.str() + "]";
    case Annotation::Kind::ArrowTagged: {
      std::string body = pretty_print(*a.body);
      return "[" + a.value.str() + "]" + (body.empty() ? "" : " " + body);
    }
  }
  return {};
}

std::string pretty_print(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Name:
      return t.name + (t.index ? "_" + *t.index : "") + suffix(t);
    case Term::Kind::Pair:
      return "<" + pretty_print(*t.left) + ", " + pretty_print(*t.right) + ">" + suffix(t);
    case Term::Kind::Fst: return "fst(" + pretty_print(*t.left) + ")" + suffix(t);
    case Term::Kind::Snd: return "snd(" + pretty_print(*t.left) + ")" + suffix(t);
    case Term::Kind::Abstraction: {
      std::string core = "[" + pretty_print(*t.left) + "]" + pretty_print(*t.right);
      std::string s = suffix(t);
      return s.empty() ? core : "(" + core + ")" + s;
    }
    case Term::Kind::Application: {
      std::string f = pretty_print(*t.left);
      if (t.left->kind == Term::Kind::Abstraction && suffix(*t.left).empty()) {
        f = "(" + f + ")";
      }
      return f + ".(" + pretty_print(*t.arg) + ")" + suffix(t);
    }
    case Term::Kind::Trust: return "Trust(" + pretty_print(*t.arg) + ")" + suffix(t);
    case Term::Kind::UTrust: return "UTrust(" + pretty_print(*t.arg) + ")" + suffix(t);
  }
  return {};
}

std::string pretty_print(const TypedStatement& s) {
  std::string out = pretty_print(s.subject);
  if (!s.output) return out;
  out += " : " + pretty_print(*s.output);
  std::string a = pretty_print(s.annotation);
  if (!a.empty()) out += " " + a;
  return out;
}

std::string pretty_print(const std::vector<ContextItem>& context) {
  std::vector<std::string> parts;
  for (const auto& item : context) {
    switch (item.kind) {
      case ContextItem::Kind::Ref: parts.push_back(item.name); break;
      case ContextItem::Kind::Entry: parts.push_back(pretty_print(item.entries.at(0))); break;
      case ContextItem::Kind::Block: {
        std::vector<std::string> inner;
        for (const auto& e : item.entries) inner.push_back(pretty_print(e));
        parts.push_back("{" + join(inner, ", ") + "}");
        break;
      }
    }
  }
  return join(parts, ", ");
}

std::string pretty_print(const Judgement& j) {
  std::string ctx = pretty_print(j.context);
  return (ctx.empty() ? "|- " : ctx + " |- ") + pretty_print(j.conclusion);
}

std::string pretty_print(const Conclusion& c) {
  if (const auto* j = std::get_if<Judgement>(&c)) return pretty_print(*j);
  if (const auto* d = std::get_if<DistributionJudgement>(&c)) {
    std::string ctx = pretty_print(d->context);
    return (ctx.empty() ? "" : ctx + " ") + ":: distribution";
  }
  const auto& fam = std::get<JudgementFamily>(c);
  std::vector<std::string> parts;
  for (const auto& m : fam.members) parts.push_back(pretty_print(m));
  return "family { " + join(parts, "; ") + " }";
}

std::string pretty_print(const SideCondition& c) {
  switch (c.kind) {
    case SideCondition::Kind::ThresholdHolds:
    case SideCondition::Kind::ThresholdFails: {
      std::string out = c.kind == SideCondition::Kind::ThresholdHolds ? "(holds " : "(fails ";
      out += c.a.str() + " " + std::to_string(c.k) + "/" + std::to_string(c.n);
      if (c.strategy) {
        std::string s = c.strategy->str();
        out += " " + s;
      }
      return out + ")";
    }
    case SideCondition::Kind::Independent:
      return "(independent (" + pretty_print(c.left) + ") (" + pretty_print(c.right) + "))";
    case SideCondition::Kind::Additivity:
      return "(additive " + pretty_print(c.variable.term()) + " " + c.bound.str() + ")";
    case SideCondition::Kind::NormalizedPriors: {
      std::string out = "(normalized";
      for (const auto& v : c.values) out += " " + v.str();
      return out + ")";
    }
    case SideCondition::Kind::ContractionFunction:
      return c.mode == MlMode::AsPrinted ? "(function ml printed)" : "(function ml count)";
  }
  return {};
}

std::string pretty_print(const Derivation& d) { return print_derivation(d, 0); }

std::string pretty_print(const Distribution& d) {
  std::string out = "dist " + d.name + " {";
  if (d.entries.empty()) return out + "}";
  out += "\n";
  for (const auto& e : d.entries) out += "  " + pretty_print(e) + ";\n";
  return out + "}";
}

std::string pretty_print(const Item& item) {
  if (const auto* d = std::get_if<Distribution>(&item.node)) return pretty_print(*d);
  if (const auto* j = std::get_if<Judgement>(&item.node)) {
    return (item.name.empty() ? "" : "judgement " + item.name + " = ") + pretty_print(*j) + ";";
  }
  const auto& d = std::get<Derivation>(item.node);
  return (item.name.empty() ? "" : "derivation " + item.name + " = ") + pretty_print(d);
}

std::string pretty_print(const File& file) {
  std::vector<std::string> parts;
  for (const auto& item : file) parts.push_back(pretty_print(item));
  return parts.empty() ? "" : join(parts, "\n\n") + "\n";
}

}  // namespace tptnd::syntax
