// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/cli.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "tptnd/checker.h"
#include "tptnd/error.h"
#include "tptnd/eval.h"
#include "tptnd/parser.h"

namespace tptnd::cli {
namespace {

using nlohmann::json;

std::string fixed(long double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lf", digits, x);
  return buf;
}

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorKind::ConfigError, msg);
}

Rational probability_flag(const std::string& flag, const std::string& text) {
  Rational r;
  try {
    r = Rational::parse(text);
  } catch (const Error& e) {
    config_error(flag + ": " + e.detail());
  }
  if (!r.is_probability()) config_error(flag + ": " + text + " is not in [0,1]");
  return r;
}

Hypothesis hypothesis_flag(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) config_error("--hyp expects a:prior, got " + text);
  return {probability_flag("--hyp", text.substr(0, colon)),
          probability_flag("--hyp", text.substr(colon + 1))};
}

std::string_view command_name(RunConfig::Command c) {
  switch (c) {
    case RunConfig::Command::Check: return "check";
    case RunConfig::Command::Simulate: return "simulate";
    case RunConfig::Command::Trust: return "trust";
    case RunConfig::Command::Bayes: return "bayes";
  }
  return "";
}

json envelope(const RunConfig& c) {
  return {{"tool", "tptnd"},
          {"version", std::string(kVersion)},
          {"command", std::string(command_name(c.command))},
          {"seed", c.seed ? json(*c.seed) : json(nullptr)},
          {"generator", std::string(SplitMix64::kId)},
          {"strategy", c.strategy.str()}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct FileResult {
  std::optional<CheckReport> report;
  std::optional<ParseError> parse_error;
};

FileResult check_one(const std::string& text, const ThresholdStrategy& strategy) {
  try {
    return {checker::check_file(syntax::parse_file(text), strategy), std::nullopt};
  } catch (const ParseError& e) {
    return {std::nullopt, e};
  }
}

// path:line:col: Kind: message
std::string diagnostic(const std::string& path, const ParseError& e) {
  std::string msg = e.detail();
  const std::string loc = std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": ";
  if (msg.rfind(loc, 0) == 0) msg.erase(0, loc.size());
  return path + ":" + loc + to_string(e.kind()) + ": " + msg;
}

json parse_error_json(const ParseError& e) {
  return {{"kind", to_string(e.kind())},
          {"line", e.line()},
          {"column", e.column()},
          {"expected", e.expected()},
          {"message", e.what()}};
}

int run_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<std::string> texts;
  texts.reserve(c.inputs.size());
  for (const auto& path : c.inputs) texts.push_back(read_file(path));

  std::vector<std::future<FileResult>> pending;
  for (const auto& text : texts) {
    pending.push_back(std::async(std::launch::async, check_one, std::cref(text),
                                 std::cref(c.strategy)));
  }

  bool parse_failed = false;
  bool rejected = false;
  json files = json::array();
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const FileResult r = pending[i].get();
    const std::string& path = c.inputs[i];
    if (r.parse_error) {
      parse_failed = true;
      err << diagnostic(path, *r.parse_error) << '\n';
      files.push_back({{"path", path}, {"error", parse_error_json(*r.parse_error)}});
      continue;
    }
    const CheckReport& rep = *r.report;
    rejected = rejected || !rep.accepted();
    if (c.format == RunConfig::Format::Json) {
      files.push_back({{"path", path}, {"report", checker::to_json(rep)}});
      continue;
    }
    out << path << ": " << (rep.accepted() ? "accepted" : "rejected") << " ("
        << rep.derivations << " derivations, " << rep.open_assumptions
        << " open assumptions)\n";
    for (const auto& f : rep.failures) {
      out << "  " << f.path;
      if (f.rule) out << " [" << rule_name(*f.rule) << "]";
      out << " " << f.reason << '\n';
    }
  }

  const int code = parse_failed ? static_cast<int>(ExitCode::ParseFailure)
                   : rejected   ? static_cast<int>(ExitCode::Rejected)
                                : static_cast<int>(ExitCode::Ok);
  if (c.format == RunConfig::Format::Json) {
    json doc = envelope(c);
    doc["verdict"] = parse_failed ? "error" : rejected ? "rejected" : "accepted";
    doc["files"] = std::move(files);
    out << doc.dump(2) << '\n';
  }
  return code;
}

// Each variable whose theoretical or deterministic entries carry total mass 1
// becomes a process named after the variable's index (or its name).
std::vector<std::pair<std::string, ProcessSpec>> processes(const File& file) {
  std::vector<std::pair<std::string, ProcessSpec>> out;
  for (const auto& item : file) {
    const auto* d = std::get_if<Distribution>(&item.node);
    if (!d) continue;
    std::map<VariableRef, ProcessSpec> by_var;
    std::vector<VariableRef> order;
    for (const auto& e : d->entries) {
      const auto v = as_variable(e.subject);
      if (!v || !e.output) continue;
      const Annotation& a = e.annotation;
      if (a.kind != Annotation::Kind::Theoretical && a.kind != Annotation::Kind::Deterministic) {
        continue;
      }
      auto [it, fresh] = by_var.try_emplace(*v);
      if (fresh) {
        order.push_back(*v);
        it->second.name = v->index ? *v->index : v->name;
      }
      it->second.outcomes.push_back({*e.output, a.probability()});
    }
    for (const auto& v : order) {
      const ProcessSpec& p = by_var.at(v);
      try {
        p.validate();
      } catch (const Error&) {
        continue;
      }
      out.emplace_back(d->name, p);
    }
  }
  return out;
}

int run_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.seed) config_error("simulate requires --seed");
  json files = json::array();
  for (const auto& path : c.inputs) {
    File file;
    try {
      file = syntax::parse_file(read_file(path));
    } catch (const ParseError& e) {
      err << diagnostic(path, e) << '\n';
      return static_cast<int>(ExitCode::ParseFailure);
    }
    json procs = json::array();
    for (const auto& [dist, p] : processes(file)) {
      json outcomes = json::array();
      if (c.format == RunConfig::Format::Text) {
        out << path << ": " << dist << " process " << p.name << ", " << c.trials
            << " trials\n";
      }
      for (const auto& o : p.outcomes) {
        const Frequency f = eval::run_experiment(p, c.trials, o.output, *c.seed);
        const std::string output = syntax::pretty_print(o.output);
        if (c.format == RunConfig::Format::Text) {
          out << "  " << output << " @ " << o.probability.str() << ": " << f.successes << "/"
              << f.trials << " = " << fixed(f.value().to_long_double(), 6) << '\n';
        }
        outcomes.push_back({{"output", output},
                            {"probability", o.probability.str()},
                            {"successes", f.successes},
                            {"trials", f.trials},
                            {"frequency", f.value().to_double()}});
      }
      procs.push_back({{"distribution", dist},
                       {"process", p.name},
                       {"trials", c.trials},
                       {"outcomes", std::move(outcomes)}});
    }
    files.push_back({{"path", path}, {"processes", std::move(procs)}});
  }
  if (c.format == RunConfig::Format::Json) {
    json doc = envelope(c);
    doc["trials"] = c.trials;
    doc["files"] = std::move(files);
    out << doc.dump(2) << '\n';
  }
  return static_cast<int>(ExitCode::Ok);
}

void require_counts(const RunConfig& c) {
  if (!c.k || !c.n) config_error("--k and --n are required");
  if (*c.n < 0 || *c.k < 0 || *c.k > *c.n) config_error("need 0 <= k <= n");
}

int run_trust(const RunConfig& c, std::ostream& out) {
  if (!c.a) config_error("trust requires --a");
  require_counts(c);
  if (*c.n == 0) config_error("trust needs at least one trial");
  const bool ok = stats::accepts(c.strategy, *c.a, *c.k, *c.n);
  const ProbInterval iv = stats::acceptance_interval(c.strategy, *c.k, *c.n);
  const char* verdict = ok ? "TRUST" : "UTRUST";
  if (c.format == RunConfig::Format::Json) {
    json doc = envelope(c);
    doc["verdict"] = verdict;
    doc["a"] = c.a->str();
    doc["k"] = *c.k;
    doc["n"] = *c.n;
    doc["interval"] = {static_cast<double>(iv.lo), static_cast<double>(iv.hi)};
    out << doc.dump(2) << '\n';
  } else {
    out << verdict << ", interval [" << fixed(iv.lo, 3) << "," << fixed(iv.hi, 3) << "]\n";
  }
  return static_cast<int>(ok ? ExitCode::Ok : ExitCode::Rejected);
}

int run_bayes(const RunConfig& c, std::ostream& out) {
  require_counts(c);
  if (c.hypotheses.empty()) config_error("bayes requires at least one --hyp");
  if (c.index && *c.index >= c.hypotheses.size()) config_error("--i out of range");
  const std::vector<long double> post = stats::bayes_posteriors(c.hypotheses, *c.k, *c.n);
  if (c.format == RunConfig::Format::Json) {
    json doc = envelope(c);
    json hyps = json::array();
    for (std::size_t i = 0; i < post.size(); ++i) {
      hyps.push_back({{"a", c.hypotheses[i].a.str()},
                      {"prior", c.hypotheses[i].prior.str()},
                      {"posterior", static_cast<double>(post[i])}});
    }
    doc["k"] = *c.k;
    doc["n"] = *c.n;
    doc["hypotheses"] = std::move(hyps);
    if (c.index) {
      doc["index"] = *c.index;
      doc["posterior"] = static_cast<double>(post[*c.index]);
    }
    out << doc.dump(2) << '\n';
  } else if (c.index) {
    out << fixed(post[*c.index], 6) << '\n';
  } else {
    for (std::size_t i = 0; i < post.size(); ++i) {
      out << i << " a=" << c.hypotheses[i].a.str() << " prior=" << c.hypotheses[i].prior.str()
          << " posterior=" << fixed(post[i], 6) << '\n';
    }
  }
  return static_cast<int>(ExitCode::Ok);
}

}  // namespace

ThresholdStrategy default_strategy() {
  if (const char* env = std::getenv("TPTND_STRATEGY"); env && *env) {
    try {
      return ThresholdStrategy::parse(env);
    } catch (const Error& e) {
      config_error(std::string("TPTND_STRATEGY: ") + e.detail());
    }
  }
  return {};
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Checker and simulator for typed probabilistic derivations", "tptnd"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string strategy;
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  std::int64_t trials = 1000;
  std::string a;
  std::optional<std::int64_t> k;
  std::optional<std::int64_t> n;
  std::vector<std::string> hyps;
  std::optional<std::size_t> index;
  std::vector<std::string> inputs;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--strategy", strategy, "exact:0.95 | wald:0.95 | eps:0.05");
    sub->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
  };
  CLI::App* check = app.add_subcommand("check", "check derivation files");
  check->add_option("files", inputs, "input files")->required();
  common(check);

  CLI::App* simulate = app.add_subcommand("simulate", "run seeded experiments");
  simulate->add_option("files", inputs, "input files")->required();
  simulate->add_option("--seed", seed, "generator seed");
  simulate->add_option("--trials", trials, "executions per process")
      ->check(CLI::PositiveNumber);
  common(simulate);

  CLI::App* trust = app.add_subcommand("trust", "trust verdict for a against k/n");
  trust->add_option("--a", a, "theoretical probability")->required();
  trust->add_option("--k", k, "successes")->required();
  trust->add_option("--n", n, "trials")->required();
  common(trust);

  CLI::App* bayes = app.add_subcommand("bayes", "posterior over discrete hypotheses");
  bayes->add_option("--hyp", hyps, "a:prior, repeatable")->required();
  bayes->add_option("--k", k, "successes")->required();
  bayes->add_option("--n", n, "trials")->required();
  bayes->add_option("--i", index, "report only this hypothesis (zero-based)");
  common(bayes);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    c.message = app.help();
    return c;
  } catch (const CLI::CallForAllHelp&) {
    c.message = app.help("", CLI::AppFormatMode::All);
    return c;
  } catch (const CLI::CallForVersion&) {
    c.message = "tptnd " + std::string(kVersion) + "\n";
    return c;
  } catch (const CLI::ParseError& e) {
    config_error(e.what());
  }

  if (check->parsed()) c.command = RunConfig::Command::Check;
  if (simulate->parsed()) c.command = RunConfig::Command::Simulate;
  if (trust->parsed()) c.command = RunConfig::Command::Trust;
  if (bayes->parsed()) c.command = RunConfig::Command::Bayes;

  c.inputs = inputs;
  c.seed = seed;
  c.trials = trials;
  c.format = format == "json" ? RunConfig::Format::Json : RunConfig::Format::Text;
  c.k = k;
  c.n = n;
  c.index = index;
  if (!a.empty()) c.a = probability_flag("--a", a);
  for (const auto& h : hyps) c.hypotheses.push_back(hypothesis_flag(h));
  if (strategy.empty()) {
    c.strategy = default_strategy();
  } else {
    try {
      c.strategy = ThresholdStrategy::parse(strategy);
    } catch (const Error& e) {
      config_error("--strategy: " + e.detail());
    }
  }
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.message) {
    out << *config.message;
    return static_cast<int>(ExitCode::Ok);
  }
  try {
    switch (config.command) {
      case RunConfig::Command::Check: return run_check(config, out, err);
      case RunConfig::Command::Simulate: return run_simulate(config, out, err);
      case RunConfig::Command::Trust: return run_trust(config, out);
      case RunConfig::Command::Bayes: return run_bayes(config, out);
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
  }
  return static_cast<int>(ExitCode::ConfigFailure);
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return static_cast<int>(ExitCode::ConfigFailure);
  }
  return run(config, out, err);
}

}  // namespace tptnd::cli
