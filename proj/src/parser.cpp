// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>

#include "tptnd/error.h"
#include "tptnd/parser.h"

namespace tptnd::syntax {
namespace {

enum class Tok {
  End, Ident, Int, Decimal,
  LBrace, RBrace, LParen, RParen, LBracket, RBracket, LAngle, RAngle,
  Comma, Semi, Colon, DoubleColon, At, Tilde, Hash, Slash, Star, Plus,
  Arrow, Bang, Turnstile, Dot, Caret, Underscore, Equals,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Decimal: return "decimal";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LAngle: return "'<'";
    case Tok::RAngle: return "'>'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::DoubleColon: return "'::'";
    case Tok::At: return "'@'";
    case Tok::Tilde: return "'~'";
    case Tok::Hash: return "'#'";
    case Tok::Slash: return "'/'";
    case Tok::Star: return "'*'";
    case Tok::Plus: return "'+'";
    case Tok::Arrow: return "'->'";
    case Tok::Bang: return "'!'";
    case Tok::Turnstile: return "'|-'";
    case Tok::Dot: return "'.'";
    case Tok::Caret: return "'^'";
    case Tok::Underscore: return "'_'";
    case Tok::Equals: return "'='";
  }
  return "token";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t begin = 0;
  std::size_t end = 0;
};

bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      t.begin = pos_;
      if (pos_ >= src_.size()) {
        t.end = pos_;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (is_alpha(c)) {
        while (pos_ < src_.size() &&
               (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) {
          bump(1);
        }
        t.kind = Tok::Ident;
      } else if (is_digit(c)) {
        while (pos_ < src_.size() && is_digit(src_[pos_])) bump(1);
        t.kind = Tok::Int;
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            is_digit(src_[pos_ + 1])) {
          bump(1);
          while (pos_ < src_.size() && is_digit(src_[pos_])) bump(1);
          t.kind = Tok::Decimal;
        }
      } else {
        t.kind = symbol(t);
      }
      t.end = pos_;
      t.text = std::string(src_.substr(t.begin, t.end - t.begin));
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(ErrorKind::SyntaxError, line_, column_, "token", msg);
  }

  void bump(std::size_t bytes) {
    for (std::size_t i = 0; i < bytes; ++i) {
      char c = src_[pos_++];
      if (c == '\n') {
        ++line_;
        column_ = 1;
      } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
        ++column_;
      }
    }
  }

  bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump(1);
      } else if (starts("--")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump(1);
      } else if (starts("\xEF\xBB\xBF")) {  // byte order mark
        pos_ += 3;
      } else {
        return;
      }
    }
  }

  Tok symbol(const Token& t) {
    struct Sym {
      std::string_view text;
      Tok kind;
    };
    static constexpr Sym kSyms[] = {
        {"->", Tok::Arrow},           {"|-", Tok::Turnstile},
        {"::", Tok::DoubleColon},     {"\xE2\x8A\xA2", Tok::Turnstile},
        {"\xC3\x97", Tok::Star},      {"\xE2\x86\x92", Tok::Arrow},
        {"\xE2\x9F\xA8", Tok::LAngle}, {"\xE2\x9F\xA9", Tok::RAngle},
        {"{", Tok::LBrace},           {"}", Tok::RBrace},
        {"(", Tok::LParen},           {")", Tok::RParen},
        {"[", Tok::LBracket},         {"]", Tok::RBracket},
        {"<", Tok::LAngle},           {">", Tok::RAngle},
        {",", Tok::Comma},            {";", Tok::Semi},
        {":", Tok::Colon},            {"@", Tok::At},
        {"~", Tok::Tilde},            {"#", Tok::Hash},
        {"/", Tok::Slash},            {"*", Tok::Star},
        {"+", Tok::Plus},             {"!", Tok::Bang},
        {".", Tok::Dot},              {"^", Tok::Caret},
        {"_", Tok::Underscore},       {"=", Tok::Equals},
    };
    for (const auto& s : kSyms) {
      if (starts(s.text)) {
        bump(s.text.size());
        return s.kind;
      }
    }
    (void)t;
    unsigned char c = static_cast<unsigned char>(src_[pos_]);
    if (c < 0x80) fail(std::string("unexpected character '") + src_[pos_] + "'");
    fail("unexpected non-ASCII character");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

bool is_side_keyword(std::string_view w) {
  return w == "holds" || w == "fails" || w == "independent" ||
         w == "additive" || w == "normalized" || w == "function";
}

std::string canonical_text(const Token& t) {
  switch (t.kind) {
    case Tok::Star: return "*";
    case Tok::Arrow: return "->";
    default: return t.text;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  File file() {
    File out;
    while (!at(Tok::End)) {
      if (at_word("dist") && at(Tok::Ident, 1)) {
        Distribution d = distribution();
        std::string name = d.name;
        out.push_back(Item{std::move(name), std::move(d)});
      } else if (at_word("judgement") && at(Tok::Ident, 1) &&
                 at(Tok::Equals, 1 + name_length(1))) {
        advance();
        std::string name = item_name();
        advance();
        out.push_back(Item{std::move(name), judgement()});
      } else if (at_word("derivation") && at(Tok::Ident, 1) &&
                 at(Tok::Equals, 1 + name_length(1))) {
        advance();
        std::string name = item_name();
        advance();
        out.push_back(Item{std::move(name), derivation()});
      } else if (at(Tok::LParen) && (at_word("rule", 1) || at_word("premise", 1))) {
        out.push_back(Item{"", derivation()});
      } else {
        out.push_back(Item{"", judgement()});
      }
      if (at(Tok::Semi)) advance();
    }
    return out;
  }

  Distribution distribution() {
    expect_word("dist");
    Distribution d;
    expect(Tok::Ident, "distribution name");
    --pos_;
    d.name = item_name();
    if (at_word("unknown")) {
      advance();
      VariableRef v = variable_ref();
      expect(Tok::LBrace, "'{'");
      std::vector<OutputType> seen;
      while (!at(Tok::RBrace)) {
        const Token& start = peek();
        OutputType o = output();
        if (std::find(seen.begin(), seen.end(), o) != seen.end()) {
          fail(start, "distinct output", ErrorKind::SyntaxError,
               "duplicate output in unknown distribution");
        }
        seen.push_back(o);
        d.entries.push_back(tptnd::statement(v.term(), o,
                                      Annotation::interval(Rational(0), Rational(1))));
        if (at(Tok::Semi) || at(Tok::Comma)) {
          advance();
        } else {
          break;
        }
      }
      if (seen.empty()) fail(peek(), "output type", ErrorKind::SyntaxError,
                             "unknown distribution needs at least one output");
      expect(Tok::RBrace, "'}'");
      return d;
    }
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      const Token& start = peek();
      TypedStatement e = entry();
      if (!as_variable(e.subject)) {
        fail(start, "variable", ErrorKind::SyntaxError,
             "distribution entries must have variable subjects");
      }
      if (std::find(d.entries.begin(), d.entries.end(), e) != d.entries.end()) {
        fail(start, "distinct entry", ErrorKind::SyntaxError, "duplicate entry");
      }
      d.entries.push_back(std::move(e));
      if (at(Tok::Semi) || at(Tok::Comma)) {
        advance();
      } else {
        break;
      }
    }
    expect(Tok::RBrace, "'}'");
    return d;
  }

  Judgement judgement() {
    Judgement j;
    j.context = context();
    expect(Tok::Turnstile, "'|-'");
    j.conclusion = statement();
    return j;
  }

  Conclusion conclusion() {
    if (at_word("family") && at(Tok::LBrace, 1)) {
      advance();
      advance();
      JudgementFamily fam;
      while (!at(Tok::RBrace)) {
        fam.members.push_back(judgement());
        if (at(Tok::Semi)) {
          advance();
        } else {
          break;
        }
      }
      expect(Tok::RBrace, "'}'");
      if (fam.members.empty()) {
        fail(peek(), "judgement", ErrorKind::SyntaxError, "empty family");
      }
      return fam;
    }
    std::vector<ContextItem> ctx = context();
    if (at(Tok::DoubleColon)) {
      advance();
      expect_word("distribution");
      return DistributionJudgement{std::move(ctx)};
    }
    expect(Tok::Turnstile, "'|-' or '::'");
    Judgement j;
    j.context = std::move(ctx);
    j.conclusion = statement();
    return j;
  }

  Derivation derivation() {
    expect(Tok::LParen, "'('");
    Derivation d;
    if (at_word("premise")) {
      advance();
      d.conclusion = conclusion();
      expect(Tok::RParen, "')'");
      return d;
    }
    if (!at_word("rule")) fail(peek(), "'rule' or 'premise'");
    advance();
    const Token& rule_tok = peek();
    std::string name = rule_name();
    auto id = rule_from_name(name);
    if (!id) fail(rule_tok, "rule name", ErrorKind::SyntaxError,
                  "unknown rule '" + name + "'");
    d.rule = *id;
    while (at(Tok::LParen)) {
      if (at_word("rule", 1) || at_word("premise", 1)) {
        d.premises.push_back(derivation());
      } else if (at(Tok::Ident, 1) && is_side_keyword(peek(1).text)) {
        d.side_conditions.push_back(side_condition());
      } else {
        break;
      }
    }
    d.conclusion = conclusion();
    expect(Tok::RParen, "')'");
    Arity arity = rule_arity(*id);
    if (!arity.admits(static_cast<int>(d.premises.size()))) {
      fail(rule_tok, "premise count", ErrorKind::ArityError,
           "rule '" + name + "' takes " + std::to_string(arity.min) +
               (arity.max == arity.min ? "" : arity.max < 0 ? " or more" : "+") +
               " premises, got " + std::to_string(d.premises.size()));
    }
    return d;
  }

  SideCondition side_condition() {
    expect(Tok::LParen, "'('");
    const Token& kw = expect(Tok::Ident, "side condition");
    SideCondition c;
    if (kw.text == "holds" || kw.text == "fails") {
      Rational a = probability();
      auto [k, n] = count_ratio();
      std::optional<ThresholdStrategy> s;
      if (at(Tok::Ident) && at(Tok::Colon, 1)) s = strategy();
      c = kw.text == "holds" ? SideCondition::holds(a, k, n, s)
                             : SideCondition::fails(a, k, n, s);
    } else if (kw.text == "independent") {
      expect(Tok::LParen, "'('");
      auto l = context();
      expect(Tok::RParen, "')'");
      expect(Tok::LParen, "'('");
      auto r = context();
      expect(Tok::RParen, "')'");
      c = SideCondition::independent(std::move(l), std::move(r));
    } else if (kw.text == "additive") {
      VariableRef v = variable_ref();
      c = SideCondition::additivity(std::move(v), probability());
    } else if (kw.text == "normalized") {
      std::vector<Rational> values;
      while (!at(Tok::RParen)) values.push_back(probability());
      c = SideCondition::normalized(std::move(values));
    } else if (kw.text == "function") {
      expect_word("ml");
      MlMode mode = MlMode::CountExponent;
      if (at_word("printed")) {
        advance();
        mode = MlMode::AsPrinted;
      } else if (at_word("count")) {
        advance();
      }
      c = SideCondition::contraction_function(mode);
    } else {
      fail(kw, "side condition keyword");
    }
    expect(Tok::RParen, "')'");
    return c;
  }

  std::vector<ContextItem> context() {
    std::vector<ContextItem> items;
    if (at(Tok::Turnstile) || at(Tok::DoubleColon) || at(Tok::RParen)) return items;
    std::vector<TypedStatement> literal;
    for (;;) {
      const Token& start = peek();
      ContextItem item = context_item();
      for (const auto& e : item.entries) {
        if (std::find(literal.begin(), literal.end(), e) != literal.end()) {
          fail(start, "distinct entry", ErrorKind::SyntaxError,
               "duplicate context entry");
        }
        literal.push_back(e);
      }
      items.push_back(std::move(item));
      if (!at(Tok::Comma)) break;
      advance();
    }
    return items;
  }

  ContextItem context_item() {
    if (at(Tok::LBrace)) {
      advance();
      std::vector<TypedStatement> entries;
      while (!at(Tok::RBrace)) {
        entries.push_back(entry());
        if (at(Tok::Comma) || at(Tok::Semi)) {
          advance();
        } else {
          break;
        }
      }
      expect(Tok::RBrace, "'}'");
      return ContextItem::block(std::move(entries));
    }
    if (at(Tok::Ident)) {
      const std::size_t len = name_length(0);
      if (at(Tok::Comma, len) || at(Tok::Turnstile, len) || at(Tok::DoubleColon, len) ||
          at(Tok::RParen, len)) {
        return ContextItem::ref(item_name());
      }
    }
    return ContextItem::entry(entry());
  }

  TypedStatement entry() {
    const Token& start = peek();
    TypedStatement s = statement();
    if (!s.output || !is_context_subject(s.subject)) {
      fail(start, "variable", ErrorKind::SyntaxError,
           "context entries need a variable subject and an output type");
    }
    return s;
  }

  TypedStatement statement() {
    const Token& start = peek();
    Term subject = term();
    if (at(Tok::Colon)) {
      advance();
      OutputType o = output();
      Annotation a = annotation();
      if (subject.kind == Term::Kind::Name && subject.sample &&
          a.kind == Annotation::Kind::Frequency && a.trials != *subject.sample) {
        fail(start, "trials matching the sample size", ErrorKind::RangeError,
             "frequency over " + std::to_string(a.trials) +
                 " trials on a sample of " + std::to_string(*subject.sample));
      }
      return tptnd::statement(std::move(subject), std::move(o), std::move(a));
    }
    if (subject.kind == Term::Kind::Trust || subject.kind == Term::Kind::UTrust) {
      return TypedStatement{std::move(subject), std::nullopt, Annotation{}};
    }
    fail(peek(), "':'");
  }

  OutputType output() {
    OutputType l = sum_output();
    if (at(Tok::Arrow)) {
      advance();
      return OutputType::arrow(std::move(l), output());
    }
    return l;
  }

  Annotation annotation() {
    if (at(Tok::At)) {
      advance();
      return Annotation::theoretical(probability());
    }
    if (at(Tok::Tilde)) {
      advance();
      return Annotation::expected(probability());
    }
    if (at(Tok::Hash)) {
      advance();
      auto [k, n] = count_ratio();
      return Annotation::frequency(k, n);
    }
    if (at_word("in") || at_word("notin")) {
      bool inside = advance().text == "in";
      expect(Tok::LBracket, "'['");
      const Token& start = peek();
      Rational lo = probability();
      expect(Tok::Comma, "','");
      Rational hi = probability();
      expect(Tok::RBracket, "']'");
      if (lo > hi) fail(start, "lo <= hi", ErrorKind::RangeError, "empty interval");
      return inside ? Annotation::interval(lo, hi) : Annotation::outside(lo, hi);
    }
    if (at(Tok::LBracket)) {
      advance();
      Rational tag = probability();
      expect(Tok::RBracket, "']'");
      return Annotation::tagged(tag, annotation());
    }
    return Annotation::deterministic();
  }

  Term term() {
    if (at(Tok::LBracket)) {
      advance();
      Term binder = term();
      expect(Tok::RBracket, "']'");
      Term body = term();
      return Term::abstraction(std::move(binder), std::move(body));
    }
    return postfix_term();
  }

  Rational probability() {
    const Token& start = peek();
    std::string text;
    if (at(Tok::Int)) {
      text = advance().text;
      if (at(Tok::Slash)) {
        advance();
        text += "/" + expect(Tok::Int, "integer").text;
      }
    } else if (at(Tok::Decimal)) {
      text = advance().text;
    } else {
      fail(start, "probability literal");
    }
    Rational r;
    try {
      r = Rational::parse(text);
    } catch (const Error& e) {
      fail(start, "probability literal", ErrorKind::RangeError, e.detail());
    }
    if (!r.is_probability()) {
      fail(start, "probability in [0,1]", ErrorKind::RangeError,
           "probability " + text + " outside [0,1]");
    }
    return r;
  }

  void expect_end() {
    if (!at(Tok::End)) fail(peek(), describe(Tok::End));
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
  bool at_word(std::string_view w, std::size_t ahead = 0) const {
    return at(Tok::Ident, ahead) && peek(ahead).text == w;
  }
  const Token& advance() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail(peek(), what);
    return advance();
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail(peek(), "'" + std::string(w) + "'");
    advance();
  }

  [[noreturn]] void fail(const Token& t, const std::string& expected,
                         ErrorKind kind = ErrorKind::SyntaxError,
                         std::string message = "") {
    if (message.empty()) {
      std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
      message = "expected " + expected + ", found " + found;
    }
    throw ParseError(kind, t.line, t.column, expected, message);
  }

  std::int64_t integer() {
    const Token& t = expect(Tok::Int, "integer");
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) fail(t, "integer", ErrorKind::RangeError, "integer too large");
    return v;
  }

  std::pair<std::int64_t, std::int64_t> count_ratio() {
    const Token& start = peek();
    std::int64_t k = integer();
    expect(Tok::Slash, "'/'");
    std::int64_t n = integer();
    if (n < 1 || k > n) {
      fail(start, "k/n with 0 <= k <= n, n >= 1", ErrorKind::RangeError,
           "frequency " + std::to_string(k) + "/" + std::to_string(n) +
               " outside [0,1]");
    }
    return {k, n};
  }

  ThresholdStrategy strategy() {
    const Token& start = peek();
    std::string kind = advance().text;
    advance();  // ':'
    Rational value = probability();
    try {
      return ThresholdStrategy::parse(kind + ":" + value.str());
    } catch (const Error& e) {
      fail(start, "strategy (exact|wald|eps):value", ErrorKind::SyntaxError, e.detail());
    }
  }

  // Item names may contain '_' and digits; the pieces must be adjacent.
  std::size_t name_length(std::size_t ahead) const {
    std::size_t n = 1;
    while (true) {
      const Token& prev = peek(ahead + n - 1);
      const Token& t = peek(ahead + n);
      if (t.begin != prev.end) break;
      if (t.kind != Tok::Ident && t.kind != Tok::Underscore && t.kind != Tok::Int) break;
      ++n;
    }
    return n;
  }

  std::string item_name() {
    const std::size_t n = name_length(0);
    std::string name;
    for (std::size_t i = 0; i < n; ++i) name += advance().text;
    return name;
  }

  std::string rule_name() {
    const Token& first = expect(Tok::Ident, "rule name");
    std::string name = first.text;
    std::size_t end = first.end;
    while (!at(Tok::End) && !at(Tok::LParen) && !at(Tok::RParen) &&
           peek().begin == end) {
      const Token& t = advance();
      name += canonical_text(t);
      end = t.end;
    }
    return name;
  }

  VariableRef variable_ref() {
    VariableRef v;
    v.name = expect(Tok::Ident, "variable").text;
    if (at(Tok::Underscore)) {
      advance();
      if (!at(Tok::Ident) && !at(Tok::Int)) fail(peek(), "process name");
      v.index = advance().text;
    }
    return v;
  }

  static bool is_context_subject(const Term& t) {
    if (t.sample || t.run) return false;
    if (t.kind == Term::Kind::Trust || t.kind == Term::Kind::UTrust) return false;
    if (t.left && !is_context_subject(*t.left)) return false;
    if (t.right && !is_context_subject(*t.right)) return false;
    if (t.arg && !is_context_subject(t.arg->subject)) return false;
    return true;
  }

  OutputType sum_output() {
    OutputType l = product_output();
    while (at(Tok::Plus)) {
      advance();
      l = OutputType::sum(std::move(l), product_output());
    }
    return l;
  }

  OutputType product_output() {
    OutputType l = unary_output();
    while (at(Tok::Star)) {
      advance();
      l = OutputType::product(std::move(l), unary_output());
    }
    return l;
  }

  OutputType unary_output() {
    if (at(Tok::Bang)) {
      advance();
      return OutputType::complement(unary_output());
    }
    if (at(Tok::LParen)) {
      advance();
      OutputType o = output();
      expect(Tok::RParen, "')'");
      return o;
    }
    if ((at(Tok::Ident) && !at_word("in") && !at_word("notin")) || at(Tok::Int)) {
      return OutputType::atom(advance().text);
    }
    fail(peek(), "output type");
  }

  Term postfix_term() {
    Term t = primary_term();
    for (;;) {
      if (at(Tok::LBracket) && at(Tok::Int, 1) && at(Tok::RBracket, 2)) {
        const Token& start = advance();
        std::int64_t n = integer();
        advance();
        if (t.sample) fail(start, "single sample size", ErrorKind::SyntaxError,
                           "sample size given twice");
        if (n < 1) fail(start, "sample size >= 1", ErrorKind::RangeError,
                        "sample size must be at least 1");
        t.sample = n;
      } else if (at(Tok::Caret)) {
        const Token& start = advance();
        std::int64_t r = integer();
        if (t.run) fail(start, "single run index", ErrorKind::SyntaxError,
                        "run index given twice");
        if (r < 1) fail(start, "run index >= 1", ErrorKind::RangeError,
                        "run index must be at least 1");
        t.run = r;
      } else if (at(Tok::Dot) && (at(Tok::LParen, 1) || at(Tok::LBracket, 1))) {
        advance();
        bool paren = advance().kind == Tok::LParen;
        TypedStatement arg = statement();
        if (!arg.output) fail(peek(), "':'");
        expect(paren ? Tok::RParen : Tok::RBracket, paren ? "')'" : "']'");
        t = Term::application(std::move(t), std::move(arg));
      } else {
        return t;
      }
    }
  }

  Term primary_term() {
    if (at(Tok::Ident)) {
      const std::string& w = peek().text;
      if ((w == "fst" || w == "snd") && at(Tok::LParen, 1)) {
        bool first = w == "fst";
        advance();
        advance();
        Term inner = term();
        expect(Tok::RParen, "')'");
        return first ? Term::fst(std::move(inner)) : Term::snd(std::move(inner));
      }
      if ((w == "Trust" || w == "UTrust") && at(Tok::LParen, 1)) {
        bool positive = w == "Trust";
        advance();
        advance();
        const Token& start = peek();
        TypedStatement inner = statement();
        if (!inner.output) fail(start, "typed statement");
        expect(Tok::RParen, "')'");
        return positive ? Term::trust(std::move(inner)) : Term::utrust(std::move(inner));
      }
      VariableRef v = variable_ref();
      return Term::var(std::move(v.name), std::move(v.index));
    }
    if (at(Tok::LAngle)) {
      advance();
      Term l = term();
      expect(Tok::Comma, "','");
      Term r = term();
      expect(Tok::RAngle, "'>'");
      return Term::pair(std::move(l), std::move(r));
    }
    if (at(Tok::LParen)) {
      advance();
      Term t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail(peek(), "term");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

template <class F>
auto parse_whole(std::string_view text, F f) {
  Parser p(text);
  auto result = f(p);
  p.expect_end();
  return result;
}

}  // namespace

File parse_file(std::string_view text) {
  return parse_whole(text, [](Parser& p) { return p.file(); });
}

Judgement parse_judgement(std::string_view text) {
  return parse_whole(text, [](Parser& p) { return p.judgement(); });
}

Derivation parse_derivation(std::string_view text) {
  return parse_whole(text, [](Parser& p) { return p.derivation(); });
}

TypedStatement parse_statement(std::string_view text) {
  return parse_whole(text, [](Parser& p) { return p.statement(); });
}

OutputType parse_output(std::string_view text) {
  return parse_whole(text, [](Parser& p) { return p.output(); });
}

Term parse_term(std::string_view text) {
  return parse_whole(text, [](Parser& p) { return p.term(); });
}

Annotation parse_annotation(std::string_view text) {
  return parse_whole(text, [](Parser& p) { return p.annotation(); });
}

Rational parse_probability(std::string_view text) {
  return parse_whole(text, [](Parser& p) { return p.probability(); });
}

}  // namespace tptnd::syntax
