#include <algorithm>
#include <cctype>
#include <set>

#include "routeway/dsl.hpp"

namespace routeway::dsl {

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return is_error(d); });
}

std::string format(const Diagnostic& d, std::string_view filename) {
  std::string out(filename);
  out += ":" + std::to_string(d.where.line) + ":" + std::to_string(d.where.column) + ": ";
  out += is_error(d) ? "error" : "warning";
  out += "[" + d.code + "] " + d.message;
  return out;
}

// ---------------------------------------------------------------------------
// Declaration equality (source spans excluded).
// ---------------------------------------------------------------------------

namespace {

bool same_waypoint_fields(const Waypoint& a, const Waypoint& b) {
  return a.id == b.id && a.statements == b.statements && a.display == b.display;
}

}  // namespace

bool operator==(const WaypointDecl& a, const WaypointDecl& b) {
  return same_waypoint_fields(a.waypoint, b.waypoint);
}

bool operator==(const TrailDecl& a, const TrailDecl& b) { return a.trail == b.trail; }

bool operator==(const BaseFieldEntry& a, const BaseFieldEntry& b) {
  return a.trail_id == b.trail_id && a.decl == b.decl;
}

bool operator==(const BaseFieldDecl& a, const BaseFieldDecl& b) {
  return a.id == b.id && a.extends == b.extends && a.entries == b.entries;
}

bool operator==(const UnitDecl& a, const UnitDecl& b) {
  return a.initial == b.initial && a.terminal == b.terminal && a.trail == b.trail &&
         a.substitution == b.substitution && a.two_way == b.two_way && a.compass == b.compass;
}

bool operator==(const RoutewayDecl& a, const RoutewayDecl& b) {
  return a.name == b.name && a.basefield == b.basefield && a.start == b.start &&
         a.end == b.end && a.units == b.units;
}

bool operator==(const RoadmapDecl& a, const RoadmapDecl& b) {
  return a.name == b.name && a.start == b.start && a.end == b.end && a.routeways == b.routeways;
}

bool operator==(const AtlasDecl& a, const AtlasDecl& b) {
  return a.name == b.name && a.targets == b.targets && a.roadmaps == b.roadmaps;
}

bool operator==(const FiltrationDecl& a, const FiltrationDecl& b) {
  return a.name == b.name && a.stages == b.stages;
}

bool operator==(const CompassDecl& a, const CompassDecl& b) {
  return a.routeway == b.routeway && a.text == b.text;
}

bool operator==(const Document& a, const Document& b) { return a.items == b.items; }

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind {
    Ident,
    String,
    Term,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Comma,
    At,
    ArrowOpen,    // =[
    TwoWayOpen,   // <=[
    ArrowClose,   // ]=>
    PlainArrow,   // =>
    TwoWayPlain,  // <=>
    Assign,       // =:
    End,
    Bad,
  };
  Kind kind = End;
  std::string text;  // payload; for Bad tokens, the error message
  SourceSpan span;
};

const char* token_name(Token::Kind k) {
  switch (k) {
    case Token::Ident: return "identifier";
    case Token::String: return "string";
    case Token::Term: return "term";
    case Token::LBrace: return "'{'";
    case Token::RBrace: return "'}'";
    case Token::LParen: return "'('";
    case Token::RParen: return "')'";
    case Token::Colon: return "':'";
    case Token::Comma: return "','";
    case Token::At: return "'@'";
    case Token::ArrowOpen: return "'=['";
    case Token::TwoWayOpen: return "'<=['";
    case Token::ArrowClose: return "']=>'";
    case Token::PlainArrow: return "'=>'";
    case Token::TwoWayPlain: return "'<=>'";
    case Token::Assign: return "'=:'";
    case Token::End: return "end of file";
    case Token::Bad: return "invalid token";
  }
  return "token";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next(bool term_mode) {
    skip_trivia();
    Token t;
    t.span.line = line_;
    t.span.column = col_;
    if (eof()) {
      t.kind = Token::End;
      finish(t);
      return t;
    }
    char c = peek();
    if (c == '"') return lex_string(t);
    if (term_mode) return lex_term(t);
    if (ident_start(c)) {
      while (!eof() && ident_char(peek())) t.text.push_back(take());
      t.kind = Token::Ident;
      finish(t);
      return t;
    }
    switch (c) {
      case '{': take(); return simple(t, Token::LBrace);
      case '}': take(); return simple(t, Token::RBrace);
      case '(': take(); return simple(t, Token::LParen);
      case ')': take(); return simple(t, Token::RParen);
      case ':': take(); return simple(t, Token::Colon);
      case ',': take(); return simple(t, Token::Comma);
      case '@': take(); return simple(t, Token::At);
      case '=':
        take();
        if (!eof() && peek() == '[') { take(); return simple(t, Token::ArrowOpen); }
        if (!eof() && peek() == '>') { take(); return simple(t, Token::PlainArrow); }
        if (!eof() && peek() == ':') { take(); return simple(t, Token::Assign); }
        return bad(t, "stray '=' (expected '=[', '=>' or '=:')");
      case '<':
        take();
        if (!eof() && peek() == '=') {
          take();
          if (!eof() && peek() == '[') { take(); return simple(t, Token::TwoWayOpen); }
          if (!eof() && peek() == '>') { take(); return simple(t, Token::TwoWayPlain); }
        }
        return bad(t, "stray '<' (expected '<=[' or '<=>')");
      case ']':
        take();
        if (!eof() && peek() == '=') {
          take();
          if (!eof() && peek() == '>') { take(); return simple(t, Token::ArrowClose); }
        }
        return bad(t, "stray ']' (expected ']=>')");
      default:
        take();
        return bad(t, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  bool eof() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  char take() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    while (!eof()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else if (c == '#') {
        while (!eof() && peek() != '\n') take();
      } else {
        break;
      }
    }
  }

  void finish(Token& t) {
    t.span.end_line = line_;
    t.span.end_column = col_;
  }
  Token simple(Token& t, Token::Kind k) {
    t.kind = k;
    finish(t);
    return t;
  }
  Token bad(Token& t, std::string message) {
    t.kind = Token::Bad;
    t.text = std::move(message);
    finish(t);
    return t;
  }

  Token lex_string(Token& t) {
    take();  // opening quote
    while (true) {
      if (eof() || peek() == '\n') return bad(t, "unterminated string");
      char c = take();
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) return bad(t, "unterminated string");
        char e = take();
        switch (e) {
          case 'n': t.text.push_back('\n'); break;
          case 't': t.text.push_back('\t'); break;
          case '\\': t.text.push_back('\\'); break;
          case '"': t.text.push_back('"'); break;
          default: return bad(t, std::string("unknown escape '\\") + e + "'");
        }
      } else {
        t.text.push_back(c);
      }
    }
    t.kind = Token::String;
    finish(t);
    return t;
  }

  Token lex_term(Token& t) {
    while (!eof()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ']' || c == '}' ||
          c == '"' || c == '#')
        break;
      t.text.push_back(take());
    }
    if (t.text.empty()) return bad(t, "empty substitution term");
    t.kind = Token::Term;
    finish(t);
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

const char* const kItemKeywords[] = {"basefield", "waypoint",   "trail",  "routeway",
                                     "roadmap",   "atlas",      "filtration", "compass"};

bool is_item_keyword(const Token& t) {
  if (t.kind != Token::Ident) return false;
  for (const char* kw : kItemKeywords) {
    if (t.text == kw) return true;
  }
  return false;
}

bool letters_only(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  });
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) {}

  ParseResult run() {
    while (!at(Token::End)) {
      try {
        parse_item();
      } catch (const Bail&) {
        sync_to_item();
      }
    }
    ParseResult result;
    if (!has_errors(diags_)) validate();
    result.diagnostics = std::move(diags_);
    if (!has_errors(result.diagnostics)) {
      doc_.finalize();
      result.document = std::move(doc_);
    }
    return result;
  }

 private:
  struct Bail {};

  Lexer lexer_;
  std::optional<Token> buffer_;
  std::vector<Diagnostic> diags_;
  Document doc_;

  const Token& peek() {
    if (!buffer_) buffer_ = lexer_.next(false);
    return *buffer_;
  }
  Token advance() {
    const Token& p = peek();
    (void)p;
    Token t = std::move(*buffer_);
    buffer_.reset();
    return t;
  }
  Token take_term() {
    // Only valid when nothing is buffered, i.e. right after consuming '=:'.
    if (buffer_) return advance();
    Token t = lexer_.next(true);
    if (t.kind == Token::Bad) fail(t.span, t.text);
    return t;
  }
  bool at(Token::Kind k) { return peek().kind == k; }
  bool at_keyword(const char* kw) { return peek().kind == Token::Ident && peek().text == kw; }

  void error(const SourceSpan& where, std::string code, std::string message) {
    diags_.push_back({Diagnostic::Severity::Error, std::move(code), where, std::move(message)});
  }
  [[noreturn]] void fail(const SourceSpan& where, std::string message) {
    error(where, "syntax-error", std::move(message));
    throw Bail{};
  }

  Token expect(Token::Kind k, const char* what) {
    if (peek().kind == Token::Bad) fail(peek().span, peek().text);
    if (peek().kind != k)
      fail(peek().span, std::string("expected ") + what + ", found " + token_name(peek().kind));
    return advance();
  }
  Token expect_ident(const char* what) { return expect(Token::Ident, what); }
  void expect_keyword(const char* kw) {
    if (!at_keyword(kw))
      fail(peek().span, std::string("expected '") + kw + "', found " + token_name(peek().kind));
    advance();
  }

  void sync_to_item() {
    while (!at(Token::End) && !is_item_keyword(peek())) advance();
  }

  void parse_item() {
    if (peek().kind == Token::Bad) fail(peek().span, peek().text);
    if (peek().kind != Token::Ident)
      fail(peek().span,
           std::string("expected a declaration, found ") + token_name(peek().kind));
    const std::string& kw = peek().text;
    if (kw == "basefield") doc_.items.emplace_back(parse_basefield());
    else if (kw == "waypoint") doc_.items.emplace_back(parse_waypoint());
    else if (kw == "trail") doc_.items.emplace_back(parse_trail());
    else if (kw == "routeway") doc_.items.emplace_back(parse_routeway());
    else if (kw == "roadmap") doc_.items.emplace_back(parse_roadmap());
    else if (kw == "atlas") doc_.items.emplace_back(parse_atlas());
    else if (kw == "filtration") doc_.items.emplace_back(parse_filtration());
    else if (kw == "compass") doc_.items.emplace_back(parse_compass());
    else
      fail(peek().span, "unknown declaration '" + kw + "'");
  }

  std::vector<std::string> parse_tuple() {
    std::vector<std::string> out;
    if (at(Token::LParen)) {
      advance();
      out.push_back(expect(Token::String, "a quoted statement").text);
      while (at(Token::Comma)) {
        advance();
        out.push_back(expect(Token::String, "a quoted statement").text);
      }
      expect(Token::RParen, "')'");
    } else {
      out.push_back(expect(Token::String, "a quoted statement").text);
    }
    return out;
  }

  std::vector<std::string> parse_params() {
    std::vector<std::string> params;
    if (!at(Token::LParen)) return params;
    advance();
    while (true) {
      Token p = expect_ident("a parameter symbol");
      if (!letters_only(p.text))
        fail(p.span, "parameter symbols may contain only letters and underscores");
      if (std::find(params.begin(), params.end(), p.text) != params.end())
        fail(p.span, "duplicate parameter '" + p.text + "'");
      params.push_back(p.text);
      if (at(Token::Comma)) {
        advance();
        continue;
      }
      break;
    }
    expect(Token::RParen, "')'");
    return params;
  }

  TrailDecl parse_trail() {
    SourceSpan loc = peek().span;
    expect_keyword("trail");
    TrailDecl decl;
    decl.loc = loc;
    decl.trail.id = expect_ident("a trail name").text;
    decl.trail.params = parse_params();
    if (at(Token::Colon)) {
      advance();
      decl.trail.statement = expect(Token::String, "the trail statement").text;
      return decl;
    }
    expect(Token::LBrace, "':' or '{'");
    bool saw_statement = false, saw_requires = false, saw_premise = false, saw_conclusion = false;
    while (!at(Token::RBrace)) {
      Token field = expect_ident("a trail field (statement, requires, premise, conclusion)");
      expect(Token::Colon, "':'");
      if (field.text == "statement") {
        if (saw_statement) fail(field.span, "duplicate 'statement'");
        saw_statement = true;
        decl.trail.statement = expect(Token::String, "the trail statement").text;
      } else if (field.text == "requires") {
        if (saw_requires) fail(field.span, "duplicate 'requires'");
        saw_requires = true;
        decl.trail.hypotheses.push_back(expect(Token::String, "a hypothesis").text);
        while (at(Token::Comma)) {
          advance();
          decl.trail.hypotheses.push_back(expect(Token::String, "a hypothesis").text);
        }
      } else if (field.text == "premise") {
        if (saw_premise) fail(field.span, "duplicate 'premise'");
        saw_premise = true;
        decl.trail.premise = parse_tuple();
      } else if (field.text == "conclusion") {
        if (saw_conclusion) fail(field.span, "duplicate 'conclusion'");
        saw_conclusion = true;
        decl.trail.conclusion = parse_tuple();
      } else {
        fail(field.span, "unknown trail field '" + field.text + "'");
      }
    }
    expect(Token::RBrace, "'}'");
    if (saw_premise != saw_conclusion)
      fail(loc, "trail '" + decl.trail.id + "' declares premise without conclusion (or vice versa)");
    return decl;
  }

  BaseFieldDecl parse_basefield() {
    BaseFieldDecl decl;
    decl.loc = peek().span;
    expect_keyword("basefield");
    decl.id = expect_ident("a base field name").text;
    if (at_keyword("extends")) {
      advance();
      decl.extends = expect_ident("the parent base field name").text;
    }
    expect(Token::LBrace, "'{'");
    while (!at(Token::RBrace)) {
      if (!at_keyword("trail"))
        fail(peek().span, std::string("expected a trail entry, found ") + token_name(peek().kind));
      // A bare name is a reference; a name followed by params, ':' or '{'
      // is an inline declaration.
      SourceSpan entry_loc = peek().span;
      advance();  // 'trail'
      Token name = expect_ident("a trail name");
      BaseFieldEntry entry;
      entry.trail_id = name.text;
      if (at(Token::LParen) || at(Token::Colon) || at(Token::LBrace)) {
        TrailDecl inline_decl;
        inline_decl.loc = entry_loc;
        inline_decl.trail.id = name.text;
        inline_decl.trail.params = parse_params();
        if (at(Token::Colon)) {
          advance();
          inline_decl.trail.statement = expect(Token::String, "the trail statement").text;
        } else {
          expect(Token::LBrace, "':' or '{'");
          bool saw_statement = false, saw_requires = false, saw_premise = false,
               saw_conclusion = false;
          while (!at(Token::RBrace)) {
            Token field = expect_ident("a trail field");
            expect(Token::Colon, "':'");
            if (field.text == "statement") {
              if (saw_statement) fail(field.span, "duplicate 'statement'");
              saw_statement = true;
              inline_decl.trail.statement = expect(Token::String, "the trail statement").text;
            } else if (field.text == "requires") {
              if (saw_requires) fail(field.span, "duplicate 'requires'");
              saw_requires = true;
              inline_decl.trail.hypotheses.push_back(expect(Token::String, "a hypothesis").text);
              while (at(Token::Comma)) {
                advance();
                inline_decl.trail.hypotheses.push_back(
                    expect(Token::String, "a hypothesis").text);
              }
            } else if (field.text == "premise") {
              if (saw_premise) fail(field.span, "duplicate 'premise'");
              saw_premise = true;
              inline_decl.trail.premise = parse_tuple();
            } else if (field.text == "conclusion") {
              if (saw_conclusion) fail(field.span, "duplicate 'conclusion'");
              saw_conclusion = true;
              inline_decl.trail.conclusion = parse_tuple();
            } else {
              fail(field.span, "unknown trail field '" + field.text + "'");
            }
          }
          expect(Token::RBrace, "'}'");
          if (saw_premise != saw_conclusion)
            fail(entry_loc, "trail '" + name.text +
                                "' declares premise without conclusion (or vice versa)");
        }
        entry.decl = std::move(inline_decl);
      }
      decl.entries.push_back(std::move(entry));
    }
    expect(Token::RBrace, "'}'");
    return decl;
  }

  WaypointDecl parse_waypoint() {
    WaypointDecl decl;
    decl.loc = peek().span;
    expect_keyword("waypoint");
    decl.waypoint.id = expect_ident("a waypoint name").text;
    expect(Token::Colon, "':'");
    decl.waypoint.statements = parse_tuple();
    if (at_keyword("display")) {
      advance();
      decl.waypoint.display = expect(Token::String, "the display text").text;
    }
    return decl;
  }

  Substitution parse_substitution() {
    Substitution subst;
    while (true) {
      Token param = expect_ident("a parameter symbol");
      expect(Token::Assign, "'=:'");
      Token term = take_term();
      if (term.kind != Token::Term && term.kind != Token::String)
        fail(term.span, std::string("expected a term, found ") + token_name(term.kind));
      if (term.text.empty()) fail(term.span, "empty substitution term");
      if (!subst.bindings.emplace(param.text, term.text).second)
        fail(param.span, "duplicate binding for '" + param.text + "'");
      if (at(Token::Comma)) {
        advance();
        continue;
      }
      break;
    }
    return subst;
  }

  // One chain line: WP (arrow WP (@ "note")?)+, each arrow yielding a unit.
  void parse_chain(RoutewayDecl& rw) {
    Token initial = expect_ident("a waypoint reference");
    std::string current = initial.text;
    SourceSpan chain_start = initial.span;
    bool any = false;
    while (true) {
      bool two_way = false;
      std::optional<std::string> trail;
      std::optional<Substitution> subst;
      if (at(Token::ArrowOpen) || at(Token::TwoWayOpen)) {
        two_way = at(Token::TwoWayOpen);
        advance();
        trail = expect_ident("a trail reference").text;
        if (at_keyword("with")) {
          advance();
          subst = parse_substitution();
        }
        expect(Token::ArrowClose, "']=>'");
      } else if (at(Token::PlainArrow) || at(Token::TwoWayPlain)) {
        two_way = at(Token::TwoWayPlain);
        advance();
      } else if (!any) {
        fail(peek().span,
             std::string("expected an arrow after waypoint '") + current + "'");
      } else {
        break;
      }
      Token target = expect_ident("a waypoint reference");
      UnitDecl unit;
      unit.initial = current;
      unit.terminal = target.text;
      unit.trail = std::move(trail);
      unit.substitution = std::move(subst);
      unit.two_way = two_way;
      unit.loc = chain_start;
      unit.loc.end_line = target.span.end_line;
      unit.loc.end_column = target.span.end_column;
      if (at(Token::At)) {
        advance();
        Token note = expect(Token::String, "the compass note");
        unit.compass = note.text;
        unit.loc.end_line = note.span.end_line;
        unit.loc.end_column = note.span.end_column;
      }
      rw.units.push_back(std::move(unit));
      any = true;
      current = target.text;
      chain_start = target.span;
    }
  }

  RoutewayDecl parse_routeway() {
    RoutewayDecl decl;
    decl.loc = peek().span;
    expect_keyword("routeway");
    decl.name = expect_ident("a routeway name").text;
    expect_keyword("in");
    decl.basefield = expect_ident("a base field reference").text;
    expect_keyword("from");
    decl.start = expect_ident("the start waypoint").text;
    expect_keyword("to");
    decl.end = expect_ident("the destination waypoint").text;
    expect(Token::LBrace, "'{'");
    while (!at(Token::RBrace)) {
      if (at(Token::End)) fail(peek().span, "unterminated routeway block");
      parse_chain(decl);
    }
    expect(Token::RBrace, "'}'");
    return decl;
  }

  RoadmapDecl parse_roadmap() {
    RoadmapDecl decl;
    decl.loc = peek().span;
    expect_keyword("roadmap");
    decl.name = expect_ident("a roadmap name").text;
    expect_keyword("from");
    decl.start = expect_ident("the start waypoint").text;
    expect_keyword("to");
    decl.end = expect_ident("the destination waypoint").text;
    expect(Token::LBrace, "'{'");
    while (!at(Token::RBrace)) {
      expect_keyword("routeway");
      decl.routeways.push_back(expect_ident("a routeway name").text);
    }
    expect(Token::RBrace, "'}'");
    return decl;
  }

  AtlasDecl parse_atlas() {
    AtlasDecl decl;
    decl.loc = peek().span;
    expect_keyword("atlas");
    decl.name = expect_ident("an atlas name").text;
    expect(Token::LBrace, "'{'");
    while (!at(Token::RBrace)) {
      if (at_keyword("target")) {
        advance();
        decl.targets.push_back(expect_ident("a waypoint reference").text);
      } else if (at_keyword("roadmap")) {
        advance();
        decl.roadmaps.push_back(expect_ident("a roadmap name").text);
      } else {
        fail(peek().span,
             std::string("expected 'target' or 'roadmap', found ") + token_name(peek().kind));
      }
    }
    expect(Token::RBrace, "'}'");
    return decl;
  }

  FiltrationDecl parse_filtration() {
    FiltrationDecl decl;
    decl.loc = peek().span;
    expect_keyword("filtration");
    decl.name = expect_ident("a filtration name").text;
    expect(Token::LBrace, "'{'");
    decl.stages.push_back(expect_ident("a base field reference").text);
    while (at(Token::Comma)) {
      advance();
      decl.stages.push_back(expect_ident("a base field reference").text);
    }
    expect(Token::RBrace, "'}'");
    return decl;
  }

  CompassDecl parse_compass() {
    CompassDecl decl;
    decl.loc = peek().span;
    expect_keyword("compass");
    decl.routeway = expect_ident("a routeway name").text;
    expect(Token::Colon, "':'");
    decl.text = expect(Token::String, "the compass note").text;
    return decl;
  }

  // -------------------------------------------------------------------------
  // Reference and uniqueness validation (runs only when syntax was clean).
  // -------------------------------------------------------------------------

  void validate() {
    std::map<std::string, SourceSpan> waypoints, trails, basefields, routeways, roadmaps, atlases,
        filtrations;
    auto declare = [this](std::map<std::string, SourceSpan>& table, const std::string& id,
                          const SourceSpan& loc, const char* kind) {
      if (!table.emplace(id, loc).second)
        error(loc, "duplicate-identifier",
              std::string(kind) + " '" + id + "' is already declared");
    };

    for (const auto& item : doc_.items) {
      if (const auto* w = std::get_if<WaypointDecl>(&item)) {
        declare(waypoints, w->waypoint.id, w->loc, "waypoint");
      } else if (const auto* t = std::get_if<TrailDecl>(&item)) {
        declare(trails, t->trail.id, t->loc, "trail");
      } else if (const auto* b = std::get_if<BaseFieldDecl>(&item)) {
        declare(basefields, b->id, b->loc, "base field");
        for (const auto& entry : b->entries) {
          if (entry.decl) declare(trails, entry.trail_id, entry.decl->loc, "trail");
        }
      } else if (const auto* r = std::get_if<RoutewayDecl>(&item)) {
        declare(routeways, r->name, r->loc, "routeway");
      } else if (const auto* r = std::get_if<RoadmapDecl>(&item)) {
        declare(roadmaps, r->name, r->loc, "roadmap");
      } else if (const auto* a = std::get_if<AtlasDecl>(&item)) {
        declare(atlases, a->name, a->loc, "atlas");
      } else if (const auto* f = std::get_if<FiltrationDecl>(&item)) {
        declare(filtrations, f->name, f->loc, "filtration");
      }
    }

    auto require = [this](const std::map<std::string, SourceSpan>& table, const std::string& id,
                          const SourceSpan& loc, const char* kind) {
      if (table.count(id) == 0)
        error(loc, "unresolved-reference",
              std::string(kind) + " '" + id + "' is not declared in this document");
    };

    for (const auto& item : doc_.items) {
      if (const auto* b = std::get_if<BaseFieldDecl>(&item)) {
        if (b->extends) require(basefields, *b->extends, b->loc, "base field");
        for (const auto& entry : b->entries) {
          if (!entry.decl) require(trails, entry.trail_id, b->loc, "trail");
        }
      } else if (const auto* r = std::get_if<RoutewayDecl>(&item)) {
        require(basefields, r->basefield, r->loc, "base field");
        require(waypoints, r->start, r->loc, "waypoint");
        require(waypoints, r->end, r->loc, "waypoint");
        for (const auto& u : r->units) {
          require(waypoints, u.initial, u.loc, "waypoint");
          require(waypoints, u.terminal, u.loc, "waypoint");
          if (u.trail) require(trails, *u.trail, u.loc, "trail");
        }
      } else if (const auto* r = std::get_if<RoadmapDecl>(&item)) {
        require(waypoints, r->start, r->loc, "waypoint");
        require(waypoints, r->end, r->loc, "waypoint");
        for (const auto& name : r->routeways) require(routeways, name, r->loc, "routeway");
      } else if (const auto* a = std::get_if<AtlasDecl>(&item)) {
        for (const auto& t : a->targets) require(waypoints, t, a->loc, "waypoint");
        for (const auto& m : a->roadmaps) require(roadmaps, m, a->loc, "roadmap");
      } else if (const auto* f = std::get_if<FiltrationDecl>(&item)) {
        for (const auto& s : f->stages) require(basefields, s, f->loc, "base field");
      } else if (const auto* c = std::get_if<CompassDecl>(&item)) {
        require(routeways, c->routeway, c->loc, "routeway");
      }
    }
    if (has_errors(diags_)) return;

    // extends chains must be acyclic for the effective trail sets to exist
    std::map<std::string, const BaseFieldDecl*> by_id;
    for (const auto& item : doc_.items) {
      if (const auto* b = std::get_if<BaseFieldDecl>(&item)) by_id[b->id] = b;
    }
    for (const auto& [id, decl] : by_id) {
      std::set<std::string> seen;
      const BaseFieldDecl* cur = decl;
      while (cur->extends) {
        if (!seen.insert(cur->id).second) {
          error(decl->loc, "circular-extends",
                "base field '" + id + "' participates in an extends cycle");
          break;
        }
        cur = by_id.at(*cur->extends);
      }
    }
  }
};

}  // namespace

ParseResult parse(std::string_view source) {
  try {
    Parser parser(source);
    return parser.run();
  } catch (const std::exception& e) {
    ParseResult result;
    result.diagnostics.push_back(
        {Diagnostic::Severity::Error, "syntax-error", {}, std::string("parse failed: ") + e.what()});
    return result;
  } catch (...) {
    ParseResult result;
    result.diagnostics.push_back({Diagnostic::Severity::Error, "syntax-error", {}, "parse failed"});
    return result;
  }
}

// ---------------------------------------------------------------------------
// Document lookups and core-object builders
// ---------------------------------------------------------------------------

void Document::finalize() {
  waypoint_table_.clear();
  trail_table_.clear();
  basefield_table_.clear();
  routeway_items_.clear();
  roadmap_items_.clear();
  atlas_items_.clear();
  filtration_items_.clear();

  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& item = items[i];
    if (const auto* w = std::get_if<WaypointDecl>(&item)) {
      waypoint_table_.emplace(w->waypoint.id, w->waypoint);
    } else if (const auto* t = std::get_if<TrailDecl>(&item)) {
      trail_table_.emplace(t->trail.id, t->trail);
    } else if (const auto* b = std::get_if<BaseFieldDecl>(&item)) {
      for (const auto& entry : b->entries) {
        if (entry.decl) trail_table_.emplace(entry.trail_id, entry.decl->trail);
      }
    } else if (const auto* r = std::get_if<RoutewayDecl>(&item)) {
      routeway_items_.emplace(r->name, i);
    } else if (const auto* r = std::get_if<RoadmapDecl>(&item)) {
      roadmap_items_.emplace(r->name, i);
    } else if (const auto* a = std::get_if<AtlasDecl>(&item)) {
      atlas_items_.emplace(a->name, i);
    } else if (const auto* f = std::get_if<FiltrationDecl>(&item)) {
      filtration_items_.emplace(f->name, i);
    }
  }

  // Resolve effective trail sets bottom-up; cycles (possible only in
  // hand-built documents) terminate via the visited set.
  std::map<std::string, const BaseFieldDecl*> by_id;
  for (const auto& item : items) {
    if (const auto* b = std::get_if<BaseFieldDecl>(&item)) by_id[b->id] = b;
  }
  for (const auto& [id, decl] : by_id) {
    BaseField field;
    field.id = id;
    field.extends = decl->extends;
    std::set<std::string> visited;
    const BaseFieldDecl* cur = decl;
    while (cur && visited.insert(cur->id).second) {
      for (const auto& entry : cur->entries) field.trails.insert(entry.trail_id);
      cur = cur->extends && by_id.count(*cur->extends) ? by_id.at(*cur->extends) : nullptr;
    }
    basefield_table_.emplace(id, std::move(field));
  }
}

namespace {

template <typename T>
const T* lookup(const std::map<std::string, T>& table, const std::string& id) {
  auto it = table.find(id);
  return it == table.end() ? nullptr : &it->second;
}

}  // namespace

const Waypoint* Document::find_waypoint(const std::string& id) const {
  return lookup(waypoint_table_, id);
}
const Trail* Document::find_trail(const std::string& id) const { return lookup(trail_table_, id); }
const BaseField* Document::find_basefield(const std::string& id) const {
  return lookup(basefield_table_, id);
}

const RoutewayDecl* Document::find_routeway(const std::string& name) const {
  auto it = routeway_items_.find(name);
  return it == routeway_items_.end() ? nullptr : std::get_if<RoutewayDecl>(&items[it->second]);
}
const RoadmapDecl* Document::find_roadmap(const std::string& name) const {
  auto it = roadmap_items_.find(name);
  return it == roadmap_items_.end() ? nullptr : std::get_if<RoadmapDecl>(&items[it->second]);
}
const AtlasDecl* Document::find_atlas(const std::string& name) const {
  auto it = atlas_items_.find(name);
  return it == atlas_items_.end() ? nullptr : std::get_if<AtlasDecl>(&items[it->second]);
}
const FiltrationDecl* Document::find_filtration(const std::string& name) const {
  auto it = filtration_items_.find(name);
  return it == filtration_items_.end() ? nullptr : std::get_if<FiltrationDecl>(&items[it->second]);
}

template <typename T>
static std::vector<const T*> collect(const std::vector<Item>& items) {
  std::vector<const T*> out;
  for (const auto& item : items) {
    if (const auto* v = std::get_if<T>(&item)) out.push_back(v);
  }
  return out;
}

std::vector<const BaseFieldDecl*> Document::basefields() const {
  return collect<BaseFieldDecl>(items);
}
std::vector<const WaypointDecl*> Document::waypoints() const { return collect<WaypointDecl>(items); }
std::vector<const RoutewayDecl*> Document::routeways() const { return collect<RoutewayDecl>(items); }
std::vector<const RoadmapDecl*> Document::roadmaps() const { return collect<RoadmapDecl>(items); }
std::vector<const AtlasDecl*> Document::atlases() const { return collect<AtlasDecl>(items); }
std::vector<const FiltrationDecl*> Document::filtrations() const {
  return collect<FiltrationDecl>(items);
}

std::vector<const Trail*> Document::trails() const {
  std::vector<const Trail*> out;
  for (const auto& item : items) {
    if (const auto* t = std::get_if<TrailDecl>(&item)) {
      out.push_back(&t->trail);
    } else if (const auto* b = std::get_if<BaseFieldDecl>(&item)) {
      for (const auto& entry : b->entries) {
        if (entry.decl) out.push_back(&entry.decl->trail);
      }
    }
  }
  return out;
}

std::map<std::string, std::string> Document::annotations() const {
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    if (const auto* c = std::get_if<CompassDecl>(&item)) {
      out[c->routeway] = c->text;
    } else if (const auto* r = std::get_if<RoutewayDecl>(&item)) {
      for (std::size_t i = 0; i < r->units.size(); ++i) {
        if (r->units[i].compass) out[r->name + "#" + std::to_string(i)] = *r->units[i].compass;
      }
    }
  }
  return out;
}

RouteUnit Document::resolve_unit(const UnitDecl& decl) const {
  const Waypoint* initial = find_waypoint(decl.initial);
  const Waypoint* terminal = find_waypoint(decl.terminal);
  if (!initial || !terminal)
    throw Error("unresolved-reference",
                "waypoint '" + (initial ? decl.terminal : decl.initial) + "' is not declared");
  RouteUnit unit;
  unit.initial = *initial;
  unit.terminal = *terminal;
  if (decl.trail) {
    const Trail* trail = find_trail(*decl.trail);
    if (!trail) throw Error("unresolved-reference", "trail '" + *decl.trail + "' is not declared");
    unit.trail = *trail;
  }
  unit.substitution = decl.substitution;
  unit.two_way = decl.two_way;
  unit.compass = decl.compass;
  return unit;
}

std::vector<RouteUnit> Document::units_of(const RoutewayDecl& decl) const {
  std::vector<RouteUnit> out;
  out.reserve(decl.units.size());
  for (const auto& u : decl.units) out.push_back(resolve_unit(u));
  return out;
}

std::vector<RouteUnit> Document::all_units() const {
  std::vector<RouteUnit> out;
  for (const auto& item : items) {
    if (const auto* r = std::get_if<RoutewayDecl>(&item)) {
      for (const auto& u : r->units) out.push_back(resolve_unit(u));
    }
  }
  return out;
}

Routeway Document::build_routeway(const std::string& name) const {
  const RoutewayDecl* decl = find_routeway(name);
  if (!decl) throw Error("unknown-routeway", "no routeway named '" + name + "'");
  const Waypoint* start = find_waypoint(decl->start);
  const Waypoint* end = find_waypoint(decl->end);
  if (!start || !end)
    throw Error("unresolved-reference", "routeway '" + name + "' has undeclared endpoints");
  if (decl->units.empty()) {
    if (*start != *end)
      throw Error("broken-chain",
                  "empty routeway '" + name + "' must have equal start and destination");
    return Routeway::empty(*start);
  }
  Routeway built = Routeway::make(units_of(*decl));
  if (built.start() != *start || built.end() != *end)
    throw Error("broken-chain",
                "routeway '" + name + "' does not run between its declared endpoints");
  return built;
}

Roadmap Document::build_roadmap(const std::string& name) const {
  const RoadmapDecl* decl = find_roadmap(name);
  if (!decl) throw Error("unknown-roadmap", "no roadmap named '" + name + "'");
  const Waypoint* start = find_waypoint(decl->start);
  const Waypoint* end = find_waypoint(decl->end);
  if (!start || !end)
    throw Error("unresolved-reference", "roadmap '" + name + "' has undeclared endpoints");
  std::vector<Routeway> ways;
  for (const auto& rw : decl->routeways) ways.push_back(build_routeway(rw));
  return Roadmap::make(*start, *end, std::move(ways));
}

Atlas Document::build_atlas(const std::string& name) const {
  const AtlasDecl* decl = find_atlas(name);
  if (!decl) throw Error("unknown-atlas", "no atlas named '" + name + "'");
  Atlas atlas;
  for (const auto& m : decl->roadmaps) atlas.roadmaps.push_back(build_roadmap(m));
  for (const auto& t : decl->targets) {
    const Waypoint* w = find_waypoint(t);
    if (!w) throw Error("unresolved-reference", "waypoint '" + t + "' is not declared");
    atlas.targets.push_back(*w);
  }
  return atlas;
}

BaseField Document::first_basefield() const {
  for (const auto& item : items) {
    if (const auto* b = std::get_if<BaseFieldDecl>(&item)) return *find_basefield(b->id);
  }
  throw Error("no-basefield", "the document declares no base field");
}

}  // namespace routeway::dsl
