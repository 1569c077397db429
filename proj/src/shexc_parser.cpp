#include "shexatlas/shexc_parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_set>
#include <vector>

namespace shexatlas {

namespace {

std::string position_prefix(SourcePos pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
  Eof,
  Word,     // bare keyword or "a"
  PName,    // prefix:local, prefix:, :local
  IriRef,   // <...>
  Integer,
  Decimal,
  String,   // literal, including any @lang / ^^datatype suffix
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Semi,
  Pipe,
  At,
  Dollar,
  Dot,
  Question,
  Star,
  Plus,
  Comma,
  Equals,
  Percent,
  Amp,
  Caret,
  Tilde,
  Minus,
  SlashSlash,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  SourcePos pos;
};

bool is_name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::vector<Token> open;  // bracket stack
    for (;;) {
      skip_space_and_comments();
      Token t = next();
      if (t.kind == Tok::LBrace || t.kind == Tok::LParen || t.kind == Tok::LBracket) {
        open.push_back(t);
      } else if (t.kind == Tok::RBrace || t.kind == Tok::RParen || t.kind == Tok::RBracket) {
        Tok expected = t.kind == Tok::RBrace   ? Tok::LBrace
                       : t.kind == Tok::RParen ? Tok::LParen
                                               : Tok::LBracket;
        if (open.empty() || open.back().kind != expected)
          throw ParseError(t.pos, "unbalanced braces: unexpected '" + t.text + "'");
        open.pop_back();
      }
      bool eof = t.kind == Tok::Eof;
      out.push_back(std::move(t));
      if (eof) break;
    }
    if (!open.empty()) {
      const Token& t = open.back();
      throw ParseError(t.pos, "unbalanced braces: '" + t.text + "' is never closed");
    }
    return out;
  }

 private:
  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;

  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t k = 0) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }

  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else if ((static_cast<unsigned char>(src_[i_]) & 0xC0) != 0x80) {
      ++pos_.column;  // count code points, not continuation bytes
    }
    ++i_;
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token make(Tok kind, std::size_t start, SourcePos pos) const {
    return Token{kind, std::string(src_.substr(start, i_ - start)), pos};
  }

  void read_local_part() {
    while (!at_end()) {
      unsigned char c = static_cast<unsigned char>(peek());
      if (is_name_char(c) || c == ':') {
        advance();
      } else if (c == '.' && is_name_char(static_cast<unsigned char>(peek(1)))) {
        advance();  // interior dot only; a trailing dot ends the name
      } else if (c == '%' && std::isxdigit(static_cast<unsigned char>(peek(1))) &&
                 std::isxdigit(static_cast<unsigned char>(peek(2)))) {
        advance();
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  Token next() {
    SourcePos pos = pos_;
    std::size_t start = i_;
    if (at_end()) return Token{Tok::Eof, "", pos};
    char c = peek();

    auto single = [&](Tok kind) {
      advance();
      return make(kind, start, pos);
    };

    switch (c) {
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ';': return single(Tok::Semi);
      case '|': return single(Tok::Pipe);
      case '@': return single(Tok::At);
      case '$': return single(Tok::Dollar);
      case '?': return single(Tok::Question);
      case '*': return single(Tok::Star);
      case '+': return single(Tok::Plus);
      case ',': return single(Tok::Comma);
      case '=': return single(Tok::Equals);
      case '%': return single(Tok::Percent);
      case '&': return single(Tok::Amp);
      case '^': return single(Tok::Caret);
      case '~': return single(Tok::Tilde);
      case '.':
        if (std::isdigit(static_cast<unsigned char>(peek(1)))) return number(start, pos);
        return single(Tok::Dot);
      case '-':
        if (std::isdigit(static_cast<unsigned char>(peek(1)))) return number(start, pos);
        return single(Tok::Minus);
      case '/':
        if (peek(1) == '/') {
          advance();
          advance();
          return make(Tok::SlashSlash, start, pos);
        }
        throw ParseError(pos, "unexpected character '/'");
      case '<': {
        advance();
        while (!at_end() && peek() != '>') {
          if (peek() == '\n' || std::isspace(static_cast<unsigned char>(peek())))
            throw ParseError(pos, "unterminated IRI reference");
          advance();
        }
        if (at_end()) throw ParseError(pos, "unterminated IRI reference");
        advance();
        return make(Tok::IriRef, start, pos);
      }
      case '"':
      case '\'':
        return string_literal(start, pos);
      case ':':
        advance();
        read_local_part();
        return make(Tok::PName, start, pos);
      default:
        break;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) return number(start, pos);

    if (is_name_start(static_cast<unsigned char>(c))) {
      while (!at_end()) {
        unsigned char d = static_cast<unsigned char>(peek());
        if (is_name_char(d)) {
          advance();
        } else if (d == '.' && is_name_char(static_cast<unsigned char>(peek(1)))) {
          advance();
        } else {
          break;
        }
      }
      if (peek() == ':') {
        advance();
        read_local_part();
        return make(Tok::PName, start, pos);
      }
      return make(Tok::Word, start, pos);
    }

    throw ParseError(pos, std::string("unexpected character '") + c + "'");
  }

  Token number(std::size_t start, SourcePos pos) {
    bool decimal = false;
    if (peek() == '-') advance();
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      decimal = true;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    return make(decimal ? Tok::Decimal : Tok::Integer, start, pos);
  }

  Token string_literal(std::size_t start, SourcePos pos) {
    char quote = peek();
    advance();
    while (!at_end() && peek() != quote) {
      if (peek() == '\\') advance();
      if (!at_end()) {
        if (peek() == '\n') throw ParseError(pos, "unterminated string literal");
        advance();
      }
    }
    if (at_end()) throw ParseError(pos, "unterminated string literal");
    advance();
    if (peek() == '@' && std::isalpha(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') advance();
    } else if (peek() == '^' && peek(1) == '^') {
      advance();
      advance();
      skip_space_and_comments();
      Token dt = next();
      if (dt.kind != Tok::PName && dt.kind != Tok::IriRef)
        throw ParseError(dt.pos, "expected datatype after '^^'");
    }
    return make(Tok::String, start, pos);
  }
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

const std::unordered_set<std::string> kFacetKeywords = {
    "LENGTH",       "MINLENGTH",    "MAXLENGTH",    "PATTERN",
    "MININCLUSIVE", "MINEXCLUSIVE", "MAXINCLUSIVE", "MAXEXCLUSIVE",
    "TOTALDIGITS",  "FRACTIONDIGITS"};

std::optional<NodeKind> node_kind_keyword(const Token& t) {
  if (t.kind != Tok::Word) return std::nullopt;
  std::string w = upper(t.text);
  if (w == "IRI") return NodeKind::Iri;
  if (w == "BNODE") return NodeKind::BNode;
  if (w == "LITERAL") return NodeKind::Literal;
  if (w == "NONLITERAL") return NodeKind::NonLiteral;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ShExSchema run() {
    ShExSchema schema;
    std::unordered_set<std::string> labels;
    while (cur().kind != Tok::Eof) {
      if (is_word("PREFIX")) {
        prefix_decl(schema.prefixes);
      } else if (is_word("BASE")) {
        SourcePos p = cur().pos;
        take();
        Token iri = expect(Tok::IriRef, "IRI after BASE");
        std::string value = strip_brackets(iri.text);
        if (value.empty()) throw ParseError(p, "BASE IRI must not be empty");
        schema.prefixes.base = value;
      } else if (is_word("IMPORT")) {
        throw UnsupportedFeature(cur().pos, "IMPORT");
      } else if (is_word("START")) {
        throw UnsupportedFeature(cur().pos, "start declaration");
      } else if (is_word("ABSTRACT")) {
        throw UnsupportedFeature(cur().pos, "ABSTRACT shape");
      } else if (cur().kind == Tok::Percent) {
        throw UnsupportedFeature(cur().pos, "semantic action");
      } else if (cur().kind == Tok::PName || cur().kind == Tok::IriRef) {
        Token label = take();
        if (is_word("EXTERNAL")) throw UnsupportedFeature(cur().pos, "EXTERNAL shape");
        ShapeDecl decl{label.text, shape_expr(), label.pos};
        if (!labels.insert(decl.label).second) throw DuplicateLabel(label.pos, decl.label);
        schema.shapes.push_back(std::move(decl));
      } else {
        throw error("expected PREFIX, BASE or a shape label");
      }
    }
    return schema;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& cur() const { return toks_[i_]; }
  const Token& ahead(std::size_t k) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  Token take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
  bool is_word(std::string_view w) const { return cur().kind == Tok::Word && upper(cur().text) == w; }

  ParseError error(const std::string& what) const {
    std::string got = cur().kind == Tok::Eof ? "end of input" : "'" + cur().text + "'";
    return ParseError(cur().pos, what + ", got " + got);
  }

  Token expect(Tok kind, const std::string& what) {
    if (cur().kind != kind) throw error("expected " + what);
    return take();
  }

  static std::string strip_brackets(const std::string& iri) {
    return iri.size() >= 2 && iri.front() == '<' ? iri.substr(1, iri.size() - 2) : iri;
  }

  void prefix_decl(PrefixTable& table) {
    take();
    Token ns = expect(Tok::PName, "prefix name after PREFIX");
    if (ns.text.back() != ':' || std::count(ns.text.begin(), ns.text.end(), ':') != 1)
      throw ParseError(ns.pos, "prefix name must end with ':'");
    Token iri = expect(Tok::IriRef, "IRI after prefix name");
    std::string value = strip_brackets(iri.text);
    if (value.empty()) throw ParseError(iri.pos, "prefix IRI must not be empty");
    std::string prefix = ns.text.substr(0, ns.text.size() - 1);
    if (table.mappings.count(prefix)) throw ParseError(ns.pos, "duplicate prefix '" + ns.text + "'");
    table.mappings.emplace(std::move(prefix), std::move(value));
  }

  std::string label() {
    if (cur().kind != Tok::PName && cur().kind != Tok::IriRef) throw error("expected shape label");
    return take().text;
  }

  void reject_trailers() {
    if (cur().kind == Tok::Percent) throw UnsupportedFeature(cur().pos, "semantic action");
    if (cur().kind == Tok::SlashSlash) throw UnsupportedFeature(cur().pos, "annotation");
  }

  // shapeExpr := shapeAnd (OR shapeAnd)*
  ShapeExpr shape_expr() {
    std::vector<ShapeExpr> ops;
    ops.push_back(shape_and());
    while (is_word("OR")) {
      take();
      ops.push_back(shape_and());
    }
    if (ops.size() == 1) return std::move(ops.front());
    return ShapeExpr{ShapeOr{std::move(ops)}};
  }

  ShapeExpr shape_and() {
    std::vector<ShapeExpr> ops;
    ops.push_back(shape_not());
    while (is_word("AND")) {
      take();
      ops.push_back(shape_not());
    }
    if (ops.size() == 1) return std::move(ops.front());
    return ShapeExpr{ShapeAnd{std::move(ops)}};
  }

  ShapeExpr shape_not() {
    if (is_word("NOT")) {
      take();
      return ShapeExpr{ShapeNot{shape_atom()}};
    }
    return shape_atom();
  }

  bool at_shape_body() const {
    return cur().kind == Tok::LBrace ||
           (cur().kind == Tok::Word && (upper(cur().text) == "EXTRA" || upper(cur().text) == "CLOSED"));
  }

  ShapeExpr shape_atom() {
    if (cur().kind == Tok::LParen) {
      take();
      ShapeExpr inner = shape_expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (cur().kind == Tok::At) {
      take();
      return ShapeExpr{ShapeRef{label()}};
    }
    if (auto kind = node_kind_keyword(cur())) {
      take();
      reject_facets();
      Shape shape;
      shape.node_kind = kind;
      if (at_shape_body()) shape_body(shape);
      return ShapeExpr{std::move(shape)};
    }
    if (at_shape_body()) {
      Shape shape;
      shape_body(shape);
      return ShapeExpr{std::move(shape)};
    }
    if (is_word("EXTENDS")) throw UnsupportedFeature(cur().pos, "EXTENDS");
    if (cur().kind == Tok::Dot) {
      take();
      return ShapeExpr{NodeConstraintOnly{"."}};
    }
    if (cur().kind == Tok::PName || cur().kind == Tok::IriRef) {
      std::string dt = take().text;
      reject_facets();
      return ShapeExpr{NodeConstraintOnly{dt}};
    }
    if (cur().kind == Tok::LBracket) return ShapeExpr{NodeConstraintOnly{value_set()}};
    reject_facets();
    throw error("expected shape expression");
  }

  void reject_facets() {
    if (cur().kind == Tok::Word && kFacetKeywords.count(upper(cur().text)))
      throw UnsupportedFeature(cur().pos, "facet " + upper(cur().text));
  }

  void shape_body(Shape& shape) {
    while (cur().kind == Tok::Word) {
      std::string w = upper(cur().text);
      if (w == "EXTRA") {
        take();
        if (!is_predicate_start()) throw error("expected predicate after EXTRA");
        while (is_predicate_start()) shape.extra.push_back(predicate());
      } else if (w == "CLOSED") {
        take();
        shape.closed = true;
      } else if (w == "EXTENDS") {
        throw UnsupportedFeature(cur().pos, "EXTENDS");
      } else {
        break;
      }
    }
    expect(Tok::LBrace, "'{'");
    if (cur().kind != Tok::RBrace) shape.triple_expr = triple_expr();
    expect(Tok::RBrace, "'}'");
    reject_trailers();
  }

  bool is_predicate_start() const {
    return cur().kind == Tok::PName || cur().kind == Tok::IriRef ||
           (cur().kind == Tok::Word && cur().text == "a");
  }

  std::string predicate() { return take().text; }

  bool is_unary_start() const {
    return is_predicate_start() || cur().kind == Tok::Dollar || cur().kind == Tok::LParen ||
           cur().kind == Tok::Caret || cur().kind == Tok::Amp;
  }

  // tripleExpr := group ('|' group)*
  TripleExpr triple_expr() {
    std::vector<TripleExpr> alts;
    alts.push_back(group());
    while (cur().kind == Tok::Pipe) {
      take();
      alts.push_back(group());
    }
    if (alts.size() == 1) return std::move(alts.front());
    return TripleExpr{OneOf{std::move(alts)}};
  }

  // group := unary (';' unary)* ';'?
  TripleExpr group() {
    std::vector<TripleExpr> items;
    items.push_back(unary());
    while (cur().kind == Tok::Semi) {
      take();
      if (!is_unary_start()) break;
      items.push_back(unary());
    }
    if (items.size() == 1) return std::move(items.front());
    return TripleExpr{EachOf{std::move(items)}};
  }

  TripleExpr unary() {
    if (cur().kind == Tok::Dollar) {
      SourcePos p = take().pos;
      std::string name = label();
      if (name.empty()) throw ParseError(p, "empty triple expression label");
      return TripleExpr{Labelled{std::move(name), unary_body()}};
    }
    return unary_body();
  }

  TripleExpr unary_body() {
    if (cur().kind == Tok::LParen) {
      take();
      TripleExpr inner = triple_expr();
      expect(Tok::RParen, "')'");
      if (at_cardinality()) throw UnsupportedFeature(cur().pos, "cardinality on a bracketed group");
      reject_trailers();
      return inner;
    }
    if (cur().kind == Tok::Amp) throw UnsupportedFeature(cur().pos, "triple expression inclusion");
    if (cur().kind == Tok::Caret) throw UnsupportedFeature(cur().pos, "inverse triple constraint");
    return triple_constraint();
  }

  TripleExpr triple_constraint() {
    if (!is_predicate_start()) throw error("expected predicate");
    TripleConstraint tc;
    tc.pos = cur().pos;
    tc.predicate = predicate();
    tc.value = value_expr();
    if (at_cardinality()) tc.cardinality = cardinality();
    reject_trailers();
    return TripleExpr{std::move(tc)};
  }

  ValueExprText value_expr() {
    ValueExprText v;
    if (cur().kind == Tok::At) {
      take();
      std::string target = label();
      v.raw = "@" + target;
      v.ref_target = std::move(target);
    } else if (cur().kind == Tok::Dot) {
      take();
      v.raw = ".";
    } else if (node_kind_keyword(cur())) {
      v.raw = upper(take().text);
    } else if (cur().kind == Tok::PName || cur().kind == Tok::IriRef) {
      v.raw = take().text;
    } else if (cur().kind == Tok::LBracket) {
      v.raw = value_set();
    } else if (cur().kind == Tok::LBrace) {
      throw UnsupportedFeature(cur().pos, "inline shape in a value expression");
    } else if (cur().kind == Tok::LParen) {
      throw UnsupportedFeature(cur().pos, "bracketed value expression");
    } else if (is_word("NOT")) {
      throw UnsupportedFeature(cur().pos, "logical value expression");
    } else {
      reject_facets();
      throw error("expected value expression");
    }
    reject_facets();
    if (is_word("AND") || is_word("OR"))
      throw UnsupportedFeature(cur().pos, "logical value expression");
    return v;
  }

  std::string value_set() {
    expect(Tok::LBracket, "'['");
    std::string out = "[";
    bool first = true;
    while (cur().kind != Tok::RBracket) {
      switch (cur().kind) {
        case Tok::PName:
        case Tok::IriRef:
        case Tok::String:
        case Tok::Integer:
        case Tok::Decimal:
          break;
        case Tok::Word:
          if (cur().text == "true" || cur().text == "false") break;
          throw error("expected value set member");
        case Tok::Tilde:
        case Tok::Minus:
          throw UnsupportedFeature(cur().pos, "value set stem or exclusion");
        case Tok::At:
          throw UnsupportedFeature(cur().pos, "language tag value");
        default:
          throw error("expected value set member");
      }
      if (!first) out += ' ';
      out += take().text;
      first = false;
    }
    take();
    return out + "]";
  }

  bool at_cardinality() const {
    switch (cur().kind) {
      case Tok::Question:
      case Tok::Star:
      case Tok::Plus:
        return true;
      case Tok::LBrace:
        return ahead(1).kind == Tok::Integer;
      default:
        return false;
    }
  }

  std::int64_t integer(const Token& t) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size() || v < 0)
      throw ParseError(t.pos, "invalid cardinality bound '" + t.text + "'");
    return v;
  }

  Cardinality cardinality() {
    Token t = take();
    switch (t.kind) {
      case Tok::Question: return {0, 1};
      case Tok::Star: return {0, Cardinality::kUnbounded};
      case Tok::Plus: return {1, Cardinality::kUnbounded};
      default: break;
    }
    Cardinality c;
    c.min = integer(expect(Tok::Integer, "integer"));
    c.max = c.min;
    if (cur().kind == Tok::Comma) {
      take();
      if (cur().kind == Tok::Star) {
        take();
        c.max = Cardinality::kUnbounded;
      } else if (cur().kind == Tok::Integer) {
        c.max = integer(take());
      } else {
        c.max = Cardinality::kUnbounded;
      }
    }
    expect(Tok::RBrace, "'}'");
    if (!c.unbounded() && c.max < c.min)
      throw ParseError(t.pos, "cardinality maximum is below its minimum");
    return c;
  }
};

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

void print_triple(const TripleExpr& e, std::string& out);

void print_triple_child(const TripleExpr& e, std::string& out) {
  if (std::holds_alternative<EachOf>(e.node) || std::holds_alternative<OneOf>(e.node)) {
    out += "( ";
    print_triple(e, out);
    out += " )";
  } else {
    print_triple(e, out);
  }
}

void print_triple(const TripleExpr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TripleConstraint>) {
          out += n.predicate + " " + n.value.raw;
          std::string card = format_cardinality(n.cardinality);
          if (!card.empty()) out += " " + card;
        } else if constexpr (std::is_same_v<T, EachOf>) {
          for (std::size_t k = 0; k < n.items.size(); ++k) {
            if (k) out += " ; ";
            print_triple_child(n.items[k], out);
          }
        } else if constexpr (std::is_same_v<T, OneOf>) {
          for (std::size_t k = 0; k < n.alternatives.size(); ++k) {
            if (k) out += " | ";
            print_triple_child(n.alternatives[k], out);
          }
        } else {
          out += "$" + n.name + " ( ";
          print_triple(*n.inner, out);
          out += " )";
        }
      },
      e.node);
}

void print_shape(const ShapeExpr& e, std::string& out);

void print_operand(const ShapeExpr& e, bool wrap_and, std::string& out) {
  bool wrap = std::holds_alternative<ShapeOr>(e.node) ||
              (wrap_and && std::holds_alternative<ShapeAnd>(e.node));
  if (wrap) out += "( ";
  print_shape(e, out);
  if (wrap) out += " )";
}

void print_shape(const ShapeExpr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Shape>) {
          std::vector<std::string> parts;
          if (n.node_kind) parts.push_back(to_string(*n.node_kind));
          if (!n.extra.empty()) {
            std::string ex = "EXTRA";
            for (const auto& p : n.extra) ex += " " + p;
            parts.push_back(ex);
          }
          if (n.closed) parts.push_back("CLOSED");
          bool bare_kind = n.node_kind && n.extra.empty() && !n.closed && !n.triple_expr;
          if (!bare_kind) {
            std::string body = "{";
            if (n.triple_expr) {
              body += " ";
              print_triple(*n.triple_expr, body);
            }
            parts.push_back(body + " }");
          }
          for (std::size_t k = 0; k < parts.size(); ++k) {
            if (k) out += " ";
            out += parts[k];
          }
        } else if constexpr (std::is_same_v<T, ShapeAnd>) {
          for (std::size_t k = 0; k < n.operands.size(); ++k) {
            if (k) out += " AND ";
            print_operand(n.operands[k], true, out);
          }
        } else if constexpr (std::is_same_v<T, ShapeOr>) {
          for (std::size_t k = 0; k < n.operands.size(); ++k) {
            if (k) out += " OR ";
            print_operand(n.operands[k], false, out);
          }
        } else if constexpr (std::is_same_v<T, ShapeNot>) {
          const ShapeExpr& inner = *n.operand;
          bool wrap = !std::holds_alternative<Shape>(inner.node) &&
                      !std::holds_alternative<ShapeRef>(inner.node) &&
                      !std::holds_alternative<NodeConstraintOnly>(inner.node);
          out += "NOT ";
          if (wrap) out += "( ";
          print_shape(inner, out);
          if (wrap) out += " )";
        } else if constexpr (std::is_same_v<T, ShapeRef>) {
          out += "@" + n.target;
        } else {
          out += n.text;
        }
      },
      e.node);
}

void collect_refs(const TripleExpr& e, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TripleConstraint>) {
          if (n.value.ref_target) out.push_back(*n.value.ref_target);
        } else if constexpr (std::is_same_v<T, EachOf>) {
          for (const auto& c : n.items) collect_refs(c, out);
        } else if constexpr (std::is_same_v<T, OneOf>) {
          for (const auto& c : n.alternatives) collect_refs(c, out);
        } else {
          collect_refs(*n.inner, out);
        }
      },
      e.node);
}

void collect_refs(const ShapeExpr& e, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Shape>) {
          if (n.triple_expr) collect_refs(*n.triple_expr, out);
        } else if constexpr (std::is_same_v<T, ShapeAnd> || std::is_same_v<T, ShapeOr>) {
          for (const auto& c : n.operands) collect_refs(c, out);
        } else if constexpr (std::is_same_v<T, ShapeNot>) {
          collect_refs(*n.operand, out);
        } else if constexpr (std::is_same_v<T, ShapeRef>) {
          out.push_back(n.target);
        }
      },
      e.node);
}

}  // namespace

ParseError::ParseError(SourcePos pos, const std::string& message)
    : std::runtime_error(position_prefix(pos) + message), pos_(pos), detail_(message) {}

UnsupportedFeature::UnsupportedFeature(SourcePos pos, std::string construct)
    : ParseError(pos, "unsupported feature: " + construct), construct_(std::move(construct)) {}

DuplicateLabel::DuplicateLabel(SourcePos pos, const std::string& label)
    : ParseError(pos, "duplicate shape label '" + label + "'") {}

UnknownPrefix::UnknownPrefix(const std::string& prefix)
    : std::runtime_error("unknown prefix '" + prefix + ":'") {}

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Iri: return "IRI";
    case NodeKind::BNode: return "BNODE";
    case NodeKind::Literal: return "LITERAL";
    case NodeKind::NonLiteral: return "NONLITERAL";
  }
  return "IRI";
}

const ShapeDecl* ShExSchema::find(const std::string& label) const {
  for (const auto& s : shapes)
    if (s.label == label) return &s;
  return nullptr;
}

ShExSchema parse_schema(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  return Parser(Lexer(text).run()).run();
}

std::string expand_iri(std::string_view prefixed, const PrefixTable& table) {
  if (prefixed.size() >= 2 && prefixed.front() == '<' && prefixed.back() == '>') {
    std::string_view inner = prefixed.substr(1, prefixed.size() - 2);
    bool relative = inner.find(':') == std::string_view::npos;
    if (relative && table.base) return *table.base + std::string(inner);
    return std::string(inner);
  }
  if (prefixed.find("://") != std::string_view::npos) return std::string(prefixed);
  auto colon = prefixed.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("not a prefixed name: '" + std::string(prefixed) + "'");
  std::string prefix(prefixed.substr(0, colon));
  auto it = table.mappings.find(prefix);
  if (it == table.mappings.end()) throw UnknownPrefix(prefix);
  return it->second + std::string(prefixed.substr(colon + 1));
}

std::string format_cardinality(const Cardinality& c) {
  if (c.min == 1 && c.max == 1) return "";
  if (c.min == 0 && c.max == 1) return "?";
  if (c.min == 0 && c.unbounded()) return "*";
  if (c.min == 1 && c.unbounded()) return "+";
  if (c.unbounded()) return "{" + std::to_string(c.min) + ",}";
  if (c.min == c.max) return "{" + std::to_string(c.min) + "}";
  return "{" + std::to_string(c.min) + "," + std::to_string(c.max) + "}";
}

std::string to_shexc(const TripleExpr& expr) {
  std::string out;
  print_triple(expr, out);
  return out;
}

std::string to_shexc(const ShapeExpr& expr) {
  std::string out;
  print_shape(expr, out);
  return out;
}

std::string to_shexc(const ShExSchema& schema) {
  std::string out;
  if (schema.prefixes.base) out += "BASE <" + *schema.prefixes.base + ">\n";
  for (const auto& [prefix, iri] : schema.prefixes.mappings)
    out += "PREFIX " + prefix + ": <" + iri + ">\n";
  if (!out.empty() && !schema.shapes.empty()) out += "\n";
  for (const auto& decl : schema.shapes) out += decl.label + " " + to_shexc(decl.expr) + "\n";
  return out;
}

std::set<std::string> external_targets(const ShExSchema& schema) {
  std::vector<std::string> refs;
  for (const auto& decl : schema.shapes) collect_refs(decl.expr, refs);
  std::set<std::string> out;
  for (auto& r : refs)
    if (!schema.find(r)) out.insert(std::move(r));
  return out;
}

}  // namespace shexatlas
