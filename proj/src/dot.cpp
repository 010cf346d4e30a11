#include "quiclearn/dot.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace quiclearn {

namespace {

constexpr std::string_view kStartMarker = "__start";

bool is_keyword(std::string_view id) {
  return id == "node" || id == "edge" || id == "graph" || id == "digraph" ||
         id == "subgraph" || id == "strict";
}

bool needs_quoting(std::string_view id) {
  if (id.empty() || is_keyword(id)) return true;
  if (std::isdigit(static_cast<unsigned char>(id[0]))) return true;
  for (char c : id)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return true;
  return false;
}

std::string quote(std::string_view id) {
  if (!needs_quoting(id)) return std::string(id);
  std::string s = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') s += '\\';
    s += c;
  }
  s += '"';
  return s;
}

struct Token {
  enum Kind { Id, Arrow, LBrace, RBrace, LBracket, RBracket, Equals, Semi,
              Comma, End };
  Kind kind;
  std::string text;
  int line, column;
  bool quoted = false;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws_and_comments();
    int ln = line_, col = column_;
    if (pos_ >= src_.size()) return {Token::End, "", ln, col};
    char c = src_[pos_];
    switch (c) {
      case '{': advance(); return {Token::LBrace, "{", ln, col};
      case '}': advance(); return {Token::RBrace, "}", ln, col};
      case '[': advance(); return {Token::LBracket, "[", ln, col};
      case ']': advance(); return {Token::RBracket, "]", ln, col};
      case '=': advance(); return {Token::Equals, "=", ln, col};
      case ';': advance(); return {Token::Semi, ";", ln, col};
      case ',': advance(); return {Token::Comma, ",", ln, col};
      default: break;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      advance();
      advance();
      return {Token::Arrow, "->", ln, col};
    }
    if (c == '"') {
      advance();
      std::string text;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
        text += src_[pos_];
        advance();
      }
      if (pos_ >= src_.size())
        throw DotParseError(ln, col, "unterminated string");
      advance();  // closing quote
      return {Token::Id, text, ln, col, /*quoted=*/true};
    }
    if (is_id_char(c)) {
      std::string text;
      while (pos_ < src_.size() && is_id_char(src_[pos_])) {
        text += src_[pos_];
        advance();
      }
      return {Token::Id, text, ln, col};
    }
    throw DotParseError(ln, col, std::string("unexpected character '") + c +
                                     "'");
  }

 private:
  // '-' is excluded so "->" stays unambiguous; ids containing '-' must be
  // quoted (to_dot does that).
  static bool is_id_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_ws_and_comments() {
    for (;;) {
      while (pos_ < src_.size() &&
             std::isspace(static_cast<unsigned char>(src_[pos_])))
        advance();
      if (pos_ >= src_.size()) return;
      if (src_[pos_] == '#' ||
          (src_[pos_] == '/' && pos_ + 1 < src_.size() &&
           src_[pos_ + 1] == '/')) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (src_[pos_] == '/' && pos_ + 1 < src_.size() &&
          src_[pos_ + 1] == '*') {
        int ln = line_, col = column_;
        advance();
        advance();
        while (pos_ + 1 < src_.size() &&
               !(src_[pos_] == '*' && src_[pos_ + 1] == '/'))
          advance();
        if (pos_ + 1 >= src_.size())
          throw DotParseError(ln, col, "unterminated comment");
        advance();
        advance();
        continue;
      }
      return;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, column_ = 1;
};

struct Edge {
  std::string from, to;
  std::optional<std::string> label;
  int line, column;
};

}  // namespace

std::string to_dot(const MealyMachine& m) {
  m.validate();
  std::string out = "digraph mealy {\n";
  out += "  " + std::string(kStartMarker) + " [shape=point];\n";
  for (MealyMachine::StateId s = 0; s < m.state_count(); ++s)
    out += "  " + quote(m.state_name(s)) + ";\n";
  out += "  " + std::string(kStartMarker) + " -> " +
         quote(m.state_name(m.initial_state())) + ";\n";
  for (MealyMachine::StateId s = 0; s < m.state_count(); ++s) {
    for (std::size_t i = 0; i < m.inputs().size(); ++i) {
      std::string label = m.inputs()[i] + "/" + m.output(s, i);
      out += "  " + quote(m.state_name(s)) + " -> " +
             quote(m.state_name(m.next_state(s, i))) + " [label=" +
             quote(label) + "];\n";
    }
  }
  out += "}\n";
  return out;
}

MealyMachine from_dot(std::string_view text) {
  Lexer lex(text);
  Token tok = lex.next();
  auto expect = [&](Token::Kind k, const char* what) {
    if (tok.kind != k)
      throw DotParseError(tok.line, tok.column,
                          std::string("expected ") + what + ", got '" +
                              tok.text + "'");
    Token t = tok;
    tok = lex.next();
    return t;
  };

  {
    Token kw = expect(Token::Id, "'digraph'");
    if (kw.text != "digraph")
      throw DotParseError(kw.line, kw.column, "expected 'digraph'");
  }
  if (tok.kind == Token::Id) tok = lex.next();  // optional graph name
  expect(Token::LBrace, "'{'");

  std::vector<std::string> decl_order;
  std::set<std::string> declared;
  std::vector<Edge> edges;
  int close_line = 1, close_column = 1;

  auto note_node = [&](const std::string& name) {
    if (name == kStartMarker) return;
    if (declared.insert(name).second) decl_order.push_back(name);
  };

  // One attribute list: [ key = value, ... ]; returns the last `label` value.
  auto parse_attrs = [&]() -> std::optional<std::string> {
    std::optional<std::string> label;
    expect(Token::LBracket, "'['");
    while (tok.kind != Token::RBracket) {
      Token key = expect(Token::Id, "attribute name");
      expect(Token::Equals, "'='");
      Token val = expect(Token::Id, "attribute value");
      if (key.text == "label") label = val.text;
      if (tok.kind == Token::Comma || tok.kind == Token::Semi) tok = lex.next();
    }
    tok = lex.next();  // ']'
    return label;
  };

  while (tok.kind != Token::RBrace) {
    if (tok.kind == Token::End)
      throw DotParseError(tok.line, tok.column, "unexpected end of input");
    Token head = expect(Token::Id, "node name");
    // Skip graph-level attribute statements like `rankdir=LR;`.
    if (tok.kind == Token::Equals) {
      tok = lex.next();
      expect(Token::Id, "attribute value");
      if (tok.kind == Token::Semi) tok = lex.next();
      continue;
    }
    // `node [...]` / `edge [...]` / `graph [...]` set defaults, they do not
    // declare a state. A quoted "node" is a real name, though.
    if (!head.quoted &&
        (head.text == "node" || head.text == "edge" || head.text == "graph")) {
      if (tok.kind == Token::LBracket) parse_attrs();
      if (tok.kind == Token::Semi) tok = lex.next();
      continue;
    }
    if (tok.kind == Token::Arrow) {
      tok = lex.next();
      Token dst = expect(Token::Id, "target node name");
      std::optional<std::string> label;
      if (tok.kind == Token::LBracket) label = parse_attrs();
      note_node(head.text);
      note_node(dst.text);
      edges.push_back({head.text, dst.text, label, head.line, head.column});
    } else {
      if (tok.kind == Token::LBracket) parse_attrs();
      note_node(head.text);
    }
    if (tok.kind == Token::Semi) tok = lex.next();
  }
  close_line = tok.line;
  close_column = tok.column;

  // Assemble: split labels, collect inputs in first-appearance order.
  std::optional<std::string> initial_name;
  std::vector<Symbol> inputs;
  struct Trans {
    std::string from, to;
    Symbol input;
    Output output;
    int line, column;
  };
  std::vector<Trans> trans;
  for (const auto& e : edges) {
    if (e.from == kStartMarker) {
      if (initial_name && *initial_name != e.to)
        throw DotParseError(e.line, e.column,
                            "conflicting initial-state markers");
      initial_name = e.to;
      continue;
    }
    if (e.to == kStartMarker)
      throw DotParseError(e.line, e.column,
                          "edge into the initial-state marker");
    if (!e.label)
      throw DotParseError(e.line, e.column,
                          "transition edge without an input/output label");
    auto slash = e.label->find('/');
    if (slash == std::string::npos || slash == 0 ||
        slash + 1 > e.label->size())
      throw DotParseError(e.line, e.column,
                          "label '" + *e.label + "' is not input/output");
    Symbol in = e.label->substr(0, slash);
    Output out = e.label->substr(slash + 1);
    if (std::find(inputs.begin(), inputs.end(), in) == inputs.end())
      inputs.push_back(in);
    trans.push_back({e.from, e.to, in, out, e.line, e.column});
  }
  if (!initial_name)
    throw DotParseError(close_line, close_column,
                        "missing initial-state marker (__start edge)");
  if (decl_order.empty())
    throw DotParseError(close_line, close_column, "graph has no states");

  MealyMachine m(inputs);
  std::map<std::string, MealyMachine::StateId> ids;
  for (const auto& name : decl_order) ids[name] = m.add_state(name);
  std::set<std::pair<std::string, Symbol>> used;
  for (const auto& t : trans) {
    if (!used.insert({t.from, t.input}).second)
      throw DotParseError(t.line, t.column,
                          "duplicate transition from '" + t.from +
                              "' on input '" + t.input + "'");
    m.set_transition(ids.at(t.from), t.input, ids.at(t.to), t.output);
  }
  auto init = ids.find(*initial_name);
  if (init == ids.end())
    throw DotParseError(close_line, close_column,
                        "initial state '" + *initial_name + "' is undeclared");
  m.set_initial(init->second);
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw DotParseError(close_line, close_column, e.what());
  }
  return m;
}

}  // namespace quiclearn
