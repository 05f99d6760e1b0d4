#include "ideflow/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace ideflow {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error("line " + std::to_string(line) + ", col " +
                         std::to_string(col) + ": " + msg),
      line_(line),
      col_(col) {}

namespace {

struct Token {
  enum class Kind : uint8_t { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;     // Ident/Punct
  long long value = 0;  // Int
  int col = 1;
};

const std::set<std::string> kKeywords = {"proc", "call", "return",
                                         "if",   "goto", "new"};

// Tokenizes one line; the comment tail (text after "//"), if any, is
// returned separately so expectation annotations survive.
class LineLexer {
 public:
  LineLexer(const std::string& text, int line) : text_(text), line_(line) {
    size_t slash = text_.find("//");
    if (slash != std::string::npos) {
      comment_ = text_.substr(slash + 2);
      text_ = text_.substr(0, slash);
    }
    next();
  }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    next();
    return t;
  }
  const std::string& comment() const { return comment_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, tok_.col);
  }

  Token expect_ident(const std::string& what) {
    if (tok_.kind != Token::Kind::Ident) fail("expected " + what);
    if (kKeywords.count(tok_.text)) fail("keyword '" + tok_.text +
                                         "' used as " + what);
    return take();
  }

  Token expect_keyword(const std::string& kw) {
    if (tok_.kind != Token::Kind::Ident || tok_.text != kw) {
      fail("expected '" + kw + "'");
    }
    return take();
  }

  Token expect_punct(const std::string& p) {
    if (tok_.kind != Token::Kind::Punct || tok_.text != p) {
      fail("expected '" + p + "'");
    }
    return take();
  }

  long long expect_int() {
    if (tok_.kind != Token::Kind::Int) fail("expected integer literal");
    return take().value;
  }

  void expect_end() {
    if (tok_.kind != Token::Kind::End) fail("trailing input");
  }

  bool at_end() const { return tok_.kind == Token::Kind::End; }
  bool at_punct(const std::string& p) const {
    return tok_.kind == Token::Kind::Punct && tok_.text == p;
  }
  bool at_ident() const { return tok_.kind == Token::Kind::Ident; }
  bool at_keyword(const std::string& kw) const {
    return tok_.kind == Token::Kind::Ident && tok_.text == kw;
  }
  bool at_int() const { return tok_.kind == Token::Kind::Int; }
  int line() const { return line_; }

 private:
  void next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    tok_ = Token{};
    tok_.col = static_cast<int>(pos_) + 1;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      tok_.kind = Token::Kind::Ident;
      tok_.text = text_.substr(start, pos_ - start);
      last_allows_negative_ = false;
      return;
    }
    bool neg_literal = c == '-' && pos_ + 1 < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) &&
                       last_allows_negative_;
    if (std::isdigit(static_cast<unsigned char>(c)) || neg_literal) {
      size_t start = pos_;
      if (neg_literal) ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      tok_.kind = Token::Kind::Int;
      try {
        tok_.value = std::stoll(text_.substr(start, pos_ - start));
      } catch (const std::out_of_range&) {
        throw ParseError("integer literal out of range", line_, tok_.col);
      }
      last_allows_negative_ = false;
      return;
    }
    static const std::string punct = "=()[]{},:.@+-*/";
    if (punct.find(c) != std::string::npos) {
      tok_.kind = Token::Kind::Punct;
      tok_.text = std::string(1, c);
      ++pos_;
      last_allows_negative_ = c != ')' && c != ']';
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     tok_.col);
  }

  std::string text_;
  std::string comment_;
  int line_;
  size_t pos_ = 0;
  bool last_allows_negative_ = true;
  Token tok_;
};

SymbolSpec parse_symbol_spec(LineLexer& lex) {
  SymbolSpec spec;
  if (lex.at_punct("@")) {
    lex.take();
    spec.kind = SymbolSpec::Kind::Static;
    spec.base = lex.expect_ident("class name").text;
    lex.expect_punct(".");
    spec.member = lex.expect_ident("field name").text;
    return spec;
  }
  spec.base = lex.expect_ident("symbol").text;
  if (lex.at_punct(".")) {
    lex.take();
    spec.kind = SymbolSpec::Kind::Field;
    spec.member = lex.expect_ident("field name").text;
  } else if (lex.at_punct("[")) {
    lex.take();
    spec.kind = SymbolSpec::Kind::ArrayElem;
    spec.index = lex.expect_int();
    lex.expect_punct("]");
  }
  return spec;
}

class ProgramParser {
 public:
  Program parse(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      LineLexer lex(raw, line_no);
      if (lex.at_end()) {
        handle_comment(lex, line_no);
        continue;
      }
      if (!current_) {
        parse_proc_header(lex);
      } else if (lex.at_punct("}")) {
        lex.take();
        lex.expect_end();
        finish_proc(line_no);
      } else {
        parse_statement(lex);
        handle_comment(lex, line_no);
      }
    }
    if (current_) {
      throw ParseError("unterminated procedure '" + current_->name + "'",
                       line_no, 1);
    }
    resolve_callees();
    for (Procedure& p : prog_.procs) build_cfg(p);
    return std::move(prog_);
  }

 private:
  void handle_comment(LineLexer& lex, int line_no) {
    const std::string& c = lex.comment();
    size_t i = c.find_first_not_of(" \t");
    if (i == std::string::npos) return;
    if (c.compare(i, 7, "expect ") != 0 && c.compare(i, 7, "expect\t") != 0) {
      return;
    }
    LineLexer elex(c.substr(i + 7), line_no);
    if (!current_ || current_->body.empty()) {
      throw ParseError("expectation without a preceding statement", line_no, 1);
    }
    Expectation e;
    e.stmt_id = current_->body.back().id;
    e.symbol = parse_symbol_spec(elex);
    elex.expect_punct("=");
    if (elex.at_keyword("top") || elex.at_ident()) {
      Token t = elex.take();
      if (t.text == "top") {
        e.value.kind = ExpectedValue::Kind::Top;
      } else if (t.text == "bottom") {
        e.value.kind = ExpectedValue::Kind::Bottom;
      } else {
        elex.fail("expected integer, 'top', or 'bottom'");
      }
    } else {
      e.value.kind = ExpectedValue::Kind::Const;
      e.value.constant = elex.expect_int();
    }
    elex.expect_end();
    current_->expectations.push_back(e);
  }

  void parse_proc_header(LineLexer& lex) {
    lex.expect_keyword("proc");
    Token name = lex.expect_ident("procedure name");
    for (const Procedure& p : prog_.procs) {
      if (p.name == name.text) {
        throw ParseError("duplicate procedure name '" + name.text + "'",
                         lex.line(), name.col);
      }
    }
    prog_.procs.emplace_back();
    current_ = &prog_.procs.back();
    current_->name = name.text;
    lex.expect_punct("(");
    if (!lex.at_punct(")")) {
      while (true) {
        Token p = lex.expect_ident("parameter name");
        if (std::find(current_->params.begin(), current_->params.end(),
                      p.text) != current_->params.end()) {
          throw ParseError("duplicate parameter '" + p.text + "'", lex.line(),
                           p.col);
        }
        current_->params.push_back(p.text);
        if (lex.at_punct(",")) {
          lex.take();
          continue;
        }
        break;
      }
    }
    lex.expect_punct(")");
    lex.expect_punct("{");
    lex.expect_end();
  }

  Statement& new_stmt(const LineLexer& lex, Opcode op) {
    current_->body.emplace_back();
    Statement& s = current_->body.back();
    s.op = op;
    s.id = static_cast<int>(current_->body.size()) - 1;
    s.line = lex.line();
    return s;
  }

  void note_local(const std::string& name) { locals_.insert(name); }

  void parse_statement(LineLexer& lex) {
    if (lex.at_keyword("return")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::Return);
      if (!lex.at_end()) {
        s.source = lex.expect_ident("returned local").text;
        note_local(s.source);
      }
      lex.expect_end();
      return;
    }
    if (lex.at_keyword("goto")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::Goto);
      s.label = lex.expect_ident("label").text;
      lex.expect_end();
      return;
    }
    if (lex.at_keyword("if")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::Branch);
      if (lex.at_punct("*")) {
        lex.take();
      } else {
        s.cond = lex.expect_ident("branch condition").text;
        note_local(s.cond);
      }
      lex.expect_keyword("goto");
      s.label = lex.expect_ident("label").text;
      lex.expect_end();
      return;
    }
    if (lex.at_keyword("call")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::Call);
      parse_call_tail(lex, s);
      return;
    }
    if (lex.at_punct("@")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::StaticStore);
      s.klass = lex.expect_ident("class name").text;
      lex.expect_punct(".");
      s.field = lex.expect_ident("field name").text;
      lex.expect_punct("=");
      s.source = lex.expect_ident("source local").text;
      note_local(s.source);
      lex.expect_end();
      return;
    }

    Token first = lex.expect_ident("statement");
    if (lex.at_punct(":")) {
      lex.take();
      lex.expect_end();
      Statement& s = new_stmt(lex, Opcode::Nop);
      s.label = first.text;
      if (labels_.count(first.text)) {
        throw ParseError("duplicate label '" + first.text + "'", lex.line(),
                         first.col);
      }
      labels_[first.text] = s.id;
      return;
    }
    if (lex.at_punct(".")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::FieldStore);
      s.target = first.text;
      s.field = lex.expect_ident("field name").text;
      lex.expect_punct("=");
      s.source = lex.expect_ident("source local").text;
      note_local(s.target);
      note_local(s.source);
      lex.expect_end();
      return;
    }
    if (lex.at_punct("[")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::ArrayStore);
      s.target = first.text;
      s.literal = lex.expect_int();
      lex.expect_punct("]");
      lex.expect_punct("=");
      s.source = lex.expect_ident("source local").text;
      note_local(s.target);
      note_local(s.source);
      lex.expect_end();
      return;
    }

    lex.expect_punct("=");
    note_local(first.text);
    if (lex.at_int()) {
      Statement& s = new_stmt(lex, Opcode::ConstAssign);
      s.target = first.text;
      s.literal = lex.expect_int();
      lex.expect_end();
      return;
    }
    if (lex.at_keyword("new")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::New);
      s.target = first.text;
      lex.expect_end();
      return;
    }
    if (lex.at_keyword("call")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::Call);
      s.target = first.text;
      parse_call_tail(lex, s);
      return;
    }
    if (lex.at_punct("@")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::StaticLoad);
      s.target = first.text;
      s.klass = lex.expect_ident("class name").text;
      lex.expect_punct(".");
      s.field = lex.expect_ident("field name").text;
      lex.expect_end();
      return;
    }

    Token src = lex.expect_ident("source operand");
    if (lex.at_punct(".")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::FieldLoad);
      s.target = first.text;
      s.source = src.text;
      s.field = lex.expect_ident("field name").text;
      note_local(s.source);
      lex.expect_end();
      return;
    }
    if (lex.at_punct("[")) {
      lex.take();
      Statement& s = new_stmt(lex, Opcode::ArrayLoad);
      s.target = first.text;
      s.source = src.text;
      s.literal = lex.expect_int();
      lex.expect_punct("]");
      note_local(s.source);
      lex.expect_end();
      return;
    }
    if (lex.at_punct("+") || lex.at_punct("-") || lex.at_punct("*") ||
        lex.at_punct("/")) {
      Token op = lex.take();
      if (lex.at_ident()) {
        lex.fail("non-linear binop: the right operand must be a literal");
      }
      Statement& s = new_stmt(lex, Opcode::Binop);
      s.target = first.text;
      s.source = src.text;
      s.binop = op.text[0];
      s.literal = lex.expect_int();
      if (s.binop == '/' && s.literal == 0) {
        lex.fail("division by zero literal");
      }
      note_local(s.source);
      lex.expect_end();
      return;
    }
    Statement& s = new_stmt(lex, Opcode::LocalCopy);
    s.target = first.text;
    s.source = src.text;
    note_local(s.source);
    lex.expect_end();
  }

  void parse_call_tail(LineLexer& lex, Statement& s) {
    Token callee = lex.expect_ident("callee name");
    s.callee = callee.text;
    call_sites_.push_back({current_->name, s.id, lex.line(), callee.col});
    if (!s.target.empty()) note_local(s.target);
    lex.expect_punct("(");
    if (!lex.at_punct(")")) {
      while (true) {
        Token a = lex.expect_ident("argument");
        s.args.push_back(a.text);
        note_local(a.text);
        if (lex.at_punct(",")) {
          lex.take();
          continue;
        }
        break;
      }
    }
    lex.expect_punct(")");
    lex.expect_end();
  }

  void finish_proc(int line_no) {
    if (current_->body.empty() || current_->body.back().op != Opcode::Return) {
      Statement implicit;
      implicit.op = Opcode::Return;
      implicit.id = static_cast<int>(current_->body.size());
      implicit.line = line_no;
      current_->body.push_back(implicit);
    }
    for (Statement& s : current_->body) {
      if (s.op != Opcode::Branch && s.op != Opcode::Goto) continue;
      auto it = labels_.find(s.label);
      if (it == labels_.end()) {
        throw ParseError("unresolved label '" + s.label + "'", s.line, 1);
      }
      s.label_target = it->second;
    }
    for (const std::string& p : current_->params) locals_.insert(p);
    current_->locals.assign(locals_.begin(), locals_.end());
    locals_.clear();
    labels_.clear();
    current_ = nullptr;
  }

  void resolve_callees() {
    for (const CallSite& cs : call_sites_) {
      const Statement& s =
          prog_.procs[prog_.proc_index(cs.proc)].body[cs.stmt_id];
      int q = prog_.proc_index(s.callee);
      if (q < 0) {
        throw ParseError("unknown callee '" + s.callee + "'", cs.line, cs.col);
      }
      size_t arity = prog_.procs[q].params.size();
      if (s.args.size() != arity) {
        throw ParseError("call to '" + s.callee + "' passes " +
                             std::to_string(s.args.size()) + " arguments, '" +
                             s.callee + "' takes " + std::to_string(arity),
                         cs.line, cs.col);
      }
    }
  }

  struct CallSite {
    std::string proc;
    int stmt_id;
    int line, col;
  };

  Program prog_;
  Procedure* current_ = nullptr;
  std::set<std::string> locals_;
  std::map<std::string, int> labels_;
  std::vector<CallSite> call_sites_;
};

}  // namespace

SymbolSpec parse_symbol_spec_text(const std::string& text) {
  LineLexer lex(text, 1);
  SymbolSpec spec = parse_symbol_spec(lex);
  lex.expect_end();
  return spec;
}

Program parse_program(const std::string& text) {
  return ProgramParser().parse(text);
}

}  // namespace ideflow
