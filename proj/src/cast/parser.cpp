// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/cast/cast.hpp"

#include <cctype>
#include <cerrno>
#include <cstring>
#include <charconv>
#include <cstdlib>
#include <set>
#include <unordered_set>

namespace adj::cast {
namespace {

enum class Tok { Ident, Keyword, IntLit, FloatLit, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint32_t line = 1;
  std::uint32_t column = 1;
  std::size_t offset = 0;
  std::int64_t intValue = 0;
  double floatValue = 0.0;
};

const std::unordered_set<std::string> kKeywords = {
    "void",   "char",   "short",  "int",    "long",     "unsigned", "signed", "double",
    "float",  "struct", "const",  "if",     "else",     "for",      "while",  "return",
    "new",    "goto",   "switch", "case",   "default",  "do",       "break",  "continue",
    "typedef", "union", "enum",   "sizeof", "static",   "extern",   "volatile", "register",
    "delete", "auto",
};

const std::unordered_set<std::string> kUnsupportedKeywords = {
    "goto", "switch", "case", "default", "do", "break", "continue", "typedef", "union",
    "enum", "sizeof", "static", "extern", "volatile", "register", "delete", "auto",
};

class Lexer {
public:
  Lexer(std::string_view src, std::shared_ptr<const std::string> file)
      : src_(src), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipSpaceAndComments();
      Token t;
      t.line = line_;
      t.column = col_;
      t.offset = pos_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (c == '#')
        fail(ErrorKind::Unsupported, "preprocessor directive; inputs must be preprocessed");
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = kKeywords.count(t.text) ? Tok::Keyword : Tok::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lexNumber(t);
      } else if (c == '\'') {
        lexChar(t);
      } else if (c == '"') {
        fail(ErrorKind::Unsupported, "string literal");
      } else {
        lexPunct(t);
      }
      out.push_back(std::move(t));
    }
  }

private:
  [[noreturn]] void fail(ErrorKind kind, const std::string &msg) {
    SourceSpan span{file_, line_, col_, 1};
    throw FrontendError(kind, span, msg);
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipSpaceAndComments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n')
          advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        advance();
        advance();
        while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/'))
          advance();
        if (pos_ + 1 >= src_.size())
          fail(ErrorKind::Syntax, "unterminated comment");
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  void lexNumber(Token &t) {
    std::size_t start = pos_;
    bool isFloat = false;
    if (src_[pos_] == '0' && pos_ + 1 < src_.size() && (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X')) {
      advance();
      advance();
      while (pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_])))
        advance();
    } else {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        advance();
      if (pos_ < src_.size() && src_[pos_] == '.') {
        isFloat = true;
        advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        isFloat = true;
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
          advance();
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
          fail(ErrorKind::Syntax, "malformed exponent");
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance();
      }
    }
    std::string body(src_.substr(start, pos_ - start));
    // Suffixes carry no meaning in the subset beyond being accepted.
    while (pos_ < src_.size() && std::strchr("uUlLfF", src_[pos_]) != nullptr) {
      if ((src_[pos_] == 'f' || src_[pos_] == 'F') && !isFloat)
        fail(ErrorKind::Syntax, "float suffix on integer literal");
      advance();
    }
    t.text = std::string(src_.substr(start, pos_ - start));
    if (isFloat) {
      t.kind = Tok::FloatLit;
      t.floatValue = std::strtod(body.c_str(), nullptr);
    } else {
      t.kind = Tok::IntLit;
      errno = 0;
      unsigned long long v = std::strtoull(body.c_str(), nullptr, 0);
      if (errno == ERANGE || v > static_cast<unsigned long long>(INT64_MAX))
        fail(ErrorKind::Syntax, "integer literal out of range");
      t.intValue = static_cast<std::int64_t>(v);
    }
  }

  void lexChar(Token &t) {
    advance();
    if (pos_ >= src_.size())
      fail(ErrorKind::Syntax, "unterminated character literal");
    std::int64_t v = 0;
    if (src_[pos_] == '\\') {
      advance();
      if (pos_ >= src_.size())
        fail(ErrorKind::Syntax, "unterminated character literal");
      switch (src_[pos_]) {
      case 'n': v = '\n'; break;
      case 't': v = '\t'; break;
      case '0': v = 0; break;
      case '\\': v = '\\'; break;
      case '\'': v = '\''; break;
      default: fail(ErrorKind::Unsupported, "character escape");
      }
    } else {
      v = static_cast<unsigned char>(src_[pos_]);
    }
    advance();
    if (pos_ >= src_.size() || src_[pos_] != '\'')
      fail(ErrorKind::Syntax, "unterminated character literal");
    advance();
    t.kind = Tok::IntLit;
    t.intValue = v;
    t.text = std::to_string(v);
  }

  void lexPunct(Token &t) {
    static const char *const three[] = {"<<=", ">>=", "..."};
    static const char *const two[] = {"->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
                                      "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "::"};
    for (const char *p : three)
      if (src_.substr(pos_, 3) == p) {
        t.text = p;
        break;
      }
    if (t.text.empty())
      for (const char *p : two)
        if (src_.substr(pos_, 2) == p) {
          t.text = p;
          break;
        }
    if (t.text.empty()) {
      char c = src_[pos_];
      if (std::strchr("+-*/%&|^!~<>=()[]{};,.?:", c) == nullptr)
        fail(ErrorKind::Syntax, std::string("unexpected character '") + c + "'");
      t.text = std::string(1, c);
    }
    for (std::size_t i = 0; i < t.text.size(); ++i)
      advance();
    t.kind = Tok::Punct;
  }

  std::string_view src_;
  std::shared_ptr<const std::string> file_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

class Parser {
public:
  Parser(std::vector<Token> toks, std::shared_ptr<const std::string> file)
      : toks_(std::move(toks)), file_(std::move(file)) {}

  TranslationUnit run() {
    TranslationUnit tu;
    tu.file = *file_;
    // Record names must be known before bodies so "Name* x" parses as a decl.
    for (std::size_t i = 0; i + 2 < toks_.size(); ++i)
      if (toks_[i].text == "struct" && toks_[i + 1].kind == Tok::Ident && toks_[i + 2].text == "{")
        recordNames_.insert(toks_[i + 1].text);

    while (!at(Tok::End)) {
      if (peek().text == "struct" && peek(1).kind == Tok::Ident && peek(2).text == "{") {
        tu.records.push_back(parseRecord());
      } else {
        tu.functions.push_back(parseFunction());
      }
    }
    return tu;
  }

private:
  const Token &peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool atText(std::string_view s) const {
    return (peek().kind == Tok::Punct || peek().kind == Tok::Keyword) && peek().text == s;
  }
  const Token &next() {
    const Token &t = toks_[pos_];
    if (pos_ + 1 < toks_.size())
      ++pos_;
    return t;
  }
  bool accept(std::string_view s) {
    if (atText(s)) {
      next();
      return true;
    }
    return false;
  }

  SourceSpan spanAt(const Token &t) const {
    return SourceSpan{file_, t.line, t.column, static_cast<std::uint32_t>(std::max<std::size_t>(t.text.size(), 1))};
  }
  SourceSpan spanFrom(const Token &start) const {
    const Token &last = toks_[pos_ == 0 ? 0 : pos_ - 1];
    std::size_t end = last.offset + last.text.size();
    std::size_t len = end > start.offset ? end - start.offset : 1;
    return SourceSpan{file_, start.line, start.column, static_cast<std::uint32_t>(len)};
  }

  [[noreturn]] void fail(ErrorKind kind, const Token &t, const std::string &msg) const {
    throw FrontendError(kind, spanAt(t), msg);
  }
  [[noreturn]] void expected(const std::string &what) const {
    const Token &t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    if (t.kind == Tok::Keyword && kUnsupportedKeywords.count(t.text))
      fail(ErrorKind::Unsupported, t, "unsupported construct '" + t.text + "'");
    fail(ErrorKind::Syntax, t, "expected " + what + ", found " + found);
  }
  void expect(std::string_view s) {
    if (!accept(s))
      expected("'" + std::string(s) + "'");
  }
  std::string expectIdent() {
    if (!at(Tok::Ident))
      expected("identifier");
    return next().text;
  }

  bool startsType(std::size_t k = 0) const {
    const Token &t = peek(k);
    if (t.kind == Tok::Keyword) {
      static const std::set<std::string> typeWords = {"void",   "char",  "short",  "int",
                                                      "long",   "unsigned", "signed", "double",
                                                      "float",  "struct", "const"};
      return typeWords.count(t.text) > 0;
    }
    // A bare record name followed by an identifier or '*' starts a declaration.
    if (t.kind == Tok::Ident && recordNames_.count(t.text)) {
      const Token &n = peek(k + 1);
      return n.kind == Tok::Ident || n.text == "*";
    }
    return false;
  }

  CType parseBaseType() {
    while (accept("const")) {
    }
    const Token &start = peek();
    CType t;
    if (accept("struct")) {
      t = CType::record(expectIdent());
    } else if (at(Tok::Ident) && recordNames_.count(peek().text)) {
      t = CType::record(next().text);
    } else if (accept("void")) {
      t = CType::voidType();
    } else if (accept("double")) {
      t = CType::floating(64);
    } else if (accept("float")) {
      t = CType::floating(32);
    } else {
      bool sawSign = false;
      bool isSigned = true;
      unsigned bits = 0;
      for (;;) {
        if (accept("unsigned")) {
          sawSign = true;
          isSigned = false;
        } else if (accept("signed")) {
          sawSign = true;
        } else if (accept("char")) {
          bits = 8;
        } else if (accept("short")) {
          bits = 16;
          accept("int");
        } else if (accept("long")) {
          bits = 64;
          accept("long");
          accept("int");
        } else if (accept("int")) {
          if (bits == 0)
            bits = 32;
        } else {
          break;
        }
      }
      if (bits == 0 && !sawSign)
        fail(ErrorKind::Syntax, start, "expected type name");
      t = CType::integer(bits == 0 ? 32 : bits, isSigned);
    }
    while (accept("const")) {
    }
    return t;
  }

  CType parsePointers(CType base) {
    while (accept("*")) {
      base = CType::pointerTo(base);
      while (accept("const")) {
      }
    }
    return base;
  }

  void rejectArrayDeclarator() {
    if (atText("["))
      fail(ErrorKind::Unsupported, peek(), "unsupported construct: array declarator (use new T[n])");
  }

  RecordDef parseRecord() {
    const Token &start = peek();
    expect("struct");
    RecordDef rec;
    rec.name = expectIdent();
    expect("{");
    while (!accept("}")) {
      CType base = parseBaseType();
      do {
        CType t = parsePointers(base);
        rec.fields.push_back({expectIdent(), t});
        rejectArrayDeclarator();
      } while (accept(","));
      expect(";");
    }
    expect(";");
    rec.span = spanFrom(start);
    return rec;
  }

  Function parseFunction() {
    const Token &start = peek();
    if (!startsType())
      expected("declaration");
    Function fn;
    fn.returnType = parsePointers(parseBaseType());
    fn.name = expectIdent();
    expect("(");
    if (atText("void") && peek(1).text == ")") {
      next();
    }
    if (!atText(")")) {
      do {
        const Token &pstart = peek();
        Param p;
        p.type = parsePointers(parseBaseType());
        p.name = expectIdent();
        rejectArrayDeclarator();
        p.span = spanFrom(pstart);
        fn.params.push_back(std::move(p));
      } while (accept(","));
    }
    expect(")");
    if (accept(";")) {
      fn.hasBody = false;
    } else {
      fn.body = parseBlockBody();
    }
    fn.span = spanFrom(start);
    return fn;
  }

  std::vector<Stmt> parseBlockBody() {
    expect("{");
    std::vector<Stmt> body;
    while (!accept("}")) {
      if (at(Tok::End))
        expected("'}'");
      parseStatementInto(body);
    }
    return body;
  }

  // Body of if/for/while: a braced block contributes its statements directly.
  std::vector<Stmt> parseBody() {
    if (atText("{"))
      return parseBlockBody();
    std::vector<Stmt> body;
    parseStatementInto(body);
    return body;
  }

  void parseStatementInto(std::vector<Stmt> &out) {
    if (accept(";"))
      return;
    if (startsType()) {
      parseDeclInto(out);
      expect(";");
      return;
    }
    out.push_back(parseStatement());
  }

  void parseDeclInto(std::vector<Stmt> &out) {
    const Token &start = peek();
    CType base = parseBaseType();
    bool first = true;
    do {
      const Token &dstart = first ? start : peek();
      first = false;
      CType t = parsePointers(base);
      std::string name = expectIdent();
      rejectArrayDeclarator();
      std::optional<Expr> init;
      if (accept("="))
        init = parseExpr();
      Stmt s = Stmt::decl(std::move(name), t, std::move(init));
      s.span = spanFrom(dstart);
      out.push_back(std::move(s));
    } while (accept(","));
  }

  Stmt parseStatement() {
    const Token &start = peek();
    if (atText("{")) {
      auto body = parseBlockBody();
      return Stmt::block(std::move(body), spanFrom(start));
    }
    if (accept("if")) {
      expect("(");
      Expr cond = parseExpr();
      expect(")");
      auto thenBody = parseBody();
      std::optional<std::vector<Stmt>> elseBody;
      if (accept("else"))
        elseBody = parseBody();
      return Stmt::ifStmt(std::move(cond), std::move(thenBody), std::move(elseBody), spanFrom(start));
    }
    if (accept("while")) {
      expect("(");
      Expr cond = parseExpr();
      expect(")");
      auto body = parseBody();
      return Stmt::whileLoop(std::move(cond), std::move(body), spanFrom(start));
    }
    if (accept("for")) {
      expect("(");
      std::optional<Stmt> init;
      if (!atText(";")) {
        if (startsType()) {
          std::vector<Stmt> decls;
          parseDeclInto(decls);
          if (decls.size() != 1)
            fail(ErrorKind::Unsupported, start, "unsupported construct: multiple declarators in for-init");
          init = std::move(decls.front());
        } else {
          init = parseSimple();
        }
      }
      expect(";");
      if (atText(";"))
        fail(ErrorKind::Unsupported, peek(), "unsupported construct: for-loop without condition");
      Expr cond = parseExpr();
      expect(";");
      std::optional<Stmt> step;
      if (!atText(")"))
        step = parseSimple();
      expect(")");
      auto body = parseBody();
      return Stmt::forLoop(std::move(init), std::move(cond), std::move(step), std::move(body),
                           spanFrom(start));
    }
    if (accept("return")) {
      std::optional<Expr> value;
      if (!atText(";"))
        value = parseExpr();
      expect(";");
      return Stmt::returnStmt(std::move(value), spanFrom(start));
    }
    if (peek().kind == Tok::Keyword && kUnsupportedKeywords.count(peek().text))
      fail(ErrorKind::Unsupported, peek(), "unsupported construct '" + peek().text + "'");
    Stmt s = parseSimple();
    expect(";");
    return s;
  }

  // Assignment, increment/decrement or expression statement (no ';').
  Stmt parseSimple() {
    const Token &start = peek();
    Expr e = parseExpr();
    AssignOp op;
    bool isAssign = true;
    if (accept("="))
      op = AssignOp::Assign;
    else if (accept("+="))
      op = AssignOp::AddAssign;
    else if (accept("-="))
      op = AssignOp::SubAssign;
    else
      isAssign = false;
    if (isAssign) {
      Expr rhs = parseExpr();
      return Stmt::assign(std::move(e), op, std::move(rhs), spanFrom(start));
    }
    static const std::set<std::string> otherAssign = {"*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="};
    if (peek().kind == Tok::Punct && otherAssign.count(peek().text))
      fail(ErrorKind::Unsupported, peek(), "unsupported construct: compound assignment '" + peek().text + "'");
    if (e.kind == ExprKind::IncDec) {
      Expr target = std::move(e.kids.front());
      return Stmt::incDec(std::move(target), e.delta, spanFrom(start));
    }
    return Stmt::exprStmt(std::move(e), spanFrom(start));
  }

  // Precedence climbing over binary operators.
  static int precedence(const std::string &op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "|") return 3;
    if (op == "^") return 4;
    if (op == "&") return 5;
    if (op == "==" || op == "!=") return 6;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 7;
    if (op == "<<" || op == ">>") return 8;
    if (op == "+" || op == "-") return 9;
    if (op == "*" || op == "/" || op == "%") return 10;
    return -1;
  }

  static BinaryOp binaryOpFor(const std::string &op) {
    static const std::pair<const char *, BinaryOp> table[] = {
        {"+", BinaryOp::Add},    {"-", BinaryOp::Sub},     {"*", BinaryOp::Mul},
        {"/", BinaryOp::Div},    {"%", BinaryOp::Rem},     {"&", BinaryOp::BitAnd},
        {"|", BinaryOp::BitOr},  {"^", BinaryOp::BitXor},  {"<<", BinaryOp::Shl},
        {">>", BinaryOp::Shr},   {"<", BinaryOp::Lt},      {">", BinaryOp::Gt},
        {"<=", BinaryOp::Le},    {">=", BinaryOp::Ge},     {"==", BinaryOp::Eq},
        {"!=", BinaryOp::Ne},    {"&&", BinaryOp::LogAnd}, {"||", BinaryOp::LogOr},
    };
    for (const auto &[s, o] : table)
      if (op == s)
        return o;
    return BinaryOp::Add;
  }

  Expr parseExpr() {
    Expr e = parseBinary(1);
    if (atText("?"))
      fail(ErrorKind::Unsupported, peek(), "unsupported construct: conditional operator");
    return e;
  }

  Expr parseBinary(int minPrec) {
    const Token &start = peek();
    Expr lhs = parseUnary();
    for (;;) {
      const Token &t = peek();
      if (t.kind != Tok::Punct)
        break;
      int prec = precedence(t.text);
      if (prec < minPrec)
        break;
      std::string op = next().text;
      Expr rhs = parseBinary(prec + 1);
      lhs = Expr::binary(binaryOpFor(op), std::move(lhs), std::move(rhs), spanFrom(start));
    }
    return lhs;
  }

  Expr parseUnary() {
    const Token &start = peek();
    if (accept("-")) {
      Expr operand = parseUnary();
      // Negative literals are canonicalized to a single literal node.
      if (operand.kind == ExprKind::IntLit) {
        operand.intValue = -operand.intValue;
        operand.span = spanFrom(start);
        return operand;
      }
      if (operand.kind == ExprKind::FloatLit) {
        operand.floatValue = -operand.floatValue;
        operand.span = spanFrom(start);
        return operand;
      }
      return Expr::unary(UnaryOp::Neg, std::move(operand), spanFrom(start));
    }
    if (accept("+"))
      return parseUnary();
    if (accept("!")) {
      Expr operand = parseUnary();
      return Expr::unary(UnaryOp::Not, std::move(operand), spanFrom(start));
    }
    if (accept("~")) {
      Expr operand = parseUnary();
      return Expr::unary(UnaryOp::BitNot, std::move(operand), spanFrom(start));
    }
    if (accept("*")) {
      Expr operand = parseUnary();
      return Expr::deref(std::move(operand), spanFrom(start));
    }
    if (accept("&")) {
      Expr operand = parseUnary();
      return Expr::addrOf(std::move(operand), spanFrom(start));
    }
    if (atText("++") || atText("--")) {
      int delta = next().text == "++" ? 1 : -1;
      Expr operand = parseUnary();
      return Expr::incDec(std::move(operand), delta, true, spanFrom(start));
    }
    if (accept("new")) {
      CType elem = parsePointers(parseBaseType());
      expect("[");
      Expr count = parseExpr();
      expect("]");
      return Expr::alloc(elem, std::move(count), spanFrom(start));
    }
    return parsePostfix();
  }

  Expr parsePostfix() {
    const Token &start = peek();
    Expr e = parsePrimary();
    for (;;) {
      if (accept("[")) {
        Expr index = parseExpr();
        expect("]");
        e = Expr::subscript(std::move(e), std::move(index), spanFrom(start));
      } else if (atText(".") || atText("->")) {
        bool arrow = next().text == "->";
        std::string field = expectIdent();
        e = Expr::member(std::move(e), std::move(field), arrow, spanFrom(start));
      } else if (atText("++") || atText("--")) {
        int delta = next().text == "++" ? 1 : -1;
        e = Expr::incDec(std::move(e), delta, false, spanFrom(start));
      } else if (atText("(")) {
        if (e.kind != ExprKind::Ident)
          fail(ErrorKind::Unsupported, peek(), "unsupported construct: call through expression");
        next();
        std::vector<Expr> args;
        if (!atText(")")) {
          do {
            args.push_back(parseExpr());
          } while (accept(","));
        }
        expect(")");
        e = Expr::call(e.name, std::move(args), spanFrom(start));
      } else {
        return e;
      }
    }
  }

  Expr parsePrimary() {
    const Token &t = peek();
    switch (t.kind) {
    case Tok::IntLit:
      next();
      return Expr::intLit(t.intValue, spanAt(t));
    case Tok::FloatLit:
      next();
      return Expr::floatLit(t.floatValue, spanAt(t));
    case Tok::Ident:
      next();
      return Expr::ident(t.text, spanAt(t));
    default:
      break;
    }
    if (atText("(")) {
      if (startsType(1))
        fail(ErrorKind::Unsupported, t, "unsupported construct: cast");
      next();
      Expr e = parseExpr();
      expect(")");
      return e;
    }
    expected("expression");
  }

  std::vector<Token> toks_;
  std::shared_ptr<const std::string> file_;
  std::size_t pos_ = 0;
  std::set<std::string> recordNames_;
};

} // namespace

TranslationUnit parseSyntax(std::string_view source, const std::string &file) {
  auto fileName = std::make_shared<const std::string>(file);
  Lexer lexer(source, fileName);
  Parser parser(lexer.run(), fileName);
  return parser.run();
}

TranslationUnit parse(std::string_view source, const std::string &file) {
  TranslationUnit tu = parseSyntax(source, file);
  typecheck(tu);
  return tu;
}

} // namespace adj::cast
