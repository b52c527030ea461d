// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/patterns/lil.hpp"

#include "adj/adjunct/adjunct.hpp"
#include "adj/cast/cast.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>

namespace adj::patterns {

using cast::AssignOp;
using cast::BinaryOp;
using cast::Expr;
using cast::ExprKind;
using cast::Function;
using cast::Stmt;
using cast::StmtKind;

namespace {

bool sameSpan(const cast::SourceSpan &a, const cast::SourceSpan &b) {
  return a.line == b.line && a.column == b.column;
}

template <class F> void eachExpr(const Expr &e, F &&f) {
  f(e);
  for (const auto &k : e.kids)
    eachExpr(k, f);
}

template <class F> void eachStmt(const std::vector<Stmt> &body, F &&f) {
  for (const auto &s : body) {
    f(s);
    eachStmt(s.forInit, f);
    eachStmt(s.forStep, f);
    eachStmt(s.body, f);
    eachStmt(s.elseBody, f);
  }
}

template <class F> void eachBlock(const std::vector<Stmt> &body, F &&f) {
  f(body);
  for (const auto &s : body) {
    eachBlock(s.body, f);
    if (!s.elseBody.empty())
      eachBlock(s.elseBody, f);
  }
}

bool isLoop(const Stmt &s) { return s.kind == StmtKind::For || s.kind == StmtKind::While; }

bool isCursor(const Expr &e, int declId) { return e.kind == ExprKind::Ident && e.declId == declId; }

// The lvalue reaches memory through a record member.
bool isMemberLvalue(const Expr &e) {
  if (e.kind == ExprKind::Member)
    return true;
  if (e.kind == ExprKind::Subscript)
    return isMemberLvalue(e.kids[0]);
  return false;
}

const std::string &fieldOf(const Expr &e) {
  return e.kind == ExprKind::Member ? e.name : fieldOf(e.kids[0]);
}

/// Upper bound of a counting loop `v < X` / `X > v`.
const Expr *rowCountOf(const Stmt &loop) {
  if (loop.kind != StmtKind::For)
    return nullptr;
  const Expr &c = loop.cond();
  if (c.kind != ExprKind::Binary)
    return nullptr;
  if (c.binOp == BinaryOp::Lt && c.kids[0].kind == ExprKind::Ident)
    return &c.kids[1];
  if (c.binOp == BinaryOp::Gt && c.kids[1].kind == ExprKind::Ident)
    return &c.kids[0];
  return nullptr;
}

struct Buffer {
  const Stmt *decl;
  std::size_t index;
  const Expr *lhs;
  const Expr *rhs;
};

std::optional<Buffer> bufferOf(const Stmt &s, std::size_t index) {
  if (s.kind != StmtKind::Decl || !s.declType.isPointer() || !s.hasInit())
    return std::nullopt;
  const Expr &a = s.init();
  if (a.kind != ExprKind::Alloc || a.kids[0].kind != ExprKind::Binary || a.kids[0].binOp != BinaryOp::Mul)
    return std::nullopt;
  return Buffer{&s, index, &a.kids[0].kids[0], &a.kids[0].kids[1]};
}

// Every use of the cursor is one of: its declaration, the row binding,
// *c, c[e], c++ / ++c / c-- as a statement, c += e.
bool cursorUsesOk(const Function &fn, int declId, const Stmt &loop) {
  bool ok = true;
  auto checkExpr = [&](const Expr &root, bool allowBare) {
    std::function<void(const Expr &, bool)> walk = [&](const Expr &e, bool bare) {
      if ((e.kind == ExprKind::Deref || e.kind == ExprKind::Subscript) && isCursor(e.kids[0], declId)) {
        for (std::size_t i = 1; i < e.kids.size(); ++i)
          walk(e.kids[i], false);
        return;
      }
      if (isCursor(e, declId) && !bare)
        ok = false;
      for (const auto &k : e.kids)
        walk(k, false);
    };
    walk(root, allowBare);
  };
  bool inLoop = false;
  std::function<void(const std::vector<Stmt> &)> visit = [&](const std::vector<Stmt> &body) {
    for (const auto &s : body) {
      bool wasInLoop = inLoop;
      if (&s == &loop)
        inLoop = true;
      switch (s.kind) {
      case StmtKind::Decl:
        if (s.declId == declId)
          break;
        for (const auto &e : s.exprs)
          checkExpr(e, false);
        break;
      case StmtKind::IncDec:
        if (!(isCursor(s.exprs[0], declId) && inLoop))
          checkExpr(s.exprs[0], false);
        break;
      case StmtKind::ExprStmt:
        if (s.exprs[0].kind == ExprKind::IncDec && isCursor(s.exprs[0].kids[0], declId) && inLoop)
          break;
        checkExpr(s.exprs[0], false);
        break;
      case StmtKind::Assign:
        if (isCursor(s.lhs(), declId)) {
          if (!inLoop || s.assignOp != AssignOp::AddAssign)
            ok = false;
          checkExpr(s.rhs(), false);
          break;
        }
        checkExpr(s.lhs(), false);
        checkExpr(s.rhs(), inLoop && isCursor(s.rhs(), declId) && isMemberLvalue(s.lhs()));
        break;
      default:
        for (const auto &e : s.exprs)
          checkExpr(e, false);
      }
      visit(s.forInit);
      visit(s.forStep);
      visit(s.body);
      visit(s.elseBody);
      inLoop = wasInLoop;
    }
  };
  visit(fn.body);
  return ok;
}

std::set<int> writtenIn(const std::vector<Stmt> &body) {
  std::set<int> out;
  eachStmt(body, [&](const Stmt &s) {
    if (s.kind == StmtKind::Decl)
      out.insert(s.declId);
    if ((s.kind == StmtKind::Assign || s.kind == StmtKind::IncDec) && s.exprs[0].kind == ExprKind::Ident)
      out.insert(s.exprs[0].declId);
    for (const auto &e : s.exprs)
      eachExpr(e, [&](const Expr &x) {
        if (x.kind == ExprKind::IncDec && x.kids[0].kind == ExprKind::Ident)
          out.insert(x.kids[0].declId);
        if (x.kind == ExprKind::AddrOf && x.kids[0].kind == ExprKind::Ident)
          out.insert(x.kids[0].declId);
      });
  });
  return out;
}

bool stableTarget(const Expr &target, const std::set<int> &written) {
  bool ok = true;
  eachExpr(target, [&](const Expr &e) {
    if (e.kind == ExprKind::Ident && written.count(e.declId))
      ok = false;
    if (e.kind == ExprKind::Call || e.kind == ExprKind::IncDec || e.kind == ExprKind::Alloc)
      ok = false;
  });
  return ok;
}

std::optional<LilMatch> matchLoop(const Function &fn, const std::vector<Stmt> &block, std::size_t loopIndex) {
  const Stmt &loop = block[loopIndex];
  const Expr *rowCount = rowCountOf(loop);
  if (!rowCount)
    return std::nullopt;
  std::map<int, Buffer> buffers;
  for (std::size_t i = 0; i < loopIndex; ++i)
    if (auto b = bufferOf(block[i], i))
      buffers.emplace(b->decl->declId, *b);
  if (buffers.empty())
    return std::nullopt;

  LilMatch m;
  m.function = fn.name;
  m.scope = loop.span;
  m.rowCount = *rowCount;
  std::set<int> bound;
  std::set<int> written = writtenIn(loop.body);
  std::optional<Expr> rowLength;
  for (std::size_t i = 0; i < loop.body.size(); ++i) {
    const Stmt &s = loop.body[i];
    if (s.kind != StmtKind::Assign || s.assignOp != AssignOp::Assign || s.rhs().kind != ExprKind::Ident)
      continue;
    auto b = buffers.find(s.rhs().declId);
    if (b == buffers.end() || !isMemberLvalue(s.lhs()))
      continue;
    int c = b->first;
    if (bound.count(c))
      return std::nullopt;
    // The cursor must not be used in the row before its binding.
    for (std::size_t j = 0; j < i; ++j) {
      bool used = false;
      std::vector<Stmt> one{loop.body[j]};
      eachStmt(one, [&](const Stmt &x) {
        for (const auto &e : x.exprs)
          eachExpr(e, [&](const Expr &y) { used = used || isCursor(y, c); });
      });
      if (used)
        return std::nullopt;
    }
    // Row length is the size factor that is not the row count.
    const Expr *len = nullptr;
    if (cast::structuralEqual(*b->second.rhs, *rowCount))
      len = b->second.lhs;
    else if (cast::structuralEqual(*b->second.lhs, *rowCount))
      len = b->second.rhs;
    if (!len || (rowLength && !cast::structuralEqual(*rowLength, *len)))
      return std::nullopt;
    bool lenStable = true;
    eachExpr(*len, [&](const Expr &e) {
      if (e.kind == ExprKind::Ident && written.count(e.declId))
        lenStable = false;
      if (e.kind != ExprKind::Ident && e.kind != ExprKind::IntLit && e.kind != ExprKind::Binary)
        lenStable = false;
    });
    if (!lenStable || !stableTarget(s.lhs(), written) || !cursorUsesOk(fn, c, loop))
      return std::nullopt;
    rowLength = *len;
    bound.insert(c);
    m.cursors.push_back(fn.vars[c].name);
    m.rowBindings.push_back(RowBinding{s.lhs(), fn.vars[c].name});
    m.bufferDecls.push_back(*b->second.decl);
  }
  if (m.rowBindings.empty())
    return std::nullopt;
  // No other store may replace a row pointer inside the loop.
  int stores = 0;
  eachStmt(loop.body, [&](const Stmt &s) {
    if (s.kind == StmtKind::Assign)
      for (const auto &rb : m.rowBindings)
        if (cast::structuralEqual(s.lhs(), rb.target))
          ++stores;
  });
  if (stores != static_cast<int>(m.rowBindings.size()))
    return std::nullopt;
  m.rowLength = *rowLength;
  return m;
}

std::string adjunctBase(const std::string &field) {
  auto cut = field.rfind('_');
  std::string tail = cut == std::string::npos || cut + 1 == field.size() ? field : field.substr(cut + 1);
  return tail;
}

class RowRewriter {
public:
  RowRewriter(std::map<std::string, std::pair<Expr, std::string>> cursors) : cursors_(std::move(cursors)) {}

  void body(std::vector<Stmt> &stmts) {
    for (auto &s : stmts)
      stmt(s);
  }

private:
  const std::pair<Expr, std::string> *cursor(const Expr &e) const {
    if (e.kind != ExprKind::Ident)
      return nullptr;
    auto it = cursors_.find(e.name);
    return it == cursors_.end() ? nullptr : &it->second;
  }

  void expr(Expr &e) {
    for (auto &k : e.kids)
      expr(k);
    if (e.kind == ExprKind::Deref) {
      if (const auto *c = cursor(e.kids[0]))
        e = Expr::subscript(c->first, Expr::ident(c->second, e.span), e.span);
    } else if (e.kind == ExprKind::Subscript) {
      if (const auto *c = cursor(e.kids[0]))
        e = Expr::subscript(c->first, Expr::binary(BinaryOp::Add, Expr::ident(c->second, e.span), e.kids[1], e.span),
                            e.span);
    }
  }

  void stmt(Stmt &s) {
    if (s.kind == StmtKind::IncDec || (s.kind == StmtKind::Assign && s.assignOp == AssignOp::AddAssign)) {
      if (const auto *c = cursor(s.exprs[0]))
        s.exprs[0] = Expr::ident(c->second, s.exprs[0].span);
    }
    if (s.kind == StmtKind::ExprStmt && s.exprs[0].kind == ExprKind::IncDec) {
      if (const auto *c = cursor(s.exprs[0].kids[0]))
        s.exprs[0].kids[0] = Expr::ident(c->second, s.exprs[0].span);
    }
    for (auto &e : s.exprs)
      expr(e);
    body(s.forInit);
    body(s.forStep);
    body(s.body);
    body(s.elseBody);
  }

  std::map<std::string, std::pair<Expr, std::string>> cursors_;
};

bool rewriteIn(std::vector<Stmt> &block, const LilMatch &m, std::set<std::string> &taken) {
  auto loopIt = std::find_if(block.begin(), block.end(),
                             [&](const Stmt &s) { return isLoop(s) && sameSpan(s.span, m.scope); });
  if (loopIt == block.end()) {
    for (auto &s : block)
      for (auto *sub : {&s.body, &s.elseBody})
        if (rewriteIn(*sub, m, taken))
          return true;
    return false;
  }
  Stmt &loop = *loopIt;
  std::map<std::string, std::pair<Expr, std::string>> cursors;
  std::vector<Stmt> rows;
  for (auto &s : loop.body) {
    const RowBinding *rb = nullptr;
    if (s.kind == StmtKind::Assign && s.rhs().kind == ExprKind::Ident)
      for (const auto &b : m.rowBindings)
        if (b.cursor == s.rhs().name && cast::structuralEqual(b.target, s.lhs()))
          rb = &b;
    if (!rb) {
      rows.push_back(std::move(s));
      continue;
    }
    auto decl = std::find_if(m.bufferDecls.begin(), m.bufferDecls.end(),
                             [&](const Stmt &d) { return d.name == rb->cursor; });
    if (decl == m.bufferDecls.end())
      throw LilError("row binding for " + rb->cursor + " has no buffer");
    std::string adj = adjunct::freshName(adjunctBase(fieldOf(rb->target)), taken);
    rows.push_back(Stmt::assign(rb->target, AssignOp::Assign,
                                Expr::alloc(decl->declType.pointee(), m.rowLength, s.span), s.span));
    rows.push_back(Stmt::decl(adj, cast::CType::integer(32, true), Expr::intLit(0, s.span), s.span));
    cursors.emplace(rb->cursor, std::make_pair(rb->target, adj));
  }
  if (cursors.size() != m.rowBindings.size())
    throw LilError("row bindings changed since the match");
  loop.body = std::move(rows);
  RowRewriter(cursors).body(loop.body);
  std::size_t before = block.size();
  block.erase(std::remove_if(block.begin(), block.end(),
                             [&](const Stmt &s) {
                               return std::any_of(m.bufferDecls.begin(), m.bufferDecls.end(), [&](const Stmt &d) {
                                 return s.kind == StmtKind::Decl && sameSpan(s.span, d.span) && s.name == d.name;
                               });
                             }),
              block.end());
  if (before - block.size() != m.bufferDecls.size())
    throw LilError("buffer declarations changed since the match");
  return true;
}

} // namespace

std::vector<LilMatch> findLil(const cast::TranslationUnit &tu) {
  std::vector<LilMatch> out;
  for (const auto &fn : tu.functions) {
    if (!fn.hasBody)
      continue;
    eachBlock(fn.body, [&](const std::vector<Stmt> &block) {
      for (std::size_t i = 0; i < block.size(); ++i)
        if (isLoop(block[i]))
          if (auto m = matchLoop(fn, block, i))
            out.push_back(std::move(*m));
    });
  }
  return out;
}

cast::TranslationUnit rewriteLil(const cast::TranslationUnit &tu, const LilMatch &m) {
  cast::TranslationUnit out = tu;
  cast::Function *fn = out.function(m.function);
  if (!fn)
    throw LilError("no function " + m.function);
  auto taken = adjunct::identifiersOf(tu);
  if (!rewriteIn(fn->body, m, taken))
    throw LilError("row loop at " + m.scope.str() + " not found");
  try {
    cast::typecheck(out);
  } catch (const cast::FrontendError &e) {
    throw LilError(std::string("rewritten unit does not type check: ") + e.what());
  }
  return out;
}

cast::TranslationUnit rewriteAllLil(const cast::TranslationUnit &tu) {
  cast::TranslationUnit out = tu;
  // Matches are recomputed so each rewrite sees the previous one.
  for (;;) {
    auto ms = findLil(out);
    if (ms.empty())
      return out;
    out = rewriteLil(out, ms.front());
  }
}

} // namespace adj::patterns
