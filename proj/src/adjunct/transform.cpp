// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "analysis.hpp"

#include "adj/cast/cast.hpp"
#include "adj/cast/diagnostic.hpp"

#include <optional>

namespace adj::adjunct {

namespace {

using cast::AssignOp;
using cast::BinaryOp;
using cast::CType;
using cast::Expr;
using cast::ExprKind;
using cast::Function;
using cast::SourceSpan;
using cast::Stmt;
using cast::StmtKind;

const CType kAdjType = CType::integer(64, true);

bool isZeroLit(const Expr &e) { return e.kind == ExprKind::IntLit && e.intValue == 0; }

bool mentions(const Expr &e, const std::string &a, const std::string &b) {
  if (e.kind == ExprKind::Ident && (e.name == a || e.name == b))
    return true;
  for (const auto &k : e.kids)
    if (mentions(k, a, b))
      return true;
  return false;
}

class Rewriter {
public:
  Rewriter(const Function &fn, const detail::FunctionAnalysis &an, const std::map<int, std::string> &names,
           std::set<std::string> &taken, std::map<std::string, int> &counts)
      : fn_(fn), an_(an), names_(names), taken_(taken), counts_(counts) {}

  Function run() {
    Function out = fn_;
    out.vars.clear();
    std::vector<Stmt> prologue;
    for (const auto &p : fn_.params)
      if (an_.decidable.count(p.declId))
        prologue.push_back(Stmt::decl(names_.at(p.declId), kAdjType, Expr::intLit(0, p.span), p.span));
    std::vector<Stmt> rest = body(fn_.body);
    prologue.insert(prologue.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
    out.body = std::move(prologue);
    return out;
  }

private:
  struct Split {
    Expr base;
    std::optional<Expr> off;
  };

  bool inD(const Expr &e) const { return e.kind == ExprKind::Ident && an_.decidable.count(e.declId); }

  Expr adjRef(int id, const SourceSpan &sp) const { return Expr::ident(names_.at(id), sp); }

  void count(const char *kind) { ++counts_[kind]; }

  Split decompose(const Expr &e) {
    switch (e.kind) {
    case ExprKind::Ident:
      if (inD(e))
        return {e, adjRef(e.declId, e.span)};
      return {e, std::nullopt};
    case ExprKind::Binary: {
      bool ptrLeft = e.kids[0].type.isPointer();
      const Expr &x = ptrLeft ? e.kids[0] : e.kids[1];
      const Expr &n = ptrLeft ? e.kids[1] : e.kids[0];
      if (!x.type.isPointer() || (e.binOp != BinaryOp::Add && e.binOp != BinaryOp::Sub))
        return {rw(e), std::nullopt};
      Split s = decompose(x);
      if (!s.off)
        return {rw(e), std::nullopt};
      Expr nn = rw(n);
      if (e.binOp == BinaryOp::Sub)
        s.off = Expr::binary(BinaryOp::Sub, std::move(*s.off), std::move(nn), e.span);
      else
        s.off = Expr::binary(BinaryOp::Add, std::move(*s.off), std::move(nn), e.span);
      return s;
    }
    case ExprKind::IncDec: {
      const Expr &t = e.kids[0];
      if (inD(t))
        return {t, Expr::incDec(adjRef(t.declId, t.span), e.delta, e.prefix, e.span)};
      return {rw(e), std::nullopt};
    }
    case ExprKind::AddrOf: {
      const Expr &k = e.kids[0];
      if (k.kind != ExprKind::Subscript)
        return {rw(e), std::nullopt};
      Split s = decompose(k.kids[0]);
      if (!s.off)
        return {rw(e), std::nullopt};
      Expr i = rw(k.kids[1]);
      if (!isZeroLit(i))
        s.off = Expr::binary(BinaryOp::Add, std::move(i), std::move(*s.off), e.span);
      return s;
    }
    case ExprKind::Subscript: {
      Expr loaded = access(e);
      auto t = an_.loadTarget.find(&e);
      if (t != an_.loadTarget.end())
        return {std::move(loaded), adjRef(t->second, e.span)};
      return {std::move(loaded), std::nullopt};
    }
    default:
      return {rw(e), std::nullopt};
    }
  }

  Expr materialize(const Expr &e) {
    switch (e.kind) {
    case ExprKind::Ident:
      if (inD(e))
        return Expr::binary(BinaryOp::Add, e, adjRef(e.declId, e.span), e.span);
      return e;
    case ExprKind::Binary:
      if (e.kids[0].type.isPointer())
        return Expr::binary(e.binOp, materialize(e.kids[0]), rw(e.kids[1]), e.span);
      return Expr::binary(e.binOp, rw(e.kids[0]), materialize(e.kids[1]), e.span);
    case ExprKind::IncDec: {
      const Expr &t = e.kids[0];
      if (inD(t))
        return Expr::binary(BinaryOp::Add, t, Expr::incDec(adjRef(t.declId, t.span), e.delta, e.prefix, e.span),
                            e.span);
      return Expr::incDec(lvalue(t), e.delta, e.prefix, e.span);
    }
    case ExprKind::Subscript: {
      Expr loaded = access(e);
      auto t = an_.loadTarget.find(&e);
      if (t != an_.loadTarget.end())
        return Expr::binary(BinaryOp::Add, std::move(loaded), adjRef(t->second, e.span), e.span);
      return loaded;
    }
    case ExprKind::AddrOf:
      if (e.kids[0].kind == ExprKind::Ident)
        return e;
      return Expr::addrOf(lvalue(e.kids[0]), e.span);
    default:
      return plain(e);
    }
  }

  Expr access(const Expr &e) {
    if (e.kind == ExprKind::Subscript) {
      Split s = decompose(e.kids[0]);
      Expr i = rw(e.kids[1]);
      if (!s.off)
        return Expr::subscript(std::move(s.base), std::move(i), e.span);
      count(isZeroLit(e.kids[1]) ? "deref" : "subscript");
      Expr idx = isZeroLit(i) ? std::move(*s.off) : Expr::binary(BinaryOp::Add, std::move(i), std::move(*s.off), e.span);
      return Expr::subscript(std::move(s.base), std::move(idx), e.span);
    }
    if (e.kind == ExprKind::Member) {
      if (!e.throughPointer)
        return Expr::member(lvalue(e.kids[0]), e.name, false, e.span);
      Split s = decompose(e.kids[0]);
      if (!s.off)
        return Expr::member(std::move(s.base), e.name, true, e.span);
      count("deref");
      return Expr::member(Expr::subscript(std::move(s.base), std::move(*s.off), e.span), e.name, false, e.span);
    }
    return rw(e);
  }

  Expr lvalue(const Expr &e) {
    if (e.kind == ExprKind::Ident)
      return e;
    return access(e);
  }

  Expr rw(const Expr &e) {
    if (e.type.isPointer())
      return materialize(e);
    return plain(e);
  }

  Expr plain(const Expr &e) {
    switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::FloatLit:
    case ExprKind::Ident:
      return e;
    case ExprKind::Subscript:
    case ExprKind::Member:
      return access(e);
    case ExprKind::Binary: {
      const Expr &l = e.kids[0];
      const Expr &r = e.kids[1];
      if (l.type.isPointer() && r.type.isPointer()) {
        if (an_.sameBase.count(&e)) {
          Split ls = decompose(l);
          Split rs = decompose(r);
          Expr lo = ls.off ? std::move(*ls.off) : Expr::intLit(0, l.span);
          Expr ro = rs.off ? std::move(*rs.off) : Expr::intLit(0, r.span);
          return Expr::binary(e.binOp, std::move(lo), std::move(ro), e.span);
        }
        return Expr::binary(e.binOp, materialize(l), materialize(r), e.span);
      }
      return Expr::binary(e.binOp, rw(l), rw(r), e.span);
    }
    case ExprKind::Unary:
      return Expr::unary(e.unOp, rw(e.kids[0]), e.span);
    case ExprKind::IncDec:
      return Expr::incDec(lvalue(e.kids[0]), e.delta, e.prefix, e.span);
    case ExprKind::Call: {
      std::vector<Expr> args;
      bool changed = false;
      for (const auto &a : e.kids) {
        args.push_back(rw(a));
        if (a.type.isPointer() && !cast::structuralEqual(a, args.back()))
          changed = true;
      }
      if (changed)
        count("call-site");
      return Expr::call(e.name, std::move(args), e.span);
    }
    case ExprKind::Alloc:
      return Expr::alloc(e.allocType, rw(e.kids[0]), e.span);
    case ExprKind::Deref:
      return Expr::subscript(rw(e.kids[0]), Expr::intLit(0, e.span), e.span);
    case ExprKind::AddrOf:
      return materialize(e);
    }
    return e;
  }

  // Rebinding p = rhs for a decidable p.
  std::vector<Stmt> rebind(const Expr &lhs, const Expr &rhs, const SourceSpan &span) {
    Split s = decompose(rhs);
    const std::string &adj = names_.at(lhs.declId);
    Expr off = s.off ? std::move(*s.off) : Expr::intLit(0, span);
    if (s.base.kind == ExprKind::Ident && s.base.declId == lhs.declId) {
      count("move");
      return {Stmt::assign(Expr::ident(adj, span), AssignOp::Assign, std::move(off), span)};
    }
    count("pointer-assign");
    std::vector<Stmt> out;
    if (mentions(off, lhs.name, adj)) {
      std::string tmp = freshName(adj, taken_);
      out.push_back(Stmt::decl(tmp, kAdjType, std::move(off), span));
      off = Expr::ident(tmp, span);
    }
    out.push_back(Stmt::assign(lhs, AssignOp::Assign, std::move(s.base), span));
    out.push_back(Stmt::assign(Expr::ident(adj, span), AssignOp::Assign, std::move(off), span));
    return out;
  }

  std::vector<Stmt> simple(const Stmt &s) {
    switch (s.kind) {
    case StmtKind::Decl: {
      if (!an_.decidable.count(s.declId)) {
        std::optional<Expr> init;
        if (s.hasInit())
          init = rw(s.init());
        Stmt d = Stmt::decl(s.name, s.declType, std::move(init), s.span);
        return {std::move(d)};
      }
      std::optional<Expr> base;
      Expr off = Expr::intLit(0, s.span);
      if (s.hasInit()) {
        count("pointer-assign");
        Split sp = decompose(s.init());
        base = std::move(sp.base);
        if (sp.off)
          off = std::move(*sp.off);
      }
      std::vector<Stmt> out;
      out.push_back(Stmt::decl(s.name, s.declType, std::move(base), s.span));
      out.push_back(Stmt::decl(names_.at(s.declId), kAdjType, std::move(off), s.span));
      return out;
    }
    case StmtKind::Assign: {
      const Expr &lhs = s.lhs();
      if (inD(lhs)) {
        if (s.assignOp == AssignOp::Assign)
          return rebind(lhs, s.rhs(), s.span);
        count("move");
        return {Stmt::assign(adjRef(lhs.declId, lhs.span), s.assignOp, rw(s.rhs()), s.span)};
      }
      return {Stmt::assign(lvalue(lhs), s.assignOp, rw(s.rhs()), s.span)};
    }
    case StmtKind::IncDec: {
      const Expr &t = s.exprs[0];
      if (inD(t)) {
        count("move");
        return {Stmt::incDec(adjRef(t.declId, t.span), s.delta, s.span)};
      }
      return {Stmt::incDec(lvalue(t), s.delta, s.span)};
    }
    case StmtKind::ExprStmt:
      return {Stmt::exprStmt(rw(s.exprs[0]), s.span)};
    default:
      return {};
    }
  }

  std::vector<Stmt> stmt(const Stmt &s) {
    std::vector<Stmt> out;
    switch (s.kind) {
    case StmtKind::Decl:
    case StmtKind::Assign:
    case StmtKind::IncDec:
    case StmtKind::ExprStmt:
      out = simple(s);
      break;
    case StmtKind::Return: {
      std::optional<Expr> v;
      if (!s.exprs.empty())
        v = rw(s.exprs[0]);
      out.push_back(Stmt::returnStmt(std::move(v), s.span));
      break;
    }
    case StmtKind::Block:
      out.push_back(Stmt::block(body(s.body), s.span));
      break;
    case StmtKind::If: {
      std::optional<std::vector<Stmt>> elseBody;
      Expr c = rw(s.cond());
      std::vector<Stmt> thenBody = body(s.body);
      if (s.hasElse)
        elseBody = body(s.elseBody);
      out.push_back(Stmt::ifStmt(std::move(c), std::move(thenBody), std::move(elseBody), s.span));
      break;
    }
    case StmtKind::While: {
      Expr c = rw(s.cond());
      out.push_back(Stmt::whileLoop(std::move(c), body(s.body), s.span));
      break;
    }
    case StmtKind::For: {
      std::optional<Stmt> init;
      if (!s.forInit.empty()) {
        const Stmt &i0 = s.forInit[0];
        std::vector<Stmt> is = simple(i0);
        if (is.size() == 1) {
          init = std::move(is[0]);
        } else if (i0.kind == StmtKind::Decl) {
          init = std::move(is[0]);
          out.insert(out.end(), std::make_move_iterator(is.begin() + 1), std::make_move_iterator(is.end()));
        } else {
          out.insert(out.end(), std::make_move_iterator(is.begin()), std::make_move_iterator(is.end()));
        }
      }
      Expr c = rw(s.cond());
      std::vector<Stmt> b = body(s.body);
      std::optional<Stmt> step;
      if (!s.forStep.empty()) {
        std::vector<Stmt> ss = simple(s.forStep[0]);
        if (ss.size() == 1)
          step = std::move(ss[0]);
        else
          b.insert(b.end(), std::make_move_iterator(ss.begin()), std::make_move_iterator(ss.end()));
      }
      out.push_back(Stmt::forLoop(std::move(init), std::move(c), std::move(step), std::move(b), s.span));
      break;
    }
    }
    auto r = an_.resetAfter.find(&s);
    if (r != an_.resetAfter.end())
      for (int id : r->second)
        out.push_back(Stmt::assign(adjRef(id, s.span), AssignOp::Assign, Expr::intLit(0, s.span), s.span));
    return out;
  }

  std::vector<Stmt> body(const std::vector<Stmt> &b) {
    std::vector<Stmt> out;
    for (const auto &s : b) {
      std::vector<Stmt> r = stmt(s);
      out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    return out;
  }

  const Function &fn_;
  const detail::FunctionAnalysis &an_;
  const std::map<int, std::string> &names_;
  std::set<std::string> &taken_;
  std::map<std::string, int> &counts_;
};

} // namespace

TransformResult transform(const cast::TranslationUnit &tu, const effects::EffectDatabase &db) {
  cast::TranslationUnit norm = normalizeDerefs(tu);
  TransformResult result;
  result.tu.file = norm.file;
  result.tu.records = norm.records;
  for (const char *k : {"deref", "subscript", "move", "pointer-assign", "call-site"})
    result.diagnostics.rewrittenSites[k] = 0;

  std::set<std::string> taken = identifiersOf(norm);
  std::vector<detail::FunctionAnalysis> analyses;
  std::vector<std::map<int, std::string>> names;
  for (const auto &fn : norm.functions) {
    analyses.push_back(fn.hasBody ? detail::analyze(fn, db) : detail::FunctionAnalysis{});
    std::map<int, std::string> fnNames;
    const auto &an = analyses.back();
    for (const auto &[id, verdict] : an.verdicts) {
      const auto &var = fn.vars[id];
      PointerClass pc{fn.name, var.name, id, var.span, verdict, {}};
      auto ev = an.evidence.find(id);
      if (ev != an.evidence.end())
        pc.evidence = ev->second;
      if (verdict == Verdict::Decidable) {
        fnNames[id] = freshName(var.name, taken);
        result.plan.mapping.push_back({fn.name, var.name, id, fnNames[id]});
      } else {
        result.diagnostics.backedOff.push_back(
            {fn.name, var.name, verdict, pc.evidence.empty() ? var.span : pc.evidence.front()});
      }
      result.plan.classes.push_back(std::move(pc));
    }
    names.push_back(std::move(fnNames));
  }
  for (std::size_t i = 0; i < norm.functions.size(); ++i) {
    const Function &fn = norm.functions[i];
    if (!fn.hasBody) {
      result.tu.functions.push_back(fn);
      continue;
    }
    result.tu.functions.push_back(
        Rewriter(fn, analyses[i], names[i], taken, result.diagnostics.rewrittenSites).run());
  }
  try {
    cast::typecheck(result.tu);
  } catch (const cast::FrontendError &e) {
    throw TransformError(std::string("transformed unit is ill-formed: ") + e.what());
  }
  return result;
}

} // namespace adj::adjunct
