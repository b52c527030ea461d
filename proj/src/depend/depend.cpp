// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/depend/depend.hpp"

#include "poly.hpp"

#include "adj/cast/cast.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace adj::depend {

using cast::AssignOp;
using cast::BinaryOp;
using cast::Expr;
using cast::ExprKind;
using cast::Function;
using cast::Stmt;
using cast::StmtKind;
using detail::Poly;

const char *verdictName(Verdict v) {
  switch (v) {
  case Verdict::Parallel: return "parallel";
  case Verdict::Serial: return "serial";
  case Verdict::Unknown: return "unknown";
  }
  return "?";
}

const char *accessKindName(AccessKind k) { return k == AccessKind::Read ? "read" : "write"; }

const LoopReport *DependenceReport::atLine(std::uint32_t line) const {
  for (const auto &l : loops)
    if (l.span.line == line)
      return &l;
  return nullptr;
}

namespace {

constexpr int kAfterBody = INT_MAX;

bool isLoop(const Stmt &s) { return s.kind == StmtKind::For || s.kind == StmtKind::While; }

template <class F> void forEachExpr(const Expr &e, F &&f) {
  f(e);
  for (const auto &k : e.kids)
    forEachExpr(k, f);
}

template <class F> void forEachStmt(const std::vector<Stmt> &body, F &&f) {
  for (const auto &s : body) {
    f(s);
    forEachStmt(s.forInit, f);
    forEachStmt(s.forStep, f);
    forEachStmt(s.body, f);
    forEachStmt(s.elseBody, f);
  }
}

// Expressions of one statement, without nested statements.
template <class F> void forEachOwnExpr(const Stmt &s, F &&f) {
  for (const auto &e : s.exprs)
    forEachExpr(e, f);
}

// Every statement of the loop: header statements, body and nested.
template <class F> void forEachLoopStmt(const Stmt &loop, bool withInit, F &&f) {
  if (withInit)
    forEachStmt(loop.forInit, f);
  forEachStmt(loop.forStep, f);
  forEachStmt(loop.body, f);
}

// ---------------------------------------------------------------------------
// Container identity: union-find over pointer variables and address-taken
// variables. Pointers loaded from memory may alias anything.

class Containers {
public:
  Containers(const Function &fn, const effects::EffectDatabase &db) : fn_(fn), db_(db) {
    std::size_t n = fn.vars.size();
    parent_.resize(2 * n);
    std::iota(parent_.begin(), parent_.end(), 0);
    unknown_.assign(2 * n, false);
    forEachStmt(fn.body, [&](const Stmt &s) { scan(s); });
  }

  int pointerAtom(int declId) const { return declId; }
  int addressAtom(int declId) const { return static_cast<int>(fn_.vars.size()) + declId; }

  int find(int a) const {
    while (parent_[a] != a)
      a = parent_[a];
    return a;
  }

  bool unknownOrigin(int cls) const {
    for (std::size_t a = 0; a < parent_.size(); ++a)
      if (unknown_[a] && find(static_cast<int>(a)) == cls)
        return true;
    return false;
  }

  std::vector<int> members(int cls) const {
    std::vector<int> out;
    for (std::size_t a = 0; a < parent_.size(); ++a)
      if (find(static_cast<int>(a)) == cls)
        out.push_back(static_cast<int>(a));
    return out;
  }

  /// Variable behind an atom.
  int varOf(int atom) const {
    int n = static_cast<int>(fn_.vars.size());
    return atom < n ? atom : atom - n;
  }

  std::string name(int cls) const {
    int n = static_cast<int>(fn_.vars.size());
    int best = members(cls).front();
    return best < n ? fn_.vars[best].name : "&" + fn_.vars[best - n].name;
  }

  /// Atoms a pointer expression may be based on; nullopt when unknown.
  std::optional<std::vector<int>> roots(const Expr &e) const {
    switch (e.kind) {
    case ExprKind::Ident:
      if (e.declId >= 0 && fn_.vars[e.declId].type.isPointer())
        return std::vector<int>{pointerAtom(e.declId)};
      return std::vector<int>{};
    case ExprKind::Binary:
      if (e.kids[0].type.isPointer())
        return roots(e.kids[0]);
      if (e.kids[1].type.isPointer())
        return roots(e.kids[1]);
      return std::vector<int>{};
    case ExprKind::IncDec:
      return roots(e.kids[0]);
    case ExprKind::AddrOf: {
      const Expr &k = e.kids[0];
      if (k.kind == ExprKind::Ident)
        return std::vector<int>{addressAtom(k.declId)};
      if (k.kind == ExprKind::Subscript || k.kind == ExprKind::Deref)
        return roots(k.kids[0]);
      if (k.kind == ExprKind::Member && k.throughPointer)
        return roots(k.kids[0]);
      return std::nullopt;
    }
    case ExprKind::Alloc:
      return std::vector<int>{};
    case ExprKind::Call: {
      if (!e.type.isPointer())
        return std::vector<int>{};
      std::vector<int> out;
      for (const auto &a : e.kids)
        if (a.type.isPointer()) {
          auto r = roots(a);
          if (!r)
            return std::nullopt;
          out.insert(out.end(), r->begin(), r->end());
        }
      return out;
    }
    default:
      return std::nullopt;
    }
  }

private:
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return;
    if (a < b)
      parent_[b] = a;
    else
      parent_[a] = b;
  }

  void bind(int declId, const Expr &value) {
    if (declId < 0 || !fn_.vars[declId].type.isPointer())
      return;
    auto r = roots(value);
    if (!r) {
      unknown_[pointerAtom(declId)] = true;
      return;
    }
    for (int a : *r)
      unite(pointerAtom(declId), a);
  }

  void scan(const Stmt &s) {
    if (s.kind == StmtKind::Decl && s.hasInit())
      bind(s.declId, s.init());
    if (s.kind == StmtKind::Assign && s.lhs().kind == ExprKind::Ident && s.assignOp == AssignOp::Assign)
      bind(s.lhs().declId, s.rhs());
    forEachOwnExpr(s, [&](const Expr &e) {
      if (e.kind != ExprKind::Call)
        return;
      bool delegates = db_.isAllocationDelegation(e.name);
      for (const auto &a : e.kids)
        if (delegates && a.kind == ExprKind::AddrOf && a.kids[0].kind == ExprKind::Ident &&
            fn_.vars[a.kids[0].declId].type.isPointer())
          unknown_[pointerAtom(a.kids[0].declId)] = true;
    });
  }

  const Function &fn_;
  const effects::EffectDatabase &db_;
  std::vector<int> parent_;
  std::vector<bool> unknown_;
};

// ---------------------------------------------------------------------------
// Per-loop facts.

struct LoopFacts {
  std::map<int, int> writes;  ///< declId -> write count in the loop (init excluded)
  std::set<int> locals;       ///< declared inside the loop, including its own init
  bool hasReturn = false;
};

void noteWrites(const Function &fn, const Stmt &s, LoopFacts &f) {
  (void)fn;
  if (s.kind == StmtKind::Decl) {
    f.locals.insert(s.declId);
    f.writes[s.declId]++;
  }
  if (s.kind == StmtKind::Assign && s.lhs().kind == ExprKind::Ident)
    f.writes[s.lhs().declId]++;
  if (s.kind == StmtKind::IncDec && s.exprs[0].kind == ExprKind::Ident)
    f.writes[s.exprs[0].declId]++;
  if (s.kind == StmtKind::Return)
    f.hasReturn = true;
  forEachOwnExpr(s, [&](const Expr &e) {
    if (e.kind == ExprKind::IncDec && e.kids[0].kind == ExprKind::Ident)
      f.writes[e.kids[0].declId]++;
    if (e.kind == ExprKind::Call)
      for (const auto &a : e.kids)
        if (a.kind == ExprKind::AddrOf && a.kids[0].kind == ExprKind::Ident)
          f.writes[a.kids[0].declId]++;
  });
}

LoopFacts loopFacts(const Function &fn, const Stmt &loop) {
  LoopFacts f;
  forEachLoopStmt(loop, false, [&](const Stmt &s) { noteWrites(fn, s, f); });
  if (loop.kind == StmtKind::For)
    for (const auto &i : loop.forInit)
      if (i.kind == StmtKind::Decl)
        f.locals.insert(i.declId);
  forEachExpr(loop.cond(), [&](const Expr &e) {
    if (e.kind == ExprKind::IncDec && e.kids[0].kind == ExprKind::Ident)
      f.writes[e.kids[0].declId]++;
  });
  return f;
}

bool invariantExpr(const Expr &e, const LoopFacts &f) {
  bool ok = true;
  forEachExpr(e, [&](const Expr &x) {
    switch (x.kind) {
    case ExprKind::IntLit:
      return;
    case ExprKind::Ident:
      if (f.writes.count(x.declId) || f.locals.count(x.declId))
        ok = false;
      return;
    case ExprKind::Binary:
      if (x.binOp != BinaryOp::Add && x.binOp != BinaryOp::Sub && x.binOp != BinaryOp::Mul)
        ok = false;
      return;
    case ExprKind::Unary:
      if (x.unOp != cast::UnaryOp::Neg)
        ok = false;
      return;
    default:
      ok = false;
    }
  });
  return ok;
}

struct IvSite {
  InductionVar iv;
  int declId = -1;
  int updateIndex = kAfterBody;
};

// v += s, v -= s, v++, v--, v = v + s, v = s + v, v = v - s
std::optional<std::pair<int, Expr>> updateOf(const Stmt &s) {
  if (s.kind == StmtKind::IncDec && s.exprs[0].kind == ExprKind::Ident)
    return std::make_pair(s.exprs[0].declId, Expr::intLit(s.delta, s.span));
  if (s.kind == StmtKind::ExprStmt && s.exprs[0].kind == ExprKind::IncDec &&
      s.exprs[0].kids[0].kind == ExprKind::Ident)
    return std::make_pair(s.exprs[0].kids[0].declId, Expr::intLit(s.exprs[0].delta, s.span));
  if (s.kind != StmtKind::Assign || s.lhs().kind != ExprKind::Ident)
    return std::nullopt;
  int v = s.lhs().declId;
  const Expr &r = s.rhs();
  auto neg = [&](const Expr &x) {
    if (x.kind == ExprKind::IntLit)
      return Expr::intLit(-x.intValue, x.span);
    return Expr::unary(cast::UnaryOp::Neg, x, x.span);
  };
  if (s.assignOp == AssignOp::AddAssign)
    return std::make_pair(v, r);
  if (s.assignOp == AssignOp::SubAssign)
    return std::make_pair(v, neg(r));
  if (r.kind != ExprKind::Binary)
    return std::nullopt;
  auto isV = [&](const Expr &x) { return x.kind == ExprKind::Ident && x.declId == v; };
  if (r.binOp == BinaryOp::Add && isV(r.kids[0]))
    return std::make_pair(v, r.kids[1]);
  if (r.binOp == BinaryOp::Add && isV(r.kids[1]))
    return std::make_pair(v, r.kids[0]);
  if (r.binOp == BinaryOp::Sub && isV(r.kids[0]))
    return std::make_pair(v, neg(r.kids[1]));
  return std::nullopt;
}

std::vector<IvSite> inductionSites(const Function &fn, const Stmt &loop, const LoopFacts &f) {
  std::vector<std::pair<const Stmt *, int>> cands;
  for (std::size_t i = 0; i < loop.body.size(); ++i)
    cands.emplace_back(&loop.body[i], static_cast<int>(i));
  for (const auto &st : loop.forStep)
    cands.emplace_back(&st, kAfterBody);
  std::vector<IvSite> out;
  for (auto [s, index] : cands) {
    auto u = updateOf(*s);
    if (!u)
      continue;
    int v = u->first;
    const auto &var = fn.vars[v];
    if (!var.type.isInt() || var.addressTaken)
      continue;
    auto w = f.writes.find(v);
    if (w == f.writes.end() || w->second != 1)
      continue;
    bool bodyLocal = false;
    forEachStmt(loop.body, [&](const Stmt &x) {
      if (x.kind == StmtKind::Decl && x.declId == v)
        bodyLocal = true;
    });
    if (bodyLocal || !invariantExpr(u->second, f))
      continue;
    IvSite site;
    site.declId = v;
    site.updateIndex = index;
    site.iv.variable = var.name;
    site.iv.loop = loop.span;
    site.iv.stride = u->second;
    site.iv.start = Expr::ident(var.name, var.span);
    for (const auto &i : loop.forInit) {
      if (i.kind == StmtKind::Decl && i.declId == v && i.hasInit())
        site.iv.start = i.init();
      if (i.kind == StmtKind::Assign && i.assignOp == AssignOp::Assign && i.lhs().kind == ExprKind::Ident &&
          i.lhs().declId == v)
        site.iv.start = i.rhs();
    }
    out.push_back(std::move(site));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Access summaries.

struct Range {
  bool affine = false;
  Poly lo, hi; ///< half-open, in t and invariants
  Poly slope, a, b; ///< lo = a + slope*t, hi = b + slope*t
};

struct Record {
  int cls = -1; ///< -1: unknown container
  AccessKind kind = AccessKind::Read;
  bool whole = false;
  bool annotated = true;
  bool nested = false; ///< inside a conditional or inner loop
  Range range;
  cast::SourceSpan site;
};

struct InnerLoop {
  int counter = -1;
  std::optional<Poly> lo, hi; ///< inclusive bounds of the counter
};

const std::string kIter = "t";

class Summarizer {
public:
  Summarizer(const Function &fn, const Stmt &loop, const effects::EffectDatabase &db, const Containers &cont)
      : fn_(fn), loop_(loop), db_(db), cont_(cont), facts_(loopFacts(fn, loop)) {
    for (auto &s : inductionSites(fn, loop, facts_))
      ivs_.emplace(s.declId, std::move(s));
  }

  const LoopFacts &facts() const { return facts_; }
  const std::map<int, IvSite> &ivs() const { return ivs_; }

  std::vector<Record> run() {
    top_ = 0;
    visitExpr(loop_.cond(), Mode::Read);
    for (std::size_t i = 0; i < loop_.body.size(); ++i) {
      top_ = static_cast<int>(i);
      stmt(loop_.body[i]);
    }
    top_ = kAfterBody;
    for (const auto &s : loop_.forStep)
      stmt(s);
    return std::move(records_);
  }

private:
  enum class Mode { Read, Write, ReadWrite, Address };

  struct DefSite {
    const Expr *init;
    int top;
    std::vector<InnerLoop> inner;
  };

  std::optional<Poly> startPoly(const IvSite &s) {
    const Expr &e = s.iv.start;
    bool ok = true;
    forEachExpr(e, [&](const Expr &x) {
      if (x.kind == ExprKind::Ident && (facts_.writes.count(x.declId) || facts_.locals.count(x.declId)))
        ok = ok && x.declId == s.declId;
    });
    if (e.kind == ExprKind::Ident && e.declId == s.declId)
      return Poly::symbol(s.iv.variable + "@0");
    if (ok)
      if (auto p = polyOf(e, top_, {}, false))
        return p;
    return Poly::symbol(s.iv.variable + "@0");
  }

  std::optional<Poly> polyOf(const Expr &e, int top, const std::vector<InnerLoop> &inner, bool expandIvs = true) {
    switch (e.kind) {
    case ExprKind::IntLit:
      return Poly::constant(e.intValue);
    case ExprKind::Ident: {
      int v = e.declId;
      if (!fn_.vars[v].type.isInt())
        return std::nullopt;
      if (expandIvs) {
        auto iv = ivs_.find(v);
        if (iv != ivs_.end()) {
          auto start = startPoly(iv->second);
          auto stride = polyOf(iv->second.iv.stride, top, inner);
          if (!start || !stride)
            return std::nullopt;
          Poly value = *start + *stride * Poly::symbol(kIter);
          if (top > iv->second.updateIndex && top != kAfterBody)
            value = value + *stride;
          if (top == kAfterBody && iv->second.updateIndex != kAfterBody)
            value = value + *stride;
          return value;
        }
      }
      for (const auto &l : inner)
        if (l.counter == v)
          return Poly::symbol("#" + fn_.vars[v].name);
      auto def = defs_.find(v);
      if (def != defs_.end() && facts_.writes[v] == 1)
        return polyOf(*def->second.init, def->second.top, def->second.inner);
      if (!facts_.writes.count(v) && !facts_.locals.count(v) && !fn_.vars[v].addressTaken)
        return Poly::symbol(fn_.vars[v].name);
      return std::nullopt;
    }
    case ExprKind::Binary: {
      if (e.binOp != BinaryOp::Add && e.binOp != BinaryOp::Sub && e.binOp != BinaryOp::Mul)
        return std::nullopt;
      auto l = polyOf(e.kids[0], top, inner, expandIvs);
      auto r = polyOf(e.kids[1], top, inner, expandIvs);
      if (!l || !r)
        return std::nullopt;
      try {
        if (e.binOp == BinaryOp::Add)
          return *l + *r;
        if (e.binOp == BinaryOp::Sub)
          return *l - *r;
        return *l * *r;
      } catch (const std::overflow_error &) {
        return std::nullopt;
      }
    }
    case ExprKind::Unary:
      if (e.unOp == cast::UnaryOp::Neg)
        if (auto p = polyOf(e.kids[0], top, inner, expandIvs))
          return -*p;
      return std::nullopt;
    default:
      return std::nullopt;
    }
  }

  // Container class and element offset of a pointer-valued expression.
  std::pair<int, std::optional<Poly>> base(const Expr &e) {
    switch (e.kind) {
    case ExprKind::Ident: {
      int v = e.declId;
      int cls = cont_.find(cont_.pointerAtom(v));
      if (cont_.unknownOrigin(cls))
        return {-1, std::nullopt};
      if (facts_.locals.count(v)) {
        auto def = defs_.find(v);
        if (def != defs_.end() && facts_.writes[v] == 1) {
          auto inner = base(*def->second.init);
          return {cls, inner.second};
        }
        return {cls, std::nullopt};
      }
      if (facts_.writes.count(v) || fn_.vars[v].addressTaken)
        return {cls, std::nullopt};
      return {cls, Poly::constant(0)};
    }
    case ExprKind::Binary: {
      bool left = e.kids[0].type.isPointer();
      auto b = base(left ? e.kids[0] : e.kids[1]);
      auto n = polyOf(left ? e.kids[1] : e.kids[0], top_, inner_);
      if (!b.second || !n)
        return {b.first, std::nullopt};
      return {b.first, e.binOp == BinaryOp::Sub ? *b.second - *n : *b.second + *n};
    }
    case ExprKind::AddrOf: {
      const Expr &k = e.kids[0];
      if (k.kind == ExprKind::Ident)
        return {cont_.find(cont_.addressAtom(k.declId)), Poly::constant(0)};
      if (k.kind == ExprKind::Subscript) {
        auto b = base(k.kids[0]);
        auto i = polyOf(k.kids[1], top_, inner_);
        if (!b.second || !i)
          return {b.first, std::nullopt};
        return {b.first, *b.second + *i};
      }
      return {-1, std::nullopt};
    }
    case ExprKind::Alloc:
      return {-1, std::nullopt};
    default: {
      auto r = cont_.roots(e);
      if (r && r->size() == 1) {
        int cls = cont_.find(r->front());
        if (!cont_.unknownOrigin(cls))
          return {cls, std::nullopt};
      }
      return {-1, std::nullopt};
    }
    }
  }

  Range rangeOf(const std::optional<Poly> &offset) {
    Range r;
    if (!offset)
      return r;
    Poly lo = *offset, hi = *offset;
    for (auto it = inner_.rbegin(); it != inner_.rend(); ++it) {
      std::string sym = "#" + fn_.vars[it->counter].name;
      auto sl = lo.splitLinear(sym);
      auto sh = hi.splitLinear(sym);
      if (!sl || !sh)
        return r;
      if (sl->first != Poly() || sh->first != Poly()) {
        if (!it->lo || !it->hi || !sl->first.isConstant() || !sh->first.isConstant())
          return r;
        long cl = sl->first.constantValue(), ch = sh->first.constantValue();
        lo = sl->second + sl->first * (cl >= 0 ? *it->lo : *it->hi);
        hi = sh->second + sh->first * (ch >= 0 ? *it->hi : *it->lo);
      }
    }
    for (const auto &l : inner_)
      if (lo.mentions("#" + fn_.vars[l.counter].name) || hi.mentions("#" + fn_.vars[l.counter].name))
        return r;
    hi = hi + Poly::constant(1);
    auto sl = lo.splitLinear(kIter);
    auto sh = hi.splitLinear(kIter);
    if (!sl || !sh || sl->first != sh->first || sl->first.mentions(kIter))
      return r;
    r.affine = true;
    r.lo = lo;
    r.hi = hi;
    r.slope = sl->first;
    r.a = sl->second;
    r.b = sh->second;
    return r;
  }

  void record(int cls, AccessKind kind, bool whole, bool annotated, Range range, const cast::SourceSpan &site) {
    Record r;
    r.cls = cls;
    r.kind = kind;
    r.whole = whole;
    r.annotated = annotated;
    r.nested = depth_ > 0;
    r.range = std::move(range);
    r.site = site;
    records_.push_back(std::move(r));
  }

  void access(const Expr &baseExpr, const std::optional<Poly> &index, Mode mode, const cast::SourceSpan &site) {
    auto [cls, off] = base(baseExpr);
    std::optional<Poly> at;
    if (off && index)
      at = *off + *index;
    Range r = rangeOf(at);
    if (mode == Mode::Read || mode == Mode::ReadWrite)
      record(cls, AccessKind::Read, false, true, r, site);
    if (mode == Mode::Write || mode == Mode::ReadWrite)
      record(cls, AccessKind::Write, false, true, r, site);
  }

  void visitExpr(const Expr &e, Mode mode) {
    switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::FloatLit:
      return;
    case ExprKind::Ident:
      if (fn_.vars[e.declId].addressTaken && mode != Mode::Address) {
        Expr addr = Expr::addrOf(e, e.span);
        addr.kids[0].declId = e.declId;
        access(addr, Poly::constant(0), mode, e.span);
      }
      return;
    case ExprKind::Subscript:
    case ExprKind::Deref: {
      const Expr &b = e.kids[0];
      std::optional<Poly> idx = Poly::constant(0);
      if (e.kind == ExprKind::Subscript) {
        visitExpr(e.kids[1], Mode::Read);
        idx = polyOf(e.kids[1], top_, inner_);
      }
      visitExpr(b, Mode::Read);
      if (mode != Mode::Address)
        access(b, idx, mode, e.span);
      return;
    }
    case ExprKind::Member:
      if (!e.throughPointer) {
        visitExpr(e.kids[0], mode);
        return;
      }
      visitExpr(e.kids[0], Mode::Read);
      if (mode != Mode::Address)
        access(e.kids[0], Poly::constant(0), mode, e.span);
      return;
    case ExprKind::AddrOf:
      visitExpr(e.kids[0], Mode::Address);
      return;
    case ExprKind::IncDec:
      visitExpr(e.kids[0], Mode::ReadWrite);
      return;
    case ExprKind::Call: {
      const auto *ann = db_.find(e.name);
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        const Expr &a = e.kids[i];
        visitExpr(a, a.kind == ExprKind::AddrOf ? Mode::Address : Mode::Read);
        if (!a.type.isPointer())
          continue;
        effects::Effect eff = db_.effectOf(e.name, static_cast<int>(i));
        auto [cls, off] = base(a);
        (void)off;
        if (eff != effects::Effect::Write)
          record(cls, AccessKind::Read, true, ann != nullptr, Range{}, a.span);
        if (eff != effects::Effect::Read)
          record(cls, AccessKind::Write, true, ann != nullptr, Range{}, a.span);
      }
      return;
    }
    default:
      for (const auto &k : e.kids)
        visitExpr(k, Mode::Read);
      return;
    }
  }

  std::optional<InnerLoop> innerCounter(const Stmt &k) {
    LoopFacts kf = loopFacts(fn_, k);
    auto sites = inductionSites(fn_, k, kf);
    const Expr &c = k.cond();
    if (c.kind != ExprKind::Binary || !cast::isComparison(c.binOp))
      return InnerLoop{};
    for (const auto &s : sites) {
      if (s.iv.stride.kind != ExprKind::IntLit || std::abs(s.iv.stride.intValue) != 1)
        continue;
      long step = s.iv.stride.intValue;
      bool left = c.kids[0].kind == ExprKind::Ident && c.kids[0].declId == s.declId;
      bool right = c.kids[1].kind == ExprKind::Ident && c.kids[1].declId == s.declId;
      if (left == right)
        continue;
      BinaryOp op = c.binOp;
      if (right) {
        switch (op) {
        case BinaryOp::Lt: op = BinaryOp::Gt; break;
        case BinaryOp::Gt: op = BinaryOp::Lt; break;
        case BinaryOp::Le: op = BinaryOp::Ge; break;
        case BinaryOp::Ge: op = BinaryOp::Le; break;
        default: break;
        }
      }
      const Expr &bound = left ? c.kids[1] : c.kids[0];
      if (!invariantExpr(bound, kf))
        continue;
      InnerLoop l;
      l.counter = s.declId;
      auto b = polyOf(bound, top_, inner_);
      std::optional<Poly> st;
      if (!(s.iv.start.kind == ExprKind::Ident && s.iv.start.declId == s.declId))
        st = polyOf(s.iv.start, top_, inner_);
      if (!b || !st)
        return l;
      if (step > 0 && op == BinaryOp::Lt) {
        l.lo = *st;
        l.hi = *b - Poly::constant(1);
      } else if (step > 0 && op == BinaryOp::Le) {
        l.lo = *st;
        l.hi = *b;
      } else if (step < 0 && op == BinaryOp::Gt) {
        l.lo = *b + Poly::constant(1);
        l.hi = *st;
      } else if (step < 0 && op == BinaryOp::Ge) {
        l.lo = *b;
        l.hi = *st;
      }
      return l;
    }
    return InnerLoop{};
  }

  void stmt(const Stmt &s) {
    switch (s.kind) {
    case StmtKind::Decl:
      if (s.hasInit()) {
        visitExpr(s.init(), Mode::Read);
        defs_[s.declId] = DefSite{&s.init(), top_, inner_};
      }
      if (fn_.vars[s.declId].addressTaken) {
        Expr id = Expr::ident(s.name, s.span);
        id.declId = s.declId;
        visitExpr(id, Mode::Write);
      }
      return;
    case StmtKind::Assign:
      visitExpr(s.rhs(), Mode::Read);
      visitExpr(s.lhs(), s.assignOp == AssignOp::Assign ? Mode::Write : Mode::ReadWrite);
      return;
    case StmtKind::IncDec:
      visitExpr(s.exprs[0], Mode::ReadWrite);
      return;
    case StmtKind::ExprStmt:
    case StmtKind::Return:
      for (const auto &e : s.exprs)
        visitExpr(e, Mode::Read);
      return;
    case StmtKind::Block:
      for (const auto &b : s.body)
        stmt(b);
      return;
    case StmtKind::If:
      visitExpr(s.cond(), Mode::Read);
      ++depth_;
      for (const auto &b : s.body)
        stmt(b);
      for (const auto &b : s.elseBody)
        stmt(b);
      --depth_;
      return;
    case StmtKind::For:
    case StmtKind::While: {
      for (const auto &i : s.forInit)
        stmt(i);
      ++depth_;
      auto l = innerCounter(s);
      inner_.push_back(l ? *l : InnerLoop{});
      visitExpr(s.cond(), Mode::Read);
      for (const auto &b : s.body)
        stmt(b);
      for (const auto &st : s.forStep)
        stmt(st);
      inner_.pop_back();
      --depth_;
      return;
    }
    }
  }

  const Function &fn_;
  const Stmt &loop_;
  const effects::EffectDatabase &db_;
  const Containers &cont_;
  LoopFacts facts_;
  std::map<int, IvSite> ivs_;
  std::map<int, DefSite> defs_;
  std::vector<InnerLoop> inner_;
  std::vector<Record> records_;
  int top_ = 0;
  int depth_ = 0;
};

// ---------------------------------------------------------------------------
// Verdicts.

enum class PairResult { Disjoint, Conflict, Unknown };

bool nonNegative(const Poly &p) { return p.isConstant() && p.constantValue() >= 0; }
bool positive(const Poly &p) { return p.isConstant() && p.constantValue() > 0; }

PairResult compare(const Range &x, const Range &y) {
  if (x.slope != y.slope)
    return PairResult::Unknown;
  const Poly &slope = x.slope;
  Poly d1 = x.b - y.a; // end of x minus start of y
  Poly d2 = y.b - x.a;
  Poly w1 = x.b - x.a, w2 = y.b - y.a;
  if (slope == Poly()) {
    if (nonNegative(-d1) || nonNegative(-d2))
      return PairResult::Disjoint;
    if (positive(d1) && positive(d2) && positive(w1) && positive(w2))
      return PairResult::Conflict;
    return PairResult::Unknown;
  }
  if (nonNegative(slope - d1) && nonNegative(slope - d2))
    return PairResult::Disjoint;
  if (nonNegative(-slope - d1) && nonNegative(-slope - d2))
    return PairResult::Disjoint;
  if (slope.isConstant() && positive(w1) && positive(w2)) {
    long s = slope.constantValue();
    for (long d : {1L, -1L}) {
      Poly shift = Poly::constant(s * d);
      // y in a neighbouring iteration overlaps x
      if (positive(x.b - (y.a + shift)) && positive(y.b + shift - x.a))
        return PairResult::Conflict;
    }
  }
  return PairResult::Unknown;
}

struct Position {
  std::vector<const std::vector<Stmt> *> blocks;
  std::vector<std::size_t> index;
  std::vector<const Stmt *> loops; ///< enclosing loops
};

bool locate(const std::vector<Stmt> &body, const Stmt *target, Position &pos) {
  for (std::size_t i = 0; i < body.size(); ++i) {
    pos.blocks.push_back(&body);
    pos.index.push_back(i);
    const Stmt &s = body[i];
    if (&s == target)
      return true;
    if (isLoop(s))
      pos.loops.push_back(&s);
    for (const auto *sub : {&s.body, &s.elseBody})
      if (locate(*sub, target, pos))
        return true;
    if (isLoop(s))
      pos.loops.pop_back();
    pos.blocks.pop_back();
    pos.index.pop_back();
  }
  return false;
}

// Whether any variable of `atoms` is used after `loop` other than as a
// write-only call argument.
bool liveAfter(const Function &fn, const Stmt &loop, const std::set<int> &vars, const effects::EffectDatabase &db) {
  Position pos;
  if (!locate(fn.body, &loop, pos))
    return true;
  std::vector<const Stmt *> after;
  for (std::size_t lvl = 0; lvl < pos.blocks.size(); ++lvl) {
    const auto &blk = *pos.blocks[lvl];
    for (std::size_t i = pos.index[lvl] + 1; i < blk.size(); ++i)
      after.push_back(&blk[i]);
  }
  for (const Stmt *l : pos.loops)
    after.push_back(l);
  bool live = false;
  auto checkExpr = [&](const Expr &root) {
    std::function<void(const Expr &, bool)> walk = [&](const Expr &e, bool exempt) {
      if (e.kind == ExprKind::Ident && vars.count(e.declId) && !exempt)
        live = true;
      if (e.kind == ExprKind::Call) {
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
          const Expr &a = e.kids[i];
          bool writeOnly = db.effectOf(e.name, static_cast<int>(i)) == effects::Effect::Write &&
                           db.find(e.name) != nullptr && a.kind == ExprKind::Ident;
          walk(a, writeOnly);
        }
        return;
      }
      for (const auto &k : e.kids)
        walk(k, false);
    };
    walk(root, false);
  };
  for (const Stmt *s : after) {
    if (s == &loop)
      continue;
    std::vector<Stmt> one{*s};
    forEachStmt(one, [&](const Stmt &x) {
      if (&x == &loop)
        return;
      for (const auto &e : x.exprs)
        checkExpr(e);
    });
  }
  return live;
}

LoopReport analyzeLoop(const Function &fn, const Stmt &loop, const effects::EffectDatabase &db,
                       const Containers &cont) {
  LoopReport rep;
  rep.function = fn.name;
  rep.span = loop.span;
  Summarizer sum(fn, loop, db, cont);
  std::vector<Record> recs = sum.run();
  const LoopFacts &facts = sum.facts();
  for (const auto &[id, site] : sum.ivs()) {
    rep.inductionVars.push_back(site.iv);
    rep.evidence.push_back("induction " + site.iv.variable + " stride " + cast::print(site.iv.stride));
  }
  bool serial = false, unknown = false;
  auto blame = [&](bool isSerial, std::string why) {
    (isSerial ? serial : unknown) = true;
    rep.evidence.push_back(std::string(isSerial ? "serial: " : "unknown: ") + why);
  };

  if (facts.hasReturn)
    blame(false, "loop body may return");
  bool condOk = true;
  forEachExpr(loop.cond(), [&](const Expr &e) {
    if (e.kind == ExprKind::Subscript || e.kind == ExprKind::Deref || e.kind == ExprKind::Member ||
        e.kind == ExprKind::Call || e.kind == ExprKind::IncDec)
      condOk = false;
    if (e.kind == ExprKind::Ident && facts.writes.count(e.declId) && !sum.ivs().count(e.declId))
      condOk = false;
  });
  if (!condOk)
    blame(false, "loop condition depends on values written in the loop");

  // Scalars written in the loop.
  std::set<int> scalarWrites;
  for (const auto &[v, n] : facts.writes)
    if (!facts.locals.count(v) && !sum.ivs().count(v))
      scalarWrites.insert(v);
  for (int v : scalarWrites) {
    const auto &var = fn.vars[v];
    if (var.type.isPointer()) {
      blame(false, "pointer " + var.name + " is reassigned inside the loop");
      continue;
    }
    // Reduction: only "v += e" / "v -= e" / "v = v + e" updates, no other reads.
    bool reduction = true;
    int reads = 0, updates = 0;
    forEachLoopStmt(loop, false, [&](const Stmt &s) {
      bool isUpdate = false;
      if (s.kind == StmtKind::Assign && s.lhs().kind == ExprKind::Ident && s.lhs().declId == v) {
        auto u = updateOf(s);
        if (u && (s.assignOp != AssignOp::Assign || s.rhs().binOp != BinaryOp::Sub || true)) {
          isUpdate = true;
          ++updates;
          forEachExpr(u->second, [&](const Expr &e) {
            if (e.kind == ExprKind::Ident && e.declId == v)
              reduction = false;
          });
        } else {
          reduction = false;
        }
      } else if (s.kind == StmtKind::IncDec && s.exprs[0].kind == ExprKind::Ident && s.exprs[0].declId == v) {
        isUpdate = true;
        ++updates;
      }
      if (isUpdate)
        return;
      forEachOwnExpr(s, [&](const Expr &e) {
        if (e.kind == ExprKind::Ident && e.declId == v)
          ++reads;
      });
    });
    forEachExpr(loop.cond(), [&](const Expr &e) {
      if (e.kind == ExprKind::Ident && e.declId == v)
        ++reads;
    });
    if (reduction && reads == 0 && updates > 0 && !var.addressTaken) {
      rep.reduction = true;
      rep.evidence.push_back("reduction on " + var.name);
      continue;
    }
    // Carried when the first mention in program order is a read.
    bool firstIsRead = false, seen = false;
    forEachLoopStmt(loop, false, [&](const Stmt &s) {
      if (seen)
        return;
      bool mentioned = false;
      bool readHere = false;
      forEachOwnExpr(s, [&](const Expr &e) {
        if (e.kind == ExprKind::Ident && e.declId == v)
          mentioned = true;
      });
      if (s.kind == StmtKind::Decl && s.declId == v)
        mentioned = true;
      if (!mentioned)
        return;
      seen = true;
      if (s.kind == StmtKind::Assign && s.assignOp == AssignOp::Assign && s.lhs().kind == ExprKind::Ident &&
          s.lhs().declId == v) {
        forEachExpr(s.rhs(), [&](const Expr &e) {
          if (e.kind == ExprKind::Ident && e.declId == v)
            readHere = true;
        });
      } else {
        readHere = true;
      }
      firstIsRead = readHere;
    });
    blame(firstIsRead, "scalar " + var.name + (firstIsRead ? " carries a value across iterations"
                                                           : " is written inside the loop"));
  }

  // Containers.
  std::map<int, std::vector<const Record *>> byClass;
  for (const auto &r : recs)
    byClass[r.cls].push_back(&r);
  bool anyWrite = false;
  std::set<int> privateClasses;
  for (const auto &[cls, rs] : byClass) {
    if (cls < 0)
      continue;
    std::set<int> vars;
    bool allLocal = true;
    for (int atom : cont.members(cls)) {
      int v = cont.varOf(atom);
      vars.insert(v);
      if (!facts.locals.count(v))
        allLocal = false;
    }
    const Record *first = rs.front();
    bool firstWholeWrite = first->whole && first->kind == AccessKind::Write && !first->nested &&
                           first->annotated && !(rs.size() > 1 && rs[1]->site.line == first->site.line &&
                                                 rs[1]->site.column == first->site.column &&
                                                 rs[1]->kind == AccessKind::Read && false);
    if (allLocal) {
      privateClasses.insert(cls);
      rep.evidence.push_back("container " + cont.name(cls) + " is local to each iteration");
    } else if (firstWholeWrite && !liveAfter(fn, loop, vars, db)) {
      privateClasses.insert(cls);
      rep.evidence.push_back("container " + cont.name(cls) + " is overwritten each iteration and dead after the loop");
    }
  }
  for (const auto &[cls, rs] : byClass) {
    if (privateClasses.count(cls))
      continue;
    for (const Record *r : rs)
      if (r->kind == AccessKind::Write)
        anyWrite = true;
  }
  if (byClass.count(-1) && anyWrite)
    blame(false, "access through a pointer of unknown origin");

  for (const auto &[cls, rs] : byClass) {
    if (cls < 0 || privateClasses.count(cls))
      continue;
    std::string name = cont.name(cls);
    std::vector<const Record *> writes;
    for (const Record *r : rs)
      if (r->kind == AccessKind::Write)
        writes.push_back(r);
    if (writes.empty())
      continue;
    bool blocked = false;
    for (const Record *r : rs) {
      if (r->whole) {
        if (r->annotated && (r->kind == AccessKind::Write || !writes.empty())) {
          blame(true, "container " + name + " is accessed whole at " + r->site.str() + " and written each iteration");
        } else {
          blame(false, "call at " + r->site.str() + " may read or write all of " + name);
        }
        blocked = true;
        break;
      }
      if (!r->range.affine) {
        blame(false, "non-affine access to " + name + " at " + r->site.str());
        blocked = true;
        break;
      }
    }
    if (blocked)
      continue;
    bool proven = true;
    for (const Record *w : writes) {
      for (const Record *x : rs) {
        PairResult pr = compare(w->range, x->range);
        if (pr == PairResult::Disjoint)
          continue;
        proven = false;
        if (pr == PairResult::Conflict)
          blame(true, "container " + name + ": write at " + w->site.str() + " meets " +
                          accessKindName(x->kind) + " at " + x->site.str() + " in another iteration");
        else
          blame(false, "container " + name + ": cannot separate write at " + w->site.str() + " from " +
                           accessKindName(x->kind) + " at " + x->site.str());
        break;
      }
      if (!proven)
        break;
    }
    if (proven)
      rep.evidence.push_back("container " + name + ": writes are disjoint across iterations");
  }

  rep.verdict = serial ? Verdict::Serial : unknown ? Verdict::Unknown : Verdict::Parallel;
  return rep;
}

const Stmt *findLoopStmt(const std::vector<Stmt> &body, const Stmt &loop) {
  const Stmt *hit = nullptr;
  forEachStmt(body, [&](const Stmt &s) {
    if (&s == &loop)
      hit = &s;
  });
  return hit;
}

} // namespace

std::vector<InductionVar> findInduction(const Function &fn, const Stmt &loop) {
  LoopFacts f = loopFacts(fn, loop);
  std::vector<InductionVar> out;
  for (auto &s : inductionSites(fn, loop, f))
    out.push_back(std::move(s.iv));
  return out;
}

std::vector<AccessSummary> summarizeAccesses(const Function &fn, const Stmt &loop, const effects::EffectDatabase &db) {
  Containers cont(fn, db);
  (void)findLoopStmt;
  Summarizer sum(fn, loop, db, cont);
  std::vector<AccessSummary> out;
  for (const auto &r : sum.run()) {
    AccessSummary a;
    a.container = r.cls < 0 ? "?" : cont.name(r.cls);
    a.kind = r.kind;
    a.wholeContainer = r.whole;
    a.affine = r.range.affine;
    if (r.range.affine) {
      a.lo = r.range.lo.str();
      a.hi = r.range.hi.str();
    }
    a.site = r.site;
    out.push_back(std::move(a));
  }
  return out;
}

DependenceReport analyze(const cast::TranslationUnit &tu, const effects::EffectDatabase &db) {
  DependenceReport report;
  for (const auto &fn : tu.functions) {
    if (!fn.hasBody)
      continue;
    Containers cont(fn, db);
    forEachStmt(fn.body, [&](const Stmt &s) {
      if (isLoop(s))
        report.loops.push_back(analyzeLoop(fn, s, db, cont));
    });
  }
  return report;
}

} // namespace adj::depend
