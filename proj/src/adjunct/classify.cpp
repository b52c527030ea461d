// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "analysis.hpp"

#include "adj/cast/cast.hpp"

#include <algorithm>
#include <tuple>

namespace adj::adjunct::detail {

namespace {

using cast::Expr;
using cast::ExprKind;
using cast::Function;
using cast::SourceSpan;
using cast::Stmt;
using cast::StmtKind;

bool isPointerVar(const Function &fn, int id) {
  return id >= 0 && id < static_cast<int>(fn.vars.size()) && fn.vars[id].type.isPointer();
}

int varOrder(const Function &fn, int id) {
  return id >= 0 && id < static_cast<int>(fn.vars.size()) ? fn.vars[id].type.order() : 0;
}

const Expr *addrOfPointerVar(const Function &fn, const Expr &e) {
  if (e.kind == ExprKind::AddrOf && e.kids[0].kind == ExprKind::Ident && isPointerVar(fn, e.kids[0].declId))
    return &e.kids[0];
  return nullptr;
}

// Facts that do not depend on which pointers end up adjuncted.
struct Structure {
  std::map<int, std::vector<SourceSpan>> moved;   // order >= 2 only
  std::map<int, std::vector<SourceSpan>> escapes; // &p in a non-exempt position
  std::set<int> dirty;                            // order >= 2 used other than as a load base
  std::map<int, std::vector<int>> binders;        // p -> locals q bound by q = &p
  std::map<const Stmt *, std::vector<int>> resets;
  std::set<int> declaredInLoop;
};

enum class Ctx { Value, LoadBase, Target, Address };

class StructureScan {
public:
  StructureScan(const Function &fn, const effects::EffectDatabase &db) : fn_(fn), db_(db) {}

  Structure run() {
    body(fn_.body, 0);
    return std::move(out_);
  }

private:
  void ident(const Expr &e, Ctx ctx) {
    int id = e.declId;
    if (varOrder(fn_, id) < 2)
      return;
    if (ctx == Ctx::LoadBase)
      return;
    out_.dirty.insert(id);
    if (ctx == Ctx::Target)
      out_.moved[id].push_back(e.span);
  }

  void expr(const Expr &e, Ctx ctx, const Stmt *owner) {
    switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::FloatLit:
      return;
    case ExprKind::Ident:
      ident(e, ctx);
      return;
    case ExprKind::Subscript:
    case ExprKind::Deref: {
      bool lvalueUse = ctx == Ctx::Target || ctx == Ctx::Address;
      expr(e.kids[0], lvalueUse && e.type.isPointer() ? Ctx::Value : Ctx::LoadBase, owner);
      if (e.kind == ExprKind::Subscript)
        expr(e.kids[1], Ctx::Value, owner);
      return;
    }
    case ExprKind::Member:
      expr(e.kids[0], e.throughPointer ? Ctx::LoadBase : ctx, owner);
      return;
    case ExprKind::AddrOf:
      if (const Expr *target = addrOfPointerVar(fn_, e)) {
        out_.escapes[target->declId].push_back(e.span);
        return;
      }
      expr(e.kids[0], Ctx::Address, owner);
      return;
    case ExprKind::IncDec:
      expr(e.kids[0], Ctx::Target, owner);
      return;
    case ExprKind::Call: {
      bool delegates = db_.isAllocationDelegation(e.name);
      for (const auto &arg : e.kids) {
        const Expr *target = addrOfPointerVar(fn_, arg);
        if (delegates && target && owner) {
          out_.resets[owner].push_back(target->declId);
          continue;
        }
        expr(arg, Ctx::Value, owner);
      }
      return;
    }
    default:
      for (const auto &k : e.kids)
        expr(k, Ctx::Value, owner);
      return;
    }
  }

  // q = &p with q a local of order >= 2.
  bool binding(int lhsId, const Expr &rhs) {
    const Expr *target = addrOfPointerVar(fn_, rhs);
    if (!target || varOrder(fn_, lhsId) < 2 || fn_.vars[lhsId].isParam)
      return false;
    out_.binders[target->declId].push_back(lhsId);
    return true;
  }

  void stmt(const Stmt &s, int depth, bool header) {
    const Stmt *owner = header ? nullptr : &s;
    switch (s.kind) {
    case StmtKind::Decl:
      if (depth > 0)
        out_.declaredInLoop.insert(s.declId);
      if (s.hasInit() && !binding(s.declId, s.init()))
        expr(s.init(), Ctx::Value, owner);
      return;
    case StmtKind::Assign: {
      const Expr &lhs = s.lhs();
      if (lhs.kind == ExprKind::Ident) {
        if (s.assignOp != cast::AssignOp::Assign) {
          ident(lhs, Ctx::Target);
        } else if (varOrder(fn_, lhs.declId) >= 2 &&
                   (s.rhs().kind == ExprKind::Binary || s.rhs().kind == ExprKind::IncDec)) {
          out_.moved[lhs.declId].push_back(s.span);
        }
        if (s.assignOp == cast::AssignOp::Assign && binding(lhs.declId, s.rhs()))
          return;
      } else {
        expr(lhs, Ctx::Target, owner);
      }
      expr(s.rhs(), Ctx::Value, owner);
      return;
    }
    case StmtKind::IncDec:
      expr(s.exprs[0], Ctx::Target, owner);
      return;
    case StmtKind::ExprStmt:
    case StmtKind::Return:
      for (const auto &e : s.exprs)
        expr(e, Ctx::Value, owner);
      return;
    case StmtKind::If:
      expr(s.cond(), Ctx::Value, nullptr);
      body(s.body, depth);
      body(s.elseBody, depth);
      return;
    case StmtKind::While:
      expr(s.cond(), Ctx::Value, nullptr);
      body(s.body, depth + 1);
      return;
    case StmtKind::For:
      for (const auto &i : s.forInit)
        stmt(i, depth, true);
      expr(s.cond(), Ctx::Value, nullptr);
      for (const auto &st : s.forStep)
        stmt(st, depth + 1, true);
      body(s.body, depth + 1);
      return;
    case StmtKind::Block:
      body(s.body, depth);
      return;
    }
  }

  void body(const std::vector<Stmt> &b, int depth) {
    for (const auto &s : b)
      stmt(s, depth, false);
  }

  const Function &fn_;
  const effects::EffectDatabase &db_;
  Structure out_;
};

// Abstract base keys: each identifies one container value a pointer may be
// based on.
class Keys {
public:
  int intern(char kind, const void *site, int var, bool stable) {
    auto key = std::make_tuple(kind, site, var);
    auto it = ids_.find(key);
    if (it != ids_.end())
      return it->second;
    int id = static_cast<int>(stable_.size());
    ids_.emplace(key, id);
    stable_.push_back(stable);
    varOf_.push_back(kind == 'v' ? var : -1);
    return id;
  }
  bool stable(int k) const { return stable_[k]; }
  int varOf(int k) const { return varOf_[k]; }

private:
  std::map<std::tuple<char, const void *, int>, int> ids_;
  std::vector<bool> stable_;
  std::vector<int> varOf_;
};

using Tags = std::set<int>;

struct Env {
  bool live = true;
  std::vector<Tags> vars;
  bool operator==(const Env &o) const { return live == o.live && vars == o.vars; }
};

Env join(const Env &a, const Env &b) {
  if (!a.live)
    return b;
  if (!b.live)
    return a;
  Env out = a;
  for (std::size_t i = 0; i < out.vars.size(); ++i)
    out.vars[i].insert(b.vars[i].begin(), b.vars[i].end());
  return out;
}

struct Observations {
  std::map<const Expr *, std::pair<int, Tags>> uses;
  std::map<const Expr *, std::pair<Tags, Tags>> compares;
  std::map<const Expr *, std::pair<int, Tags>> loads;
};

class Flow {
public:
  Flow(const Function &fn, const Structure &st, const std::set<int> &decidable, Keys &keys,
       const effects::EffectDatabase &db)
      : fn_(fn), st_(st), d_(decidable), keys_(keys), db_(db) {}

  Observations run() {
    env_.vars.assign(fn_.vars.size(), {});
    for (const auto &p : fn_.params)
      if (isPointerVar(fn_, p.declId))
        env_.vars[p.declId] = {keys_.intern('p', nullptr, p.declId, true)};
    body(fn_.body);
    return std::move(obs_);
  }

private:
  int siteKey(char kind, const void *site) { return keys_.intern(kind, site, -1, depth_ == 0); }

  int varKey(int id) { return keys_.intern('v', nullptr, id, st_.declaredInLoop.count(id) == 0); }

  Tags eval(const Expr &e) {
    switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::FloatLit:
      return {};
    case ExprKind::Ident: {
      if (!isPointerVar(fn_, e.declId))
        return {};
      const Tags &bound = env_.vars[e.declId];
      if (env_.live) {
        auto &u = obs_.uses[&e];
        u.first = e.declId;
        u.second.insert(bound.begin(), bound.end());
      }
      if (d_.count(e.declId))
        return bound;
      return {siteKey('u', &e)};
    }
    case ExprKind::Binary: {
      const Expr &l = e.kids[0];
      const Expr &r = e.kids[1];
      Tags lt = eval(l);
      Tags rt = eval(r);
      if (l.type.isPointer() && r.type.isPointer()) {
        if (env_.live) {
          auto &c = obs_.compares[&e];
          c.first.insert(lt.begin(), lt.end());
          c.second.insert(rt.begin(), rt.end());
        }
        return {};
      }
      if (l.type.isPointer())
        return lt;
      if (r.type.isPointer())
        return rt;
      return {};
    }
    case ExprKind::IncDec:
      return eval(e.kids[0]);
    case ExprKind::Subscript:
    case ExprKind::Deref: {
      const Expr &base = e.kids[0];
      eval(base);
      if (e.kind == ExprKind::Subscript)
        eval(e.kids[1]);
      if (!e.type.isPointer())
        return {};
      if (base.kind == ExprKind::Ident && varOrder(fn_, base.declId) >= 2) {
        const Tags &bound = env_.vars[base.declId];
        if (env_.live) {
          auto &l = obs_.loads[&e];
          l.first = base.declId;
          l.second.insert(bound.begin(), bound.end());
        }
        if (bound.size() == 1) {
          int a = keys_.varOf(*bound.begin());
          if (a >= 0 && d_.count(a))
            return env_.vars[a];
        }
      }
      return {siteKey('l', &e)};
    }
    case ExprKind::AddrOf: {
      const Expr &k = e.kids[0];
      if (k.kind == ExprKind::Ident)
        return {varKey(k.declId)};
      if (k.kind == ExprKind::Subscript || k.kind == ExprKind::Deref) {
        Tags base = eval(k.kids[0]);
        if (k.kind == ExprKind::Subscript)
          eval(k.kids[1]);
        return base;
      }
      eval(k);
      return {siteKey('a', &e)};
    }
    case ExprKind::Member:
      eval(e.kids[0]);
      if (e.type.isPointer())
        return {siteKey('l', &e)};
      return {};
    case ExprKind::Call: {
      bool delegates = db_.isAllocationDelegation(e.name);
      std::vector<int> rebound;
      for (const auto &arg : e.kids) {
        const Expr *target = addrOfPointerVar(fn_, arg);
        if (delegates && target) {
          rebound.push_back(target->declId);
          continue;
        }
        eval(arg);
      }
      for (int id : rebound)
        env_.vars[id] = {siteKey('c', &e)};
      if (e.type.isPointer())
        return {siteKey('c', &e)};
      return {};
    }
    case ExprKind::Alloc:
      eval(e.kids[0]);
      return {siteKey('n', &e)};
    case ExprKind::Unary:
      eval(e.kids[0]);
      return {};
    }
    return {};
  }

  void loop(const Expr &cond, const std::vector<Stmt> &b, const std::vector<Stmt> &step) {
    ++depth_;
    Env head = env_;
    for (int iter = 0; iter < 10000; ++iter) {
      env_ = head;
      eval(cond);
      body(b);
      body(step);
      Env next = join(head, env_);
      if (next == head)
        break;
      head = std::move(next);
    }
    env_ = head;
    eval(cond);
    --depth_;
  }

  void stmt(const Stmt &s) {
    switch (s.kind) {
    case StmtKind::Decl: {
      Tags t = s.hasInit() ? eval(s.init()) : Tags{};
      if (isPointerVar(fn_, s.declId))
        env_.vars[s.declId] = std::move(t);
      return;
    }
    case StmtKind::Assign: {
      const Expr &lhs = s.lhs();
      if (lhs.kind == ExprKind::Ident && s.assignOp == cast::AssignOp::Assign) {
        Tags t = eval(s.rhs());
        if (isPointerVar(fn_, lhs.declId))
          env_.vars[lhs.declId] = std::move(t);
        return;
      }
      eval(lhs);
      eval(s.rhs());
      return;
    }
    case StmtKind::IncDec:
    case StmtKind::ExprStmt:
      eval(s.exprs[0]);
      return;
    case StmtKind::Return:
      for (const auto &e : s.exprs)
        eval(e);
      env_.live = false;
      return;
    case StmtKind::If: {
      eval(s.cond());
      Env before = env_;
      body(s.body);
      Env thenEnv = std::move(env_);
      env_ = std::move(before);
      body(s.elseBody);
      env_ = join(thenEnv, env_);
      return;
    }
    case StmtKind::While:
      loop(s.cond(), s.body, {});
      return;
    case StmtKind::For:
      body(s.forInit);
      loop(s.cond(), s.body, s.forStep);
      return;
    case StmtKind::Block:
      body(s.body);
      return;
    }
  }

  void body(const std::vector<Stmt> &b) {
    for (const auto &s : b)
      stmt(s);
  }

  const Function &fn_;
  const Structure &st_;
  const std::set<int> &d_;
  Keys &keys_;
  const effects::EffectDatabase &db_;
  Env env_;
  int depth_ = 0;
  Observations obs_;
};

int rootVar(const Expr &e) {
  switch (e.kind) {
  case ExprKind::Ident:
    return e.declId;
  case ExprKind::Binary:
    if (e.kids[0].type.isPointer())
      return rootVar(e.kids[0]);
    if (e.kids[1].type.isPointer())
      return rootVar(e.kids[1]);
    return -1;
  case ExprKind::IncDec:
    return rootVar(e.kids[0]);
  case ExprKind::AddrOf:
    if (e.kids[0].kind == ExprKind::Subscript)
      return rootVar(e.kids[0].kids[0]);
    return -1;
  default:
    return -1;
  }
}

int priority(Verdict v) {
  switch (v) {
  case Verdict::HigherOrderIterated: return 4;
  case Verdict::AddressTakenEscape: return 3;
  case Verdict::UnsupportedArithmetic: return 2;
  case Verdict::ConditionalReassignment: return 1;
  case Verdict::Decidable: return 0;
  }
  return 0;
}

bool spanLess(const SourceSpan &a, const SourceSpan &b) {
  return std::tie(a.line, a.column, a.length) < std::tie(b.line, b.column, b.length);
}

bool spanEq(const SourceSpan &a, const SourceSpan &b) {
  return a.line == b.line && a.column == b.column && a.length == b.length;
}

} // namespace

FunctionAnalysis analyze(const Function &fn, const effects::EffectDatabase &db) {
  Structure st = StructureScan(fn, db).run();
  std::map<int, std::map<Verdict, std::vector<SourceSpan>>> reasons;
  auto note = [&](int id, Verdict v, const SourceSpan &span) { reasons[id][v].push_back(span); };

  std::set<int> d;
  for (int id = 0; id < static_cast<int>(fn.vars.size()); ++id)
    if (fn.vars[id].type.isPointer())
      d.insert(id);
  for (const auto &[id, spans] : st.moved)
    for (const auto &sp : spans)
      note(id, Verdict::HigherOrderIterated, sp);
  for (const auto &[id, spans] : st.escapes)
    for (const auto &sp : spans)
      note(id, Verdict::AddressTakenEscape, sp);

  FunctionAnalysis out;
  Keys keys;
  while (true) {
    for (const auto &[id, r] : reasons)
      d.erase(id);
    Observations obs = Flow(fn, st, d, keys, db).run();

    out.loadTarget.clear();
    out.sameBase.clear();
    for (const auto &[site, use] : obs.uses)
      if (use.second.size() > 1)
        note(use.first, Verdict::ConditionalReassignment, site->span);
    for (const auto &[site, tags] : obs.compares) {
      const auto &[l, r] = tags;
      if (l.size() == 1 && l == r && keys.stable(*l.begin())) {
        out.sameBase.insert(site);
        continue;
      }
      for (const Expr *operand : {&site->kids[0], &site->kids[1]}) {
        int root = rootVar(*operand);
        if (isPointerVar(fn, root))
          note(root, Verdict::UnsupportedArithmetic, site->span);
      }
    }
    for (const auto &[site, load] : obs.loads) {
      const Tags &tags = load.second;
      for (int k : tags) {
        int a = keys.varOf(k);
        if (a < 0 || !isPointerVar(fn, a))
          continue;
        if (tags.size() > 1)
          note(a, Verdict::AddressTakenEscape, site->span);
        else if (d.count(a))
          out.loadTarget[site] = a;
      }
    }
    for (const auto &[a, qs] : st.binders)
      for (int q : qs)
        if (!d.count(q) || st.dirty.count(q))
          note(a, Verdict::AddressTakenEscape, fn.vars[q].span);

    bool shrunk = false;
    for (const auto &[id, r] : reasons)
      if (d.count(id))
        shrunk = true;
    if (!shrunk)
      break;
  }

  for (int id = 0; id < static_cast<int>(fn.vars.size()); ++id) {
    if (!fn.vars[id].type.isPointer())
      continue;
    auto it = reasons.find(id);
    if (it == reasons.end()) {
      out.verdicts[id] = Verdict::Decidable;
      continue;
    }
    Verdict best = Verdict::Decidable;
    for (const auto &[v, spans] : it->second)
      if (priority(v) > priority(best))
        best = v;
    out.verdicts[id] = best;
    auto spans = it->second[best];
    std::sort(spans.begin(), spans.end(), spanLess);
    spans.erase(std::unique(spans.begin(), spans.end(), spanEq), spans.end());
    out.evidence[id] = std::move(spans);
  }
  out.decidable = d;
  for (const auto &[s, ids] : st.resets)
    for (int id : ids)
      if (d.count(id))
        out.resetAfter[s].push_back(id);
  return out;
}

} // namespace adj::adjunct::detail

namespace adj::adjunct {

std::vector<PointerClass> classify(const cast::TranslationUnit &tu, const effects::EffectDatabase &db) {
  cast::TranslationUnit norm = normalizeDerefs(tu);
  std::vector<PointerClass> out;
  for (const auto &fn : norm.functions) {
    if (!fn.hasBody)
      continue;
    detail::FunctionAnalysis an = detail::analyze(fn, db);
    for (const auto &[id, verdict] : an.verdicts) {
      PointerClass pc;
      pc.function = fn.name;
      pc.variable = fn.vars[id].name;
      pc.declId = id;
      pc.declSpan = fn.vars[id].span;
      pc.verdict = verdict;
      auto ev = an.evidence.find(id);
      if (ev != an.evidence.end())
        pc.evidence = ev->second;
      out.push_back(std::move(pc));
    }
  }
  return out;
}

} // namespace adj::adjunct
