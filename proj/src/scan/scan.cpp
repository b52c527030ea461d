// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/scan/scan.hpp"

#include "adj/cast/cast.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

namespace adj::scan {

using cast::AssignOp;
using cast::BinaryOp;
using cast::Expr;
using cast::ExprKind;
using cast::Function;
using cast::Stmt;
using cast::StmtKind;

const char *categoryName(Category c) {
  switch (c) {
  case Category::Applicable: return "applicable";
  case Category::NonApplicable: return "non-applicable";
  case Category::AllocationDelegation: return kAllocationDelegation;
  case Category::Argv: return kArgv;
  }
  return "?";
}

const char *fileStatusName(FileStatus s) {
  switch (s) {
  case FileStatus::Ok: return "ok";
  case FileStatus::ParseError: return "parse-error";
  case FileStatus::IoError: return "io-error";
  }
  return "?";
}

Counts &Counts::operator+=(const Counts &o) {
  loc += o.loc;
  applicable += o.applicable;
  nonApplicable += o.nonApplicable;
  for (const auto &[k, v] : o.exemptions)
    exemptions[k] += v;
  return *this;
}

long countLoc(std::string_view text) {
  long loc = 0;
  bool inBlock = false;
  bool code = false;
  char quote = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    char c = i < text.size() ? text[i] : '\n';
    char next = i + 1 < text.size() ? text[i + 1] : '\0';
    if (c == '\n') {
      if (code)
        ++loc;
      code = false;
      quote = 0;
      continue;
    }
    if (inBlock) {
      if (c == '*' && next == '/') {
        inBlock = false;
        ++i;
      }
      continue;
    }
    if (quote) {
      if (c == '\\')
        ++i;
      else if (c == quote)
        quote = 0;
      continue;
    }
    if (c == '/' && next == '/') {
      while (i + 1 < text.size() && text[i + 1] != '\n')
        ++i;
      continue;
    }
    if (c == '/' && next == '*') {
      inBlock = true;
      ++i;
      continue;
    }
    if (c == '"' || c == '\'')
      quote = c;
    if (!std::isspace(static_cast<unsigned char>(c)))
      code = true;
  }
  return loc;
}

namespace {

template <class F> void eachExpr(const Expr &e, const Expr *parent, F &&f) {
  f(e, parent);
  for (const auto &k : e.kids)
    eachExpr(k, &e, f);
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

struct VarUse {
  bool iterated = false;    ///< incremented, compound-assigned or in pointer arithmetic
  bool onlyFirstCell = true; ///< every use is *p or p[0]
  bool storesAllocation = false;
  int uses = 0;
};

bool isVar(const Expr &e, int id) { return e.kind == ExprKind::Ident && e.declId == id; }

bool firstCellOf(const Expr &e, int id) {
  if (e.kind == ExprKind::Deref)
    return isVar(e.kids[0], id);
  return e.kind == ExprKind::Subscript && isVar(e.kids[0], id) && e.kids[1].kind == ExprKind::IntLit &&
         e.kids[1].intValue == 0;
}

std::map<int, VarUse> uses(const Function &fn) {
  std::map<int, VarUse> out;
  auto noteExpr = [&](const Expr &root) {
    eachExpr(root, nullptr, [&](const Expr &e, const Expr *parent) {
      if (e.kind == ExprKind::Ident && e.declId >= 0) {
        auto &u = out[e.declId];
        ++u.uses;
        if (!parent || !firstCellOf(*parent, e.declId))
          u.onlyFirstCell = false;
      }
      if (e.kind == ExprKind::IncDec && e.kids[0].kind == ExprKind::Ident)
        out[e.kids[0].declId].iterated = true;
      if (e.kind == ExprKind::Binary && (e.binOp == BinaryOp::Add || e.binOp == BinaryOp::Sub))
        for (const auto &k : e.kids)
          if (k.kind == ExprKind::Ident && k.type.isPointer())
            out[k.declId].iterated = true;
    });
  };
  eachStmt(fn.body, [&](const Stmt &s) {
    if (s.kind == StmtKind::IncDec && s.exprs[0].kind == ExprKind::Ident)
      out[s.exprs[0].declId].iterated = true;
    if (s.kind == StmtKind::Assign && s.assignOp != AssignOp::Assign && s.lhs().kind == ExprKind::Ident)
      out[s.lhs().declId].iterated = true;
    if (s.kind == StmtKind::Assign && s.rhs().kind == ExprKind::Alloc) {
      const Expr &l = s.lhs();
      if ((l.kind == ExprKind::Deref || l.kind == ExprKind::Subscript) && l.kids[0].kind == ExprKind::Ident &&
          firstCellOf(l, l.kids[0].declId))
        out[l.kids[0].declId].storesAllocation = true;
    }
    for (const auto &e : s.exprs)
      noteExpr(e);
  });
  return out;
}

Category classify(const Function &fn, int id, const VarUse &u) {
  const auto &v = fn.vars[id];
  int order = v.type.order();
  if (order < 2)
    return Category::Applicable;
  if (v.isParam && v.name == "argv" && fn.name == "main")
    return Category::Argv;
  if (u.iterated)
    return Category::NonApplicable;
  if (v.isParam && u.onlyFirstCell && u.storesAllocation)
    return Category::AllocationDelegation;
  return Category::Applicable;
}

} // namespace

FileReport scanSource(std::string_view text, const std::string &path) {
  FileReport r;
  r.path = path;
  r.counts.loc = countLoc(text);
  cast::TranslationUnit tu;
  try {
    tu = cast::parse(text, path);
  } catch (const cast::FrontendError &e) {
    r.status = FileStatus::ParseError;
    r.message = e.what();
    return r;
  }
  for (const auto &fn : tu.functions) {
    if (!fn.hasBody)
      continue;
    auto u = uses(fn);
    for (std::size_t id = 0; id < fn.vars.size(); ++id) {
      const auto &v = fn.vars[id];
      if (!v.type.isPointer())
        continue;
      Finding f;
      f.function = fn.name;
      f.variable = v.name;
      f.order = v.type.order();
      f.category = classify(fn, static_cast<int>(id), u[static_cast<int>(id)]);
      f.span = v.span;
      switch (f.category) {
      case Category::Applicable: ++r.counts.applicable; break;
      case Category::NonApplicable: ++r.counts.nonApplicable; break;
      default: ++r.counts.exemptions[categoryName(f.category)];
      }
      r.findings.push_back(std::move(f));
    }
  }
  return r;
}

ApplicabilityReport scan(const std::vector<std::string> &paths) {
  std::vector<std::string> sorted = paths;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::future<FileReport>> jobs;
  for (const auto &p : sorted)
    jobs.push_back(std::async(std::launch::async, [p] {
      std::ifstream in(p, std::ios::binary);
      std::error_code ec;
      if (!std::filesystem::is_regular_file(p, ec) || !in) {
        FileReport r;
        r.path = p;
        r.status = FileStatus::IoError;
        r.message = "cannot read " + p;
        return r;
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      return scanSource(ss.str(), p);
    }));
  ApplicabilityReport rep;
  for (auto &j : jobs) {
    rep.files.push_back(j.get());
    rep.total += rep.files.back().counts;
  }
  return rep;
}

} // namespace adj::scan
