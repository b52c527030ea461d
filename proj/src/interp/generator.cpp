// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/interp/generator.hpp"

#include "adj/cast/cast.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace adj::interp {

namespace {

// Offset as c + sum(k[loop] * t_loop) over the active loop counters.
struct Affine {
  long c = 0;
  std::map<int, long> k;

  Affine plus(long d) const {
    Affine a = *this;
    a.c += d;
    return a;
  }
  void normalize() {
    for (auto it = k.begin(); it != k.end();)
      it = it->second == 0 ? k.erase(it) : std::next(it);
  }
  friend bool operator==(const Affine &a, const Affine &b) { return a.c == b.c && a.k == b.k; }
};

struct Ptr {
  std::string name;
  bool known = false;
  std::set<int> containers;
  Affine off;
  bool fixed = false; ///< container base pointers are never rebound
  std::string alias;  ///< int** bound to this pointer, if any
};

struct Container {
  std::string name;
  long length = 0;
};

struct Loop {
  int id = 0;
  std::string iv;
  long trips = 1;
};

struct Ctx {
  std::set<int> assignable;
  std::set<int> locals;
};

const char *const kHelpers = "int get(int* r, int k) {\n"
                             "  return r[k];\n"
                             "}\n"
                             "\n"
                             "void put(int* r, int k, int v) {\n"
                             "  r[k] = v;\n"
                             "}\n"
                             "\n"
                             "int* step(int* r, int d) {\n"
                             "  return r + d;\n"
                             "}\n"
                             "\n";

class Generator {
public:
  Generator(std::uint64_t seed, int size) : rng_(seed), size_(size) {}

  std::string program() {
    budget_ = size_;
    std::ostringstream os;
    os << kHelpers << "long entry(int n) {\n";
    indent_ = 1;
    line("long acc = n;");
    int ncont = static_cast<int>(uniform(1, 3));
    for (int i = 0; i < ncont; ++i) {
      Container c{"c" + std::to_string(i), uniform(8, 40)};
      containers_.push_back(c);
      line("int* " + c.name + " = new int[" + std::to_string(c.length) + "];");
      std::string iv = freshIv();
      line("for (int " + iv + " = 0; " + iv + " < " + std::to_string(c.length) + "; " + iv + "++) {");
      ++indent_;
      line(c.name + "[" + iv + "] = (" + iv + " * " + std::to_string(uniform(1, 9)) + " + n) % 50;");
      --indent_;
      line("}");
      Ptr p;
      p.name = c.name;
      p.known = true;
      p.containers = {i};
      p.fixed = true;
      ptrs_.push_back(p);
    }
    Ctx top;
    int nptr = static_cast<int>(uniform(1, 4));
    for (int i = 0; i < nptr; ++i)
      declarePointer(top);
    while (budget_ > 0)
      statement(top, 0);
    line("return acc;");
    os << body_.str() << "}\n";
    return os.str();
  }

private:
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool chance(int percent) { return uniform(1, 100) <= percent; }

  void line(const std::string &s) {
    for (int i = 0; i < indent_; ++i)
      body_ << "  ";
    body_ << s << '\n';
  }

  std::string freshIv() { return "i" + std::to_string(ivCounter_++); }

  long minLength(const Ptr &p) const {
    long m = 1L << 40;
    for (int c : p.containers)
      m = std::min(m, containers_[c].length);
    return m;
  }

  std::pair<long, long> range(const Affine &a) const {
    long lo = a.c, hi = a.c;
    for (const auto &[id, coef] : a.k) {
      long trips = 1;
      for (const auto &l : loops_)
        if (l.id == id)
          trips = l.trips;
      long span = coef * (trips - 1);
      lo += std::min(0L, span);
      hi += std::max(0L, span);
    }
    return {lo, hi};
  }

  std::vector<int> knownPtrs() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(ptrs_.size()); ++i)
      if (ptrs_[i].known && !ptrs_[i].containers.empty())
        out.push_back(i);
    return out;
  }

  template <class T> const T &pick(const std::vector<T> &v) { return v[uniform(0, static_cast<long>(v.size()) - 1)]; }

  std::vector<int> ofSet(const std::set<int> &s) const { return {s.begin(), s.end()}; }

  // An index expression valid for `a` plus the index on every path.
  std::optional<std::string> index(const Affine &a, long length, bool allowIv) {
    if (allowIv && !loops_.empty() && chance(40)) {
      const Loop &l = pick(loops_);
      Affine b = a;
      b.k[l.id] += 1;
      auto [lo, hi] = range(b);
      if (-lo <= length - 1 - hi) {
        long k = uniform(-lo, length - 1 - hi);
        if (k == 0)
          return l.iv;
        return k > 0 ? l.iv + " + " + std::to_string(k) : l.iv + " - " + std::to_string(-k);
      }
    }
    auto [lo, hi] = range(a);
    if (-lo > length - 1 - hi)
      return std::nullopt;
    return std::to_string(uniform(-lo, length - 1 - hi));
  }

  // Pointer expression and resulting state for a fresh binding.
  std::optional<std::pair<std::string, Ptr>> source() {
    auto known = knownPtrs();
    if (known.empty())
      return std::nullopt;
    const Ptr &q = ptrs_[pick(known)];
    Ptr r;
    r.known = true;
    r.containers = q.containers;
    long len = minLength(q);
    long x = uniform(0, std::max(1L, len / 3));
    switch (uniform(0, 4)) {
    case 0:
      r.off = q.off;
      return std::make_pair(q.name, r);
    case 1:
      r.off = q.off.plus(x);
      return std::make_pair(q.name + " + " + std::to_string(x), r);
    case 2:
      r.off = q.off.plus(-x);
      return std::make_pair(q.name + " - " + std::to_string(x), r);
    case 3:
      r.off = q.off.plus(x);
      return std::make_pair("&" + q.name + "[" + std::to_string(x) + "]", r);
    default:
      r.off = q.off.plus(x);
      return std::make_pair("step(" + q.name + ", " + std::to_string(x) + ")", r);
    }
  }

  void declarePointer(Ctx &ctx) {
    auto src = source();
    if (!src)
      return;
    Ptr p = src->second;
    p.name = "p" + std::to_string(ptrCounter_++);
    line("int* " + p.name + " = " + src->first + ";");
    ptrs_.push_back(p);
    int id = static_cast<int>(ptrs_.size()) - 1;
    ctx.assignable.insert(id);
    ctx.locals.insert(id);
    if (loops_.empty() && chance(20)) {
      ptrs_[id].alias = "pp" + std::to_string(id);
      line("int** " + ptrs_[id].alias + " = &" + p.name + ";");
    }
  }

  std::string readOf(int pid, const std::string &idx) {
    const Ptr &p = ptrs_[pid];
    if (!p.alias.empty() && chance(30))
      return "(*" + p.alias + ")[" + idx + "]";
    if (idx == "0" && chance(50))
      return "*" + p.name;
    if (chance(15))
      return "get(" + p.name + ", " + idx + ")";
    return p.name + "[" + idx + "]";
  }

  void access() {
    auto known = knownPtrs();
    if (known.empty())
      return;
    int pid = pick(known);
    auto idx = index(ptrs_[pid].off, minLength(ptrs_[pid]), true);
    if (!idx)
      return;
    const std::string &name = ptrs_[pid].name;
    switch (uniform(0, 4)) {
    case 0:
    case 1:
      line("acc = (acc * 31 + " + readOf(pid, *idx) + ") % 1000003;");
      return;
    case 2:
      line(name + "[" + *idx + "] = (acc + " + std::to_string(uniform(0, 9)) + ") % 1000;");
      return;
    case 3:
      if (chance(50))
        line("put(" + name + ", " + *idx + ", acc % 97);");
      else
        line(name + "[" + *idx + "] += " + std::to_string(uniform(1, 5)) + ";");
      return;
    default:
      if (*idx == "0")
        line("*" + name + " = acc % 89;");
      else
        line(name + "[" + *idx + "] = " + name + "[" + *idx + "] * 3 % 101;");
      return;
    }
  }

  void move(const Ctx &ctx) {
    std::vector<int> cands;
    for (int id : ctx.assignable)
      if (ptrs_[id].known)
        cands.push_back(id);
    if (cands.empty())
      return;
    Ptr &p = ptrs_[pick(cands)];
    long len = minLength(p);
    long d = uniform(1, 4);
    auto [lo, hi] = range(p.off);
    if (hi + d > 2 * len || chance(50)) {
      if (lo - d >= -len)
        d = -d;
    }
    p.off = p.off.plus(d);
    long a = d > 0 ? d : -d;
    const char *op = d > 0 ? "+" : "-";
    if (a == 1 && chance(40))
      line(p.name + (d > 0 ? "++;" : "--;"));
    else if (chance(50))
      line(p.name + " " + op + "= " + std::to_string(a) + ";");
    else
      line(p.name + " = " + p.name + " " + op + " " + std::to_string(a) + ";");
  }

  void assign(const Ctx &ctx) {
    auto targets = ofSet(ctx.assignable);
    if (targets.empty())
      return;
    int tid = pick(targets);
    auto src = source();
    if (!src)
      return;
    Ptr &t = ptrs_[tid];
    t.known = src->second.known;
    t.containers = src->second.containers;
    t.off = src->second.off;
    line(t.name + " = " + src->first + ";");
  }

  // moves of p; q = p; accesses through q
  void handoff(const Ctx &ctx) {
    auto targets = ofSet(ctx.assignable);
    if (targets.size() < 2)
      return;
    int p = pick(targets);
    int q = pick(targets);
    if (p == q || !ptrs_[p].known)
      return;
    for (long i = uniform(1, 3); i > 0; --i) {
      Ctx only;
      only.assignable = {p};
      move(only);
    }
    ptrs_[q].known = true;
    ptrs_[q].containers = ptrs_[p].containers;
    ptrs_[q].off = ptrs_[p].off;
    line(ptrs_[q].name + " = " + ptrs_[p].name + ";");
    for (long i = uniform(1, 3); i > 0; --i) {
      auto idx = index(ptrs_[q].off, minLength(ptrs_[q]), true);
      if (idx)
        line("acc = (acc * 31 + " + ptrs_[q].name + "[" + *idx + "]) % 1000003;");
    }
  }

  void copy() {
    auto known = knownPtrs();
    if (known.empty())
      return;
    int dst = pick(known);
    int src = pick(known);
    long len = std::min(minLength(ptrs_[dst]), minLength(ptrs_[src]));
    long n = uniform(1, std::max(1L, len / 4));
    auto [dlo, dhi] = range(ptrs_[dst].off);
    auto [slo, shi] = range(ptrs_[src].off);
    long dl = minLength(ptrs_[dst]), sl = minLength(ptrs_[src]);
    if (-dlo > dl - n - dhi || -slo > sl - n - shi)
      return;
    long a = uniform(-dlo, dl - n - dhi);
    long b = uniform(-slo, sl - n - shi);
    auto at = [](const std::string &name, long k) {
      if (k == 0)
        return name;
      return k > 0 ? name + " + " + std::to_string(k) : name + " - " + std::to_string(-k);
    };
    line("memcpy(" + at(ptrs_[dst].name, a) + ", " + at(ptrs_[src].name, b) + ", " + std::to_string(n) + ");");
  }

  void compare() {
    auto known = knownPtrs();
    if (known.empty())
      return;
    int a = pick(known);
    int b = pick(known);
    if (ptrs_[a].containers.size() != 1 || ptrs_[a].containers != ptrs_[b].containers)
      return;
    if (chance(50)) {
      const char *op = chance(50) ? " < " : " == ";
      line("if (" + ptrs_[a].name + op + ptrs_[b].name + ") {");
      ++indent_;
      line("acc = acc + " + std::to_string(uniform(1, 9)) + ";");
      --indent_;
      line("}");
    } else {
      line("acc = acc + (" + ptrs_[b].name + " - " + ptrs_[a].name + ");");
    }
  }

  std::vector<Ptr> snapshot() const { return ptrs_; }

  void joinInto(const std::vector<Ptr> &other) {
    for (std::size_t i = 0; i < ptrs_.size() && i < other.size(); ++i) {
      Ptr &p = ptrs_[i];
      const Ptr &o = other[i];
      if (!p.known || !o.known || !(p.off == o.off)) {
        p.known = false;
        continue;
      }
      p.containers.insert(o.containers.begin(), o.containers.end());
    }
  }

  void dropLocals(const Ctx &inner, Ctx &outer) {
    (void)outer;
    for (int id : inner.locals) {
      ptrs_[id].known = false;
      ptrs_[id].containers.clear();
    }
  }

  void block(Ctx ctx, int depth, int statements) {
    Ctx inner = ctx;
    inner.locals.clear();
    for (int i = 0; i < statements && budget_ > 0; ++i)
      statement(inner, depth);
    dropLocals(inner, ctx);
  }

  void ifStmt(const Ctx &ctx, int depth) {
    std::string cond = chance(50) ? "(acc + " + std::to_string(uniform(0, 5)) + ") % 3 == 0"
                                  : "n > " + std::to_string(uniform(0, 6));
    line("if (" + cond + ") {");
    auto before = snapshot();
    ++indent_;
    block(ctx, depth + 1, static_cast<int>(uniform(1, 4)));
    --indent_;
    auto thenState = snapshot();
    ptrs_.resize(before.size());
    std::copy(before.begin(), before.end(), ptrs_.begin());
    ptrs_.resize(thenState.size(), Ptr{});
    for (std::size_t i = before.size(); i < thenState.size(); ++i)
      ptrs_[i] = thenState[i];
    if (chance(60)) {
      line("} else {");
      ++indent_;
      block(ctx, depth + 1, static_cast<int>(uniform(1, 4)));
      --indent_;
    }
    line("}");
    joinInto(thenState);
  }

  void forStmt(const Ctx &ctx, int depth) {
    Loop l{loopCounter_++, freshIv(), uniform(1, 6)};
    std::vector<std::pair<int, long>> movers;
    std::set<int> rebound;
    for (int id : ctx.assignable) {
      if (!ptrs_[id].known) {
        if (chance(30))
          rebound.insert(id);
        continue;
      }
      if (chance(35)) {
        long len = minLength(ptrs_[id]);
        long d = uniform(-2, 2);
        if (d != 0 && std::abs(d) * l.trips <= len) {
          movers.emplace_back(id, d);
          continue;
        }
      }
      if (chance(30))
        rebound.insert(id);
    }
    line("for (int " + l.iv + " = 0; " + l.iv + " < " + std::to_string(l.trips) + "; " + l.iv + "++) {");
    loops_.push_back(l);
    for (auto [id, d] : movers)
      ptrs_[id].off.k[l.id] += d;
    for (int id : rebound)
      ptrs_[id].known = false;
    Ctx inner;
    inner.assignable = rebound;
    ++indent_;
    int n = static_cast<int>(uniform(1, 4));
    std::vector<std::pair<int, long>> pending = movers;
    std::shuffle(pending.begin(), pending.end(), rng_);
    for (int i = 0; i < n && budget_ > 0; ++i) {
      if (!pending.empty() && chance(30)) {
        emitMove(pending.back());
        pending.pop_back();
      }
      statement(inner, depth + 1);
    }
    while (!pending.empty()) {
      emitMove(pending.back());
      pending.pop_back();
    }
    --indent_;
    line("}");
    for (int id : inner.locals) {
      ptrs_[id].known = false;
      ptrs_[id].containers.clear();
    }
    loops_.pop_back();
    for (auto &p : ptrs_) {
      auto it = p.off.k.find(l.id);
      if (it != p.off.k.end()) {
        p.off.c += it->second * (l.trips - 1);
        p.off.k.erase(it);
      }
    }
  }

  void emitMove(std::pair<int, long> m) {
    Ptr &p = ptrs_[m.first];
    p.off = p.off.plus(m.second);
    long a = std::abs(m.second);
    const char *op = m.second > 0 ? "+" : "-";
    if (a == 1 && chance(50))
      line(p.name + (m.second > 0 ? "++;" : "--;"));
    else
      line(p.name + " " + op + "= " + std::to_string(a) + ";");
  }

  void statement(Ctx &ctx, int depth) {
    --budget_;
    long roll = uniform(0, 99);
    if (roll < 30)
      access();
    else if (roll < 45)
      move(ctx);
    else if (roll < 57)
      assign(ctx);
    else if (roll < 63)
      handoff(ctx);
    else if (roll < 68)
      copy();
    else if (roll < 72)
      compare();
    else if (roll < 77 && depth < 3)
      declarePointer(ctx);
    else if (roll < 88 && depth < 3)
      ifStmt(ctx, depth);
    else if (depth < 3)
      forStmt(ctx, depth);
    else
      access();
  }

  std::mt19937_64 rng_;
  int size_;
  int budget_ = 0;
  int indent_ = 0;
  int ivCounter_ = 0;
  int ptrCounter_ = 0;
  int loopCounter_ = 0;
  std::ostringstream body_;
  std::vector<Container> containers_;
  std::vector<Ptr> ptrs_;
  std::vector<Loop> loops_;
};

} // namespace

std::vector<Scalar> generatedInputs(std::uint64_t seed) { return {Scalar::ofInt(static_cast<long>(seed % 7) + 1)}; }

cast::TranslationUnit generateProgram(std::uint64_t seed, int size) {
  if (size < kMinProgramSize || size > kMaxProgramSize)
    throw std::invalid_argument("program size " + std::to_string(size) + " outside [" +
                                std::to_string(kMinProgramSize) + ", " + std::to_string(kMaxProgramSize) + "]");
  std::mt19937_64 seeder(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Generator g(seeder(), size);
    std::string src = g.program();
    cast::TranslationUnit tu = cast::parse(src, "gen-" + std::to_string(seed) + ".c");
    RunOptions opts;
    opts.trace = false;
    if (run(tu, kGeneratedEntry, generatedInputs(seed), opts).ok())
      return tu;
  }
  throw std::logic_error("generator could not produce a trap-free program for seed " + std::to_string(seed));
}

} // namespace adj::interp
