// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/interp/interp.hpp"

#include "adj/cast/cast.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace adj::interp {

using cast::CType;
using cast::Expr;
using cast::ExprKind;
using cast::Function;
using cast::SourceSpan;
using cast::Stmt;
using cast::StmtKind;

namespace {

bool sameBits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::string floatText(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

} // namespace

bool operator==(const Scalar &a, const Scalar &b) {
  if (a.isFloat != b.isFloat)
    return false;
  return a.isFloat ? sameBits(a.f, b.f) : a.i == b.i;
}

std::string Scalar::str() const { return isFloat ? floatText(f) : std::to_string(i); }

Value Value::ofInt(std::int64_t v) {
  Value r;
  r.kind = Kind::Int;
  r.i = v;
  return r;
}

Value Value::ofFloat(double v) {
  Value r;
  r.kind = Kind::Float;
  r.f = v;
  return r;
}

Value Value::ofPointer(PointerValue p) {
  Value r;
  r.kind = Kind::Pointer;
  r.ptr = p;
  return r;
}

Scalar Value::scalar() const { return kind == Kind::Float ? Scalar::ofFloat(f) : Scalar::ofInt(i); }

std::string Value::str() const {
  switch (kind) {
  case Kind::Uninit:
    return "uninit";
  case Kind::Int:
    return std::to_string(i);
  case Kind::Float:
    return floatText(f);
  case Kind::Pointer:
    return "&c" + std::to_string(ptr.container) + "[" + std::to_string(ptr.offset) + "]";
  case Kind::Record: {
    std::string s = "{";
    for (std::size_t k = 0; k < fields.size(); ++k)
      s += (k ? ", " : "") + fields[k].str();
    return s + "}";
  }
  }
  return "?";
}

bool operator==(const Value &a, const Value &b) {
  if (a.kind != b.kind)
    return false;
  switch (a.kind) {
  case Value::Kind::Uninit:
    return true;
  case Value::Kind::Int:
    return a.i == b.i;
  case Value::Kind::Float:
    return sameBits(a.f, b.f);
  case Value::Kind::Pointer:
    return a.ptr == b.ptr;
  case Value::Kind::Record:
    return a.fields == b.fields;
  }
  return false;
}

const char *eventKindName(EventKind k) {
  switch (k) {
  case EventKind::Read: return "read";
  case EventKind::Write: return "write";
  case EventKind::Alloc: return "alloc";
  case EventKind::Free: return "free";
  }
  return "?";
}

std::string TraceEvent::str() const {
  std::string s = "#" + std::to_string(seq) + " " + eventKindName(kind) + " c" + std::to_string(container);
  if (kind == EventKind::Alloc)
    return s + " len=" + std::to_string(offset);
  if (kind == EventKind::Free)
    return s;
  s += "[" + std::to_string(offset) + "]";
  if (!field.empty())
    s += "." + field;
  return s + " = " + value.str();
}

const char *trapKindName(TrapKind k) {
  switch (k) {
  case TrapKind::OutOfBounds: return "out-of-bounds";
  case TrapKind::UninitializedRead: return "uninitialized-read";
  case TrapKind::FuelExhausted: return "fuel-exhausted";
  case TrapKind::OffsetOverflow: return "offset-overflow";
  case TrapKind::CrossContainer: return "cross-container";
  case TrapKind::DivisionByZero: return "division-by-zero";
  case TrapKind::UseAfterFree: return "use-after-free";
  case TrapKind::BadAllocation: return "bad-allocation";
  case TrapKind::BadConversion: return "bad-conversion";
  case TrapKind::InvalidShift: return "invalid-shift";
  case TrapKind::CallDepth: return "call-depth";
  }
  return "?";
}

std::string Trap::str() const { return span.str() + ": trap " + trapKindName(kind) + ": " + message; }

namespace {

constexpr int kMaxCallDepth = 2000;

struct TrapSignal {
  Trap trap;
};

[[noreturn]] void raise(TrapKind kind, const SourceSpan &span, std::string msg) {
  throw TrapSignal{Trap{kind, span, std::move(msg)}};
}

std::int64_t wrapInt(std::int64_t v, unsigned bits, bool isSigned) {
  if (bits >= 64)
    return v;
  std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  std::uint64_t u = static_cast<std::uint64_t>(v) & mask;
  if (isSigned && (u >> (bits - 1)) & 1)
    u |= ~mask;
  return static_cast<std::int64_t>(u);
}

CType commonType(const CType &a, const CType &b) {
  if (a.isFloat() || b.isFloat()) {
    if (a.isFloat() && b.isFloat())
      return CType::floating(std::max(a.bits(), b.bits()));
    return CType::floating(64);
  }
  unsigned bits = std::max({a.bits(), b.bits(), 32u});
  bool isSigned = true;
  if ((a.bits() == bits && !a.isSigned()) || (b.bits() == bits && !b.isSigned()))
    isSigned = false;
  return CType::integer(bits, isSigned);
}

struct Container {
  CType element;
  std::vector<Value> cells;
  bool freed = false;
};

struct Frame {
  const Function *fn = nullptr;
  std::vector<Value> env;
};

struct Place {
  bool memory = false;
  int var = -1;
  PointerValue at;
  std::vector<int> path;
  std::string field;
  CType type;
};

enum class Flow { Next, Return };

class Machine {
public:
  Machine(const cast::TranslationUnit &tu, const RunOptions &opts) : tu_(tu), opts_(opts), fuel_(opts.fuel) {}

  RunResult execute(const std::string &entry, const std::vector<Scalar> &inputs) {
    const Function *fn = tu_.function(entry);
    if (!fn || !fn->hasBody)
      throw std::invalid_argument("entry function '" + entry + "' not found");
    if (fn->params.size() != inputs.size())
      throw std::invalid_argument("entry '" + entry + "' takes " + std::to_string(fn->params.size()) +
                                  " arguments, got " + std::to_string(inputs.size()));
    std::vector<Value> args;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const CType &t = fn->params[k].type;
      if (!t.isArithmetic())
        throw std::invalid_argument("entry parameter '" + fn->params[k].name + "' is not a scalar");
      Value v = inputs[k].isFloat ? Value::ofFloat(inputs[k].f) : Value::ofInt(inputs[k].i);
      args.push_back(convert(v, t, fn->params[k].span));
    }
    RunResult result;
    try {
      Value ret = call(*fn, std::move(args), fn->span);
      if (!fn->returnType.isVoid())
        result.state.returnValue = ret;
    } catch (const TrapSignal &sig) {
      result.trap = sig.trap;
    }
    result.trace.events = std::move(events_);
    result.permutedExecutions = permuted_;
    for (std::size_t id = 0; id < heap_.size(); ++id) {
      if (heap_[id].freed)
        continue;
      ContainerState cs;
      cs.id = static_cast<std::int64_t>(id);
      cs.elementType = heap_[id].element.spelling();
      cs.cells = heap_[id].cells;
      result.state.containers.push_back(std::move(cs));
    }
    return result;
  }

private:
  // ---- memory ---------------------------------------------------------

  Value blank(const CType &t) const {
    Value v;
    if (t.isRecord()) {
      v.kind = Value::Kind::Record;
      const cast::RecordDef *rec = tu_.record(t.recordName());
      for (const auto &f : rec->fields)
        v.fields.push_back(blank(f.type));
    }
    return v;
  }

  PointerValue allocate(const CType &element, std::int64_t length, const SourceSpan &span) {
    if (length < 0)
      raise(TrapKind::BadAllocation, span, "negative allocation length " + std::to_string(length));
    if (length > (std::int64_t{1} << 26))
      raise(TrapKind::BadAllocation, span, "allocation too large");
    Container c;
    c.element = element;
    c.cells.assign(static_cast<std::size_t>(length), blank(element));
    heap_.push_back(std::move(c));
    std::int64_t id = static_cast<std::int64_t>(heap_.size()) - 1;
    record(EventKind::Alloc, id, length, {}, {}, span);
    return PointerValue{id, 0};
  }

  void record(EventKind kind, std::int64_t container, std::int64_t offset, std::string field, Scalar value,
              const SourceSpan &span) {
    if (!opts_.trace)
      return;
    TraceEvent ev;
    ev.seq = seq_++;
    ev.container = container;
    ev.offset = offset;
    ev.field = std::move(field);
    ev.kind = kind;
    ev.value = value;
    ev.site = span;
    events_.push_back(std::move(ev));
  }

  Container &liveContainer(std::int64_t id, const SourceSpan &span) {
    if (id < 0 || id >= static_cast<std::int64_t>(heap_.size()))
      raise(TrapKind::OutOfBounds, span, "invalid container");
    Container &c = heap_[static_cast<std::size_t>(id)];
    if (c.freed)
      raise(TrapKind::UseAfterFree, span, "access to freed container c" + std::to_string(id));
    return c;
  }

  Value &cellAt(PointerValue p, const SourceSpan &span) {
    Container &c = liveContainer(p.container, span);
    if (p.offset < 0 || p.offset >= static_cast<std::int64_t>(c.cells.size()))
      raise(TrapKind::OutOfBounds, span,
            "offset " + std::to_string(p.offset) + " outside c" + std::to_string(p.container) + " of length " +
                std::to_string(c.cells.size()));
    return c.cells[static_cast<std::size_t>(p.offset)];
  }

  Value &locate(Frame &fr, const Place &pl, const SourceSpan &span) {
    Value *v = pl.memory ? &cellAt(pl.at, span) : &fr.env[static_cast<std::size_t>(pl.var)];
    for (int idx : pl.path)
      v = &v->fields[static_cast<std::size_t>(idx)];
    return *v;
  }

  Value load(Frame &fr, const Place &pl, const SourceSpan &span) {
    Value v = locate(fr, pl, span);
    if (!pl.type.isRecord() && v.kind == Value::Kind::Uninit)
      raise(TrapKind::UninitializedRead, span, "read of uninitialized " + describe(pl));
    if (pl.memory && v.isScalar())
      record(EventKind::Read, pl.at.container, pl.at.offset, pl.field, v.scalar(), span);
    return v;
  }

  void store(Frame &fr, const Place &pl, Value v, const SourceSpan &span) {
    Value conv = convert(v, pl.type, span);
    Value &slot = locate(fr, pl, span);
    slot = conv;
    if (pl.memory && slot.isScalar())
      record(EventKind::Write, pl.at.container, pl.at.offset, pl.field, slot.scalar(), span);
  }

  std::string describe(const Place &pl) const {
    if (pl.memory)
      return "c" + std::to_string(pl.at.container) + "[" + std::to_string(pl.at.offset) + "]" +
             (pl.field.empty() ? "" : "." + pl.field);
    return "variable";
  }

  Value readCell(PointerValue p, std::int64_t k, const SourceSpan &span) {
    PointerValue q{p.container, offsetAdd(p.offset, k, span)};
    Value v = cellAt(q, span);
    if (v.kind == Value::Kind::Uninit)
      raise(TrapKind::UninitializedRead, span, "read of uninitialized c" + std::to_string(q.container) + "[" +
                                                   std::to_string(q.offset) + "]");
    if (v.isScalar())
      record(EventKind::Read, q.container, q.offset, {}, v.scalar(), span);
    return v;
  }

  void writeCell(PointerValue p, std::int64_t k, Value v, const SourceSpan &span) {
    PointerValue q{p.container, offsetAdd(p.offset, k, span)};
    Value &slot = cellAt(q, span);
    slot = convert(v, heap_[static_cast<std::size_t>(q.container)].element, span);
    if (slot.isScalar())
      record(EventKind::Write, q.container, q.offset, {}, slot.scalar(), span);
  }

  static std::int64_t offsetAdd(std::int64_t a, std::int64_t b, const SourceSpan &span) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
      raise(TrapKind::OffsetOverflow, span, "pointer offset overflow");
    return r;
  }

  // ---- conversions ----------------------------------------------------

  Value convert(const Value &v, const CType &t, const SourceSpan &span) const {
    if (v.kind == Value::Kind::Uninit)
      return v;
    if (t.isInt()) {
      if (v.kind == Value::Kind::Int)
        return Value::ofInt(wrapInt(v.i, t.bits(), t.isSigned()));
      if (v.kind == Value::Kind::Float) {
        double d = std::trunc(v.f);
        if (!std::isfinite(d) || d < -9.2e18 || d > 9.2e18)
          raise(TrapKind::BadConversion, span, "float value out of integer range");
        return Value::ofInt(wrapInt(static_cast<std::int64_t>(d), t.bits(), t.isSigned()));
      }
      raise(TrapKind::BadConversion, span, "non-scalar converted to integer");
    }
    if (t.isFloat()) {
      double d = v.kind == Value::Kind::Float ? v.f : static_cast<double>(v.i);
      if (t.bits() == 32)
        d = static_cast<double>(static_cast<float>(d));
      return Value::ofFloat(d);
    }
    return v;
  }

  static double asDouble(const Value &v, const CType &t) {
    if (v.kind == Value::Kind::Float)
      return v.f;
    if (t.isInt() && !t.isSigned() && t.bits() == 64)
      return static_cast<double>(static_cast<std::uint64_t>(v.i));
    return static_cast<double>(v.i);
  }

  static bool truthy(const Value &v) { return v.kind == Value::Kind::Float ? v.f != 0.0 : v.i != 0; }

  void requireInit(const Value &v, const SourceSpan &span) {
    if (v.kind == Value::Kind::Uninit)
      raise(TrapKind::UninitializedRead, span, "use of uninitialized value");
  }

  // ---- places ---------------------------------------------------------

  Place placeOf(Frame &fr, const Expr &e) {
    switch (e.kind) {
    case ExprKind::Ident: {
      Place pl;
      pl.type = e.type;
      const cast::VarInfo &vi = fr.fn->vars[static_cast<std::size_t>(e.declId)];
      if (vi.addressTaken) {
        const Value &slot = fr.env[static_cast<std::size_t>(e.declId)];
        if (slot.kind != Value::Kind::Pointer)
          raise(TrapKind::UninitializedRead, e.span, "variable '" + e.name + "' used before its declaration");
        pl.memory = true;
        pl.at = slot.ptr;
      } else {
        pl.var = e.declId;
      }
      return pl;
    }
    case ExprKind::Subscript: {
      PointerValue base = pointerOf(fr, e.kids[0]);
      Value idx = eval(fr, e.kids[1]);
      requireInit(idx, e.kids[1].span);
      Place pl;
      pl.memory = true;
      pl.at = PointerValue{base.container, offsetAdd(base.offset, idx.i, e.span)};
      pl.type = e.type;
      return pl;
    }
    case ExprKind::Deref: {
      Place pl;
      pl.memory = true;
      pl.at = pointerOf(fr, e.kids[0]);
      pl.type = e.type;
      return pl;
    }
    case ExprKind::Member: {
      Place pl;
      const CType *rt;
      if (e.throughPointer) {
        pl.memory = true;
        pl.at = pointerOf(fr, e.kids[0]);
        rt = &e.kids[0].type.pointee();
      } else {
        pl = placeOf(fr, e.kids[0]);
        rt = &e.kids[0].type;
      }
      const cast::RecordDef *rec = tu_.record(rt->recordName());
      pl.path.push_back(rec->fieldIndex(e.name));
      pl.field = pl.field.empty() ? e.name : pl.field + "." + e.name;
      pl.type = e.type;
      return pl;
    }
    default:
      raise(TrapKind::BadConversion, e.span, "expression is not an lvalue");
    }
  }

  PointerValue pointerOf(Frame &fr, const Expr &e) {
    Value v = eval(fr, e);
    requireInit(v, e.span);
    if (v.kind != Value::Kind::Pointer)
      raise(TrapKind::BadConversion, e.span, "expected a pointer value");
    return v.ptr;
  }

  // ---- expressions ----------------------------------------------------

  Value eval(Frame &fr, const Expr &e) {
    switch (e.kind) {
    case ExprKind::IntLit:
      return Value::ofInt(e.intValue);
    case ExprKind::FloatLit:
      return Value::ofFloat(e.floatValue);
    case ExprKind::Ident:
    case ExprKind::Subscript:
    case ExprKind::Deref:
    case ExprKind::Member: {
      Place pl = placeOf(fr, e);
      return load(fr, pl, e.span);
    }
    case ExprKind::AddrOf: {
      const Expr &op = e.kids[0];
      if (op.kind == ExprKind::Member)
        raise(TrapKind::BadConversion, e.span, "address of a record member is not modelled");
      if (op.kind == ExprKind::Deref)
        return Value::ofPointer(pointerOf(fr, op.kids[0]));
      Place pl = placeOf(fr, op);
      if (!pl.memory)
        raise(TrapKind::BadConversion, e.span, "address of a register variable");
      return Value::ofPointer(pl.at);
    }
    case ExprKind::Unary:
      return evalUnary(fr, e);
    case ExprKind::Binary:
      return evalBinary(fr, e);
    case ExprKind::Call:
      return evalCall(fr, e);
    case ExprKind::Alloc: {
      Value n = eval(fr, e.kids[0]);
      requireInit(n, e.kids[0].span);
      return Value::ofPointer(allocate(e.allocType, n.i, e.span));
    }
    case ExprKind::IncDec: {
      Place pl = placeOf(fr, e.kids[0]);
      Value old = load(fr, pl, e.span);
      Value nv = step(old, e.delta, pl.type, e.span);
      store(fr, pl, nv, e.span);
      return e.prefix ? convert(nv, pl.type, e.span) : old;
    }
    }
    return {};
  }

  Value step(const Value &v, int delta, const CType &t, const SourceSpan &span) {
    if (v.kind == Value::Kind::Pointer)
      return Value::ofPointer(PointerValue{v.ptr.container, offsetAdd(v.ptr.offset, delta, span)});
    return Value::ofInt(wrapInt(static_cast<std::int64_t>(static_cast<std::uint64_t>(v.i) + static_cast<std::uint64_t>(delta)),
                                t.bits(), t.isSigned()));
  }

  Value evalUnary(Frame &fr, const Expr &e) {
    Value v = eval(fr, e.kids[0]);
    requireInit(v, e.kids[0].span);
    const CType &t = e.type;
    switch (e.unOp) {
    case cast::UnaryOp::Neg:
      if (v.kind == Value::Kind::Float)
        return Value::ofFloat(-v.f);
      return Value::ofInt(wrapInt(static_cast<std::int64_t>(0 - static_cast<std::uint64_t>(v.i)), t.bits(), t.isSigned()));
    case cast::UnaryOp::Not:
      return Value::ofInt(truthy(v) ? 0 : 1);
    case cast::UnaryOp::BitNot:
      return Value::ofInt(wrapInt(~v.i, t.bits(), t.isSigned()));
    }
    return {};
  }

  Value evalBinary(Frame &fr, const Expr &e) {
    using cast::BinaryOp;
    BinaryOp op = e.binOp;
    const Expr &le = e.kids[0];
    const Expr &re = e.kids[1];
    if (op == BinaryOp::LogAnd || op == BinaryOp::LogOr) {
      Value l = eval(fr, le);
      requireInit(l, le.span);
      bool lt = truthy(l);
      if (op == BinaryOp::LogAnd && !lt)
        return Value::ofInt(0);
      if (op == BinaryOp::LogOr && lt)
        return Value::ofInt(1);
      Value r = eval(fr, re);
      requireInit(r, re.span);
      return Value::ofInt(truthy(r) ? 1 : 0);
    }
    Value l = eval(fr, le);
    requireInit(l, le.span);
    Value r = eval(fr, re);
    requireInit(r, re.span);

    if (l.kind == Value::Kind::Pointer || r.kind == Value::Kind::Pointer)
      return pointerArith(op, l, r, e);

    CType ct = commonType(le.type, re.type);
    if (ct.isFloat()) {
      double a = asDouble(l, le.type), b = asDouble(r, re.type);
      auto fin = [&](double d) { return Value::ofFloat(ct.bits() == 32 ? static_cast<double>(static_cast<float>(d)) : d); };
      switch (op) {
      case BinaryOp::Add: return fin(a + b);
      case BinaryOp::Sub: return fin(a - b);
      case BinaryOp::Mul: return fin(a * b);
      case BinaryOp::Div: return fin(a / b);
      case BinaryOp::Lt: return Value::ofInt(a < b);
      case BinaryOp::Gt: return Value::ofInt(a > b);
      case BinaryOp::Le: return Value::ofInt(a <= b);
      case BinaryOp::Ge: return Value::ofInt(a >= b);
      case BinaryOp::Eq: return Value::ofInt(a == b);
      case BinaryOp::Ne: return Value::ofInt(a != b);
      default:
        raise(TrapKind::BadConversion, e.span, "invalid floating operation");
      }
    }
    bool isSigned = ct.isSigned();
    std::int64_t a = wrapInt(l.i, ct.bits(), isSigned);
    std::int64_t b = wrapInt(r.i, ct.bits(), isSigned);
    std::uint64_t ua = static_cast<std::uint64_t>(a), ub = static_cast<std::uint64_t>(b);
    if (ct.bits() < 64 && !isSigned) {
      std::uint64_t mask = (std::uint64_t{1} << ct.bits()) - 1;
      ua &= mask;
      ub &= mask;
    }
    auto fin = [&](std::uint64_t u) {
      return Value::ofInt(wrapInt(static_cast<std::int64_t>(u), e.type.bits(), e.type.isSigned()));
    };
    auto cmp = [&](auto pred) { return Value::ofInt(isSigned ? pred(a, b) : pred(ua, ub)); };
    switch (op) {
    case BinaryOp::Add: return fin(ua + ub);
    case BinaryOp::Sub: return fin(ua - ub);
    case BinaryOp::Mul: return fin(ua * ub);
    case BinaryOp::Div:
    case BinaryOp::Rem:
      if (b == 0)
        raise(TrapKind::DivisionByZero, e.span, "division by zero");
      if (isSigned) {
        if (a == std::numeric_limits<std::int64_t>::min() && b == -1)
          raise(TrapKind::OffsetOverflow, e.span, "division overflow");
        return fin(static_cast<std::uint64_t>(op == BinaryOp::Div ? a / b : a % b));
      }
      return fin(op == BinaryOp::Div ? ua / ub : ua % ub);
    case BinaryOp::BitAnd: return fin(ua & ub);
    case BinaryOp::BitOr: return fin(ua | ub);
    case BinaryOp::BitXor: return fin(ua ^ ub);
    case BinaryOp::Shl:
    case BinaryOp::Shr: {
      std::int64_t count = r.i;
      unsigned width = std::max(le.type.bits(), 32u);
      if (count < 0 || count >= static_cast<std::int64_t>(width))
        raise(TrapKind::InvalidShift, e.span, "shift count " + std::to_string(count) + " out of range");
      const CType &lt = e.type;
      std::int64_t lv = wrapInt(l.i, lt.bits(), lt.isSigned());
      if (op == BinaryOp::Shl)
        return fin(static_cast<std::uint64_t>(lv) << count);
      if (lt.isSigned())
        return fin(static_cast<std::uint64_t>(lv >> count));
      std::uint64_t ul = static_cast<std::uint64_t>(lv);
      if (lt.bits() < 64)
        ul &= (std::uint64_t{1} << lt.bits()) - 1;
      return fin(ul >> count);
    }
    case BinaryOp::Lt: return cmp([](auto x, auto y) { return x < y; });
    case BinaryOp::Gt: return cmp([](auto x, auto y) { return x > y; });
    case BinaryOp::Le: return cmp([](auto x, auto y) { return x <= y; });
    case BinaryOp::Ge: return cmp([](auto x, auto y) { return x >= y; });
    case BinaryOp::Eq: return cmp([](auto x, auto y) { return x == y; });
    case BinaryOp::Ne: return cmp([](auto x, auto y) { return x != y; });
    default:
      break;
    }
    return {};
  }

  Value pointerArith(cast::BinaryOp op, const Value &l, const Value &r, const Expr &e) {
    using cast::BinaryOp;
    if (l.kind == Value::Kind::Pointer && r.kind == Value::Kind::Pointer) {
      if (l.ptr.container != r.ptr.container)
        raise(TrapKind::CrossContainer, e.span,
              std::string("pointer ") + (op == BinaryOp::Sub ? "subtraction" : "comparison") + " across containers c" +
                  std::to_string(l.ptr.container) + " and c" + std::to_string(r.ptr.container));
      std::int64_t a = l.ptr.offset, b = r.ptr.offset;
      switch (op) {
      case BinaryOp::Sub: {
        std::int64_t d;
        if (__builtin_sub_overflow(a, b, &d))
          raise(TrapKind::OffsetOverflow, e.span, "pointer difference overflow");
        return Value::ofInt(d);
      }
      case BinaryOp::Lt: return Value::ofInt(a < b);
      case BinaryOp::Gt: return Value::ofInt(a > b);
      case BinaryOp::Le: return Value::ofInt(a <= b);
      case BinaryOp::Ge: return Value::ofInt(a >= b);
      case BinaryOp::Eq: return Value::ofInt(a == b);
      case BinaryOp::Ne: return Value::ofInt(a != b);
      default:
        raise(TrapKind::BadConversion, e.span, "invalid pointer operation");
      }
    }
    const Value &p = l.kind == Value::Kind::Pointer ? l : r;
    const Value &n = l.kind == Value::Kind::Pointer ? r : l;
    std::int64_t delta = n.i;
    if (op == BinaryOp::Sub) {
      if (delta == std::numeric_limits<std::int64_t>::min())
        raise(TrapKind::OffsetOverflow, e.span, "pointer offset overflow");
      delta = -delta;
    }
    return Value::ofPointer(PointerValue{p.ptr.container, offsetAdd(p.ptr.offset, delta, e.span)});
  }

  Value evalCall(Frame &fr, const Expr &e) {
    std::vector<Value> args;
    args.reserve(e.kids.size());
    for (const auto &a : e.kids) {
      Value v = eval(fr, a);
      requireInit(v, a.span);
      args.push_back(std::move(v));
    }
    if (const Function *fn = tu_.function(e.name)) {
      if (!fn->hasBody)
        raise(TrapKind::BadConversion, e.span, "call to undefined function '" + e.name + "'");
      for (std::size_t k = 0; k < args.size(); ++k)
        args[k] = convert(args[k], fn->params[k].type, e.kids[k].span);
      return call(*fn, std::move(args), e.span);
    }
    return builtin(e, args);
  }

  Value builtin(const Expr &e, const std::vector<Value> &args) {
    const std::string &name = e.name;
    const SourceSpan &span = e.span;
    if (name == "memcpy") {
      std::int64_t n = args[2].i;
      for (std::int64_t k = 0; k < n; ++k)
        writeCell(args[0].ptr, k, readCell(args[1].ptr, k, span), span);
      return {};
    }
    if (name == "memset") {
      std::int64_t n = args[2].i;
      for (std::int64_t k = 0; k < n; ++k)
        writeCell(args[0].ptr, k, args[1], span);
      return {};
    }
    if (name == "free" || name == "HMAC_CTX_free") {
      PointerValue p = args[0].ptr;
      Container &c = liveContainer(p.container, span);
      if (p.offset != 0)
        raise(TrapKind::OutOfBounds, span, "free of interior pointer");
      c.freed = true;
      record(EventKind::Free, p.container, 0, {}, {}, span);
      return {};
    }
    if (name == "atoi") {
      std::int64_t v = 0, sign = 1;
      for (std::int64_t k = 0;; ++k) {
        std::int64_t ch = readCell(args[0].ptr, k, span).i;
        if (ch == 0)
          break;
        if (k == 0 && ch == '-') {
          sign = -1;
          continue;
        }
        if (ch < '0' || ch > '9')
          break;
        v = v * 10 + (ch - '0');
      }
      return Value::ofInt(wrapInt(sign * v, 32, true));
    }
    if (name == "HMAC_CTX_new") {
      PointerValue p = allocate(CType::integer(64, true), kCtxLen, span);
      for (auto &cell : heap_[static_cast<std::size_t>(p.container)].cells)
        cell = Value::ofInt(0);
      return Value::ofPointer(p);
    }
    if (name == "HMAC_CTX_copy") {
      for (std::int64_t k = 0; k < kCtxLen; ++k)
        writeCell(args[0].ptr, k, readCell(args[1].ptr, k, span), span);
      return Value::ofInt(1);
    }
    if (name == "HMAC_Update") {
      std::int64_t s[kCtxLen];
      for (std::int64_t k = 0; k < kCtxLen; ++k)
        s[k] = readCell(args[0].ptr, k, span).i;
      std::uint64_t x = static_cast<std::uint64_t>(args[1].i);
      std::uint64_t a = static_cast<std::uint64_t>(s[0]) * 31 + x + 7;
      std::uint64_t b = (static_cast<std::uint64_t>(s[1]) ^ (a << 5)) + (a >> 3);
      std::uint64_t c = static_cast<std::uint64_t>(s[2]) + b * 3;
      std::uint64_t d = static_cast<std::uint64_t>(s[3]) + 1;
      std::uint64_t out[kCtxLen] = {a, b, c, d};
      for (std::int64_t k = 0; k < kCtxLen; ++k)
        writeCell(args[0].ptr, k, Value::ofInt(static_cast<std::int64_t>(out[k])), span);
      return Value::ofInt(1);
    }
    if (name == "HMAC_Final") {
      std::uint64_t h = 1469598103934665603ull;
      for (std::int64_t k = 0; k < kCtxLen; ++k) {
        h ^= static_cast<std::uint64_t>(readCell(args[0].ptr, k, span).i);
        h *= 1099511628211ull;
      }
      writeCell(args[0].ptr, 3, Value::ofInt(0), span);
      return Value::ofInt(static_cast<std::int64_t>(h % 1000003));
    }
    raise(TrapKind::BadConversion, span, "call to unknown function '" + name + "'");
  }

  static constexpr std::int64_t kCtxLen = 4;

  Value call(const Function &fn, std::vector<Value> args, const SourceSpan &span) {
    if (++depth_ > kMaxCallDepth)
      raise(TrapKind::CallDepth, span, "call depth limit exceeded");
    Frame fr;
    fr.fn = &fn;
    fr.env.resize(fn.vars.size());
    for (std::size_t k = 0; k < fn.params.size(); ++k)
      bind(fr, fn.params[k].declId, std::move(args[k]), fn.params[k].span);
    Value ret;
    if (execBody(fr, fn.body) == Flow::Return)
      ret = std::move(retval_);
    --depth_;
    return ret;
  }

  void bind(Frame &fr, int declId, Value v, const SourceSpan &span) {
    const cast::VarInfo &vi = fr.fn->vars[static_cast<std::size_t>(declId)];
    if (vi.addressTaken) {
      PointerValue p = allocate(vi.type, 1, span);
      fr.env[static_cast<std::size_t>(declId)] = Value::ofPointer(p);
      Place pl;
      pl.memory = true;
      pl.at = p;
      pl.type = vi.type;
      if (v.kind != Value::Kind::Uninit || vi.type.isRecord())
        store(fr, pl, v.kind == Value::Kind::Uninit ? blank(vi.type) : v, span);
      return;
    }
    fr.env[static_cast<std::size_t>(declId)] = v.kind == Value::Kind::Uninit ? blank(vi.type) : convert(v, vi.type, span);
  }

  // ---- statements -----------------------------------------------------

  void burn(const SourceSpan &span) {
    if (--fuel_ < 0)
      raise(TrapKind::FuelExhausted, span, "fuel exhausted");
  }

  Flow execBody(Frame &fr, const std::vector<Stmt> &body) {
    for (const auto &s : body)
      if (exec(fr, s) == Flow::Return)
        return Flow::Return;
    return Flow::Next;
  }

  void assign(Frame &fr, const Stmt &s) {
    Place pl = placeOf(fr, s.lhs());
    if (s.assignOp == cast::AssignOp::Assign) {
      Value v = eval(fr, s.rhs());
      requireInit(v, s.rhs().span);
      store(fr, pl, v, s.span);
      return;
    }
    Value cur = load(fr, pl, s.span);
    Value rhs = eval(fr, s.rhs());
    requireInit(rhs, s.rhs().span);
    bool add = s.assignOp == cast::AssignOp::AddAssign;
    if (cur.kind == Value::Kind::Pointer) {
      std::int64_t d = rhs.i;
      if (!add) {
        if (d == std::numeric_limits<std::int64_t>::min())
          raise(TrapKind::OffsetOverflow, s.span, "pointer offset overflow");
        d = -d;
      }
      store(fr, pl, Value::ofPointer(PointerValue{cur.ptr.container, offsetAdd(cur.ptr.offset, d, s.span)}), s.span);
      return;
    }
    CType ct = commonType(pl.type, s.rhs().type);
    Value res;
    if (ct.isFloat()) {
      double a = asDouble(cur, pl.type), b = asDouble(rhs, s.rhs().type);
      res = Value::ofFloat(add ? a + b : a - b);
    } else {
      std::uint64_t a = static_cast<std::uint64_t>(cur.i), b = static_cast<std::uint64_t>(rhs.i);
      res = Value::ofInt(static_cast<std::int64_t>(add ? a + b : a - b));
    }
    store(fr, pl, res, s.span);
  }

  Flow exec(Frame &fr, const Stmt &s) {
    burn(s.span);
    switch (s.kind) {
    case StmtKind::Decl: {
      Value v;
      if (s.hasInit()) {
        v = eval(fr, s.init());
        if (!s.declType.isRecord())
          requireInit(v, s.init().span);
      }
      bind(fr, s.declId, std::move(v), s.span);
      return Flow::Next;
    }
    case StmtKind::Assign:
      assign(fr, s);
      return Flow::Next;
    case StmtKind::ExprStmt:
      eval(fr, s.exprs[0]);
      return Flow::Next;
    case StmtKind::IncDec: {
      Place pl = placeOf(fr, s.exprs[0]);
      Value old = load(fr, pl, s.span);
      store(fr, pl, step(old, s.delta, pl.type, s.span), s.span);
      return Flow::Next;
    }
    case StmtKind::Return:
      if (!s.exprs.empty()) {
        Value v = eval(fr, s.exprs[0]);
        requireInit(v, s.exprs[0].span);
        retval_ = convert(v, fr.fn->returnType, s.span);
      } else {
        retval_ = Value();
      }
      return Flow::Return;
    case StmtKind::Block:
      return execBody(fr, s.body);
    case StmtKind::If: {
      Value c = eval(fr, s.cond());
      requireInit(c, s.cond().span);
      if (truthy(c))
        return execBody(fr, s.body);
      if (s.hasElse)
        return execBody(fr, s.elseBody);
      return Flow::Next;
    }
    case StmtKind::For:
    case StmtKind::While:
      for (const auto &i : s.forInit)
        exec(fr, i);
      if (isPermuteTarget(s))
        return permutedLoop(fr, s);
      return loop(fr, s, nullptr);
    }
    return Flow::Next;
  }

  bool condHolds(Frame &fr, const Stmt &s) {
    Value c = eval(fr, s.cond());
    requireInit(c, s.cond().span);
    return truthy(c);
  }

  // Runs the loop after its init. When ivs is given, records the induction
  // variable values at the start of each iteration.
  Flow loop(Frame &fr, const Stmt &s, std::vector<std::vector<Value>> *ivs) {
    while (condHolds(fr, s)) {
      burn(s.span);
      if (ivs)
        ivs->push_back(readVars(fr));
      if (execBody(fr, s.body) == Flow::Return)
        return Flow::Return;
      for (const auto &st : s.forStep)
        exec(fr, st);
    }
    return Flow::Next;
  }

  bool isPermuteTarget(const Stmt &s) const {
    return opts_.permute && s.span.line == opts_.permute->line && s.span.column == opts_.permute->column;
  }

  void collectIvIds(const Stmt &s, std::vector<int> &ids) const {
    const auto &names = opts_.permute->inductionVars;
    auto want = [&](const std::string &n) { return std::find(names.begin(), names.end(), n) != names.end(); };
    auto add = [&](int id) {
      if (id >= 0 && std::find(ids.begin(), ids.end(), id) == ids.end())
        ids.push_back(id);
    };
    std::vector<const Expr *> stack;
    auto visitStmt = [&](auto &&self, const Stmt &st) -> void {
      if (st.kind == StmtKind::Decl && want(st.name))
        add(st.declId);
      for (const auto &x : st.exprs)
        stack.push_back(&x);
      for (const auto *list : {&st.forInit, &st.forStep, &st.body, &st.elseBody})
        for (const auto &c : *list)
          self(self, c);
    };
    visitStmt(visitStmt, s);
    while (!stack.empty()) {
      const Expr *x = stack.back();
      stack.pop_back();
      if (x->kind == ExprKind::Ident && want(x->name))
        add(x->declId);
      for (const auto &k : x->kids)
        stack.push_back(&k);
    }
  }

  std::vector<Value> readVars(Frame &fr) {
    std::vector<Value> out;
    for (int id : ivIds_)
      out.push_back(varSlot(fr, id));
    return out;
  }

  Value &varSlot(Frame &fr, int id) {
    Value &slot = fr.env[static_cast<std::size_t>(id)];
    if (fr.fn->vars[static_cast<std::size_t>(id)].addressTaken && slot.kind == Value::Kind::Pointer)
      return heap_[static_cast<std::size_t>(slot.ptr.container)].cells[0];
    return slot;
  }

  void writeVars(Frame &fr, const std::vector<Value> &vals) {
    for (std::size_t k = 0; k < ivIds_.size(); ++k)
      varSlot(fr, ivIds_[k]) = vals[k];
  }

  Flow permutedLoop(Frame &fr, const Stmt &s) {
    std::vector<int> savedIds = ivIds_;
    ivIds_.clear();
    collectIvIds(s, ivIds_);
    std::vector<Container> heapSnap = heap_;
    std::vector<Value> envSnap = fr.env;
    std::size_t traceMark = events_.size();
    std::uint64_t seqMark = seq_;

    std::vector<std::vector<Value>> ivs;
    if (loop(fr, s, &ivs) == Flow::Return) {
      ivIds_ = savedIds;
      return Flow::Return;
    }
    std::vector<Value> exitVals = readVars(fr);

    heap_ = std::move(heapSnap);
    fr.env = std::move(envSnap);
    events_.resize(traceMark);
    seq_ = seqMark;

    std::vector<std::size_t> order(ivs.size());
    for (std::size_t k = 0; k < order.size(); ++k)
      order[k] = k;
    if (opts_.permute->order == PermuteSpec::Order::Reversed) {
      std::reverse(order.begin(), order.end());
    } else {
      std::mt19937_64 rng(opts_.permute->seed + permuted_);
      std::shuffle(order.begin(), order.end(), rng);
    }
    for (std::size_t k : order) {
      burn(s.span);
      writeVars(fr, ivs[k]);
      if (execBody(fr, s.body) == Flow::Return)
        raise(TrapKind::BadConversion, s.span, "return inside a permuted loop");
      for (const auto &st : s.forStep)
        exec(fr, st);
    }
    writeVars(fr, exitVals);
    ++permuted_;
    ivIds_ = savedIds;
    return Flow::Next;
  }

  const cast::TranslationUnit &tu_;
  const RunOptions &opts_;
  std::int64_t fuel_;
  std::vector<Container> heap_;
  std::vector<TraceEvent> events_;
  std::uint64_t seq_ = 0;
  Value retval_;
  int depth_ = 0;
  std::int64_t permuted_ = 0;
  std::vector<int> ivIds_;
};

// ---- comparison ---------------------------------------------------------

bool strictCell(const Value &a, const Value &b) {
  if (a.kind != b.kind)
    return false;
  switch (a.kind) {
  case Value::Kind::Pointer:
    return a.ptr.container == b.ptr.container;
  case Value::Kind::Record:
    if (a.fields.size() != b.fields.size())
      return false;
    for (std::size_t k = 0; k < a.fields.size(); ++k)
      if (!strictCell(a.fields[k], b.fields[k]))
        return false;
    return true;
  default:
    return a == b;
  }
}

std::string eventText(const TraceEvent &e) { return e.str() + " at " + e.site.str(); }

bool sameEvent(const TraceEvent &a, const TraceEvent &b, CompareMode mode) {
  if (mode == CompareMode::ValueLevel)
    return a.kind == b.kind && a.value == b.value;
  if (a.seq != b.seq || a.container != b.container || a.offset != b.offset || a.kind != b.kind || a.field != b.field)
    return false;
  if (a.kind == EventKind::Read || a.kind == EventKind::Write)
    return a.value == b.value;
  return true;
}

std::vector<const TraceEvent *> relevant(const Trace &t, CompareMode mode) {
  std::vector<const TraceEvent *> out;
  out.reserve(t.events.size());
  for (const auto &e : t.events)
    if (mode == CompareMode::Strict || e.kind == EventKind::Read || e.kind == EventKind::Write)
      out.push_back(&e);
  return out;
}

std::optional<Divergence> eventDivergence(const Trace &a, const Trace &b, CompareMode mode) {
  auto ea = relevant(a, mode);
  auto eb = relevant(b, mode);
  std::size_t n = std::min(ea.size(), eb.size());
  for (std::size_t k = 0; k < n; ++k)
    if (!sameEvent(*ea[k], *eb[k], mode))
      return Divergence{k, "event " + std::to_string(k) + ": " + eventText(*ea[k]) + "  vs  " + eventText(*eb[k])};
  if (ea.size() != eb.size()) {
    std::string extra = ea.size() > eb.size() ? "left: " + eventText(*ea[n]) : "right: " + eventText(*eb[n]);
    return Divergence{n, "event " + std::to_string(n) + ": one trace ends early; next " + extra};
  }
  return std::nullopt;
}

// Serializes the data reachable from v with containers renamed by discovery order.
void reachable(const FinalState &st, const Value &v, std::vector<std::string> &out) {
  std::map<std::int64_t, std::size_t> canon;
  std::vector<std::int64_t> queue;
  auto byId = [&](std::int64_t id) -> const ContainerState * {
    for (const auto &c : st.containers)
      if (c.id == id)
        return &c;
    return nullptr;
  };
  auto render = [&](auto &&self, const Value &x) -> std::string {
    switch (x.kind) {
    case Value::Kind::Pointer: {
      auto it = canon.find(x.ptr.container);
      if (it == canon.end()) {
        it = canon.emplace(x.ptr.container, canon.size()).first;
        queue.push_back(x.ptr.container);
      }
      return "&" + std::to_string(it->second) + "[" + std::to_string(x.ptr.offset) + "]";
    }
    case Value::Kind::Record: {
      std::string s = "{";
      for (const auto &f : x.fields)
        s += self(self, f) + ",";
      return s + "}";
    }
    default:
      return x.str();
    }
  };
  out.push_back("ret " + render(render, v));
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const ContainerState *c = byId(queue[q]);
    if (!c) {
      out.push_back("dangling");
      continue;
    }
    std::string line = std::to_string(q) + ":" + c->elementType + ":";
    for (const auto &cell : c->cells)
      line += render(render, cell) + " ";
    out.push_back(line);
  }
}

std::optional<Divergence> stateDivergence(const RunResult &a, const RunResult &b, CompareMode mode) {
  std::size_t at = std::max(a.trace.events.size(), b.trace.events.size());
  if (a.trap.has_value() != b.trap.has_value() || (a.trap && a.trap->kind != b.trap->kind))
    return Divergence{at, "trap status differs: " + (a.trap ? a.trap->str() : std::string("none")) + "  vs  " +
                              (b.trap ? b.trap->str() : std::string("none"))};
  const FinalState &sa = a.state, &sb = b.state;
  if (sa.returnValue.has_value() != sb.returnValue.has_value())
    return Divergence{at, "one run returns a value and the other does not"};
  if (mode == CompareMode::ValueLevel) {
    if (!sa.returnValue)
      return std::nullopt;
    std::vector<std::string> ra, rb;
    reachable(sa, *sa.returnValue, ra);
    reachable(sb, *sb.returnValue, rb);
    for (std::size_t k = 0; k < std::min(ra.size(), rb.size()); ++k)
      if (ra[k] != rb[k])
        return Divergence{at, "reachable data differs: " + ra[k] + "  vs  " + rb[k]};
    if (ra.size() != rb.size())
      return Divergence{at, "reachable data differs in size"};
    return std::nullopt;
  }
  if (sa.returnValue && !(*sa.returnValue == *sb.returnValue))
    return Divergence{at, "return value " + sa.returnValue->str() + "  vs  " + sb.returnValue->str()};
  if (sa.containers.size() != sb.containers.size())
    return Divergence{at, "live container count " + std::to_string(sa.containers.size()) + "  vs  " +
                              std::to_string(sb.containers.size())};
  for (std::size_t k = 0; k < sa.containers.size(); ++k) {
    const auto &ca = sa.containers[k];
    const auto &cb = sb.containers[k];
    if (ca.id != cb.id || ca.elementType != cb.elementType || ca.cells.size() != cb.cells.size())
      return Divergence{at, "container c" + std::to_string(ca.id) + " shape differs"};
    for (std::size_t c = 0; c < ca.cells.size(); ++c)
      if (!strictCell(ca.cells[c], cb.cells[c]))
        return Divergence{at, "final c" + std::to_string(ca.id) + "[" + std::to_string(c) + "] " + ca.cells[c].str() +
                                  "  vs  " + cb.cells[c].str()};
  }
  return std::nullopt;
}

} // namespace

RunResult run(const cast::TranslationUnit &tu, const std::string &entry, const std::vector<Scalar> &inputs,
              const RunOptions &options) {
  Machine m(tu, options);
  return m.execute(entry, inputs);
}

RunResult run(const cast::TranslationUnit &tu, const std::string &entry, const std::vector<Scalar> &inputs,
              std::int64_t fuel) {
  RunOptions opts;
  opts.fuel = fuel;
  return run(tu, entry, inputs, opts);
}

std::optional<Divergence> firstDivergence(const RunResult &a, const RunResult &b, CompareMode mode) {
  if (auto d = eventDivergence(a.trace, b.trace, mode))
    return d;
  return stateDivergence(a, b, mode);
}

bool traceEqual(const RunResult &a, const RunResult &b, CompareMode mode) { return !firstDivergence(a, b, mode); }

bool traceEqual(const Trace &a, const Trace &b, CompareMode mode) { return !eventDivergence(a, b, mode); }

bool sameFinalState(const FinalState &a, const FinalState &b) {
  if (a.returnValue.has_value() != b.returnValue.has_value())
    return false;
  if (a.returnValue && !(*a.returnValue == *b.returnValue))
    return false;
  if (a.containers.size() != b.containers.size())
    return false;
  for (std::size_t k = 0; k < a.containers.size(); ++k) {
    const auto &ca = a.containers[k];
    const auto &cb = b.containers[k];
    if (ca.id != cb.id || ca.elementType != cb.elementType || !(ca.cells == cb.cells))
      return false;
  }
  return true;
}

} // namespace adj::interp
