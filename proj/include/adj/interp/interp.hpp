// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Tracing interpreter over a (container, offset) memory model.

#pragma once

#include "adj/cast/ast.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace adj::interp {

/// A scalar as passed in and as recorded in traces.
struct Scalar {
  bool isFloat = false;
  std::int64_t i = 0;
  double f = 0.0;

  static Scalar ofInt(std::int64_t v) { return Scalar{false, v, 0.0}; }
  static Scalar ofFloat(double v) { return Scalar{true, 0, v}; }
  std::string str() const;
  /// Floats compare bitwise.
  friend bool operator==(const Scalar &a, const Scalar &b);
};

struct PointerValue {
  std::int64_t container = -1;
  std::int64_t offset = 0;
  friend bool operator==(const PointerValue &, const PointerValue &) = default;
};

struct Value {
  enum class Kind : std::uint8_t { Uninit, Int, Float, Pointer, Record };
  Kind kind = Kind::Uninit;
  std::int64_t i = 0;
  double f = 0.0;
  PointerValue ptr;
  std::vector<Value> fields;

  static Value ofInt(std::int64_t v);
  static Value ofFloat(double v);
  static Value ofPointer(PointerValue p);
  bool isScalar() const { return kind == Kind::Int || kind == Kind::Float; }
  Scalar scalar() const;
  std::string str() const;
  friend bool operator==(const Value &a, const Value &b);
};

enum class EventKind { Read, Write, Alloc, Free };
const char *eventKindName(EventKind k);

struct TraceEvent {
  std::uint64_t seq = 0;
  std::int64_t container = -1;
  std::int64_t offset = 0; ///< element offset; the length for Alloc
  std::string field;       ///< member path for record elements, else empty
  EventKind kind = EventKind::Read;
  Scalar value;            ///< Read/Write only
  cast::SourceSpan site;   ///< not compared

  std::string str() const;
};

struct Trace {
  std::vector<TraceEvent> events;
};

struct ContainerState {
  std::int64_t id = 0;
  std::string elementType;
  bool freed = false;
  std::vector<Value> cells;
};

struct FinalState {
  std::vector<ContainerState> containers; ///< live containers only
  std::optional<Value> returnValue;
};

enum class TrapKind {
  OutOfBounds,
  UninitializedRead,
  FuelExhausted,
  OffsetOverflow,
  CrossContainer,
  DivisionByZero,
  UseAfterFree,
  BadAllocation,
  BadConversion,
  InvalidShift,
  CallDepth,
};
const char *trapKindName(TrapKind k);

struct Trap {
  TrapKind kind = TrapKind::OutOfBounds;
  cast::SourceSpan span;
  std::string message;
  std::string str() const;
};

/// Re-executes the iterations of one loop in a different order. Before each
/// iteration the listed induction variables are set to the values they had
/// at that iteration in program order; afterwards they get their exit values.
struct PermuteSpec {
  enum class Order { Reversed, Random };
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  Order order = Order::Reversed;
  std::uint64_t seed = 0;
  std::vector<std::string> inductionVars;
};

struct RunOptions {
  std::int64_t fuel = 1'000'000;
  bool trace = true;
  std::optional<PermuteSpec> permute;
};

struct RunResult {
  Trace trace;
  FinalState state;
  std::optional<Trap> trap;
  std::int64_t permutedExecutions = 0; ///< times the PermuteSpec loop was reordered

  bool ok() const { return !trap.has_value(); }
};

/// Runs `entry` with scalar arguments. Throws std::invalid_argument when the
/// entry is missing or the inputs do not fit its parameters; runtime faults
/// are returned as RunResult::trap together with the partial trace.
RunResult run(const cast::TranslationUnit &tu, const std::string &entry, const std::vector<Scalar> &inputs,
              const RunOptions &options = {});
RunResult run(const cast::TranslationUnit &tu, const std::string &entry, const std::vector<Scalar> &inputs,
              std::int64_t fuel);

enum class CompareMode { Strict, ValueLevel };

/// Where two runs first differ.
struct Divergence {
  std::size_t index = 0; ///< event index, or events.size() for state/trap differences
  std::string description;
};

/// Strict: identical events (seq, container, offset, field, kind, value),
/// equal trap status and equal final state. Stored pointers are compared by
/// container only, because adjunct-transformed code keeps offsets apart.
/// ValueLevel: equal (kind, value) sequences of reads and writes, and equal
/// data reachable from the return value.
std::optional<Divergence> firstDivergence(const RunResult &a, const RunResult &b, CompareMode mode);
bool traceEqual(const RunResult &a, const RunResult &b, CompareMode mode);

/// Event-only comparison.
bool traceEqual(const Trace &a, const Trace &b, CompareMode mode);

/// Final states as compared by the permutation oracle: every live cell,
/// pointers included, and the return value.
bool sameFinalState(const FinalState &a, const FinalState &b);

} // namespace adj::interp
