// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Whole-container read/write annotations for external calls.

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adj::effects {

enum class Effect { Read, Write, ReadWrite };
enum class Special { None, AllocationDelegation };

const char *effectName(Effect e);
const char *specialName(Special s);
std::optional<Effect> effectFromString(std::string_view s);
std::ostream &operator<<(std::ostream &os, Effect e);

struct ParamEffect {
  int index = 0;
  Effect effect = Effect::ReadWrite;

  friend bool operator==(const ParamEffect &, const ParamEffect &) = default;
};

struct EffectAnnotation {
  std::string function;
  std::vector<ParamEffect> params; ///< sorted by index
  Special special = Special::None;

  const ParamEffect *param(int index) const;
  friend bool operator==(const EffectAnnotation &, const EffectAnnotation &) = default;
};

/// Malformed effect file. what() carries "file:line:col: message" when a
/// position is known.
class EffectError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class EffectDatabase {
public:
  /// An empty database: every lookup gets the conservative default.
  EffectDatabase() = default;

  /// memcpy, memset, free, atoi, the HMAC_* set and the allocation intrinsic.
  static EffectDatabase builtins();

  /// Reads a JSON effect file and layers it over the built-ins.
  static EffectDatabase load(const std::string &path);

  /// Same as load() for in-memory text. sourceName is used in errors.
  static EffectDatabase fromJson(std::string_view text, const std::string &sourceName = "<effects>",
                                 bool withBuiltins = true);

  /// Adds an entry. Throws EffectError if the function is already present.
  void add(EffectAnnotation annotation);
  /// Adds or replaces.
  void put(EffectAnnotation annotation);
  bool remove(const std::string &function);

  const EffectAnnotation *find(std::string_view function) const;
  bool contains(std::string_view function) const { return find(function) != nullptr; }

  /// Annotated effect, or ReadWrite when the function or index is unknown.
  Effect effectOf(std::string_view callee, int argIndex) const;
  bool isAllocationDelegation(std::string_view callee) const;

  /// Entries ordered by function name.
  std::vector<EffectAnnotation> entries() const;
  std::size_t size() const { return entries_.size(); }

  /// JSON array in the same format load() accepts.
  std::string toJson() const;

private:
  std::map<std::string, EffectAnnotation, std::less<>> entries_;
};

/// Name used for the allocation intrinsic ("new T[n]") in the database.
inline constexpr const char *kAllocIntrinsic = "new";

} // namespace adj::effects
