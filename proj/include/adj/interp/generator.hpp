// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "adj/cast/ast.hpp"
#include "adj/interp/interp.hpp"

#include <cstdint>
#include <vector>

namespace adj::interp {

inline constexpr int kMinProgramSize = 1;
inline constexpr int kMaxProgramSize = 400;
inline constexpr const char *kGeneratedEntry = "entry";

/// A random pointer program with entry `long entry(int n)`. Mixes container
/// allocations, pointer moves, pointer assignments (including p = q +/- x and
/// &q[x]), reads and writes, calls, if/for nesting and the
/// "moves; q = p; accesses through q" shape. The same seed always yields the
/// same program, and running it on generatedInputs(seed) never traps.
/// Throws std::invalid_argument when size is outside
/// [kMinProgramSize, kMaxProgramSize].
cast::TranslationUnit generateProgram(std::uint64_t seed, int size);

/// The argument list the generated entry is meant to run with.
std::vector<Scalar> generatedInputs(std::uint64_t seed);

} // namespace adj::interp
