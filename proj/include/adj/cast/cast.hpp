// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Front end for the C subset: parse, type check, print, compare.
// The accepted grammar is documented in docs/subset.md.

#pragma once

#include "adj/cast/ast.hpp"
#include "adj/cast/diagnostic.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace adj::cast {

/// Parses and type checks. Throws FrontendError on the first problem.
TranslationUnit parse(std::string_view source, const std::string &file = "<input>");

/// Syntax only; the result has no resolved types or declaration ids.
TranslationUnit parseSyntax(std::string_view source, const std::string &file = "<input>");

/// Resolves identifiers, assigns declaration ids and computes expression
/// types in place. Throws FrontendError(ErrorKind::Type) on violations.
void typecheck(TranslationUnit &tu);

/// Canonical C text: two-space indentation, one statement per line.
std::string print(const TranslationUnit &tu);
std::string print(const Stmt &stmt, int indent = 0);
std::string print(const Expr &expr);

/// Equality ignoring spans, resolved types and declaration ids.
bool structuralEqual(const TranslationUnit &a, const TranslationUnit &b);
bool structuralEqual(const Function &a, const Function &b);
bool structuralEqual(const Stmt &a, const Stmt &b);
bool structuralEqual(const Expr &a, const Expr &b);
bool structuralEqual(const std::vector<Stmt> &a, const std::vector<Stmt> &b);

/// Signature of an external function the interpreter models natively.
/// A "void*" parameter accepts any pointer.
struct BuiltinSignature {
  std::string name;
  CType returnType;
  std::vector<CType> params;
};

const std::vector<BuiltinSignature> &builtinSignatures();
const BuiltinSignature *findBuiltin(std::string_view name);

} // namespace adj::cast
