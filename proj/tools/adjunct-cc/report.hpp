// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "adj/adjunct/adjunct.hpp"
#include "adj/depend/depend.hpp"
#include "adj/interp/interp.hpp"
#include "adj/patterns/lil.hpp"
#include "adj/scan/scan.hpp"

#include "json.hpp"

namespace adjcc {

using nlohmann::ordered_json;

ordered_json spanJson(const adj::cast::SourceSpan &s);
ordered_json transformJson(const adj::adjunct::TransformResult &r);
ordered_json lilJson(const std::vector<adj::patterns::LilMatch> &ms);
ordered_json loopsJson(const adj::depend::DependenceReport &r);
ordered_json countsJson(const adj::scan::Counts &c);
ordered_json scanJson(const adj::scan::ApplicabilityReport &r);
ordered_json trapJson(const std::optional<adj::interp::Trap> &t);

} // namespace adjcc
