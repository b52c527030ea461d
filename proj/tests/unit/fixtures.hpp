// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace adj::test {

inline std::string fixturePath(const std::string &name) { return std::string(ADJ_FIXTURE_DIR) + "/" + name; }

inline std::string readFixture(const std::string &name) {
  std::ifstream in(fixturePath(name));
  if (!in)
    throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace adj::test
