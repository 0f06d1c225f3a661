// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace pickforge {

/// Every JSON document the library emits goes through here: objects keep
/// their keys sorted (nlohmann::json stores them in a std::map), two-space
/// indent, trailing newline.
inline std::string canonical_dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace pickforge
