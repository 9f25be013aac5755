#pragma once

namespace qfern {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace qfern
