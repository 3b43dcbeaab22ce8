#pragma once

namespace gapcert {

inline constexpr const char* kToolVersion = "gapcert 0.1.0";

} // namespace gapcert
