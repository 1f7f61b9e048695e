#pragma once

namespace lpreduce {

inline constexpr const char* artifact_version = "1.0.0";

}  // namespace lpreduce
