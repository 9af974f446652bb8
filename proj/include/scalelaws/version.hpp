#pragma once

namespace scalelaws {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "scalelaws-report/1";

}  // namespace scalelaws
