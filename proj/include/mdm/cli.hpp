// cli.hpp
// Command-line front end: curve generation, Monte Carlo experiments, and the
// headline reproduction run. Exit codes: 0 success, 2 usage error, 3 I/O
// error, 4 comparison failure (reproduce only).

#pragma once

namespace mdm::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;
inline constexpr int kIoError = 3;
inline constexpr int kComparisonFailure = 4;

int run(int argc, const char* const* argv);

}  // namespace mdm::cli
