#pragma once

#include <string>

// Filled in by CMake so the suites find fixtures and the CLI binary no matter
// where ctest runs them.
#ifndef EVSCHED_FIXTURE_DIR
#define EVSCHED_FIXTURE_DIR "fixtures"
#endif

namespace test_paths {

inline std::string fixture(const std::string& name) {
    return std::string(EVSCHED_FIXTURE_DIR) + "/" + name;
}

}  // namespace test_paths
