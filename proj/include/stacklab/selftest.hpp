#ifndef STACKLAB_SELFTEST_HPP
#define STACKLAB_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace stacklab::selftest {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs every brute-force oracle suite. Deterministic for a fixed seed.
std::vector<SuiteResult> run_all(std::uint64_t seed);

} // namespace stacklab::selftest

#endif
