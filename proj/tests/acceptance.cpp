// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <iostream>

#include "lattika/selftest.hpp"

int main() {
  int failures = 0;
  for (auto const& result : lattika::run_acceptance()) {
    lattika::print_criterion(std::cout, result);
    if (!result.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : "criteria failed: " + std::to_string(failures)) << "\n";
  return failures == 0 ? 0 : 1;
}
