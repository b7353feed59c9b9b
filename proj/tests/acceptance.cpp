// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>

#include "defim/suite.hpp"

using namespace defim;

int main() {
  struct Row {
    int criterion;
    const char* suite;
  };
  const Row rows[] = {
      {1, "s1-paper-traces"},
      {2, "s2-sp-table"},
      {3, "s3-extensionality"},
      {4, "s4-definability"},
      {5, "s5-app-sens"},
      {6, "s6-kerth"},
      {7, "s7-beta-postponement"},
      {8, "s8-confluence-invariance"},
      {9, "s9-oracle-agreement"},
  };
  int bad = 0;
  for (const auto& row : rows) {
    SuiteSpec spec;
    spec.name = row.suite;
    auto t0 = std::chrono::steady_clock::now();
    SuiteReport rep;
    std::string note;
    try {
      rep = run_suite(spec);
    } catch (const std::exception& e) {
      note = e.what();
      rep.fail = 1;
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = rep.fail == 0 && !rep.cases.empty();
    if (!ok) ++bad;
    printf("criterion %d (%s): %s  [%zu cases, %.1fs]%s%s\n", row.criterion, row.suite,
           ok ? "PASS" : "FAIL", rep.cases.size(), secs, note.empty() ? "" : " ",
           note.c_str());
    if (!ok)
      for (const auto& c : rep.cases)
        if (c.verdict == "FAIL")
          printf("    %s: %s\n", c.id.c_str(), c.detail.c_str());
    fflush(stdout);
  }
  return bad ? 1 : 0;
}
