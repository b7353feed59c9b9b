#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace defim {

struct SuiteSpec {
  std::string name;
  uint64_t seed = 1;
  size_t fuel = 10000;
  int depth = 2;
  size_t cases = 0;  // 0 = suite default
  std::string model_dir;
};

struct SuiteCase {
  std::string suite;
  std::string id;
  std::string verdict;  // PASS | FAIL | INCONCLUSIVE
  size_t fuel_used = 0;
  std::string detail;   // counterexample / witness, already shrunk
};

struct SuiteReport {
  std::vector<SuiteCase> cases;
  size_t pass = 0, fail = 0, inconclusive = 0;

  void add(SuiteCase c);
  // suite=<s> case=<id> verdict=<v> fuel=<n> detail=<escaped>
  std::string machine_lines() const;
  std::string summary() const;
};

std::vector<std::string> suite_names();  // s1-paper-traces ... s9-oracle-agreement
SuiteReport run_suite(const SuiteSpec& spec);

// In-memory truncation presentations used by the SP table suite.
std::string z_model_dsl(int k);  // chain z0..zk plus bottom tail s
std::string u_model_dsl(int k);  // cyclic u0..uk

}  // namespace defim
