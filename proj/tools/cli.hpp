#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace rbfpu::tools {

/// Runs one command (`fit`, `eval`, `compare`, `bench-ips`). `args` excludes
/// the program name. Returns the process exit status; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchRow {
  std::size_t n = 0;
  double t_ips = 0.0;  // seconds, best of the repeats
  double t_sps = 0.0;
};

/// Build-phase timing of the integer-based grid against the sort-based
/// partition on n Halton points in 2D, block edge from the covering.
BenchRow bench_ips(std::size_t n, std::size_t repeats);

}  // namespace rbfpu::tools
