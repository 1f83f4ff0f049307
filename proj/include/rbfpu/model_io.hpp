#pragma once

#include <filesystem>
#include <iosfwd>

#include "rbfpu/pu.hpp"

namespace rbfpu {

// Plain-text model format, all reals in shortest round-trip decimal:
//
//   rbfpu-model 1
//   dim <M>
//   kernel <family>
//   weight wendland_c2
//   min_radius <delta>
//   subdomains <d>
//   nodes <N>
//   <x_1> ... <x_M> <f>            (N lines)
//   patch <c_1> ... <c_M> <radius> <epsilon> <n> <solvable> <fallback>
//   indices <i_1> ... <i_n>
//   coefficients <c_1> ... <c_n>   (the three patch lines repeat d times)

void write_model(std::ostream& out, const PuModel& model);
PuModel read_model(std::istream& in);

/// Writes atomically: a temporary file is renamed into place on success.
void save_model(const std::filesystem::path& path, const PuModel& model);
PuModel load_model(const std::filesystem::path& path);

}  // namespace rbfpu
