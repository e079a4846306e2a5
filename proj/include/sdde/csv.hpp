#pragma once

#include <string>
#include <vector>

#include "sdde/carma.hpp"
#include "sdde/kernel.hpp"
#include "sdde/multivar.hpp"
#include "sdde/simulate.hpp"

namespace sdde {

/// All writers emit comma-separated values with 17 significant digits, one
/// header line, LF line endings. Throws when the file cannot be opened.

void write_kernel_csv(const std::string& path, const KernelGrid& grid);          // t,g
void write_path_csv(const std::string& path, const PathSample& sample);         // t,x
void write_path_csv(const std::string& path, const MultiPathSample& sample);    // t,x1,...,xd
void write_region_csv(const std::string& path, const std::vector<RegionRow>& rows);
void write_matrix_kernel_csv(const std::string& path, const MatrixKernelGrid& grid);

/// One value formatted the same way the writers format fields.
std::string csv_number(double v);

}  // namespace sdde
