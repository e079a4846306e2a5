#include "sdde/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sdde {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

}  // namespace

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_kernel_csv(const std::string& path, const KernelGrid& grid) {
    auto out = open_out(path);
    out << "t,g\n";
    for (size_t i = 0; i < grid.values.size(); ++i)
        out << csv_number(grid.time_at(i)) << ',' << csv_number(grid.values[i]) << '\n';
}

void write_path_csv(const std::string& path, const PathSample& sample) {
    auto out = open_out(path);
    out << "t,x\n";
    for (size_t i = 0; i < sample.t.size(); ++i)
        out << csv_number(sample.t[i]) << ',' << csv_number(sample.x[i]) << '\n';
}

void write_path_csv(const std::string& path, const MultiPathSample& sample) {
    auto out = open_out(path);
    size_t d = sample.x.empty() ? 0 : sample.x[0].size();
    out << 't';
    for (size_t j = 1; j <= d; ++j) out << ",x" << j;
    out << '\n';
    for (size_t i = 0; i < sample.t.size(); ++i) {
        out << csv_number(sample.t[i]);
        for (size_t j = 0; j < d; ++j) out << ',' << csv_number(sample.x[i][j]);
        out << '\n';
    }
}

void write_region_csv(const std::string& path, const std::vector<RegionRow>& rows) {
    auto out = open_out(path);
    out << "beta,ball_tsai,cor34,thm31\n";
    for (const auto& row : rows)
        out << csv_number(row.beta) << ',' << (row.ordering ? 1 : 0) << ','
            << (row.classifier ? 1 : 0) << ',' << (row.density ? 1 : 0) << '\n';
}

void write_matrix_kernel_csv(const std::string& path, const MatrixKernelGrid& grid) {
    auto out = open_out(path);
    auto d = static_cast<Eigen::Index>(grid.dim());
    out << 't';
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k) out << ",g" << j + 1 << k + 1;
    out << '\n';
    for (size_t m = 0; m < grid.values.size(); ++m) {
        out << csv_number(grid.time_at(m));
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index k = 0; k < d; ++k) out << ',' << csv_number(grid.values[m](j, k));
        out << '\n';
    }
}

}  // namespace sdde
