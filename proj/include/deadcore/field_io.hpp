#pragma once

#include <string>
#include <vector>

#include "deadcore/grid.hpp"

namespace deadcore {

/// CSV with header i,j,x,y,value, one row per node, 17 significant digits.
void write_field_csv(const Field& f, const std::string& path);
/// Grids whose origin is -(N-1)h/2 on both axes come back as disks of radius
/// (N-1)h/2, anything else as boxes.
Field read_field_csv(const std::string& path);

/// "DCLF", u16 version, N and h as little-endian f64, then N*N f64 values with
/// i running fastest. The grid is read back as a centred disk.
void write_field_binary(const Field& f, const std::string& path);
Field read_field_binary(const std::string& path);

/// Generic numeric CSV table with a header row.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);

}  // namespace deadcore
