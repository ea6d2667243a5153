#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stackel::cli {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int column(const std::string& name) const;
};

/// Throws CsvError on a missing header, ragged rows or non-numeric cells.
Table read_csv(const std::string& path);

/// drift.svg (log10 relative drift of H, F*, J against t) and trace.svg
/// (q0-q1 and q0-q2 projections); returns the written paths.
std::vector<std::string> plot_trajectory(const Table& t, const std::string& out_dir);

}  // namespace stackel::cli
