// CSV persistence for fields and time-slice histories.
//
// Field file:   header "x,u",   one row per node in increasing x, LF endings.
// History file: header "t,x,u", rows grouped by time slice in increasing t.
// Numbers are written in shortest round-trip decimal form so a write/read
// cycle reproduces every binary64 value bit-for-bit.
#pragma once
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hjlab/grid.hpp"

namespace hjlab {

std::string format_double(double v);

void write_field_csv(const ScalarField& f, const std::filesystem::path& path);
ScalarField read_field_csv(const std::filesystem::path& path);
// Reads and checks the node coordinates against an expected grid.
ScalarField read_field_csv(const std::filesystem::path& path, const Grid& expected);

// write + read back; used by tests and as a persistence self-check.
ScalarField field_csv_round_trip(const ScalarField& f, const std::filesystem::path& path);

void write_history_csv(const std::vector<double>& times,
                       const std::vector<ScalarField>& fields,
                       const std::filesystem::path& path);
std::pair<std::vector<double>, std::vector<ScalarField>>
read_history_csv(const std::filesystem::path& path);

// Whitespace-separated plot data (gnuplot-consumable).
void write_field_dat(const ScalarField& f, const std::filesystem::path& path);
void write_series_dat(const std::vector<double>& t, const std::vector<double>& y,
                      const std::filesystem::path& path);

} // namespace hjlab
