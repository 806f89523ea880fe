#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

// Deterministic text formatting shared by the CSV emitters and the CLI.
// Reals are printed with 17 significant digits so doubles round-trip.

namespace he {

std::string fmt_real(double x);
std::string fmt_int(std::int64_t v);

// Joins cells with commas and appends a newline.
std::string csv_row(const std::vector<std::string>& cells);

// Writes text to the given path, or to stdout when path is empty or "-".
void write_output(const std::string& text, const std::string& path);

}  // namespace he
