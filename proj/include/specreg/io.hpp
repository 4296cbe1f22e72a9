#pragma once

#include <string>
#include <vector>

#include "specreg/regularizer.hpp"
#include "specreg/types.hpp"

namespace specreg {

// Shortest decimal that round-trips the double exactly (17 significant
// digits); infinities and NaN serialize as "inf"/"-inf"/"nan".
std::string format_value(double v);

// Kernel text format: line 1 is `k g h`, then k*k*g*h whitespace-separated
// values in storage order (p fastest, then q, z, y). The writer emits one
// value per line; the reader accepts any whitespace. Write-then-read is
// bit-exact for finite kernels.
void kernel_write(const std::string& path, const Kernel4D& K);
Kernel4D kernel_read(const std::string& path);

// Descent trace as CSV with the exact header
// `iter,penalty,sigma_max,sigma_min,kappa,gap_flag,grad_norm`; gap_flag is
// 0/1, every other column is a 17-significant-digit decimal. Oracle-less
// rows carry "nan" in the oracle columns; kappa may be "inf".
void trace_write_csv(const std::string& path, const std::vector<TraceRow>& trace);
std::vector<TraceRow> trace_read_csv(const std::string& path);

} // namespace specreg
