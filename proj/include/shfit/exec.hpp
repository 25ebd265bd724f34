#pragma once

namespace shfit {

// Execution policy for the data-parallel kernels (contour cells, sweep
// windows). parallel uses OpenMP when compiled in, else falls back to serial.
// Results are written by index, so both policies produce identical bytes.
enum class Exec { serial, parallel };

}  // namespace shfit
