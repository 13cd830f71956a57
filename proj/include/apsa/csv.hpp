#pragma once

#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>

#include "apsa/experiment.hpp"

namespace apsa {

/// Write traces side by side: a `sample` column, then per trace
/// `<name>_misalignment_db,<name>_step,<name>_residual,<name>_diverged`.
/// Values carry 9 significant digits; LF line endings; UTF-8.
inline void emit_csv(std::span<const TraceSet> traces, const std::string& path) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (i == 0) {
      n = traces[i].misalignment_db.size();
    } else if (traces[i].misalignment_db.size() != n) {
      throw std::invalid_argument("emit_csv: trace length mismatch");
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);

  out << "sample";
  for (const TraceSet& t : traces) {
    out << ',' << t.name << "_misalignment_db"
        << ',' << t.name << "_step"
        << ',' << t.name << "_residual"
        << ',' << t.name << "_diverged";
  }
  out << '\n';

  char buf[40];
  for (std::size_t k = 0; k < n; ++k) {
    out << k;
    for (const TraceSet& t : traces) {
      std::snprintf(buf, sizeof buf, "%.9g", t.misalignment_db[k]);
      out << ',' << buf;
      std::snprintf(buf, sizeof buf, "%.9g", t.step_size[k]);
      out << ',' << buf;
      std::snprintf(buf, sizeof buf, "%.9g", t.residual[k]);
      out << ',' << buf;
      const bool flagged =
          t.diverged_at && static_cast<long long>(k) >= *t.diverged_at;
      out << ',' << (flagged ? 1 : 0);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace apsa
