#include "afm/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace afm {

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << "k,f_y,F_x,grad_norm,restart,gd_gamma,sigma,beta,gamma\n";
  char line[512];
  for (const TraceRow& r : trace.rows) {
    std::snprintf(line, sizeof line,
                  "%d,%.17g,%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g\n", r.k, r.f_y,
                  r.f_x, r.grad_norm, r.restart ? 1 : 0, r.gd_gamma ? 1 : 0,
                  r.sigma, r.beta, r.gamma);
    out << line;
  }
}

std::string trace_csv(const Trace& trace) {
  std::ostringstream ss;
  write_trace_csv(trace, ss);
  return ss.str();
}

void write_trace_csv_file(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_trace_csv(trace, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace afm
