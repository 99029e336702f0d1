#pragma once

// Text serialization of simulation records.
//
// trace.csv   t,x_d,xd_dot,xd_ddot,x,x_dot,e,e_dot,eps,tau,d_hat,d_true
// weights.csv t,V_0_0,...,V_<in>_<h-1>,W_0,...,W_<h>   (V row-major; row <in> is the bias row)
// metrics.txt key = value, one metric per line
//
// Floats use the shortest decimal that round-trips to the same double.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "rovctl/simulation.hpp"

namespace rovctl {

std::string format_double(double v);

void write_trace_csv(std::ostream& os, const SimRecord& rec);
void write_weights_csv(std::ostream& os, const SimRecord& rec);
void write_metrics(std::ostream& os, const Metrics& m);

std::string trace_csv(const SimRecord& rec);

/// Side-by-side metrics for two runs with the per-metric ratio a/b.
void write_comparison(std::ostream& os, std::string_view label_a, const Metrics& a,
                      std::string_view label_b, const Metrics& b);

/// Writes to `<path>.tmp` and renames over `path`. Throws std::runtime_error.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace rovctl
