#include "rovctl/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace rovctl {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_trace_csv(std::ostream& os, const SimRecord& rec) {
  os << "t,x_d,xd_dot,xd_ddot,x,x_dot,e,e_dot,eps,tau,d_hat,d_true\n";
  for (const SimRow& r : rec.rows) {
    const std::array<double, 12> cols{r.t, r.xd,  r.xd_dot, r.xd_ddot, r.x,     r.x_dot,
                                      r.e, r.e_dot, r.eps,  r.tau,     r.d_hat, r.d_true};
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os << ',';
      os << format_double(cols[i]);
    }
    os << '\n';
  }
}

void write_weights_csv(std::ostream& os, const SimRecord& rec) {
  os << 't';
  for (int i = 0; i <= rec.ann_input_dim; ++i)
    for (int j = 0; j < rec.ann_hidden_dim; ++j) os << ",V_" << i << '_' << j;
  for (int j = 0; j <= rec.ann_hidden_dim; ++j) os << ",W_" << j;
  os << '\n';
  for (const WeightSnapshot& s : rec.weights) {
    os << format_double(s.t);
    for (double v : s.values) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_metrics(std::ostream& os, const Metrics& m) {
  os << "rms_error = " << format_double(m.rms_error) << '\n'
     << "max_abs_error = " << format_double(m.max_abs_error) << '\n'
     << "velocity_overshoot = " << format_double(m.velocity_overshoot) << '\n'
     << "limit_cycle_amplitude = " << format_double(m.limit_cycle_amplitude) << '\n';
}

std::string trace_csv(const SimRecord& rec) {
  std::ostringstream os;
  write_trace_csv(os, rec);
  return os.str();
}

void write_comparison(std::ostream& os, std::string_view label_a, const Metrics& a,
                      std::string_view label_b, const Metrics& b) {
  auto ratio = [](double x, double y) { return y == 0.0 ? (x == 0.0 ? 1.0 : INFINITY) : x / y; };
  auto line = [&](const char* name, double x, double y) {
    os << name << ' ' << format_double(x) << ' ' << format_double(y) << ' '
       << format_double(ratio(x, y)) << '\n';
  };
  os << "metric " << label_a << ' ' << label_b << " ratio\n";
  line("rms_error", a.rms_error, b.rms_error);
  line("max_abs_error", a.max_abs_error, b.max_abs_error);
  line("velocity_overshoot", a.velocity_overshoot, b.velocity_overshoot);
  line("limit_cycle_amplitude", a.limit_cycle_amplitude, b.limit_cycle_amplitude);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

}  // namespace rovctl
