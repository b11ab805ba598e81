#include "czband/csv.hpp"

#include <charconv>
#include <cmath>

namespace czband::csv {

std::string format(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void Writer::header(std::initializer_list<std::string_view> names) {
  for (auto name : names) field(name);
  end_row();
}

void Writer::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

Writer& Writer::field(double value) {
  separator();
  out_ << format(value);
  return *this;
}

Writer& Writer::field(long long value) {
  separator();
  out_ << value;
  return *this;
}

Writer& Writer::field(std::string_view text) {
  separator();
  out_ << text;
  return *this;
}

void Writer::end_row() {
  out_ << '\n';
  row_started_ = false;
}

}  // namespace czband::csv
