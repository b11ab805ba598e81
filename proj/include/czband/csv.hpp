#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace czband::csv {

/// 17 significant digits, '.' separator, locale independent.
std::string format(double value);

/// Minimal row writer; fields are written verbatim, rows end in '\n'.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> names);
  Writer& field(double value);
  Writer& field(long long value);
  Writer& field(int value) { return field(static_cast<long long>(value)); }
  Writer& field(std::size_t value) { return field(static_cast<long long>(value)); }
  Writer& field(std::string_view text);
  void end_row();

 private:
  void separator();
  std::ostream& out_;
  bool row_started_ = false;
};

}  // namespace czband::csv
