#include "rlos/text_format.hpp"

#include "rlos/types.hpp"

#include <array>
#include <charconv>

namespace rlos {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw RuntimeFailure("format_double: conversion failed");
  std::string out(buf.data(), end);
  // to_chars pads the exponent to two digits ("1e-04"); drop the padding.
  if (const auto e = out.find('e'); e != std::string::npos) {
    std::size_t digits = e + 1;
    if (digits < out.size() && (out[digits] == '-' || out[digits] == '+')) ++digits;
    while (digits + 1 < out.size() && out[digits] == '0') out.erase(digits, 1);
  }
  return out;
}

std::string format_fixed(double value, int digits) {
  std::array<char, 128> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                       std::chars_format::fixed, digits);
  if (ec != std::errc{}) throw RuntimeFailure("format_fixed: conversion failed");
  std::string out(buf.data(), end);
  if (out == "-0" || out.find_first_not_of("-0.") == std::string::npos) {
    if (!out.empty() && out.front() == '-') out.erase(0, 1);
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("malformed number for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("malformed integer for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

}  // namespace rlos
