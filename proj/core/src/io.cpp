#include "ikwsms/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "ikwsms/errors.hpp"

namespace ikwsms::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::vector<std::string> coefficient_names(const Dataset& data) {
  std::vector<std::string> names;
  for (Eigen::Index k = 0; k < data.x_tilde.cols(); ++k) names.push_back("x" + std::to_string(k + 2));
  return names;
}

Dataset parse_dataset(const std::string& text, LoadReport* report) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("dataset file is empty", 0);

  std::vector<std::string> header;
  for (auto field : split_fields(line)) header.emplace_back(field);
  std::map<std::string, std::size_t, std::less<>> position;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!position.emplace(header[c], c).second) {
      throw ParseError("duplicate column '" + header[c] + "'", 0, header[c]);
    }
  }
  for (const char* required : {"y", "x1", "v"}) {
    if (!position.count(required)) {
      throw ParseError(std::string("missing column '") + required + "'", 0, required);
    }
  }
  int extra = 0;
  while (position.count("x" + std::to_string(extra + 2))) ++extra;
  if (position.size() != static_cast<std::size_t>(3 + extra)) {
    for (const auto& [name, c] : position) {
      const bool known = name == "y" || name == "x1" || name == "v" ||
                         (name.size() > 1 && name[0] == 'x' &&
                          std::atoi(name.c_str() + 1) >= 2 && std::atoi(name.c_str() + 1) < 2 + extra);
      if (!known) {
        throw ParseError("unexpected column '" + name + "' (expected y, x1, x2..xk, v)", 0, name);
      }
    }
  }

  std::vector<int> ys;
  std::vector<double> x1s, vs;
  std::vector<std::vector<double>> xt(static_cast<std::size_t>(extra));
  long row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(header.size()), row);
    }
    auto number = [&](const std::string& column) {
      double value = 0.0;
      if (!parse_number(fields[position.at(column)], value) || !std::isfinite(value)) {
        throw ParseError("row " + std::to_string(row) + ", column " + column +
                         ": expected a finite number", row, column);
      }
      return value;
    };
    const double y = number("y");
    if (y != 0.0 && y != 1.0) {
      throw ParseError("row " + std::to_string(row) + ", column y: value must be 0 or 1", row, "y");
    }
    ys.push_back(static_cast<int>(y));
    x1s.push_back(number("x1"));
    for (int k = 0; k < extra; ++k) xt[std::size_t(k)].push_back(number("x" + std::to_string(k + 2)));
    vs.push_back(number("v"));
  }

  Dataset data;
  const auto n = static_cast<Eigen::Index>(ys.size());
  data.y = Eigen::Map<Eigen::VectorXi>(ys.data(), n);
  data.x1 = Eigen::Map<Eigen::VectorXd>(x1s.data(), n);
  data.v = Eigen::Map<Eigen::VectorXd>(vs.data(), n);
  data.x_tilde.resize(n, extra);
  for (int k = 0; k < extra; ++k) {
    data.x_tilde.col(k) = Eigen::Map<Eigen::VectorXd>(xt[std::size_t(k)].data(), n);
  }
  if (report) {
    report->rows = ys.size();
    report->columns = header;
  }
  return data;
}

Dataset load_dataset(const std::filesystem::path& path, LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dataset file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str(), report);
}

std::string format_dataset(const Dataset& data) {
  std::string out = "y,x1";
  for (const auto& name : coefficient_names(data)) out += "," + name;
  out += ",v\n";
  for (Eigen::Index i = 0; i < data.y.size(); ++i) {
    out += std::to_string(data.y(i)) + ',' + format_double(data.x1(i));
    for (Eigen::Index k = 0; k < data.x_tilde.cols(); ++k) {
      out += ',' + format_double(data.x_tilde(i, k));
    }
    out += ',' + format_double(data.v(i)) + '\n';
  }
  return out;
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  write_file_atomic(path, format_dataset(data));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorClass::input, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorClass::input, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorClass::input, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace ikwsms::io
