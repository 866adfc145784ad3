#include "dephasim/matrix_io.hpp"

#include <cctype>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "dephasim/errors.hpp"

namespace dephasim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

/// Parses "a+bi" / "a-bi" / "a" / "bi". The imaginary part starts at the
/// last top-level sign that is not a exponent sign.
std::complex<double> parse_complex(const std::string& raw, const std::string& path) {
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigError(path + ": empty matrix entry");

  auto fail = [&]() -> std::complex<double> {
    throw ConfigError(path + ": malformed complex entry '" + s + "'");
  };

  const bool has_i = s.back() == 'i' || s.back() == 'I';
  std::string body = has_i ? s.substr(0, s.size() - 1) : s;
  if (body.empty()) return has_i ? std::complex<double>(0, 1) : fail();

  // Find the split sign separating real and imaginary parts.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    const char c = body[k];
    if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }

  char* end = nullptr;
  if (!has_i) {
    const double re = std::strtod(body.c_str(), &end);
    if (end != body.c_str() + body.size()) return fail();
    return {re, 0.0};
  }
  if (split == std::string::npos) {
    // Pure imaginary, e.g. "0.5i" or "i" / "-i".
    if (body == "+") return {0.0, 1.0};
    if (body == "-") return {0.0, -1.0};
    const double im = std::strtod(body.c_str(), &end);
    if (end != body.c_str() + body.size()) return fail();
    return {0.0, im};
  }
  const std::string re_part = body.substr(0, split);
  std::string im_part = body.substr(split);
  const double re = std::strtod(re_part.c_str(), &end);
  if (end != re_part.c_str() + re_part.size()) return fail();
  double im;
  if (im_part == "+")
    im = 1.0;
  else if (im_part == "-")
    im = -1.0;
  else {
    im = std::strtod(im_part.c_str(), &end);
    if (end != im_part.c_str() + im_part.size()) return fail();
  }
  return {re, im};
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

std::string format_complex(std::complex<double> z) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace

Eigen::MatrixXcd read_density_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open density matrix file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": missing dimension line");
  const long d = std::strtol(line.c_str(), nullptr, 10);
  if (d < 1 || d > 4096) throw ConfigError(path + ": bad dimension '" + trim(line) + "'");

  Eigen::MatrixXcd rho(d, d);
  for (long r = 0; r < d; ++r) {
    if (!std::getline(in, line)) throw ConfigError(path + ": expected " + std::to_string(d) +
                                                   " matrix rows");
    const std::vector<std::string> fields = split_commas(line);
    if (static_cast<long>(fields.size()) != d)
      throw ConfigError(path + ": row " + std::to_string(r + 1) + " has " +
                        std::to_string(fields.size()) + " entries, expected " + std::to_string(d));
    for (long c = 0; c < d; ++c) rho(r, c) = parse_complex(fields[c], path);
  }
  return rho;
}

void write_density_matrix(const std::string& path, const Eigen::MatrixXcd& rho) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write density matrix file: " + path);
  out << rho.rows() << "\n";
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      if (c) out << ", ";
      out << format_complex(rho(r, c));
    }
    out << "\n";
  }
}

Eigen::VectorXd read_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open Hamiltonian file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": missing dimension line");
  const long d = std::strtol(line.c_str(), nullptr, 10);
  if (d < 1 || d > 4096) throw ConfigError(path + ": bad dimension '" + trim(line) + "'");
  if (!std::getline(in, line)) throw ConfigError(path + ": missing energies line");
  const std::vector<std::string> fields = split_commas(line);
  if (static_cast<long>(fields.size()) != d)
    throw ConfigError(path + ": expected " + std::to_string(d) + " energies, got " +
                      std::to_string(fields.size()));
  Eigen::VectorXd energies(d);
  for (long i = 0; i < d; ++i) {
    const std::string f = trim(fields[i]);
    char* end = nullptr;
    energies[i] = std::strtod(f.c_str(), &end);
    if (end != f.c_str() + f.size()) throw ConfigError(path + ": bad energy '" + f + "'");
  }
  return energies;
}

void write_hamiltonian(const std::string& path, const Eigen::VectorXd& energies) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write Hamiltonian file: " + path);
  out << energies.size() << "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    if (i) out << ", ";
    std::snprintf(buf, sizeof(buf), "%.17g", energies[i]);
    out << buf;
  }
  out << "\n";
}

}  // namespace dephasim
