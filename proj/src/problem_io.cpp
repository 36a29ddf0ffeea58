#include "qpr/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qpr {
namespace {

[[noreturn]] void fail(const std::string& name, int line,
                       const std::string& msg) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& tok, const std::string& name, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    fail(name, line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size())
    fail(name, line, "trailing characters in number '" + tok + "'");
  return v;
}

long parse_index(const std::string& tok, const std::string& name, int line) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    fail(name, line, "expected an index, got '" + tok + "'");
  }
  if (pos != tok.size() || v < 0)
    fail(name, line, "invalid index '" + tok + "'");
  return v;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

AnyProblem read_problem(std::istream& in, const std::string& name) {
  std::string line;
  int lineno = 0;
  bool saw_magic = false;
  std::optional<std::string> type;
  std::optional<std::size_t> n;
  double offset = 0.0;
  std::vector<std::tuple<std::size_t, std::size_t, double>> couplings;
  std::vector<std::pair<std::size_t, double>> lin;
  std::set<std::pair<std::size_t, std::size_t>> seen_c;
  std::set<std::size_t> seen_f;

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (!saw_magic) {
      if (tok.size() != 2 || tok[0] != "qpr-problem" || tok[1] != "v1")
        fail(name, lineno, "expected header 'qpr-problem v1'");
      saw_magic = true;
      continue;
    }
    if (tok[0] == "type") {
      if (tok.size() != 2 || (tok[1] != "ising" && tok[1] != "qubo"))
        fail(name, lineno, "type must be 'ising' or 'qubo'");
      if (type) fail(name, lineno, "duplicate 'type'");
      type = tok[1];
    } else if (tok[0] == "n") {
      if (tok.size() != 2) fail(name, lineno, "usage: n <count>");
      const long v = parse_index(tok[1], name, lineno);
      if (v < 1) fail(name, lineno, "n must be >= 1");
      if (n) fail(name, lineno, "duplicate 'n'");
      n = static_cast<std::size_t>(v);
    } else if (tok[0] == "offset") {
      if (tok.size() != 2) fail(name, lineno, "usage: offset <value>");
      offset = parse_real(tok[1], name, lineno);
    } else if (tok[0] == "c") {
      if (tok.size() != 4) fail(name, lineno, "usage: c <i> <j> <value>");
      if (!n) fail(name, lineno, "'c' before 'n'");
      const std::size_t i =
          static_cast<std::size_t>(parse_index(tok[1], name, lineno));
      const std::size_t j =
          static_cast<std::size_t>(parse_index(tok[2], name, lineno));
      if (i >= *n || j >= *n) fail(name, lineno, "coupling index out of range");
      if (i >= j) fail(name, lineno, "couplings must be upper triangle (i < j)");
      if (!seen_c.insert({i, j}).second)
        fail(name, lineno, "duplicate coupling (" + tok[1] + "," + tok[2] + ")");
      couplings.emplace_back(i, j, parse_real(tok[3], name, lineno));
    } else if (tok[0] == "f") {
      if (tok.size() != 3) fail(name, lineno, "usage: f <i> <value>");
      if (!n) fail(name, lineno, "'f' before 'n'");
      const std::size_t i =
          static_cast<std::size_t>(parse_index(tok[1], name, lineno));
      if (i >= *n) fail(name, lineno, "field index out of range");
      if (!seen_f.insert(i).second)
        fail(name, lineno, "duplicate field index " + tok[1]);
      lin.emplace_back(i, parse_real(tok[2], name, lineno));
    } else {
      fail(name, lineno, "unknown directive '" + tok[0] + "'");
    }
  }
  if (!saw_magic) fail(name, lineno, "missing 'qpr-problem v1' header");
  if (!type) fail(name, lineno, "missing 'type'");
  if (!n) fail(name, lineno, "missing 'n'");

  if (*type == "ising") {
    IsingProblem p(*n);
    for (const auto& [i, j, v] : couplings) p.add_coupling(i, j, v);
    for (const auto& [i, v] : lin) p.add_field(i, v);
    p.set_offset(offset);
    return p;
  }
  QuboProblem p(*n);
  for (const auto& [i, j, v] : couplings) p.add_entry(i, j, v);
  for (const auto& [i, v] : lin) p.add_entry(i, i, v);
  p.set_offset(offset);
  return p;
}

AnyProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  return read_problem(in, path);
}

namespace {

void write_common(std::ostream& out, const char* type, std::size_t n,
                  double offset, const SymMatrix& m,
                  const std::vector<double>* fields) {
  out << "qpr-problem v1\n";
  out << "type " << type << "\n";
  out << "n " << n << "\n";
  out << "offset " << format_real(offset) << "\n";
  for (const auto& [i, j, v] : m.upper_entries()) {
    if (i == j) continue;
    out << "c " << i << " " << j << " " << format_real(v) << "\n";
  }
  if (fields) {
    for (std::size_t i = 0; i < n; ++i)
      if ((*fields)[i] != 0.0)
        out << "f " << i << " " << format_real((*fields)[i]) << "\n";
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = m.at(i, i);
      if (d != 0.0) out << "f " << i << " " << format_real(d) << "\n";
    }
  }
}

}  // namespace

void write_problem(const IsingProblem& p, std::ostream& out) {
  write_common(out, "ising", p.n(), p.offset(), p.couplings(), &p.fields());
}

void write_problem(const QuboProblem& p, std::ostream& out) {
  write_common(out, "qubo", p.n(), p.offset(), p.matrix(), nullptr);
}

namespace {
template <class P>
void save_impl(const P& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write problem file: " + path);
  write_problem(p, out);
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}
}  // namespace

void save_problem(const IsingProblem& p, const std::string& path) {
  save_impl(p, path);
}

void save_problem(const QuboProblem& p, const std::string& path) {
  save_impl(p, path);
}

}  // namespace qpr
