#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "qpr/problem.hpp"

namespace qpr {

using AnyProblem = std::variant<IsingProblem, QuboProblem>;

/// Text problem format (see docs/FORMATS.md):
///   qpr-problem v1
///   type ising|qubo
///   n <count>
///   offset <real>
///   c <i> <j> <value>   (upper triangle, i < j)
///   f <i> <value>       (ising field h_i / qubo diagonal Q_ii)
/// '#' starts a comment. Duplicate (i,j) or duplicate f indices are
/// rejected; parse errors carry the line number.
AnyProblem load_problem(const std::string& path);
AnyProblem read_problem(std::istream& in, const std::string& name = "<stream>");

void save_problem(const IsingProblem& p, const std::string& path);
void save_problem(const QuboProblem& p, const std::string& path);
void write_problem(const IsingProblem& p, std::ostream& out);
void write_problem(const QuboProblem& p, std::ostream& out);

}  // namespace qpr
