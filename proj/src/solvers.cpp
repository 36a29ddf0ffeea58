#include "qpr/solvers.hpp"

#include <stdexcept>

#include "qpr/qaoa.hpp"

namespace qpr {

bool known_solver_id(const std::string& id) {
  return id == "sa" || id == "bsb" || id == "dsb" || id == "subqubo" ||
         id == "brute" || id == "qaoa";
}

void SolverSpec::validate() const {
  if (!known_solver_id(id))
    throw std::invalid_argument("unknown solver id: " + id);
  if (id == "sa") sa.validate();
  if (id == "bsb" || id == "dsb") sb.validate();
  if (id == "subqubo") {
    if (subqubo_subset < 1)
      throw std::invalid_argument("subqubo: subset_size must be >= 1");
    if (!known_solver_id(subqubo_inner) || subqubo_inner == "subqubo")
      throw std::invalid_argument("subqubo: bad inner solver '" +
                                  subqubo_inner + "'");
  }
  if (id == "qaoa") {
    if (qaoa_depth < 1)
      throw std::invalid_argument("qaoa: depth must be >= 1");
    if (qaoa_restarts < 1)
      throw std::invalid_argument("qaoa: restarts must be >= 1");
  }
}

namespace {

SubQuboParams make_subqubo_params(const SolverSpec& spec, std::size_t n,
                                  const RunLimits& limits) {
  SubQuboParams params;
  params.subset_size = std::min(spec.subqubo_subset, n);
  params.rounds = spec.subqubo_rounds;
  SolverSpec inner;
  inner.id = spec.subqubo_inner;
  inner.sa = spec.sa;
  inner.sb = spec.sb;
  inner.brute_workers = spec.brute_workers;
  params.inner_solver = [inner, limits](const QuboProblem& q,
                                        std::uint64_t seed) {
    return solve_qubo(q, inner, seed, limits);
  };
  return params;
}

}  // namespace

SolveResult solve_ising(const IsingProblem& p, const SolverSpec& spec,
                        std::uint64_t seed, const RunLimits& limits) {
  spec.validate();
  if (spec.id == "sa") return sa_solve(p, spec.sa, seed, limits);
  if (spec.id == "bsb" || spec.id == "dsb") {
    SbParams params = spec.sb;
    params.variant =
        spec.id == "dsb" ? SbVariant::Discrete : SbVariant::Ballistic;
    return sb_solve(p, params, seed, limits);
  }
  if (spec.id == "brute") return brute_force_solve(p, {spec.brute_workers});
  if (spec.id == "qaoa") {
    auto [params, result] =
        qaoa_optimize(p, spec.qaoa_depth, spec.qaoa_restarts, seed);
    return result;
  }
  // subqubo is QUBO-native: convert, solve, map the configuration back
  const QuboProblem q = ising_to_qubo(p);
  SolveResult res =
      subqubo_solve(q, make_subqubo_params(spec, q.n(), limits), seed);
  const SpinConfig spins = spins_from_binary(res.bits());
  res.energy = p.energy(spins);
  res.config = spins;
  return res;
}

SolveResult solve_qubo(const QuboProblem& p, const SolverSpec& spec,
                       std::uint64_t seed, const RunLimits& limits) {
  spec.validate();
  if (spec.id == "brute") return brute_force_solve(p, {spec.brute_workers});
  if (spec.id == "subqubo")
    return subqubo_solve(p, make_subqubo_params(spec, p.n(), limits), seed);
  // spin-native solvers run on the converted problem
  const IsingProblem ip = qubo_to_ising(p);
  SolveResult res = solve_ising(ip, spec, seed, limits);
  const BinaryConfig bits = binary_from_spins(res.spins());
  res.energy = p.energy(bits);
  res.config = bits;
  return res;
}

}  // namespace qpr
