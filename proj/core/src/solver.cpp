#include "cspimp/solver.hpp"

#include <algorithm>
#include <functional>

#include "cspimp/error.hpp"

namespace cspimp {

const char* to_string(Solver::Method m) {
  switch (m) {
    case Solver::Method::two_sat: return "2-SAT";
    case Solver::Method::horn: return "Horn";
    case Solver::Method::dual_horn: return "dual-Horn";
    case Solver::Method::affine: return "affine";
    case Solver::Method::exhaustive: return "exhaustive";
  }
  return "?";
}

Solver::Solver(const CspInstance& inst, const ConstraintLanguage& lang, const Classification& cls,
               SolverOptions opts)
    : inst_(&inst), lang_(&lang), opts_(opts), n_(inst.num_vars) {
  inst.validate(lang);
  switch (cls.tractability) {
    case Tractability::majority: method_ = Method::two_sat; break;
    case Tractability::min: method_ = Method::horn; break;
    case Tractability::max: method_ = Method::dual_horn; break;
    case Tractability::minority: method_ = Method::affine; break;
    default: method_ = Method::exhaustive; break;
  }
  switch (method_) {
    case Method::two_sat: clauses_ = instance_clauses(inst, lang, ClauseShape::width2); break;
    case Method::horn: clauses_ = instance_clauses(inst, lang, ClauseShape::horn); break;
    case Method::dual_horn: clauses_ = instance_clauses(inst, lang, ClauseShape::dualhorn); break;
    case Method::affine:
      for (const auto& con : inst.constraints) {
        for (const ParityEquation& eq : extract_parity_equations(lang.at(con.relation))) {
          std::vector<std::uint64_t> row(n_ / 64 + 1, 0);
          for (std::size_t j = 0; j < con.scope.size(); ++j) {
            if (!(eq.mask >> j & 1)) continue;
            std::size_t v = con.scope[j] - 1;
            row[v / 64] ^= std::uint64_t{1} << (v % 64);
          }
          if (eq.rhs) row[n_ / 64] ^= std::uint64_t{1} << (n_ % 64);
          equations_.push_back(std::move(row));
        }
      }
      break;
    case Method::exhaustive: break;
  }
  for (const auto& c : clauses_)
    if (c.empty()) trivially_unsat_ = true;
}

std::optional<Assignment> Solver::solve(const PartialAssignment& partial) const {
  for (const auto& [v, b] : partial.bindings())
    if (v > n_) throw InvalidArgument("partial assignment binds x" + std::to_string(v) + " outside the instance");
  if (trivially_unsat_) return std::nullopt;
  std::optional<Assignment> out;
  switch (method_) {
    case Method::two_sat: out = solve_two_sat(partial); break;
    case Method::horn: out = solve_horn(partial, false); break;
    case Method::dual_horn: out = solve_horn(partial, true); break;
    case Method::affine: out = solve_affine(partial); break;
    case Method::exhaustive: out = solve_exhaustive(partial); break;
  }
  return out;
}

std::optional<Assignment> Solver::solve_two_sat(const PartialAssignment& partial) const {
  const std::size_t nodes = 2 * n_;
  // node 2(v-1) is x_v, 2(v-1)+1 is not x_v
  auto node = [](Literal l) { return 2 * (l.var - 1) + (l.positive ? 0 : 1); };
  std::vector<std::vector<std::uint32_t>> adj(nodes);
  auto implies = [&](std::size_t a, std::size_t b) { adj[a].push_back(static_cast<std::uint32_t>(b)); };
  auto add_clause = [&](const Clause& c) {
    if (c.size() == 1) {
      implies(node(c[0]) ^ 1, node(c[0]));
    } else {
      implies(node(c[0]) ^ 1, node(c[1]));
      implies(node(c[1]) ^ 1, node(c[0]));
    }
  };
  for (const auto& c : clauses_) add_clause(c);
  for (const auto& [v, b] : partial.bindings()) add_clause(Clause{Literal{v, b != 0}});

  // Iterative Tarjan; components are numbered in reverse topological order.
  std::vector<std::int32_t> index(nodes, -1);
  std::vector<std::int32_t> low(nodes, 0);
  std::vector<std::int32_t> comp(nodes, -1);
  std::vector<std::uint32_t> stack;
  std::vector<char> on_stack(nodes, 0);
  std::int32_t counter = 0;
  std::int32_t ncomp = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  for (std::size_t s = 0; s < nodes; ++s) {
    if (index[s] != -1) continue;
    call.emplace_back(static_cast<std::uint32_t>(s), 0);
    index[s] = low[s] = counter++;
    stack.push_back(static_cast<std::uint32_t>(s));
    on_stack[s] = 1;
    while (!call.empty()) {
      auto& [u, edge] = call.back();
      if (edge < adj[u].size()) {
        std::uint32_t w = adj[u][edge++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[u] = std::min(low[u], index[w]);
        }
        continue;
      }
      if (low[u] == index[u]) {
        while (true) {
          std::uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
          if (w == u) break;
        }
        ++ncomp;
      }
      std::uint32_t done = u;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  Assignment a(n_, 0);
  for (std::size_t v = 0; v < n_; ++v) {
    if (comp[2 * v] == comp[2 * v + 1]) return std::nullopt;
    a[v] = comp[2 * v] < comp[2 * v + 1] ? 1 : 0;
  }
  return a;
}

std::optional<Assignment> Solver::solve_horn(const PartialAssignment& partial, bool dual) const {
  // Least model of Horn clauses; the dual-Horn case runs on flipped polarities.
  std::vector<std::size_t> remaining(clauses_.size(), 0);
  std::vector<Var> head(clauses_.size(), 0);
  std::vector<std::vector<std::uint32_t>> occurs(n_ + 1);
  for (std::size_t c = 0; c < clauses_.size(); ++c) {
    for (const Literal& l : clauses_[c]) {
      bool pos = l.positive != dual;
      if (pos) {
        head[c] = l.var;
      } else {
        ++remaining[c];
        occurs[l.var].push_back(static_cast<std::uint32_t>(c));
      }
    }
  }
  std::vector<std::uint8_t> value(n_ + 1, 0);
  std::vector<Var> queue;
  auto set_true = [&](Var v) {
    if (!value[v]) {
      value[v] = 1;
      queue.push_back(v);
    }
  };
  for (std::size_t c = 0; c < clauses_.size(); ++c) {
    if (remaining[c] != 0) continue;
    if (head[c] == 0) return std::nullopt;
    set_true(head[c]);
  }
  for (const auto& [v, b] : partial.bindings())
    if ((b != 0) != dual) set_true(v);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    for (std::uint32_t c : occurs[queue[qi]]) {
      if (--remaining[c] != 0) continue;
      if (head[c] == 0) return std::nullopt;
      set_true(head[c]);
    }
  }
  for (const auto& [v, b] : partial.bindings())
    if (value[v] != ((b != 0) != dual ? 1 : 0)) return std::nullopt;
  Assignment a(n_);
  for (std::size_t v = 1; v <= n_; ++v) a[v - 1] = static_cast<std::uint8_t>(value[v] != dual ? 1 : 0);
  return a;
}

std::optional<Assignment> Solver::solve_affine(const PartialAssignment& partial) const {
  const std::size_t words = n_ / 64 + 1;
  auto bit = [](const std::vector<std::uint64_t>& row, std::size_t i) { return row[i / 64] >> (i % 64) & 1; };
  std::vector<std::vector<std::uint64_t>> rows = equations_;
  for (const auto& [v, b] : partial.bindings()) {
    std::vector<std::uint64_t> row(words, 0);
    row[(v - 1) / 64] |= std::uint64_t{1} << ((v - 1) % 64);
    if (b) row[n_ / 64] ^= std::uint64_t{1} << (n_ % 64);
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n_ && rank < rows.size(); ++col) {
    std::size_t sel = rank;
    while (sel < rows.size() && !bit(rows[sel], col)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && bit(rows[r], col))
        for (std::size_t w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (bit(rows[r], n_)) return std::nullopt;
  Assignment a(n_, 0);
  for (std::size_t r = 0; r < rank; ++r) a[pivot_col[r]] = static_cast<std::uint8_t>(bit(rows[r], n_));
  return a;
}

std::optional<Assignment> Solver::solve_exhaustive(const PartialAssignment& partial) const {
  if (n_ > opts_.max_vars) throw BudgetExceeded("instance too large for fallback");
  // Constraints are checked once their last scope variable is assigned.
  std::vector<std::vector<const Constraint*>> due(n_ + 1);
  for (const auto& con : inst_->constraints) {
    Var last = 0;
    for (Var v : con.scope) last = std::max(last, v);
    if (last == 0) {
      if (lang_->at(con.relation).empty()) return std::nullopt;
      continue;
    }
    due[last].push_back(&con);
  }
  Assignment a(n_, 0);
  auto consistent = [&](Var v) {
    for (const Constraint* con : due[v]) {
      TupleMask m = 0;
      for (std::size_t j = 0; j < con->scope.size(); ++j)
        if (a[con->scope[j] - 1]) m |= TupleMask{1} << j;
      if (!lang_->at(con->relation).contains(m)) return false;
    }
    return true;
  };
  std::function<bool(Var)> search = [&](Var v) -> bool {
    if (v > n_) return true;
    auto fixed = partial.get(v);
    for (int value = 0; value < 2; ++value) {
      if (fixed && *fixed != (value == 1)) continue;
      a[v - 1] = static_cast<std::uint8_t>(value);
      if (consistent(v) && search(v + 1)) return true;
    }
    return false;
  };
  if (!search(1)) return std::nullopt;
  return a;
}

std::optional<Assignment> solve(const CspInstance& inst, const ConstraintLanguage& lang,
                                const PartialAssignment& partial, const Classification& cls, SolverOptions opts) {
  return Solver(inst, lang, cls, opts).solve(partial);
}

bool is_extendable(const CspInstance& inst, const ConstraintLanguage& lang, const PartialAssignment& partial,
                   const Classification& cls, SolverOptions opts) {
  return solve(inst, lang, partial, cls, opts).has_value();
}

}  // namespace cspimp
