#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <set>

#include "cspimp/error.hpp"
#include "cspimp/solver.hpp"

namespace cspimp {

const char* to_string(ClauseShape shape) {
  switch (shape) {
    case ClauseShape::width2: return "width2";
    case ClauseShape::horn: return "horn";
    case ClauseShape::dualhorn: return "dualhorn";
  }
  return "?";
}

namespace {

struct Candidate {
  TupleMask pos;
  TupleMask neg;
};

bool shape_allows(ClauseShape shape, TupleMask pos, TupleMask neg) {
  switch (shape) {
    case ClauseShape::width2: return std::popcount(pos | neg) <= 2;
    case ClauseShape::horn: return std::popcount(pos) <= 1;
    case ClauseShape::dualhorn: return std::popcount(neg) <= 1;
  }
  return false;
}

std::vector<Clause> compute_clauses(const Relation& r, ClauseShape shape) {
  const std::size_t k = r.arity();
  if (k > 20) throw InvalidArgument("clause extraction supports arity up to 20");
  const TupleMask full = (TupleMask{1} << k) - 1;
  if (r.empty()) return {Clause{}};

  // Entailment is tested against the smaller of R and its complement.
  std::vector<TupleMask> outside;
  const bool use_outside = r.size() * 2 > (std::size_t{1} << k);
  if (use_outside) {
    for (TupleMask m = 0; m <= full; ++m)
      if (!r.contains(m)) outside.push_back(m);
  }
  auto entailed = [&](TupleMask pos, TupleMask neg) {
    if (use_outside) {
      std::size_t hits = 0;
      for (TupleMask m : outside)
        if ((m & pos) == 0 && (m & neg) == neg) ++hits;
      return hits == (std::size_t{1} << (k - std::popcount(pos | neg)));
    }
    for (TupleMask m : r.masks())
      if ((m & pos) == 0 && (m & neg) == neg) return false;
    return true;
  };

  std::vector<Candidate> kept;
  auto consider = [&](TupleMask pos, TupleMask neg) {
    if (!shape_allows(shape, pos, neg)) return;
    bool subsumed = std::any_of(kept.begin(), kept.end(), [&](const Candidate& o) {
      return (o.pos & ~pos) == 0 && (o.neg & ~neg) == 0;
    });
    if (!subsumed && entailed(pos, neg)) kept.push_back({pos, neg});
  };
  // Candidates are visited by increasing width so only minimal clauses are kept.
  auto for_each_subset = [&](std::size_t size, auto&& fn) {
    if (size > k) return;
    if (size == 0) {
      fn(TupleMask{0});
      return;
    }
    TupleMask s = (TupleMask{1} << size) - 1;
    while (s <= full) {
      fn(s);
      TupleMask c = s & (~s + 1);
      TupleMask rr = s + c;
      s = (((rr ^ s) >> 2) / c) | rr;
    }
  };
  const std::size_t max_width = shape == ClauseShape::width2 ? std::min<std::size_t>(2, k) : k;
  for (std::size_t w = 0; w <= max_width; ++w) {
    for_each_subset(w, [&](TupleMask support) {
      if (shape == ClauseShape::width2) {
        for (TupleMask pos = support;; pos = (pos - 1) & support) {
          consider(pos, support & ~pos);
          if (pos == 0) break;
        }
        return;
      }
      // Horn: at most one positive literal; dual-Horn: at most one negative literal.
      const bool horn = shape == ClauseShape::horn;
      if (horn) {
        consider(0, support);
      } else {
        consider(support, 0);
      }
      for (std::size_t i = 0; i < k; ++i) {
        TupleMask bi = TupleMask{1} << i;
        if (!(support & bi)) continue;
        if (horn) {
          consider(bi, support & ~bi);
        } else {
          consider(support & ~bi, bi);
        }
      }
    });
  }

  for (TupleMask m = 0; m <= full; ++m) {
    bool sat = std::all_of(kept.begin(), kept.end(),
                           [&](const Candidate& c) { return (m & c.pos) != 0 || (~m & c.neg) != 0; });
    if (sat != r.contains(m)) throw InvalidArgument("shape does not define relation");
  }

  std::vector<Clause> out;
  for (const auto& c : kept) {
    Clause cl;
    for (std::size_t i = 0; i < k; ++i) {
      if (c.pos >> i & 1) cl.push_back({static_cast<Var>(i + 1), true});
      if (c.neg >> i & 1) cl.push_back({static_cast<Var>(i + 1), false});
    }
    out.push_back(std::move(cl));
  }
  return out;
}

}  // namespace

std::vector<Clause> extract_clauses(const Relation& r, ClauseShape shape) {
  using Key = std::tuple<std::size_t, std::vector<TupleMask>, ClauseShape>;
  static std::mutex mu;
  static std::map<Key, std::vector<Clause>> cache;
  Key key{r.arity(), r.masks(), shape};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<Clause> clauses = compute_clauses(r, shape);
  std::lock_guard lock(mu);
  return cache.emplace(std::move(key), std::move(clauses)).first->second;
}

std::vector<Clause> instance_clauses(const CspInstance& inst, const ConstraintLanguage& lang, ClauseShape shape) {
  std::set<Clause> seen;
  std::vector<Clause> out;
  for (const auto& con : inst.constraints) {
    for (const Clause& c : extract_clauses(lang.at(con.relation), shape)) {
      Clause mapped;
      for (const Literal& l : c) mapped.push_back({con.scope[l.var - 1], l.positive});
      std::sort(mapped.begin(), mapped.end());
      mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
      bool tautology = false;
      for (std::size_t i = 1; i < mapped.size(); ++i)
        if (mapped[i].var == mapped[i - 1].var) tautology = true;
      if (tautology) continue;
      if (seen.insert(mapped).second) out.push_back(std::move(mapped));
    }
  }
  return out;
}

std::vector<ParityEquation> extract_parity_equations(const Relation& r) {
  const std::size_t k = r.arity();
  if (r.empty()) return {ParityEquation{0, true}};
  const TupleMask t0 = r.masks().front();
  // Reduced row echelon basis of the difference space.
  std::vector<TupleMask> rows;
  std::vector<std::size_t> pivots;
  for (TupleMask t : r.masks()) {
    TupleMask d = t ^ t0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (d >> pivots[i] & 1) d ^= rows[i];
    if (d == 0) continue;
    std::size_t p = static_cast<std::size_t>(std::countr_zero(d));
    for (auto& row : rows)
      if (row >> p & 1) row ^= d;
    rows.push_back(d);
    pivots.push_back(p);
  }
  std::vector<ParityEquation> out;
  for (std::size_t f = 0; f < k; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    TupleMask a = TupleMask{1} << f;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i] >> f & 1) a |= TupleMask{1} << pivots[i];
    out.push_back({a, std::popcount(a & t0) % 2 == 1});
  }
  return out;
}

}  // namespace cspimp
