#include "dicap/outer.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace dicap {

namespace {

std::string mask_str(Mask m) {
  std::string s;
  for_each_bit(m, [&](int i) {
    if (!s.empty()) s += ",";
    s += std::to_string(i + 1);
  });
  return "{" + s + "}";
}

}  // namespace

LinearProgram build_polymatroid_lp(const Problem& p, const CapacityProfile& caps,
                                   PolymatroidGrounding grounding) {
  const int n = p.n();
  const Mask all = p.all_messages();
  LinearProgram lp;
  std::vector<int> rate_var(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rate_var[static_cast<std::size_t>(i)] = lp.add_variable(1.0, false, "R" + std::to_string(i + 1));
  // f_T(S) for nonempty S inside T; f_T(empty) is identically zero and has
  // no variable.
  std::vector<int> f_var(static_cast<std::size_t>(all + 1) * (all + 1), -1);
  auto f = [&](Mask t, Mask s) { return f_var[static_cast<std::size_t>(t) * (all + 1) + s]; };
  for (Mask t = 1; t <= all; ++t) {
    for_each_subset(t, [&](Mask s) {
      if (s) f_var[static_cast<std::size_t>(t) * (all + 1) + s] = lp.add_variable(0.0, false, "f_T" + mask_str(t) + "_S" + mask_str(s));
    });
  }
  // Precompute total capacity of links meeting a given set.
  std::vector<double> cap_meeting(static_cast<std::size_t>(all + 1), 0.0);
  for (Mask s = 1; s <= all; ++s) {
    Rational total(0);
    for (Mask j = 1; j <= all; ++j) {
      if (j & s) total += caps.at(j);
    }
    cap_meeting[s] = total.to_double();
  }
  for (Mask t = 1; t <= all; ++t) {
    // Elemental monotonicity: f_T(S) <= f_T(S + i) for nonempty proper S.
    for_each_subset(t, [&](Mask s) {
      if (!s || s == t) return;
      for_each_bit(t & ~s, [&](int i) {
        int row = lp.add_row(Relation::le, 0.0, "mono_T" + mask_str(t) + "_S" + mask_str(s) + "_i" + std::to_string(i + 1));
        lp.add_coeff(row, f(t, s), 1.0);
        lp.add_coeff(row, f(t, s | (Mask{1} << i)), -1.0);
      });
    });
    // Elemental submodularity: f_T(S+i) + f_T(S+j) >= f_T(S+i+j) + f_T(S).
    for_each_bit(t, [&](int i) {
      for_each_bit(t, [&](int j) {
        if (j <= i) return;
        Mask rest = t & ~((Mask{1} << i) | (Mask{1} << j));
        for_each_subset(rest, [&](Mask s) {
          int row = lp.add_row(Relation::le, 0.0,
                               "submod_T" + mask_str(t) + "_S" + mask_str(s) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
          lp.add_coeff(row, f(t, s | (Mask{1} << i) | (Mask{1} << j)), 1.0);
          if (s) lp.add_coeff(row, f(t, s), 1.0);
          lp.add_coeff(row, f(t, s | (Mask{1} << i)), -1.0);
          lp.add_coeff(row, f(t, s | (Mask{1} << j)), -1.0);
        });
      });
    });
    // Capacity grounding.
    if (grounding == PolymatroidGrounding::whole_set) {
      int row = lp.add_row(Relation::le, cap_meeting[t], "ground_T" + mask_str(t));
      lp.add_coeff(row, f(t, t), 1.0);
    } else {
      for_each_subset(t, [&](Mask s) {
        if (!s) return;
        int row = lp.add_row(Relation::le, cap_meeting[s], "ground_T" + mask_str(t) + "_S" + mask_str(s));
        lp.add_coeff(row, f(t, s), 1.0);
      });
    }
    // Decoding: receiver i in T sees interference B_i^T = T minus its own
    // message and side information.
    for_each_bit(t, [&](int i) {
      Mask b = t & ~(p.side_info(i) | (Mask{1} << i));
      int row = lp.add_row(Relation::le, 0.0, "decode_T" + mask_str(t) + "_r" + std::to_string(i + 1));
      lp.add_coeff(row, rate_var[static_cast<std::size_t>(i)], 1.0);
      lp.add_coeff(row, f(t, b | (Mask{1} << i)), -1.0);
      if (b) lp.add_coeff(row, f(t, b), 1.0);
    });
  }
  return lp;
}

double thm1_polymatroid(const Problem& p, const CapacityProfile& caps, PolymatroidGrounding grounding) {
  if (caps.n() != p.n()) throw std::invalid_argument("capacity profile size mismatch");
  LinearProgram lp = build_polymatroid_lp(p, caps, grounding);
  LPSolution sol = solve(lp);
  if (sol.status != LPStatus::optimal) throw NumericalFailure("polymatroid bound: solver failed");
  return sol.value;
}

std::optional<ClosureSumBound> thm2_sum_bound(const Problem& p, const CapacityProfile& caps) {
  if (caps.n() != p.n()) throw std::invalid_argument("capacity profile size mismatch");
  const Mask u = compute_U(p);
  std::optional<ClosureSumBound> best;
  for (Mask v : compute_V_candidates(p, u)) {
    if (!check_condition1(p, v)) continue;
    Rational value = caps.total();
    Mask uv = u | v;
    for (Mask j = 1; j <= p.all_messages(); ++j) {
      if ((j & v) != 0 && !subset_of(j, uv)) value += caps.at(j);
    }
    if (!best || value < best->value) best = ClosureSumBound{value, u, v};
  }
  return best;
}

OuterBoundResult best_outer(const Problem& p, const CapacityProfile& caps, PolymatroidGrounding grounding) {
  OuterBoundResult out;
  out.thm1_value = thm1_polymatroid(p, caps, grounding);
  out.best = out.thm1_value;
  if (auto closure_bound = thm2_sum_bound(p, caps)) {
    out.thm2_value = closure_bound->value;
    out.thm2_witness = std::make_pair(closure_bound->u, closure_bound->v);
    out.best = std::min(out.best, closure_bound->value.to_double());
  }
  return out;
}

}  // namespace dicap
