#include "dicap/inner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <thread>

namespace dicap {

ServerGrouping ServerGrouping::single_all_server(int n) {
  ServerGrouping g;
  g.groups.emplace_back();
  for (Mask j = 1; j <= full_mask(n); ++j) g.groups.back().push_back(j);
  return g;
}

Mask ServerGrouping::messages(std::size_t g) const {
  Mask m = 0;
  for (Mask j : groups[g]) m |= j;
  return m;
}

namespace {

// ---------------------------------------------------------------------------
// Shared building blocks
// ---------------------------------------------------------------------------

std::vector<double> rate_weights(const Problem& p, const ObjectiveSpec& objective) {
  const auto n = static_cast<std::size_t>(p.n());
  switch (objective.kind) {
    case ObjectiveKind::sum_rate:
      return std::vector<double>(n, 1.0);
    case ObjectiveKind::weighted:
      if (objective.weights.size() != n) throw std::invalid_argument("weighted objective needs n weights");
      return objective.weights;
    case ObjectiveKind::symmetric_rate:
      return std::vector<double>(n, 0.0);  // rates enter through the target variable
  }
  throw std::invalid_argument("bad objective");
}

// Receivers whose first-step decoding constraint at server J is not implied
// by another receiver's: those with inclusion-minimal A_i & J (ties keep the
// smallest index). The dropped rows sum over subsets of the kept rows' terms.
std::vector<int> kept_receivers_for_server(const Problem& p, Mask server) {
  std::vector<int> kept;
  for (int i = 0; i < p.n(); ++i) {
    Mask ai = p.side_info(i) & server;
    bool keep = true;
    for (int k = 0; k < p.n(); ++k) {
      if (k == i) continue;
      Mask ak = p.side_info(k) & server;
      if (ak == ai && k < i) {
        keep = false;
        break;
      }
      if (ak != ai && subset_of(ak, ai)) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(i);
  }
  return kept;
}

// (K, J) pairs with K a nonempty subset of server J, for servers with
// positive capacity; deterministic order (J ascending, K ascending).
struct ServerVarLayout {
  std::vector<Mask> servers;
  std::vector<std::pair<Mask, Mask>> kj;  // (K, J)
  std::vector<int> index;                 // index[J * 2^n + K] or -1

  ServerVarLayout(const Problem& p, const CapacityProfile& caps) {
    const Mask all = p.all_messages();
    index.assign((std::size_t{1} << p.n()) * ((std::size_t{1} << p.n())), -1);
    for (Mask j = 1; j <= all; ++j) {
      if (!(Rational(0) < caps.at(j))) continue;
      servers.push_back(j);
      std::vector<Mask> subs;
      for_each_subset(j, [&](Mask k) {
        if (k) subs.push_back(k);
      });
      std::sort(subs.begin(), subs.end());
      for (Mask k : subs) {
        index[(static_cast<std::size_t>(j) << p.n()) + k] = static_cast<int>(kj.size());
        kj.emplace_back(k, j);
      }
    }
  }

  int at(Mask k, Mask j, int n) const { return index[(static_cast<std::size_t>(j) << n) + k]; }
};

// ---------------------------------------------------------------------------
// Block framework: a program is a set of master rows plus, per decoding
// tuple, a homogeneous cone of local variables coupled into those rows.
// ---------------------------------------------------------------------------

struct BlockLP {
  int num_vars = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;  // local rows, <= 0
  std::vector<std::tuple<int, int, double>> coupling;     // (master row, local var, coeff)
  std::vector<std::pair<int, double>> objective;          // (local var, coeff)
  std::vector<std::pair<int, int>> rate_vars;             // (receiver, local var)
  std::vector<std::string> var_names;                     // only when names requested

  void clear() {
    num_vars = 0;
    rows.clear();
    coupling.clear();
    objective.clear();
    rate_vars.clear();
    var_names.clear();
  }
};

struct MasterSpec {
  std::vector<double> row_rhs;  // all rows are "<="
  std::vector<std::string> row_names;
  int num_vars = 0;
  std::vector<std::string> var_names;
  std::vector<std::pair<int, double>> objective;          // (master var, coeff)
  std::vector<std::tuple<int, int, double>> coupling;     // (row, master var, coeff)
};

class BlockScheme {
 public:
  virtual ~BlockScheme() = default;
  virtual const MasterSpec& master() const = 0;
  virtual std::uint64_t num_blocks() const = 0;
  virtual void build_block(std::uint64_t b, BlockLP& out, bool with_names) const = 0;
  virtual std::vector<std::uint64_t> seed_blocks() const = 0;
};

// Symmetric-rate plumbing: target variable in the master, one deficit row
// per receiver, block rate variables couple in with coefficient -1.
void add_symmetric_target(MasterSpec& spec, int n) {
  int t = spec.num_vars++;
  spec.var_names.emplace_back("t_sym");
  spec.objective.emplace_back(t, 1.0);
  for (int i = 0; i < n; ++i) {
    spec.coupling.emplace_back(static_cast<int>(spec.row_rhs.size()), t, 1.0);
    spec.row_rhs.push_back(0.0);
    spec.row_names.push_back("sym_deficit_r" + std::to_string(i + 1));
  }
}

std::string mask_str(Mask m) {
  std::string s = "{";
  bool first = true;
  for_each_bit(m, [&](int i) {
    if (!first) s += ",";
    first = false;
    s += std::to_string(i + 1);
  });
  return s + "}";
}

// ---------------------------------------------------------------------------
// Scheme: all-server distributed composite coding with rate splitting.
// Master rows: first-step decoding constraints per kept (receiver, server).
// Block for tuple D: composite rates S_{K,J}, split rates R_i, second-step
// decoding rows per receiver and message subset of its decoding set.
// ---------------------------------------------------------------------------

class AllServerEnhanced : public BlockScheme {
 public:
  AllServerEnhanced(const Problem& p, const CapacityProfile& caps, const ObjectiveSpec& objective,
                    const DeltaSpace& delta)
      : p_(p), delta_(delta), layout_(p, caps), weights_(rate_weights(p, objective)) {
    symmetric_ = objective.kind == ObjectiveKind::symmetric_rate;
    for (Mask j : layout_.servers) {
      for (int i : kept_receivers_for_server(p_, j)) {
        flat_row_of_.emplace(std::make_pair(i, j), static_cast<int>(master_.row_rhs.size()));
        master_.row_rhs.push_back(caps.at(j).to_double());
        master_.row_names.push_back("flat_r" + std::to_string(i + 1) + "_J" + mask_str(j));
      }
    }
    if (symmetric_) {
      sym_row_base_ = static_cast<int>(master_.row_rhs.size());
      add_symmetric_target(master_, p_.n());
    }
  }

  const MasterSpec& master() const override { return master_; }
  std::uint64_t num_blocks() const override { return delta_.size(); }

  void build_block(std::uint64_t b, BlockLP& out, bool with_names) const override {
    out.clear();
    const int n = p_.n();
    const int nkj = static_cast<int>(layout_.kj.size());
    out.num_vars = nkj + n;
    auto rate_var = [&](int i) { return nkj + i; };
    if (with_names) {
      for (auto [k, j] : layout_.kj) out.var_names.push_back("S_K" + mask_str(k) + "_J" + mask_str(j) + "_D" + std::to_string(b));
      for (int i = 0; i < n; ++i) out.var_names.push_back("R" + std::to_string(i + 1) + "_D" + std::to_string(b));
    }
    for (int i = 0; i < n; ++i) {
      out.rate_vars.emplace_back(i, rate_var(i));
      if (weights_[static_cast<std::size_t>(i)] != 0.0) out.objective.emplace_back(rate_var(i), weights_[static_cast<std::size_t>(i)]);
      if (symmetric_) out.coupling.emplace_back(sym_row_base_ + i, rate_var(i), -1.0);
    }
    // First-step coupling: every composite index not resolvable from side
    // information must fit through the link it is stored on.
    for (auto& [key, row] : flat_row_of_) {
      auto [i, j] = key;
      for_each_subset(j, [&](Mask k) {
        if (k && !subset_of(k, p_.side_info(i))) out.coupling.emplace_back(row, layout_.at(k, j, n), 1.0);
      });
    }
    // Second-step rows.
    for (int i = 0; i < n; ++i) {
      Mask di = delta_.set(b, i);
      Mask da = di | p_.side_info(i);
      for_each_subset(di, [&](Mask l) {
        if (!l) return;
        out.rows.emplace_back();
        auto& row = out.rows.back();
        for_each_bit(l, [&](int jmsg) { row.emplace_back(rate_var(jmsg), 1.0); });
        for_each_subset(da, [&](Mask k) {
          if (!k || !(k & l)) return;
          for (Mask j : layout_.servers) {
            if (subset_of(k, j)) row.emplace_back(layout_.at(k, j, n), -1.0);
          }
        });
      });
    }
  }

  std::vector<std::uint64_t> seed_blocks() const override { return default_seeds(p_, delta_); }

  static std::vector<std::uint64_t> default_seeds(const Problem& p, const DeltaSpace& delta) {
    // The all-minimal and all-maximal tuples, when present; otherwise the
    // first tuple. Generation grows the active set from here.
    std::vector<Mask> lo, hi;
    for (int i = 0; i < p.n(); ++i) {
      lo.push_back(Mask{1} << i);
      hi.push_back((p.all_messages() & ~p.side_info(i)));
    }
    std::set<std::uint64_t> seeds;
    for (std::uint64_t b = 0; b < delta.size(); ++b) {
      bool is_lo = true, is_hi = true;
      for (int i = 0; i < p.n(); ++i) {
        is_lo = is_lo && delta.set(b, i) == lo[static_cast<std::size_t>(i)];
        is_hi = is_hi && delta.set(b, i) == hi[static_cast<std::size_t>(i)];
      }
      if (is_lo || is_hi) seeds.insert(b);
    }
    if (seeds.empty()) seeds.insert(0);
    return {seeds.begin(), seeds.end()};
  }

 private:
  const Problem& p_;
  const DeltaSpace& delta_;
  ServerVarLayout layout_;
  std::vector<double> weights_;
  bool symmetric_ = false;
  int sym_row_base_ = -1;
  MasterSpec master_;
  std::map<std::pair<int, Mask>, int> flat_row_of_;
};

// ---------------------------------------------------------------------------
// Scheme: centralized enhanced composite coding (single server, rate
// splitting). Same structure with composite rates S_K.
// ---------------------------------------------------------------------------

class CentralizedEnhanced : public BlockScheme {
 public:
  CentralizedEnhanced(const Problem& p, const Rational& capacity, const ObjectiveSpec& objective,
                      const DeltaSpace& delta)
      : p_(p), delta_(delta), weights_(rate_weights(p, objective)) {
    symmetric_ = objective.kind == ObjectiveKind::symmetric_rate;
    subsets_.reserve(full_mask(p.n()));
    for (Mask k = 1; k <= p.all_messages(); ++k) subsets_.push_back(k);
    for (int i : kept_receivers_for_server(p, p.all_messages())) {
      flat_row_of_.emplace_back(i, static_cast<int>(master_.row_rhs.size()));
      master_.row_rhs.push_back(capacity.to_double());
      master_.row_names.push_back("flat_r" + std::to_string(i + 1));
    }
    if (symmetric_) {
      sym_row_base_ = static_cast<int>(master_.row_rhs.size());
      add_symmetric_target(master_, p.n());
    }
  }

  const MasterSpec& master() const override { return master_; }
  std::uint64_t num_blocks() const override { return delta_.size(); }

  void build_block(std::uint64_t b, BlockLP& out, bool with_names) const override {
    out.clear();
    const int n = p_.n();
    const int nk = static_cast<int>(subsets_.size());
    out.num_vars = nk + n;
    auto rate_var = [&](int i) { return nk + i; };
    if (with_names) {
      for (Mask k : subsets_) out.var_names.push_back("S_K" + mask_str(k) + "_D" + std::to_string(b));
      for (int i = 0; i < n; ++i) out.var_names.push_back("R" + std::to_string(i + 1) + "_D" + std::to_string(b));
    }
    for (int i = 0; i < n; ++i) {
      out.rate_vars.emplace_back(i, rate_var(i));
      if (weights_[static_cast<std::size_t>(i)] != 0.0) out.objective.emplace_back(rate_var(i), weights_[static_cast<std::size_t>(i)]);
      if (symmetric_) out.coupling.emplace_back(sym_row_base_ + i, rate_var(i), -1.0);
    }
    for (auto [i, row] : flat_row_of_) {
      for (Mask k : subsets_) {
        if (!subset_of(k, p_.side_info(i))) out.coupling.emplace_back(row, k - 1, 1.0);
      }
    }
    for (int i = 0; i < n; ++i) {
      Mask di = delta_.set(b, i);
      Mask da = di | p_.side_info(i);
      for_each_subset(di, [&](Mask l) {
        if (!l) return;
        out.rows.emplace_back();
        auto& row = out.rows.back();
        for_each_bit(l, [&](int jmsg) { row.emplace_back(rate_var(jmsg), 1.0); });
        for_each_subset(da, [&](Mask k) {
          if (k && (k & l)) row.emplace_back(static_cast<int>(k) - 1, -1.0);
        });
      });
    }
  }

  std::vector<std::uint64_t> seed_blocks() const override { return AllServerEnhanced::default_seeds(p_, delta_); }

 private:
  const Problem& p_;
  const DeltaSpace& delta_;
  std::vector<double> weights_;
  std::vector<Mask> subsets_;
  bool symmetric_ = false;
  int sym_row_base_ = -1;
  MasterSpec master_;
  std::vector<std::pair<int, int>> flat_row_of_;
};

// ---------------------------------------------------------------------------
// Scheme: time-sharing hull of per-tuple regions without rate splitting
// (centralized original scheme, and the non-enhanced distributed scheme).
// Each block carries its own share variable lambda_D; shares sum to at most
// one, and within a block every constraint is scaled by lambda_D.
// ---------------------------------------------------------------------------

class HullScheme : public BlockScheme {
 public:
  // Centralized when caps == nullptr (single server with `capacity`).
  HullScheme(const Problem& p, const CapacityProfile* caps, const Rational& capacity,
             const ObjectiveSpec& objective, const DeltaSpace& delta)
      : p_(p), delta_(delta), weights_(rate_weights(p, objective)) {
    symmetric_ = objective.kind == ObjectiveKind::symmetric_rate;
    if (caps != nullptr) {
      layout_.emplace(p, *caps);
      for (Mask j : layout_->servers) {
        for (int i : kept_receivers_for_server(p, j)) {
          flat_rows_.push_back({i, j, caps->at(j).to_double()});
        }
      }
    } else {
      for (int i : kept_receivers_for_server(p, p.all_messages())) {
        flat_rows_.push_back({i, p.all_messages(), capacity.to_double()});
      }
    }
    share_row_ = static_cast<int>(master_.row_rhs.size());
    master_.row_rhs.push_back(1.0);
    master_.row_names.emplace_back("time_share");
    if (symmetric_) {
      sym_row_base_ = static_cast<int>(master_.row_rhs.size());
      add_symmetric_target(master_, p.n());
    }
  }

  const MasterSpec& master() const override { return master_; }
  std::uint64_t num_blocks() const override { return delta_.size(); }

  void build_block(std::uint64_t b, BlockLP& out, bool with_names) const override {
    out.clear();
    const int n = p_.n();
    const bool dist = layout_.has_value();
    const int nS = dist ? static_cast<int>(layout_->kj.size()) : static_cast<int>(p_.all_messages());
    out.num_vars = 1 + nS + n;  // lambda, S..., R...
    auto s_var = [&](Mask k, Mask j) { return 1 + (dist ? layout_->at(k, j, n) : static_cast<int>(k) - 1); };
    auto rate_var = [&](int i) { return 1 + nS + i; };
    if (with_names) {
      out.var_names.push_back("share_D" + std::to_string(b));
      if (dist) {
        for (auto [k, j] : layout_->kj) out.var_names.push_back("S_K" + mask_str(k) + "_J" + mask_str(j) + "_D" + std::to_string(b));
      } else {
        for (Mask k = 1; k <= p_.all_messages(); ++k) out.var_names.push_back("S_K" + mask_str(k) + "_D" + std::to_string(b));
      }
      for (int i = 0; i < n; ++i) out.var_names.push_back("R" + std::to_string(i + 1) + "_D" + std::to_string(b));
    }
    out.coupling.emplace_back(share_row_, 0, 1.0);
    for (int i = 0; i < n; ++i) {
      out.rate_vars.emplace_back(i, rate_var(i));
      if (weights_[static_cast<std::size_t>(i)] != 0.0) out.objective.emplace_back(rate_var(i), weights_[static_cast<std::size_t>(i)]);
      if (symmetric_) out.coupling.emplace_back(sym_row_base_ + i, rate_var(i), -1.0);
    }
    // First-step rows, scaled by the share: sum of blocked composites minus
    // lambda * C_J stays nonpositive.
    for (const FlatRow& fr : flat_rows_) {
      out.rows.emplace_back();
      auto& row = out.rows.back();
      for_each_subset(fr.server, [&](Mask k) {
        if (k && !subset_of(k, p_.side_info(fr.receiver))) {
          if (dist) {
            row.emplace_back(s_var(k, fr.server), 1.0);
          } else {
            row.emplace_back(s_var(k, 0), 1.0);
          }
        }
      });
      row.emplace_back(0, -fr.capacity);
    }
    // Second-step rows.
    for (int i = 0; i < n; ++i) {
      Mask di = delta_.set(b, i);
      Mask da = di | p_.side_info(i);
      for_each_subset(di, [&](Mask l) {
        if (!l) return;
        out.rows.emplace_back();
        auto& row = out.rows.back();
        for_each_bit(l, [&](int jmsg) { row.emplace_back(rate_var(jmsg), 1.0); });
        for_each_subset(da, [&](Mask k) {
          if (!k || !(k & l)) return;
          if (dist) {
            for (Mask j : layout_->servers) {
              if (subset_of(k, j)) row.emplace_back(s_var(k, j), -1.0);
            }
          } else {
            row.emplace_back(s_var(k, 0), -1.0);
          }
        });
      });
    }
  }

  std::vector<std::uint64_t> seed_blocks() const override { return AllServerEnhanced::default_seeds(p_, delta_); }

 private:
  struct FlatRow {
    int receiver;
    Mask server;
    double capacity;
  };
  const Problem& p_;
  const DeltaSpace& delta_;
  std::vector<double> weights_;
  std::optional<ServerVarLayout> layout_;
  std::vector<FlatRow> flat_rows_;
  bool symmetric_ = false;
  int share_row_ = -1;
  int sym_row_base_ = -1;
  MasterSpec master_;
};

// ---------------------------------------------------------------------------
// Scheme: fractional distributed composite coding. Servers join groups and
// give each group a capacity share; within a group the all-server scheme
// runs on the messages the group holds. Master variables are the shares
// C_J(P); master rows tie group traffic to shares and shares to capacities.
// ---------------------------------------------------------------------------

struct GroupSpace {
  Mask messages = 0;                       // I(P)
  std::vector<Mask> servers;               // members with positive capacity
  std::vector<int> receivers;              // ascending members of I(P)
  std::vector<Mask> tuples;                // flat: one mask per receiver in `receivers`
  std::vector<std::pair<Mask, Mask>> kj;   // (K, J in group)
  std::vector<int> kj_index;               // [J << n | K] -> local S index

  std::size_t tuple_count() const { return receivers.empty() ? 0 : tuples.size() / receivers.size(); }
  Mask tuple_set(std::size_t t, std::size_t ri) const { return tuples[t * receivers.size() + ri]; }
};

GroupSpace build_group_space(const Problem& p, const CapacityProfile& caps, const std::vector<Mask>& group) {
  GroupSpace gs;
  std::set<Mask> seen;
  for (Mask j : group) {
    if (j == 0 || j > p.all_messages()) throw std::invalid_argument("fractional: bad server mask in group");
    if (!(Rational(0) < caps.at(j))) continue;  // zero-capacity members contribute nothing
    if (seen.insert(j).second) gs.servers.push_back(j);
  }
  std::sort(gs.servers.begin(), gs.servers.end());
  for (Mask j : gs.servers) gs.messages |= j;
  for_each_bit(gs.messages, [&](int i) { gs.receivers.push_back(i); });
  const int n = p.n();
  gs.kj_index.assign(std::size_t{1} << (2 * n), -1);
  for (Mask j : gs.servers) {
    std::vector<Mask> subs;
    for_each_subset(j, [&](Mask k) {
      if (k) subs.push_back(k);
    });
    std::sort(subs.begin(), subs.end());
    for (Mask k : subs) {
      gs.kj_index[(static_cast<std::size_t>(j) << n) | k] = static_cast<int>(gs.kj.size());
      gs.kj.emplace_back(k, j);
    }
  }
  // Decoding space of the group: receiver i in I(P) picks D within the
  // group's messages, avoiding A_i restricted to the group.
  std::vector<std::vector<Mask>> choices;
  for (int i : gs.receivers) {
    Mask optional = gs.messages & ~(p.side_info(i) & gs.messages) & ~(Mask{1} << i);
    std::vector<Mask> c;
    for_each_subset(optional, [&](Mask s) { c.push_back(s | (Mask{1} << i)); });
    std::sort(c.begin(), c.end());
    choices.push_back(std::move(c));
  }
  if (!gs.receivers.empty()) {
    std::vector<std::size_t> idx(gs.receivers.size(), 0);
    while (true) {
      for (std::size_t r = 0; r < gs.receivers.size(); ++r) gs.tuples.push_back(choices[r][idx[r]]);
      std::size_t pos = gs.receivers.size();
      while (pos > 0 && ++idx[pos - 1] == choices[pos - 1].size()) {
        idx[pos - 1] = 0;
        --pos;
      }
      if (pos == 0) break;
    }
  }
  return gs;
}

class FractionalScheme : public BlockScheme {
 public:
  FractionalScheme(const Problem& p, const CapacityProfile& caps, const ServerGrouping& grouping,
                   const ObjectiveSpec& objective)
      : p_(p), weights_(rate_weights(p, objective)) {
    symmetric_ = objective.kind == ObjectiveKind::symmetric_rate;
    if (grouping.groups.empty()) throw std::invalid_argument("fractional: empty grouping");
    for (const auto& group : grouping.groups) {
      GroupSpace gs = build_group_space(p, caps, group);
      if (!gs.servers.empty()) groups_.push_back(std::move(gs));
    }
    block_offset_.push_back(0);
    for (const GroupSpace& gs : groups_) block_offset_.push_back(block_offset_.back() + gs.tuple_count());

    // Master variables: one capacity share per (group, member server).
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      for (Mask j : groups_[g].servers) {
        share_var_.emplace(std::make_pair(g, j), master_.num_vars);
        master_.var_names.push_back("cap_share_P" + std::to_string(g) + "_J" + mask_str(j));
        ++master_.num_vars;
      }
    }
    // Group traffic rows: per (group, member server, kept receiver in I(P)),
    // total first-step traffic minus the share stays nonpositive.
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const GroupSpace& gs = groups_[g];
      for (Mask j : gs.servers) {
        for (int i : kept_group_receivers(gs, j)) {
          int row = static_cast<int>(master_.row_rhs.size());
          group_flat_row_.emplace(std::make_tuple(g, j, i), row);
          master_.row_rhs.push_back(0.0);
          master_.row_names.push_back("group_flat_P" + std::to_string(g) + "_J" + mask_str(j) + "_r" + std::to_string(i + 1));
          master_.coupling.emplace_back(row, share_var_.at({g, j}), -1.0);
        }
      }
    }
    // Share budget rows: per server, shares across groups fit its capacity.
    std::set<Mask> all_servers;
    for (const GroupSpace& gs : groups_) all_servers.insert(gs.servers.begin(), gs.servers.end());
    for (Mask j : all_servers) {
      int row = static_cast<int>(master_.row_rhs.size());
      master_.row_rhs.push_back(caps.at(j).to_double());
      master_.row_names.push_back("share_budget_J" + mask_str(j));
      for (std::size_t g = 0; g < groups_.size(); ++g) {
        auto it = share_var_.find({g, j});
        if (it != share_var_.end()) master_.coupling.emplace_back(row, it->second, 1.0);
      }
    }
    if (symmetric_) {
      sym_row_base_ = static_cast<int>(master_.row_rhs.size());
      add_symmetric_target(master_, p.n());
    }
  }

  // Restriction of the server-row dominance rule to the group's receivers.
  std::vector<int> kept_group_receivers(const GroupSpace& gs, Mask j) const {
    std::vector<int> kept;
    for (int i : gs.receivers) {
      Mask ai = p_.side_info(i) & gs.messages & j;
      bool keep = true;
      for (int k : gs.receivers) {
        if (k == i) continue;
        Mask ak = p_.side_info(k) & gs.messages & j;
        if ((ak == ai && k < i) || (ak != ai && subset_of(ak, ai))) {
          keep = false;
          break;
        }
      }
      if (keep) kept.push_back(i);
    }
    return kept;
  }

  const MasterSpec& master() const override { return master_; }
  std::uint64_t num_blocks() const override { return block_offset_.back(); }

  void build_block(std::uint64_t b, BlockLP& out, bool with_names) const override {
    out.clear();
    std::size_t g = 0;
    while (b >= block_offset_[g + 1]) ++g;
    const GroupSpace& gs = groups_[g];
    const std::size_t t = b - block_offset_[g];
    const int n = p_.n();
    const int nkj = static_cast<int>(gs.kj.size());
    out.num_vars = nkj + static_cast<int>(gs.receivers.size());
    auto rate_var = [&](std::size_t ri) { return nkj + static_cast<int>(ri); };
    if (with_names) {
      for (auto [k, j] : gs.kj) {
        out.var_names.push_back("S_P" + std::to_string(g) + "_K" + mask_str(k) + "_J" + mask_str(j) + "_D" + std::to_string(t));
      }
      for (int i : gs.receivers) out.var_names.push_back("R" + std::to_string(i + 1) + "_P" + std::to_string(g) + "_D" + std::to_string(t));
    }
    for (std::size_t ri = 0; ri < gs.receivers.size(); ++ri) {
      int i = gs.receivers[ri];
      out.rate_vars.emplace_back(i, rate_var(ri));
      if (weights_[static_cast<std::size_t>(i)] != 0.0) out.objective.emplace_back(rate_var(ri), weights_[static_cast<std::size_t>(i)]);
      if (symmetric_) out.coupling.emplace_back(sym_row_base_ + i, rate_var(ri), -1.0);
    }
    for (auto& [key, row] : group_flat_row_) {
      auto [gg, j, i] = key;
      if (gg != g) continue;
      Mask ai = p_.side_info(i) & gs.messages;
      for_each_subset(j, [&](Mask k) {
        if (k && !subset_of(k, ai)) out.coupling.emplace_back(row, gs.kj_index[(static_cast<std::size_t>(j) << n) | k], 1.0);
      });
    }
    for (std::size_t ri = 0; ri < gs.receivers.size(); ++ri) {
      int i = gs.receivers[ri];
      Mask di = gs.tuple_set(t, ri);
      Mask da = di | (p_.side_info(i) & gs.messages);
      for_each_subset(di, [&](Mask l) {
        if (!l) return;
        out.rows.emplace_back();
        auto& row = out.rows.back();
        for_each_bit(l, [&](int jmsg) {
          auto pos = std::lower_bound(gs.receivers.begin(), gs.receivers.end(), jmsg);
          row.emplace_back(rate_var(static_cast<std::size_t>(pos - gs.receivers.begin())), 1.0);
        });
        for_each_subset(da, [&](Mask k) {
          if (!k || !(k & l)) return;
          for (Mask j : gs.servers) {
            if (subset_of(k, j)) row.emplace_back(gs.kj_index[(static_cast<std::size_t>(j) << n) | k], -1.0);
          }
        });
      });
    }
  }

  std::vector<std::uint64_t> seed_blocks() const override {
    std::vector<std::uint64_t> seeds;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const GroupSpace& gs = groups_[g];
      if (gs.receivers.empty()) continue;
      std::set<std::size_t> pick;
      for (std::size_t t = 0; t < gs.tuple_count(); ++t) {
        bool is_lo = true, is_hi = true;
        for (std::size_t ri = 0; ri < gs.receivers.size(); ++ri) {
          int i = gs.receivers[ri];
          Mask lo = Mask{1} << i;
          Mask hi = gs.messages & ~(p_.side_info(i) & gs.messages);
          is_lo = is_lo && gs.tuple_set(t, ri) == lo;
          is_hi = is_hi && gs.tuple_set(t, ri) == hi;
        }
        if (is_lo || is_hi) pick.insert(t);
      }
      if (pick.empty()) pick.insert(0);
      for (std::size_t t : pick) seeds.push_back(block_offset_[g] + t);
    }
    return seeds;
  }

  std::uint64_t variable_budget() const {
    std::uint64_t total = 0;
    for (const GroupSpace& gs : groups_) {
      total += gs.tuple_count() * (gs.kj.size() + gs.receivers.size());
    }
    return total;
  }

 private:
  const Problem& p_;
  std::vector<double> weights_;
  bool symmetric_ = false;
  int sym_row_base_ = -1;
  std::vector<GroupSpace> groups_;
  std::vector<std::uint64_t> block_offset_;
  MasterSpec master_;
  std::map<std::pair<std::size_t, Mask>, int> share_var_;
  std::map<std::tuple<std::size_t, Mask, int>, int> group_flat_row_;
};

// ---------------------------------------------------------------------------
// Generation driver
// ---------------------------------------------------------------------------

struct GenerationOutcome {
  double value = 0.0;
  std::vector<double> rates;
  std::uint64_t activated = 0;
};

// Restricted program over the active blocks; returns the solution plus the
// variable offset of each active block.
LPSolution solve_restricted(const BlockScheme& scheme, const std::vector<std::uint64_t>& active,
                            std::vector<int>& block_var_offset, const SolverConfig& config) {
  const MasterSpec& ms = scheme.master();
  LinearProgram lp;
  for (int v = 0; v < ms.num_vars; ++v) lp.add_variable();
  for (auto [v, c] : ms.objective) lp.set_objective(v, c);
  std::vector<int> master_rows;
  master_rows.reserve(ms.row_rhs.size());
  for (double rhs : ms.row_rhs) master_rows.push_back(lp.add_row(Relation::le, rhs));
  for (auto [row, v, c] : ms.coupling) lp.add_coeff(master_rows[static_cast<std::size_t>(row)], v, c);
  BlockLP block;
  block_var_offset.assign(active.size(), 0);
  for (std::size_t a = 0; a < active.size(); ++a) {
    scheme.build_block(active[a], block, /*with_names=*/false);
    int base = lp.num_variables();
    block_var_offset[a] = base;
    for (int v = 0; v < block.num_vars; ++v) lp.add_variable();
    for (auto [v, c] : block.objective) lp.set_objective(base + v, c);
    for (auto [row, v, c] : block.coupling) lp.add_coeff(master_rows[static_cast<std::size_t>(row)], base + v, c);
    for (const auto& row : block.rows) {
      int r = lp.add_row(Relation::le, 0.0);
      for (auto [v, c] : row) lp.add_coeff(r, base + v, c);
    }
  }
  LPSolution sol = solve(lp, config);
  if (sol.status != LPStatus::optimal) throw NumericalFailure("block generation: restricted program not optimal");
  return sol;
}

// Pricing value of one block: best objective including dual charges over the
// normalized cone slice. Positive means the block can improve the master.
double price_block(const BlockScheme& scheme, std::uint64_t b, const std::vector<double>& duals,
                   BlockLP& block, const SolverConfig& config) {
  scheme.build_block(b, block, /*with_names=*/false);
  LinearProgram lp;
  std::vector<double> obj(static_cast<std::size_t>(block.num_vars), 0.0);
  for (auto [v, c] : block.objective) obj[static_cast<std::size_t>(v)] += c;
  for (auto [row, v, c] : block.coupling) obj[static_cast<std::size_t>(v)] -= duals[static_cast<std::size_t>(row)] * c;
  for (int v = 0; v < block.num_vars; ++v) lp.add_variable(obj[static_cast<std::size_t>(v)]);
  for (const auto& row : block.rows) {
    int r = lp.add_row(Relation::le, 0.0);
    for (auto [v, c] : row) lp.add_coeff(r, v, c);
  }
  int norm = lp.add_row(Relation::le, 1.0);
  for (int v = 0; v < block.num_vars; ++v) lp.add_coeff(norm, v, 1.0);
  LPSolution sol = solve(lp, config);
  if (sol.status != LPStatus::optimal) throw NumericalFailure("block generation: pricing program not optimal");
  return sol.value;
}

GenerationOutcome solve_generation(const BlockScheme& scheme, const Problem& p, int threads) {
  const SolverConfig config = SolverConfig::from_env();
  const MasterSpec& ms = scheme.master();
  double scale = 1.0;
  for (double rhs : ms.row_rhs) scale = std::max(scale, std::fabs(rhs));
  const double add_tol = 1e-8 * scale;
  const std::uint64_t total = scheme.num_blocks();

  std::vector<std::uint64_t> active = scheme.seed_blocks();
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  std::vector<std::uint64_t> last_added;
  std::map<std::uint64_t, int> add_count;

  std::vector<int> offsets;
  constexpr int kMaxRounds = 300;
  for (int round = 0; round < kMaxRounds; ++round) {
    LPSolution sol = solve_restricted(scheme, active, offsets, config);

    // Price every inactive block against the master duals.
    std::vector<bool> is_active_map;
    if (total <= (std::uint64_t{1} << 26)) {
      is_active_map.assign(total, false);
      for (std::uint64_t b : active) is_active_map[b] = true;
    }
    auto active_contains = [&](std::uint64_t b) {
      if (!is_active_map.empty()) return static_cast<bool>(is_active_map[b]);
      return std::binary_search(active.begin(), active.end(), b);
    };
    std::vector<std::pair<double, std::uint64_t>> candidates;
    std::vector<double> duals(sol.duals.begin(), sol.duals.begin() + static_cast<long>(ms.row_rhs.size()));
    int workers = std::max(1, threads);
    if (workers == 1 || total < 64) {
      BlockLP scratch;
      for (std::uint64_t b = 0; b < total; ++b) {
        if (active_contains(b)) continue;
        double sigma = price_block(scheme, b, duals, scratch, config);
        if (sigma > add_tol) candidates.emplace_back(sigma, b);
      }
    } else {
      std::vector<std::vector<std::pair<double, std::uint64_t>>> found(static_cast<std::size_t>(workers));
      std::atomic<std::uint64_t> next{0};
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          BlockLP scratch;
          constexpr std::uint64_t kChunk = 64;
          while (true) {
            std::uint64_t start = next.fetch_add(kChunk);
            if (start >= total) break;
            std::uint64_t end = std::min(total, start + kChunk);
            for (std::uint64_t b = start; b < end; ++b) {
              if (active_contains(b)) continue;
              double sigma = price_block(scheme, b, duals, scratch, config);
              if (sigma > add_tol) found[static_cast<std::size_t>(w)].emplace_back(sigma, b);
            }
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& f : found) candidates.insert(candidates.end(), f.begin(), f.end());
    }

    if (candidates.empty()) {
      // No tuple can improve the program: the restricted optimum is the
      // optimum over the whole space.
      GenerationOutcome out;
      out.value = sol.value;
      out.rates.assign(static_cast<std::size_t>(p.n()), 0.0);
      BlockLP block;
      out.activated = active.size();
      for (std::size_t a = 0; a < active.size(); ++a) {
        scheme.build_block(active[a], block, false);
        for (auto [i, v] : block.rate_vars) {
          out.rates[static_cast<std::size_t>(i)] += sol.primal[static_cast<std::size_t>(offsets[a] + v)];
        }
      }
      return out;
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    // Drop active blocks whose variables all sit at zero, except recent
    // additions; blocks that keep coming back get pinned.
    std::vector<std::uint64_t> pruned;
    BlockLP block;
    for (std::size_t a = 0; a < active.size(); ++a) {
      std::uint64_t b = active[a];
      bool recent = std::find(last_added.begin(), last_added.end(), b) != last_added.end();
      bool pinned = add_count[b] >= 3;
      if (recent || pinned) {
        pruned.push_back(b);
        continue;
      }
      scheme.build_block(b, block, false);
      double support = 0.0;
      for (int v = 0; v < block.num_vars; ++v) support = std::max(support, sol.primal[static_cast<std::size_t>(offsets[a] + v)]);
      if (support > 1e-10) pruned.push_back(b);
    }
    last_added.clear();
    std::size_t adds = std::min<std::size_t>(candidates.size(), 16);
    for (std::size_t k = 0; k < adds; ++k) {
      pruned.push_back(candidates[k].second);
      last_added.push_back(candidates[k].second);
      ++add_count[candidates[k].second];
    }
    std::sort(pruned.begin(), pruned.end());
    pruned.erase(std::unique(pruned.begin(), pruned.end()), pruned.end());
    active = std::move(pruned);
  }
  throw NumericalFailure("block generation did not converge");
}

// ---------------------------------------------------------------------------
// Per-tuple maximization for linear objectives of the non-rate-split
// schemes: the optimum over a union of regions is the best per-region value.
// ---------------------------------------------------------------------------

GenerationOutcome per_tuple_max(const BlockScheme& scheme, const Problem& p, int threads,
                                const SolverConfig& config) {
  const std::uint64_t total = scheme.num_blocks();
  // Reuses the restricted-program builder one tuple at a time; the hull
  // share variable is then free to sit at 1.
  auto solve_one = [&](std::uint64_t b) {
    std::vector<int> offsets;
    std::vector<std::uint64_t> single{b};
    return solve_restricted(scheme, single, offsets, config).value;
  };
  std::vector<double> values(total, 0.0);
  int workers = std::max(1, threads);
  if (workers == 1 || total < 16) {
    for (std::uint64_t b = 0; b < total; ++b) values[b] = solve_one(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          std::uint64_t b = next.fetch_add(1);
          if (b >= total) break;
          values[b] = solve_one(b);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  std::uint64_t best_block = 0;
  for (std::uint64_t b = 1; b < total; ++b) {
    if (values[b] > values[best_block] + 1e-12) best_block = b;
  }
  std::vector<int> offsets;
  std::vector<std::uint64_t> single{best_block};
  LPSolution sol = solve_restricted(scheme, single, offsets, config);
  GenerationOutcome best;
  best.activated = 1;
  best.value = sol.value;
  best.rates.assign(static_cast<std::size_t>(p.n()), 0.0);
  BlockLP block;
  scheme.build_block(best_block, block, false);
  for (auto [i, v] : block.rate_vars) best.rates[static_cast<std::size_t>(i)] += sol.primal[static_cast<std::size_t>(offsets[0] + v)];
  return best;
}

// ---------------------------------------------------------------------------
// Size guard and result assembly
// ---------------------------------------------------------------------------

void check_budget(std::uint64_t blocks, std::uint64_t vars_per_block, const InnerOptions& options) {
  if (blocks * vars_per_block > options.max_nonzeros) {
    throw DeltaTooLarge("decoding space needs " + std::to_string(blocks * vars_per_block) +
                        " variables, cap is " + std::to_string(options.max_nonzeros));
  }
}

std::uint64_t enhanced_var_budget(const Problem& p, const CapacityProfile& caps) {
  std::uint64_t per_block = static_cast<std::uint64_t>(p.n());
  for (Mask j = 1; j <= p.all_messages(); ++j) {
    if (Rational(0) < caps.at(j)) per_block += (std::uint64_t{1} << popcount(j)) - 1;
  }
  return per_block;
}

InnerBoundResult make_result(const ObjectiveSpec& objective, const DeltaSpace& delta,
                             const GenerationOutcome& outcome) {
  InnerBoundResult r;
  r.objective = objective;
  r.value = outcome.value;
  r.rates = outcome.rates;
  r.delta_used = {delta.strategy(), delta.size(), outcome.activated};
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

InnerBoundResult centralized_cc_original(const Problem& p, const Rational& capacity,
                                         const ObjectiveSpec& objective, const DeltaSpace& delta,
                                         const InnerOptions& options) {
  check_budget(delta.size(), (std::uint64_t{1} << p.n()) + static_cast<std::uint64_t>(p.n()), options);
  HullScheme scheme(p, nullptr, capacity, objective, delta);
  if (objective.kind == ObjectiveKind::symmetric_rate) {
    return make_result(objective, delta, solve_generation(scheme, p, options.threads));
  }
  GenerationOutcome outcome = per_tuple_max(scheme, p, options.threads, SolverConfig::from_env());
  return make_result(objective, delta, outcome);
}

InnerBoundResult centralized_cc_original_hull(const Problem& p, const Rational& capacity,
                                              const ObjectiveSpec& objective, const DeltaSpace& delta,
                                              const InnerOptions& options) {
  check_budget(delta.size(), (std::uint64_t{1} << p.n()) + static_cast<std::uint64_t>(p.n()), options);
  HullScheme scheme(p, nullptr, capacity, objective, delta);
  return make_result(objective, delta, solve_generation(scheme, p, options.threads));
}

InnerBoundResult centralized_cc_enhanced(const Problem& p, const Rational& capacity,
                                         const ObjectiveSpec& objective, const DeltaSpace& delta,
                                         const InnerOptions& options) {
  check_budget(delta.size(), (std::uint64_t{1} << p.n()) - 1 + static_cast<std::uint64_t>(p.n()), options);
  CentralizedEnhanced scheme(p, capacity, objective, delta);
  return make_result(objective, delta, solve_generation(scheme, p, options.threads));
}

InnerBoundResult distributed_cc_allserver(const Problem& p, const CapacityProfile& caps,
                                          const ObjectiveSpec& objective, const DeltaSpace& delta,
                                          bool enhanced, const InnerOptions& options) {
  if (caps.n() != p.n()) throw std::invalid_argument("capacity profile size mismatch");
  check_budget(delta.size(), enhanced_var_budget(p, caps), options);
  if (enhanced) {
    AllServerEnhanced scheme(p, caps, objective, delta);
    return make_result(objective, delta, solve_generation(scheme, p, options.threads));
  }
  HullScheme scheme(p, &caps, Rational(0), objective, delta);
  if (objective.kind == ObjectiveKind::symmetric_rate) {
    return make_result(objective, delta, solve_generation(scheme, p, options.threads));
  }
  GenerationOutcome outcome = per_tuple_max(scheme, p, options.threads, SolverConfig::from_env());
  return make_result(objective, delta, outcome);
}

InnerBoundResult distributed_cc_nonenhanced_hull(const Problem& p, const CapacityProfile& caps,
                                                 const ObjectiveSpec& objective, const DeltaSpace& delta,
                                                 const InnerOptions& options) {
  if (caps.n() != p.n()) throw std::invalid_argument("capacity profile size mismatch");
  check_budget(delta.size(), enhanced_var_budget(p, caps), options);
  HullScheme scheme(p, &caps, Rational(0), objective, delta);
  return make_result(objective, delta, solve_generation(scheme, p, options.threads));
}

InnerBoundResult distributed_cc_fractional(const Problem& p, const CapacityProfile& caps,
                                           const ServerGrouping& grouping, const ObjectiveSpec& objective,
                                           const InnerOptions& options) {
  if (caps.n() != p.n()) throw std::invalid_argument("capacity profile size mismatch");
  FractionalScheme scheme(p, caps, grouping, objective);
  if (scheme.variable_budget() > options.max_nonzeros) {
    throw DeltaTooLarge("fractional grouping needs " + std::to_string(scheme.variable_budget()) +
                        " variables, cap is " + std::to_string(options.max_nonzeros));
  }
  GenerationOutcome outcome = solve_generation(scheme, p, options.threads);
  InnerBoundResult r;
  r.objective = objective;
  r.value = outcome.value;
  r.rates = outcome.rates;
  r.delta_used = {DeltaStrategy::full, scheme.num_blocks(), outcome.activated};
  return r;
}

// ---------------------------------------------------------------------------
// Monolithic materializations
// ---------------------------------------------------------------------------

namespace {

LinearProgram materialize(const BlockScheme& scheme) {
  const MasterSpec& ms = scheme.master();
  LinearProgram lp;
  for (int v = 0; v < ms.num_vars; ++v) {
    lp.add_variable(0.0, false, ms.var_names.empty() ? std::string{} : ms.var_names[static_cast<std::size_t>(v)]);
  }
  for (auto [v, c] : ms.objective) lp.set_objective(v, c);
  std::vector<int> rows;
  for (std::size_t r = 0; r < ms.row_rhs.size(); ++r) {
    rows.push_back(lp.add_row(Relation::le, ms.row_rhs[r], ms.row_names.empty() ? std::string{} : ms.row_names[r]));
  }
  for (auto [row, v, c] : ms.coupling) lp.add_coeff(rows[static_cast<std::size_t>(row)], v, c);
  BlockLP block;
  for (std::uint64_t b = 0; b < scheme.num_blocks(); ++b) {
    scheme.build_block(b, block, /*with_names=*/true);
    int base = lp.num_variables();
    for (int v = 0; v < block.num_vars; ++v) lp.add_variable(0.0, false, block.var_names[static_cast<std::size_t>(v)]);
    for (auto [v, c] : block.objective) lp.set_objective(base + v, c);
    for (auto [row, v, c] : block.coupling) lp.add_coeff(rows[static_cast<std::size_t>(row)], base + v, c);
    for (std::size_t lr = 0; lr < block.rows.size(); ++lr) {
      int r = lp.add_row(Relation::le, 0.0, "decode_D" + std::to_string(b) + "_" + std::to_string(lr));
      for (auto [v, c] : block.rows[lr]) lp.add_coeff(r, base + v, c);
    }
  }
  return lp;
}

}  // namespace

LinearProgram build_allserver_lp(const Problem& p, const CapacityProfile& caps,
                                 const ObjectiveSpec& objective, const DeltaSpace& delta,
                                 const InnerOptions& options) {
  check_budget(delta.size(), enhanced_var_budget(p, caps), options);
  AllServerEnhanced scheme(p, caps, objective, delta);
  return materialize(scheme);
}

LinearProgram build_centralized_lp(const Problem& p, const Rational& capacity,
                                   const ObjectiveSpec& objective, const DeltaSpace& delta, bool enhanced,
                                   const InnerOptions& options) {
  check_budget(delta.size(), (std::uint64_t{1} << p.n()) + static_cast<std::uint64_t>(p.n()), options);
  if (enhanced) {
    CentralizedEnhanced scheme(p, capacity, objective, delta);
    return materialize(scheme);
  }
  HullScheme scheme(p, nullptr, capacity, objective, delta);
  return materialize(scheme);
}

LinearProgram build_nonenhanced_hull_lp(const Problem& p, const CapacityProfile& caps,
                                        const ObjectiveSpec& objective, const DeltaSpace& delta,
                                        const InnerOptions& options) {
  check_budget(delta.size(), enhanced_var_budget(p, caps) + 1, options);
  HullScheme scheme(p, &caps, Rational(0), objective, delta);
  return materialize(scheme);
}

LinearProgram build_fractional_lp(const Problem& p, const CapacityProfile& caps,
                                  const ServerGrouping& grouping, const ObjectiveSpec& objective,
                                  const InnerOptions& options) {
  FractionalScheme scheme(p, caps, grouping, objective);
  if (scheme.variable_budget() > options.max_nonzeros) {
    throw DeltaTooLarge("fractional grouping too large to materialize");
  }
  return materialize(scheme);
}

}  // namespace dicap
