#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "polyrl/chain.hpp"
#include "polyrl/rng.hpp"
#include "polyrl/sampler.hpp"
#include "polyrl/vec.hpp"

namespace polyrl {

enum class SwitchDistribution { Normal, Uniform };

struct PolyRLParams {
  double beta = 0.01;      // exploration factor in (0, 1)
  double theta = 0.2;      // mean correlation angle, (0, pi/2)
  double sigma_sq = 1e-4;  // correlation variance
  SwitchDistribution switch_distribution = SwitchDistribution::Normal;
  bool break_on_obtuse_angle = false;
  int min_segment_states = 3;

  void validate() const;
};

enum class Mode { Exploring, Exploiting };

enum class Branch {
  ExploitGreedy,  // kappa <= delta, target policy action
  SwitchExplore,  // kappa > delta, new exploratory segment started
  ExploreWarmup,  // segment too short for bounds, persistent action
  ExploreAccept,  // gyration change within [LB, UB], persistent action
  BreakExploit,   // bound violation / obtuse break, target policy action
};

const char* branch_name(Branch b);

// Online persistence-number estimate from a mean consecutive-bond cosine;
// the cosine is clamped into [1e-6, 1-1e-6] and NaN (no valid pair) maps to
// the ceiling.
double lp_from_mean_cos(double mean_cos);

struct Decision {
  Branch branch;
  double delta_ug2;  // NaN when no transition has been observed yet
  double lb, ub;     // NaN unless the bounds were consulted
  Mode mode_after;
};

struct PolicyCounters {
  long greedy_steps = 0;
  long exploratory_steps = 0;
  long segments = 0;
  long clip_events = 0;
  long fallback_events = 0;
};

using TargetPolicy = std::function<Vec(const Vec&)>;

// The PolyRL behaviour policy: persistent exploratory segments validated by
// the gyration sensitivity bounds, interleaved with greedy steps from a
// supplied target policy.
class PolyRLPolicy {
 public:
  PolyRLPolicy(PolyRLParams params, ActionSpace space, Rng rng);

  // Resets delta from the schedule, starts a fresh segment at s0 and arms
  // the persistent sampler with a0.
  void begin_episode(int episode, const Vec& s0, const Vec& a0);

  // One action per call; requires the latest observation to have been fed
  // to observe_transition (except on the first step of an episode).
  std::pair<Vec, Decision> next_action(const Vec& obs, const TargetPolicy& target);

  // Appends the newly visited state to the active segment and caches the
  // gyration change plus the pre-append bound inputs. Only valid while
  // exploring. Returns the gyration change.
  double observe_transition(const Vec& next_obs);

  Mode mode() const { return mode_; }
  double delta() const { return delta_; }
  int episode() const { return episode_; }
  const GyrationTracker& segment() const { return *segment_; }
  const Vec& last_action() const { return last_action_; }
  const PolicyCounters& counters() const { return counters_; }

  // Running estimates over the current segment.
  double b0_sq_estimate() const { return segment_->mean_bond_sq(); }
  double lp_estimate() const { return lp_from_mean_cos(segment_->mean_cos()); }

  void set_mode(Mode m) { mode_ = m; }  // test hook

 private:
  Vec persistent_action();

  PolyRLParams params_;
  ActionSpace space_;
  Rng rng_;
  Mode mode_ = Mode::Exploring;
  int episode_ = 0;
  double delta_ = 0.0;
  std::optional<GyrationTracker> segment_;
  Vec last_action_;
  PolicyCounters counters_;

  // Snapshot of the segment before the latest append, for bound evaluation.
  struct PendingChange {
    int pre_states;
    double pre_ug2;
    double pre_weighted_norm_sq;
    double pre_b0_sq;
    double pre_mean_cos;  // NaN when no valid pair existed
    double delta_ug2;
    double latest_pair_cos;  // NaN when degenerate
  };
  std::optional<PendingChange> pending_;
};

}  // namespace polyrl
