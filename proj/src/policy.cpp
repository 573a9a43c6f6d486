#include "polyrl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "polyrl/bounds.hpp"
#include "polyrl/log.hpp"

namespace polyrl {

namespace {
const double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCosClampLo = 1e-6;
constexpr double kCosClampHi = 1.0 - 1e-6;
}  // namespace

void PolyRLParams::validate() const {
  if (!(beta > 0.0) || !(beta < 1.0))
    throw std::invalid_argument("PolyRLParams: beta must lie in (0, 1)");
  if (!(theta > 0.0) || !(theta < M_PI / 2.0))
    throw std::invalid_argument("PolyRLParams: theta must lie in (0, pi/2)");
  if (!(sigma_sq >= 0.0))
    throw std::invalid_argument("PolyRLParams: sigma_sq must be >= 0");
  if (min_segment_states < 2)
    throw std::invalid_argument("PolyRLParams: min_segment_states must be >= 2");
}

double lp_from_mean_cos(double mean_cos) {
  const double c =
      std::isnan(mean_cos) ? kCosClampHi : std::clamp(mean_cos, kCosClampLo, kCosClampHi);
  return 1.0 / std::fabs(std::log(c));
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::ExploitGreedy: return "exploit_greedy";
    case Branch::SwitchExplore: return "switch_explore";
    case Branch::ExploreWarmup: return "explore_warmup";
    case Branch::ExploreAccept: return "explore_accept";
    case Branch::BreakExploit: return "break_exploit";
  }
  return "unknown";
}

PolyRLPolicy::PolyRLPolicy(PolyRLParams params, ActionSpace space, Rng rng)
    : params_(params), space_(std::move(space)), rng_(std::move(rng)) {
  params_.validate();
  space_.validate();
  last_action_ = Vec::Zero(space_.dim());
}

void PolyRLPolicy::begin_episode(int episode, const Vec& s0, const Vec& a0) {
  if (episode < 0) throw std::invalid_argument("begin_episode: episode must be >= 0");
  if (a0.size() != space_.dim())
    throw std::invalid_argument("begin_episode: a0 dimension mismatch");
  episode_ = episode;
  delta_ = delta_schedule(params_.beta, episode);
  mode_ = Mode::Exploring;
  segment_.emplace(s0);
  pending_.reset();
  last_action_ = a0;
  counters_ = PolicyCounters{};
  counters_.segments = 1;
}

Vec PolyRLPolicy::persistent_action() {
  const double eta = sample_eta(params_.theta, params_.sigma_sq, rng_);
  SampledAction sampled = sample_action(last_action_, eta, space_, rng_);
  if (sampled.clipped) ++counters_.clip_events;
  if (sampled.fallback) ++counters_.fallback_events;
  return sampled.action;
}

std::pair<Vec, Decision> PolyRLPolicy::next_action(const Vec& obs,
                                                   const TargetPolicy& target) {
  if (!segment_) throw std::logic_error("next_action: begin_episode not called");

  Decision dec;
  dec.delta_ug2 = pending_ ? pending_->delta_ug2 : kNaN;
  dec.lb = kNaN;
  dec.ub = kNaN;

  Vec action;
  if (mode_ == Mode::Exploiting) {
    double kappa;
    if (params_.switch_distribution == SwitchDistribution::Normal) {
      std::normal_distribution<double> n01(0.0, 1.0);
      kappa = n01(rng_);
    } else {
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      kappa = u01(rng_);
    }
    if (kappa <= delta_) {
      action = target(obs);
      ++counters_.greedy_steps;
      dec.branch = Branch::ExploitGreedy;
    } else {
      mode_ = Mode::Exploring;
      segment_.emplace(obs);
      pending_.reset();
      ++counters_.segments;
      action = persistent_action();
      ++counters_.exploratory_steps;
      dec.branch = Branch::SwitchExplore;
    }
  } else {
    // Exploring. The bounds describe the segment as it stood before the
    // latest observation, so they are only consulted once that snapshot has
    // at least min_segment_states states (>= 2 bonds).
    const bool warmup = !pending_ || pending_->pre_states < params_.min_segment_states;
    if (warmup) {
      action = persistent_action();
      ++counters_.exploratory_steps;
      dec.branch = Branch::ExploreWarmup;
    } else {
      bool violated = false;
      try {
        BoundInputs in;
        in.n_states = pending_->pre_states;
        in.ug2 = pending_->pre_ug2;
        in.weighted_bond_sum_norm_sq = pending_->pre_weighted_norm_sq;
        in.b0_sq = pending_->pre_b0_sq;
        in.lp = lp_from_mean_cos(pending_->pre_mean_cos);
        in.delta = clamp_delta(delta_);
        dec.lb = lower_bound(in);
        dec.ub = upper_bound(in);
        if (dec.lb > dec.ub)
          log(LogLevel::Warn, "bound anomaly: LB %g > UB %g (n=%d)", dec.lb, dec.ub,
              in.n_states);
        violated = !(pending_->delta_ug2 >= dec.lb && pending_->delta_ug2 <= dec.ub);
        if (params_.break_on_obtuse_angle && pending_->latest_pair_cos < 0.0)
          violated = true;
      } catch (const std::domain_error& e) {
        log(LogLevel::Debug, "bound evaluation failed (%s); exploiting", e.what());
        violated = true;
      }
      if (violated) {
        mode_ = Mode::Exploiting;
        action = target(obs);
        ++counters_.greedy_steps;
        dec.branch = Branch::BreakExploit;
      } else {
        action = persistent_action();
        ++counters_.exploratory_steps;
        dec.branch = Branch::ExploreAccept;
      }
    }
  }

  last_action_ = action;
  dec.mode_after = mode_;
  return {std::move(action), dec};
}

double PolyRLPolicy::observe_transition(const Vec& next_obs) {
  if (!segment_) throw std::logic_error("observe_transition: begin_episode not called");
  if (mode_ != Mode::Exploring)
    throw std::logic_error("observe_transition: tracker is dormant while exploiting");

  PendingChange p;
  p.pre_states = segment_->count();
  p.pre_ug2 = segment_->ug2();
  p.pre_weighted_norm_sq = segment_->weighted_bond_sum().squaredNorm();
  p.pre_b0_sq = segment_->mean_bond_sq();
  p.pre_mean_cos = segment_->mean_cos();
  p.delta_ug2 = segment_->append(next_obs);
  p.latest_pair_cos = segment_->last_pair_cos();
  pending_ = p;
  return p.delta_ug2;
}

}  // namespace polyrl
