#include "triclock/event_sim.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace triclock {

namespace {

// Tolerance for treating the reference clock as sitting on its threshold.
constexpr double kThresholdSlack = 1e-12;
// Changes below this are rounding noise; the ratio test is meaningless there.
constexpr double kRoundingFloor = 1e-13;

// Kicks every clock but `kicker`; returns the clocks pushed onto or across
// the threshold, which must kick immediately.
std::vector<std::size_t> kick_in_place(std::vector<double>& phases, std::size_t kicker,
                                       const CouplingParams& params) {
  std::vector<std::size_t> crossed;
  const double source = phases[kicker];
  for (std::size_t j = 0; j < phases.size(); ++j) {
    if (j == kicker) continue;
    double next = phases[j] + perturbation(phases[j] - source, params);
    if (next >= kTwoPi - kBoundarySnap) {
      next -= kTwoPi;
      if (next < kBoundarySnap) next = 0.0;
      crossed.push_back(j);
    } else if (next < 0.0) {
      next += kTwoPi;
    }
    phases[j] = next;
  }
  return crossed;
}

struct Shift {
  double delta = 0.0;
  std::vector<std::size_t> tied;
};

Shift next_shift(const std::vector<double>& phases) {
  Shift s;
  s.delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double wait = phases[i] > 0.0 ? kTwoPi - phases[i] : kTwoPi;
    if (wait < s.delta) {
      s.delta = wait;
      s.tied.assign(1, i);
    } else if (wait == s.delta) {
      s.tied.push_back(i);
    }
  }
  return s;
}

void free_run(std::vector<double>& phases, const Shift& s) {
  for (double& p : phases) {
    p += s.delta;
    if (p >= kTwoPi) p -= kTwoPi;
  }
  for (std::size_t i : s.tied) phases[i] = 0.0;
}

void insert_sorted(std::vector<std::size_t>& queue, std::size_t clock) {
  auto it = std::lower_bound(queue.begin(), queue.end(), clock);
  if (it == queue.end() || *it != clock) queue.insert(it, clock);
}

}  // namespace

ClockEnsemble::ClockEnsemble(std::vector<double> initial_phases, CouplingParams coupling)
    : phases(std::move(initial_phases)), params(coupling) {
  if (phases.size() < 2)
    throw std::invalid_argument("an ensemble needs at least 2 clocks, got " +
                                std::to_string(phases.size()));
  params.validate();
  for (double& p : phases) p = normalize_phase(p);
}

KickAdvance advance_to_next_kick(const ClockEnsemble& ensemble) {
  const Shift s = next_shift(ensemble.phases);
  KickAdvance out{ensemble, s.tied.front(), s.tied, s.delta};
  free_run(out.ensemble.phases, s);
  return out;
}

ClockEnsemble apply_kick(const ClockEnsemble& ensemble, std::size_t kicker) {
  if (kicker >= ensemble.size()) throw std::out_of_range("kicker index out of range");
  ClockEnsemble out = ensemble;
  kick_in_place(out.phases, kicker, out.params);
  return out;
}

CycleTrace run_cycle(const ClockEnsemble& ensemble, std::size_t cycle_index) {
  std::vector<double> phases = ensemble.phases;
  if (phases[0] > kThresholdSlack && phases[0] < kTwoPi - kThresholdSlack)
    throw std::invalid_argument("reference clock must start at its kick threshold (phase 0), got " +
                                std::to_string(phases[0]));
  phases[0] = 0.0;

  const std::size_t n = phases.size();
  CycleTrace trace{{}, ensemble, ensemble, 0.0};
  trace.start_state.phases = phases;

  std::vector<int> kicks(n, 0);
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < n; ++i)
    if (phases[i] == 0.0) pending.push_back(i);

  double t = 0.0;
  bool closed = false;
  while (!closed) {
    while (!pending.empty()) {
      const std::size_t k = pending.front();
      pending.erase(pending.begin());
      if (k == 0 && kicks[0] > 0) {
        closed = true;
        break;
      }
      if (kicks[k] > 0)
        throw CycleError("clock " + std::to_string(k) + " kicked twice in cycle " +
                         std::to_string(cycle_index) +
                         "; coupling too strong for the event ordering to hold");
      KickEvent ev{cycle_index, k, t, phases, {}};
      for (std::size_t c : kick_in_place(phases, k, ensemble.params)) insert_sorted(pending, c);
      ev.phases_after = phases;
      trace.events.push_back(std::move(ev));
      ++kicks[k];
    }
    if (closed) break;

    const Shift s = next_shift(phases);
    free_run(phases, s);
    t += s.delta;
    if (s.tied.front() == 0) break;
    pending = s.tied;
  }

  trace.period = t;
  trace.end_state.phases = phases;
  return trace;
}

PhasePoint phase_differences(const ClockEnsemble& ensemble) {
  if (ensemble.size() != 3)
    throw std::invalid_argument("phase differences (x, y) need exactly 3 clocks, got " +
                                std::to_string(ensemble.size()));
  const auto& p = ensemble.phases;
  return {normalize_phase(p[1] - p[0]), normalize_phase(p[2] - p[0])};
}

std::vector<double> relative_phases(const ClockEnsemble& ensemble) {
  std::vector<double> out;
  out.reserve(ensemble.size() - 1);
  for (std::size_t i = 1; i < ensemble.size(); ++i)
    out.push_back(normalize_phase(ensemble.phases[i] - ensemble.phases[0]));
  return out;
}

double relative_phase_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative phase vectors differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, circular_distance(a[i], b[i]));
  return d;
}

FiringPattern firing_pattern(const CycleTrace& trace) {
  const std::size_t n = trace.start_state.size();
  if (!(trace.period > 0.0)) throw std::invalid_argument("trace has no positive period");
  FiringPattern fp;
  fp.offsets.assign(n, -1.0);
  for (const KickEvent& ev : trace.events) {
    if (fp.offsets[ev.kicking_clock] >= 0.0) continue;
    fp.offsets[ev.kicking_clock] = ev.time / trace.period * kTwoPi;
    fp.order.push_back(ev.kicking_clock);
  }
  if (fp.order.size() != n)
    throw std::invalid_argument("not every clock kicked during the traced cycle");
  for (std::size_t i = 0; i < n; ++i) {
    const double next = i + 1 < n ? fp.offsets[fp.order[i + 1]] : kTwoPi;
    fp.gaps.push_back(next - fp.offsets[fp.order[i]]);
  }
  return fp;
}

std::vector<double> canonical_phase_gaps(const ClockEnsemble& ensemble) {
  std::vector<double> rel = relative_phases(ensemble);
  rel.push_back(0.0);
  std::sort(rel.begin(), rel.end());
  std::vector<double> gaps;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    const double next = i + 1 < rel.size() ? rel[i + 1] : kTwoPi;
    gaps.push_back(next - rel[i]);
  }
  return gaps;
}

LockResult run_until_locked(const ClockEnsemble& ensemble, double tol, std::size_t max_cycles) {
  if (!(tol > 0.0)) throw std::invalid_argument("lock tolerance must be > 0");

  ClockEnsemble state = ensemble;
  std::vector<double> prev = relative_phases(state);
  double prev_move = std::numeric_limits<double>::infinity();
  LockResult result{state, 0, false, {}, {}, {}};

  for (std::size_t c = 0; c < max_cycles; ++c) {
    state = run_cycle(state, c).end_state;
    std::vector<double> cur = relative_phases(state);
    const double move = relative_phase_distance(cur, prev);
    bool settled = false;
    if (move < tol) {
      if (move < kRoundingFloor) {
        settled = true;
      } else if (std::isfinite(prev_move)) {
        const double ratio = move / prev_move;
        settled = ratio < 1.0 && move * ratio / (1.0 - ratio) < tol;
      }
    }
    prev = std::move(cur);
    prev_move = move;
    result.cycles = c + 1;
    if (settled) {
      result.locked = true;
      break;
    }
  }

  result.final_state = state;
  result.differences = relative_phases(state);
  result.phase_gaps = canonical_phase_gaps(state);
  result.firing = firing_pattern(run_cycle(state, result.cycles));
  return result;
}

ClockEnsemble equal_spacing(std::size_t n, const CouplingParams& params) {
  std::vector<double> phases(n);
  for (std::size_t i = 0; i < n; ++i)
    phases[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
  return ClockEnsemble(std::move(phases), params);
}

}  // namespace triclock
