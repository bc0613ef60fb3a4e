#pragma once

// Event-driven simulation of N identical clocks that exchange impulses
// through a shared support. Between kicks every phase advances at unit
// rate; when a clock reaches phase 2pi (== 0) it kicks, and every other
// clock j jumps by P(psi_j - psi_kicker), applied exactly.
//
// Tie handling: clocks reaching the threshold at the same instant kick in
// ascending index order, each kick applied before the next. A clock whose
// phase is exactly 0 is taken to have fired already, except at the start
// of a cycle where every clock sitting at 0 is still due.

#include <cstddef>
#include <optional>
#include <vector>

#include "triclock/phase_core.hpp"

namespace triclock {

/// Absolute phases of N >= 2 clocks, each in [0, 2pi). Clock 0 is the
/// reference whose cycle defines one iteration.
struct ClockEnsemble {
  std::vector<double> phases;
  CouplingParams params;

  /// Normalizes every phase; throws std::invalid_argument for N < 2.
  ClockEnsemble(std::vector<double> initial_phases, CouplingParams coupling);

  std::size_t size() const { return phases.size(); }
};

struct KickEvent {
  std::size_t cycle_index = 0;
  std::size_t kicking_clock = 0;
  /// Time since the start of the cycle.
  double time = 0.0;
  std::vector<double> phases_before;
  std::vector<double> phases_after;
};

struct CycleTrace {
  std::vector<KickEvent> events;
  ClockEnsemble start_state;
  ClockEnsemble end_state;
  /// Time for the reference clock to return to its threshold.
  double period = 0.0;
};

struct KickAdvance {
  ClockEnsemble ensemble;
  /// Lowest index among the clocks that reached the threshold.
  std::size_t kicker = 0;
  /// Every clock that reached the threshold at this instant, ascending.
  std::vector<std::size_t> tied;
  double shift = 0.0;
};

/// Free-runs all clocks by the common shift until the next one reaches 2pi.
/// Clocks at phase 0 count as just fired, so the shift lies in (0, 2pi].
KickAdvance advance_to_next_kick(const ClockEnsemble& ensemble);

/// Applies the kick of `kicker` to every other clock, wrapping into [0, 2pi).
ClockEnsemble apply_kick(const ClockEnsemble& ensemble, std::size_t kicker);

/// Thrown when a clock kicks twice within one reference cycle.
class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One full cycle of the reference clock, starting with its kick (its phase
/// must be 0) and closing just before its next kick.
CycleTrace run_cycle(const ClockEnsemble& ensemble, std::size_t cycle_index = 0);

/// (psi_1 - psi_0, psi_2 - psi_0) mod 2pi. Throws std::invalid_argument
/// unless N == 3.
PhasePoint phase_differences(const ClockEnsemble& ensemble);

/// psi_i - psi_0 mod 2pi for i = 1..N-1.
std::vector<double> relative_phases(const ClockEnsemble& ensemble);

/// Largest wrapped change between two relative-phase vectors.
double relative_phase_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Firing pattern of one cycle: when each clock kicked, as a fraction of
/// the cycle period scaled to 2pi.
struct FiringPattern {
  /// Per clock, indexed by clock; clock 0 is 0.
  std::vector<double> offsets;
  /// Clock indices in firing order, starting with clock 0.
  std::vector<std::size_t> order;
  /// Gaps between consecutive firings in that order, closing back to clock 0.
  std::vector<double> gaps;
};

/// Throws std::invalid_argument if some clock did not kick in the trace.
FiringPattern firing_pattern(const CycleTrace& trace);

/// Gaps between consecutive phases sorted by increasing lag behind clock 0.
std::vector<double> canonical_phase_gaps(const ClockEnsemble& ensemble);

struct LockResult {
  ClockEnsemble final_state;
  std::size_t cycles = 0;
  bool locked = false;
  /// Relative phases of the final state (see relative_phases).
  std::vector<double> differences;
  /// canonical_phase_gaps of the final state.
  std::vector<double> phase_gaps;
  /// Firing pattern of one further cycle from the final state.
  FiringPattern firing;
};

/// Runs cycles until the relative phases settle: the last change is below
/// `tol` and, when the changes contract geometrically, so is the projected
/// remaining distance to the limit. Gives up (locked = false) after
/// `max_cycles`.
LockResult run_until_locked(const ClockEnsemble& ensemble, double tol,
                            std::size_t max_cycles);

/// Ensemble (0, 2pi/N, 2*2pi/N, ...): equal phase spacing.
ClockEnsemble equal_spacing(std::size_t n, const CouplingParams& params);

}  // namespace triclock
