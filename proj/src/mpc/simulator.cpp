#include "mpcmst/mpc/simulator.hpp"

#include <cmath>
#include <sstream>

namespace mpcmst {

Word MpcConfig::local_cap() const {
  if (n <= 0) return 0;
  // The small tolerance keeps exact powers such as 10^(4*0.25) from rounding up.
  double s = kappa * std::pow(static_cast<double>(n), delta);
  return static_cast<Word>(std::ceil(s - 1e-9));
}

Word MpcConfig::global_budget() const { return c_g * (m + n); }

Word MpcConfig::machine_count() const {
  Word cap = local_cap();
  if (cap <= 0) return 0;
  return (global_budget() + cap - 1) / cap;
}

void MpcConfig::validate() const {
  if (n <= 0) throw ConfigError("empty instance: n must be positive");
  if (m < 0) throw ConfigError("edge count must be nonnegative");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  if (c_g <= 0) throw ConfigError("c_g must be positive");
  if (sort_round_cost < 0) throw ConfigError("sort_round_cost must be nonnegative");
  if (local_cap() < 2) throw ConfigError("local_cap must be at least 2 words");
}

const char* to_string(FaultKind k) {
  switch (k) {
    case FaultKind::local_memory: return "local memory";
    case FaultKind::global_memory: return "global memory";
    case FaultKind::send: return "send";
    case FaultKind::receive: return "receive";
    case FaultKind::reserve: return "reserve";
  }
  return "unknown";
}

namespace {

std::string fault_message(FaultKind kind, Word machine, Word round, Word words, Word cap) {
  std::ostringstream os;
  os << "accounting fault (" << to_string(kind) << "): ";
  if (machine >= 0) os << "machine " << machine << ' ';
  os << words << " words exceed cap " << cap << " at round " << round;
  return os.str();
}

}  // namespace

AccountingFault::AccountingFault(FaultKind kind, Word machine, Word round, Word words, Word cap)
    : std::runtime_error(fault_message(kind, machine, round, words, cap)),
      kind_(kind),
      machine_(machine),
      round_(round),
      words_(words),
      cap_(cap) {}

RoundStats merge_parallel(const RoundStats& a, const RoundStats& b) {
  RoundStats r = a;
  r.rounds_total = std::max(a.rounds_total, b.rounds_total);
  for (const auto& [k, v] : b.rounds_by_phase) r.rounds_by_phase[k] = std::max(r.rounds_by_phase[k], v);
  for (const auto& [k, v] : b.peak_global_by_phase) r.peak_global_by_phase[k] += v;
  r.peak_local_words = std::max(a.peak_local_words, b.peak_local_words);
  r.total_global_words = a.total_global_words + b.total_global_words;
  r.messages_sent = a.messages_sent + b.messages_sent;
  return r;
}

Simulator::Simulator(const MpcConfig& config, Limits limits) : config_(config) {
  config_.validate();
  fleet_cap_ = config_.local_cap();
  cap_ = limits.local > 0 ? limits.local : fleet_cap_;
  budget_ = limits.global > 0 ? limits.global : config_.global_budget();
  general_ = static_cast<std::size_t>(config_.machine_count());
  resident_.assign(general_, 0);
  stats_.rounds_by_phase.try_emplace(phase_, 0);
}

Simulator::Range Simulator::reserve(std::size_t count) {
  if (count >= general_) throw AccountingFault(FaultKind::reserve, kNone, round(), static_cast<Word>(count),
                                               static_cast<Word>(general_) - 1);
  for (std::size_t k = general_ - count; k < general_; ++k) {
    if (resident_[k] != 0) throw std::logic_error("reserving machines that already hold records");
  }
  general_ -= count;
  return Range{general_, general_ + count};
}

Simulator::Range Simulator::attach(std::size_t count) {
  if (total_ != 0 || streams_ != 0) throw std::logic_error("attaching machines while streams are live");
  Range r{resident_.size(), resident_.size() + count};
  resident_.resize(r.end, 0);
  return r;
}

void Simulator::charge(Word rounds) {
  stats_.rounds_total += rounds;
  stats_.rounds_by_phase[phase_] += rounds;
}

std::vector<std::size_t> Simulator::balanced_bounds(std::size_t n) const {
  const std::size_t g = general_;
  std::vector<std::size_t> count(machines(), n / g);
  for (std::size_t k = g; k < machines(); ++k) count[k] = 0;
  std::size_t extra = n % g;
  if (extra > 0) {
    std::vector<std::size_t> idx(g);
    std::iota(idx.begin(), idx.end(), 0);
    auto lighter = [this](std::size_t a, std::size_t b) {
      return resident_[a] != resident_[b] ? resident_[a] < resident_[b] : a < b;
    };
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(extra - 1), idx.end(), lighter);
    for (std::size_t i = 0; i < extra; ++i) ++count[idx[i]];
  }
  std::vector<std::size_t> bounds(machines() + 1, 0);
  for (std::size_t k = 0; k < machines(); ++k) bounds[k + 1] = bounds[k] + count[k];
  return bounds;
}

void Simulator::add_residency(const std::vector<std::size_t>& bounds) {
  if (bounds.empty()) return;
  Word worst = 0;
  std::size_t worst_machine = 0;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    Word c = static_cast<Word>(bounds[k + 1] - bounds[k]);
    if (c == 0) continue;
    resident_[k] += c;
    total_ += c;
    if (resident_[k] > worst) {
      worst = resident_[k];
      worst_machine = k;
    }
  }
  if (worst > cap_ || total_ > budget_) {
    Word machine_words = worst;
    Word total_words = total_;
    remove_residency(bounds);
    if (total_words > budget_) throw AccountingFault(FaultKind::global_memory, kNone, round(), total_words, budget_);
    throw AccountingFault(FaultKind::local_memory, static_cast<Word>(worst_machine), round(), machine_words, cap_);
  }
  stats_.peak_local_words = std::max(stats_.peak_local_words, worst);
  stats_.total_global_words = std::max(stats_.total_global_words, total_);
  Word& phase_peak = stats_.peak_global_by_phase[phase_];
  phase_peak = std::max(phase_peak, total_);
}

void Simulator::remove_residency(const std::vector<std::size_t>& bounds) {
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    Word c = static_cast<Word>(bounds[k + 1] - bounds[k]);
    resident_[k] -= c;
    total_ -= c;
  }
}

}  // namespace mpcmst
