#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "mpcmst/mpc/types.hpp"

namespace mpcmst {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MpcConfig {
  Word n = 0;
  Word m = 0;
  double delta = 0.5;
  double kappa = 4.0;
  Word c_g = 8;
  Word sort_round_cost = 1;
  std::uint64_t rng_seed = 0;

  Word local_cap() const;
  Word global_budget() const;
  Word machine_count() const;

  // Throws ConfigError when an invariant does not hold.
  void validate() const;
};

enum class FaultKind { local_memory, global_memory, send, receive, reserve };

const char* to_string(FaultKind k);

class AccountingFault : public std::runtime_error {
 public:
  AccountingFault(FaultKind kind, Word machine, Word round, Word words, Word cap);

  FaultKind kind() const { return kind_; }
  Word machine() const { return machine_; }
  Word round() const { return round_; }
  Word words() const { return words_; }
  Word cap() const { return cap_; }

 private:
  FaultKind kind_;
  Word machine_, round_, words_, cap_;
};

struct RoundStats {
  Word rounds_total = 0;
  std::map<std::string, Word> rounds_by_phase;
  std::map<std::string, Word> peak_global_by_phase;
  Word peak_local_words = 0;
  Word total_global_words = 0;
  Word messages_sent = 0;

  friend bool operator==(const RoundStats&, const RoundStats&) = default;
};

// Stats of independent per-component runs executed side by side: rounds and
// local peaks take the maximum, global words and messages add up.
RoundStats merge_parallel(const RoundStats& a, const RoundStats& b);

}  // namespace mpcmst
