#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpcmst/mpc/config.hpp"
#include "mpcmst/mpc/types.hpp"

namespace mpcmst {

class Simulator;

// Records distributed over the machines of one simulator. Stream order is
// machine-major: machine k holds positions [bounds[k], bounds[k+1]). Every
// live stream is resident memory and is charged against the caps.
template <Record R>
class Stream {
 public:
  Stream() = default;
  Stream(const Stream&) = delete;
  Stream& operator=(const Stream&) = delete;
  Stream(Stream&& o) noexcept { steal(o); }
  Stream& operator=(Stream&& o) noexcept {
    if (this != &o) {
      release();
      steal(o);
    }
    return *this;
  }
  ~Stream() { release(); }

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::span<const R> records() const { return data_; }
  std::span<const R> machine(std::size_t k) const {
    return std::span<const R>(data_).subspan(bounds_[k], bounds_[k + 1] - bounds_[k]);
  }
  const std::vector<std::size_t>& bounds() const { return bounds_; }
  // Harness read-out; not part of the simulated computation.
  std::vector<R> collect() const { return data_; }

 private:
  friend class Simulator;

  Stream(Simulator* sim, std::vector<R> data, std::vector<std::size_t> bounds);
  void release();
  void steal(Stream& o) {
    sim_ = std::exchange(o.sim_, nullptr);
    data_ = std::move(o.data_);
    bounds_ = std::move(o.bounds_);
    o.data_.clear();
    o.bounds_.clear();
  }

  Simulator* sim_ = nullptr;
  std::vector<R> data_;
  std::vector<std::size_t> bounds_;
};

class Simulator {
 public:
  struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  class Phase {
   public:
    Phase(Simulator* sim, std::string name) : sim_(sim), previous_(std::move(sim->phase_)) {
      sim_->phase_ = std::move(name);
      sim_->stats_.rounds_by_phase.try_emplace(sim_->phase_, 0);
    }
    Phase(const Phase&) = delete;
    Phase& operator=(const Phase&) = delete;
    ~Phase() { sim_->phase_ = std::move(previous_); }

   private:
    Simulator* sim_;
    std::string previous_;
  };

  // Enforcement thresholds; zero means "derived from the config". Tightening
  // them keeps the fleet layout identical, which is what replay audits need.
  struct Limits {
    Word local = 0;
    Word global = 0;
  };

  explicit Simulator(const MpcConfig& config) : Simulator(config, Limits{0, 0}) {}
  Simulator(const MpcConfig& config, Limits limits);
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  const MpcConfig& config() const { return config_; }
  std::size_t machines() const { return resident_.size(); }
  std::size_t general_machines() const { return general_; }
  Word local_cap() const { return fleet_cap_; }
  Word enforced_local_cap() const { return cap_; }
  Word enforced_global_budget() const { return budget_; }
  Word round() const { return stats_.rounds_total; }
  const RoundStats& stats() const { return stats_; }
  Word resident_words() const { return total_; }
  Word resident_on(std::size_t machine) const { return resident_[machine]; }

  // Takes machines from the top of the fleet out of general placement.
  Range reserve(std::size_t count);
  // Adds machines to the fleet outside general placement. Must run before
  // any stream exists, since stream layouts span the whole fleet.
  Range attach(std::size_t count);

  [[nodiscard]] Phase phase(std::string name) { return Phase(this, std::move(name)); }
  const std::string& current_phase() const { return phase_; }

  void charge(Word rounds);
  void charge_sort() { charge(config_.sort_round_cost); }
  void add_messages(Word k) { stats_.messages_sent += k; }

  // Input placement: round-robin over general machines, 0 rounds.
  template <Record R>
  Stream<R> scatter(std::vector<R> records) {
    const std::size_t g = general_;
    std::vector<std::vector<R>> per(g);
    for (std::size_t i = 0; i < records.size(); ++i) per[(cursor_ + i) % g].push_back(records[i]);
    cursor_ = (cursor_ + records.size()) % g;
    std::vector<R> data;
    data.reserve(records.size());
    std::vector<std::size_t> bounds(machines() + 1, 0);
    for (std::size_t k = 0; k < machines(); ++k) {
      if (k < g) data.insert(data.end(), per[k].begin(), per[k].end());
      bounds[k + 1] = data.size();
    }
    return Stream<R>(this, std::move(data), std::move(bounds));
  }

  // Stable sort by key; output balanced over the general machines.
  template <Record R, class KeyFn>
  Stream<R> sort(Stream<R> in, KeyFn key) {
    charge_sort();
    std::vector<R> data = take(in);
    add_messages(static_cast<Word>(data.size()));
    using K = std::decay_t<decltype(key(data.front()))>;
    std::vector<std::pair<K, std::size_t>> order;
    order.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) order.emplace_back(key(data[i]), i);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<R> sorted;
    sorted.reserve(data.size());
    for (const auto& [k, i] : order) sorted.push_back(data[i]);
    auto bounds = balanced_bounds(sorted.size());
    return Stream<R>(this, std::move(sorted), std::move(bounds));
  }

  // Exclusive prefix fold in stream order; store(record, prefix) receives the
  // fold of lift() over all earlier records.
  template <Record R, class T, class Lift, class Op, class Store>
  Stream<R> prefix_aggregate(Stream<R> in, T identity, Lift lift, Op op, Store store) {
    charge_sort();
    add_messages(static_cast<Word>(machines()));
    T acc = identity;
    for (R& r : in.data_) {
      T v = lift(static_cast<const R&>(r));
      store(r, static_cast<const T&>(acc));
      acc = op(acc, v);
    }
    return in;
  }

  // One round of point-to-point delivery; dest(record, source machine)
  // returns the destination machine.
  template <Record R, class Dest>
  Stream<R> exchange(Stream<R> in, Dest dest) {
    charge(1);
    const std::size_t mc = machines();
    std::vector<Word> sent(mc, 0), received(mc, 0);
    std::vector<std::size_t> target(in.size());
    for (std::size_t k = 0; k < mc; ++k) {
      for (std::size_t i = in.bounds_[k]; i < in.bounds_[k + 1]; ++i) {
        std::size_t d = dest(static_cast<const R&>(in.data_[i]), k);
        if (d >= mc) throw std::out_of_range("exchange destination outside the fleet");
        target[i] = d;
        if (d != k) {
          ++sent[k];
          ++received[d];
        }
      }
    }
    Word moved = 0;
    for (std::size_t k = 0; k < mc; ++k) {
      if (sent[k] > cap_) throw AccountingFault(FaultKind::send, static_cast<Word>(k), round(), sent[k], cap_);
      if (received[k] > cap_)
        throw AccountingFault(FaultKind::receive, static_cast<Word>(k), round(), received[k], cap_);
      moved += sent[k];
    }
    add_messages(moved);
    std::vector<R> data = take(in);
    std::vector<std::size_t> bounds(mc + 1, 0);
    for (std::size_t d : target) ++bounds[d + 1];
    for (std::size_t k = 0; k < mc; ++k) bounds[k + 1] += bounds[k];
    std::vector<std::size_t> fill(bounds.begin(), bounds.end() - 1);
    std::vector<R> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) out[fill[target[i]]++] = data[i];
    return Stream<R>(this, std::move(out), std::move(bounds));
  }

  // Local step: every record stays on its machine and emits zero or more
  // records there. 0 rounds.
  template <Record Out, Record In, class F>
  Stream<Out> local(const Stream<In>& in, F f) {
    std::vector<Out> out;
    out.reserve(in.size());
    std::vector<std::size_t> bounds(machines() + 1, 0);
    auto emit = [&out](const Out& o) { out.push_back(o); };
    for (std::size_t k = 0; k < machines(); ++k) {
      for (std::size_t i = in.bounds_[k]; i < in.bounds_[k + 1]; ++i) f(in.data_[i], emit);
      bounds[k + 1] = out.size();
    }
    return Stream<Out>(this, std::move(out), std::move(bounds));
  }

  // Local step that consumes its input, so the input and output are never
  // resident at the same time.
  template <Record Out, Record In, class F>
  Stream<Out> consume(Stream<In> in, F f) {
    std::vector<std::size_t> old = in.bounds_;
    std::vector<In> data = take(in);
    std::vector<Out> out;
    out.reserve(data.size());
    std::vector<std::size_t> bounds(machines() + 1, 0);
    auto emit = [&out](const Out& o) { out.push_back(o); };
    for (std::size_t k = 0; k < machines(); ++k) {
      for (std::size_t i = old[k]; i < old[k + 1]; ++i) f(static_cast<const In&>(data[i]), emit);
      bounds[k + 1] = out.size();
    }
    return Stream<Out>(this, std::move(out), std::move(bounds));
  }

  template <Record R, class Pred>
  Stream<R> filter(Stream<R> in, Pred keep) {
    std::vector<std::size_t> old = in.bounds_;
    std::vector<R> data = take(in);
    std::vector<R> out;
    out.reserve(data.size());
    std::vector<std::size_t> bounds(machines() + 1, 0);
    for (std::size_t k = 0; k < machines(); ++k) {
      for (std::size_t i = old[k]; i < old[k + 1]; ++i)
        if (keep(static_cast<const R&>(data[i]))) out.push_back(data[i]);
      bounds[k + 1] = out.size();
    }
    return Stream<R>(this, std::move(out), std::move(bounds));
  }

  template <Record R, class F>
  void update(Stream<R>& s, F f) {
    for (R& r : s.data_) f(r);
  }

  // Machine-wise concatenation; 0 rounds.
  template <Record R>
  Stream<R> concat(Stream<R> a, Stream<R> b) {
    std::vector<std::size_t> ba = a.bounds_, bb = b.bounds_;
    std::vector<R> da = take(a), db = take(b);
    if (ba.empty()) ba.assign(machines() + 1, 0);
    if (bb.empty()) bb.assign(machines() + 1, 0);
    std::vector<R> out;
    out.reserve(da.size() + db.size());
    std::vector<std::size_t> bounds(machines() + 1, 0);
    for (std::size_t k = 0; k < machines(); ++k) {
      out.insert(out.end(), da.begin() + ba[k], da.begin() + ba[k + 1]);
      out.insert(out.end(), db.begin() + bb[k], db.begin() + bb[k + 1]);
      bounds[k + 1] = out.size();
    }
    return Stream<R>(this, std::move(out), std::move(bounds));
  }

  template <Record R>
  Stream<R> copy(const Stream<R>& s) {
    return Stream<R>(this, s.data_, s.bounds_.empty() ? std::vector<std::size_t>(machines() + 1, 0) : s.bounds_);
  }

  template <Record R>
  Stream<R> empty_stream() {
    return Stream<R>(this, {}, std::vector<std::size_t>(machines() + 1, 0));
  }

  // Expansion with unbounded fan-out: record i produces count(i) records
  // make(i, 0..count-1). Output positions come from a prefix sum and the
  // records are created directly on balanced destination machines, so one
  // prefix round plus one delivery round are charged.
  template <Record Out, Record In, class Count, class Make>
  Stream<Out> fan_out(const Stream<In>& in, Count count, Make make) {
    charge_sort();
    charge(1);
    std::vector<Out> out;
    for (const In& r : in.data_) {
      Word c = count(r);
      for (Word j = 0; j < c; ++j) out.push_back(make(r, j));
    }
    add_messages(static_cast<Word>(out.size()));
    auto bounds = balanced_bounds(out.size());
    return Stream<Out>(this, std::move(out), std::move(bounds));
  }

  // Global count via a prefix sum over machine totals.
  template <Record R>
  Word count(const Stream<R>& s) {
    charge_sort();
    add_messages(static_cast<Word>(machines()));
    return static_cast<Word>(s.size());
  }

  // Builds a stream with an explicit placement (used by reserved-range
  // tables). Caps are checked as for any other stream.
  template <Record R>
  Stream<R> place(std::vector<R> data, std::vector<std::size_t> bounds) {
    return Stream<R>(this, std::move(data), std::move(bounds));
  }

  // In-place access for co-located merges on a machine.
  template <Record R>
  std::span<R> mutable_machine(Stream<R>& s, std::size_t k) {
    return std::span<R>(s.data_).subspan(s.bounds_[k], s.bounds_[k + 1] - s.bounds_[k]);
  }

  // Balanced placement of n records over the general machines; remainders go
  // to the least loaded machines.
  std::vector<std::size_t> balanced_bounds(std::size_t n) const;

 private:
  template <Record R>
  friend class Stream;

  template <Record R>
  std::vector<R> take(Stream<R>& s) {
    s.release();
    s.bounds_.clear();
    return std::move(s.data_);
  }

  void add_residency(const std::vector<std::size_t>& bounds);
  void remove_residency(const std::vector<std::size_t>& bounds);

  MpcConfig config_;
  Word cap_;
  Word fleet_cap_;
  Word budget_;
  std::size_t general_;
  std::size_t cursor_ = 0;
  std::vector<Word> resident_;
  Word total_ = 0;
  std::size_t streams_ = 0;  // live streams, for attach()
  std::string phase_ = "setup";
  RoundStats stats_;
};

template <Record R>
Stream<R>::Stream(Simulator* sim, std::vector<R> data, std::vector<std::size_t> bounds)
    : sim_(sim), data_(std::move(data)), bounds_(std::move(bounds)) {
  sim_->add_residency(bounds_);
  ++sim_->streams_;
}

template <Record R>
void Stream<R>::release() {
  if (sim_ != nullptr) {
    sim_->remove_residency(bounds_);
    --sim_->streams_;
    sim_ = nullptr;
  }
}

}  // namespace mpcmst
