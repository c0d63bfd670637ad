#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "mpcmst/mpc/primitives.hpp"

using namespace mpcmst;

namespace {

// n=16, kappa=4, delta=0.5 gives 16-word machines; m=4 and c_g=8 give a
// 160-word budget, so exactly 10 machines.
MpcConfig ten_machines() {
  MpcConfig c;
  c.n = 16;
  c.m = 4;
  return c;
}

MpcConfig roomy(Word n) {
  MpcConfig c;
  c.n = n;
  c.m = 4 * n;
  return c;
}

struct Val {
  Word key;
  Word id;
};

std::vector<Val> random_vals(std::mt19937_64& rng, std::size_t count, Word range) {
  std::vector<Val> v(count);
  std::uniform_int_distribution<Word> d(0, range);
  for (std::size_t i = 0; i < count; ++i) v[i] = Val{d(rng), static_cast<Word>(i)};
  return v;
}

}  // namespace

TEST_CASE("config derives caps from n, delta and kappa") {
  MpcConfig c;
  c.n = 16;
  CHECK(c.local_cap() == 16);
  c.n = 10000;
  c.delta = 0.25;
  CHECK(c.local_cap() == 40);
  c.n = 100;
  c.m = 300;
  c.delta = 0.5;
  CHECK(c.machine_count() * c.local_cap() >= c.global_budget());
}

TEST_CASE("config rejects degenerate settings") {
  MpcConfig c;
  CHECK_THROWS_AS(Simulator{c}, ConfigError);
  c.n = 16;
  c.delta = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.delta = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.delta = 0.5;
  c.kappa = 0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("scatter places round-robin without charging rounds") {
  Simulator sim(ten_machines());
  REQUIRE(sim.machines() == 10);
  std::vector<WordRecord> recs;
  for (Word i = 0; i < 100; ++i) recs.push_back(WordRecord::make({i}));
  auto s = sim.scatter(recs);
  for (std::size_t k = 0; k < 10; ++k) CHECK(s.machine(k).size() == 10);
  CHECK(sim.round() == 0);
  auto e = sim.scatter(std::vector<WordRecord>{});
  CHECK(e.empty());
}

TEST_CASE("scatter beyond the global budget faults") {
  Simulator sim(ten_machines());
  std::vector<WordRecord> recs(161, WordRecord::make({1}));
  try {
    auto s = sim.scatter(recs);
    FAIL("expected an accounting fault");
  } catch (const AccountingFault& f) {
    CHECK(f.kind() == FaultKind::global_memory);
  }
  CHECK(sim.resident_words() == 0);
}

TEST_CASE("resident streams count against the budget until released") {
  Simulator sim(ten_machines());
  std::vector<Val> recs(100, Val{1, 1});
  auto a = sim.scatter(recs);
  CHECK(sim.resident_words() == 100);
  CHECK_THROWS_AS(sim.scatter(recs), AccountingFault);
  { auto gone = std::move(a); }
  CHECK(sim.resident_words() == 0);
  auto b = sim.scatter(recs);
  CHECK(sim.stats().total_global_words == 100);
}

TEST_CASE("sort: sorted input is unchanged and empty input still costs a round") {
  Simulator sim(roomy(64));
  std::vector<Val> v;
  for (Word i = 0; i < 50; ++i) v.push_back(Val{i, i});
  auto s = sim.sort(sim.scatter(v), [](const Val& x) { return x.key; });
  auto out = s.collect();
  for (Word i = 0; i < 50; ++i) CHECK(out[static_cast<std::size_t>(i)].key == i);
  Word before = sim.round();
  auto e = sim.sort(sim.empty_stream<Val>(), [](const Val& x) { return x.key; });
  CHECK(e.empty());
  CHECK(sim.round() == before + 1);
}

TEST_CASE("sort matches a stable in-memory sort and balances load") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    Simulator sim(roomy(256));
    std::size_t count = std::uniform_int_distribution<std::size_t>(0, 1500)(rng);
    auto vals = random_vals(rng, count, trial % 2 == 0 ? 20 : 1000000);
    auto placed = sim.scatter(vals);
    // Stability is relative to stream order, which is machine-major.
    auto expect = placed.collect();
    auto s = sim.sort(std::move(placed), [](const Val& x) { return x.key; });
    std::stable_sort(expect.begin(), expect.end(), [](const Val& a, const Val& b) { return a.key < b.key; });
    auto got = s.collect();
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].key == expect[i].key);
      CHECK(got[i].id == expect[i].id);
    }
    double avg = static_cast<double>(count) / static_cast<double>(sim.general_machines());
    for (std::size_t k = 0; k < sim.machines(); ++k)
      CHECK(static_cast<double>(s.machine(k).size()) <= std::max(1.0, 2.0 * avg) + 1.0);
  }
}

TEST_CASE("sort conserves the multiset on a large stream") {
  std::mt19937_64 rng(11);
  Simulator sim(roomy(100000));
  auto vals = random_vals(rng, 100000, 5000);
  auto s = sim.sort(sim.scatter(vals), [](const Val& x) { return x.key; });
  auto got = s.collect();
  std::vector<Word> a, b;
  for (const Val& x : vals) a.push_back(x.id);
  for (const Val& x : got) b.push_back(x.id);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("prefix_aggregate is an exclusive fold") {
  Simulator sim(roomy(64));
  struct P {
    Word v;
    Word pre;
  };
  auto run = [&](std::vector<Word> vals, Word identity, auto op) {
    std::vector<P> recs;
    for (Word x : vals) recs.push_back(P{x, 0});
    auto s = sim.sort(sim.scatter(recs), [](const P&) { return 0; });
    s = sim.prefix_aggregate(std::move(s), identity, [](const P& p) { return p.v; }, op,
                             [](P& p, Word acc) { p.pre = acc; });
    std::vector<Word> out;
    for (const P& p : s.collect()) out.push_back(p.pre);
    return out;
  };
  auto plus = [](Word a, Word b) { return a + b; };
  auto mx = [](Word a, Word b) { return std::max(a, b); };
  CHECK(run({1, 1, 1, 1}, 0, plus) == std::vector<Word>{0, 1, 2, 3});
  CHECK(run({3, 7, 2}, kNegInf, mx) == std::vector<Word>{kNegInf, 3, 7});

  std::mt19937_64 rng(3);
  std::vector<Word> vals(10000);
  for (Word& x : vals) x = std::uniform_int_distribution<Word>(-1000000, 1000000)(rng);
  Simulator big(roomy(10000));
  std::vector<P> recs;
  for (Word x : vals) recs.push_back(P{x, 0});
  auto s = big.sort(big.scatter(recs), [](const P&) { return 0; });
  s = big.prefix_aggregate(
      std::move(s), kPosInf, [](const P& p) { return p.v; }, [](Word a, Word b) { return std::min(a, b); },
      [](P& p, Word acc) { p.pre = acc; });
  Word acc = kPosInf;
  auto got = s.collect();
  REQUIRE(got.size() == vals.size());
  for (const P& p : got) {
    CHECK(p.pre == acc);
    acc = std::min(acc, p.v);
  }
}

TEST_CASE("exchange: identity destinations cost one round and keep the stream") {
  Simulator sim(ten_machines());
  std::vector<Val> v;
  for (Word i = 0; i < 40; ++i) v.push_back(Val{i, i});
  auto s = sim.scatter(v);
  auto before = s.collect();
  s = sim.exchange(std::move(s), [](const Val&, std::size_t k) { return k; });
  CHECK(sim.round() == 1);
  auto after = s.collect();
  REQUIRE(after.size() == before.size());
  for (std::size_t i = 0; i < after.size(); ++i) CHECK(after[i].id == before[i].id);
}

TEST_CASE("exchange: funnelling everything to one machine faults on receive") {
  Simulator sim(ten_machines());
  std::vector<Val> v(100, Val{0, 0});
  auto s = sim.scatter(v);
  try {
    s = sim.exchange(std::move(s), [](const Val&, std::size_t) { return std::size_t{0}; });
    FAIL("expected an accounting fault");
  } catch (const AccountingFault& f) {
    CHECK(f.kind() == FaultKind::receive);
    CHECK(f.machine() == 0);
    CHECK(f.round() == 1);
  }
}

TEST_CASE("exchange: broadcasting by duplication yields one copy per machine") {
  Simulator sim(ten_machines());
  auto one = sim.scatter(std::vector<Val>{Val{42, 0}});
  const Word k = 7;
  auto copies = sim.local<Val>(one, [&](const Val& r, auto& emit) {
    for (Word j = 0; j < k; ++j) emit(Val{r.key, j});
  });
  copies = sim.exchange(std::move(copies), [](const Val& r, std::size_t) { return static_cast<std::size_t>(r.id); });
  for (Word j = 0; j < k; ++j) {
    REQUIRE(copies.machine(static_cast<std::size_t>(j)).size() == 1);
    CHECK(copies.machine(static_cast<std::size_t>(j))[0].key == 42);
  }
}

TEST_CASE("phase scopes attribute rounds and peaks") {
  Simulator sim(roomy(64));
  {
    auto ph = sim.phase("alpha");
    auto s = sim.sort(sim.scatter(std::vector<Val>(30, Val{1, 1})), [](const Val& x) { return x.key; });
    CHECK(sim.current_phase() == "alpha");
  }
  CHECK(sim.current_phase() == "setup");
  CHECK(sim.stats().rounds_by_phase.at("alpha") == 1);
  CHECK(sim.stats().peak_global_by_phase.at("alpha") >= 30);
}

TEST_CASE("lookup_join: equality and predecessor matching") {
  Simulator sim(roomy(256));
  std::vector<Val> prov{{10, 100}, {20, 200}, {30, 300}};
  std::vector<Val> qs{{20, 0}, {25, 0}, {5, 0}, {30, 0}};
  auto p = sim.scatter(prov);
  auto eq = equal_join(sim, p, sim.scatter(qs), [](const Val& x) { return make_key(x.key); },
                       [](const Val& x) { return make_key(x.key); },
                       [](Val& q, const Val* hit) { q.id = hit ? hit->id : kNone; });
  std::map<Word, Word> got;
  for (const Val& q : eq.collect()) got[q.key] = q.id;
  CHECK(got[20] == 200);
  CHECK(got[25] == kNone);
  CHECK(got[5] == kNone);
  CHECK(got[30] == 300);

  // Grouped predecessor: key (group, position), matching on the group only.
  auto pred = lookup_join(sim, p, sim.scatter(qs), [](const Val& x) { return make_key(0, x.key); },
                          [](const Val& x) { return make_key(0, x.key); }, 1,
                          [](Val& q, const Val* hit) { q.id = hit ? hit->id : kNone; });
  got.clear();
  for (const Val& q : pred.collect()) got[q.key] = q.id;
  CHECK(got[25] == 200);
  CHECK(got[5] == kNone);
  CHECK(got[30] == 300);
}

TEST_CASE("keep_first keeps the minimum per group") {
  std::mt19937_64 rng(5);
  Simulator sim(roomy(1024));
  auto vals = random_vals(rng, 2000, 50);
  auto s = keep_first(sim, sim.scatter(vals), [](const Val& v) { return make_key(v.key); },
                      [](const Val& v) { return -v.id; });
  std::map<Word, Word> expect;
  for (const Val& v : vals) expect[v.key] = std::max(expect.count(v.key) ? expect[v.key] : kNegInf, v.id);
  auto got = s.collect();
  CHECK(got.size() == expect.size());
  for (const Val& v : got) CHECK(expect[v.key] == v.id);
}

TEST_CASE("tightened limits fault exactly below the recorded peak") {
  std::mt19937_64 rng(9);
  auto vals = random_vals(rng, 3000, 100);
  auto run = [&](Simulator::Limits lim) {
    Simulator sim(roomy(1000), lim);
    auto s = sim.sort(sim.scatter(vals), [](const Val& v) { return v.key; });
    s = sim.exchange(std::move(s), [&](const Val& v, std::size_t) {
      return static_cast<std::size_t>(v.key) % sim.general_machines();
    });
    return sim.stats();
  };
  RoundStats base = run({});
  CHECK(run({base.peak_local_words, base.total_global_words}) == base);
  CHECK_THROWS_AS(run({base.peak_local_words - 1, 0}), AccountingFault);
  CHECK_THROWS_AS(run({0, base.total_global_words - 1}), AccountingFault);
}

TEST_CASE("reserved machines are excluded from balanced placement") {
  Simulator sim(roomy(256));
  auto r = sim.reserve(2);
  CHECK(r.end == sim.machines());
  auto s = sim.sort(sim.scatter(std::vector<Val>(500, Val{1, 1})), [](const Val& v) { return v.key; });
  for (std::size_t k = r.begin; k < r.end; ++k) CHECK(s.machine(k).empty());
}

TEST_CASE("attached machines extend the fleet outside general placement") {
  Simulator sim(roomy(256));
  std::size_t before = sim.machines();
  auto r = sim.attach(3);
  CHECK(r.begin == before);
  CHECK(sim.machines() == before + 3);
  CHECK(sim.general_machines() == before);
  auto s = sim.sort(sim.scatter(std::vector<Val>(500, Val{1, 1})), [](const Val& v) { return v.key; });
  for (std::size_t k = r.begin; k < r.end; ++k) CHECK(s.machine(k).empty());
  CHECK_THROWS_AS(sim.attach(1), std::logic_error);
}

TEST_CASE("merge_parallel takes maxima of rounds and sums of words") {
  RoundStats a, b;
  a.rounds_total = 5;
  b.rounds_total = 7;
  a.rounds_by_phase["x"] = 3;
  b.rounds_by_phase["x"] = 2;
  a.total_global_words = 10;
  b.total_global_words = 20;
  a.peak_local_words = 4;
  b.peak_local_words = 3;
  RoundStats m = merge_parallel(a, b);
  CHECK(m.rounds_total == 7);
  CHECK(m.rounds_by_phase["x"] == 3);
  CHECK(m.total_global_words == 30);
  CHECK(m.peak_local_words == 4);
}
