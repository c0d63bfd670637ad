#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "mpcmst/mpc/simulator.hpp"

namespace mpcmst {

namespace detail {

struct JoinItem {
  Key key;
  Word tag;
  Word index;
  Word match;
};

struct LastProvider {
  Word index = kNone;
  Key key{};
};

inline bool prefix_equal(const Key& a, const Key& b, std::size_t len) {
  return std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(len), b.begin());
}

}  // namespace detail

// Sort-and-scan join. Providers and queries are sorted together by key, with
// providers ahead of queries on equal keys; a prefix scan hands each query the
// nearest preceding provider. The match counts only when the two keys agree on
// their first match_len words, so match_len = 4 is an equality join and a
// shorter prefix turns it into a predecessor search within a group.
// apply(query&, const P* provider_or_null). Charges one sort and one prefix.
template <Record P, Record Q, class PK, class QK, class Apply>
Stream<Q> lookup_join(Simulator& sim, const Stream<P>& providers, Stream<Q> queries, PK pkey, QK qkey,
                      std::size_t match_len, Apply apply) {
  using detail::JoinItem;
  const std::size_t machines = sim.machines();
  std::vector<JoinItem> items;
  items.reserve(providers.size() + queries.size());
  std::vector<std::size_t> bounds(machines + 1, 0);
  std::vector<Q> qdata;
  qdata.reserve(queries.size());
  for (std::size_t k = 0; k < machines; ++k) {
    std::size_t base = providers.bounds().empty() ? 0 : providers.bounds()[k];
    if (!providers.bounds().empty()) {
      for (const P& p : providers.machine(k))
        items.push_back(JoinItem{pkey(p), 0, static_cast<Word>(base++), kNone});
    }
    if (!queries.bounds().empty()) {
      for (const Q& q : queries.machine(k)) {
        items.push_back(JoinItem{qkey(q), 1, static_cast<Word>(qdata.size()), kNone});
        qdata.push_back(q);
      }
    }
    bounds[k + 1] = items.size();
  }
  { Stream<Q> consumed = std::move(queries); }
  auto merged = sim.place(std::move(items), std::move(bounds));
  merged = sim.sort(std::move(merged), [](const JoinItem& it) { return std::pair<Key, Word>(it.key, it.tag); });
  merged = sim.prefix_aggregate(
      std::move(merged), detail::LastProvider{},
      [](const JoinItem& it) {
        return it.tag == 0 ? detail::LastProvider{it.index, it.key} : detail::LastProvider{};
      },
      [](const detail::LastProvider& a, const detail::LastProvider& b) { return b.index != kNone ? b : a; },
      [match_len](JoinItem& it, const detail::LastProvider& acc) {
        if (it.tag == 1 && acc.index != kNone && detail::prefix_equal(acc.key, it.key, match_len))
          it.match = acc.index;
      });
  auto pdata = providers.records();
  return sim.consume<Q>(std::move(merged), [&](const JoinItem& it, auto& emit) {
    if (it.tag != 1) return;
    Q q = qdata[static_cast<std::size_t>(it.index)];
    apply(q, it.match != kNone ? &pdata[static_cast<std::size_t>(it.match)] : static_cast<const P*>(nullptr));
    emit(q);
  });
}

template <Record P, Record Q, class PK, class QK, class Apply>
Stream<Q> equal_join(Simulator& sim, const Stream<P>& providers, Stream<Q> queries, PK pkey, QK qkey, Apply apply) {
  return lookup_join(sim, providers, std::move(queries), pkey, qkey, 4, apply);
}

// Keeps the first record of every group under (group, rank) order: one sort
// and one prefix scan.
template <Record R, class GroupFn, class RankFn>
Stream<R> keep_first(Simulator& sim, Stream<R> s, GroupFn group, RankFn rank) {
  s = sim.sort(std::move(s), [&](const R& r) { return std::make_pair(group(r), rank(r)); });
  std::vector<char> keep(s.size(), 0);
  std::size_t pos = 0;
  struct Last {
    bool has = false;
    Key key{};
  };
  s = sim.prefix_aggregate(
      std::move(s), Last{}, [&](const R& r) { return Last{true, group(r)}; },
      [](const Last& a, const Last& b) { return b.has ? b : a; },
      [&](R& r, const Last& acc) { keep[pos++] = !(acc.has && acc.key == group(r)); });
  pos = 0;
  return sim.filter(std::move(s), [&](const R&) { return keep[pos++] != 0; });
}

}  // namespace mpcmst
