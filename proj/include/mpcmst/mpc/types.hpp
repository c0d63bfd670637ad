#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace mpcmst {

using Word = std::int64_t;

inline constexpr Word kNegInf = std::numeric_limits<Word>::min();
inline constexpr Word kPosInf = std::numeric_limits<Word>::max();
inline constexpr Word kNone = -1;

// Records are fixed-arity tuples of machine words. The simulator charges one
// model word per record.
inline constexpr std::size_t kMaxRecordWords = 24;

template <class R>
concept Record = std::is_trivially_copyable_v<R> && sizeof(R) <= kMaxRecordWords * sizeof(Word);

using Key = std::array<Word, 4>;

inline Key make_key(Word a, Word b = 0, Word c = 0, Word d = 0) { return Key{a, b, c, d}; }

struct WordRecord {
  std::array<Word, 8> key{};
  std::array<Word, 8> payload{};
  std::uint8_t key_len = 0;
  std::uint8_t payload_len = 0;

  static WordRecord make(std::initializer_list<Word> k, std::initializer_list<Word> p = {}) {
    if (k.size() > 8 || p.size() > 8) throw std::invalid_argument("WordRecord arity exceeds 8");
    WordRecord r;
    std::size_t i = 0;
    for (Word x : k) r.key[i++] = x;
    i = 0;
    for (Word x : p) r.payload[i++] = x;
    r.key_len = static_cast<std::uint8_t>(k.size());
    r.payload_len = static_cast<std::uint8_t>(p.size());
    return r;
  }

  friend bool operator==(const WordRecord&, const WordRecord&) = default;
};

static_assert(Record<WordRecord>);

// Max-with-argument pair used by path maxima; kNegInf is the identity.
struct MaxArg {
  Word w = kNegInf;
  Word arg = kNone;
};

inline MaxArg max_of(MaxArg a, MaxArg b) { return b.w > a.w ? b : a; }

// Smallest k with 2^k >= x; 0 for x <= 1.
inline Word ceil_log2(Word x) {
  Word k = 0;
  while ((Word{1} << k) < x) ++k;
  return k;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(a)) ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

}  // namespace mpcmst
