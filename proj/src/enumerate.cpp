#include "permclust/enumerate.hpp"

#include <atomic>
#include <cstdlib>
#include <deque>
#include <map>
#include <mutex>
#include <string>

namespace permclust {

namespace {

std::atomic<std::uint64_t> g_enum_cap{0};  // 0 = not yet initialized

std::uint64_t initial_cap() {
  if (const char* env = std::getenv("PERMCLUST_ENUM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 10'000'000ULL;
}

[[noreturn]] void throw_cap(int n, const AvoidanceClass& cls, std::uint64_t cap) {
  throw ResourceLimit("enumeration cap of " + std::to_string(cap) +
                      " members exceeded for S_" + std::to_string(n) + "^{av(" + cls.key() +
                      ")}; raise PERMCLUST_ENUM_CAP to override");
}

// Depth-first prefix search. A prefix that contains a forbidden pattern can
// never extend to a class member, so each appended value is vetted with the
// ending-at-last incremental test; candidates run ascending, which yields
// lexicographic output order.
class Enumerator {
public:
  Enumerator(int n, const AvoidanceClass& cls, const ClassVisitor& visit)
      : n_(n), cls_(cls), visit_(visit), used_(static_cast<size_t>(n) + 1, 0) {
    prefix_.reserve(static_cast<size_t>(n));
  }

  void run() { descend(); }

private:
  bool descend() {  // returns false to abort the whole walk
    if (static_cast<int>(prefix_.size()) == n_) return visit_(Permutation(prefix_));
    for (int v = 1; v <= n_; ++v) {
      if (used_[static_cast<size_t>(v)]) continue;
      prefix_.push_back(v);
      bool clean = true;
      for (const auto& p : cls_.patterns()) {
        if (word_contains_ending_at_last(prefix_, p)) {
          clean = false;
          break;
        }
      }
      bool keep_going = true;
      if (clean) {
        used_[static_cast<size_t>(v)] = 1;
        keep_going = descend();
        used_[static_cast<size_t>(v)] = 0;
      }
      prefix_.pop_back();
      if (!keep_going) return false;
    }
    return true;
  }

  const int n_;
  const AvoidanceClass& cls_;
  const ClassVisitor& visit_;
  std::vector<char> used_;
  Word prefix_;
};

bool is_single_length3(const AvoidanceClass& cls) {
  return cls.patterns().size() == 1 && cls.patterns()[0].size() == 3;
}

std::mutex g_catalan_mutex;
std::deque<BigInt> g_catalan;  // deque keeps references stable while growing

std::mutex g_count_mutex;
std::map<std::pair<std::string, int>, BigInt> g_count_memo;

}  // namespace

std::uint64_t enumeration_cap() {
  std::uint64_t cap = g_enum_cap.load(std::memory_order_relaxed);
  if (cap == 0) {
    cap = initial_cap();
    g_enum_cap.store(cap, std::memory_order_relaxed);
  }
  return cap;
}

void set_enumeration_cap(std::uint64_t cap) {
  if (cap == 0) throw InvalidInput("enumeration cap must be positive");
  g_enum_cap.store(cap, std::memory_order_relaxed);
}

void for_each_in_class(int n, const AvoidanceClass& cls, const ClassVisitor& visit) {
  if (n < 1) throw InvalidInput("n must be positive");
  Enumerator e(n, cls, visit);
  e.run();
}

std::vector<Permutation> class_members(int n, const AvoidanceClass& cls) {
  std::vector<Permutation> out;
  const std::uint64_t cap = enumeration_cap();
  for_each_in_class(n, cls, [&](const Permutation& p) {
    if (out.size() >= cap) throw_cap(n, cls, cap);
    out.push_back(p);
    return true;
  });
  return out;
}

BigInt catalan(int n) {
  if (n < 0) throw InvalidInput("catalan index must be nonnegative");
  std::lock_guard<std::mutex> lock(g_catalan_mutex);
  while (static_cast<int>(g_catalan.size()) <= n) {
    const unsigned long m = static_cast<unsigned long>(g_catalan.size());
    BigInt c;
    mpz_bin_uiui(c.get_mpz_t(), 2 * m, m);
    mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), m + 1);
    g_catalan.push_back(c);
  }
  return g_catalan[static_cast<size_t>(n)];
}

std::vector<BigInt> catalan_values(int up_to) {
  catalan(up_to);  // fill
  std::vector<BigInt> out;
  out.reserve(static_cast<size_t>(up_to) + 1);
  std::lock_guard<std::mutex> lock(g_catalan_mutex);
  for (int i = 0; i <= up_to; ++i) out.push_back(g_catalan[static_cast<size_t>(i)]);
  return out;
}

BigInt count_class(int n, const AvoidanceClass& cls) {
  if (n < 0) throw InvalidInput("n must be nonnegative");
  if (n == 0) return 1;
  if (is_single_length3(cls)) return catalan(n);
  const auto memo_key = std::make_pair(cls.key(), n);
  {
    std::lock_guard<std::mutex> lock(g_count_mutex);
    auto it = g_count_memo.find(memo_key);
    if (it != g_count_memo.end()) return it->second;
  }
  const std::uint64_t cap = enumeration_cap();
  std::uint64_t count = 0;
  for_each_in_class(n, cls, [&](const Permutation&) {
    if (++count > cap) throw_cap(n, cls, cap);
    return true;
  });
  BigInt result(static_cast<unsigned long>(count));
  std::lock_guard<std::mutex> lock(g_count_mutex);
  g_count_memo.emplace(memo_key, result);
  return result;
}

BigRational sw_ratio(int n, const AvoidanceClass& cls) {
  if (n < 1) throw InvalidInput("sw_ratio needs n >= 1");
  return make_rational(count_class(n + 1, cls), count_class(n, cls));
}

std::vector<CountRow> count_table(int from, int to, const AvoidanceClass& cls) {
  if (from < 0 || to < from) throw InvalidInput("bad count range");
  std::vector<CountRow> rows;
  for (int n = from; n <= to; ++n) rows.push_back({n, count_class(n, cls)});
  return rows;
}

}  // namespace permclust
