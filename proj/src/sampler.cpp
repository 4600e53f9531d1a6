#include "permclust/sampler.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <utility>

#include "permclust/cluster.hpp"
#include "permclust/enumerate.hpp"
#include "permclust/errors.hpp"

namespace permclust {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

BigInt u128_to_big(unsigned __int128 x) {
  BigInt hi(static_cast<unsigned long>(x >> 64));
  BigInt lo(static_cast<unsigned long>(x & ~0ULL));
  return (hi << 64) + lo;
}

unsigned __int128 big_to_u128(const BigInt& v) {
  BigInt hi = v >> 64;
  BigInt lo = v - (hi << 64);
  return (static_cast<unsigned __int128>(hi.get_ui()) << 64) | lo.get_ui();
}

}  // namespace

CounterRng CounterRng::from_seed(std::uint64_t seed) {
  CounterRng rng;
  rng.key_ = mix64(seed + kGamma);
  return rng;
}

CounterRng CounterRng::stream(std::uint64_t index) const {
  CounterRng child;
  child.key_ = mix64(key_ ^ mix64(index + 0xD1B54A32D192ED03ULL));
  return child;
}

std::uint64_t CounterRng::next() {
  counter_ += 1;
  return mix64(key_ + counter_ * kGamma);
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t mask = ~0ULL >> std::countl_zero(bound - 1);
  for (;;) {
    const std::uint64_t v = next() & mask;
    if (v < bound) return v;
  }
}

BigInt CounterRng::below_big(const BigInt& bound) {
  if (bound <= 1) return 0;
  // Draw ceil(bits/64) words, mask down to the bit width of bound-1, reject.
  const BigInt top = bound - 1;
  const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const unsigned top_bits = static_cast<unsigned>(bits - (words - 1) * 64);
  const std::uint64_t top_mask =
      top_bits == 64 ? ~0ULL : ((std::uint64_t{1} << top_bits) - 1);
  std::vector<std::uint64_t> buf(words);
  BigInt out;
  for (;;) {
    for (auto& w : buf) w = next();
    buf[words - 1] &= top_mask;
    mpz_import(out.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
    if (out < bound) return out;
  }
}

Catalan231Sampler::Catalan231Sampler(int max_n) : max_n_(max_n) {
  if (max_n < 1) throw InvalidInput("sampler size bound must be positive");
  catalans_ = catalan_values(max_n);
  bounds_.resize(static_cast<std::size_t>(max_n) + 1);
  for (int m = 2; m <= max_n; ++m) {
    auto& b = bounds_[static_cast<std::size_t>(m)];
    b.reserve(static_cast<std::size_t>(m) - 1);
    BigInt cum = 0;
    for (int j = 1; j <= m - 1; ++j) {
      cum += catalans_[static_cast<std::size_t>(j - 1)] *
             catalans_[static_cast<std::size_t>(m - j)];
      b.push_back(big_to_u128((cum << 128) / catalans_[static_cast<std::size_t>(m)]));
    }
  }
}

int Catalan231Sampler::split_position(int m, unsigned __int128 x, CounterRng& rng) const {
  const auto& b = bounds_[static_cast<std::size_t>(m)];
  const auto c = static_cast<std::size_t>(
      std::upper_bound(b.begin(), b.end(), x) - b.begin());
  if (c == 0 || b[c - 1] != x) return static_cast<int>(c) + 1;
  // x landed exactly on a rounded boundary; decide with the exact measure.
  // The draw is equivalent to picking the real (x + V/C_m) / 2^128 with V
  // uniform on {0..C_m-1}, so the cut goes left iff V < S_c*2^128 - x*C_m.
  BigInt cum = 0;
  for (std::size_t i = 1; i <= c; ++i)
    cum += catalans_[i - 1] * catalans_[static_cast<std::size_t>(m) - i];
  const BigInt& total = catalans_[static_cast<std::size_t>(m)];
  const BigInt rem = (cum << 128) - u128_to_big(x) * total;
  return rng.below_big(total) < rem ? static_cast<int>(c) : static_cast<int>(c) + 1;
}

Permutation Catalan231Sampler::sample(int n, CounterRng& rng) const {
  if (n < 1) throw InvalidInput("permutation size must be positive");
  if (n > max_n_)
    throw InvalidInput("requested size exceeds the sampler's table bound");
  Word out(static_cast<std::size_t>(n), 0);
  // Segments of the recursion: m values val_lo..val_lo+m-1 fill positions
  // pos_lo..pos_lo+m-1. The maximum at relative position j leaves the j-1
  // smallest values on its left and the rest on its right.
  std::vector<std::array<int, 3>> stack;
  stack.push_back({0, 1, n});
  while (!stack.empty()) {
    const auto [pos, val, m] = stack.back();
    stack.pop_back();
    if (m == 1) {
      out[static_cast<std::size_t>(pos)] = val;
      continue;
    }
    std::uint64_t hi = rng.next();
    std::uint64_t lo = rng.next();
    const auto x = (static_cast<unsigned __int128>(hi) << 64) | lo;
    const int j = split_position(m, x, rng);
    out[static_cast<std::size_t>(pos + j - 1)] = val + m - 1;
    if (j > 1) stack.push_back({pos, val, j - 1});
    if (j < m) stack.push_back({pos + j, val + j - 1, m - j});
  }
  return Permutation(std::move(out));
}

namespace {

std::shared_ptr<const Catalan231Sampler> shared_231(int n) {
  static std::mutex mu;
  static std::shared_ptr<const Catalan231Sampler> cached;
  std::lock_guard<std::mutex> lock(mu);
  if (!cached || cached->max_size() < n)
    cached = std::make_shared<Catalan231Sampler>(std::max(n, 64));
  return cached;
}

}  // namespace

Permutation sample_231(int n, CounterRng& rng) {
  if (n < 1) throw InvalidInput("permutation size must be positive");
  return shared_231(n)->sample(n, rng);
}

std::vector<int> uniform_dyck_word(int n, CounterRng& rng) {
  if (n < 1) throw InvalidInput("semilength must be positive");
  // Cycle lemma: shuffle n up-steps and n+1 down-steps; exactly one rotation
  // is a Dyck word followed by a down-step, namely the one starting right
  // after the first prefix-sum minimum.
  std::vector<int> steps(static_cast<std::size_t>(2 * n) + 1, -1);
  for (int i = 0; i < n; ++i) steps[static_cast<std::size_t>(i)] = 1;
  for (std::size_t i = steps.size() - 1; i > 0; --i) {
    const std::size_t j = rng.below(i + 1);
    std::swap(steps[i], steps[j]);
  }
  int sum = 0;
  int best = 0;
  std::size_t best_pos = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    sum += steps[i];
    if (sum < best) {
      best = sum;
      best_pos = i;
    }
  }
  std::rotate(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1,
              steps.end());
  steps.pop_back();  // the trailing forced down-step
  return steps;
}

Permutation dyck_to_321_avoider(const std::vector<int>& word) {
  if (word.empty()) throw InvalidInput("dyck word must be nonempty");
  if (word.size() % 2 != 0) throw InvalidInput("dyck word must have even length");
  const int n = static_cast<int>(word.size()) / 2;
  int sum = 0;
  for (int s : word) {
    if (s != 1 && s != -1) throw InvalidInput("dyck word steps must be +1 or -1");
    sum += s;
    if (sum < 0) throw InvalidInput("not a dyck word: prefix sum went negative");
  }
  if (sum != 0) throw InvalidInput("not a dyck word: unbalanced steps");
  // Walk the lattice path (up-step = east, down-step = north). Every
  // east-to-north corner at (x, y) with x >= y+2 contributes the excedance
  // sigma(y+1) = x; the remaining values fill the remaining positions in
  // increasing order.
  Word out(static_cast<std::size_t>(n), 0);
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  int x = 0;
  int y = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] == 1) {
      ++x;
      if (i + 1 < word.size() && word[i + 1] == -1 && x >= y + 2) {
        out[static_cast<std::size_t>(y)] = x;
        used[static_cast<std::size_t>(x)] = true;
      }
    } else {
      ++y;
    }
  }
  int v = 1;
  for (auto& entry : out) {
    if (entry != 0) continue;
    while (used[static_cast<std::size_t>(v)]) ++v;
    entry = v;
    used[static_cast<std::size_t>(v)] = true;
  }
  return Permutation(std::move(out));
}

Permutation sample_321(int n, CounterRng& rng) {
  if (n < 1) throw InvalidInput("permutation size must be positive");
  return dyck_to_321_avoider(uniform_dyck_word(n, rng));
}

namespace {

std::shared_ptr<const std::vector<Permutation>> enumerated_cache(
    int n, const AvoidanceClass& cls) {
  static std::mutex mu;
  static std::map<std::pair<std::string, int>,
                  std::shared_ptr<const std::vector<Permutation>>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{cls.key(), n}];
  if (!slot)
    slot = std::make_shared<const std::vector<Permutation>>(class_members(n, cls));
  return slot;
}

}  // namespace

Permutation sample_enumerated(int n, const AvoidanceClass& cls, CounterRng& rng) {
  if (n < 1) throw InvalidInput("permutation size must be positive");
  auto members = enumerated_cache(n, cls);
  if (members->empty())
    throw InvalidInput("avoidance class is empty at this size; nothing to sample");
  return (*members)[rng.below(members->size())];
}

namespace {

struct ResolvedSampler {
  SampleMethod method = SampleMethod::enumerated;
  Symmetry sym = Symmetry::reverse;
  bool apply_sym = false;
};

// The six length-3 singleton classes reduce to the two dedicated samplers
// through the symmetries that permute avoidance classes: a uniform draw from
// the base class maps to a uniform draw from the image class.
ResolvedSampler resolve_method(const AvoidanceClass& cls, SampleMethod method) {
  ResolvedSampler r;
  const auto& pats = cls.patterns();
  const bool single3 = pats.size() == 1 && pats[0].size() == 3;
  std::optional<SampleMethod> base;
  if (single3) {
    const Word& w = pats[0].word();
    if (w == Word{2, 3, 1}) {
      base = SampleMethod::recursive231;
      r.apply_sym = false;
    } else if (w == Word{1, 3, 2}) {
      base = SampleMethod::recursive231;
      r.apply_sym = true;
      r.sym = Symmetry::reverse;
    } else if (w == Word{2, 1, 3}) {
      base = SampleMethod::recursive231;
      r.apply_sym = true;
      r.sym = Symmetry::complement;
    } else if (w == Word{3, 1, 2}) {
      base = SampleMethod::recursive231;
      r.apply_sym = true;
      r.sym = Symmetry::reverse_complement;
    } else if (w == Word{3, 2, 1}) {
      base = SampleMethod::dyck321;
      r.apply_sym = false;
    } else if (w == Word{1, 2, 3}) {
      base = SampleMethod::dyck321;
      r.apply_sym = true;
      r.sym = Symmetry::reverse;
    }
  }
  switch (method) {
    case SampleMethod::automatic:
      r.method = base.value_or(SampleMethod::enumerated);
      if (!base) r.apply_sym = false;
      return r;
    case SampleMethod::recursive231:
      if (base != SampleMethod::recursive231)
        throw InvalidInput(
            "the recursive sampler handles the single patterns 231, 132, 213, 312");
      r.method = SampleMethod::recursive231;
      return r;
    case SampleMethod::dyck321:
      if (base != SampleMethod::dyck321)
        throw InvalidInput("the lattice-path sampler handles the single patterns 321, 123");
      r.method = SampleMethod::dyck321;
      return r;
    case SampleMethod::enumerated:
      r.method = SampleMethod::enumerated;
      r.apply_sym = false;
      return r;
  }
  throw InvalidInput("unknown sampling method");
}

Permutation draw_resolved(int n, const AvoidanceClass& cls, const ResolvedSampler& resolved,
                          CounterRng& rng) {
  Permutation sigma = resolved.method == SampleMethod::recursive231 ? sample_231(n, rng)
                      : resolved.method == SampleMethod::dyck321    ? sample_321(n, rng)
                                                : sample_enumerated(n, cls, rng);
  if (resolved.apply_sym) sigma = symmetry(sigma, resolved.sym);
  return sigma;
}

}  // namespace

SampleMethod parse_sample_method(const std::string& name) {
  if (name == "automatic" || name == "auto") return SampleMethod::automatic;
  if (name == "recursive231") return SampleMethod::recursive231;
  if (name == "dyck321") return SampleMethod::dyck321;
  if (name == "enumerated") return SampleMethod::enumerated;
  throw InvalidInput("unknown sampling method \"" + name + "\"");
}

Permutation sample_class(int n, const AvoidanceClass& cls, SampleMethod method,
                         CounterRng& rng) {
  if (n < 1) throw InvalidInput("permutation size must be positive");
  return draw_resolved(n, cls, resolve_method(cls, method), rng);
}

MCEstimate monte_carlo(const MCParams& params) {
  if (params.n < 1) throw InvalidInput("n must be positive");
  if (params.k < 2) throw InvalidInput("k must be at least 2");
  if (params.tau && params.tau->size() != params.k)
    throw InvalidInput("tau must be a pattern of length k");
  if (params.samples < 1) throw InvalidInput("sample count must be positive");
  if (params.workers < 1) throw InvalidInput("worker count must be positive");

  const ResolvedSampler resolved = resolve_method(params.cls, params.method);
  // Build shared tables up front so the workers only read them.
  if (resolved.method == SampleMethod::recursive231) {
    shared_231(params.n);
  } else if (resolved.method == SampleMethod::enumerated) {
    enumerated_cache(params.n, params.cls);
  }

  const auto draw = [&](CounterRng& rng) {
    return draw_resolved(params.n, params.cls, resolved, rng);
  };

  const int workers = params.workers;
  std::vector<std::uint64_t> sums(static_cast<std::size_t>(workers), 0);
  std::vector<std::uint64_t> sums_sq(static_cast<std::size_t>(workers), 0);
  const CounterRng root = CounterRng::from_seed(params.seed);

  const auto run_worker = [&](int w) {
    const std::uint64_t quota = params.samples / static_cast<std::uint64_t>(workers) +
                                (static_cast<std::uint64_t>(w) <
                                         params.samples % static_cast<std::uint64_t>(workers)
                                     ? 1
                                     : 0);
    CounterRng rng = root.stream(static_cast<std::uint64_t>(w));
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    for (std::uint64_t s = 0; s < quota; ++s) {
      const Permutation sigma = draw(rng);
      const auto c = static_cast<std::uint64_t>(
          params.tau ? count_clusters_tau(sigma, *params.tau)
                     : count_clusters(sigma, params.k));
      sum += c;
      sum_sq += c * c;
    }
    sums[static_cast<std::size_t>(w)] = sum;
    sums_sq[static_cast<std::size_t>(w)] = sum_sq;
  };

  if (workers == 1) {
    run_worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_worker, w);
    for (auto& t : pool) t.join();
  }

  MCEstimate est;
  est.samples = params.samples;
  est.seed = params.seed;
  est.workers = workers;
  for (int w = 0; w < workers; ++w) {
    est.sum += sums[static_cast<std::size_t>(w)];
    est.sum_sq += sums_sq[static_cast<std::size_t>(w)];
  }
  const BigInt big_s(static_cast<unsigned long>(params.samples));
  const BigInt big_sum(static_cast<unsigned long>(est.sum));
  const BigInt big_sq(static_cast<unsigned long>(est.sum_sq));
  est.mean = to_double(BigRational(big_sum) / BigRational(big_s));
  if (params.samples > 1) {
    const BigRational var =
        BigRational(big_s * big_sq - big_sum * big_sum) /
        BigRational(big_s * (big_s - 1));
    est.variance = to_double(var);
    est.stderr_of_mean = std::sqrt(est.variance / static_cast<double>(params.samples));
  }
  return est;
}

}  // namespace permclust
