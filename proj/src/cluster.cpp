#include "permclust/cluster.hpp"

#include <algorithm>
#include <string>

namespace permclust {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}

const AvoidanceClass& av231() {
  static const AvoidanceClass cls({Permutation({2, 3, 1})});
  return cls;
}

int max_position(const Permutation& p) {
  const auto& w = p.word();
  return static_cast<int>(std::max_element(w.begin(), w.end()) - w.begin()) + 1;
}

using Distribution = std::map<int, BigInt>;  // statistic value -> member count

Distribution convolve(const Distribution& a, const Distribution& b) {
  Distribution out;
  for (const auto& [xa, ca] : a)
    for (const auto& [xb, cb] : b) out[xa + xb] += ca * cb;
  return out;
}

struct Accumulator {
  BigInt members = 0;
  BigInt sum = 0;
  BigInt sum_sq = 0;

  void add(long x) {
    sum += x;
    sum_sq += x * x;
  }
};

MomentReport report_from(int n, int k, std::optional<Permutation> tau, const AvoidanceClass& cls,
                         const Accumulator& acc) {
  MomentReport r{n, k, std::move(tau), cls, acc.members, 0, 0, 0};
  r.mean = make_rational(acc.sum, acc.members);
  r.second_moment = make_rational(acc.sum_sq, acc.members);
  r.variance = r.second_moment - r.mean * r.mean;
  return r;
}

}  // namespace

std::vector<ClusterOccurrence> occurrences(const Permutation& sigma, int k) {
  const int n = sigma.size();
  require(2 <= k && k <= n, "need 2 <= k <= n");
  std::vector<ClusterOccurrence> out;
  for (int m = 1; m + k - 1 <= n; ++m) {
    int lo = sigma.at(m), hi = sigma.at(m);
    for (int i = m + 1; i <= m + k - 1; ++i) {
      lo = std::min(lo, sigma.at(i));
      hi = std::max(hi, sigma.at(i));
    }
    if (hi - lo == k - 1) {
      Word window(sigma.word().begin() + (m - 1), sigma.word().begin() + (m - 1 + k));
      out.push_back({lo, m, reduce(window)});
    }
  }
  return out;
}

int count_clusters(const Permutation& sigma, int k) {
  const int n = sigma.size();
  require(2 <= k && k <= n, "need 2 <= k <= n");
  int count = 0;
  for (int m = 1; m + k - 1 <= n; ++m) {
    int lo = sigma.at(m), hi = sigma.at(m);
    for (int i = m + 1; i <= m + k - 1; ++i) {
      lo = std::min(lo, sigma.at(i));
      hi = std::max(hi, sigma.at(i));
    }
    if (hi - lo == k - 1) ++count;
  }
  return count;
}

int count_clusters_tau(const Permutation& sigma, const Permutation& tau) {
  const int k = tau.size();
  const int n = sigma.size();
  require(2 <= k && k <= n, "need 2 <= k <= n");
  int count = 0;
  for (int m = 1; m + k - 1 <= n; ++m) {
    int lo = sigma.at(m), hi = sigma.at(m);
    for (int i = m + 1; i <= m + k - 1; ++i) {
      lo = std::min(lo, sigma.at(i));
      hi = std::max(hi, sigma.at(i));
    }
    if (hi - lo != k - 1) continue;
    Word window(sigma.word().begin() + (m - 1), sigma.word().begin() + (m - 1 + k));
    if (reduce(window) == tau) ++count;
  }
  return count;
}

MomentReport exact_moments(int n, int k, const std::optional<Permutation>& tau,
                           const AvoidanceClass& cls) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  if (tau) require(tau->size() == k, "tau must have length k");
  const std::uint64_t cap = enumeration_cap();
  Accumulator acc;
  std::uint64_t seen = 0;
  for_each_in_class(n, cls, [&](const Permutation& sigma) {
    if (++seen > cap)
      throw ResourceLimit("enumeration cap of " + std::to_string(cap) +
                          " members exceeded while computing moments over S_" + std::to_string(n) +
                          "^{av(" + cls.key() + ")}");
    acc.add(tau ? count_clusters_tau(sigma, *tau) : count_clusters(sigma, k));
    return true;
  });
  acc.members = BigInt(static_cast<unsigned long>(seen));
  return report_from(n, k, tau, cls, acc);
}

MomentSweep moment_sweep(int n, int k, const AvoidanceClass& cls) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  const std::uint64_t cap = enumeration_cap();
  std::map<Permutation, Accumulator> per_tau;
  Accumulator total;
  std::uint64_t seen = 0;
  for_each_in_class(n, cls, [&](const Permutation& sigma) {
    if (++seen > cap)
      throw ResourceLimit("enumeration cap of " + std::to_string(cap) +
                          " members exceeded while sweeping moments over S_" + std::to_string(n) +
                          "^{av(" + cls.key() + ")}");
    std::map<Permutation, int> counts;
    for (const auto& occ : occurrences(sigma, k)) ++counts[occ.pattern];
    int sum = 0;
    for (const auto& [pat, c] : counts) {
      sum += c;
      per_tau[pat].add(c);  // members that never hit a pattern contribute zeros
    }
    total.add(sum);
    return true;
  });
  for (auto& [pat, acc] : per_tau) {
    (void)pat;
    acc.members = BigInt(static_cast<unsigned long>(seen));
  }
  total.members = BigInt(static_cast<unsigned long>(seen));

  MomentSweep sweep{{}, report_from(n, k, std::nullopt, cls, total)};
  for (auto& [pat, acc] : per_tau) sweep.by_tau.emplace(pat, report_from(n, k, pat, cls, acc));
  return sweep;
}

BigRational event_probability(int n, int k, int l, const std::optional<Permutation>& tau,
                              const AvoidanceClass& cls) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  require(1 <= l && l + k - 1 <= n, "need 1 <= l <= n-k+1");
  if (tau) require(tau->size() == k, "tau must have length k");
  const std::uint64_t cap = enumeration_cap();
  std::uint64_t seen = 0;
  BigInt hits = 0;
  std::vector<int> pos(static_cast<size_t>(n) + 1, 0);
  for_each_in_class(n, cls, [&](const Permutation& sigma) {
    if (++seen > cap)
      throw ResourceLimit("enumeration cap of " + std::to_string(cap) +
                          " members exceeded while computing an event probability over S_" +
                          std::to_string(n) + "^{av(" + cls.key() + ")}");
    for (int p = 1; p <= n; ++p) pos[static_cast<size_t>(sigma.at(p))] = p;
    int lo_pos = pos[static_cast<size_t>(l)];
    int hi_pos = pos[static_cast<size_t>(l)];
    for (int v = l + 1; v <= l + k - 1; ++v) {
      lo_pos = std::min(lo_pos, pos[static_cast<size_t>(v)]);
      hi_pos = std::max(hi_pos, pos[static_cast<size_t>(v)]);
    }
    if (hi_pos - lo_pos != k - 1) return true;
    if (tau) {
      Word window(sigma.word().begin() + (lo_pos - 1), sigma.word().begin() + (lo_pos - 1 + k));
      if (!(reduce(window) == *tau)) return true;
    }
    hits += 1;
    return true;
  });
  return make_rational(hits, BigInt(static_cast<unsigned long>(seen)));
}

std::map<int, BigInt> count_distribution(int n, int k, const std::optional<Permutation>& tau,
                                         const AvoidanceClass& cls) {
  require(k >= 2 && n >= 0, "need k >= 2 and n >= 0");
  if (n == 0) return {{0, 1}};  // the empty permutation carries no clusters
  Distribution dist;
  for_each_in_class(n, cls, [&](const Permutation& sigma) {
    const int x = (n < k) ? 0 : (tau ? count_clusters_tau(sigma, *tau) : count_clusters(sigma, k));
    dist[x] += 1;
    return true;
  });
  return dist;
}

bool in_left_boundary_event(const Permutation& sigma, const Permutation& tau) {
  const int m = sigma.size();
  const int i = max_position(tau);
  if (m < i - 1) return false;
  for (int l = 1; l <= i - 1; ++l)
    if (sigma.at(m - i + 1 + l) != tau.at(l) + (m - i + 1)) return false;
  return true;
}

bool in_right_boundary_event(const Permutation& sigma, int k) {
  const int m = sigma.size();
  if (m < k - 1) return false;
  for (int l = 1; l <= k - 1; ++l)
    if (sigma.at(l) != m + 1 - l) return false;
  return true;
}

bool conditional_decomposition_check(int n, int k, const Permutation& tau, int j) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  require(tau.size() == k, "tau must have length k");
  require(1 <= j && j <= n, "need 1 <= j <= n");
  require(!contains(tau, Permutation({2, 3, 1})), "tau must avoid 231");

  const AvoidanceClass& cls = av231();

  // Conditional law of the cluster count given the maximum sits at position j.
  Distribution lhs;
  BigInt lhs_total = 0;
  for_each_in_class(n, cls, [&](const Permutation& sigma) {
    if (max_position(sigma) == j) {
      lhs[count_clusters_tau(sigma, tau)] += 1;
      lhs_total += 1;
    }
    return true;
  });

  const auto dist_at = [&](int m) { return count_distribution(m, k, tau, cls); };

  Distribution rhs;
  const bool tau_descending = tau == Permutation::decreasing(k);
  if (!tau_descending) {
    const int i = max_position(tau);
    if (j != n - k + i) {
      rhs = convolve(dist_at(j - 1), dist_at(n - j));
    } else {
      // Left factor: joint law of (count, boundary indicator) at size j-1.
      std::map<std::pair<int, int>, BigInt> joint;
      if (j == 1) {
        // Size-0 block: no clusters; the boundary event is vacuous iff i = 1.
        joint[{0, i == 1 ? 1 : 0}] += 1;
      } else {
        for_each_in_class(j - 1, cls, [&](const Permutation& sigma) {
          const int x = (j - 1 < k) ? 0 : count_clusters_tau(sigma, tau);
          joint[{x, in_left_boundary_event(sigma, tau) ? 1 : 0}] += 1;
          return true;
        });
      }
      // Right factor at size k-i: count is identically 0; the indicator asks
      // for one specific permutation, the reduction of tau's tail.
      const BigInt right_size = catalan(k - i);
      const BigInt y_one = 1;
      const BigInt y_zero = right_size - 1;
      for (const auto& [key, cnt] : joint) {
        const auto& [x, y1] = key;
        if (y1 == 0) {
          rhs[x] += cnt * right_size;
        } else {
          if (y_zero > 0) rhs[x] += cnt * y_zero;
          rhs[x + 1] += cnt * y_one;
        }
      }
    }
  } else {
    if (j <= n - k + 1) {
      Distribution right;  // law of count + boundary indicator at size n-j
      for_each_in_class(n - j, cls, [&](const Permutation& sigma) {
        const int x = (n - j < k) ? 0 : count_clusters_tau(sigma, tau);
        right[x + (in_right_boundary_event(sigma, k) ? 1 : 0)] += 1;
        return true;
      });
      rhs = convolve(dist_at(j - 1), right);
    } else {
      rhs = convolve(dist_at(j - 1), dist_at(n - j));
    }
  }

  // Both laws sit over sets of equal size: catalan(j-1) * catalan(n-j).
  BigInt rhs_total = 0;
  for (const auto& [x, c] : rhs) {
    (void)x;
    rhs_total += c;
  }
  if (lhs_total != rhs_total) return false;
  return lhs == rhs;
}

BigInt cross_term_coefficient(int n, int k, const Permutation& tau) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  require(tau.size() == k, "tau must have length k");
  require(!contains(tau, Permutation({2, 3, 1})), "tau must avoid 231");
  require(!(tau == Permutation::decreasing(k)), "descending tau has no cross term");
  const int i = max_position(tau);
  const int m = n - k + i - 1;
  if (m < k) return 0;  // too short to hold any cluster
  BigInt sum = 0;
  for_each_in_class(m, av231(), [&](const Permutation& sigma) {
    if (in_left_boundary_event(sigma, tau)) sum += count_clusters_tau(sigma, tau);
    return true;
  });
  return sum;
}

}  // namespace permclust
