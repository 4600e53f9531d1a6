#include "permclust/permutation.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <sstream>

namespace permclust {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}

}  // namespace

Permutation::Permutation(std::vector<int> word) : word_(std::move(word)) {
  const int n = static_cast<int>(word_.size());
  require(n >= 1, "a permutation has at least one entry");
  std::vector<char> seen(static_cast<size_t>(n) + 1, 0);
  for (int v : word_) {
    require(v >= 1 && v <= n, "permutation entries must be a bijection on {1..n}");
    require(!seen[static_cast<size_t>(v)], "permutation entries must be distinct");
    seen[static_cast<size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  require(n >= 1, "size must be positive");
  std::vector<int> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = i + 1;
  return Permutation(std::move(w));
}

Permutation Permutation::decreasing(int n) {
  require(n >= 1, "size must be positive");
  std::vector<int> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = n - i;
  return Permutation(std::move(w));
}

AvoidanceClass::AvoidanceClass(std::vector<Permutation> patterns) : patterns_(std::move(patterns)) {
  require(!patterns_.empty(), "avoidance class needs at least one pattern");
  for (const auto& p : patterns_)
    require(p.size() >= 2, "avoidance patterns must have length >= 2");
  std::sort(patterns_.begin(), patterns_.end(), [](const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.word() < b.word();
  });
  patterns_.erase(std::unique(patterns_.begin(), patterns_.end()), patterns_.end());
}

AvoidanceClass AvoidanceClass::parse(const std::string& text) {
  std::vector<Permutation> pats;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, '+')) {
    require(!part.empty(), "empty pattern in class \"" + text + "\"");
    pats.push_back(parse_permutation(part));
  }
  require(!pats.empty(), "empty avoidance class \"" + text + "\"");
  return AvoidanceClass(std::move(pats));
}

std::string AvoidanceClass::key() const {
  std::string out;
  for (size_t i = 0; i < patterns_.size(); ++i) {
    if (i > 0) out += '+';
    out += to_string(patterns_[i]);
  }
  return out;
}

Permutation reduce(const Word& w) {
  const int m = static_cast<int>(w.size());
  require(m >= 1, "cannot reduce an empty word");
  std::vector<int> order(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return w[static_cast<size_t>(a)] < w[static_cast<size_t>(b)]; });
  std::vector<int> out(static_cast<size_t>(m));
  for (int rank = 0; rank < m; ++rank) {
    const int idx = order[static_cast<size_t>(rank)];
    if (rank > 0)
      require(w[static_cast<size_t>(idx)] != w[static_cast<size_t>(order[static_cast<size_t>(rank - 1)])],
              "reduce requires distinct entries");
    out[static_cast<size_t>(idx)] = rank + 1;
  }
  return Permutation(std::move(out));
}

Permutation reverse(const Permutation& sigma) {
  std::vector<int> w(sigma.word().rbegin(), sigma.word().rend());
  return Permutation(std::move(w));
}

Permutation complement(const Permutation& sigma) {
  const int n = sigma.size();
  std::vector<int> w;
  w.reserve(static_cast<size_t>(n));
  for (int v : sigma.word()) w.push_back(n + 1 - v);
  return Permutation(std::move(w));
}

Permutation reverse_complement(const Permutation& sigma) { return reverse(complement(sigma)); }

Permutation symmetry(const Permutation& sigma, Symmetry which) {
  switch (which) {
    case Symmetry::reverse: return reverse(sigma);
    case Symmetry::complement: return complement(sigma);
    case Symmetry::reverse_complement: return reverse_complement(sigma);
  }
  throw InvalidInput("unknown symmetry");
}

namespace {

// Backtracking embedding of pattern into w. Positions are matched left to
// right; each candidate value must fall strictly between the values already
// chosen for the pattern entries just below and just above the current one,
// which prunes inconsistent branches in O(1) per candidate.
class Matcher {
public:
  Matcher(const Word& w, const Permutation& pattern) : w_(w), p_(pattern.word()) {}

  bool search(bool pin_last) {
    n_ = static_cast<int>(w_.size());
    m_ = static_cast<int>(p_.size());
    if (m_ > n_) return false;
    chosen_.assign(static_cast<size_t>(m_), -1);
    pinned_ = pin_last;
    if (pin_last) {
      chosen_[static_cast<size_t>(m_ - 1)] = n_ - 1;
      if (m_ == 1) return true;
      return match(0, 0);
    }
    return match(0, 0);
  }

private:
  bool match(int pi, int start) {
    const int last_free = pinned_ ? m_ - 2 : m_ - 1;
    if (pi > last_free) return true;
    const int limit = pinned_ ? n_ - 1 : n_;  // positions available to free entries
    int lo = std::numeric_limits<int>::min();
    int hi = std::numeric_limits<int>::max();
    for (int j = 0; j < m_; ++j) {
      if (chosen_[static_cast<size_t>(j)] < 0 || j == pi) continue;
      const int val = w_[static_cast<size_t>(chosen_[static_cast<size_t>(j)])];
      if (p_[static_cast<size_t>(j)] < p_[static_cast<size_t>(pi)])
        lo = std::max(lo, val);
      else
        hi = std::min(hi, val);
    }
    for (int i = start; i <= limit - (last_free - pi + 1); ++i) {
      const int v = w_[static_cast<size_t>(i)];
      if (v <= lo || v >= hi) continue;
      chosen_[static_cast<size_t>(pi)] = i;
      if (match(pi + 1, i + 1)) return true;
      chosen_[static_cast<size_t>(pi)] = -1;
    }
    return false;
  }

  const Word& w_;
  const std::vector<int>& p_;
  int n_ = 0;
  int m_ = 0;
  bool pinned_ = false;
  std::vector<int> chosen_;
};

}  // namespace

bool word_contains(const Word& w, const Permutation& pattern) {
  if (pattern.size() == 0) return true;
  Matcher m(w, pattern);
  return m.search(false);
}

bool word_contains_ending_at_last(const Word& w, const Permutation& pattern) {
  if (pattern.size() == 0) return true;
  if (w.empty()) return false;
  Matcher m(w, pattern);
  return m.search(true);
}

bool contains(const Permutation& sigma, const Permutation& pattern) {
  return word_contains(sigma.word(), pattern);
}

bool avoids_all(const Permutation& sigma, const AvoidanceClass& cls) {
  return word_avoids_all(sigma.word(), cls);
}

bool word_avoids_all(const Word& w, const AvoidanceClass& cls) {
  for (const auto& p : cls.patterns())
    if (word_contains(w, p)) return false;
  return true;
}

std::vector<Interval> find_blocks(const Permutation& sigma) {
  const int n = sigma.size();
  std::vector<Interval> blocks;
  for (int a = 1; a + 1 <= n; ++a) {
    int lo = sigma.at(a);
    int hi = sigma.at(a);
    // Grow the window to the right; it is a block iff max-min == length-1.
    for (int k = 2; k <= n - 1 && a + k - 1 <= n; ++k) {
      const int v = sigma.at(a + k - 1);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      if (hi - lo == k - 1) blocks.push_back({a, k});
    }
  }
  return blocks;
}

bool is_simple(const Permutation& sigma) {
  if (sigma.size() <= 2) return true;
  return find_blocks(sigma).empty();
}

Permutation contract(const Permutation& sigma, int l, int a, int k) {
  const int n = sigma.size();
  require(k >= 1 && a >= 1 && a + k - 1 <= n, "window out of range");
  require(l >= 1 && l + k - 1 <= n, "value range out of range");
  for (int i = a; i <= a + k - 1; ++i) {
    const int v = sigma.at(i);
    require(v >= l && v <= l + k - 1,
            "positions " + std::to_string(a) + ".." + std::to_string(a + k - 1) +
                " must hold exactly the values " + std::to_string(l) + ".." +
                std::to_string(l + k - 1));
  }
  Word collapsed;
  collapsed.reserve(static_cast<size_t>(n - k + 1));
  for (int i = 1; i < a; ++i) collapsed.push_back(sigma.at(i));
  collapsed.push_back(l);
  for (int i = a + 1; i <= n - k + 1; ++i) collapsed.push_back(sigma.at(i + k - 1));
  return reduce(collapsed);
}

Permutation extend(const Permutation& nu, const Permutation& tau, int l, int a) {
  const int m = nu.size();
  const int k = tau.size();
  require(k >= 1, "cluster pattern must be nonempty");
  require(a >= 1 && a <= m, "anchor position out of range");
  require(nu.at(a) == l, "nu must carry the value l at the anchor position");
  const int n = m + k - 1;
  const auto shift = [&](int v) { return v < l ? v : v + k - 1; };
  std::vector<int> w;
  w.reserve(static_cast<size_t>(n));
  for (int i = 1; i < a; ++i) w.push_back(shift(nu.at(i)));
  for (int j = 1; j <= k; ++j) w.push_back(l - 1 + tau.at(j));
  for (int i = a + 1; i <= m; ++i) w.push_back(shift(nu.at(i)));
  Permutation out(std::move(w));
  assert(([&] {
    int lo = out.at(a);
    int hi = out.at(a);
    Word window;
    for (int i = a; i <= a + k - 1; ++i) {
      lo = std::min(lo, out.at(i));
      hi = std::max(hi, out.at(i));
      window.push_back(out.at(i));
    }
    return lo == l && hi == l + k - 1 && reduce(window) == tau;
  }()));
  return out;
}

Permutation parse_permutation(const std::string& text) {
  require(!text.empty(), "empty permutation");
  std::vector<int> w;
  if (text.find(',') != std::string::npos) {
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      require(!tok.empty(), "empty entry in \"" + text + "\"");
      size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        throw InvalidInput("bad entry \"" + tok + "\" in \"" + text + "\"");
      }
      require(used == tok.size(), "bad entry \"" + tok + "\" in \"" + text + "\"");
      w.push_back(v);
    }
  } else {
    for (char c : text) {
      require(c >= '1' && c <= '9', "digit-string form allows only digits 1..9");
      w.push_back(c - '0');
    }
  }
  return Permutation(std::move(w));
}

std::string to_string(const Permutation& sigma) { return to_string(sigma.word()); }

std::string to_string(const Word& w) {
  std::string out;
  bool digits = true;
  for (int v : w) digits = digits && v >= 1 && v <= 9;
  if (digits && w.size() <= 9) {
    for (int v : w) out += static_cast<char>('0' + v);
  } else {
    for (size_t i = 0; i < w.size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(w[i]);
    }
  }
  return out;
}

}  // namespace permclust
