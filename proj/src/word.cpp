#include "hyperwalk/word.hpp"

#include <algorithm>
#include <cstdlib>

#include "hyperwalk/errors.hpp"

namespace hyperwalk {

Letter Letter::make(int generator, int sign) {
  if (generator < 0 || generator >= kMaxGenerators || (sign != 1 && sign != -1)) {
    throw InvalidArgument("letter out of range: generator " + std::to_string(generator) +
                          ", sign " + std::to_string(sign));
  }
  return Letter(static_cast<std::uint8_t>(2 * generator + (sign < 0 ? 1 : 0)));
}

Letter Letter::from_char(char c) {
  if (c >= 'a' && c <= 'z') return make(c - 'a', 1);
  if (c >= 'A' && c <= 'Z') return make(c - 'A', -1);
  throw InvalidArgument(std::string("not a letter: '") + c + "'");
}

char Letter::to_char() const {
  return static_cast<char>((sign() > 0 ? 'a' : 'A') + generator());
}

ReducedWord::ReducedWord(std::span<const Letter> letters) {
  letters_.reserve(letters.size());
  for (Letter x : letters) append(x);
}

ReducedWord ReducedWord::parse(std::string_view text, int k) {
  ReducedWord w;
  if (text == "1") return w;
  if (text.empty()) throw InvalidArgument("empty word literal (use 1 for the identity)");
  for (char c : text) {
    Letter x = Letter::from_char(c);
    if (x.generator() >= k) {
      throw InvalidArgument(std::string("letter '") + c + "' exceeds rank " + std::to_string(k));
    }
    w.append(x);
  }
  return w;
}

std::string ReducedWord::str() const {
  if (letters_.empty()) return "1";
  std::string out;
  out.reserve(letters_.size());
  for (Letter x : letters_) out.push_back(x.to_char());
  return out;
}

void ReducedWord::append(Letter x) {
  if (!letters_.empty() && letters_.back() == x.inverse()) {
    letters_.pop_back();
  } else {
    letters_.push_back(x);
  }
}

void ReducedWord::append(const ReducedWord& w) {
  for (Letter x : w.letters_) append(x);
}

ReducedWord ReducedWord::inverse() const {
  ReducedWord r;
  r.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) r.letters_.push_back(it->inverse());
  return r;
}

ReducedWord ReducedWord::prefix(std::size_t length) const {
  ReducedWord r;
  r.letters_.assign(letters_.begin(), letters_.begin() + std::min(length, letters_.size()));
  return r;
}

int ReducedWord::rank() const {
  int r = 0;
  for (Letter x : letters_) r = std::max(r, x.generator() + 1);
  return r;
}

ReducedWord multiply_reduce(const ReducedWord& u, const ReducedWord& v) {
  ReducedWord r = u;
  r.append(v);
  return r;
}

ReducedWord power(const ReducedWord& g, int m) {
  const ReducedWord base = m < 0 ? g.inverse() : g;
  ReducedWord r;
  for (int i = 0; i < std::abs(m); ++i) r.append(base);
  return r;
}

std::size_t tree_distance(const ReducedWord& u, const ReducedWord& v) {
  const std::size_t shared = common_prefix_length(u.letters(), v.letters());
  return (u.size() - shared) + (v.size() - shared);
}

std::size_t common_prefix_length(std::span<const Letter> u, std::span<const Letter> v) {
  const std::size_t n = std::min(u.size(), v.size());
  std::size_t i = 0;
  while (i < n && u[i] == v[i]) ++i;
  return i;
}

std::size_t least_rotation_offset(std::span<const Letter> s) {
  const std::size_t n = s.size();
  if (n < 2) return 0;
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const Letter a = s[(i + k) % n];
    const Letter b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

CyclicWord::CyclicWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
  const std::size_t n = letters_.size();
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    if (letters_[i].inverse() == letters_[(i + 1) % n]) {
      throw InvalidArgument("CyclicWord requires a cyclically reduced word, got " + str());
    }
  }
}

CyclicWord CyclicWord::canonical() const {
  const std::size_t off = least_rotation_offset(letters_);
  std::vector<Letter> rotated(letters_.begin() + off, letters_.end());
  rotated.insert(rotated.end(), letters_.begin(), letters_.begin() + off);
  CyclicWord c;
  c.letters_ = std::move(rotated);
  return c;
}

CyclicWord CyclicWord::primitive_root() const {
  const std::size_t n = letters_.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = 0; i + p < n && periodic; ++i) periodic = letters_[i] == letters_[i + p];
    if (periodic) {
      CyclicWord c;
      c.letters_.assign(letters_.begin(), letters_.begin() + p);
      return c;
    }
  }
  return *this;
}

CyclicReduction cyclic_reduce(const ReducedWord& w) {
  const auto s = w.letters();
  std::size_t m = 0;
  while (2 * m + 1 < s.size() && s[m] == s[s.size() - 1 - m].inverse()) ++m;
  CyclicReduction r;
  r.conjugator = w.prefix(m);
  r.core = CyclicWord(std::vector<Letter>(s.begin() + m, s.end() - m));
  return r;
}

std::size_t translation_length_tree(const ReducedWord& g) { return cyclic_reduce(g).core.size(); }

ReducedWord TreeAxis::vertex(long i) const {
  const long l = static_cast<long>(period.size());
  long q = i / l;
  long r = i % l;
  if (r < 0) {
    r += l;
    --q;
  }
  ReducedWord v = conjugator;
  v.append(power(period, static_cast<int>(q)));
  v.append(period.prefix(static_cast<std::size_t>(r)));
  return v;
}

std::size_t TreeAxis::distance_to(const ReducedWord& x) const {
  // Translate so the axis runs through e; the line is then the union of the
  // rays period^infinity and period^{-infinity}, which leave e by different letters.
  const ReducedWord y = multiply_reduce(conjugator.inverse(), x);
  const ReducedWord back = period.inverse();
  const std::size_t l = period.size();
  auto periodic_lcp = [&](const ReducedWord& p) {
    std::size_t i = 0;
    while (i < y.size() && y[i] == p[i % l]) ++i;
    return i;
  };
  return y.size() - std::max(periodic_lcp(period), periodic_lcp(back));
}

TreeAxis axis_tree(const ReducedWord& g) {
  CyclicReduction r = cyclic_reduce(g);
  if (r.core.empty()) throw NotLoxodromic("identity has no axis");
  return TreeAxis{std::move(r.conjugator), r.core.as_word()};
}

std::size_t distance_to_ray(const ReducedWord& u, const TreeBoundaryPrefix& xi) {
  if (xi.depth() < u.size()) {
    throw PrefixTooShallow("prefix depth " + std::to_string(xi.depth()) + " < |u| = " +
                           std::to_string(u.size()));
  }
  return u.size() - common_prefix_length(u.letters(), xi.letters.letters());
}

}  // namespace hyperwalk

std::size_t std::hash<hyperwalk::ReducedWord>::operator()(
    const hyperwalk::ReducedWord& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto x : w.letters()) {
    h ^= x.code();
    h *= 1099511628211ull;
  }
  return h ^ w.size();
}
