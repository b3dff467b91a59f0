#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hyperwalk {

inline constexpr int kMaxGenerators = 26;

// A generator or its inverse. Encoded as 2*generator + (inverse ? 1 : 0), so
// the natural order is generator index first, then +1 before -1.
class Letter {
 public:
  constexpr Letter() = default;
  static constexpr Letter from_code(std::uint8_t code) { return Letter(code); }
  static Letter make(int generator, int sign);
  static Letter from_char(char c);

  constexpr std::uint8_t code() const { return code_; }
  constexpr int generator() const { return code_ >> 1; }
  constexpr int sign() const { return (code_ & 1) ? -1 : 1; }
  constexpr Letter inverse() const { return Letter(static_cast<std::uint8_t>(code_ ^ 1)); }
  char to_char() const;

  constexpr auto operator<=>(const Letter&) const = default;

 private:
  constexpr explicit Letter(std::uint8_t code) : code_(code) {}
  std::uint8_t code_ = 0;
};

// Element of the free group F_k in reduced form. Appending a letter cancels
// against the last one when they are inverse, so incremental products cost
// amortized O(1) per letter.
class ReducedWord {
 public:
  ReducedWord() = default;
  // Reduces the given sequence.
  explicit ReducedWord(std::span<const Letter> letters);

  // Text format: 'a'..'z' generators, 'A'..'Z' inverses, "1" the identity.
  // Letters beyond the first k generators are rejected.
  static ReducedWord parse(std::string_view text, int k = kMaxGenerators);
  std::string str() const;

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  std::span<const Letter> letters() const { return letters_; }

  void append(Letter x);
  void append(const ReducedWord& w);
  void truncate(std::size_t length) { letters_.resize(length); }

  ReducedWord inverse() const;
  ReducedWord prefix(std::size_t length) const;
  // Highest generator index used plus one; 0 for the identity.
  int rank() const;

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  friend auto operator<=>(const ReducedWord& a, const ReducedWord& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  std::vector<Letter> letters_;
};

ReducedWord multiply_reduce(const ReducedWord& u, const ReducedWord& v);
inline ReducedWord operator*(const ReducedWord& u, const ReducedWord& v) {
  return multiply_reduce(u, v);
}
ReducedWord power(const ReducedWord& g, int m);

// d(u, v) = |u^{-1} v| in the Cayley tree.
std::size_t tree_distance(const ReducedWord& u, const ReducedWord& v);

std::size_t common_prefix_length(std::span<const Letter> u, std::span<const Letter> v);

// Index of the lexicographically least rotation (Booth-style two pointer scan).
std::size_t least_rotation_offset(std::span<const Letter> letters);

// Conjugacy class of a cyclically reduced word. Stores the letters in the
// rotation it was built from; equality and hashing go through canonical().
class CyclicWord {
 public:
  CyclicWord() = default;
  explicit CyclicWord(std::vector<Letter> letters);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  std::span<const Letter> letters() const { return letters_; }
  ReducedWord as_word() const { return ReducedWord(letters_); }

  CyclicWord canonical() const;
  // Shortest u with this word equal to a rotation of u^m.
  CyclicWord primitive_root() const;
  std::string str() const { return as_word().str(); }

  friend bool operator==(const CyclicWord& a, const CyclicWord& b) {
    return a.canonical().letters_ == b.canonical().letters_;
  }

 private:
  std::vector<Letter> letters_;
};

struct CyclicReduction {
  CyclicWord core;
  ReducedWord conjugator;  // input = conjugator * core * conjugator^{-1}
};

CyclicReduction cyclic_reduce(const ReducedWord& w);

std::size_t translation_length_tree(const ReducedWord& g);

// Axis of a loxodromic element: the bi-infinite line through the vertices
// conjugator * period^i * (prefix of period).
struct TreeAxis {
  ReducedWord conjugator;
  ReducedWord period;  // cyclically reduced, nonempty

  // Vertex at signed position i along the axis; vertex(0) = conjugator.
  ReducedWord vertex(long i) const;
  std::size_t distance_to(const ReducedWord& x) const;
};

TreeAxis axis_tree(const ReducedWord& g);

// Finite prefix of a boundary point; stands for the cylinder [letters].
struct TreeBoundaryPrefix {
  ReducedWord letters;
  std::size_t depth() const { return letters.size(); }
};

std::size_t distance_to_ray(const ReducedWord& u, const TreeBoundaryPrefix& xi);

}  // namespace hyperwalk

template <>
struct std::hash<hyperwalk::ReducedWord> {
  std::size_t operator()(const hyperwalk::ReducedWord& w) const noexcept;
};
