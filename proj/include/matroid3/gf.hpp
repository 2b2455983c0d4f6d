#pragma once

#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace matroid3 {

// A finite field of order q = p^e, q <= 256.
struct FieldSpec {
  int p = 0;
  int e = 0;

  int q() const {
    int v = 1;
    for (int i = 0; i < e; ++i) v *= p;
    return v;
  }

  static FieldSpec of_order(int q) {
    if (q < 2 || q > 256) fail(errc::parse_error, "field order out of range");
    int p = 2;
    while (q % p != 0) {
      ++p;
      if (p * p > q) {
        p = q;
        break;
      }
    }
    FieldSpec spec{p, 0};
    int v = q;
    while (v % p == 0) {
      v /= p;
      ++spec.e;
    }
    if (v != 1) fail(errc::parse_error, "field order is not a prime power");
    return spec;
  }
};

// Arithmetic tables. Elements are 0..q-1; for extension fields the base-p
// digits of an element are the coefficients of its polynomial representative
// (least significant digit = constant term). Multiplication goes through
// log/antilog tables over a generator of the multiplicative group.
class Field {
 public:
  explicit Field(FieldSpec spec) : spec_(spec), q_(spec.q()) {
    if (q_ < 2 || q_ > 256) fail(errc::dimension_mismatch, "field order out of range");
    build();
  }

  const FieldSpec& spec() const { return spec_; }
  int q() const { return q_; }
  int characteristic() const { return spec_.p; }

  int add(int a, int b) const { return add_[static_cast<std::size_t>(a * q_ + b)]; }
  int neg(int a) const { return neg_[static_cast<std::size_t>(a)]; }
  int sub(int a, int b) const { return add(a, neg(b)); }

  int mul(int a, int b) const {
    if (a == 0 || b == 0) return 0;
    int s = log_[static_cast<std::size_t>(a)] + log_[static_cast<std::size_t>(b)];
    if (s >= q_ - 1) s -= q_ - 1;
    return antilog_[static_cast<std::size_t>(s)];
  }

  int inv(int a) const {
    if (a == 0) fail(errc::dimension_mismatch, "zero has no inverse");
    int s = q_ - 1 - log_[static_cast<std::size_t>(a)];
    if (s == q_ - 1) s = 0;
    return antilog_[static_cast<std::size_t>(s)];
  }

 private:
  using Poly = std::vector<int>;  // coefficients, index = degree

  int digits_to_int(const Poly& c) const {
    int v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * spec_.p + c[i];
    return v;
  }

  Poly int_to_digits(int v, int len) const {
    Poly c(static_cast<std::size_t>(len), 0);
    for (int i = 0; i < len; ++i) {
      c[static_cast<std::size_t>(i)] = v % spec_.p;
      v /= spec_.p;
    }
    return c;
  }

  // a*b mod m over GF(p), m monic.
  Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m) const {
    int p = spec_.p;
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    std::size_t dm = m.size() - 1;
    for (std::size_t d = r.size(); d-- > dm;) {
      int c = r[d];
      if (c == 0) continue;
      for (std::size_t i = 0; i <= dm; ++i)
        r[d - dm + i] = ((r[d - dm + i] - c * m[i]) % p + p * p) % p;
    }
    r.resize(dm);
    return r;
  }

  bool poly_divides(const Poly& d, Poly r) const {
    int p = spec_.p;
    // d monic; long division remainder test.
    std::size_t dd = d.size() - 1;
    for (std::size_t k = r.size(); k-- > dd;) {
      int c = r[k];
      if (c == 0) continue;
      for (std::size_t i = 0; i <= dd; ++i)
        r[k - dd + i] = ((r[k - dd + i] - c * d[i]) % p + p * p) % p;
    }
    for (std::size_t i = 0; i < dd; ++i)
      if (r[i] % p != 0) return false;
    return true;
  }

  void build() {
    int p = spec_.p, e = spec_.e;
    for (int d = 2; d < p; ++d)
      if (p % d == 0) fail(errc::dimension_mismatch, "field characteristic is not prime");

    Poly modulus;
    if (e > 1) {
      // Smallest monic irreducible of degree e: no monic divisor of degree
      // 1..e/2. Candidates are scanned by their digit encoding.
      int count = 1;
      for (int i = 0; i < e; ++i) count *= p;
      for (int c = 0; c < count && modulus.empty(); ++c) {
        Poly cand = int_to_digits(c, e);
        cand.push_back(1);
        bool irreducible = true;
        for (int dd = 1; irreducible && 2 * dd <= e; ++dd) {
          int dcount = 1;
          for (int i = 0; i < dd; ++i) dcount *= p;
          for (int dc = 0; dc < dcount; ++dc) {
            Poly div = int_to_digits(dc, dd);
            div.push_back(1);
            if (poly_divides(div, cand)) {
              irreducible = false;
              break;
            }
          }
        }
        if (irreducible) modulus = cand;
      }
    }

    auto field_mul = [&](int a, int b) -> int {
      if (e == 1) return (a * b) % p;
      return digits_to_int(poly_mulmod(int_to_digits(a, e), int_to_digits(b, e), modulus));
    };

    add_.resize(static_cast<std::size_t>(q_) * static_cast<std::size_t>(q_));
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b < q_; ++b) {
        int s = 0, pw = 1, x = a, y = b;
        for (int i = 0; i < e; ++i) {
          s += ((x + y) % p) * pw;
          pw *= p;
          x /= p;
          y /= p;
        }
        add_[static_cast<std::size_t>(a * q_ + b)] = static_cast<std::uint8_t>(s);
      }
    neg_.resize(static_cast<std::size_t>(q_));
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b < q_; ++b)
        if (add(a, b) == 0) neg_[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>(b);

    log_.assign(static_cast<std::size_t>(q_), 0);
    antilog_.assign(static_cast<std::size_t>(q_ - 1), 0);
    for (int g = 2; g < q_; ++g) {
      int x = 1, steps = 0;
      do {
        x = field_mul(x, g);
        ++steps;
      } while (x != 1);
      if (steps == q_ - 1) {
        x = 1;
        for (int k = 0; k < q_ - 1; ++k) {
          antilog_[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(x);
          log_[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(k);
          x = field_mul(x, g);
        }
        return;
      }
    }
    // q = 2: the loop above never runs; the unit group is trivial.
    if (q_ == 2) {
      antilog_[0] = 1;
      log_[1] = 0;
      return;
    }
    fail(errc::dimension_mismatch, "no multiplicative generator found");
  }

  FieldSpec spec_;
  int q_;
  std::vector<std::uint8_t> add_, neg_, log_, antilog_;
};

inline const Field& cached_field(int q) {
  static std::mutex mu;
  static std::vector<Field*> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(cache.size()) <= q) cache.resize(static_cast<std::size_t>(q) + 1, nullptr);
  if (cache[static_cast<std::size_t>(q)] == nullptr)
    cache[static_cast<std::size_t>(q)] = new Field(FieldSpec::of_order(q));
  return *cache[static_cast<std::size_t>(q)];
}

// All prime powers up to 13: empirically wide enough for the small-degree
// representability tallies, and cheap to widen via the battery flag.
inline std::vector<FieldSpec> default_battery() {
  std::vector<FieldSpec> out;
  for (int q : {2, 3, 4, 5, 7, 8, 9, 11, 13}) out.push_back(FieldSpec::of_order(q));
  return out;
}

// Comma-separated field orders, e.g. "2,3,4,5,7,8,9,11,13".
inline std::vector<FieldSpec> parse_battery(const std::string& text) {
  std::vector<FieldSpec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int q = 0;
    try {
      q = std::stoi(item, &used);
    } catch (const std::exception&) {
      fail(errc::parse_error, "bad field order '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) fail(errc::parse_error, "bad field order '" + item + "'");
    out.push_back(FieldSpec::of_order(q));
  }
  if (out.empty()) fail(errc::parse_error, "empty field battery");
  return out;
}

}  // namespace matroid3
