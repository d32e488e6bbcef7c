#include "ncd/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ncd/linalg.hpp"

namespace ncd {

namespace {

std::uint32_t total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

double ipow(double x, std::uint32_t k) {
  double r = 1.0;
  for (std::uint32_t i = 0; i < k; ++i) r *= x;
  return r;
}

Rational ipow(const Rational& x, std::uint32_t k) {
  Rational r = 1;
  for (std::uint32_t i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

bool GradedLex::operator()(const Exponent& a, const Exponent& b) const {
  auto da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return a < b;
}

Polynomial::Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars == 0) throw InputError("a polynomial needs at least one variable");
}

Polynomial Polynomial::constant(std::size_t num_vars, const Rational& c) {
  Polynomial p(num_vars);
  p.add_term(Exponent(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw InputError("variable index out of range");
  Polynomial p(num_vars);
  Exponent e(num_vars, 0);
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

Polynomial Polynomial::affine(const RationalVector& coeffs, const Rational& c0) {
  Polynomial p(coeffs.size());
  p.add_term(Exponent(coeffs.size(), 0), c0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    Exponent e(coeffs.size(), 0);
    e[i] = 1;
    p.add_term(e, coeffs[i]);
  }
  return p;
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(total_degree(terms_.rbegin()->first));
}

Rational Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<std::size_t> Polynomial::support() const {
  std::vector<bool> used(num_vars_, false);
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < num_vars_; ++i) used[i] = used[i] || e[i] > 0;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < num_vars_; ++i) {
    if (used[i]) out.push_back(i);
  }
  return out;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != num_vars_) throw InputError("exponent length does not match variable count");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational Polynomial::eval(std::span<const Rational> x) const {
  if (x.size() != num_vars_) throw InputError("evaluation point has the wrong dimension");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i]) t *= ipow(x[i], e[i]);
    }
    sum += t;
  }
  return sum;
}

double Polynomial::eval(std::span<const double> x) const {
  if (x.size() != num_vars_) throw InputError("evaluation point has the wrong dimension");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i]) t *= ipow(x[i], e[i]);
    }
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::partial(std::size_t i) const {
  if (i >= num_vars_) throw InputError("partial derivative index out of range");
  Polynomial d(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent f = e;
    f[i] -= 1;
    d.add_term(f, c * e[i]);
  }
  return d;
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> g;
  g.reserve(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) g.push_back(partial(i));
  return g;
}

Polynomial Polynomial::affine_subst(const RationalMatrix& A, const RationalVector& b) const {
  if (A.size() != num_vars_ || b.size() != num_vars_) throw InputError("affine map has the wrong dimension");
  for (const auto& row : A) {
    if (row.size() != num_vars_) throw InputError("affine map matrix must be square");
  }
  if (exact_rank(A) != num_vars_) throw InputError("affine map is singular");
  std::vector<Polynomial> images;
  images.reserve(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) images.push_back(affine(A[i], b[i]));
  return compose(images);
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& images) const {
  if (images.size() != num_vars_) throw InputError("compose needs one image per variable");
  const std::size_t m = images.front().num_vars();
  for (const auto& q : images) {
    if (q.num_vars() != m) throw InputError("compose images must share a variable count");
  }
  // powers[i][k] = images[i]^k, filled lazily.
  std::vector<std::vector<Polynomial>> powers(num_vars_);
  auto power = [&](std::size_t i, std::uint32_t k) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(constant(m, 1));
    while (cache.size() <= k) cache.push_back(cache.back() * images[i]);
    return cache[k];
  };
  Polynomial out(m);
  for (const auto& [e, c] : terms_) {
    Polynomial t = constant(m, c);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i]) t = t * power(i, e[i]);
    }
    out += t;
  }
  return out;
}

Polynomial Polynomial::remap(std::size_t new_num_vars, std::span<const std::size_t> var_map) const {
  if (var_map.size() != num_vars_) throw InputError("remap needs one target per variable");
  for (std::size_t i = 0; i < var_map.size(); ++i) {
    if (var_map[i] >= new_num_vars) throw InputError("remap target out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (var_map[i] == var_map[j]) throw InputError("remap targets must be distinct");
    }
  }
  Polynomial out(new_num_vars);
  for (const auto& [e, c] : terms_) {
    Exponent f(new_num_vars, 0);
    for (std::size_t i = 0; i < num_vars_; ++i) f[var_map[i]] = e[i];
    out.add_term(f, c);
  }
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(*this);
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

void Polynomial::check_same_space(const Polynomial& q) const {
  if (q.num_vars_ != num_vars_) throw InputError("polynomials live in different variable spaces");
}

Polynomial& Polynomial::operator+=(const Polynomial& q) {
  check_same_space(q);
  for (const auto& [e, c] : q.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q) {
  check_same_space(q);
  for (const auto& [e, c] : q.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same_space(b);
  Polynomial out(a.num_vars_);
  Exponent e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& q) { return *this = *this * q; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial out = constant(num_vars_, 1);
  for (unsigned i = 0; i < k; ++i) out = out * *this;
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool is_const = total_degree(e) == 0;
    bool wrote = false;
    if (is_const || mag != 1) {
      os << ncd::to_string(mag);
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (wrote) os << "*";
      os << "x" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
      wrote = true;
    }
  }
  return os.str();
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t n) : s_(text), n_(n) {}

  Polynomial run() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }

  Polynomial expr() {
    Polynomial p = term();
    while (true) {
      if (accept('+')) {
        p += term();
      } else if (accept('-')) {
        p -= term();
      } else {
        return p;
      }
    }
  }
  Polynomial term() {
    Polynomial p = factor();
    while (accept('*')) p = p * factor();
    return p;
  }
  Polynomial factor() {
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    Polynomial base = primary();
    if (accept('^')) {
      std::string d = digits();
      if (d.size() > 4) fail("exponent too large");
      return base.pow(static_cast<unsigned>(std::stoul(d)));
    }
    return base;
  }
  Polynomial primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (c == 'x') {
      ++pos_;
      std::string d = digits();
      unsigned long idx = std::stoul(d);
      if (idx < 1 || idx > n_) fail("variable x" + d + " outside x1..x" + std::to_string(n_));
      return Polynomial::variable(n_, idx - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num(digits(), 10);
      mpz_class den = 1;
      if (accept('/')) {
        den = mpz_class(digits(), 10);
        if (den == 0) fail("zero denominator");
      }
      Rational r(num, den);
      r.canonicalize();
      return Polynomial::constant(n_, r);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, std::size_t num_vars) {
  return Parser(text, num_vars).run();
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) : num_vars_(p.num_vars()) {
  for (const auto& [e, c] : p.terms()) {
    Term t{c.get_d(), static_cast<std::uint32_t>(factors_.size()), 0};
    int deg = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      deg += static_cast<int>(e[i]);
      if (e[i]) {
        factors_.push_back({static_cast<std::uint32_t>(i), e[i]});
        ++t.count;
      }
    }
    terms_.push_back(t);
    degree_ = std::max(degree_, deg);
  }
}

std::vector<double> CompiledPolynomial::line_coefficients(std::span<const double> x,
                                                          std::span<const double> dir) const {
  std::vector<double> out(static_cast<std::size_t>(std::max(degree_, 0)) + 1, 0.0);
  std::vector<double> acc, next;
  for (const auto& t : terms_) {
    acc.assign(1, t.coef);
    for (std::uint32_t k = 0; k < t.count; ++k) {
      const auto& f = factors_[t.first + k];
      for (std::uint32_t p = 0; p < f.power; ++p) {
        // multiply by (x_v + s d_v)
        next.assign(acc.size() + 1, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i) {
          next[i] += acc[i] * x[f.var];
          next[i + 1] += acc[i] * dir[f.var];
        }
        acc.swap(next);
      }
    }
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] += acc[i];
  }
  return out;
}

double CompiledPolynomial::operator()(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef;
    for (std::uint32_t k = 0; k < t.count; ++k) {
      const auto& f = factors_[t.first + k];
      v *= f.power == 1 ? x[f.var] : ipow(x[f.var], f.power);
    }
    sum += v;
  }
  return sum;
}

void CompiledPolynomial::gradient(std::span<const double> x, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  for (const auto& t : terms_) {
    for (std::uint32_t k = 0; k < t.count; ++k) {
      const auto& fk = factors_[t.first + k];
      double v = t.coef * fk.power * ipow(x[fk.var], fk.power - 1);
      for (std::uint32_t q = 0; q < t.count; ++q) {
        if (q == k) continue;
        const auto& fq = factors_[t.first + q];
        v *= ipow(x[fq.var], fq.power);
      }
      grad[fk.var] += v;
    }
  }
}

}  // namespace ncd
