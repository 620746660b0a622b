#include "limitset/polynomial.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "limitset/errors.hpp"

namespace limitset {

Polynomial::Polynomial(std::vector<mpq_class> ascending) : c_(std::move(ascending)) {
  for (auto& x : c_) x.canonicalize();
  trim();
}

Polynomial Polynomial::monomial(const mpq_class& c, int degree) {
  std::vector<mpq_class> v(degree + 1, mpq_class(0));
  v[degree] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::linear_root(const mpq_class& r) { return Polynomial({-r, mpq_class(1)}); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const mpq_class& Polynomial::coeff(int k) const {
  static const mpq_class zero(0);
  if (k < 0 || k > degree()) return zero;
  return c_[k];
}

bool Polynomial::has_integer_coefficients() const {
  for (const auto& x : c_)
    if (x.get_den() != 1) return false;
  return true;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  std::vector<mpq_class> v = c_;
  mpq_class lc = c_.back();
  for (auto& x : v) x /= lc;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::derivative() const {
  if (degree() < 1) return Polynomial();
  std::vector<mpq_class> v(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) v[k - 1] = c_[k] * static_cast<long>(k);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::reflect() const {
  std::vector<mpq_class> v = c_;
  for (std::size_t k = 1; k < v.size(); k += 2) v[k] = -v[k];
  return Polynomial(std::move(v));
}

mpq_class Polynomial::operator()(const mpq_class& x) const {
  mpq_class acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

BigFloat Polynomial::operator()(const BigFloat& x) const {
  BigFloat acc(x.precision());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += BigFloat(*it, x.precision());
  }
  return acc;
}

BigComplex Polynomial::operator()(const BigComplex& x) const {
  const auto prec = std::max(x.re.precision(), x.im.precision());
  BigComplex acc(prec);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc.re += BigFloat(*it, prec);
  }
  return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), mpq_class(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), mpq_class(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<mpq_class> v(a.c_.size() + b.c_.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(v));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
  if (d.is_zero()) throw DomainError("polynomial division by zero");
  if (degree() < d.degree()) return {Polynomial(), *this};
  std::vector<mpq_class> rem = c_;
  std::vector<mpq_class> quo(c_.size() - d.c_.size() + 1, mpq_class(0));
  const mpq_class& lc = d.leading();
  for (int k = degree(); k >= d.degree(); --k) {
    mpq_class q = rem[k] / lc;
    if (q == 0) continue;
    quo[k - d.degree()] = q;
    for (int j = 0; j <= d.degree(); ++j) rem[k - d.degree() + j] -= q * d.c_[j];
  }
  rem.resize(d.c_.size() - 1);
  return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

std::string Polynomial::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const mpq_class& c = c_[k];
    if (c == 0) continue;
    mpq_class mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool unit = (mag == 1) && k > 0;
    if (!unit) os << mag.get_str();
    if (k > 0) os << var;
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Polynomial squarefree_part(const Polynomial& p) {
  if (p.degree() < 1) return p.monic();
  Polynomial g = gcd(p, p.derivative());
  return p.divmod(g).first.monic();
}

std::vector<Polynomial> squarefree_factorization(const Polynomial& p) {
  std::vector<Polynomial> out;
  if (p.degree() < 1) return out;
  Polynomial f = p.monic();
  Polynomial b = gcd(f, f.derivative());
  Polynomial c = f.divmod(b).first;
  Polynomial d = f.derivative().divmod(b).first - c.derivative();
  while (c.degree() > 0) {
    Polynomial a = gcd(c, d);
    c = c.divmod(a).first;
    d = d.divmod(a).first - c.derivative();
    out.push_back(a);
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

bool is_cyclotomic_product(const Polynomial& p) {
  if (p.degree() < 0) return false;
  Polynomial rest = p.monic();
  if (!rest.has_integer_coefficients()) return false;
  const int n = rest.degree();
  for (int m = 1; rest.degree() > 0 && m <= 2 * n * n + 2; ++m) {
    if (euler_phi(m) > rest.degree()) continue;
    const Polynomial& phi = cyclotomic(m);
    while (rest.degree() >= phi.degree() && rest.divisible_by(phi)) rest = rest.divmod(phi).first;
  }
  return rest.degree() == 0;
}

namespace {

int sign_at_infinity(const Polynomial& p, bool positive) {
  if (p.is_zero()) return 0;
  int s = sgn(p.leading());
  if (!positive && (p.degree() % 2 == 1)) s = -s;
  return s;
}

int sign_changes(const std::vector<int>& signs) {
  int changes = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int count_distinct_real_roots(const Polynomial& p) {
  if (p.degree() < 1) return 0;
  Polynomial q = squarefree_part(p);
  std::vector<Polynomial> seq{q, q.derivative()};
  while (!seq.back().is_zero()) {
    Polynomial r = seq[seq.size() - 2].divmod(seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(Polynomial() - r);
  }
  std::vector<int> lo, hi;
  for (const auto& s : seq) {
    lo.push_back(sign_at_infinity(s, false));
    hi.push_back(sign_at_infinity(s, true));
  }
  return sign_changes(lo) - sign_changes(hi);
}

int euler_phi(int m) {
  int result = m;
  int x = m;
  for (int p = 2; p * p <= x; ++p) {
    if (x % p == 0) {
      while (x % p == 0) x /= p;
      result -= result / p;
    }
  }
  if (x > 1) result -= result / x;
  return result;
}

const Polynomial& cyclotomic(int m) {
  static std::mutex mu;
  static std::map<int, Polynomial> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  // x^k - 1 = prod_{d | k} Phi_d, built bottom-up.
  for (int k = 1; k <= m; ++k) {
    if (m % k != 0 || cache.count(k)) continue;
    Polynomial p = Polynomial::monomial(mpq_class(1), k) - Polynomial({mpq_class(1)});
    for (int d = 1; d < k; ++d) {
      if (k % d != 0) continue;
      p = p.divmod(cache.at(d)).first;
    }
    cache.emplace(k, p);
  }
  return cache.at(m);
}

}  // namespace limitset
