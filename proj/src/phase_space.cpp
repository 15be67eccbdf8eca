#include "hbarsign/phase_space.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hbarsign {

namespace {

void check_dimension(int d) {
  if (d < 1) throw std::invalid_argument("phase-space dimension must be >= 1");
}

void check_same_dimension(const PhasePolynomial& a, const PhasePolynomial& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("phase-space dimension mismatch: " +
                                std::to_string(a.dimension()) + " vs " +
                                std::to_string(b.dimension()));
  }
}

unsigned total_degree(const ExponentVec& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

}  // namespace

PhasePolynomial::PhasePolynomial(int dimension) : dimension_(dimension) {
  check_dimension(dimension);
}

PhasePolynomial PhasePolynomial::constant(int dimension, const Rational& c) {
  PhasePolynomial poly(dimension);
  poly.insert(ExponentVec(2 * dimension, 0), c);
  return poly;
}

PhasePolynomial PhasePolynomial::coordinate(int dimension, int i) {
  check_dimension(dimension);
  if (i < 0 || i >= dimension) throw std::invalid_argument("coordinate index out of range");
  PhasePolynomial poly(dimension);
  ExponentVec e(2 * dimension, 0);
  e[i] = 1;
  poly.insert(e, 1);
  return poly;
}

PhasePolynomial PhasePolynomial::momentum(int dimension, int i) {
  check_dimension(dimension);
  if (i < 0 || i >= dimension) throw std::invalid_argument("momentum index out of range");
  PhasePolynomial poly(dimension);
  ExponentVec e(2 * dimension, 0);
  e[dimension + i] = 1;
  poly.insert(e, 1);
  return poly;
}

PhasePolynomial PhasePolynomial::from_terms(int dimension, const std::vector<Monomial>& terms) {
  PhasePolynomial poly(dimension);
  for (const auto& m : terms) {
    if (m.exponents.size() != static_cast<size_t>(2 * dimension)) {
      throw std::invalid_argument("monomial exponent vector must have length 2d");
    }
    poly.insert(m.exponents, m.coefficient);
  }
  return poly;
}

int PhasePolynomial::degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) deg = std::max(deg, static_cast<int>(total_degree(e)));
  return deg;
}

void PhasePolynomial::insert(const ExponentVec& e, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

PhasePolynomial& PhasePolynomial::operator+=(const PhasePolynomial& rhs) {
  check_same_dimension(*this, rhs);
  for (const auto& [e, c] : rhs.terms_) insert(e, c);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator-=(const PhasePolynomial& rhs) {
  check_same_dimension(*this, rhs);
  for (const auto& [e, c] : rhs.terms_) insert(e, -c);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coeff] : terms_) coeff *= c;
  return *this;
}

PhasePolynomial operator+(PhasePolynomial lhs, const PhasePolynomial& rhs) {
  lhs += rhs;
  return lhs;
}

PhasePolynomial operator-(PhasePolynomial lhs, const PhasePolynomial& rhs) {
  lhs -= rhs;
  return lhs;
}

PhasePolynomial operator*(const PhasePolynomial& lhs, const PhasePolynomial& rhs) {
  check_same_dimension(lhs, rhs);
  PhasePolynomial out(lhs.dimension());
  ExponentVec e;
  for (const auto& [ea, ca] : lhs.terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      e.assign(ea.size(), 0);
      for (size_t k = 0; k < ea.size(); ++k) e[k] = ea[k] + eb[k];
      out.insert(e, ca * cb);
    }
  }
  return out;
}

PhasePolynomial PhasePolynomial::derivative_q(int i) const {
  if (i < 0 || i >= dimension_) throw std::invalid_argument("coordinate index out of range");
  PhasePolynomial out(dimension_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    ExponentVec de = e;
    --de[i];
    out.insert(de, c * e[i]);
  }
  return out;
}

PhasePolynomial PhasePolynomial::derivative_p(int i) const {
  if (i < 0 || i >= dimension_) throw std::invalid_argument("momentum index out of range");
  PhasePolynomial out(dimension_);
  for (const auto& [e, c] : terms_) {
    const unsigned exp = e[dimension_ + i];
    if (exp == 0) continue;
    ExponentVec de = e;
    --de[dimension_ + i];
    out.insert(de, c * exp);
  }
  return out;
}

Rational PhasePolynomial::evaluate(const std::vector<Rational>& point) const {
  if (point.size() != static_cast<size_t>(2 * dimension_)) {
    throw std::invalid_argument("evaluation point must have length 2d");
  }
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (size_t k = 0; k < e.size(); ++k) {
      for (unsigned j = 0; j < e[k]; ++j) term *= point[k];
    }
    sum += term;
  }
  return sum;
}

bool PhasePolynomial::operator==(const PhasePolynomial& rhs) const {
  return dimension_ == rhs.dimension_ && terms_ == rhs.terms_;
}

std::string PhasePolynomial::to_string() const {
  if (terms_.empty()) return "0";

  std::vector<std::pair<ExponentVec, Rational>> sorted(terms_.begin(), terms_.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    const unsigned da = total_degree(a.first), db = total_degree(b.first);
    if (da != db) return da < db;
    return a.first < b.first;
  });

  auto var_name = [this](size_t k) {
    const bool is_q = k < static_cast<size_t>(dimension_);
    std::string name = is_q ? "q" : "p";
    if (dimension_ > 1) name += std::to_string((is_q ? k : k - dimension_) + 1);
    return name;
  };

  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : sorted) {
    const Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    std::vector<std::string> factors;
    if (mag != 1 || total_degree(e) == 0) factors.push_back(mag.str());
    for (size_t k = 0; k < e.size(); ++k) {
      if (e[k] > 0) factors.push_back(var_name(k) + "^" + std::to_string(e[k]));
    }
    for (size_t k = 0; k < factors.size(); ++k) {
      if (k > 0) os << "*";
      os << factors[k];
    }
  }
  return os.str();
}

PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g) {
  check_same_dimension(f, g);
  PhasePolynomial out(f.dimension());
  for (int i = 0; i < f.dimension(); ++i) {
    out += f.derivative_q(i) * g.derivative_p(i);
    out -= g.derivative_q(i) * f.derivative_p(i);
  }
  return out;
}

PhasePolynomial jacobi_residual(const PhasePolynomial& f, const PhasePolynomial& g,
                                const PhasePolynomial& h) {
  check_same_dimension(f, g);
  check_same_dimension(f, h);
  return poisson_bracket(f, poisson_bracket(g, h)) +
         poisson_bracket(h, poisson_bracket(f, g)) +
         poisson_bracket(g, poisson_bracket(h, f));
}

PhasePolynomial bracket_bilinearity_residual(const Rational& c1, const PhasePolynomial& f1,
                                             const Rational& c2, const PhasePolynomial& f2,
                                             const PhasePolynomial& g) {
  check_same_dimension(f1, f2);
  check_same_dimension(f1, g);
  PhasePolynomial combo = c1 * f1 + c2 * f2;
  return poisson_bracket(combo, g) - c1 * poisson_bracket(f1, g) - c2 * poisson_bracket(f2, g);
}

}  // namespace hbarsign
