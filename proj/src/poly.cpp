#include "dloci/poly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace dloci {

namespace {

unsigned exponent_sum(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

void check_nvars(std::size_t nvars) {
  if (nvars > kMaxVars) throw std::invalid_argument("HomogPoly: at most " + std::to_string(kMaxVars) + " variables");
}

void check_degree(unsigned degree) {
  if (degree > kMaxDegree)
    throw std::invalid_argument("HomogPoly: degree " + std::to_string(degree) + " exceeds cap " +
                                std::to_string(kMaxDegree));
}

std::string format_coefficient(const GR& c) {
  if (!c.is_real() && sgn(c.re()) != 0) return "(" + c.to_string() + ")";
  return c.to_string();
}

std::string format_terms(const HomogPoly::TermMap& terms, std::size_t nvars, const std::vector<std::string>& names,
                         std::optional<std::size_t> skip_var) {
  if (terms.empty()) return "0";
  const auto labels = names.empty() ? default_var_names(nvars) : names;
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    std::string mono;
    for (std::size_t v = 0; v < nvars; ++v) {
      if (e[v] == 0 || (skip_var && *skip_var == v)) continue;
      if (!mono.empty()) mono += "*";
      mono += labels.at(v);
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    std::string term;
    if (mono.empty()) {
      term = format_coefficient(c);
    } else if (c == GR(1)) {
      term = mono;
    } else if (c == GR(-1)) {
      term = "-" + mono;
    } else {
      term = format_coefficient(c) + "*" + mono;
    }
    if (first) {
      out = term;
      first = false;
    } else if (term.front() == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out;
}

HomogPoly monomial(std::size_t nvars, const Exponent& e, const GR& c) {
  HomogPoly p(nvars, exponent_sum(e));
  p.add_term(e, c);
  return p;
}

}  // namespace

HomogPoly::HomogPoly(std::size_t nvars, unsigned degree) : nvars_(nvars), degree_(degree) {
  check_nvars(nvars);
  check_degree(degree);
}

HomogPoly HomogPoly::constant(std::size_t nvars, const GR& c) {
  HomogPoly p(nvars, 0);
  p.add_term(Exponent{}, c);
  return p;
}

HomogPoly HomogPoly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw std::out_of_range("HomogPoly::variable: index out of range");
  HomogPoly p(nvars, 1);
  Exponent e{};
  e[index] = 1;
  p.add_term(e, GR(1));
  return p;
}

HomogPoly HomogPoly::linear(const ExactVector& coeffs) {
  HomogPoly p(coeffs.size(), 1);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    Exponent e{};
    e[i] = 1;
    p.add_term(e, coeffs[i]);
  }
  return p;
}

void HomogPoly::add_term(const Exponent& e, const GR& c) {
  if (exponent_sum(e) != degree_) {
    if (!terms_.empty()) throw std::invalid_argument("HomogPoly::add_term: exponent sum differs from degree");
    // A zero polynomial may still take on a degree.
    degree_ = exponent_sum(e);
    check_degree(degree_);
  }
  for (std::size_t v = nvars_; v < kMaxVars; ++v) {
    if (e[v] != 0) throw std::invalid_argument("HomogPoly::add_term: exponent uses a variable beyond nvars");
  }
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

GR HomogPoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? GR(0) : it->second;
}

HomogPoly HomogPoly::operator-() const {
  HomogPoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

HomogPoly& HomogPoly::operator+=(const HomogPoly& o) {
  if (nvars_ != o.nvars_) throw std::invalid_argument("HomogPoly +: variable count mismatch");
  if (o.is_zero()) return *this;
  if (is_zero()) {
    degree_ = o.degree_;
  } else if (degree_ != o.degree_) {
    throw std::invalid_argument("HomogPoly +: degree mismatch");
  }
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

HomogPoly& HomogPoly::operator-=(const HomogPoly& o) { return *this += -o; }

HomogPoly& HomogPoly::operator*=(const GR& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

HomogPoly operator*(const HomogPoly& a, const HomogPoly& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("HomogPoly *: variable count mismatch");
  if (a.is_zero() || b.is_zero()) {
    HomogPoly z(a.nvars_, 0);
    return z;
  }
  HomogPoly out(a.nvars_, a.degree_ + b.degree_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e{};
      for (std::size_t v = 0; v < kMaxVars; ++v) e[v] = static_cast<std::uint8_t>(ea[v] + eb[v]);
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

bool operator==(const HomogPoly& a, const HomogPoly& b) {
  if (a.nvars_ != b.nvars_) return false;
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return a.degree_ == b.degree_ && a.terms_ == b.terms_;
}

GR HomogPoly::evaluate(const ExactVector& x) const {
  if (x.size() != nvars_) throw std::invalid_argument("HomogPoly::evaluate: point length != nvars");
  GR acc(0);
  for (const auto& [e, c] : terms_) {
    GR t = c;
    for (std::size_t v = 0; v < nvars_; ++v)
      for (unsigned k = 0; k < e[v]; ++k) t *= x[v];
    acc += t;
  }
  return acc;
}

Complex HomogPoly::evaluate(const FloatVector& x) const {
  if (static_cast<std::size_t>(x.size()) != nvars_)
    throw std::invalid_argument("HomogPoly::evaluate: point length != nvars");
  Complex acc = 0.0;
  for (const auto& [e, c] : terms_) {
    Complex t = c.to_complex();
    for (std::size_t v = 0; v < nvars_; ++v)
      for (unsigned k = 0; k < e[v]; ++k) t *= x(static_cast<Eigen::Index>(v));
    acc += t;
  }
  return acc;
}

HomogPoly HomogPoly::substitute(const std::vector<HomogPoly>& images) const {
  if (images.size() != nvars_) throw std::invalid_argument("HomogPoly::substitute: need one image per variable");
  if (images.empty()) return *this;
  const std::size_t target_vars = images.front().nvars();
  const unsigned image_degree = images.front().degree();
  for (const auto& im : images) {
    if (im.nvars() != target_vars || (!im.is_zero() && im.degree() != image_degree))
      throw std::invalid_argument("HomogPoly::substitute: images must share nvars and degree");
  }
  std::vector<std::vector<HomogPoly>> powers(nvars_);
  for (std::size_t v = 0; v < nvars_; ++v) powers[v].push_back(HomogPoly::constant(target_vars, GR(1)));
  HomogPoly out(target_vars, 0);
  for (const auto& [e, c] : terms_) {
    HomogPoly t = HomogPoly::constant(target_vars, c);
    for (std::size_t v = 0; v < nvars_; ++v) {
      while (powers[v].size() <= e[v]) powers[v].push_back(powers[v].back() * images[v]);
      if (e[v] > 0) t = t * powers[v][e[v]];
    }
    out += t;
  }
  return out;
}

std::string HomogPoly::to_string(const std::vector<std::string>& names) const {
  return format_terms(terms_, nvars_, names, std::nullopt);
}

std::vector<std::string> default_var_names(std::size_t nvars) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < nvars; ++i) out.push_back("r" + std::to_string(i + 1));
  return out;
}

HomogPoly parse_poly(std::string_view text, const std::vector<std::string>& names,
                     std::optional<std::size_t> homogenize_var) {
  const std::size_t nvars = names.size();
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("parse_poly: empty input");

  // Split into signed terms at top-level '+' / '-'.
  std::vector<std::pair<int, std::string>> pieces;
  int depth = 0;
  int sign = 1;
  std::string cur;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const char ch = s[k];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    const bool after_caret = k > 0 && s[k - 1] == '^';
    if (depth == 0 && (ch == '+' || ch == '-') && !after_caret) {
      if (!cur.empty()) pieces.emplace_back(sign, cur);
      cur.clear();
      sign = ch == '-' ? -1 : 1;
      // Consecutive signs fold together.
      while (k + 1 < s.size() && (s[k + 1] == '+' || s[k + 1] == '-')) {
        if (s[++k] == '-') sign = -sign;
      }
      continue;
    }
    cur.push_back(ch);
  }
  if (!cur.empty()) pieces.emplace_back(sign, cur);

  std::vector<std::pair<Exponent, GR>> terms;
  unsigned max_degree = 0;
  for (const auto& [term_sign, body] : pieces) {
    GR coeff(term_sign);
    Exponent e{};
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t end = pos;
      int d = 0;
      while (end < body.size() && !(body[end] == '*' && d == 0)) {
        if (body[end] == '(') ++d;
        if (body[end] == ')') --d;
        ++end;
      }
      const std::string factor = body.substr(pos, end - pos);
      if (factor.empty()) throw std::invalid_argument("parse_poly: empty factor in '" + body + "'");
      if (factor.front() == '(') {
        if (factor.back() != ')') throw std::invalid_argument("parse_poly: unbalanced '" + factor + "'");
        coeff *= GR::parse(factor.substr(1, factor.size() - 2));
      } else if (std::isdigit(static_cast<unsigned char>(factor.front())) || factor == "i") {
        coeff *= GR::parse(factor);
      } else {
        std::size_t best = nvars;
        std::size_t best_len = 0;
        for (std::size_t v = 0; v < nvars; ++v) {
          const auto& name = names[v];
          if (factor.compare(0, name.size(), name) == 0 && name.size() > best_len &&
              (factor.size() == name.size() || factor[name.size()] == '^')) {
            best = v;
            best_len = name.size();
          }
        }
        if (best == nvars) throw std::invalid_argument("parse_poly: unknown variable in '" + factor + "'");
        unsigned power = 1;
        if (factor.size() > best_len) power = static_cast<unsigned>(std::stoul(factor.substr(best_len + 1)));
        if (e[best] + power > kMaxDegree) throw std::invalid_argument("parse_poly: exponent too large");
        e[best] = static_cast<std::uint8_t>(e[best] + power);
      }
      pos = end + 1;
    }
    max_degree = std::max(max_degree, exponent_sum(e));
    terms.emplace_back(e, coeff);
  }

  if (homogenize_var) {
    for (auto& [e, c] : terms) e[*homogenize_var] = static_cast<std::uint8_t>(e[*homogenize_var] + max_degree - exponent_sum(e));
  }
  HomogPoly out(nvars, max_degree);
  for (const auto& [e, c] : terms) {
    if (c.is_zero()) continue;
    out.add_term(e, c);
  }
  return out;
}

LinearForm::LinearForm(ExactVector coeffs) : coeffs_(std::move(coeffs)) {
  auto it = std::find_if(coeffs_.begin(), coeffs_.end(), [](const GR& c) { return !c.is_zero(); });
  if (it == coeffs_.end()) throw std::invalid_argument("LinearForm: all coefficients are zero");
  scale_ = *it;
  for (auto& c : coeffs_) c /= scale_;
}

GR LinearForm::evaluate(const ExactVector& x) const {
  if (x.size() != coeffs_.size()) throw std::invalid_argument("LinearForm::evaluate: length mismatch");
  GR acc(0);
  for (std::size_t i = 0; i < x.size(); ++i) acc += coeffs_[i] * x[i];
  return acc;
}

std::optional<HomogPoly> divide_linear(const HomogPoly& poly, const LinearForm& l) {
  if (poly.nvars() != l.nvars()) throw std::invalid_argument("divide_linear: variable count mismatch");
  if (poly.is_zero()) return HomogPoly(poly.nvars(), 0);
  if (poly.degree() == 0) return std::nullopt;
  std::size_t lead = 0;
  while (l.coefficients()[lead].is_zero()) ++lead;
  const HomogPoly divisor = l.to_poly();
  HomogPoly rest = poly;
  HomogPoly quotient(poly.nvars(), poly.degree() - 1);
  while (!rest.is_zero()) {
    const auto& [e, c] = *rest.terms().begin();
    if (e[lead] == 0) return std::nullopt;  // leading term not divisible: nonzero remainder
    Exponent q = e;
    --q[lead];
    const HomogPoly step = monomial(poly.nvars(), q, c);
    quotient += step;
    rest -= step * divisor;
  }
  return quotient;
}

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, std::size_t nvars)
    : rows_(rows), cols_(cols), nvars_(nvars), entries_(rows * cols, HomogPoly(nvars, 0)) {}

PolyMatrix PolyMatrix::submatrix(const IndexSet& row_ids, const IndexSet& col_ids) const {
  PolyMatrix out(row_ids.size(), col_ids.size(), nvars_);
  for (std::size_t r = 0; r < row_ids.size(); ++r)
    for (std::size_t c = 0; c < col_ids.size(); ++c) out(r, c) = (*this)(row_ids[r], col_ids[c]);
  return out;
}

ExactMatrix PolyMatrix::instantiate(const ExactVector& x) const {
  ExactMatrix out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c).evaluate(x);
  return out;
}

FloatMatrix PolyMatrix::instantiate(const FloatVector& x) const {
  FloatMatrix out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c).evaluate(x);
  return out;
}

bool PolyMatrix::is_linear() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const HomogPoly& p) { return p.is_zero() || p.degree() == 1; });
}

SymbolicPencil symbolic_pencil(const std::vector<ExactMatrix>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("symbolic_pencil: no blocks");
  const std::size_t n = blocks.front().rows();
  const std::size_t t = blocks.front().cols();
  for (const auto& b : blocks)
    if (b.rows() != n || b.cols() != t) throw std::invalid_argument("symbolic_pencil: blocks differ in shape");
  const std::size_t m = blocks.size();
  SymbolicPencil p(n, t, m);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < t; ++c) {
      ExactVector coeffs(m);
      for (std::size_t i = 0; i < m; ++i) coeffs[i] = blocks[i](r, c);
      p(r, c) = HomogPoly::linear(coeffs);
    }
  }
  return p;
}

HomogPoly sym_det(const PolyMatrix& p) {
  if (p.rows() != p.cols()) throw std::invalid_argument("sym_det: pencil is not square");
  const std::size_t n = p.rows();
  if (n == 0) return HomogPoly::constant(p.nvars(), GR(1));
  if (n > 20) throw std::invalid_argument("sym_det: matrix too large for cofactor expansion");
  std::unordered_map<std::uint32_t, HomogPoly> memo;
  // det of rows [popcount(used), n) against the unused columns.
  std::function<HomogPoly(std::uint32_t)> expand = [&](std::uint32_t used) -> HomogPoly {
    const auto row = static_cast<std::size_t>(std::popcount(used));
    if (row == n) return HomogPoly::constant(p.nvars(), GR(1));
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    HomogPoly acc(p.nvars(), 0);
    int position = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (used & (1u << c)) continue;
      const HomogPoly& entry = p(row, c);
      if (!entry.is_zero()) {
        HomogPoly sub = expand(used | (1u << c));
        if (!sub.is_zero()) {
          HomogPoly term = entry * sub;
          if (position % 2 == 1) term = -term;
          acc += term;
        }
      }
      ++position;
    }
    memo.emplace(used, acc);
    return acc;
  };
  return expand(0);
}

std::vector<HomogPoly> sym_minors(const PolyMatrix& p, std::size_t k) {
  if (k + 1 > std::min(p.rows(), p.cols()))
    throw std::invalid_argument("sym_minors: k+1 = " + std::to_string(k + 1) + " exceeds min(n, t)");
  std::vector<HomogPoly> out;
  for (const auto& [rows, cols] : minor_index_sets(p.rows(), p.cols(), k + 1)) out.push_back(sym_det(p.submatrix(rows, cols)));
  return out;
}

HomogPoly::TermMap dehomogenize(const HomogPoly& p, std::size_t var) {
  HomogPoly::TermMap out;
  for (const auto& [e, c] : p.terms()) {
    Exponent f = e;
    f[var] = 0;
    auto [it, inserted] = out.emplace(f, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

std::string affine_to_string(const HomogPoly::TermMap& terms, std::size_t nvars, std::size_t chart_var,
                             const std::vector<std::string>& names) {
  return format_terms(terms, nvars, names, chart_var);
}

std::string to_string(FactorVerdict v) {
  switch (v) {
    case FactorVerdict::AllLinear:
      return "all-linear";
    case FactorVerdict::NonlinearWitness:
      return "nonlinear-witness";
    case FactorVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace dloci
