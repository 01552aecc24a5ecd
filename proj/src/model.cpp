#include "perfectmap/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "perfectmap/errors.hpp"
#include "format_util.hpp"
#include "token_reader.hpp"

namespace perfectmap {

namespace {

unsigned long long scope_table_size(const std::vector<int>& scope, const std::vector<int>& cards) {
  unsigned long long k = 1;
  for (int v : scope) {
    k *= static_cast<unsigned long long>(cards[v]);
    if (k > (1ULL << 40)) throw std::invalid_argument("factor table too large");
  }
  return k;
}

}  // namespace

GraphicalModel::GraphicalModel(std::vector<int> cardinalities, std::vector<Factor> factors)
    : cards_(std::move(cardinalities)) {
  if (cards_.empty()) throw std::invalid_argument("model needs at least one variable");
  for (int c : cards_)
    if (c < 1) throw std::invalid_argument("every cardinality must be >= 1");

  std::map<std::vector<int>, std::size_t> by_scope;
  for (auto& f : factors) {
    if (f.scope.empty()) throw std::invalid_argument("factor scope must be nonempty");
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
      if (f.scope[i] < 0 || f.scope[i] >= var_count())
        throw std::invalid_argument("factor scope variable out of range");
      if (i > 0 && f.scope[i] <= f.scope[i - 1])
        throw std::invalid_argument("factor scope must be strictly increasing");
    }
    unsigned long long want = scope_table_size(f.scope, cards_);
    if (f.table.size() != want)
      throw std::invalid_argument("wrong table length: expected " + std::to_string(want) +
                                  ", got " + std::to_string(f.table.size()));
    for (double t : f.table)
      if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("factor table entries must be finite and > 0");

    auto it = by_scope.find(f.scope);
    if (it == by_scope.end()) {
      by_scope.emplace(f.scope, factors_.size());
      factors_.push_back(std::move(f));
    } else {
      // duplicate scope: merge by entrywise product
      auto& dst = factors_[it->second].table;
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] *= f.table[i];
    }
  }
  if (factors_.empty()) throw std::invalid_argument("model needs at least one factor");
}

bool GraphicalModel::valid_assignment(const Assignment& a) const {
  if (static_cast<int>(a.values.size()) != var_count()) return false;
  for (int i = 0; i < var_count(); ++i)
    if (a.values[i] < 0 || a.values[i] >= cards_[i]) return false;
  return true;
}

unsigned long long GraphicalModel::state_space_size(unsigned long long cap) const {
  unsigned long long total = 1;
  for (int c : cards_) {
    total *= static_cast<unsigned long long>(c);
    if (total > cap) return cap + 1;
  }
  return total;
}

bool GraphicalModel::factors_eq(const GraphicalModel& other) const {
  if (factors_.size() != other.factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].scope != other.factors_[i].scope || factors_[i].table != other.factors_[i].table)
      return false;
  return true;
}

GraphicalModel parse_model(std::istream& in) {
  detail::TokenReader tok(in);
  std::string word = tok.require("GM header");
  if (word != "GM") throw ParseError(tok.line(), "malformed header: expected 'GM', got '" + word + "'");
  long long version = tok.require_int("format version");
  if (version != 1) throw ParseError(tok.line(), "unsupported GM version " + std::to_string(version));

  tok.expect_keyword("vars");
  long long n = tok.require_int("variable count");
  if (n < 1 || n > 1000000) throw ParseError(tok.line(), "variable count out of range");

  tok.expect_keyword("cards");
  std::vector<int> cards(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    long long c = tok.require_int("cardinality");
    if (c < 1 || c > std::numeric_limits<int>::max()) throw ParseError(tok.line(), "cardinality must be >= 1");
    cards[i] = static_cast<int>(c);
  }

  tok.expect_keyword("factors");
  long long m = tok.require_int("factor count");
  if (m < 1) throw ParseError(tok.line(), "factor count must be >= 1");

  std::vector<Factor> factors;
  factors.reserve(static_cast<std::size_t>(m));
  for (long long fi = 0; fi < m; ++fi) {
    tok.expect_keyword("factor");
    long long size = tok.require_int("scope size");
    if (size < 1 || size > n) throw ParseError(tok.line(), "scope size out of range");
    Factor f;
    f.scope.resize(static_cast<std::size_t>(size));
    for (long long i = 0; i < size; ++i) {
      long long v = tok.require_int("scope variable");
      if (v < 0 || v >= n) throw ParseError(tok.line(), "scope out of range");
      if (i > 0 && v <= f.scope[i - 1]) throw ParseError(tok.line(), "non-increasing scope");
      f.scope[i] = static_cast<int>(v);
    }
    unsigned long long want = 1;
    for (int v : f.scope) want *= static_cast<unsigned long long>(cards[v]);
    tok.expect_keyword("values");
    f.table.resize(want);
    for (unsigned long long i = 0; i < want; ++i) {
      std::string t;
      bool have = tok.next(t);
      double val = 0.0;
      bool numeric = false;
      if (have) {
        try {
          std::size_t used = 0;
          val = std::stod(t, &used);
          numeric = used == t.size();
        } catch (const std::exception&) {
        }
      }
      if (!have || !numeric)
        throw ParseError(tok.line(), "wrong table length: expected " + std::to_string(want) +
                                         " values, got " + std::to_string(i));
      if (!(val > 0.0) || !std::isfinite(val)) throw ParseError(tok.line(), "nonpositive entry");
      f.table[i] = val;
    }
    factors.push_back(std::move(f));
  }

  std::string extra;
  if (tok.next(extra)) throw ParseError(tok.line(), "trailing tokens after last factor: '" + extra + "'");

  try {
    return GraphicalModel(std::move(cards), std::move(factors));
  } catch (const std::invalid_argument& e) {
    throw ParseError(tok.line(), e.what());
  }
}

GraphicalModel parse_model_string(const std::string& text) {
  std::istringstream in(text);
  return parse_model(in);
}

void serialize_model(std::ostream& out, const GraphicalModel& m) {
  out << "GM 1\n";
  out << "vars " << m.var_count() << "\n";
  out << "cards";
  for (int c : m.cardinalities()) out << ' ' << c;
  out << "\n";
  out << "factors " << m.factor_count() << "\n";
  for (const auto& f : m.factors()) {
    out << "factor " << f.scope.size();
    for (int v : f.scope) out << ' ' << v;
    out << "\nvalues";
    for (double t : f.table) out << ' ' << detail::format_double(t);
    out << "\n";
  }
}

std::string serialize_model_string(const GraphicalModel& m) {
  std::ostringstream out;
  serialize_model(out, m);
  return out.str();
}

GraphicalModel rescale_potentials(const GraphicalModel& m, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  std::vector<Factor> factors = m.factors();
  for (auto& f : factors) {
    double lo = *std::min_element(f.table.begin(), f.table.end());
    for (double& t : f.table) t = t / lo + epsilon;
  }
  return GraphicalModel(m.cardinalities(), std::move(factors));
}

bool is_rescaled(const GraphicalModel& m) {
  for (const auto& f : m.factors())
    for (double t : f.table)
      if (!(t > 1.0)) return false;
  return true;
}

double model_log_score(const GraphicalModel& m, const Assignment& a) {
  if (!m.valid_assignment(a)) throw std::invalid_argument("assignment invalid for model");
  double total = 0.0;
  for (const auto& f : m.factors()) {
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (int v : f.scope) {
      idx += static_cast<std::size_t>(a.values[v]) * stride;
      stride *= static_cast<std::size_t>(m.cardinalities()[v]);
    }
    total += std::log(f.table[idx]);
  }
  return total;
}

}  // namespace perfectmap
