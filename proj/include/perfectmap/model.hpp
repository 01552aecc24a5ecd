#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace perfectmap {

// One clique potential. scope is a strictly increasing list of variable
// indices; table holds one strictly positive entry per joint configuration,
// in configuration-index order (the lowest-index scope variable varies
// fastest, see config_index in nmrf.hpp).
struct Factor {
  std::vector<int> scope;
  std::vector<double> table;
};

struct Assignment {
  std::vector<int> values;

  bool operator==(const Assignment&) const = default;
};

// Discrete factorized model. Immutable after construction; the constructor
// validates invariants and merges factors with identical scopes by
// entrywise product, keeping first-occurrence order.
class GraphicalModel {
 public:
  GraphicalModel(std::vector<int> cardinalities, std::vector<Factor> factors);

  int var_count() const { return static_cast<int>(cards_.size()); }
  const std::vector<int>& cardinalities() const { return cards_; }
  const std::vector<Factor>& factors() const { return factors_; }
  int factor_count() const { return static_cast<int>(factors_.size()); }

  bool valid_assignment(const Assignment& a) const;

  // Total number of joint assignments, capped at `cap` (returns cap+1 when
  // the true count exceeds it) so guards never overflow.
  unsigned long long state_space_size(unsigned long long cap) const;

  bool operator==(const GraphicalModel& other) const {
    return cards_ == other.cards_ && factors_eq(other);
  }

 private:
  bool factors_eq(const GraphicalModel& other) const;

  std::vector<int> cards_;
  std::vector<Factor> factors_;
};

// GM text format.
//   GM 1
//   vars <n>
//   cards <c_1> ... <c_n>
//   factors <m>
//   factor <size> <v_1> ... <v_size>
//   values <t_1> ... <t_K>
// '#' starts a comment line; tokens may wrap across lines. Malformed input
// raises ParseError with the offending line number.
GraphicalModel parse_model(std::istream& in);
GraphicalModel parse_model_string(const std::string& text);
void serialize_model(std::ostream& out, const GraphicalModel& m);
std::string serialize_model_string(const GraphicalModel& m);

// psi <- psi / min(psi) + epsilon, per table. Afterwards every entry is
// > 1 and each table's minimum is exactly 1 + epsilon, so all log weights
// are strictly positive. The maximizing assignment is unchanged for any
// epsilon small against the potential gaps.
GraphicalModel rescale_potentials(const GraphicalModel& m, double epsilon);

bool is_rescaled(const GraphicalModel& m);

// log of the unnormalized density: sum over factors of log(table entry at
// the assignment's configuration).
double model_log_score(const GraphicalModel& m, const Assignment& a);

}  // namespace perfectmap
