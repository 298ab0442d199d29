#ifndef RUINLAB_BOUNDARY_HPP
#define RUINLAB_BOUNDARY_HPP

#include <string>
#include <variant>
#include <vector>

namespace ruinlab {

struct ClassicalRule {};

// w(y) = 1 iff y <= -deficit.
struct DeficitThreshold {
  double deficit;
};

// w(y) = 1 - e^{rate * y}.
struct ExponentialAbsorption {
  double rate;
};

enum class Interpolation { Linear, Step };

// Values w_i at strictly increasing negative nodes y_i. Linear interpolates;
// Step holds w_i on [y_i, y_{i+1}). Outside the grid the nearest end value
// is used.
struct TabulatedRule {
  std::vector<double> nodes;
  std::vector<double> values;
  Interpolation interpolation = Interpolation::Linear;
};

struct RuleFlags {
  bool is_monotone;
  bool is_continuous;
  bool limit_at_minus_infinity_is_one;
};

// Boundary values psi(y), y < 0, of a modified ruin probability: the
// severity weight applied to the deficit at the ruin time.
class BoundaryFunction {
 public:
  using Kind = std::variant<ClassicalRule, DeficitThreshold, ExponentialAbsorption, TabulatedRule>;

  static BoundaryFunction classical();
  static BoundaryFunction deficit_threshold(double deficit);
  static BoundaryFunction exponential_absorption(double rate);
  static BoundaryFunction tabulated(std::vector<double> nodes, std::vector<double> values,
                                    Interpolation interpolation = Interpolation::Linear);

  const Kind& kind() const noexcept { return kind_; }
  const RuleFlags& flags() const noexcept { return flags_; }
  bool is_classical() const noexcept { return std::holds_alternative<ClassicalRule>(kind_); }
  std::string describe() const;

  // w(y); DomainError for y >= 0.
  double evaluate(double y) const;
  // w(-deficit) for deficit > 0, unchecked. Used by the samplers.
  double weight_at_deficit(double deficit) const noexcept;
  // Deficit values where w may jump or kink; quadrature breakpoints.
  std::vector<double> deficit_breakpoints() const;

 private:
  BoundaryFunction(Kind kind, RuleFlags flags) : kind_(std::move(kind)), flags_(flags) {}

  Kind kind_;
  RuleFlags flags_;
};

enum class TheoremId { Heavy, LightFixed, LightAtom, LightSharp };

const char* to_string(TheoremId id);

struct HypothesisItem {
  std::string name;
  bool passed;
  std::string reason;
};

struct HypothesisReport {
  TheoremId theorem;
  bool passed;
  std::vector<HypothesisItem> items;

  std::string summary() const;
};

// Rule-side assumptions: Heavy needs w(y) -> 1 as y -> -inf; the light-tailed
// results need w continuous or monotone on (-inf, 0).
HypothesisReport check_hypotheses(const BoundaryFunction& rule, TheoremId theorem);

}  // namespace ruinlab

#endif  // RUINLAB_BOUNDARY_HPP
