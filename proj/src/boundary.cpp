#include "ruinlab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

double table_value(const TabulatedRule& t, double y) {
  const auto& ys = t.nodes;
  const auto& ws = t.values;
  if (y <= ys.front()) return ws.front();
  if (y >= ys.back()) return ws.back();
  const auto it = std::upper_bound(ys.begin(), ys.end(), y);
  const std::size_t hi = static_cast<std::size_t>(it - ys.begin());
  const std::size_t lo = hi - 1;
  if (t.interpolation == Interpolation::Step) return ws[lo];
  const double s = (y - ys[lo]) / (ys[hi] - ys[lo]);
  return ws[lo] + s * (ws[hi] - ws[lo]);
}

}  // namespace

BoundaryFunction BoundaryFunction::classical() {
  return BoundaryFunction(ClassicalRule{}, RuleFlags{true, true, true});
}

BoundaryFunction BoundaryFunction::deficit_threshold(double deficit) {
  if (!(deficit > 0.0) || !std::isfinite(deficit)) {
    throw DomainError("deficit threshold must be finite and positive");
  }
  return BoundaryFunction(DeficitThreshold{deficit}, RuleFlags{true, false, true});
}

BoundaryFunction BoundaryFunction::exponential_absorption(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("absorption rate must be finite and positive");
  }
  return BoundaryFunction(ExponentialAbsorption{rate}, RuleFlags{true, true, true});
}

BoundaryFunction BoundaryFunction::tabulated(std::vector<double> nodes, std::vector<double> values,
                                             Interpolation interpolation) {
  if (nodes.empty() || nodes.size() != values.size()) {
    throw DomainError("table needs one value per node");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] < 0.0) || !std::isfinite(nodes[i])) {
      throw DomainError("table nodes must be finite and negative");
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw DomainError("table nodes must be strictly increasing");
    }
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw DomainError("table values must lie in [0, 1]");
    }
  }
  RuleFlags flags{};
  // Nonincreasing in y means nondecreasing in the deficit.
  flags.is_monotone = std::is_sorted(values.rbegin(), values.rend());
  bool flat = std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
  flags.is_continuous = interpolation == Interpolation::Linear || flat;
  flags.limit_at_minus_infinity_is_one = values.front() == 1.0;
  return BoundaryFunction(TabulatedRule{std::move(nodes), std::move(values), interpolation}, flags);
}

std::string BoundaryFunction::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{[&](const ClassicalRule&) { os << "classical"; },
                        [&](const DeficitThreshold& t) { os << "threshold(d=" << t.deficit << ")"; },
                        [&](const ExponentialAbsorption& e) {
                          os << "exp_absorption(a=" << e.rate << ")";
                        },
                        [&](const TabulatedRule& t) {
                          os << "table(" << t.nodes.size() << " nodes, "
                             << (t.interpolation == Interpolation::Linear ? "linear" : "step")
                             << ")";
                        }},
             kind_);
  return os.str();
}

double BoundaryFunction::weight_at_deficit(double deficit) const noexcept {
  return std::visit(
      Overloaded{[](const ClassicalRule&) { return 1.0; },
                 [&](const DeficitThreshold& t) { return deficit >= t.deficit ? 1.0 : 0.0; },
                 [&](const ExponentialAbsorption& e) { return -std::expm1(-e.rate * deficit); },
                 [&](const TabulatedRule& t) { return table_value(t, -deficit); }},
      kind_);
}

double BoundaryFunction::evaluate(double y) const {
  if (!(y < 0.0)) throw DomainError("boundary function is defined on y < 0 only");
  return weight_at_deficit(-y);
}

std::vector<double> BoundaryFunction::deficit_breakpoints() const {
  return std::visit(Overloaded{[](const ClassicalRule&) { return std::vector<double>{}; },
                               [](const DeficitThreshold& t) { return std::vector<double>{t.deficit}; },
                               [](const ExponentialAbsorption&) { return std::vector<double>{}; },
                               [](const TabulatedRule& t) {
                                 std::vector<double> out;
                                 for (auto it = t.nodes.rbegin(); it != t.nodes.rend(); ++it) {
                                   out.push_back(-*it);
                                 }
                                 return out;
                               }},
                    kind_);
}

const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::Heavy:
      return "heavy";
    case TheoremId::LightFixed:
      return "light_fixed";
    case TheoremId::LightAtom:
      return "light_atom";
    case TheoremId::LightSharp:
      return "light_sharp";
  }
  return "unknown";
}

std::string HypothesisReport::summary() const {
  std::ostringstream os;
  os << to_string(theorem) << ": " << (passed ? "pass" : "FAIL");
  for (const auto& item : items) {
    os << "\n  [" << (item.passed ? "ok" : "failed") << "] " << item.name << ": " << item.reason;
  }
  return os.str();
}

HypothesisReport check_hypotheses(const BoundaryFunction& rule, TheoremId theorem) {
  HypothesisReport report{theorem, true, {}};
  const RuleFlags& f = rule.flags();
  if (theorem == TheoremId::Heavy) {
    HypothesisItem item{"limit_at_minus_infinity_is_one", f.limit_at_minus_infinity_is_one, ""};
    item.reason = item.passed ? rule.describe() + " tends to 1 as y -> -inf"
                              : rule.describe() + " does not tend to 1 as y -> -inf";
    report.items.push_back(item);
  } else {
    HypothesisItem item{"continuous_or_monotone", f.is_continuous || f.is_monotone, ""};
    std::ostringstream os;
    os << rule.describe() << " is " << (f.is_continuous ? "continuous" : "discontinuous")
       << " and " << (f.is_monotone ? "monotone" : "not monotone") << " on (-inf, 0)";
    item.reason = os.str();
    report.items.push_back(item);
  }
  for (const auto& item : report.items) report.passed = report.passed && item.passed;
  return report;
}

}  // namespace ruinlab
