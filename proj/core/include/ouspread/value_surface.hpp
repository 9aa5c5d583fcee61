#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "ouspread/boundary_solver.hpp"

namespace ouspread {

/// Which value function to evaluate.
enum class ValueRole { ExitLong, EntryLong, ExitShort, EntryShort, Chooser, CostExit };

std::string_view to_string(ValueRole r);
std::optional<ValueRole> parse_value_role(std::string_view s);

/// Value function attached to a boundary role.
ValueRole value_role(Role r);

struct ValueQuery {
    double t;
    double x;
    ValueRole role;
};

/// Values on a (time, spread) mesh; values[i][j] is V(times[j], xs[i]).
struct ValueSurface {
    ValueRole role;
    std::vector<double> times;
    std::vector<double> xs;
    std::vector<std::vector<double>> values;
};

/// Evaluates the integral representations of a solved strategy. Holds a reference to
/// the solution, which must outlive it.
class ValueEvaluator {
public:
    explicit ValueEvaluator(const StrategySolution& sol);

    const StrategySolution& solution() const noexcept { return sol_; }

    double exit_long(double t, double x) const;
    double entry_long(double t, double x) const;
    double exit_short(double t, double x) const;
    double entry_short(double t, double x) const;
    /// V^{1,L} - V^{2,L}.
    double chooser(double t, double x) const;
    double cost_exit(double t, double x) const;

    double operator()(const ValueQuery& q) const;

    /// max(V^{1,L} - x, x - V^{2,L}).
    double chooser_payoff(double t, double x) const;

private:
    const IntegralRepresentation& repr(Role role) const;

    const StrategySolution& sol_;
    std::vector<std::optional<IntegralRepresentation>> reprs_;  // indexed by Role
};

double eval_v_exit_long(const StrategySolution& sol, const ValueQuery& q);
double eval_v_entry_long(const StrategySolution& sol, const ValueQuery& q);
double eval_v_exit_short(const StrategySolution& sol, const ValueQuery& q);
double eval_v_entry_short(const StrategySolution& sol, const ValueQuery& q);
double eval_v_chooser(const StrategySolution& sol, const ValueQuery& q);
double eval_v_exit_long_cost(const StrategySolution& sol, const ValueQuery& q);

double chooser_payoff(const StrategySolution& sol, double t, double x);

/// Spread level in (b^{2,L}(t), b^{1,L}(t)) where both chooser payoff branches agree.
/// Requires t < T. Throws RootNotBracketed if the branches do not cross.
double indifference_threshold(const StrategySolution& sol, double t);

/// Curve where entering long under a fee has zero value: V^{1,L,c}(t, g) - g - c = 0.
struct GammaCurve {
    TimeGrid grid;
    double floor;                              ///< bottom of the search window
    std::vector<std::optional<double>> values; ///< absent where no root lies in the window
};

/// Per grid node, the root in [theta - 10 sigma / sqrt(2 mu), b^{1,L,c}(t_k)]. The
/// terminal node is always absent. Needs a CostExit solution with fee > 0.
GammaCurve gamma_curve(const StrategySolution& sol);

ValueSurface fill_surface(const StrategySolution& sol, ValueRole role,
                          const std::vector<double>& times, const std::vector<double>& xs);

/// count evenly spaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace ouspread
