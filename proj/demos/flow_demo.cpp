// Drive a convex path potential toward its secant line and watch the gap
// decrease onto the linear family.
#include <cmath>
#include <cstdio>

#include "specgap/specgap.hpp"

int main() {
    using namespace specgap;
    const std::size_t N = 12;
    const double pi = 3.14159265358979323846;
    const double bound = 2.0 * (1.0 - std::cos(pi / static_cast<double>(N)));

    const FlowTrace trace =
        flow_to_linear_path(quadratic_path(N, 1.0), 0.02, 4000, 1e-6, 1e-12);

    std::printf("%6s %14s %14s   regions\n", "step", "gap", "lin_residual");
    for (std::size_t k = 0; k < trace.states.size(); k += 25) {
        const FlowState& s = trace.states[k];
        std::printf("%6zu %14.9f %14.3e   [%zu, %zu]\n",
                    k, s.gap, s.linearity_residual, s.m, s.n);
    }
    const FlowState& last = trace.states.back();
    std::printf("%6zu %14.9f %14.3e   [%zu, %zu]\n",
                trace.states.size() - 1, last.gap, last.linearity_residual, last.m, last.n);

    std::printf("\nterminated: %s after %zu steps\n",
                flow_termination_name(trace.terminated_reason), trace.states.size() - 1);
    std::printf("final gap %.9f vs flat-potential bound %.9f (margin %.3e)\n",
                last.gap, bound, last.gap - bound);
    return last.gap >= bound - 1e-9 ? 0 : 1;
}
