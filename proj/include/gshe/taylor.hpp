#pragma once

// Arbitrary-precision Taylor integrator for the GSHE flow and its first
// variational equations.  States are complex, time is real.  Coefficients
// obey x_{m+1} = (field coefficient m)/(m+1); nonlinear terms by Cauchy
// convolution; any number of tangent vectors ride along in the same jet.

#include <functional>
#include <ostream>
#include <vector>

#include "gshe/model.hpp"

namespace gshe {

struct Jet {
    int order = 0;                                        // M
    std::array<std::vector<BigComplex>, 4> x;             // x[comp][m], m <= M
    std::vector<std::array<std::vector<BigComplex>, 4>> tangents;
    std::array<std::vector<BigComplex>, 2> pow;           // q1^2, q1^3 streams
};

Jet jet_expand(const State4& x0, const std::vector<Vec4>& tangents, const ModelParams& p,
               int order);

// Jet evaluated at time offset h (Horner).
State4 eval_jet(const Jet& jet, const BigReal& h);
Vec4 eval_jet_tangent(const Jet& jet, int which, const BigReal& h);

// h = 0.9 min_{m in {M-1, M}} (tol / ||x_m||_inf)^(1/m), capped at 1.
// Trailing norms include the tangent blocks.  DegenerateJet when the last
// two coefficient layers vanish identically.
BigReal step_size(const Jet& jet, const BigReal& tol);

struct FlowResult {
    State4 x_end;
    std::vector<Vec4> tangents_end;
    BigReal t_elapsed;
    long steps = 0;
    BigReal max_h;
};

struct FlowOptions {
    std::ostream* trace = nullptr;  // CSV rows: t, h, |H - H0|
    // Called after each accepted step with the jet, the step start time and
    // the signed step; lets callers dense-sample without re-integration.
    std::function<void(const Jet&, const BigReal& t0, const BigReal& h)> on_step;
};

FlowResult flow(const State4& x0, const std::vector<Vec4>& tangents, const BigReal& t_total,
                const ModelParams& p, const FlowOptions& opts = {});

} // namespace gshe
