#include "deblur/problem.hpp"

#include "deblur/errors.hpp"

namespace deblur {

Problem make_problem(OperatorPtr op, ImageGrid observation, std::optional<ImageGrid> reference) {
    if (!op) throw ParameterError("make_problem: null operator");
    if (observation.height() != op->height() || observation.width() != op->width()) {
        throw ParameterError("make_problem: observation does not match operator shape");
    }
    if (reference) require_same_shape(*reference, observation, "make_problem");
    Problem p;
    p.observation_spectrum = op->analyze(observation);
    p.op = std::move(op);
    p.observation = std::move(observation);
    p.reference = std::move(reference);
    return p;
}

double evaluate_tol(const Problem& problem, const ImageGrid& x) {
    const ImageGrid ax = problem.op->forward(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double r = ax[i] - problem.observation[i];
        acc += r * r;
    }
    return 0.5 * acc;
}

double evaluate_objective(const Problem& problem, const Regularizer& reg, const ImageGrid& x) {
    return evaluate_tol(problem, x) + regularizer_value(reg, x);
}

} // namespace deblur
