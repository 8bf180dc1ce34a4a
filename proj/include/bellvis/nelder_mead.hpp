#pragma once

#include <functional>

#include <Eigen/Dense>

namespace bellvis {

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

// Downhill simplex minimization (reflection/expansion/contraction/shrink),
// deterministic for a fixed start. Converges when the spread of vertex
// values drops below `tol` or the iteration cap is hit.
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x0, double step, double tol,
                                    int max_iterations) {
    const int n = int(x0.size());
    NelderMeadResult result;

    std::vector<Eigen::VectorXd> xs(std::size_t(n) + 1, x0);
    Eigen::VectorXd fs(n + 1);
    for (int i = 1; i <= n; ++i) xs[std::size_t(i)](i - 1) += step;
    for (int i = 0; i <= n; ++i) fs(i) = f(xs[std::size_t(i)]);
    result.evaluations = n + 1;

    std::vector<int> order(std::size_t(n) + 1);
    for (int it = 0; it < max_iterations; ++it) {
        for (int i = 0; i <= n; ++i) order[std::size_t(i)] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return fs(a) != fs(b) ? fs(a) < fs(b) : a < b;
        });
        const int best = order.front(), worst = order.back(), second = order[std::size_t(n) - 1];
        result.iterations = it;
        if (fs(worst) - fs(best) < tol) {
            result.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += xs[std::size_t(i)];
        centroid /= double(n);

        const Eigen::VectorXd reflected = centroid + (centroid - xs[std::size_t(worst)]);
        const double fr = f(reflected);
        ++result.evaluations;
        if (fr < fs(best)) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[std::size_t(worst)]);
            const double fe = f(expanded);
            ++result.evaluations;
            if (fe < fr) {
                xs[std::size_t(worst)] = expanded;
                fs(worst) = fe;
            } else {
                xs[std::size_t(worst)] = reflected;
                fs(worst) = fr;
            }
        } else if (fr < fs(second)) {
            xs[std::size_t(worst)] = reflected;
            fs(worst) = fr;
        } else {
            const bool outside = fr < fs(worst);
            const Eigen::VectorXd contracted =
                outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                        : Eigen::VectorXd(centroid + 0.5 * (xs[std::size_t(worst)] - centroid));
            const double fc = f(contracted);
            ++result.evaluations;
            if (fc < std::min(fr, fs(worst))) {
                xs[std::size_t(worst)] = contracted;
                fs(worst) = fc;
            } else {
                // shrink toward the best vertex
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    xs[std::size_t(i)] = xs[std::size_t(best)] + 0.5 * (xs[std::size_t(i)] - xs[std::size_t(best)]);
                    fs(i) = f(xs[std::size_t(i)]);
                }
                result.evaluations += n;
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (fs(i) < fs(best)) best = i;
    result.x = xs[std::size_t(best)];
    result.value = fs(best);
    return result;
}

} // namespace bellvis
