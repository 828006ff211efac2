#include "fewview/operator_norm.hpp"

#include <cmath>
#include <vector>

#include "fewview/errors.hpp"
#include "fewview/gradient.hpp"
#include "fewview/projector.hpp"
#include "fewview/random.hpp"

namespace fewview {

LinearMap stacked_operator(const FanBeamGeometry& g) {
    g.validate();
    const std::size_t n = g.num_pixels();
    const std::size_t m = g.num_measurements();
    LinearMap op;
    op.domain_size = n;
    op.range_size = m + 2 * n;
    op.apply = [g, n, m](std::span<const double> x, std::span<double> out) {
        project_into(x, g, out.subspan(0, m));
        grad_into(x, g.image_width, g.image_height, out.subspan(m, n), out.subspan(m + n, n));
    };
    op.apply_adjoint = [g, n, m](std::span<const double> z, std::span<double> out) {
        backproject_into(z.subspan(0, m), g, out);
        std::vector<double> dtq(n);
        grad_adjoint_into(z.subspan(m, n), z.subspan(m + n, n), g.image_width, g.image_height, dtq);
        for (std::size_t i = 0; i < n; ++i) out[i] += dtq[i];
    };
    return op;
}

double power_iteration_norm(const LinearMap& a, std::size_t max_iters, std::uint64_t seed,
                            double rel_tol) {
    if (max_iters == 0) throw ParameterError("power iteration needs at least one iteration");
    if (a.domain_size == 0) throw ConfigError("power iteration on an empty domain");

    Engine engine(seed);
    std::vector<double> v(a.domain_size);
    for (double& e : v) e = uniform_symmetric(engine);
    std::vector<double> u(a.range_size);

    double nv = linalg::norm2(v);
    if (nv == 0.0) throw DegenerateInputError("power iteration: zero start vector");
    for (double& e : v) e /= nv;

    double estimate = 0.0;
    for (std::size_t k = 0; k < max_iters; ++k) {
        a.apply(v, u);
        const double next = linalg::norm2(u);
        a.apply_adjoint(u, v);
        nv = linalg::norm2(v);
        const bool converged = k > 0 && std::abs(next - estimate) <= rel_tol * next;
        estimate = next;
        if (nv == 0.0 || converged) break;
        for (double& e : v) e /= nv;
    }
    return estimate;
}

double operator_norm(const FanBeamGeometry& g, std::size_t iters, std::uint64_t seed,
                     double rel_tol) {
    return power_iteration_norm(stacked_operator(g), iters, seed, rel_tol);
}

} // namespace fewview
