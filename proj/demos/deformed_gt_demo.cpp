// Library walkthrough: draws one positive definite pair, shows the deformed
// trace inequality tightening into equality at q = 2 and reversing beyond it,
// then evaluates the trace functional phi both ways.

#include <cstdio>

#include "qgt/qgt.hpp"

int main() {
    using namespace qgt;

    const auto a = random_pd(RandomEnsembleSpec(4, 0.2, 5.0, 1));
    const auto b = random_pd(RandomEnsembleSpec(4, 0.2, 5.0, 2));

    std::printf("deformed Golden-Thompson: Tr exp_q(A+B) vs Tr exp_q(A)^{2-q}(A(q-1)+exp_q B)\n");
    std::printf("%6s  %14s  %14s  %12s  %s\n", "q", "lhs", "rhs", "gap", "holds");
    for (double qv : {1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0}) {
        const DeformationParameter q(qv);
        const auto [lhs, rhs] = theorem1_sides(a, b, q);
        const InequalityVerdict v = check_theorem1(a, b, q);
        std::printf("%6.2f  %14.6f  %14.6f  %12.3e  %s\n", qv, lhs, rhs, rhs - lhs,
                    v.holds ? "yes" : "NO");
    }

    const DeformationParameter q(1.5);
    const IsometryFamily fam = make_isometry_family(2, 4, 7, Completeness::exact);
    const FunctionalPoint pt = random_point(2, 4, 0.2, 5.0, 11);
    std::printf("\nphi definitional = %.12f\n", phi(fam, pt, q));
    std::printf("phi closed form  = %.12f\n", phi_closed_form(fam, pt, q));
    std::printf("phi(3 * point)   = %.12f (homogeneity: 3 * phi)\n",
                phi(fam, scale_point(pt, 3.0), q));
    return 0;
}
