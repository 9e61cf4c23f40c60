// Builds the chain for the Laguerre weight with a point mass at c = -1 and
// prints the leading block of H together with the identity residuals.

#include "sobspec/matrix_factory.hpp"

#include <iostream>

int main() {
    using namespace sobspec;
    PrecisionScope prec(256);
    SobolevSpec<Real> spec(MeasureSpec<Real>::laguerre(Real(0)), Real(-1), Real(1), Real(1));
    auto chain = build_chain(spec, 20);

    std::cout << "H (leading 5x5):\n";
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) std::cout << "  " << to_decimal(chain.H(i, j), 8);
        std::cout << "\n";
    }
    auto report = verify_identities(chain);
    std::cout << "\nresiduals on the leading " << report.block << " block:\n";
    for (const auto& r : report.residuals) std::cout << "  " << r.identity << ": " << to_decimal(r.value, 3) << "\n";
    std::cout << "QQ^T - I (5x5): " << to_decimal(qqt_defect(chain), 3) << "\n";
}
