// Regenerates src/mgf_constants_table.inc:
//   spectail_gen_constants > src/mgf_constants_table.inc
#include <cstdio>
#include <string>
#include <vector>

#include "spectail/subexp_dist.hpp"

int main() {
    using spectail::DistributionSpec;
    const std::vector<DistributionSpec> laws = {
        DistributionSpec::centered_exponential(), DistributionSpec::laplace(), DistributionSpec::gaussian(),
        DistributionSpec::rademacher(),           DistributionSpec::weibull(1.0), DistributionSpec::weibull(1.5),
        DistributionSpec::weibull(2.0),
    };
    std::printf("// Generated by spectail_gen_constants; do not edit by hand.\n");
    std::printf("// Smallest c with E e^{λξ} <= exp(c²ψ₁²λ²) on |λ| <= 1/(cψ₁), per family.\n");
    std::printf("constexpr MgfTableEntry kMgfConstantTable[] = {\n");
    for (const auto& law : laws) {
        const double c = spectail::calibrate_mgf_constant(law);
        std::printf("    {Family::%s, %.17g, %.17g},\n",
                    law.family == spectail::Family::symmetric_weibull ? "symmetric_weibull"
                                                                      : std::string(spectail::family_name(law.family)).c_str(),
                    law.shape, c);
    }
    std::printf("    {Family::zero, 1.0, 1.0},\n};\n");
    return 0;
}
