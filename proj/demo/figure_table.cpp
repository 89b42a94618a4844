// Prints the correlational-decoherence comparison for both figure presets.

#include <cstdio>

#include "dephase/dephase.hpp"

int main() {
    using namespace dephase;
    for (auto preset : {FigurePreset::fig1, FigurePreset::fig2}) {
        const auto sc = figure_scenario(preset);
        const auto rep = compare_correlational(sc.params, figure_t_max, 11);
        std::printf("%s  beta*omega0=%g  <s3>=%g  A_init=%.6f\n", sc.label.c_str(), sc.beta_omega0,
                    sc.params.sigma3_mean, rep.a_init);
        std::printf("%6s %12s %12s %12s\n", "t", "zn", "renorm", "exact");
        for (const auto& r : rep.rows)
            std::printf("%6.1f %12.6f %12.6f %12.6f\n", r.t, r.gamma_cor, r.gamma_cor_renorm, r.gamma_cor_exact);
        std::printf("L2 zn %.5f  renorm %.5f  winner %s\n\n", rep.l2_zn, rep.l2_renorm, to_string(rep.winner));
    }
}
