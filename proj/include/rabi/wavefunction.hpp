#pragma once

#include <vector>

#include "rabi/bethe.hpp"

namespace rabi {

enum class Component { PlusComp, MinusComp };

// Two-component exceptional wavefunction in the Bargmann realization. The
// branch's product-form component is e^{-+ gz/omega} times the monic root
// polynomial; the partner component is derived from the first-order system.
struct WavefunctionPair {
    Branch branch = Branch::Plus;
    int n = 0;
    RootSet roots;
    ModelParams params;
    double energy = 0.0;
};

WavefunctionPair make_wavefunction(const ModelParams& p, int n, Branch branch,
                                   RootSet roots);

// Evaluate one component at z. The partner component requires delta > 0; the
// degenerate atomic limit has a one-component wavefunction instead.
Complex component_eval(const WavefunctionPair& w, Component which, Complex z);

// 16 points on each of the circles |z| = 1 and |z| = 2 plus 13 real points in
// [-3, 3], excluding anything within 1e-3 of the poles +- g/omega.
std::vector<Complex> standard_sample_grid(const ModelParams& p);

// Max residual of the two coupled first-order equations over the samples,
// normalized by the largest component magnitude seen.
double schrodinger_residual(const WavefunctionPair& w,
                            const std::vector<Complex>& samples);

} // namespace rabi
