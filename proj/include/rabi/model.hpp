#pragma once

#include "rabi/error.hpp"

namespace rabi {

// Physical parameters of the generalised Rabi model
//   H = omega a^dag a + g sigma_x (a^dag + a) + delta sigma_z + epsilon sigma_x.
struct ModelParams {
    double omega = 1.0;   // field frequency, > 0
    double g = 0.0;       // coupling, >= 0
    double delta = 0.0;   // level splitting, >= 0
    double epsilon = 0.0; // driving strength
};

// Plus selects the e^{-gz/omega} solution family with energy shift +epsilon,
// Minus the e^{+gz/omega} family with shift -epsilon. Minus-branch quantities
// follow from Plus-branch formulas under epsilon -> -epsilon, z -> -z.
enum class Branch { Plus, Minus };

inline const char* branch_name(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }
inline double branch_sign(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }

struct ExceptionalLevel {
    int n = 0;
    Branch branch = Branch::Plus;
    double energy = 0.0;
};

// Checks invariants (omega > 0, all fields finite) and normalizes delta to |delta|.
ModelParams validate_params(ModelParams p);

// E = n omega - g^2/omega + epsilon (Plus) or n omega - g^2/omega - epsilon (Minus).
double exceptional_energy(const ModelParams& p, int n, Branch branch);

ExceptionalLevel make_level(const ModelParams& p, int n, Branch branch);

} // namespace rabi
