#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rabi/model.hpp"

namespace rabi {

// Hamiltonian in the truncated boson Fock basis |n> x |s>, n = 0..n_max, with
// the spin index s in the sigma_z eigenbasis interleaved as i = 2n + s. The
// matrix is real symmetric with bandwidth 3.
struct FockHamiltonian {
    int n_max = 0;
    int dim = 0;
    Eigen::MatrixXd matrix;
};

struct SpectrumTable {
    std::vector<double> g_grid;
    std::vector<std::vector<double>> levels; // one ascending row per grid point
    int n_max = 0;
    ModelParams params;                      // g field unused
    double convergence_drift = 0.0;          // doubling-test drift at the last grid point
};

FockHamiltonian build_hamiltonian(const ModelParams& p, int n_max);

// k smallest eigenvalues, ascending.
std::vector<double> eigen_spectrum(const FockHamiltonian& h, int k);

SpectrumTable sweep_levels(const ModelParams& p, double g_min, double g_max,
                           int steps, int k, int n_max);

// Number of eigenvalues within tol of e_target, with the cutoff certified by a
// doubling test (counts must agree and matched eigenvalues drift < tol/10).
int degeneracy_at(const ModelParams& p, double e_target, int n_max, double tol);

} // namespace rabi
