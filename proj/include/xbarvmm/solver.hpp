#pragma once

#include <memory>
#include <span>
#include <vector>

#include "xbarvmm/crossbar.hpp"

namespace xbarvmm {

// One row-level read: columns driven at fixed voltages, exactly one row
// sensed at virtual ground, remaining rows floating or grounded.
struct ReadBoundaryConditions {
    std::vector<double> column_voltages;
    int sensed_row = 0;
    FloatingRowPolicy policy = FloatingRowPolicy::Floating;
};

struct NodalSolution {
    // Per-row node voltage. In the line-resistance mesh this is the junction
    // at the terminal (col 0) end of each row line.
    std::vector<double> row_node_voltages;
    double sensed_row_current = 0.0;  // amps into the virtual ground
    double kcl_residual = 0.0;        // max |net current| over unknown nodes
    double max_branch_current = 0.0;  // scale for judging the residual
    // Full solution vector; layout depends on the model (see kcl_residual_check).
    std::vector<double> node_voltages;
    bool line_model = false;
};

// Nodal analysis with ideal column drivers: each column line is a voltage
// source node, each cell a conductance between its column and row nodes.
// Floating rows are the unknowns; KCL at each gives the solve. The sensed
// row sits at 0 V, so its current is Σ_c G[sensed][c]·V_c regardless of the
// floating-row voltages — with ideal drivers, leakage shows up in the
// floating-node voltages and diagnostics, not the sensed current.
NodalSolution solve_read(const CrossbarState& xbar, const ReadBoundaryConditions& bc);

// Full-mesh extension: every cell gets a row-line and a column-line junction
// node, with line_resistance_ohm between adjacent junctions and between each
// line and its driver/terminal. This is where sneak paths genuinely divert
// current away from the sensed row. line_resistance = 0 delegates to
// solve_read.
NodalSolution solve_read_with_line_resistance(const CrossbarState& xbar,
                                              const ReadBoundaryConditions& bc);

// Recomputes net current at every unknown node of the given solution from
// the network itself (not the assembled matrix). Returns the max magnitude.
double kcl_residual_check(const CrossbarState& xbar, const ReadBoundaryConditions& bc,
                          const NodalSolution& solution);

// Factors the network once per (crossbar, sensed row, policy) and solves
// many column-voltage patterns against it. The conductance matrix does not
// depend on the drive pattern, so PWM accumulation reuses one factorization.
// Snapshots the crossbar's conductances at construction time.
class RowReadSolver {
public:
    enum class Model { Auto, IdealColumns, LineMesh };

    RowReadSolver(const CrossbarState& xbar, int sensed_row, FloatingRowPolicy policy,
                  Model model = Model::Auto);
    ~RowReadSolver();
    RowReadSolver(RowReadSolver&&) noexcept;
    RowReadSolver& operator=(RowReadSolver&&) noexcept;

    NodalSolution solve(std::span<const double> column_voltages) const;

    // Net current at every unknown node of a (possibly perturbed) solution,
    // recomputed branch by branch from the network.
    double residual_of(const ReadBoundaryConditions& bc, const NodalSolution& solution,
                       double* max_branch_current) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace xbarvmm
