#include "xbarvmm/solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "xbarvmm/errors.hpp"

namespace xbarvmm {

namespace {

// line-mesh node layout: one junction per cell on its row line, one on its
// column line. Unknowns are all junction voltages; drivers and the virtual
// ground are boundary nodes.
inline int jrow(int r, int c, int cols) { return r * cols + c; }
inline int jcol(int r, int c, int rows, int cols) { return rows * cols + r * cols + c; }

}  // namespace

struct RowReadSolver::Impl {
    int rows = 0;
    int cols = 0;
    int sensed_row = 0;
    FloatingRowPolicy policy = FloatingRowPolicy::Floating;
    bool line_model = false;
    double g_line = 0.0;
    Eigen::MatrixXd conductance;  // device conductances, rows × cols
    // base model bookkeeping: matrix row index per floating crossbar row
    std::vector<int> floating_rows;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;

    void build_base() {
        const int n = static_cast<int>(floating_rows.size());
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            double g_sum = 0.0;
            for (int c = 0; c < cols; ++c) g_sum += conductance(floating_rows[i], c);
            a(i, i) = g_sum;
        }
        lu.compute(a);
        check(a);
    }

    void build_mesh() {
        const int n = 2 * rows * cols;
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        auto stamp = [&a](int i, int j, double g) {
            a(i, i) += g;
            a(j, j) += g;
            a(i, j) -= g;
            a(j, i) -= g;
        };
        auto stamp_to_ground = [&a](int i, double g) { a(i, i) += g; };

        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                stamp(jrow(r, c, cols), jcol(r, c, rows, cols), conductance(r, c));
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c + 1 < cols; ++c)
                stamp(jrow(r, c, cols), jrow(r, c + 1, cols), g_line);
            const bool terminated = r == sensed_row || policy == FloatingRowPolicy::Grounded;
            if (terminated) stamp_to_ground(jrow(r, 0, cols), g_line);
        }
        for (int c = 0; c < cols; ++c) {
            stamp_to_ground(jcol(0, c, rows, cols), g_line);  // driver source segment
            for (int r = 0; r + 1 < rows; ++r)
                stamp(jcol(r, c, rows, cols), jcol(r + 1, c, rows, cols), g_line);
        }
        lu.compute(a);
        check(a);
    }

    void check(const Eigen::MatrixXd& a) {
        if (a.rows() == 0) return;
        // finite HRS keeps the network connected to its sources, so a
        // singular matrix means a modeling bug, not an input condition
        const double det_scale = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(det_scale > 0.0) || !std::isfinite(det_scale))
            throw std::logic_error("conductance matrix is singular");
    }
};

RowReadSolver::RowReadSolver(const CrossbarState& xbar, int sensed_row,
                             FloatingRowPolicy policy, Model model)
    : impl_(std::make_unique<Impl>()) {
    if (sensed_row < 0 || sensed_row >= xbar.rows())
        throw ParamError("sensed row out of bounds");
    impl_->rows = xbar.rows();
    impl_->cols = xbar.cols();
    impl_->sensed_row = sensed_row;
    impl_->policy = policy;
    impl_->conductance.resize(impl_->rows, impl_->cols);
    for (int r = 0; r < impl_->rows; ++r)
        for (int c = 0; c < impl_->cols; ++c)
            impl_->conductance(r, c) = xbar.conductance(r, c);

    const bool want_mesh = model == Model::LineMesh ||
                           (model == Model::Auto && xbar.config.line_resistance_ohm > 0.0);
    if (want_mesh) {
        if (!(xbar.config.line_resistance_ohm > 0.0))
            throw ParamError("line mesh model requires line_resistance_ohm > 0");
        impl_->line_model = true;
        impl_->g_line = 1.0 / xbar.config.line_resistance_ohm;
        impl_->build_mesh();
    } else {
        if (policy == FloatingRowPolicy::Floating)
            for (int r = 0; r < impl_->rows; ++r)
                if (r != sensed_row) impl_->floating_rows.push_back(r);
        impl_->build_base();
    }
}

RowReadSolver::~RowReadSolver() = default;
RowReadSolver::RowReadSolver(RowReadSolver&&) noexcept = default;
RowReadSolver& RowReadSolver::operator=(RowReadSolver&&) noexcept = default;

NodalSolution RowReadSolver::solve(std::span<const double> column_voltages) const {
    const Impl& s = *impl_;
    if (static_cast<int>(column_voltages.size()) != s.cols)
        throw ParamError("column voltage count mismatch");

    NodalSolution sol;
    sol.line_model = s.line_model;
    sol.row_node_voltages.assign(s.rows, 0.0);

    if (!s.line_model) {
        const int n = static_cast<int>(s.floating_rows.size());
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) {
            double inj = 0.0;
            for (int c = 0; c < s.cols; ++c)
                inj += s.conductance(s.floating_rows[i], c) * column_voltages[c];
            b(i) = inj;
        }
        Eigen::VectorXd v;
        if (n > 0) v = s.lu.solve(b);
        for (int i = 0; i < n; ++i) sol.row_node_voltages[s.floating_rows[i]] = v(i);
        double current = 0.0;
        for (int c = 0; c < s.cols; ++c)
            current += column_voltages[c] * s.conductance(s.sensed_row, c);
        sol.sensed_row_current = current;
        sol.node_voltages = sol.row_node_voltages;
    } else {
        const int n = 2 * s.rows * s.cols;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
        for (int c = 0; c < s.cols; ++c)
            b(jcol(0, c, s.rows, s.cols)) = s.g_line * column_voltages[c];
        Eigen::VectorXd v = s.lu.solve(b);
        sol.node_voltages.assign(v.data(), v.data() + n);
        for (int r = 0; r < s.rows; ++r)
            sol.row_node_voltages[r] = v(jrow(r, 0, s.cols));
        sol.sensed_row_current = s.g_line * v(jrow(s.sensed_row, 0, s.cols));
    }

    // residual and branch-current scale, recomputed from the network
    ReadBoundaryConditions bc;
    bc.column_voltages.assign(column_voltages.begin(), column_voltages.end());
    bc.sensed_row = s.sensed_row;
    bc.policy = s.policy;
    sol.kcl_residual = residual_of(bc, sol, &sol.max_branch_current);
    return sol;
}

double RowReadSolver::residual_of(const ReadBoundaryConditions& bc, const NodalSolution& sol,
                                  double* max_branch_current) const {
    const Impl& s = *impl_;
    double residual = 0.0;
    double branch_max = 0.0;

    if (!sol.line_model) {
        // row node voltage: driven rows at 0, floating rows from the solution
        for (int r = 0; r < s.rows; ++r) {
            const bool floating = s.policy == FloatingRowPolicy::Floating && r != bc.sensed_row;
            const double vr = sol.node_voltages[r];
            double net = 0.0;
            for (int c = 0; c < s.cols; ++c) {
                const double i_branch = s.conductance(r, c) * (bc.column_voltages[c] - vr);
                net += i_branch;
                branch_max = std::max(branch_max, std::abs(i_branch));
            }
            if (floating) residual = std::max(residual, std::abs(net));
        }
    } else {
        const auto& v = sol.node_voltages;
        auto flow_in = [&](double& net, double v_node, double v_other, double g) {
            const double i_branch = g * (v_other - v_node);
            net += i_branch;
            branch_max = std::max(branch_max, std::abs(i_branch));
        };
        for (int r = 0; r < s.rows; ++r) {
            for (int c = 0; c < s.cols; ++c) {
                const int ir = jrow(r, c, s.cols);
                const int ic = jcol(r, c, s.rows, s.cols);
                double net_r = 0.0;
                flow_in(net_r, v[ir], v[ic], s.conductance(r, c));
                if (c > 0) flow_in(net_r, v[ir], v[jrow(r, c - 1, s.cols)], s.g_line);
                if (c + 1 < s.cols) flow_in(net_r, v[ir], v[jrow(r, c + 1, s.cols)], s.g_line);
                const bool terminated =
                    r == bc.sensed_row || s.policy == FloatingRowPolicy::Grounded;
                if (c == 0 && terminated) flow_in(net_r, v[ir], 0.0, s.g_line);
                residual = std::max(residual, std::abs(net_r));

                double net_c = 0.0;
                flow_in(net_c, v[ic], v[ir], s.conductance(r, c));
                if (r > 0) flow_in(net_c, v[ic], v[jcol(r - 1, c, s.rows, s.cols)], s.g_line);
                if (r + 1 < s.rows)
                    flow_in(net_c, v[ic], v[jcol(r + 1, c, s.rows, s.cols)], s.g_line);
                if (r == 0) flow_in(net_c, v[ic], bc.column_voltages[c], s.g_line);
                residual = std::max(residual, std::abs(net_c));
            }
        }
    }
    if (max_branch_current) *max_branch_current = branch_max;
    return residual;
}

NodalSolution solve_read(const CrossbarState& xbar, const ReadBoundaryConditions& bc) {
    RowReadSolver solver(xbar, bc.sensed_row, bc.policy, RowReadSolver::Model::IdealColumns);
    return solver.solve(bc.column_voltages);
}

NodalSolution solve_read_with_line_resistance(const CrossbarState& xbar,
                                              const ReadBoundaryConditions& bc) {
    if (xbar.config.line_resistance_ohm < 0.0)
        throw ParamError("line_resistance_ohm must be >= 0");
    if (xbar.config.line_resistance_ohm == 0.0) return solve_read(xbar, bc);
    RowReadSolver solver(xbar, bc.sensed_row, bc.policy, RowReadSolver::Model::LineMesh);
    return solver.solve(bc.column_voltages);
}

double kcl_residual_check(const CrossbarState& xbar, const ReadBoundaryConditions& bc,
                          const NodalSolution& solution) {
    RowReadSolver solver(xbar, bc.sensed_row, bc.policy,
                         solution.line_model ? RowReadSolver::Model::LineMesh
                                             : RowReadSolver::Model::IdealColumns);
    return solver.residual_of(bc, solution, nullptr);
}

}  // namespace xbarvmm
