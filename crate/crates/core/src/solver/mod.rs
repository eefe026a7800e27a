//! Boundary value problem solvers: the signed Poisson kernel and the
//! Dirichlet potential it generates, the Neumann and regularity gradients
//! through the closed-form inverses of the boundary equations, and the
//! quadrant identities that tie the kernel to the boundary equations.

mod bvp;
mod field;
mod kernel;
mod presets;

pub use bvp::{
    check_threshold, configure, half_line_map, psi_from_u, solve_dirichlet, solve_neumann,
    solve_regularity, DirichletRoute, DirichletSolution, GradientSolution, SolverOptions,
};
pub use field::{FieldGrid, FieldKind, GridSpec};
pub use kernel::{
    harmonic_measure_table, poisson_kernel, poisson_kernel_axis, quadrant_integral_identity,
    quadrant_poisson, residue_i, residue_i_quadrature, KernelRow,
};
pub use presets::{bump, Preset};
