//! Piecewise-linear finite elements for the Robin eigenproblem.

pub mod assemble;
pub mod eigen;
pub mod mesh;
pub mod mixed;

pub use assemble::{assemble, OperatorBundle};
pub use eigen::{solve_eigens, EigenSolution};
pub use mesh::{mesh, BoundaryEdge, Mesh};
pub use mixed::{mixed_dn_eigenvalue, rayleigh_quotient};

use crate::error::Result;
use crate::geometry::DomainSpec;

/// Mesh, assemble and solve in one call.
pub fn fem_spectrum(spec: &DomainSpec, target_h: f64, count: usize) -> Result<(Mesh, EigenSolution)> {
    let m = mesh(spec, target_h)?;
    let ops = assemble(&m, &spec.h, None)?;
    let sol = solve_eigens(&m, &ops, count)?;
    Ok((m, sol))
}
