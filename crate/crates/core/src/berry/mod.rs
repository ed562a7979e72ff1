//! Berry curvature of Laughlin quasihole bundles from Monte-Carlo Gram
//! matrices.

mod gram;
mod model;
mod slice;

pub use gram::{adjoint, logdet_hermitian, matmul, sample_field, symmetrize, Budget, GramEstimate, GramField};
pub use model::{Chart, FrozenModel, GramModel, SphereModel, TorusModel};
pub use slice::{
    analytic_h_flux, conjugation_check, default_frozen, five_point_density, grid_flux, periodic_part_flux,
    predicted_slice, slice_chern_number, sphere_ratio_check, torus_grid_field, ChartIntegrals,
    ConjugationPoint, ConjugationReport, DensityPoint, FluxEstimate, RatioPoint, SliceChernResult, SliceSpec,
    Surface, TorusGrid,
};

#[cfg(test)]
mod tests;
