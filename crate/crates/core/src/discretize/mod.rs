//! Finite-difference assembly of the 1D mode operators and the 2D guide operator.

mod export;
mod grid;
mod guide;
mod mode;
mod tridiag;

pub use export::{parse_triplets, triplet_text, Triplet, TripletSource};
pub use grid::Grid1D;
pub use guide::{assemble_guide_operator, BandedOperator2D, GuideGrid, Sector, WallCondition};
pub use mode::{
    assemble_deformed_mode_operator, assemble_deformed_potential_operator,
    assemble_mode_operator, assemble_potential_operator, conjugate_operator,
};
pub use tridiag::{ComplexTridiagonalOperator, TridiagonalOperator};
