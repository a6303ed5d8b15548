//! Exact subdivision engines for the two Lattès examples.

use thiserror::Error;

pub mod curve;
pub mod hubbard;
pub mod origami_curve;
pub mod torus;
pub mod zipper;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LattesError {
    #[error("no continuous lift at segment {index}; sampling too coarse")]
    ContinuityBreak { index: usize },
    #[error("stage choice {0} is not in 0..=3")]
    ChoiceOutOfRange(u8),
    #[error("cell {cell:?} lifts {candidates} halves of the previous stage")]
    AmbiguousCell { cell: (usize, usize), candidates: usize },
}
