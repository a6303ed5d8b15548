//! Circular laminations, origami maps, matings, Lattès subdivision engines
//! and lightning curves of Kleinian groups.

pub mod analysis;
pub mod angle;
pub mod error;
pub mod geom;
pub mod kleinian;
pub mod lamination;
pub mod lattes;
pub mod mating;
pub mod origami;
pub mod poly;
pub mod render;

pub use angle::{Angle, Q};
pub use lamination::{FiniteLamination, GapClass, Leaf};
