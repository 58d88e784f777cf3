//! Random walks on Grigorchuk groups and their actions on the boundary of the binary tree.

pub mod algebra;
pub mod boundary;
pub mod centered;
pub mod error;
pub mod grig;
pub mod measures;
pub mod renorm;
pub mod subst;
pub mod walk;
pub mod wreath;
mod periodic;

pub use algebra::{Element, GroupTuple};
pub use boundary::{LineOrbit, Point, ProductPoint, Ray, SchreierGraph};
pub use error::{Error, Result};
pub use grig::{Gen, GenWord, GroupElement, GroupSpec, OmegaSequence, PortraitKey, Section};
