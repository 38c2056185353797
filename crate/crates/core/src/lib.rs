//! Fourier uncertainty machinery on model spaces with closed-form eigenbases.

pub mod concentration;
mod descriptor;
pub mod error;
pub mod model_spaces;
pub mod output;
pub mod random_spectra;
pub mod regions;
pub mod report;
pub mod rng;
pub mod spectral;
pub mod uncertainty;

pub use error::{Error, Result};
pub use model_spaces::{BasisElement, Label, ModelSpace, Point, Quadrature};
