//! Monochromatic boxes in colored grids.

pub mod bounds;
pub mod cert;
pub mod coloring;
pub mod error;
pub mod grid;
pub mod pipeline;
pub mod qform;
pub mod search;
pub mod verify;

pub use cert::{Certificate, Method, Verdict};
pub use coloring::Coloring;
pub use error::{Error, Result};
pub use grid::{boxes, Grid, GridBox};
pub use search::SearchBudget;
pub use verify::verify;
