use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coloring::Coloring;
use crate::error::Result;
use crate::grid::{flat_index, strides, Grid};

/// Outcome of the resampling colorer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResampleOutcome {
    pub success: bool,
    pub resamples: u64,
    /// The final coloring: box-free when `success`.
    #[serde(skip)]
    pub coloring: Coloring,
}

/// Uniform random coloring from a seeded generator, then repeatedly
/// recolor the corners of the first monochromatic box (in [`boxes`] order)
/// until none is left or `max_resamples` recolorings have been spent.
pub fn moser_tardos_color(c: usize, grid: &Grid, seed: u64, max_resamples: u64) -> Result<ResampleOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = grid.shape()?;
    let volume: usize = shape.iter().product();
    let colors = c.max(1);
    let cells: Vec<u32> = (0..volume).map(|_| rng.gen_range(0..colors as u32)).collect();
    let mut coloring = Coloring::new(grid.clone(), colors, cells)?;
    let st = strides(&shape);
    let mut resamples = 0;
    loop {
        let Some(b) = coloring.first_monochromatic_box() else {
            return Ok(ResampleOutcome {
                success: true,
                resamples,
                coloring,
            });
        };
        if resamples >= max_resamples {
            return Ok(ResampleOutcome {
                success: false,
                resamples,
                coloring,
            });
        }
        for corner in b.corners() {
            coloring.set_flat(flat_index(&st, &corner), rng.gen_range(0..colors as u32));
        }
        resamples += 1;
    }
}
