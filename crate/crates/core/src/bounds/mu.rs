//! The sequence `mu_j(c)` and colorings with exactly one monochromatic box.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bounds::hereditary::{compose_guarantee, pigeonhole_certificate, virtual_color_count};
use crate::cert::{Certificate, Method};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::grid::{boxes, choose2, flat_index, strides, unflatten, Grid, GridBox};

/// Largest coloring `minimal_coloring` will materialize.
pub const MAX_MINIMAL_CELLS: usize = 1 << 24;

/// `mu_1 = 1 + c`, `mu_{j+1} = 1 + c prod_{i<=j} C(mu_i, 2)`.
pub fn mu_sequence(c: impl Into<BigUint>, d: usize) -> Result<Vec<BigUint>> {
    let c = c.into();
    if c < BigUint::from(2u32) || d == 0 {
        return Err(Error::OutOfRange(format!("need c >= 2 and d >= 1, got c = {c}, d = {d}")));
    }
    let mut out = Vec::with_capacity(d);
    let mut virtual_colors = c.clone();
    for _ in 0..d {
        let mu = &virtual_colors + 1u32;
        virtual_colors *= choose2(&mu);
        out.push(mu);
    }
    Ok(out)
}

/// `mu_j >= 1 + 2^((1 - 3^(j-1))/2) c^(3^(j-1))`, checked as
/// `(mu_j - 1) 2^((3^(j-1) - 1)/2) >= c^(3^(j-1))` in integers.
pub fn mu_lower_bound_holds(c: impl Into<BigUint>, j: usize) -> Result<bool> {
    let c = c.into();
    if j == 0 {
        return Err(Error::OutOfRange("j starts at 1".into()));
    }
    let mu = mu_sequence(c.clone(), j)?.pop().expect("j >= 1");
    let k = 3usize.pow((j - 1) as u32);
    let lhs = (mu - 1u32) << ((k - 1) / 2);
    Ok(lhs >= num_traits::pow(c, k))
}

pub fn mu_grid(c: impl Into<BigUint>, d: usize) -> Result<Grid> {
    Grid::new(mu_sequence(c, d)?)
}

/// A coloring of `[mu_1, ..., mu_d]` that is monochromatic on exactly one box.
#[derive(Clone, Debug)]
pub struct MinimalColoring {
    pub coloring: Coloring,
    /// The unique monochromatic box.
    pub mono_box: GridBox,
    pub mono_color: u32,
}

/// Builds the minimal coloring layer by layer.
///
/// Dimension 1 is `i -> i mod c`, whose only monochromatic pair is `{0, c}`.
/// Dimension `j + 1` stacks one relabelled copy of the `j`-dimensional minimal
/// coloring for every (box, color) pair, boxes in lexicographic order of their
/// hyperplane pairs and colors ascending, then repeats the first layer at the end.
pub fn minimal_coloring(c: usize, d: usize) -> Result<MinimalColoring> {
    let mus = mu_sequence(c as u64, d)?;
    let mut volume: usize = 1;
    for mu in &mus {
        volume = mu
            .to_usize()
            .and_then(|m| volume.checked_mul(m))
            .filter(|&v| v <= MAX_MINIMAL_CELLS)
            .ok_or_else(|| {
                Error::TooLarge(format!("minimal coloring for c = {c}, d = {d} has too many cells"))
            })?;
    }
    let base_grid = Grid::new(vec![mus[0].clone()])?;
    let base = Coloring::from_fn(base_grid, c, |p| (p[0] % c) as u32)?;
    let mut current = MinimalColoring {
        coloring: base,
        mono_box: GridBox::from_pairs(&[(0, c)]),
        mono_color: 0,
    };
    for mu in &mus[1..] {
        current = extend(&current, mu.to_usize().expect("checked above"))?;
    }
    Ok(current)
}

fn extend(prev: &MinimalColoring, layers_total: usize) -> Result<MinimalColoring> {
    let c = prev.coloring.colors();
    let shape = prev.coloring.shape().to_vec();
    let prev_strides = strides(&shape);
    let volume: usize = shape.iter().product();
    let mono_pairs = prev.mono_box.pairs();
    let mut layers: Vec<Vec<u32>> = Vec::with_capacity(layers_total);
    let mut first_box: Option<GridBox> = None;
    for b in boxes(&shape) {
        let target = b.pairs();
        // Per axis: inverse of the permutation sending the old pair to the new one.
        let inverse: Vec<Vec<usize>> = shape
            .iter()
            .zip(&mono_pairs)
            .zip(&target)
            .map(|((&a, &from), &to)| pair_permutation_inverse(a, from, to))
            .collect();
        for s in 0..c as u32 {
            let shift = (s + c as u32 - prev.mono_color) % c as u32;
            let layer: Vec<u32> = (0..volume)
                .map(|i| {
                    let x = unflatten(&shape, i);
                    let src: Vec<usize> = x.iter().zip(&inverse).map(|(&xi, inv)| inv[xi]).collect();
                    (prev.coloring.cells()[flat_index(&prev_strides, &src)] + shift) % c as u32
                })
                .collect();
            layers.push(layer);
        }
        if first_box.is_none() {
            first_box = Some(b);
        }
    }
    debug_assert_eq!(layers.len() + 1, layers_total);
    layers.push(layers[0].clone());
    let mut cells = vec![0u32; volume * layers_total];
    for (k, layer) in layers.iter().enumerate() {
        for (i, &color) in layer.iter().enumerate() {
            cells[i * layers_total + k] = color;
        }
    }
    let mut dims = prev.coloring.grid().dims().to_vec();
    dims.push(BigUint::from(layers_total));
    let coloring = Coloring::new(Grid::new(dims)?, c, cells)?;
    let mut pairs = first_box.expect("previous grid has boxes").pairs();
    pairs.push((0, layers_total - 1));
    Ok(MinimalColoring {
        coloring,
        mono_box: GridBox::from_pairs(&pairs),
        mono_color: 0,
    })
}

/// Inverse of the permutation of `0..a` mapping `from.0 -> to.0`, `from.1 -> to.1`
/// and the remaining indices to the remaining targets in increasing order.
fn pair_permutation_inverse(a: usize, from: (usize, usize), to: (usize, usize)) -> Vec<usize> {
    let mut forward = vec![0; a];
    forward[from.0] = to.0;
    forward[from.1] = to.1;
    let rest_src = (0..a).filter(|&i| i != from.0 && i != from.1);
    let rest_dst = (0..a).filter(|&i| i != to.0 && i != to.1);
    for (s, t) in rest_src.zip(rest_dst) {
        forward[s] = t;
    }
    let mut inverse = vec![0; a];
    for (s, &t) in forward.iter().enumerate() {
        inverse[t] = s;
    }
    inverse
}

/// `[mu_1, ..., mu_d]` is `c`-guaranteed: pigeonhole on `[mu_1]`, then one
/// composition per further axis with `c' = mu_j - 1` virtual colors.
pub fn mu_guarantee_certificate(c: u64, d: usize) -> Result<Certificate> {
    let mus = mu_sequence(c, d)?;
    let mut cert = pigeonhole_certificate(c, mus[0].clone()).expect("mu_1 = c + 1 > c");
    for j in 1..d {
        let grid = Grid::new(mus[..=j].to_vec())?;
        let virtual_colors = virtual_color_count(c, &grid, j)?;
        let top = pigeonhole_certificate(virtual_colors, mus[j].clone())
            .expect("mu_j = c' + 1 > c'");
        cert = compose_guarantee(&cert, &top)?;
    }
    Ok(cert)
}

/// `[mu_1, ..., mu_d - 1]` is `c`-colorable: the minimal coloring without its
/// duplicated last layer.
pub fn mu_colorable_certificate(c: usize, d: usize) -> Result<Certificate> {
    let minimal = minimal_coloring(c, d)?;
    let witness = minimal.coloring.remove_last_layer()?;
    Ok(Certificate::colorable(Method::Construction, witness))
}
