//! WebAssembly bindings for the page in `www/`.
//!
//! Each export returns a JSON string; errors come back as thrown strings.

use gridramsey::bounds::{
    delta_sequence, epsilon_sequence, gamma_sequence, guaranteed_count_lower_bound,
    minimal_coloring,
};
use gridramsey::search::moser_tardos_color;
use gridramsey::{Coloring, Grid};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest number of cells the page will draw.
pub const MAX_CELLS: usize = 20_000;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn drawable(col: &Coloring) -> Value {
    json!({"shape": col.shape(), "colors": col.colors(), "cells": col.cells()})
}

fn check_size(grid: &Grid) -> Result<(), String> {
    let shape = grid.shape().map_err(err)?;
    if shape.len() > 2 {
        return Err(format!("{grid}: only one- and two-dimensional grids are drawn"));
    }
    if shape.iter().product::<usize>() > MAX_CELLS {
        return Err(format!("{grid} has more than {MAX_CELLS} cells"));
    }
    Ok(())
}

/// Coloring of `[mu_1, ..., mu_d]` with a single monochromatic box.
#[wasm_bindgen]
pub fn minimal_coloring_json(c: u32, d: u32) -> Result<String, String> {
    if !(1..=2).contains(&d) {
        return Err("the page draws d = 1 or d = 2".into());
    }
    let m = minimal_coloring(c as usize, d as usize).map_err(err)?;
    check_size(m.coloring.grid())?;
    let mut value = drawable(&m.coloring);
    value["grid"] = json!(m.coloring.grid().to_string());
    value["mono_box"] = json!(m.mono_box.pairs());
    value["mono_color"] = json!(m.mono_color);
    value["mono_count"] = json!(m.coloring.count_monochromatic_boxes().to_string());
    Ok(value.to_string())
}

/// Random `rows x cols` coloring repaired by resampling monochromatic rectangles.
#[wasm_bindgen]
pub fn resample_json(c: u32, rows: u32, cols: u32, seed: u32, max_resamples: u32) -> Result<String, String> {
    let grid = Grid::from_sides(&[rows.into(), cols.into()]).map_err(err)?;
    check_size(&grid)?;
    let out = moser_tardos_color(c as usize, &grid, seed.into(), max_resamples.into()).map_err(err)?;
    let mut value = drawable(&out.coloring);
    value["success"] = json!(out.success);
    value["resamples"] = json!(out.resamples);
    value["mono_boxes"] = json!(out
        .coloring
        .monochromatic_boxes()
        .iter()
        .take(50)
        .map(|b| b.pairs())
        .collect::<Vec<_>>());
    Ok(value.to_string())
}

/// The three recurrences and the guaranteed count for a grid such as `13x13x13`.
#[wasm_bindgen]
pub fn bounds_json(c: u32, grid: &str) -> Result<String, String> {
    let grid: Grid = grid.parse().map_err(err)?;
    let mut value = json!({"grid": grid.to_string(), "c": c});
    for (name, seq) in [
        ("delta", delta_sequence(c, &grid)),
        ("gamma", gamma_sequence(c, &grid)),
        ("epsilon", epsilon_sequence(c, &grid)),
    ] {
        let seq = seq.map_err(err)?;
        value[name] = json!({"terms": seq.terms_as_strings(), "guaranteed": seq.certifies_guarantee()});
    }
    let count = guaranteed_count_lower_bound(c, &grid, true).map_err(err)?;
    value["count"] = json!(count.map(|t| t.to_integer().to_string()));
    Ok(value.to_string())
}
