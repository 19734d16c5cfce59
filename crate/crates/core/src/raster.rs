//! Escape-time fields over rectangular windows, with PPM and CSV output.

use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::function::FunctionExpr;
use crate::orbit::{classify, EscapeConfig, OrbitError, Verdict, Window};

pub const DEFAULT_PIXEL_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("{pixels} pixels exceed the budget of {budget}")]
    PixelBudgetExceeded { pixels: u64, budget: u64 },
    #[error(transparent)]
    Config(#[from] OrbitError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub window: Window,
    pub width: usize,
    pub height: usize,
}

impl GridSpec {
    pub fn new(window: Window, width: usize, height: usize) -> Self {
        GridSpec { window, width, height }
    }

    pub fn validate(&self, budget: u64) -> Result<(), RasterError> {
        if !self.window.is_valid() {
            return Err(RasterError::InvalidGrid("window must satisfy re_min < re_max and im_min < im_max".into()));
        }
        if self.width == 0 || self.height == 0 {
            return Err(RasterError::InvalidGrid("width and height must be positive".into()));
        }
        let pixels = (self.width as u64).saturating_mul(self.height as u64);
        if pixels > budget {
            return Err(RasterError::PixelBudgetExceeded { pixels, budget });
        }
        Ok(())
    }

    /// Center of pixel `(px, py)`; row 0 is the top (`im_max`) edge.
    pub fn pixel_center(&self, px: usize, py: usize) -> Complex64 {
        let w = &self.window;
        let dx = (w.re_max - w.re_min) / self.width as f64;
        let dy = (w.im_max - w.im_min) / self.height as f64;
        Complex64::new(w.re_min + (px as f64 + 0.5) * dx, w.im_max - (py as f64 + 0.5) * dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub verdict: Verdict,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeField {
    pub grid: GridSpec,
    /// Row-major, top row first.
    pub cells: Vec<Cell>,
    pub cfg: EscapeConfig,
}

impl EscapeField {
    pub fn count(&self, verdict: Verdict) -> usize {
        self.cells.iter().filter(|c| c.verdict == verdict).count()
    }

    /// RGB color of a cell.
    pub fn color(&self, cell: Cell) -> [u8; 3] {
        match cell.verdict {
            Verdict::Bounded => [0, 0, 0],
            Verdict::Undecided => [128, 0, 0],
            Verdict::Escaping => {
                let max = self.cfg.max_iter;
                let v = (255 * cell.step.min(max) / max) as u8;
                [v, v, v]
            }
        }
    }

    pub fn ppm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.grid.width, self.grid.height).into_bytes();
        out.reserve(self.cells.len() * 3);
        for &cell in &self.cells {
            out.extend_from_slice(&self.color(cell));
        }
        out
    }

    /// Writes a binary PPM (P6).
    pub fn write_ppm(&self, path: impl AsRef<Path>) -> Result<(), RasterError> {
        let mut file = io::BufWriter::new(std::fs::File::create(path)?);
        file.write_all(&self.ppm_bytes())?;
        file.flush()?;
        Ok(())
    }

    /// Writes `px,py,verdict,step` rows.
    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "px,py,verdict,step")?;
        for (idx, cell) in self.cells.iter().enumerate() {
            writeln!(out, "{},{},{},{}", idx % self.grid.width, idx / self.grid.width, cell.verdict, cell.step)?;
        }
        Ok(())
    }
}

/// Classifies every pixel center on the current rayon pool.
///
/// Rows are computed in parallel into their own slots, so the field does not
/// depend on the number of workers.
pub fn rasterize(f: &FunctionExpr, grid: &GridSpec, cfg: &EscapeConfig) -> Result<EscapeField, RasterError> {
    rasterize_with_budget(f, grid, cfg, DEFAULT_PIXEL_BUDGET)
}

pub fn rasterize_with_budget(
    f: &FunctionExpr,
    grid: &GridSpec,
    cfg: &EscapeConfig,
    budget: u64,
) -> Result<EscapeField, RasterError> {
    grid.validate(budget)?;
    cfg.validate()?;
    let blank = Cell { verdict: Verdict::Undecided, step: 0 };
    let mut cells = vec![blank; grid.width * grid.height];
    cells.par_chunks_mut(grid.width).enumerate().for_each(|(py, row)| {
        for (px, slot) in row.iter_mut().enumerate() {
            let c = classify(f, grid.pixel_center(px, py), cfg);
            *slot = Cell { verdict: c.verdict, step: c.step };
        }
    });
    Ok(EscapeField { grid: *grid, cells, cfg: *cfg })
}
