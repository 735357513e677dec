//! RGB rasters over a window of the plane, written as binary PPM.

use std::io::Write;
use std::path::Path;

use semijulia_core::single::escape_time;
use semijulia_core::{Complex64, Polynomial, SpherePoint};

use crate::config::Window;
use crate::error::{CliError, CliResult};

pub const MARK: [u8; 3] = [255, 255, 255];
pub const BACKGROUND: [u8; 3] = [0, 0, 0];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    width: u32,
    height: u32,
    rgb: Vec<u8>,
}

impl Raster {
    pub fn new(width: u32, height: u32) -> Self {
        let mut rgb = Vec::with_capacity(width as usize * height as usize * 3);
        for _ in 0..width as usize * height as usize {
            rgb.extend_from_slice(&BACKGROUND);
        }
        Raster { width, height, rgb }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    #[cfg(test)]
    pub fn pixel(&self, col: u32, row: u32) -> [u8; 3] {
        let i = 3 * (row as usize * self.width as usize + col as usize);
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }

    pub fn set(&mut self, col: u32, row: u32, color: [u8; 3]) {
        let i = 3 * (row as usize * self.width as usize + col as usize);
        self.rgb[i..i + 3].copy_from_slice(&color);
    }

    /// Pixel containing `z`; row 0 is the top edge `im = im1`.
    pub fn locate(&self, window: &Window, z: Complex64) -> Option<(u32, u32)> {
        let x = (z.re - window.re0) / (window.re1 - window.re0) * f64::from(self.width);
        let y = (window.im1 - z.im) / (window.im1 - window.im0) * f64::from(self.height);
        if x >= 0.0 && y >= 0.0 && x < f64::from(self.width) && y < f64::from(self.height) {
            Some((x as u32, y as u32))
        } else {
            None
        }
    }

    /// Centre of a pixel.
    pub fn center(&self, window: &Window, col: u32, row: u32) -> Complex64 {
        Complex64::new(
            window.re0 + (f64::from(col) + 0.5) / f64::from(self.width) * (window.re1 - window.re0),
            window.im1 - (f64::from(row) + 0.5) / f64::from(self.height) * (window.im1 - window.im0),
        )
    }

    /// Marks every finite point inside the window; returns how many landed.
    pub fn plot_points<'a>(&mut self, window: &Window, points: impl IntoIterator<Item = &'a SpherePoint>) -> usize {
        let mut plotted = 0;
        for z in points.into_iter().filter_map(|p| p.finite()) {
            if let Some((c, r)) = self.locate(window, z) {
                self.set(c, r, MARK);
                plotted += 1;
            }
        }
        plotted
    }

    pub fn marked_pixels(&self) -> usize {
        self.rgb.chunks_exact(3).filter(|px| *px != BACKGROUND).count()
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.rgb);
        out
    }

    pub fn write_ppm(&self, path: &Path) -> CliResult<()> {
        let mut file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        file.write_all(&self.to_ppm()).map_err(|e| CliError::io(path, e))
    }
}

/// Escape-time picture: points that stay bounded are black, escaping points
/// get brighter the faster they escape.
pub fn escape_raster(p: &Polynomial, window: &Window, width: u32, height: u32, max_iter: usize) -> Raster {
    let mut raster = Raster::new(width, height);
    let top = (max_iter.max(1) as f64).ln_1p();
    for row in 0..height {
        for col in 0..width {
            let z = SpherePoint::new(raster.center(window, col, row));
            if let Some(n) = escape_time(p, z, max_iter) {
                let level = 255.0 * (1.0 - (n as f64).ln_1p() / top);
                let v = level.round().clamp(32.0, 255.0) as u8;
                raster.set(col, row, [v, v, v]);
            }
        }
    }
    raster
}
