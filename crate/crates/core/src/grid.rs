//! Equal-area cell grid on the Riemann sphere.
//!
//! The sphere is cut into zones of colatitude: a polar cap around infinity
//! (north), an odd number of collars, and a polar cap around zero (south).
//! Each collar is split into equal longitude sectors. Zone boundaries are
//! placed so that every cell has solid angle exactly `4 pi / cell_count`,
//! which makes cell lookup a binary search plus one division.

use std::f64::consts::PI;

use crate::sphere::SpherePoint;

/// Zonal equal-area decomposition of the sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct ZonalScheme {
    cell_count: usize,
    /// Colatitude boundaries, `zones + 1` values from `0` to `pi`.
    boundaries: Vec<f64>,
    cells_in_zone: Vec<usize>,
    first_cell: Vec<usize>,
}

impl ZonalScheme {
    pub fn new(cell_count: usize) -> Self {
        assert!(cell_count > 0, "a sphere grid needs at least one cell");
        let n = cell_count;
        let cells_in_zone: Vec<usize> = match n {
            1 => vec![1],
            2 => vec![1, 1],
            _ => {
                let cell_area = 4.0 * PI / n as f64;
                let cap = 2.0 * (1.0 / (n as f64).sqrt()).asin();
                let ideal_width = cell_area.sqrt();
                let span = PI - 2.0 * cap;
                let mut collars = ((span / ideal_width).round() as usize).max(1);
                if collars.is_multiple_of(2) {
                    // odd collar count puts the equator inside a collar
                    let below = collars - 1;
                    let above = collars + 1;
                    let err = |c: usize| (span / c as f64 - ideal_width).abs();
                    collars = if below >= 1 && err(below) <= err(above) {
                        below
                    } else {
                        above
                    };
                }
                let width = span / collars as f64;
                let mut counts = vec![1usize];
                let mut carried = 0.0;
                let mut assigned = 0usize;
                for i in 0..collars {
                    let top = cap + i as f64 * width;
                    let bottom = top + width;
                    let ideal = 2.0 * PI * (top.cos() - bottom.cos()) / cell_area;
                    let mut cells = (ideal + carried).round().max(1.0) as usize;
                    if i + 1 == collars {
                        cells = (n - 2).saturating_sub(assigned).max(1);
                    }
                    carried += ideal - cells as f64;
                    assigned += cells;
                    counts.push(cells);
                }
                counts.push(1);
                debug_assert_eq!(counts.iter().sum::<usize>(), n);
                counts
            }
        };

        let mut boundaries = Vec::with_capacity(cells_in_zone.len() + 1);
        let mut first_cell = Vec::with_capacity(cells_in_zone.len());
        boundaries.push(0.0);
        let mut cumulative = 0usize;
        for (zone, &cells) in cells_in_zone.iter().enumerate() {
            first_cell.push(cumulative);
            cumulative += cells;
            let boundary = if zone + 1 == cells_in_zone.len() {
                PI
            } else {
                // a cap holding `cumulative` cells has sin^2(theta/2) = cumulative / n
                2.0 * (cumulative as f64 / n as f64).sqrt().asin()
            };
            boundaries.push(boundary);
        }

        ZonalScheme {
            cell_count: n,
            boundaries,
            cells_in_zone,
            first_cell,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    pub fn zone_count(&self) -> usize {
        self.cells_in_zone.len()
    }

    /// Colatitude interval `[top, bottom]` and sector count of a zone.
    pub fn zone(&self, zone: usize) -> (f64, f64, usize) {
        (
            self.boundaries[zone],
            self.boundaries[zone + 1],
            self.cells_in_zone[zone],
        )
    }

    /// Solid angle of the given cell.
    pub fn cell_area(&self, cell: usize) -> f64 {
        let zone = match self.first_cell.binary_search(&cell) {
            Ok(z) => z,
            Err(z) => z - 1,
        };
        let (top, bottom, cells) = self.zone(zone);
        2.0 * PI * (top.cos() - bottom.cos()) / cells as f64
    }

    pub fn cell_of(&self, p: SpherePoint) -> usize {
        self.cell_at(p.colatitude(), p.longitude())
    }

    /// Cell containing the point with the given colatitude and longitude.
    pub fn cell_at(&self, colatitude: f64, longitude: f64) -> usize {
        let last = self.cells_in_zone.len() - 1;
        // first boundary strictly greater than the colatitude, minus one
        let zone = self.boundaries[1..]
            .partition_point(|&b| b <= colatitude)
            .min(last);
        let cells = self.cells_in_zone[zone];
        if cells == 1 {
            return self.first_cell[zone];
        }
        let frac = (longitude + PI) / (2.0 * PI);
        let sector = ((frac * cells as f64) as usize).min(cells - 1);
        self.first_cell[zone] + sector
    }
}

/// Hit counts over a [`ZonalScheme`].
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    scheme: ZonalScheme,
    hits: Vec<u64>,
}

impl SphereGrid {
    pub fn new(cell_count: usize) -> Self {
        let scheme = ZonalScheme::new(cell_count);
        SphereGrid {
            hits: vec![0; scheme.cell_count()],
            scheme,
        }
    }

    /// A grid with no hits on the same scheme.
    pub fn empty_like(&self) -> Self {
        SphereGrid {
            scheme: self.scheme.clone(),
            hits: vec![0; self.hits.len()],
        }
    }

    pub fn scheme(&self) -> &ZonalScheme {
        &self.scheme
    }

    pub fn cell_count(&self) -> usize {
        self.scheme.cell_count()
    }

    pub fn hit_counts(&self) -> &[u64] {
        &self.hits
    }

    pub fn cell_of(&self, p: SpherePoint) -> usize {
        self.scheme.cell_of(p)
    }

    pub fn record(&mut self, p: SpherePoint) {
        let cell = self.scheme.cell_of(p);
        self.hits[cell] += 1;
    }

    pub fn record_all<'a, I>(&mut self, points: I)
    where
        I: IntoIterator<Item = &'a SpherePoint>,
    {
        for p in points {
            self.record(*p);
        }
    }

    /// Adds the hits of another grid over the same scheme.
    pub fn merge(&mut self, other: &SphereGrid) {
        assert_eq!(
            self.scheme.cell_count(),
            other.scheme.cell_count(),
            "cannot merge grids over different schemes"
        );
        for (a, b) in self.hits.iter_mut().zip(&other.hits) {
            *a += b;
        }
    }

    pub fn covered_cells(&self) -> usize {
        self.hits.iter().filter(|&&h| h > 0).count()
    }

    pub fn coverage_fraction(&self) -> f64 {
        self.covered_cells() as f64 / self.cell_count() as f64
    }
}
