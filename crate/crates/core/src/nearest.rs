//! Nearest-neighbour queries in the chordal metric.
//!
//! Points are embedded as unit vectors in R^3, where the chordal distance is
//! the Euclidean one, and bucketed in a uniform hash grid.

use std::collections::HashMap;

use crate::sphere::{vector_dist, SpherePoint};

type Key = (i32, i32, i32);

/// Static index over a set of sphere points.
pub struct ChordalIndex {
    vectors: Vec<[f64; 3]>,
    cell: f64,
    buckets: HashMap<Key, Vec<u32>>,
}

impl ChordalIndex {
    /// Builds an index with a cell size matched to the point count.
    pub fn new(points: &[SpherePoint]) -> Self {
        let n = points.len().max(1) as f64;
        let cell = (2.0 * (4.0 * std::f64::consts::PI / n).sqrt()).clamp(1e-4, 2.0);
        Self::with_cell(points, cell)
    }

    pub fn with_cell(points: &[SpherePoint], cell: f64) -> Self {
        assert!(cell > 0.0 && points.len() < u32::MAX as usize);
        let vectors: Vec<[f64; 3]> = points.iter().map(SpherePoint::to_unit_vector).collect();
        let mut buckets: HashMap<Key, Vec<u32>> = HashMap::new();
        for (i, v) in vectors.iter().enumerate() {
            buckets.entry(key(v, cell)).or_default().push(i as u32);
        }
        ChordalIndex { vectors, cell, buckets }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Index and distance of the closest stored point.
    pub fn nearest(&self, q: SpherePoint) -> Option<(usize, f64)> {
        self.search(&q.to_unit_vector(), None)
    }

    /// Closest stored point other than the one at `skip`.
    pub fn nearest_other(&self, skip: usize) -> Option<(usize, f64)> {
        self.search(&self.vectors[skip], Some(skip))
    }

    fn search(&self, v: &[f64; 3], skip: Option<usize>) -> Option<(usize, f64)> {
        if self.vectors.len() <= usize::from(skip.is_some()) {
            return None;
        }
        let (cx, cy, cz) = key(v, self.cell);
        let max_ring = (2.0 / self.cell).ceil() as i32 + 1;
        let mut best: Option<(usize, f64)> = None;
        for ring in 0..=max_ring {
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    for dz in -ring..=ring {
                        if dx.abs().max(dy.abs()).max(dz.abs()) != ring {
                            continue;
                        }
                        let Some(bucket) = self.buckets.get(&(cx + dx, cy + dy, cz + dz)) else {
                            continue;
                        };
                        for &i in bucket {
                            let i = i as usize;
                            if Some(i) == skip {
                                continue;
                            }
                            let d = vector_dist(v, &self.vectors[i]);
                            if best.is_none_or(|(_, b)| d < b) {
                                best = Some((i, d));
                            }
                        }
                    }
                }
            }
            // everything outside the searched block is farther than ring * cell
            if let Some((_, b)) = best {
                if b <= ring as f64 * self.cell {
                    break;
                }
            }
        }
        best
    }
}

fn key(v: &[f64; 3], cell: f64) -> Key {
    (
        (v[0] / cell).floor() as i32,
        (v[1] / cell).floor() as i32,
        (v[2] / cell).floor() as i32,
    )
}

/// The points with exact duplicates removed, keeping first occurrences.
pub fn dedup_points(points: &[SpherePoint]) -> Vec<SpherePoint> {
    let mut seen = std::collections::HashSet::new();
    points
        .iter()
        .copied()
        .filter(|p| {
            let k = match p {
                SpherePoint::Infinity => (u64::MAX, u64::MAX),
                SpherePoint::Finite(z) => ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits()),
            };
            seen.insert(k)
        })
        .collect()
}

/// `sup_{a in from} dist(a, to)`, or `None` if either set is empty.
pub fn directed_hausdorff(from: &[SpherePoint], to: &ChordalIndex) -> Option<f64> {
    if to.is_empty() || from.is_empty() {
        return None;
    }
    Some(
        from.iter()
            .map(|&a| to.nearest(a).map_or(f64::INFINITY, |(_, d)| d))
            .fold(0.0, f64::max),
    )
}

/// Symmetric Hausdorff distance between two finite clouds.
pub fn hausdorff(a: &[SpherePoint], b: &[SpherePoint]) -> Option<f64> {
    let ia = ChordalIndex::new(a);
    let ib = ChordalIndex::new(b);
    Some(directed_hausdorff(a, &ib)?.max(directed_hausdorff(b, &ia)?))
}

/// Largest distance from a point to its nearest distinct neighbour.
///
/// Small values mean the cloud has no isolated points at that scale.
pub fn isolation_radius(points: &[SpherePoint]) -> Option<f64> {
    let distinct = dedup_points(points);
    let index = ChordalIndex::new(&distinct);
    if distinct.len() < 2 {
        return None;
    }
    Some(
        (0..distinct.len())
            .map(|i| index.nearest_other(i).map_or(0.0, |(_, d)| d))
            .fold(0.0, f64::max),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::chordal_dist;
    use proptest::prelude::*;

    fn brute_nearest(points: &[SpherePoint], q: SpherePoint) -> f64 {
        points
            .iter()
            .map(|&p| chordal_dist(p, q))
            .fold(f64::INFINITY, f64::min)
    }

    fn arb_point() -> impl Strategy<Value = SpherePoint> {
        prop_oneof![
            9 => (-4.0f64..4.0, -4.0f64..4.0).prop_map(|(a, b)| SpherePoint::from_re_im(a, b)),
            1 => Just(SpherePoint::Infinity),
        ]
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            points in prop::collection::vec(arb_point(), 1..200),
            queries in prop::collection::vec(arb_point(), 1..20),
            cell in 0.01f64..1.5,
        ) {
            let index = ChordalIndex::with_cell(&points, cell);
            for q in queries {
                let (i, d) = index.nearest(q).unwrap();
                prop_assert!((d - brute_nearest(&points, q)).abs() < 1e-12);
                prop_assert!((chordal_dist(points[i], q) - d).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn duplicates_and_isolation() {
        let circle: Vec<SpherePoint> = (0..360)
            .map(|j| {
                let t = j as f64 * std::f64::consts::TAU / 360.0;
                SpherePoint::from_re_im(t.cos(), t.sin())
            })
            .collect();
        let mut doubled = circle.clone();
        doubled.extend_from_slice(&circle);
        assert_eq!(dedup_points(&doubled).len(), 360);
        let r = isolation_radius(&doubled).unwrap();
        assert!((r - 2.0 * (std::f64::consts::PI / 360.0).sin()).abs() < 1e-9);
        let mut with_outlier = circle.clone();
        with_outlier.push(SpherePoint::Infinity);
        assert!(isolation_radius(&with_outlier).unwrap() > 1.0);
    }

    #[test]
    fn hausdorff_of_concentric_circles() {
        let circle = |r: f64| -> Vec<SpherePoint> {
            (0..500)
                .map(|j| {
                    let t = j as f64 * std::f64::consts::TAU / 500.0;
                    SpherePoint::from_re_im(r * t.cos(), r * t.sin())
                })
                .collect()
        };
        let h = hausdorff(&circle(1.0), &circle(3.0)).unwrap();
        let exact = chordal_dist(SpherePoint::from_re_im(1.0, 0.0), SpherePoint::from_re_im(3.0, 0.0));
        assert!((h - exact).abs() < 1e-12);
        assert_eq!(hausdorff(&circle(2.0), &circle(2.0)), Some(0.0));
        assert_eq!(hausdorff(&[], &circle(2.0)), None);
    }
}
