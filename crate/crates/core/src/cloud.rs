//! Finite point clouds standing in for Julia sets and invariant sets.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sphere::SpherePoint;

/// Which set a cloud approximates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CloudKind {
    SingleJulia,
    SemigroupJulia,
    InvariantE,
}

impl CloudKind {
    pub fn name(&self) -> &'static str {
        match self {
            CloudKind::SingleJulia => "single-julia",
            CloudKind::SemigroupJulia => "semigroup-julia",
            CloudKind::InvariantE => "invariant-E",
        }
    }

    fn tag(&self) -> u64 {
        match self {
            CloudKind::SingleJulia => 1,
            CloudKind::SemigroupJulia => 2,
            CloudKind::InvariantE => 3,
        }
    }
}

/// A point cloud with the parameters that reproduce it.
#[derive(Clone, Debug, PartialEq)]
pub struct SetApprox {
    pub points: Vec<SpherePoint>,
    pub depth: usize,
    pub budget: usize,
    pub seed: u64,
    pub kind: CloudKind,
}

impl SetApprox {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn infinite_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_infinite()).count()
    }

    pub fn finite_points(&self) -> impl Iterator<Item = num_complex::Complex64> + '_ {
        self.points.iter().filter_map(|p| p.finite())
    }

    /// Smallest and largest modulus over finite points.
    pub fn modulus_range(&self) -> Option<(f64, f64)> {
        self.finite_points().map(|z| z.norm()).fold(None, |acc, m| match acc {
            None => Some((m, m)),
            Some((lo, hi)) => Some((lo.min(m), hi.max(m))),
        })
    }
}

/// SplitMix64 finalizer.
#[inline]
pub(crate) fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of an independent stream identified by `seed` and a path of tags.
pub(crate) fn stream_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(mix64(seed), |acc, &t| mix64(acc ^ mix64(t)))
}

pub(crate) fn stream_rng(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, tags))
}

pub(crate) fn kind_tag(kind: CloudKind) -> u64 {
    kind.tag()
}

/// Uniform random thinning to at most `budget` points; order is preserved.
pub(crate) fn decimate(points: Vec<SpherePoint>, budget: usize, rng: &mut ChaCha8Rng) -> Vec<SpherePoint> {
    if points.len() <= budget {
        return points;
    }
    decimate_copy(&points, budget, rng)
}

/// As [`decimate`], leaving the input in place.
pub(crate) fn decimate_copy(points: &[SpherePoint], budget: usize, rng: &mut ChaCha8Rng) -> Vec<SpherePoint> {
    if points.len() <= budget {
        return points.to_vec();
    }
    let mut keep = vec![false; points.len()];
    for i in index::sample(rng, points.len(), budget) {
        keep[i] = true;
    }
    points
        .iter()
        .zip(keep)
        .filter_map(|(&p, k)| k.then_some(p))
        .collect()
}

/// Uniform sample of fixed capacity over a stream of points.
pub(crate) struct Reservoir {
    items: Vec<SpherePoint>,
    capacity: usize,
    seen: u64,
    rng: ChaCha8Rng,
}

impl Reservoir {
    pub(crate) fn new(capacity: usize, rng: ChaCha8Rng) -> Self {
        Reservoir {
            items: Vec::with_capacity(capacity.min(1 << 20)),
            capacity,
            seen: 0,
            rng,
        }
    }

    pub(crate) fn extend(&mut self, points: &[SpherePoint]) {
        for &p in points {
            self.seen += 1;
            if self.items.len() < self.capacity {
                self.items.push(p);
            } else {
                let j = self.rng.gen_range(0..self.seen);
                if (j as usize) < self.capacity {
                    self.items[j as usize] = p;
                }
            }
        }
    }

    pub(crate) fn into_points(self) -> Vec<SpherePoint> {
        self.items
    }
}
