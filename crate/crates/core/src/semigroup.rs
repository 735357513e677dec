//! Word orbits of a finitely generated polynomial semigroup.
//!
//! Backward-only walks approximate the semigroup Julia set; walks using both
//! directions approximate the smallest closed completely invariant set `E`.

use rayon::prelude::*;

use crate::cloud::{decimate, decimate_copy, kind_tag, mix64, stream_rng, stream_seed, CloudKind, Reservoir, SetApprox};
use crate::error::{Error, Result};
use crate::grid::SphereGrid;
use crate::nearest::{dedup_points, directed_hausdorff, isolation_radius, ChordalIndex};
use crate::poly::Polynomial;
use crate::single::{depth_for_count, green_value, julia_cloud_single, DEFAULT_GREEN_ITERATIONS};
use crate::sphere::SpherePoint;

const TAG_GENERATOR: u64 = 0x0067_656e;
const TAG_ROUND: u64 = 0x0072_6f75_6e64;
const TAG_LETTER: u64 = 0x6c65_7474_6572;
const TAG_MERGE: u64 = 0x006d_6572_6765;
const TAG_COMPARE: u64 = 0x0063_6d70;
const CHUNK: usize = 4096;

/// Generators of a semigroup under composition.
#[derive(Clone, Debug, PartialEq)]
pub struct SemigroupSpec {
    generators: Vec<Polynomial>,
}

impl SemigroupSpec {
    pub fn new(generators: Vec<Polynomial>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidParameter("a semigroup needs at least one generator".into()));
        }
        for g in &generators {
            g.require_generator()?;
        }
        Ok(SemigroupSpec { generators })
    }

    pub fn parse(exprs: &[&str]) -> Result<Self> {
        Self::new(exprs.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub direction: Direction,
}

impl Letter {
    pub fn forward(generator: usize) -> Self {
        Letter {
            generator,
            direction: Direction::Forward,
        }
    }

    pub fn backward(generator: usize) -> Self {
        Letter {
            generator,
            direction: Direction::Backward,
        }
    }
}

/// Letters listed in the order they are applied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignedWord(pub Vec<Letter>);

impl SignedWord {
    pub fn validate(&self, spec: &SemigroupSpec) -> Result<()> {
        match self.0.iter().find(|l| l.generator >= spec.len()) {
            Some(l) => Err(Error::InvalidParameter(format!(
                "generator index {} out of range for {} generators",
                l.generator,
                spec.len()
            ))),
            None => Ok(()),
        }
    }
}

/// Reverses the letter order and flips every direction.
pub fn reverse_word(word: &SignedWord) -> SignedWord {
    SignedWord(
        word.0
            .iter()
            .rev()
            .map(|l| Letter {
                generator: l.generator,
                direction: l.direction.flip(),
            })
            .collect(),
    )
}

fn apply_to_point(p: &Polynomial, direction: Direction, x: SpherePoint, out: &mut Vec<SpherePoint>) -> Result<()> {
    match direction {
        Direction::Forward => out.push(p.eval(x)),
        Direction::Backward => {
            p.preimages_into(x, out)?;
        }
    }
    Ok(())
}

/// Image or full preimage of a cloud, thinned back to its budget.
pub fn apply_letter(cloud: &SetApprox, p: &Polynomial, direction: Direction) -> Result<SetApprox> {
    let mut out = Vec::with_capacity(cloud.len() * p.degree());
    for &x in &cloud.points {
        apply_to_point(p, direction, x, &mut out)?;
    }
    let mut rng = stream_rng(cloud.seed, &[kind_tag(cloud.kind), TAG_LETTER, cloud.depth as u64]);
    Ok(SetApprox {
        points: decimate(out, cloud.budget, &mut rng),
        depth: cloud.depth + 1,
        ..*cloud
    })
}

pub fn apply_word(cloud: &SetApprox, spec: &SemigroupSpec, word: &SignedWord) -> Result<SetApprox> {
    word.validate(spec)?;
    word.0.iter().try_fold(cloud.clone(), |c, l| {
        apply_letter(&c, &spec.generators[l.generator], l.direction)
    })
}

/// Parameters of a word walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    pub depth: usize,
    pub budget: usize,
    pub seed: u64,
    /// Points in each generator's seed cloud; defaults to an equal share of
    /// the budget.
    pub seed_budget: Option<usize>,
}

impl WalkConfig {
    pub fn new(depth: usize, budget: usize, seed: u64) -> Self {
        WalkConfig {
            depth,
            budget,
            seed,
            seed_budget: None,
        }
    }

    fn check(&self) -> Result<()> {
        if self.budget == 0 || self.seed_budget == Some(0) {
            return Err(Error::InvalidParameter("budget must be positive".into()));
        }
        Ok(())
    }
}

/// Union of the Julia clouds of the generators.
pub fn generator_clouds(spec: &SemigroupSpec, per_generator: usize, seed: u64) -> Result<Vec<SpherePoint>> {
    let mut out = Vec::new();
    for (i, g) in spec.generators.iter().enumerate() {
        let depth = depth_for_count(g, per_generator) + 2;
        let cloud = julia_cloud_single(g, depth, per_generator, stream_seed(seed, &[TAG_GENERATOR, i as u64]))?;
        out.extend(cloud.points);
    }
    Ok(out)
}

struct Walker<'a> {
    spec: &'a SemigroupSpec,
    letters: Vec<Letter>,
    fan_out: usize,
    config: WalkConfig,
    kind: CloudKind,
}

impl<'a> Walker<'a> {
    fn new(spec: &'a SemigroupSpec, config: WalkConfig, kind: CloudKind) -> Result<Self> {
        config.check()?;
        let mut letters: Vec<Letter> = (0..spec.len()).map(Letter::backward).collect();
        if kind == CloudKind::InvariantE {
            letters.extend((0..spec.len()).map(Letter::forward));
        }
        let fan_out = letters
            .iter()
            .map(|l| match l.direction {
                Direction::Forward => 1,
                Direction::Backward => spec.generators[l.generator].degree(),
            })
            .sum();
        Ok(Walker {
            spec,
            letters,
            fan_out,
            config,
            kind,
        })
    }

    fn seed_layer(&self) -> Result<Vec<SpherePoint>> {
        let each = self
            .config
            .seed_budget
            .unwrap_or((self.config.budget / self.spec.len()).max(1));
        generator_clouds(self.spec, each, self.config.seed)
    }

    /// Every letter on every point while that fits the budget, otherwise one
    /// letter per point chosen by a hash of (seed, round, index).
    fn expand(&self, layer: &[SpherePoint], round: usize) -> Result<Vec<SpherePoint>> {
        let full = layer.len().saturating_mul(self.fan_out) <= self.config.budget;
        let round_key = stream_seed(self.config.seed, &[kind_tag(self.kind), TAG_LETTER, round as u64]);
        let chunks: Vec<Vec<SpherePoint>> = layer
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(c, chunk)| {
                let mut out = Vec::with_capacity(chunk.len() * 2);
                for (j, &x) in chunk.iter().enumerate() {
                    if full {
                        for l in &self.letters {
                            apply_to_point(&self.spec.generators[l.generator], l.direction, x, &mut out)?;
                        }
                    } else {
                        let index = (c * CHUNK + j) as u64;
                        let pick = (mix64(round_key ^ mix64(index)) % self.letters.len() as u64) as usize;
                        let l = self.letters[pick];
                        apply_to_point(&self.spec.generators[l.generator], l.direction, x, &mut out)?;
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(chunks.concat())
    }

    /// Runs the walk, calling `visit(round, expanded)` with every layer before
    /// thinning (round 0 is the seed layer); returns the last thinned layer.
    fn run(&self, mut visit: impl FnMut(usize, &[SpherePoint], &[SpherePoint])) -> Result<Vec<SpherePoint>> {
        let seed_points = self.seed_layer()?;
        let mut rng = stream_rng(self.config.seed, &[kind_tag(self.kind), TAG_ROUND, 0]);
        let mut layer = decimate_copy(&seed_points, self.config.budget, &mut rng);
        visit(0, &seed_points, &layer);
        drop(seed_points);
        for round in 1..=self.config.depth {
            let expanded = self.expand(&layer, round)?;
            let mut rng = stream_rng(self.config.seed, &[kind_tag(self.kind), TAG_ROUND, round as u64]);
            layer = decimate_copy(&expanded, self.config.budget, &mut rng);
            visit(round, &expanded, &layer);
        }
        Ok(layer)
    }
}

/// Backward orbit cloud approximating the semigroup Julia set, with
/// statistics of every layer.
pub fn approx_julia_semigroup_with(spec: &SemigroupSpec, config: WalkConfig) -> Result<(SetApprox, Vec<LayerStats>)> {
    let walker = Walker::new(spec, config, CloudKind::SemigroupJulia)?;
    let mut stats = Vec::with_capacity(config.depth + 1);
    let points = walker.run(|round, expanded, _| stats.push(layer_stats(round, expanded)))?;
    Ok((
        SetApprox {
            points,
            depth: config.depth,
            budget: config.budget,
            seed: config.seed,
            kind: CloudKind::SemigroupJulia,
        },
        stats,
    ))
}

pub fn approx_julia_semigroup(spec: &SemigroupSpec, depth: usize, budget: usize, seed: u64) -> Result<SetApprox> {
    Ok(approx_julia_semigroup_with(spec, WalkConfig::new(depth, budget, seed))?.0)
}

/// Per-round statistics of an invariant-set walk.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerStats {
    pub depth: usize,
    /// Points produced before thinning.
    pub expanded: usize,
    pub infinite: usize,
    /// Extremes of the finite moduli.
    pub max_modulus: f64,
    pub min_modulus: f64,
}

fn layer_stats(depth: usize, points: &[SpherePoint]) -> LayerStats {
    let mut stats = LayerStats {
        depth,
        expanded: points.len(),
        infinite: 0,
        max_modulus: 0.0,
        min_modulus: f64::INFINITY,
    };
    for p in points {
        match p.finite() {
            Some(z) => {
                let m = z.norm();
                stats.max_modulus = stats.max_modulus.max(m);
                stats.min_modulus = stats.min_modulus.min(m);
            }
            None => stats.infinite += 1,
        }
    }
    stats
}

/// Cloud of all layers of a forward and backward walk, merged by reservoir
/// sampling, together with per-layer statistics.
pub fn approx_invariant_set_with(spec: &SemigroupSpec, config: WalkConfig) -> Result<(SetApprox, Vec<LayerStats>)> {
    let walker = Walker::new(spec, config, CloudKind::InvariantE)?;
    let mut reservoir = Reservoir::new(
        config.budget,
        stream_rng(config.seed, &[kind_tag(CloudKind::InvariantE), TAG_MERGE]),
    );
    let mut stats = Vec::with_capacity(config.depth + 1);
    walker.run(|round, expanded, layer| {
        stats.push(layer_stats(round, expanded));
        reservoir.extend(layer);
    })?;
    Ok((
        SetApprox {
            points: reservoir.into_points(),
            depth: config.depth,
            budget: config.budget,
            seed: config.seed,
            kind: CloudKind::InvariantE,
        },
        stats,
    ))
}

pub fn approx_invariant_set(spec: &SemigroupSpec, depth: usize, budget: usize, seed: u64) -> Result<SetApprox> {
    Ok(approx_invariant_set_with(spec, WalkConfig::new(depth, budget, seed))?.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageStep {
    pub depth: usize,
    pub fraction: f64,
    pub covered_cells: usize,
    /// Points at infinity seen in this round.
    pub infinite_points: usize,
}

/// Fraction of grid cells hit by the invariant-set walk after each round.
///
/// Every layer is binned into the same grid, so the curve never decreases.
pub fn coverage_experiment(
    spec: &SemigroupSpec,
    grid_cells: usize,
    depth: usize,
    budget: usize,
    seed: u64,
) -> Result<Vec<CoverageStep>> {
    if grid_cells == 0 {
        return Err(Error::InvalidParameter("grid needs at least one cell".into()));
    }
    let walker = Walker::new(spec, WalkConfig::new(depth, budget, seed), CloudKind::InvariantE)?;
    let mut grid = SphereGrid::new(grid_cells);
    let mut curve = Vec::with_capacity(depth + 1);
    walker.run(|round, expanded, _| {
        grid.record_all(expanded);
        curve.push(CoverageStep {
            depth: round,
            fraction: grid.coverage_fraction(),
            covered_cells: grid.covered_cells(),
            infinite_points: expanded.iter().filter(|p| p.is_infinite()).count(),
        });
    })?;
    Ok(curve)
}

/// Which input map a witness was sampled from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSource {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    pub point: SpherePoint,
    pub source: WitnessSource,
    /// Green's function of the other map at the witness.
    pub green_other: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JuliaVerdict {
    Equal,
    Distinct(Witness),
    Inconclusive { witness: Option<Witness> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JuliaComparison {
    pub verdict: JuliaVerdict,
    pub hausdorff: f64,
    /// Largest nearest-neighbour gap inside either cloud.
    pub resolution: f64,
    /// `max(tol, resolution)`, the scale Hausdorff distances are judged on.
    pub scale: f64,
}

pub const DEFAULT_COMPARE_TOLERANCE: f64 = 1e-3;
pub const DEFAULT_COMPARE_SAMPLES: usize = 10_000;

fn strongest_witness(cloud: &[SpherePoint], own: &Polynomial, other: &Polynomial, tol: f64, source: WitnessSource) -> Option<Witness> {
    let mut best: Option<Witness> = None;
    for &z in cloud {
        if green_value(own, z, DEFAULT_GREEN_ITERATIONS).value > tol {
            continue;
        }
        let g = green_value(other, z, DEFAULT_GREEN_ITERATIONS).value;
        if g > tol && best.is_none_or(|b| g > b.green_other) {
            best = Some(Witness {
                point: z,
                source,
                green_other: g,
            });
        }
    }
    best
}

/// Decides numerically whether two polynomials share a Julia set.
///
/// A witness is a point of one Julia cloud that escapes under the other map.
pub fn julia_compare(f: &Polynomial, g: &Polynomial, samples: usize, tol: f64) -> Result<JuliaComparison> {
    f.require_generator()?;
    g.require_generator()?;
    if samples == 0 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("samples and tolerance must be positive".into()));
    }
    let cloud = |p: &Polynomial, tag: u64| -> Result<Vec<SpherePoint>> {
        // deepest untruncated tree, then a few thinned rounds to fill the budget
        let full = depth_for_count(p, samples);
        let c = julia_cloud_single(p, full, samples, stream_seed(0, &[TAG_COMPARE, tag]))?;
        Ok(dedup_points(&c.points))
    };
    let a = cloud(f, 0)?;
    let b = cloud(g, 1)?;
    let ia = ChordalIndex::new(&a);
    let ib = ChordalIndex::new(&b);
    let hausdorff = directed_hausdorff(&a, &ib)
        .unwrap_or(0.0)
        .max(directed_hausdorff(&b, &ia).unwrap_or(0.0));
    let resolution = isolation_radius(&a)
        .unwrap_or(0.0)
        .max(isolation_radius(&b).unwrap_or(0.0));
    let scale = tol.max(resolution);
    let wa = strongest_witness(&a, f, g, tol, WitnessSource::First);
    let wb = strongest_witness(&b, g, f, tol, WitnessSource::Second);
    let witness = match (wa, wb) {
        (Some(x), Some(y)) => Some(if y.green_other > x.green_other { y } else { x }),
        (x, y) => x.or(y),
    };
    let verdict = match witness {
        Some(w) if hausdorff > 3.0 * scale => JuliaVerdict::Distinct(w),
        Some(w) => JuliaVerdict::Inconclusive { witness: Some(w) },
        None if hausdorff <= scale => JuliaVerdict::Equal,
        None => JuliaVerdict::Inconclusive { witness: None },
    };
    Ok(JuliaComparison {
        verdict,
        hausdorff,
        resolution,
        scale,
    })
}
