//! Cloud, coverage, compare and render commands.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use semijulia_core::semigroup::{
    approx_invariant_set_with, approx_julia_semigroup_with, coverage_experiment, julia_compare, JuliaVerdict,
    LayerStats, WalkConfig, Witness, WitnessSource,
};
use semijulia_core::single::{green_value, julia_cloud_single, DEFAULT_GREEN_ITERATIONS};
use semijulia_core::SetApprox;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::render::{escape_raster, Raster};
use crate::report::{point, real, Report, Reproducibility, Stopwatch};
use crate::{CloudArgs, RenderArgs, RenderMode};

fn finish(command: &str, argv: Vec<String>, config: &RunConfig, results: Value, clock: Stopwatch) -> CliResult<()> {
    Report {
        command: command.to_string(),
        argv,
        config: serde_json::to_value(config).expect("config serializes"),
        results,
        reproducibility: Reproducibility {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            seed: Some(config.seed),
        },
        timings: clock.finish(),
    }
    .emit(config.out.as_deref())
}

fn cloud_summary(cloud: &SetApprox) -> Value {
    let (lo, hi) = cloud.modulus_range().unwrap_or((f64::NAN, f64::NAN));
    json!({
        "kind": cloud.kind.name(),
        "depth": cloud.depth,
        "budget": cloud.budget,
        "points": cloud.len(),
        "infinite_points": cloud.infinite_count(),
        "min_modulus": real(lo),
        "max_modulus": real(hi),
    })
}

fn layers_json(layers: &[LayerStats]) -> Value {
    layers
        .iter()
        .map(|l| {
            json!({
                "depth": l.depth,
                "expanded": l.expanded,
                "infinite": l.infinite,
                "min_modulus": real(l.min_modulus),
                "max_modulus": real(l.max_modulus),
            })
        })
        .collect()
}

fn write_points(path: &Path, cloud: &SetApprox) -> CliResult<()> {
    let mut text = String::with_capacity(cloud.len() * 48);
    for p in &cloud.points {
        match p.finite() {
            Some(z) => writeln!(text, "{:e} {:e}", z.re, z.im),
            None => writeln!(text, "inf"),
        }
        .expect("writing to a String");
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn plot(config: &RunConfig, cloud: &SetApprox) -> CliResult<Option<Value>> {
    let Some(path) = &config.image else {
        return Ok(None);
    };
    let mut raster = Raster::new(config.width, config.height);
    let plotted = raster.plot_points(&config.window, &cloud.points);
    raster.write_ppm(path)?;
    Ok(Some(image_json(path, &raster, Some(plotted))))
}

fn image_json(path: &Path, raster: &Raster, plotted: Option<usize>) -> Value {
    json!({
        "path": path.display().to_string(),
        "format": "ppm-p6",
        "width": raster.width(),
        "height": raster.height(),
        "plotted_points": plotted,
        "marked_pixels": raster.marked_pixels(),
    })
}

fn walk(config: &RunConfig, invariant: bool) -> CliResult<(SetApprox, Vec<LayerStats>)> {
    let spec = config.semigroup()?;
    let walk = WalkConfig::new(config.depth, config.budget, config.seed);
    Ok(if invariant {
        approx_invariant_set_with(&spec, walk)?
    } else {
        approx_julia_semigroup_with(&spec, walk)?
    })
}

pub fn cloud(args: &CloudArgs, invariant: bool, argv: Vec<String>) -> CliResult<()> {
    let config = RunConfig::resolve(&args.run)?;
    let mut clock = Stopwatch::start();
    let (cloud, layers) = walk(&config, invariant)?;
    clock.lap("walk");
    let mut results = cloud_summary(&cloud);
    results["layers"] = layers_json(&layers);
    if let Some(image) = plot(&config, &cloud)? {
        results["image"] = image;
        clock.lap("image");
    }
    if let Some(path) = &args.points {
        write_points(path, &cloud)?;
        results["points_file"] = json!(path.display().to_string());
        clock.lap("points");
    }
    let name = if invariant { "invariant-set" } else { "semigroup-julia" };
    finish(name, argv, &config, results, clock)
}

pub fn coverage(args: &crate::config::RunArgs, argv: Vec<String>) -> CliResult<()> {
    let config = RunConfig::resolve(args)?;
    config.require_generator_count(|n| n >= 2, "at least 2")?;
    let spec = config.semigroup()?;
    let mut clock = Stopwatch::start();
    let curve = coverage_experiment(&spec, config.grid_cells, config.depth, config.budget, config.seed)?;
    clock.lap("coverage");
    let steps: Vec<Value> = curve
        .iter()
        .map(|s| {
            json!({
                "depth": s.depth,
                "fraction": s.fraction,
                "covered_cells": s.covered_cells,
                "infinite_points": s.infinite_points,
            })
        })
        .collect();
    let last = curve.last().expect("curve has the depth-0 entry");
    let results = json!({
        "grid_cells": config.grid_cells,
        "curve": steps,
        "final_fraction": last.fraction,
        "non_decreasing": curve.windows(2).all(|w| w[1].fraction >= w[0].fraction),
        "first_depth_with_infinity": curve.iter().find(|s| s.infinite_points > 0).map(|s| s.depth),
    });
    finish("coverage", argv, &config, results, clock)
}

fn witness_json(w: &Witness, config: &RunConfig) -> CliResult<Value> {
    let polys = config.polynomials()?;
    let (own, source) = match w.source {
        WitnessSource::First => (&polys[0], "first"),
        WitnessSource::Second => (&polys[1], "second"),
    };
    Ok(json!({
        "point": point(w.point),
        "modulus": real(w.point.modulus()),
        "source": source,
        "green_own": real(green_value(own, w.point, DEFAULT_GREEN_ITERATIONS).value),
        "green_other": real(w.green_other),
    }))
}

pub fn compare(args: &crate::config::RunArgs, argv: Vec<String>) -> CliResult<()> {
    let config = RunConfig::resolve(args)?;
    config.require_generator_count(|n| n == 2, "exactly 2")?;
    let polys = config.polynomials()?;
    let mut clock = Stopwatch::start();
    let cmp = julia_compare(&polys[0], &polys[1], config.samples, config.tolerance)?;
    clock.lap("compare");
    let (verdict, witness) = match &cmp.verdict {
        JuliaVerdict::Equal => ("equal", Value::Null),
        JuliaVerdict::Distinct(w) => ("distinct", witness_json(w, &config)?),
        JuliaVerdict::Inconclusive { witness } => (
            "inconclusive",
            witness.as_ref().map(|w| witness_json(w, &config)).transpose()?.unwrap_or(Value::Null),
        ),
    };
    let results = json!({
        "verdict": verdict,
        "witness": witness,
        "hausdorff": real(cmp.hausdorff),
        "resolution": real(cmp.resolution),
        "scale": real(cmp.scale),
    });
    finish("compare", argv, &config, results, clock)
}

pub fn render(args: &RenderArgs, argv: Vec<String>) -> CliResult<()> {
    let mut config = RunConfig::resolve(&args.run)?;
    let path = config
        .image
        .get_or_insert_with(|| format!("{}.ppm", args.mode.name()).into())
        .clone();
    let mut clock = Stopwatch::start();
    let mut results = json!({ "mode": args.mode.name() });
    let raster = match args.mode {
        RenderMode::Single | RenderMode::Escape => {
            config.require_generator_count(|n| n == 1, "exactly 1")?;
            let p = &config.polynomials()?[0];
            if args.mode == RenderMode::Escape {
                results["max_iter"] = json!(args.max_iter);
                escape_raster(p, &config.window, config.width, config.height, args.max_iter)
            } else {
                let cloud = julia_cloud_single(p, config.depth, config.budget, config.seed)?;
                clock.lap("cloud");
                results["cloud"] = cloud_summary(&cloud);
                let mut raster = Raster::new(config.width, config.height);
                raster.plot_points(&config.window, &cloud.points);
                raster
            }
        }
        RenderMode::SemigroupJulia | RenderMode::InvariantSet => {
            let (cloud, _) = walk(&config, args.mode == RenderMode::InvariantSet)?;
            clock.lap("cloud");
            results["cloud"] = cloud_summary(&cloud);
            let mut raster = Raster::new(config.width, config.height);
            raster.plot_points(&config.window, &cloud.points);
            raster
        }
    };
    clock.lap("raster");
    raster.write_ppm(&path)?;
    results["image"] = image_json(&path, &raster, None);
    finish("render", argv, &config, results, clock)
}
