//! One function per subcommand; each returns a report whose claims decide the exit status.

use crate::args::{BoxesArgs, DistanceArgs, KahanArgs, ObstructCommand, PolarArgs, TensorArgs, TowerArgs};
use crate::error::{CliError, CliResult};
use crate::io::{parse_grid, parse_reals, read_cmat, read_spectrum, sibling, write_cmat_file};
use crate::report::Report;
use nilprox_core::af_obstructions::{dyadic_example, greedy_sequence, shift_scan};
use nilprox_core::boxes::{boxify, synth_pair, validate_plan};
use nilprox_core::kahan::{build_kahan, CHECK_SLACK};
use nilprox_core::linalg::DEFAULT_MERGE_TOL;
use nilprox_core::nil_distance::{bracket, estimate, lower_bounds, EstimateConfig};
use nilprox_core::tensor_read::{product_vanish_check, TailRule, TensorFamily, ANCHOR_TOL};
use nilprox_core::uhf_tower::{bookkeeping, build_tower, disk_density, polar_spectrum, Ratio};
use nilprox_core::{Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::{Path, PathBuf};

/// Largest dimension written out as `.cmat`.
pub const MAX_CMAT_DIM: usize = 2048;
/// Largest tower level whose nilpotent distance is estimated.
pub const MAX_ESTIMATE_DIM: u64 = 64;
pub const BRACKET_SLACK: f64 = 1e-6;
pub const INCREMENT_TOL: f64 = 1e-9;
pub const PHI_TOL: f64 = 1e-9;

fn c(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn kahan(a: &KahanArgs, seed: u64) -> CliResult<Report> {
    let pack = build_kahan(a.n)?;
    let defect = pack.witness_defect();
    let density = a.m.map(|m| pack.density(m)).transpose()?;
    let mut r = Report::new("kahan", json!({"n": a.n, "m": a.m}), seed);
    r.tolerance("check_slack", CHECK_SLACK);
    let checks = pack.checks;
    r.claim(
        "skew_bounded",
        checks.skew_bounded,
        json!({"value": pack.norms.skew_q_prime, "bound": pack.bounds.skew_q_prime}),
    )
    .claim(
        "h_norm_near_one",
        checks.h_norm_near_one,
        json!({"value": pack.h_norm_deviation, "bound": pack.bounds.h_norm_deviation}),
    )
    .claim("h_close_to_q", checks.h_close_to_q, json!({"value": pack.norms.h_minus_q, "bound": pack.bounds.h_minus_q}))
    .claim(
        "h_contraction",
        checks.h_contraction,
        json!({"h_eigenvalue_range": [pack.h_eigenvalues()[0], pack.h_eigenvalues()[a.n - 1]]}),
    )
    .claim(
        "a_positive_unit_norm",
        pack.a_is_psd() && (pack.norms.a - 1.0).abs() <= CHECK_SLACK,
        json!({"norm": pack.norms.a}),
    );
    if let Some(bound) = pack.witness_bound() {
        r.claim("witness_bound", defect <= bound, json!({"defect": defect, "bound": bound}));
    }
    r.result("n", a.n)
        .result("norms", pack.norms)
        .result("bounds", pack.bounds)
        .result("checks", checks.as_array())
        .result("defect", defect)
        .result("density", density.map(|d| json!({"m": d.m, "holds": d.holds, "hits": d.hits})));
    Ok(r)
}

pub fn distance(a: &DistanceArgs, seed: u64) -> CliResult<Report> {
    let m = read_cmat(&a.matrix)?;
    let cfg = EstimateConfig { restarts: a.restarts, iters: a.iters, seed, warm_start: None };
    let b = bracket(&m, &cfg)?;
    let witness_path = match &a.report {
        Some(p) => {
            let path = sibling(p, "witness.cmat");
            write_cmat_file(&path, b.witness.materialized())?;
            Some(path)
        }
        None => None,
    };
    let s = b.summary();
    let mut r = Report::new(
        "distance",
        json!({"matrix": a.matrix, "dim": m.dim(), "restarts": a.restarts, "iters": a.iters}),
        seed,
    );
    r.tolerance("bracket_slack", BRACKET_SLACK)
        .claim("bracket_consistent", b.is_consistent(), json!({"lower": b.lower(), "upper": b.upper()}))
        .claim("estimate_above_lower_bound", !b.below_lower_bound, json!(null));
    r.result("gap_lower", s.gap_lower)
        .result("trace_lower", s.trace_lower)
        .result("schur_upper", s.schur_upper)
        .result("estimate", s.estimate)
        .result("positive_semidefinite", b.lower.positive_semidefinite)
        .result("zero_in_spectrum", b.lower.zero_in_spectrum)
        .result("witness_path", witness_path);
    Ok(r)
}

#[derive(Serialize)]
struct BlockView {
    removed: [i64; 2],
    path: Vec<[i64; 2]>,
    degree: usize,
    fit_error: f64,
    snap_displacement: f64,
    defect: f64,
}

pub fn boxes(a: &BoxesArgs, seed: u64) -> CliResult<Report> {
    let spec = read_spectrum(&a.spectrum)?;
    let bs = boxify(&spec, a.eps)?;
    let pair = synth_pair(&bs, a.ell)?;
    let plan_ok = validate_plan(&bs, pair.plan()).is_ok();
    let centers = bs.centers();
    let on_centers =
        pair.spectrum().points().iter().all(|p| centers.iter().any(|c| (c - p.value).norm() <= DEFAULT_MERGE_TOL))
            && centers.iter().all(|&c| pair.spectrum().contains(c, DEFAULT_MERGE_TOL));

    let (mut n_path, mut m_path) = (None::<PathBuf>, None::<PathBuf>);
    if let Some(p) = &a.report {
        if pair.dim() <= MAX_CMAT_DIM {
            let (np, mp) = (sibling(p, "N.cmat"), sibling(p, "M.cmat"));
            write_cmat_file(&np, &pair.normal()?)?;
            write_cmat_file(&mp, pair.nilpotent()?.materialized())?;
            (n_path, m_path) = (Some(np), Some(mp));
        }
    }
    let blocks: Vec<BlockView> = pair
        .blocks()
        .iter()
        .map(|b| BlockView {
            removed: [b.step.removed.0, b.step.removed.1],
            path: b.step.path.iter().map(|g| [g.0, g.1]).collect(),
            degree: b.fit.poly.degree(),
            fit_error: b.fit.sup_error,
            snap_displacement: b.snap_displacement,
            defect: b.defect,
        })
        .collect();

    let mut r = Report::new("boxes", json!({"spectrum": a.spectrum, "eps": a.eps, "ell": a.ell}), seed);
    r.tolerance("merge_tol", DEFAULT_MERGE_TOL).claim("plan_valid", plan_ok, json!(null)).claim(
        "spectrum_on_centers",
        on_centers,
        json!(null),
    );
    r.result("boxes", bs.boxes().iter().map(|g| [g.0, g.1]).collect::<Vec<_>>())
        .result("plan", blocks)
        .result("per_block_defect", pair.per_block_defect())
        .result("total_defect", pair.defect())
        .result("dim", pair.dim())
        .result("N_path", n_path)
        .result("M_path", m_path);
    Ok(r)
}

pub fn polar(a: &PolarArgs, seed: u64) -> CliResult<Report> {
    let spec = polar_spectrum(a.n, a.m, a.q)?;
    let density = disk_density(&spec, a.grid_step)?;
    let ell = spec.total_multiplicity() as u64;
    let mut r = Report::new("polar", json!({"n": a.n, "m": a.m, "q": a.q, "grid_step": a.grid_step}), seed);
    r.claim("dimension_identity", (2 * a.m + 1) * a.n + 1 + a.q == ell, json!({"ell": ell}));
    r.result("ell", ell)
        .result(
            "points",
            spec.points().iter().map(|p| json!([p.value.re, p.value.im, p.multiplicity])).collect::<Vec<_>>(),
        )
        .result("disk_density", density)
        .result("pairing_bound", std::f64::consts::PI / a.n as f64 + 1.0 / a.m as f64);
    Ok(r)
}

pub fn parse_ratios(spec: &str) -> CliResult<Vec<Ratio>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Ratio>().map_err(CliError::from))
        .collect()
}

pub fn tower(a: &TowerArgs, seed: u64) -> CliResult<Report> {
    let ratios = parse_ratios(&a.ratios)?;
    let shapes = bookkeeping(a.l1, &ratios)?;
    let levels = build_tower(&shapes)?;
    let mut r = Report::new(
        "tower",
        json!({"l1": a.l1, "ratios": ratios.iter().map(Ratio::to_string).collect::<Vec<_>>(), "grid_step": a.grid_step}),
        seed,
    );
    r.tolerance("increment_tol", INCREMENT_TOL);
    let mut rows = Vec::with_capacity(levels.len());
    let mut densities = Vec::with_capacity(levels.len());
    for lv in &levels {
        let density = disk_density(&lv.spec, a.grid_step)?;
        densities.push(density);
        let nil_estimate = if lv.shape.ell <= MAX_ESTIMATE_DIM {
            Some(estimate(&lv.normal(), &EstimateConfig { seed, ..EstimateConfig::default() })?.value)
        } else {
            None
        };
        let name = |s: &str| format!("level{}_{s}", lv.k);
        r.claim(&name("bookkeeping"), lv.shape.identity_holds(), json!(lv.shape));
        if let (Some(cost), Some(bound), Some(inc)) = (lv.pairing_cost, lv.paper_bound, lv.increment) {
            r.claim(&name("pairing_within_bound"), lv.within_bound(), json!({"cost": cost, "bound": bound}));
            r.claim(&name("increment_is_cost"), (inc - cost).abs() <= INCREMENT_TOL, json!({"increment": inc}));
        }
        rows.push(json!({
            "ell": lv.shape.ell,
            "n": lv.shape.n,
            "m": lv.shape.m,
            "q": lv.shape.q,
            "pairing_cost": lv.pairing_cost,
            "paper_bound": lv.paper_bound,
            "increment": lv.increment,
            "disk_density": density,
            "nil_estimate": nil_estimate,
        }));
    }
    r.claim("density_decreasing", densities.windows(2).all(|w| w[1] < w[0]), json!(densities));
    r.result("levels", rows);
    Ok(r)
}

pub fn obstruct(cmd: &ObstructCommand, seed: u64) -> CliResult<(Report, Option<PathBuf>)> {
    match cmd {
        ObstructCommand::Scan { matrix, grid, report } => {
            let t = read_cmat(matrix)?;
            let points = parse_grid(grid)?;
            let scan = shift_scan(&t, &points);
            let zeros: Vec<Complex64> = scan.bounds.iter().filter(|b| b.1 == 0.0).map(|b| b.0).collect();
            let shifted_trace = (t.trace() + scan.root * t.dim() as f64).norm();
            let mut r = Report::new("obstruct scan", json!({"matrix": matrix, "grid": grid}), seed);
            r.claim("root_unique", zeros.iter().all(|&z| z == scan.root), json!({"zero_points": zeros.len()})).claim(
                "root_annihilates_trace",
                shifted_trace <= 1e-12 * (1.0 + t.trace().norm()),
                json!(shifted_trace),
            );
            let min = scan.bounds.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
            r.result("root", c(scan.root))
                .result("min_bound", if min.is_finite() { Some(min) } else { None })
                .result("bounds", scan.bounds.iter().map(|(l, b)| [l.re, l.im, *b]).collect::<Vec<_>>());
            Ok((r, report.clone()))
        }
        ObstructCommand::Dyadic { n, report } => {
            let d = dyadic_example(*n)?;
            let (num, den) = d.trace_lower_exact;
            // Dyadic sums up to 2^24 terms are exact in f64.
            let mean = d.diagonal.iter().sum::<f64>() / d.diagonal.len() as f64;
            let mut r = Report::new("obstruct dyadic", json!({"n": n}), seed);
            r.claim("trace_lower_exact", mean == num as f64 / den as f64 && d.trace_lower == mean, json!([num, den]));
            if *n <= 10 {
                let lb = lower_bounds(&d.matrix())?;
                r.claim(
                    "lower_bounds_agree",
                    lb.trace_lower == d.trace_lower && lb.gap_lower == d.gap_lower,
                    json!(null),
                );
            }
            r.result("size", d.diagonal.len())
                .result("trace_lower_exact", [num, den])
                .result("trace_lower", d.trace_lower)
                .result("gap_lower", d.gap_lower);
            Ok((r, report.clone()))
        }
        ObstructCommand::Sequence { levels, schedule, report } => {
            let tols = parse_reals(schedule)?;
            let cert = greedy_sequence(*levels, &tols)?;
            let mut r = Report::new("obstruct sequence", json!({"levels": levels, "schedule": tols}), seed);
            for (k, (lv, &tol)) in cert.levels.iter().zip(&tols).enumerate() {
                r.claim(
                    &format!("level{}_within_tolerance", k + 1),
                    lv.kahan_defect <= tol && lv.pairing_cost <= tol,
                    json!({"kahan_defect": lv.kahan_defect, "pairing_cost": lv.pairing_cost, "tolerance": tol}),
                );
            }
            r.result("levels", &cert.levels).result("prefix_len", cert.prefix.len());
            if cert.prefix.len() <= 4096 {
                r.result("prefix", &cert.prefix);
            }
            Ok((r, report.clone()))
        }
    }
}

#[derive(Debug, Deserialize)]
struct TensorConfig {
    stem: Vec<PathBuf>,
    tail: TailRule,
    dims: Vec<usize>,
}

pub fn tensor(a: &TensorArgs, seed: u64) -> CliResult<Report> {
    let text = std::fs::read_to_string(&a.config).map_err(|source| CliError::Io { path: a.config.clone(), source })?;
    let cfg: TensorConfig =
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: a.config.clone(), source })?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let stem = cfg.stem.iter().map(|p| read_cmat(&base.join(p))).collect::<CliResult<Vec<ComplexMatrix>>>()?;
    let fam = TensorFamily::new(stem, cfg.tail, &cfg.dims)?;
    let k = a.k;
    let trunc = fam.truncate(k)?;
    let anchor = fam.anchor_residual(fam.levels().len())?;
    let phi: Vec<f64> = (fam.stem_len().max(1)..k).map(|j| fam.phi_residual(j)).collect::<Result<_, _>>()?;

    let mut r = Report::new("tensor", json!({"config": a.config, "K": k, "tail": cfg.tail, "dims": cfg.dims}), seed);
    r.tolerance("anchor_tol", ANCHOR_TOL).tolerance("phi_tol", PHI_TOL);
    r.claim("anchors_fixed", anchor <= ANCHOR_TOL, json!(anchor));
    if cfg.tail == TailRule::Positive {
        r.claim("phi_consistent", phi.iter().all(|&x| x <= PHI_TOL), json!(phi));
    }
    if cfg.tail == TailRule::Nilpotent && k > fam.stem_len() {
        let index = fam.levels()[fam.stem_len()].tail_index.unwrap_or(1);
        let pv = product_vanish_check(std::slice::from_ref(&fam), k, index)?;
        r.claim("products_vanish", pv.vanishes, json!(pv));
    }
    r.result("dims", fam.dims())
        .result("truncation_dim", trunc.dim())
        .result("truncation_norm", nilprox_core::linalg::op_norm(&trunc))
        .result("norm_constant", fam.norm_constant(k))
        .result("phi_residuals", phi)
        .result("tail_defect_partial_sums", fam.tail_defect_partial_sums(k));
    Ok(r)
}
