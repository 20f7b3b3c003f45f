//! The acceptance suite: twelve criteria, each a pure function of the seed.

use crate::error::{CliError, CliResult, ExitStatus};
use crate::report::{without_timestamp, Report};
use nilprox_core::af_obstructions::{degree_cap_check, dyadic_example, shift_scan, BlockAlgebra};
use nilprox_core::boxes::{boxify, is_connected, plan, synth_pair, validate_plan, BoxSet, GridBox};
use nilprox_core::kahan::{build_kahan, KahanPack, CHECK_SLACK};
use nilprox_core::linalg::random::{complex_gaussian, complex_normal, derive_seed, haar_unitary, seeded_rng};
use nilprox_core::linalg::{spectrum, CertifiedNilpotent, DEFAULT_MERGE_TOL};
use nilprox_core::nil_distance::{bracket, estimate, lower_bounds, oracle_small, EstimateConfig, OracleConfig};
use nilprox_core::tensor_read::{
    cone_check, nilpotent_tail, product_vanish_check, tensorapprox_check, PolyMatrix, TailRule, TensorFamily,
};
use nilprox_core::uhf_tower::{bookkeeping, bottleneck_match_values, build_tower, disk_density, polar_spectrum, Ratio};
use nilprox_core::{Complex64, ComplexMatrix, SchurForm};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

/// Cap on every dimension in quick mode.
pub const QUICK_DIM_CAP: usize = 256;
pub const DETERMINISM_ID: u8 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub quick: bool,
}

impl SuiteConfig {
    /// Quick mode halves each entry, keeps it at least `floor`, caps it at 256 and drops repeats.
    fn ladder(&self, full: &[usize], floor: usize) -> Vec<usize> {
        if !self.quick {
            return full.to_vec();
        }
        let mut out: Vec<usize> = full.iter().map(|&x| (x / 2).max(floor).min(QUICK_DIM_CAP)).collect();
        out.dedup();
        out
    }
}

struct Outcome {
    pass: bool,
    detail: Value,
}

type Check = fn(&Suite) -> CliResult<Outcome>;

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub time_limit: Option<Duration>,
    check: Option<Check>,
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion {
        id: 1,
        name: "kahan_certificates",
        time_limit: Some(Duration::from_secs(300)),
        check: Some(kahan_certificates),
    },
    Criterion { id: 2, name: "kahan_witness_trend", time_limit: None, check: Some(kahan_witness_trend) },
    Criterion { id: 3, name: "distance_bracket", time_limit: None, check: Some(distance_bracket) },
    Criterion { id: 4, name: "oracle_agreement", time_limit: None, check: Some(oracle_agreement) },
    Criterion { id: 5, name: "projection_trend", time_limit: None, check: Some(projection_trend) },
    Criterion { id: 6, name: "box_planner", time_limit: None, check: Some(box_planner) },
    Criterion { id: 7, name: "pair_synthesis_trend", time_limit: None, check: Some(pair_synthesis_trend) },
    Criterion { id: 8, name: "uhf_tower", time_limit: Some(Duration::from_secs(120)), check: Some(uhf_tower) },
    Criterion { id: 9, name: "bottleneck_matcher", time_limit: None, check: Some(bottleneck_matcher) },
    Criterion { id: 10, name: "obstructions", time_limit: None, check: Some(obstructions) },
    Criterion { id: 11, name: "tensor_suite", time_limit: None, check: Some(tensor_suite) },
    Criterion { id: DETERMINISM_ID, name: "determinism", time_limit: None, check: None },
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    /// Outcome of the numerical checks.
    pub pass: bool,
    pub detail: Value,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub time_limit: Option<Duration>,
}

impl CriterionResult {
    pub fn within_time(&self) -> bool {
        self.time_limit.is_none_or(|l| self.elapsed <= l)
    }

    pub fn passed(&self) -> bool {
        self.pass && self.within_time()
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let limit = match self.time_limit {
            Some(l) if !self.within_time() => format!(" (exceeded {}s limit)", l.as_secs()),
            _ => String::new(),
        };
        format!("{verdict} criterion {:>2} {:<22} {:>8.1}s{limit}", self.id, self.name, self.elapsed.as_secs_f64())
    }
}

/// Shared state across the criteria of one run.
pub struct Suite {
    pub cfg: SuiteConfig,
    kahan: Mutex<BTreeMap<usize, Arc<KahanPack>>>,
}

impl Suite {
    pub fn new(cfg: SuiteConfig) -> Self {
        Self { cfg, kahan: Mutex::new(BTreeMap::new()) }
    }

    fn kahan(&self, n: usize) -> CliResult<Arc<KahanPack>> {
        if let Some(p) = self.kahan.lock().expect("cache lock").get(&n) {
            return Ok(p.clone());
        }
        let pack = Arc::new(build_kahan(n)?);
        self.kahan.lock().expect("cache lock").insert(n, pack.clone());
        Ok(pack)
    }

    pub fn run_one(&self, c: &Criterion) -> CriterionResult {
        let start = Instant::now();
        let outcome = match c.check {
            Some(f) => f(self).unwrap_or_else(|e| Outcome { pass: false, detail: json!({"error": e.to_string()}) }),
            None => determinism(self.cfg, None),
        };
        CriterionResult {
            id: c.id,
            name: c.name,
            pass: outcome.pass,
            detail: outcome.detail,
            elapsed: start.elapsed(),
            time_limit: c.time_limit,
        }
    }
}

/// Resolves `"all"` or a comma-separated list of names and numbers.
pub fn select(suite: &str) -> CliResult<Vec<&'static Criterion>> {
    let names: Vec<&str> = suite.split(',').map(str::trim).collect();
    if names.iter().any(|s| s.is_empty()) {
        return Err(CliError::Validation("suite names must be nonempty".into()));
    }
    if names == ["all"] {
        return Ok(CRITERIA.iter().collect());
    }
    let mut out: Vec<&Criterion> = Vec::new();
    for n in names {
        let c = CRITERIA
            .iter()
            .find(|c| c.name == n || n.parse::<u8>().ok() == Some(c.id))
            .ok_or_else(|| CliError::Validation(format!("unknown criterion {n:?}")))?;
        if !out.iter().any(|o| o.id == c.id) {
            out.push(c);
        }
    }
    out.sort_by_key(|c| c.id);
    Ok(out)
}

/// Runs the criteria in order, calling `on_result` as each finishes. When the
/// determinism criterion follows a complete run of the others, that run is
/// reused as the first of the two compared runs.
pub fn run(
    criteria: &[&Criterion],
    cfg: SuiteConfig,
    mut on_result: impl FnMut(&CriterionResult),
) -> Vec<CriterionResult> {
    let suite = Suite::new(cfg);
    let mut out: Vec<CriterionResult> = Vec::with_capacity(criteria.len());
    for c in criteria {
        let r = if c.id == DETERMINISM_ID && out.len() == CRITERIA.len() - 1 {
            let start = Instant::now();
            let outcome = determinism(cfg, Some(&out));
            CriterionResult {
                id: c.id,
                name: c.name,
                pass: outcome.pass,
                detail: outcome.detail,
                elapsed: start.elapsed(),
                time_limit: None,
            }
        } else {
            suite.run_one(c)
        };
        on_result(&r);
        out.push(r);
    }
    out
}

pub fn summary(results: &[CriterionResult], cfg: SuiteConfig) -> Report {
    let names: Vec<&str> = results.iter().map(|r| r.name).collect();
    let mut report = Report::new("regress", json!({"suite": names, "quick": cfg.quick}), cfg.seed);
    for r in results {
        report.claim(&format!("criterion_{:02}_{}", r.id, r.name), r.pass, r.detail.clone());
    }
    report.result("criteria", results);
    report
}

pub fn exit_status(results: &[CriterionResult]) -> ExitStatus {
    if results.iter().all(CriterionResult::passed) {
        ExitStatus::Success
    } else {
        ExitStatus::Anomaly
    }
}

/// Two consecutive runs of criteria 1–11 render identical summaries.
fn determinism(cfg: SuiteConfig, first: Option<&[CriterionResult]>) -> Outcome {
    let others: Vec<&Criterion> = CRITERIA.iter().filter(|c| c.id != DETERMINISM_ID).collect();
    let render = |results: &[CriterionResult]| without_timestamp(&summary(results, cfg).render(0));
    let a = match first {
        Some(r) => render(r),
        None => render(&run(&others, cfg, |_| {})),
    };
    let b = render(&run(&others, cfg, |_| {}));
    match (a, b) {
        (Ok(a), Ok(b)) => Outcome { pass: a == b, detail: json!({"bytes": a.len(), "identical": a == b}) },
        (Err(e), _) | (_, Err(e)) => Outcome { pass: false, detail: json!({"error": e.to_string()}) },
    }
}

fn powers_of_two(lo: usize, hi: usize) -> Vec<usize> {
    (0..usize::BITS).map(|k| 1usize << k).filter(|&n| (lo..=hi).contains(&n)).collect()
}

fn kahan_certificates(s: &Suite) -> CliResult<Outcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for n in s.cfg.ladder(&powers_of_two(2, 4096), 2) {
        let p = s.kahan(n)?;
        let a_ok = p.a_is_psd() && (p.norms.a - 1.0).abs() <= CHECK_SLACK;
        pass &= p.checks.all() && a_ok;
        rows.push(json!({
            "n": n,
            "checks": p.checks.as_array(),
            "h_norm_deviation": p.h_norm_deviation,
            "h_norm_bound": p.bounds.h_norm_deviation,
            "a_positive_unit_norm": a_ok,
        }));
    }
    Ok(Outcome { pass, detail: json!({"orders": rows}) })
}

fn kahan_witness_trend(s: &Suite) -> CliResult<Outcome> {
    let orders = s.cfg.ladder(&[64, 256, 1024, 4096], 16);
    let mut defects = Vec::new();
    let mut within = true;
    for &n in &orders {
        let d = s.kahan(n)?.witness_defect();
        within &= n < 16 || d <= 2.0 * PI / (n as f64).ln();
        defects.push(d);
    }
    let decreasing = defects.windows(2).all(|w| w[1] < w[0]);
    Ok(Outcome {
        pass: decreasing && within,
        detail: json!({"orders": orders, "defects": defects, "decreasing": decreasing, "within_bound": within}),
    })
}

/// General, normal or positive semidefinite test input.
fn sample_matrix(kind: usize, n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    let g = complex_gaussian(n, &mut rng);
    match kind % 3 {
        0 => g,
        1 => {
            let u = haar_unitary(n, &mut rng);
            &(&u * &ComplexMatrix::from_diagonal(&g.diagonal())) * &u.adjoint()
        }
        _ => {
            let u = haar_unitary(n, &mut rng);
            let d: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random::<f64>(), 0.0)).collect();
            &(&u * &ComplexMatrix::from_diagonal(&d)) * &u.adjoint()
        }
    }
}

/// Reduced search budget for the 200-matrix bracket suite.
pub const BRACKET_RESTARTS: usize = 4;
pub const BRACKET_ITERS: usize = 150;

fn distance_bracket(s: &Suite) -> CliResult<Outcome> {
    let mut worst_margin = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for i in 0..200u64 {
        let seed = derive_seed(s.cfg.seed, 3_000 + i);
        let n = 2 + (i as usize % 11);
        let m = sample_matrix(i as usize, n, seed);
        let cfg = EstimateConfig { restarts: BRACKET_RESTARTS, iters: BRACKET_ITERS, seed, warm_start: None };
        let b = bracket(&m, &cfg)?;
        let margin = b.lower() - b.upper();
        worst_margin = worst_margin.max(margin);
        if margin > 1e-6 {
            failures.push(i);
        }
    }
    let mut identity_ok = true;
    for d in 1..=8 {
        let b =
            bracket(&ComplexMatrix::identity(d), &EstimateConfig { seed: s.cfg.seed, ..EstimateConfig::default() })?;
        identity_ok &= (b.lower() - 1.0).abs() <= 1e-9 && (b.upper() - 1.0).abs() <= 1e-9;
    }
    Ok(Outcome {
        pass: failures.is_empty() && identity_ok,
        detail: json!({
            "cases": 200,
            "restarts": BRACKET_RESTARTS,
            "iters": BRACKET_ITERS,
            "worst_lower_minus_upper": worst_margin,
            "failures": failures,
            "identity_collapses": identity_ok,
        }),
    })
}

fn oracle_agreement(s: &Suite) -> CliResult<Outcome> {
    let cases = if s.cfg.quick { 10 } else { 50 };
    let mut worst: f64 = 0.0;
    for i in 0..cases {
        let seed = derive_seed(s.cfg.seed, 4_000 + i);
        let m = complex_gaussian(2, &mut seeded_rng(seed));
        let est = estimate(&m, &EstimateConfig { seed, ..EstimateConfig::default() })?.value;
        let oracle = oracle_small(&m, &OracleConfig { seed, ..OracleConfig::default() })?;
        worst = worst.max((est - oracle).abs());
    }
    let diag = ComplexMatrix::from_diagonal(&[Complex64::new(1.0, 0.0), Complex64::default()]);
    let diag_oracle = oracle_small(&diag, &OracleConfig { seed: s.cfg.seed, ..OracleConfig::default() })?;
    let diag_ok = (0.5..=0.7072).contains(&diag_oracle);
    Ok(Outcome {
        pass: worst <= 1e-3 && diag_ok,
        detail: json!({"cases": cases, "worst_discrepancy": worst, "diag_1_0_oracle": diag_oracle}),
    })
}

/// Threshold at the middle dimension, calibrated from measured estimates.
pub const PROJECTION_THRESHOLD: f64 = 0.9;

fn rank_one_projection(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| if i == 0 && j == 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() })
}

fn projection_trend(s: &Suite) -> CliResult<Outcome> {
    let dims = s.cfg.ladder(&[4, 16, 64], 2);
    let mut values: Vec<f64> = Vec::new();
    let mut warm: Option<CertifiedNilpotent> = None;
    for &n in &dims {
        let warm_start = match &warm {
            Some(w) => Some(CertifiedNilpotent::direct_sum(&[w, &CertifiedNilpotent::zero(n - w.dim())])?),
            None => None,
        };
        let e = estimate(
            &rank_one_projection(n),
            &EstimateConfig { seed: s.cfg.seed, warm_start, ..EstimateConfig::default() },
        )?;
        values.push(e.value);
        warm = Some(e.witness.into_nilpotent());
    }
    let nonincreasing = values.windows(2).all(|w| w[1] <= w[0]);
    let floor = values.iter().all(|&v| v >= 0.5 - 1e-6);
    let middle = values.get(1).is_some_and(|&v| v <= PROJECTION_THRESHOLD);
    Ok(Outcome {
        pass: nonincreasing && floor && middle,
        detail: json!({
            "dims": dims,
            "estimates": values,
            "threshold": PROJECTION_THRESHOLD,
            "threshold_note": "calibrated: measured estimates are 0.577, 0.512 and 0.505 at dims 4, 16 and 64",
        }),
    })
}

/// Connected set of at most `max` boxes grown from the origin.
fn random_connected(seed: u64, max: usize) -> BTreeSet<GridBox> {
    let mut rng = seeded_rng(seed);
    let target = rng.random_range(1..=max);
    let mut set = BTreeSet::from([GridBox::ORIGIN]);
    while set.len() < target {
        let anchor = *set.iter().nth(rng.random_range(0..set.len())).expect("nonempty");
        let nb = anchor.neighbors().nth(rng.random_range(0..8)).expect("eight neighbors");
        set.insert(nb);
    }
    set
}

fn box_planner(s: &Suite) -> CliResult<Outcome> {
    let mut failures = Vec::new();
    for i in 0..100u64 {
        let set = random_connected(derive_seed(s.cfg.seed, 6_000 + i), 25);
        let bs = BoxSet::new(1.0, set.clone())?;
        let p = plan(&bs);
        let mut current = set.clone();
        let mut ok = validate_plan(&bs, &p).is_ok();
        for step in &p.steps {
            ok &= step.removed != GridBox::ORIGIN && current.remove(&step.removed);
            ok &= current.contains(&GridBox::ORIGIN) && is_connected(&current);
        }
        ok &= current == BTreeSet::from([GridBox::ORIGIN]);
        if !ok {
            failures.push(i);
        }
    }
    Ok(Outcome { pass: failures.is_empty(), detail: json!({"cases": 100, "failures": failures}) })
}

fn pair_synthesis_trend(s: &Suite) -> CliResult<Outcome> {
    let ells = s.cfg.ladder(&[64, 512], 16);
    let (lo, hi) = (ells[0], *ells.last().expect("two orders"));
    let targets = [
        ("polar_4x4", boxify(&polar_spectrum(4, 4, 0)?, 0.5)?),
        ("l_shape", BoxSet::new(1.0, [GridBox(0, 0), GridBox(1, 0), GridBox(1, 1)])?),
    ];
    let mut pass = true;
    let mut rows = Vec::new();
    for (name, bs) in &targets {
        let (p_lo, p_hi) = (synth_pair(bs, lo)?, synth_pair(bs, hi)?);
        let centers = bs.centers();
        let mut on_centers = true;
        for p in [&p_lo, &p_hi] {
            let spec = p.spectrum();
            on_centers &=
                spec.points().iter().all(|q| centers.iter().any(|c| (c - q.value).norm() <= DEFAULT_MERGE_TOL));
            on_centers &= centers.iter().all(|&c| spec.contains(c, DEFAULT_MERGE_TOL));
        }
        // Dense eigenvalues of the assembled matrix, where it is small.
        if p_lo.dim() <= QUICK_DIM_CAP {
            let dense = spectrum(&p_lo.normal()?, true)?;
            on_centers &=
                dense.points().iter().all(|q| centers.iter().any(|c| (c - q.value).norm() <= DEFAULT_MERGE_TOL));
        }
        let decreasing = p_hi.defect() < p_lo.defect();
        pass &= decreasing && on_centers;
        rows.push(json!({
            "target": name,
            "boxes": bs.len(),
            "ells": [lo, hi],
            "defects": [p_lo.defect(), p_hi.defect()],
            "decreasing": decreasing,
            "spectrum_on_centers": on_centers,
        }));
    }
    Ok(Outcome { pass, detail: json!({"targets": rows}) })
}

pub const TOWER_GRID_STEP: f64 = 0.01;

fn uhf_tower(s: &Suite) -> CliResult<Outcome> {
    let r = Ratio::new(2, 2)?;
    let depth = if s.cfg.quick { 2 } else { 3 };
    let levels = build_tower(&bookkeeping(12, &vec![r; depth])?)?;
    let mut pass = true;
    let mut rows = Vec::new();
    let mut densities: Vec<f64> = Vec::new();
    for lv in &levels {
        let density = disk_density(&lv.spec, TOWER_GRID_STEP)?;
        let inc_ok = match (lv.increment, lv.pairing_cost) {
            (Some(i), Some(c)) => (i - c).abs() <= 1e-9,
            _ => true,
        };
        pass &= lv.shape.identity_holds() && lv.within_bound() && inc_ok;
        densities.push(density);
        rows.push(json!({
            "ell": lv.shape.ell,
            "n": lv.shape.n,
            "m": lv.shape.m,
            "q": lv.shape.q,
            "pairing_cost": lv.pairing_cost,
            "paper_bound": lv.paper_bound,
            "increment": lv.increment,
            "disk_density": density,
        }));
    }
    let decreasing = densities.windows(2).all(|w| w[1] < w[0]);
    Ok(Outcome { pass: pass && decreasing, detail: json!({"levels": rows, "density_decreasing": decreasing}) })
}

fn brute_force_bottleneck(a: &[Complex64], b: &[Complex64]) -> f64 {
    fn go(i: usize, a: &[Complex64], b: &[Complex64], used: &mut [bool], cur: f64, best: &mut f64) {
        if cur >= *best {
            return;
        }
        if i == a.len() {
            *best = cur;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, a, b, used, cur.max((a[i] - b[j]).norm()), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(0, a, b, &mut vec![false; b.len()], 0.0, &mut best);
    best
}

fn random_multiset<R: Rng>(rng: &mut R, n: usize, lattice: bool) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            if lattice {
                Complex64::new(rng.random_range(-3..=3) as f64 / 2.0, rng.random_range(-3..=3) as f64 / 2.0)
            } else {
                complex_normal(rng)
            }
        })
        .collect()
}

fn bottleneck_matcher(s: &Suite) -> CliResult<Outcome> {
    let mut failures = Vec::new();
    for i in 0..100u64 {
        let mut rng = seeded_rng(derive_seed(s.cfg.seed, 9_000 + i));
        let n = rng.random_range(1..=7);
        let lattice = i % 2 == 0;
        let (a, b) = (random_multiset(&mut rng, n, lattice), random_multiset(&mut rng, n, lattice));
        if bottleneck_match_values(&a, &b)?.cost != brute_force_bottleneck(&a, &b) {
            failures.push(i);
        }
    }
    Ok(Outcome { pass: failures.is_empty(), detail: json!({"cases": 100, "failures": failures}) })
}

fn obstructions(s: &Suite) -> CliResult<Outcome> {
    let mut cap_failures = Vec::new();
    let mut shift_failures = Vec::new();
    for i in 0..50u64 {
        let mut rng = seeded_rng(derive_seed(s.cfg.seed, 10_000 + i));
        let sizes: Vec<usize> = (0..rng.random_range(1..=4)).map(|_| rng.random_range(1..=6)).collect();
        let alg = BlockAlgebra::new(sizes.clone())?;
        let blocks = sizes
            .iter()
            .map(|&d| {
                let core = complex_gaussian(d, &mut rng).strict_upper();
                CertifiedNilpotent::new(SchurForm { basis: haar_unitary(d, &mut rng), core })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cap = degree_cap_check(&alg, &blocks)?;
        let refs: Vec<&CertifiedNilpotent> = blocks.iter().collect();
        let whole = CertifiedNilpotent::direct_sum(&refs)?;
        let ok = cap.holds
            && cap.cap == alg.max_block()
            && cap.block_index.iter().zip(&sizes).all(|(k, s)| k <= s)
            && alg.contains(whole.materialized());
        if !ok {
            cap_failures.push(i);
        }

        let t = complex_gaussian(rng.random_range(1..=6), &mut rng);
        let root = -t.trace() / t.dim() as f64;
        let mut grid: Vec<Complex64> = (-5..=5)
            .flat_map(|a| (-5..=5).map(move |b| root + Complex64::new(a as f64 * 0.1, b as f64 * 0.1)))
            .collect();
        grid.push(Complex64::new(0.0, 0.0));
        let scan = shift_scan(&t, &grid);
        let zeros: Vec<Complex64> = scan.bounds.iter().filter(|b| b.1 == 0.0).map(|b| b.0).collect();
        if scan.root != root || zeros.iter().any(|&z| z != root) || zeros.is_empty() {
            shift_failures.push(i);
        }
    }
    let mut dyadic_ok = true;
    for n in 1..=10u32 {
        let d = dyadic_example(n)?;
        let size = 1u64 << n;
        let lb = lower_bounds(&d.matrix())?;
        dyadic_ok &= d.trace_lower_exact == (size + 1, 2 * size)
            && lb.trace_lower == (size + 1) as f64 / (2 * size) as f64
            && d.trace_lower == lb.trace_lower;
    }
    Ok(Outcome {
        pass: cap_failures.is_empty() && shift_failures.is_empty() && dyadic_ok,
        detail: json!({"degree_cap_failures": cap_failures, "shift_failures": shift_failures, "dyadic_exact": dyadic_ok}),
    })
}

fn scaled_gaussian<R: Rng>(rng: &mut R, d: usize, scale: f64) -> ComplexMatrix {
    complex_gaussian(d, rng).scaled(Complex64::new(scale, 0.0))
}

fn tensor_suite(s: &Suite) -> CliResult<Outcome> {
    let mut approx_failures = Vec::new();
    let mut worst_phi: f64 = 0.0;
    for i in 0..100u64 {
        let mut rng = seeded_rng(derive_seed(s.cfg.seed, 11_000 + i));
        let stem_dims: Vec<usize> = (0..rng.random_range(1..=2)).map(|_| rng.random_range(1..=4)).collect();
        let tail = [rng.random_range(2..=4)];
        let eps = rng.random_range(0.0..0.5);
        let stem_s: Vec<ComplexMatrix> = stem_dims.iter().map(|&d| scaled_gaussian(&mut rng, d, 0.5)).collect();
        let stem_r: Vec<ComplexMatrix> = stem_s.iter().map(|m| m + &scaled_gaussian(&mut rng, m.dim(), eps)).collect();
        let fs = TensorFamily::new(stem_s, TailRule::Positive, &tail)?;
        let fr = TensorFamily::new(stem_r, TailRule::Positive, &tail)?;
        for k in stem_dims.len()..=2 {
            if !tensorapprox_check(&fs, &fr, k)?.holds {
                approx_failures.push(i);
            }
        }
        if stem_dims.len() == 1 {
            worst_phi = worst_phi.max(fs.phi_residual(1)?);
        }
    }

    // Jordan-tail fixtures: the order-3 nilpotent tail squares to zero.
    let mut rng = seeded_rng(derive_seed(s.cfg.seed, 11_500));
    let fams = (0..3)
        .map(|_| TensorFamily::new(vec![scaled_gaussian(&mut rng, 2, 1.0)], TailRule::Nilpotent, &[3]))
        .collect::<Result<Vec<_>, _>>()?;
    let pv = product_vanish_check(&fams, 2, 2)?;
    let short = product_vanish_check(&fams, 2, 1)?;
    let products_ok = pv.tail_index == 2 && pv.vanishes && !short.vanishes;

    let m = nilpotent_tail(3)?;
    let mut elem = PolyMatrix::zero(2 * m.dim());
    for j in 0..3 {
        let coeffs: Vec<Complex64> = (0..=j).map(|d| Complex64::new(1.0 + d as f64, -0.5)).collect();
        elem =
            elem.add(&PolyMatrix::scalar_times(&coeffs, &scaled_gaussian(&mut rng, 2, 1.0).kron(m.materialized()))?)?;
    }
    let cone_ok = !elem.is_zero() && cone_check(&elem, 2)? && !cone_check(&elem, 1)?;

    Ok(Outcome {
        pass: approx_failures.is_empty() && products_ok && cone_ok && worst_phi <= 1e-9,
        detail: json!({
            "families": 100,
            "approx_failures": approx_failures,
            "worst_phi_residual": worst_phi,
            "product_vanish": pv,
            "shorter_product_vanishes": short.vanishes,
            "cone_square_zero": cone_ok,
        }),
    })
}
