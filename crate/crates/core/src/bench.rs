//! Timing harness: border bases of the vanishing ideal of random points.
//!
//! For each `(n, r)` the harness samples `r` distinct points in `F_p^n`,
//! builds `σ_α = Σ ξ_i^α` on a simplex of degree `D`, and times
//! [`border_basis`].

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::border::{border_basis, BorderBasisResult, BorderOptions};
use crate::decomp::{Decomposition, Term};
use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FieldValue};
use crate::moments::{simplex_moments, MomentSequence};
use crate::polys::{simplex_size, MonomialOrder};

/// How the simplex degree `D` is chosen for each instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeRule {
    /// Smallest `D` whose simplex certifies the planted rank.
    Minimal,
    Fixed(u32),
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub field: FieldSpec,
    pub nvars: Vec<usize>,
    pub ranks: Vec<usize>,
    pub degree: DegreeRule,
    pub seed: u64,
    pub repetitions: usize,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.field.is_rational() {
            return Err(Error::InvalidInput("the benchmark runs over a prime field".into()));
        }
        if self.ranks.contains(&0) {
            return Err(Error::InvalidInput("point counts must be at least 1".into()));
        }
        if self.nvars.contains(&0) {
            return Err(Error::InvalidInput("the number of variables must be at least 1".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidInput("repetitions must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub nvars: usize,
    pub rank: usize,
    pub degree: u32,
    pub moments: usize,
    /// Median wall time of `border_basis`, in seconds.
    pub seconds: f64,
    pub certified: bool,
}

/// `r` distinct uniform points of `F_p^n`, drawn with rejection.
pub fn sample_points(field: FieldSpec, nvars: usize, r: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<FieldValue>>> {
    let p = field.modulus().ok_or_else(|| Error::InvalidInput("sampling needs a prime field".into()))?;
    if (p as f64).powi(nvars as i32) < r as f64 {
        return Err(Error::InvalidInput(format!("F_{p}^{nvars} has fewer than {r} points")));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(r);
    while out.len() < r {
        let coords: Vec<u64> = (0..nvars).map(|_| rng.gen_range(0..p)).collect();
        if seen.insert(coords.clone()) {
            out.push(coords.into_iter().map(|c| field.from_i64(c as i64)).collect());
        }
    }
    Ok(out)
}

/// `σ_α = Σ ξ_i^α` on the simplex of degree `degree`.
pub fn unit_weight_moments(field: FieldSpec, points: &[Vec<FieldValue>], degree: u32) -> MomentSequence {
    let nvars = points.first().map_or(1, |p| p.len());
    let dec = Decomposition::new(points.iter().map(|p| Term { weight: field.one(), point: p.clone() }).collect());
    simplex_moments(&dec, nvars, field, degree)
}

/// Smallest simplex degree with at least `r` monomials.
pub fn starting_degree(nvars: usize, r: usize) -> u32 {
    (0..).find(|&d| simplex_size(nvars, d) >= r).expect("simplex sizes grow without bound")
}

/// Smallest `D` whose simplex certifies a rank-`r` result on `points`,
/// together with that run.
pub fn minimal_degree(
    field: FieldSpec,
    points: &[Vec<FieldValue>],
) -> Result<(u32, MomentSequence, BorderBasisResult)> {
    let nvars = points[0].len();
    let r = points.len();
    let order = MonomialOrder::deglex(nvars);
    let opts = BorderOptions { compute_q: false };
    let mut d = starting_degree(nvars, r);
    loop {
        let sigma = unit_weight_moments(field, points, d);
        let res = border_basis(&sigma, &order, opts)?;
        if res.certified && res.rank() == r {
            return Ok((d, sigma, res));
        }
        // A certified run with the wrong rank means the points collide in
        // the sampled field; more data would not help.
        if res.certified {
            return Err(Error::BenchFailure(format!("certified rank {} for {r} points", res.rank())));
        }
        d += 1;
        if d > 4 * r as u32 + 4 {
            return Err(Error::BenchFailure(format!("no certifying degree found for {r} points")));
        }
    }
}

/// Times one `(n, r)` cell on the given points.
pub fn run_cell(cfg: &BenchConfig, points: &[Vec<FieldValue>]) -> Result<BenchRow> {
    let nvars = points[0].len();
    let r = points.len();
    let (degree, sigma) = match cfg.degree {
        DegreeRule::Minimal => {
            let (d, s, _) = minimal_degree(cfg.field, points)?;
            (d, s)
        }
        DegreeRule::Fixed(d) => (d, unit_weight_moments(cfg.field, points, d)),
    };
    let order = MonomialOrder::deglex(nvars);
    let mut times = Vec::with_capacity(cfg.repetitions);
    let mut last = None;
    for _ in 0..cfg.repetitions {
        let start = Instant::now();
        let res = border_basis(&sigma, &order, BorderOptions::default())?;
        times.push(start.elapsed().as_secs_f64());
        last = Some(res);
    }
    let res = last.expect("at least one repetition");
    if !res.certified || res.rank() != r {
        return Err(Error::BenchFailure(format!(
            "n = {nvars}, r = {r}, D = {degree}: certified = {}, rank = {}",
            res.certified,
            res.rank()
        )));
    }
    Ok(BenchRow { nvars, rank: r, degree, moments: sigma.len(), seconds: median(&mut times), certified: res.certified })
}

/// Point sets of every cell, in row order, from one generator seeded once.
pub fn sample_instances(cfg: &BenchConfig) -> Result<Vec<Vec<Vec<FieldValue>>>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for &n in &cfg.nvars {
        for &r in &cfg.ranks {
            out.push(sample_points(cfg.field, n, r, &mut rng)?);
        }
    }
    Ok(out)
}

/// Every cell of the configuration, sequentially.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    sample_instances(cfg)?.iter().map(|pts| run_cell(cfg, pts)).collect()
}

/// Same cells and points as [`run_bench`], one thread per cell. Timings
/// interfere with each other; use for validation only.
pub fn run_bench_parallel(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let instances = sample_instances(cfg)?;
    std::thread::scope(|scope| {
        let handles: Vec<_> = instances.iter().map(|pts| scope.spawn(move || run_cell(cfg, pts))).collect();
        handles.into_iter().map(|h| h.join().expect("bench worker panicked")).collect()
    })
}

pub fn median(times: &mut [f64]) -> f64 {
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
    let n = times.len();
    if n % 2 == 1 {
        times[n / 2]
    } else {
        (times[n / 2 - 1] + times[n / 2]) / 2.0
    }
}

pub const CSV_HEADER: &str = "n,r,D,s,wall_time_s,certified";

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        writeln!(out, "{},{},{},{},{:.6},{}", row.nvars, row.rank, row.degree, row.moments, row.seconds, row.certified)
            .expect("writing to a String");
    }
    out
}
