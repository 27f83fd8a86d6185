//! Planted instances and the invariant checks run on them.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hankel_border::border::{minimal_groebner, normal_form, MultTables};
use hankel_border::decomp::{decompose_with, DecomposeOptions};
use hankel_border::linalg::Matrix;
use hankel_border::moments::simplex_moments;
use hankel_border::polys::{simplex, Exponent};
use hankel_border::{
    border_basis, mult_matrices, BorderBasisResult, BorderOptions, Decomposition, FieldSpec, FieldValue,
    MomentSequence, MonomialOrder, Polynomial, Term,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const PRIME: FieldSpec = FieldSpec::Prime { p: 32003 };

pub struct Instance {
    pub field: FieldSpec,
    pub nvars: usize,
    pub planted: Decomposition,
    pub degree: u32,
    pub sigma: MomentSequence,
    pub res: BorderBasisResult,
    pub tables: MultTables,
    /// Lower degrees that certified a smaller rank, as `(D, rank)`.
    pub premature: Vec<(u32, usize)>,
}

fn random_value(field: FieldSpec, rng: &mut ChaCha8Rng) -> FieldValue {
    match field.modulus() {
        Some(p) => field.from_i64(rng.gen_range(0..p) as i64),
        None => field.from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3)).expect("nonzero denominator"),
    }
}

/// `r` distinct points with nonzero weights.
pub fn planted(field: FieldSpec, nvars: usize, r: usize, rng: &mut ChaCha8Rng) -> Decomposition {
    let mut points: Vec<Vec<FieldValue>> = Vec::new();
    while points.len() < r {
        let p: Vec<FieldValue> = (0..nvars).map(|_| random_value(field, rng)).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let terms = points
        .into_iter()
        .map(|point| {
            let mut weight = random_value(field, rng);
            while weight.is_zero() {
                weight = random_value(field, rng);
            }
            Term { weight, point }
        })
        .collect();
    Decomposition::new(terms)
}

/// Runs the engine on the smallest simplex degree that certifies the
/// planted rank.
pub fn instance(
    planted: Decomposition,
    field: FieldSpec,
    nvars: usize,
    order: &MonomialOrder,
) -> Result<Instance, String> {
    let r = planted.rank();
    let mut premature = Vec::new();
    for degree in 0..=4 * r as u32 + 4 {
        let sigma = simplex_moments(&planted, nvars, field, degree);
        let res = border_basis(&sigma, order, BorderOptions::default()).map_err(|e| e.to_string())?;
        if res.certified && res.rank() != r {
            premature.push((degree, res.rank()));
        } else if res.certified {
            let tables = mult_matrices(&sigma, &res).map_err(|e| e.to_string())?;
            return Ok(Instance { field, nvars, planted, degree, sigma, res, tables, premature });
        }
    }
    Err("no certifying degree".into())
}

pub fn random_instance(field: FieldSpec, rng: &mut ChaCha8Rng) -> Result<Instance, String> {
    let nvars = rng.gen_range(1..=3);
    let r = rng.gen_range(1..=8);
    instance(planted(field, nvars, r, rng), field, nvars, &MonomialOrder::deglex(nvars))
}

fn delta(field: FieldSpec, i: usize, j: usize) -> FieldValue {
    if i == j {
        field.one()
    } else {
        field.zero()
    }
}

/// `⟨p_i, q_j⟩ = δ_ij`.
pub fn check_biorthogonal(inst: &Instance) -> Result<(), String> {
    let q = inst.res.q().map_err(|e| e.to_string())?;
    for (i, p) in inst.res.p.iter().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            let v = inst.sigma.inner(p, qj).map_err(|e| e.to_string())?;
            if v != delta(inst.field, i, j) {
                return Err(format!("<p_{i}, q_{j}> = {v}"));
            }
        }
    }
    Ok(())
}

/// Every `p_α` and every relation is `x^α` plus terms in `b` below `α`.
pub fn check_triangular(inst: &Instance) -> Result<(), String> {
    let res = &inst.res;
    let b: BTreeSet<&Exponent> = res.b.iter().collect();
    let pairs = res.b.iter().zip(&res.p).chain(res.d.iter().zip(&res.k));
    for (alpha, f) in pairs {
        if f.coeff(alpha).is_none_or(|c| !c.is_one()) {
            return Err(format!("{alpha} is not a monic leading term"));
        }
        for e in f.support().filter(|e| *e != alpha) {
            if !b.contains(e) || res.order.compare(e, alpha) != std::cmp::Ordering::Less {
                return Err(format!("term {e} of the element led by {alpha}"));
            }
        }
    }
    Ok(())
}

/// Every relation is orthogonal to every `x^γ` keeping the product inside
/// the support.
pub fn check_relations_orthogonal(inst: &Instance) -> Result<(), String> {
    let n = inst.nvars;
    for (alpha, k) in inst.res.d.iter().zip(&inst.res.k) {
        let kd = k.max_degree().unwrap_or(0);
        let Some(room) = inst.degree.checked_sub(kd) else { continue };
        for g in simplex(n, room, &inst.res.order) {
            let v = inst.sigma.apply(&k.mono_mul(&g)).map_err(|e| e.to_string())?;
            if !v.is_zero() {
                return Err(format!("<k_{alpha}, x^{g}> = {v}"));
            }
        }
    }
    Ok(())
}

pub fn check_commuting(inst: &Instance) -> Result<(), String> {
    let ms: &[Matrix] = &inst.tables.matrices;
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            if ms[i].mul(&ms[j]) != ms[j].mul(&ms[i]) {
                return Err(format!("M_{} and M_{} do not commute", i + 1, j + 1));
            }
        }
    }
    Ok(())
}

pub fn check_vanishing(inst: &Instance) -> Result<(), String> {
    for k in &inst.res.k {
        for t in inst.planted.terms() {
            if !k.evaluate(&t.point).is_zero() {
                return Err(format!("relation does not vanish at {:?}", t.point));
            }
        }
    }
    Ok(())
}

pub fn check_decomposition(inst: &Instance, seed: u64) -> Result<(), String> {
    let opts = DecomposeOptions { seed, exhaustive_fp: true, ..DecomposeOptions::default() };
    let dec = decompose_with(&inst.sigma, &inst.res, &inst.tables, &opts).map_err(|e| e.to_string())?.decomposition;
    let back = simplex_moments(&dec, inst.nvars, inst.field, inst.degree);
    if back != inst.sigma {
        return Err("moments of the decomposition differ from the input".into());
    }
    if dec != inst.planted {
        return Err("decomposition differs from the planted one".into());
    }
    Ok(())
}

/// Structural checks on one certified instance.
pub fn check_all(inst: &Instance, seed: u64) -> Result<(), String> {
    check_biorthogonal(inst)?;
    check_triangular(inst)?;
    check_relations_orthogonal(inst)?;
    check_commuting(inst)?;
    check_vanishing(inst)?;
    check_decomposition(inst, seed)
}

/// `b = c` and the minimal elements of `k` form a Gröbner basis.
pub fn check_groebner(inst: &Instance) -> Result<(), String> {
    let res = &inst.res;
    let b: BTreeSet<&Exponent> = res.b.iter().collect();
    let c: BTreeSet<&Exponent> = res.c.iter().collect();
    if b != c {
        return Err("b and c differ".into());
    }
    let g = minimal_groebner(res).map_err(|e| e.to_string())?;
    for k in &res.k {
        let rem = k.reduce(&g, &res.order);
        if !rem.is_zero() {
            return Err(format!("relation led by {:?} leaves remainder {rem:?}", res.order.leading(k).map(|t| t.0)));
        }
    }
    for gi in &g {
        if !normal_form(res, &inst.tables, gi).map_err(|e| e.to_string())?.is_zero() {
            return Err("a Groebner element has nonzero normal form".into());
        }
    }
    Ok(())
}

/// The polynomial in `span(x^b)` agreeing with `f` on the planted points.
pub fn interpolate_on_basis(inst: &Instance, f: &Polynomial) -> Polynomial {
    let rows: Vec<Vec<FieldValue>> =
        inst.planted.terms().iter().map(|t| inst.res.b.iter().map(|e| e.eval(&t.point)).collect()).collect();
    let rhs: Vec<FieldValue> = inst.planted.terms().iter().map(|t| f.evaluate(&t.point)).collect();
    let coeffs = Matrix::from_rows(inst.field, rows).solve(&rhs).expect("points are separated by the basis");
    Polynomial::from_terms(inst.nvars, inst.res.b.iter().cloned().zip(coeffs))
}
