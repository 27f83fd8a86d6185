//! Points and weights from multiplication tables.
//!
//! A generic combination `M_λ = Σ λ_k M_k` has simple eigenvalues when the
//! points are distinct; its eigenvectors are, up to scale, the idempotents
//! `u_i` of the quotient algebra. Coordinates come from the moment ratios
//! `ξ_ij = ⟨σ | x_j v_i⟩ / ⟨σ | v_i⟩` and weights from `ω_i = ⟨σ | u_i⟩`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::border::{BorderBasisResult, MultTables};
use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FieldValue};
use crate::linalg::{eval_univariate, Matrix};
use crate::moments::MomentSequence;
use crate::polys::{Exponent, Polynomial};

/// One weighted point `ω · e_ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub weight: FieldValue,
    pub point: Vec<FieldValue>,
}

/// `Σ ω_i e_{ξ_i}`, with terms kept sorted by point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    terms: Vec<Term>,
}

impl Decomposition {
    pub fn new(mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| cmp_points(&a.point, &b.point));
        Decomposition { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Coordinatewise comparison; rationals by value, residues by representative.
pub fn cmp_points(a: &[FieldValue], b: &[FieldValue]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = match (x, y) {
            (FieldValue::Rational(p), FieldValue::Rational(q)) => p.cmp(q),
            (FieldValue::Prime(p), FieldValue::Prime(q)) => p.value().cmp(&q.value()),
            _ => panic!("points from different fields"),
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// An eigenvalue with a spanning vector of its (one-dimensional) eigenspace.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub value: FieldValue,
    pub vector: Vec<FieldValue>,
}

/// Eigenpairs of a rational matrix with simple rational spectrum.
pub fn rational_eigen(m: &Matrix) -> Result<Vec<Eigenpair>> {
    if !m.field().is_rational() {
        return Err(Error::UnsupportedField(format!("rational_eigen over {}", m.field())));
    }
    eigen(m, false)
}

/// Eigenpairs of `m` when every eigenvalue lies in the field and is simple.
///
/// Over `F_p` the roots are found by trying every residue, which is only
/// enabled with `exhaustive_fp`.
pub fn eigen(m: &Matrix, exhaustive_fp: bool) -> Result<Vec<Eigenpair>> {
    assert!(m.is_square(), "eigenvalues of a non-square matrix");
    let n = m.rows();
    let field = m.field();
    let charpoly = m.charpoly();
    let roots = match field {
        FieldSpec::Rational => {
            let coeffs: Vec<BigRational> =
                charpoly.iter().map(|c| c.as_rational().expect("rational entries").clone()).collect();
            rational_roots(&coeffs)
                .ok_or(Error::IrrationalSpectrum)?
                .into_iter()
                .map(FieldValue::Rational)
                .collect::<Vec<_>>()
        }
        FieldSpec::Prime { p } => {
            if !exhaustive_fp {
                return Err(Error::UnsupportedField(format!(
                    "eigenvalues over Z/{p}Z need exhaustive root search, which is disabled"
                )));
            }
            prime_roots(&charpoly, p).ok_or(Error::IrrationalSpectrum)?
        }
    };
    debug_assert_eq!(roots.len(), n);
    let mut distinct: Vec<FieldValue> = Vec::new();
    for r in &roots {
        if distinct.contains(r) {
            return Err(Error::DefectiveEigenvalue(r.to_string()));
        }
        distinct.push(r.clone());
    }
    let mut out = Vec::with_capacity(n);
    for value in distinct {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] -= &value;
        }
        let mut null = shifted.nullspace();
        if null.len() != 1 {
            return Err(Error::DefectiveEigenvalue(value.to_string()));
        }
        out.push(Eigenpair { value, vector: null.pop().expect("one vector") });
    }
    Ok(out)
}

/// All roots (with multiplicity) of a polynomial over `F_p` by trial, or
/// `None` if it does not split.
fn prime_roots(coeffs: &[FieldValue], p: u64) -> Option<Vec<FieldValue>> {
    let field = FieldSpec::Prime { p };
    let mut poly = coeffs.to_vec();
    let mut roots = Vec::new();
    let mut x = 0u64;
    while poly.len() > 1 && x < p {
        let xv = field.from_i64(x as i64);
        if eval_univariate(&poly, &xv).is_zero() {
            poly = deflate(&poly, &xv);
            roots.push(xv);
        } else {
            x += 1;
        }
    }
    (poly.len() == 1).then_some(roots)
}

/// Quotient of `f` by `x - a` when `f(a) = 0`.
fn deflate(f: &[FieldValue], a: &FieldValue) -> Vec<FieldValue> {
    let n = f.len() - 1;
    let mut q = vec![a.zero_like(); n];
    let mut carry = a.zero_like();
    for i in (0..n).rev() {
        carry = &f[i + 1] + &(&carry * a);
        q[i] = carry.clone();
    }
    q
}

/// All rational roots with multiplicity, or `None` if the polynomial has a
/// root outside `Q`. Candidates `u/v` satisfy `u | f_0` and `v | f_n` for the
/// primitive integer multiple of `f`.
pub fn rational_roots(coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut f = primitive_integer(coeffs);
    while f.len() > 1 && f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    let mut roots = Vec::new();
    while f.len() > 1 && f[0].is_zero() {
        f.remove(0);
        roots.push(BigRational::zero());
    }
    if f.len() == 1 {
        return Some(roots);
    }
    let num_divs = divisors(&f[0].magnitude().clone());
    let den_divs = divisors(&f[f.len() - 1].magnitude().clone());
    'outer: for v in &den_divs {
        for u in &num_divs {
            if !u.gcd(v).is_one() {
                continue;
            }
            for sign in [Sign::Plus, Sign::Minus] {
                let u = BigInt::from_biguint(sign, u.clone());
                let v = BigInt::from_biguint(Sign::Plus, v.clone());
                while f.len() > 1 && is_int_root(&f, &u, &v) {
                    f = deflate_int(&f, &u, &v);
                    roots.push(BigRational::new(u.clone(), v.clone()));
                }
                if f.len() == 1 {
                    break 'outer;
                }
            }
        }
    }
    (f.len() == 1).then_some(roots)
}

fn primitive_integer(coeffs: &[BigRational]) -> Vec<BigInt> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

/// Whether `u/v` is a root; uses the necessary conditions `(v - u) | f(1)`
/// and `(v + u) | f(-1)` before the full evaluation.
fn is_int_root(f: &[BigInt], u: &BigInt, v: &BigInt) -> bool {
    let f1: BigInt = f.iter().sum();
    let fm1: BigInt = f.iter().enumerate().map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c }).sum();
    let d1 = v - u;
    if !f1.is_zero() && (d1.is_zero() || !(&f1 % &d1).is_zero()) {
        return false;
    }
    let d2 = v + u;
    if !fm1.is_zero() && (d2.is_zero() || !(&fm1 % &d2).is_zero()) {
        return false;
    }
    // v^n f(u/v) = Σ f_i u^i v^(n-i)
    let n = f.len() - 1;
    let mut acc = f[n].clone();
    let mut vpow = BigInt::one();
    for i in (0..n).rev() {
        vpow *= v;
        acc = acc * u + &f[i] * &vpow;
    }
    acc.is_zero()
}

/// Quotient of `f` by `v x - u`; exact for a root `u/v` in lowest terms.
fn deflate_int(f: &[BigInt], u: &BigInt, v: &BigInt) -> Vec<BigInt> {
    let n = f.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    // f_n = v q_{n-1}; f_i = v q_{i-1} - u q_i
    q[n - 1] = &f[n] / v;
    for i in (1..n).rev() {
        q[i - 1] = (&f[i] + u * &q[i]) / v;
    }
    q
}

/// Positive divisors of `n` (`n > 0`), ascending.
fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut x = d.clone();
            next.push(x.clone());
            for _ in 0..e {
                x *= &p;
                next.push(x.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Prime factorization with multiplicities.
fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();
    let push = |p: BigUint, out: &mut Vec<(BigUint, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some((_, e)) => *e += 1,
        None => out.push((p, 1)),
    };
    let mut d = 2u32;
    while d < 10_000 && rest > BigUint::one() {
        let db = BigUint::from(d);
        while (&rest % &db).is_zero() {
            rest /= &db;
            push(db.clone(), &mut out);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, &mut out);
            continue;
        }
        let f = pollard_rho(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    out.sort();
    out
}

fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pb = BigUint::from(p);
        if *n == pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of the composite `n` (Brent's variant).
fn pollard_rho(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y, mut g) = (BigUint::from(2u32), BigUint::from(2u32), BigUint::one());
        while g.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            g = diff.gcd(n);
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

/// Knobs of [`decompose_with`].
#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    pub seed: u64,
    pub max_attempts: usize,
    /// Allow trial root search over prime fields.
    pub exhaustive_fp: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { seed: 0, max_attempts: 10, exhaustive_fp: false }
    }
}

/// A decomposition together with the idempotents `u_i` (in the same order as
/// the terms), `u_i(ξ_j) = δ_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigendecomposition {
    pub decomposition: Decomposition,
    pub interpolants: Vec<Polynomial>,
}

/// Weighted points of a certified result, with default options and `seed`.
pub fn decompose(
    sigma: &MomentSequence,
    res: &BorderBasisResult,
    tables: &MultTables,
    seed: u64,
) -> Result<Decomposition> {
    let opts = DecomposeOptions { seed, ..DecomposeOptions::default() };
    Ok(decompose_with(sigma, res, tables, &opts)?.decomposition)
}

pub fn decompose_with(
    sigma: &MomentSequence,
    res: &BorderBasisResult,
    tables: &MultTables,
    opts: &DecomposeOptions,
) -> Result<Eigendecomposition> {
    res.require_certified()?;
    let r = res.rank();
    let field = res.field;
    if r == 0 {
        verify(sigma, &Decomposition::default())?;
        return Ok(Eigendecomposition { decomposition: Decomposition::default(), interpolants: Vec::new() });
    }
    if !field.is_rational() && !opts.exhaustive_fp {
        return Err(Error::UnsupportedField(format!(
            "decomposition over {field} needs exhaustive root search; use common roots against candidates instead"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let bound = 2 * (r as i64) * (r as i64);
    for _ in 0..opts.max_attempts {
        let lambdas: Vec<FieldValue> = (0..res.nvars).map(|_| field.from_i64(rng.gen_range(1..=bound))).collect();
        let m = tables.combine(&lambdas);
        let pairs = match eigen(&m, opts.exhaustive_fp) {
            Ok(p) => p,
            Err(Error::DefectiveEigenvalue(_)) => continue,
            Err(e) => return Err(e),
        };
        let vs: Vec<Polynomial> = pairs.iter().map(|e| in_basis(&res.p, &e.vector, res.nvars)).collect();
        let Some(found) = terms_from_eigenvectors(sigma, &vs)? else { continue };
        let mut paired = found;
        paired.sort_by(|a, b| cmp_points(&a.0.point, &b.0.point));
        let (terms, interpolants): (Vec<Term>, Vec<Polynomial>) = paired.into_iter().unzip();
        let decomposition = Decomposition::new(terms);
        verify(sigma, &decomposition)?;
        return Ok(Eigendecomposition { decomposition, interpolants });
    }
    Err(Error::RetriesExhausted(opts.max_attempts))
}

/// `Σ coords_j p_j`.
fn in_basis(basis: &[Polynomial], coords: &[FieldValue], nvars: usize) -> Polynomial {
    let mut out = Polynomial::zero(nvars);
    for (c, p) in coords.iter().zip(basis) {
        if !c.is_zero() {
            out = out.add(&p.scale(c));
        }
    }
    out
}

/// Points, weights and idempotents from raw eigenvector polynomials. `None`
/// when some `⟨σ | v_i⟩` or `v_i(ξ_i)` vanishes (bad combination).
pub fn terms_from_eigenvectors(sigma: &MomentSequence, vs: &[Polynomial]) -> Result<Option<Vec<(Term, Polynomial)>>> {
    let nvars = sigma.nvars();
    let mut out = Vec::with_capacity(vs.len());
    for v in vs {
        let s = sigma.apply(v)?;
        let Ok(s_inv) = s.inv() else { return Ok(None) };
        let mut point = Vec::with_capacity(nvars);
        for j in 0..nvars {
            let xv = v.mono_mul(&Exponent::unit(nvars, j));
            point.push(&sigma.apply(&xv)? * &s_inv);
        }
        let Ok(norm) = v.evaluate(&point).inv() else { return Ok(None) };
        let u = v.scale(&norm);
        let weight = sigma.apply(&u)?;
        out.push((Term { weight, point }, u));
    }
    Ok(Some(out))
}

/// Checks `Σ ω_i ξ_i^α = σ_α` on the whole support.
pub fn verify(sigma: &MomentSequence, dec: &Decomposition) -> Result<()> {
    for (e, v) in sigma.iter() {
        let mut acc = sigma.field().zero();
        for t in dec.terms() {
            acc.add_mul(&t.weight, &e.eval(&t.point));
        }
        if &acc != v {
            return Err(Error::VerificationFailed(format!("moment {e} is {v}, reconstruction gives {acc}")));
        }
    }
    Ok(())
}

/// Indices of the candidates where every polynomial of `k` vanishes.
pub fn common_roots(k: &[Polynomial], candidates: &[Vec<FieldValue>]) -> Vec<usize> {
    (0..candidates.len()).filter(|&i| k.iter().all(|f| f.evaluate(&candidates[i]).is_zero())).collect()
}

/// Weights `ω` with `Σ ω_i ξ_i^α = σ_α` for `α` in `exponents`, checked
/// against every other moment of `sigma`.
pub fn solve_weights(
    points: &[Vec<FieldValue>],
    sigma: &MomentSequence,
    exponents: &[Exponent],
) -> Result<Vec<FieldValue>> {
    let field = sigma.field();
    if points.is_empty() {
        verify(sigma, &Decomposition::default()).map_err(|_| Error::InconsistentSystem)?;
        return Ok(Vec::new());
    }
    let mut rows = Vec::with_capacity(exponents.len());
    let mut rhs = Vec::with_capacity(exponents.len());
    for e in exponents {
        let value = sigma.get(e.as_slice()).ok_or_else(|| Error::Support(vec![e.clone()]))?;
        rows.push(points.iter().map(|pt| e.eval(pt)).collect());
        rhs.push(value.clone());
    }
    let a = Matrix::from_rows(field, rows);
    if exponents.len() < points.len() || a.rank() < points.len() {
        return Err(Error::SingularSystem);
    }
    let weights = a.solve(&rhs)?;
    let terms = weights.iter().zip(points).map(|(w, pt)| Term { weight: w.clone(), point: pt.clone() }).collect();
    verify(sigma, &Decomposition { terms }).map_err(|_| Error::InconsistentSystem)?;
    Ok(weights)
}
