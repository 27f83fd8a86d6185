//! Application drivers: each maps its input to a moment sequence, runs the
//! engine, and maps the result back.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::border::{border_basis, mult_matrices, BorderOptions};
use crate::decomp::{common_roots, decompose, solve_weights, Decomposition, Term};
use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FieldValue};
use crate::linalg::Matrix;
use crate::moments::{moments_of_decomposition, MomentSequence};
use crate::polys::{simplex, Exponent, MonomialOrder, Polynomial};

/// A homogeneous form of degree `degree` in `nvars` variables `x0, …`,
/// stored by its raw polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricTensor {
    pub field: FieldSpec,
    pub degree: u32,
    pub nvars: usize,
    pub terms: BTreeMap<Exponent, FieldValue>,
}

impl SymmetricTensor {
    pub fn new<I>(field: FieldSpec, degree: u32, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, FieldValue)>,
    {
        if nvars < 2 {
            return Err(Error::InvalidInput("a tensor needs at least the variables x0 and x1".into()));
        }
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.nvars() != nvars || e.degree() != degree {
                return Err(Error::InvalidInput(format!("term {e} is not of degree {degree} in {nvars} variables")));
            }
            if !field.owns(&c) {
                return Err(Error::InvalidInput(format!("coefficient {c} is not in field {field}")));
            }
            if map.insert(e.clone(), c).is_some() {
                return Err(Error::InvalidInput(format!("duplicate term {e}")));
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(SymmetricTensor { field, degree, nvars, terms: map })
    }

    /// `Σ ω_i (x0 + ξ_i1 x1 + … )^d`.
    pub fn from_decomposition(dec: &Decomposition, field: FieldSpec, degree: u32, nvars: usize) -> Result<Self> {
        let mut acc = Polynomial::zero(nvars);
        for t in dec.terms() {
            let mut linear = Polynomial::monomial(Exponent::unit(nvars, 0), field.one());
            for (j, c) in t.point.iter().enumerate() {
                linear.add_term(Exponent::unit(nvars, j + 1), c.clone());
            }
            let mut power = Polynomial::constant(nvars, field.one());
            for _ in 0..degree {
                power = power.mul(&linear);
            }
            acc = acc.add(&power.scale(&t.weight));
        }
        SymmetricTensor::new(field, degree, nvars, acc.terms().map(|(e, c)| (e.clone(), c.clone())))
    }
}

/// `d! / (α_0! ⋯ α_n!)`.
pub fn multinomial(alpha: &[u32]) -> BigInt {
    let mut acc = BigInt::one();
    let mut total = 0u32;
    for &a in alpha {
        for i in 1..=a {
            total += 1;
            acc = acc * total / i;
        }
    }
    acc
}

/// `σ_α` = raw coefficient of `x0^{d-|α|} x^α` divided by its multinomial
/// coefficient, on the simplex `|α| ≤ d` in the variables `x1, …`.
pub fn tensor_to_moments(t: &SymmetricTensor) -> Result<MomentSequence> {
    let n = t.nvars - 1;
    let mut entries = Vec::new();
    for alpha in simplex(n, t.degree, &MonomialOrder::deglex(n)) {
        let mut full = vec![t.degree - alpha.degree()];
        full.extend_from_slice(alpha.as_slice());
        let binom = t.field.from_bigint(&multinomial(&full));
        let value = match t.terms.get(&Exponent::new(full)) {
            Some(c) => c.checked_div(&binom).map_err(|_| {
                Error::InvalidInput(format!("multinomial coefficient of {alpha} vanishes in {}", t.field))
            })?,
            None => t.field.zero(),
        };
        entries.push((alpha, value));
    }
    MomentSequence::new(n, t.field, entries)
}

/// Waring decomposition `t = Σ ω_i (x0 + ξ_i1 x1 + …)^d`, checked by exact
/// re-expansion.
pub fn tensor_decompose(t: &SymmetricTensor, seed: u64) -> Result<Decomposition> {
    let sigma = tensor_to_moments(t)?;
    let dec = prony_grid(&sigma, &MonomialOrder::deglex(t.nvars - 1), seed)?;
    let back = SymmetricTensor::from_decomposition(&dec, t.field, t.degree, t.nvars)?;
    if back.terms != t.terms {
        return Err(Error::VerificationFailed(
            "re-expansion differs from the tensor; some point may need x0 = 0, try a linear change of coordinates"
                .into(),
        ));
    }
    Ok(dec)
}

/// Border basis, tables and decomposition of a sampled sequence.
pub fn prony_grid(samples: &MomentSequence, order: &MonomialOrder, seed: u64) -> Result<Decomposition> {
    let res = border_basis(samples, order, BorderOptions::default())?;
    let tables = mult_matrices(samples, &res)?;
    decompose(samples, &res, &tables, seed)
}

/// Evaluation code `C = {c : Σ c_i ξ_i^α = 0 for |α| ≤ degree}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeSpec {
    pub field: FieldSpec,
    pub points: Vec<Vec<FieldValue>>,
    pub degree: u32,
}

impl CodeSpec {
    pub fn new(field: FieldSpec, points: Vec<Vec<FieldValue>>, degree: u32) -> Result<Self> {
        let n = points.first().map(|p| p.len()).ok_or_else(|| Error::InvalidInput("a code needs points".into()))?;
        if n == 0 || points.iter().any(|p| p.len() != n || p.iter().any(|c| !field.owns(c))) {
            return Err(Error::InvalidInput(format!("points must all have {n} coordinates in {field}")));
        }
        for i in 0..points.len() {
            if points[..i].contains(&points[i]) {
                return Err(Error::InvalidInput(format!("point {} is repeated", i + 1)));
            }
        }
        Ok(CodeSpec { field, points, degree })
    }

    pub fn nvars(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, word: &[FieldValue]) -> Result<bool> {
        Ok(syndrome_moments(self, word)?.iter().all(|(_, v)| v.is_zero()))
    }
}

/// `σ_α = Σ_i word_i ξ_i^α` for `|α| ≤ degree`.
pub fn syndrome_moments(code: &CodeSpec, word: &[FieldValue]) -> Result<MomentSequence> {
    if word.len() != code.len() {
        return Err(Error::InvalidInput(format!("word has length {}, code has length {}", word.len(), code.len())));
    }
    if let Some(w) = word.iter().find(|w| !code.field.owns(w)) {
        return Err(Error::InvalidInput(format!("symbol {w} is not in {}", code.field)));
    }
    let n = code.nvars();
    let entries = simplex(n, code.degree, &MonomialOrder::deglex(n)).into_iter().map(|e| {
        let mut acc = code.field.zero();
        for (pt, w) in code.points.iter().zip(word) {
            if !w.is_zero() {
                acc.add_mul(w, &e.eval(pt));
            }
        }
        (e, acc)
    });
    MomentSequence::new(n, code.field, entries)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub corrected: Vec<FieldValue>,
    /// `(position, value)` with 0-based positions, ascending.
    pub errors: Vec<(usize, FieldValue)>,
    pub locators: Vec<Polynomial>,
}

/// Locates and removes errors from `received`.
///
/// Error positions are the common roots of the relations found on the
/// syndrome sequence; their values solve the syndrome equations. The result
/// is accepted only when the corrected word lies in the code.
pub fn decode(code: &CodeSpec, received: &[FieldValue]) -> Result<DecodeOutcome> {
    let sigma = syndrome_moments(code, received)?;
    if sigma.iter().all(|(_, v)| v.is_zero()) {
        return Ok(DecodeOutcome { corrected: received.to_vec(), errors: Vec::new(), locators: Vec::new() });
    }
    let res = border_basis(&sigma, &MonomialOrder::deglex(code.nvars()), BorderOptions { compute_q: false })?;
    if res.k.is_empty() {
        return Err(Error::DecodingFailure("no error locator found; too many errors for the data".into()));
    }
    let roots = common_roots(&res.k, &code.points);
    let (positions, weights) = locate_errors(code, &sigma, &roots, res.rank())?;
    let errors: Vec<(usize, FieldValue)> = positions.into_iter().zip(weights).filter(|(_, w)| !w.is_zero()).collect();
    let mut corrected = received.to_vec();
    for (i, w) in &errors {
        corrected[*i] -= w;
    }
    if !code.contains(&corrected)? {
        return Err(Error::DecodingFailure("corrected word is not in the code".into()));
    }
    Ok(DecodeOutcome { corrected, errors, locators: res.k })
}

/// Error values on the common roots. When the roots outnumber the errors and
/// the full system is singular, every subset of `rank` roots is tried and a
/// unique consistent one is accepted.
fn locate_errors(
    code: &CodeSpec,
    sigma: &MomentSequence,
    roots: &[usize],
    rank: usize,
) -> Result<(Vec<usize>, Vec<FieldValue>)> {
    let solve = |idx: &[usize]| {
        let pts: Vec<Vec<FieldValue>> = idx.iter().map(|&i| code.points[i].clone()).collect();
        solve_weights(&pts, sigma, sigma.support())
    };
    let failure = || Error::DecodingFailure(format!("no consistent error values at positions {roots:?}"));
    match solve(roots) {
        Ok(w) => return Ok((roots.to_vec(), w)),
        Err(Error::SingularSystem) if rank > 0 && rank < roots.len() => {}
        Err(Error::SingularSystem | Error::InconsistentSystem) => return Err(failure()),
        Err(e) => return Err(e),
    }
    let mut found: Option<(Vec<usize>, Vec<FieldValue>)> = None;
    for subset in combinations(roots, rank) {
        match solve(&subset) {
            Ok(w) if w.iter().all(|x| !x.is_zero()) => {
                if found.is_some() {
                    return Err(Error::DecodingFailure(format!(
                        "several error patterns of weight {rank} explain the syndromes"
                    )));
                }
                found = Some((subset, w));
            }
            Ok(_) | Err(Error::SingularSystem | Error::InconsistentSystem) => {}
            Err(e) => return Err(e),
        }
    }
    found.ok_or_else(failure)
}

/// `k`-element subsets of `items`, in lexicographic order of positions.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + items.len() - k) else { break };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// `ω · u^γ` in a sparse polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseTerm {
    pub exponent: Vec<u32>,
    pub weight: FieldValue,
}

/// `σ_α = h(ζ_1^{α_1}, …, ζ_n^{α_n})` on the simplex of degree `degree`.
pub fn sample_sparse(field: FieldSpec, terms: &[SparseTerm], zeta: &[u64], degree: u32) -> Result<MomentSequence> {
    let n = zeta.len();
    let mut dec_terms = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exponent.len() != n {
            return Err(Error::InvalidInput(format!("exponent {:?} does not have {n} entries", t.exponent)));
        }
        let point = zeta.iter().zip(&t.exponent).map(|(&z, &g)| field.from_i64(z as i64).pow(g)).collect();
        dec_terms.push(Term { weight: t.weight.clone(), point });
    }
    let support = simplex(n, degree, &MonomialOrder::deglex(n));
    moments_of_decomposition(&Decomposition::new(dec_terms), n, field, &support)
}

/// `k` with `base^k = value`.
pub fn integer_log(value: &FieldValue, base: u64) -> Result<u32> {
    let not_power = || Error::NotAPower { value: value.to_string(), base: base.to_string() };
    let mut v = value.to_integer().ok_or_else(not_power)?;
    if base < 2 || !v.is_positive() {
        return Err(not_power());
    }
    let b = BigInt::from(base);
    let mut k = 0u32;
    while !v.is_one() {
        if !(&v % &b).to_u64().is_some_and(|r| r == 0) {
            return Err(not_power());
        }
        v /= &b;
        k += 1;
    }
    Ok(k)
}

/// Reads exponents off decomposed points `ξ_ij = ζ_j^{γ_ij}`.
pub fn sparse_terms(dec: &Decomposition, zeta: &[u64]) -> Result<Vec<SparseTerm>> {
    let mut out = Vec::with_capacity(dec.rank());
    for t in dec.terms() {
        let exponent = t.point.iter().zip(zeta).map(|(x, &z)| integer_log(x, z)).collect::<Result<Vec<u32>>>()?;
        out.push(SparseTerm { exponent, weight: t.weight.clone() });
    }
    out.sort_by(|a, b| a.exponent.cmp(&b.exponent));
    Ok(out)
}

/// Sparse polynomial `h` from samples `σ_α = h(ζ^α)`.
pub fn sparse_interpolate(evals: &MomentSequence, zeta: &[u64], seed: u64) -> Result<Vec<SparseTerm>> {
    if zeta.len() != evals.nvars() {
        return Err(Error::InvalidInput(format!("{} bases for {} variables", zeta.len(), evals.nvars())));
    }
    if let Some(z) = zeta.iter().find(|&&z| z < 2) {
        return Err(Error::InvalidInput(format!("base {z} must be at least 2")));
    }
    let dec = prony_grid(evals, &MonomialOrder::deglex(evals.nvars()), seed)?;
    sparse_terms(&dec, zeta)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VanishingIdeal {
    /// Border basis of the ideal of the points.
    pub relations: Vec<Polynomial>,
    /// `interpolants[i](ξ_j) = δ_ij`, in input order.
    pub interpolants: Vec<Polynomial>,
    pub basis: Vec<Exponent>,
}

/// Relations vanishing on `points` and their interpolation polynomials,
/// from `σ = Σ w_i e_{ξ_i}` on the simplex of degree `degree`.
pub fn vanishing_ideal(
    field: FieldSpec,
    points: &[Vec<FieldValue>],
    degree: u32,
    weights: Option<&[FieldValue]>,
) -> Result<VanishingIdeal> {
    let n = points.first().map(|p| p.len()).ok_or_else(|| Error::InvalidInput("no points given".into()))?;
    if n == 0 || points.iter().any(|p| p.len() != n || p.iter().any(|c| !field.owns(c))) {
        return Err(Error::InvalidInput(format!("points must all have {n} coordinates in {field}")));
    }
    let ws: Vec<FieldValue> = match weights {
        Some(w) if w.len() != points.len() => {
            return Err(Error::InvalidInput(format!("{} weights for {} points", w.len(), points.len())))
        }
        Some(w) if w.iter().any(|x| x.is_zero() || !field.owns(x)) => {
            return Err(Error::InvalidInput("weights must be nonzero field elements".into()))
        }
        Some(w) => w.to_vec(),
        None => vec![field.one(); points.len()],
    };
    for i in 0..points.len() {
        if points[..i].contains(&points[i]) {
            return Err(Error::InvalidInput(format!("point {} is repeated", i + 1)));
        }
    }
    // Accumulate directly: the decomposition type sorts its terms.
    let support = simplex(n, degree, &MonomialOrder::deglex(n));
    let entries = support.into_iter().map(|e| {
        let mut acc = field.zero();
        for (pt, w) in points.iter().zip(&ws) {
            acc.add_mul(w, &e.eval(pt));
        }
        (e, acc)
    });
    let sigma = MomentSequence::new(n, field, entries)?;
    let res = border_basis(&sigma, &MonomialOrder::deglex(n), BorderOptions { compute_q: false })?;
    res.require_certified()?;
    if res.rank() != points.len() {
        return Err(Error::VerificationFailed(format!("rank {} for {} points", res.rank(), points.len())));
    }
    // Rows ξ_j^{b_l}; the interpolants are the columns of the inverse.
    let r = res.rank();
    let vander = Matrix::from_rows(field, points.iter().map(|pt| res.b.iter().map(|e| e.eval(pt)).collect()).collect());
    let mut interpolants = Vec::with_capacity(r);
    for i in 0..r {
        let mut rhs = vec![field.zero(); r];
        rhs[i] = field.one();
        let coeffs = vander.solve(&rhs)?;
        interpolants.push(Polynomial::from_terms(n, res.b.iter().cloned().zip(coeffs)));
    }
    Ok(VanishingIdeal { relations: res.k, interpolants, basis: res.b })
}
