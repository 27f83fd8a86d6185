//! Border bases of the kernel of a Hankel operator.
//!
//! [`border_basis`] walks the monomials of the support in increasing order.
//! Each candidate `x^α` is projected against the current basis with
//! [`proj`]-style modified Gram-Schmidt, giving `p_α = x^α + (lower terms on
//! b)`. If some admissible monomial `x^γ` pairs nontrivially with `p_α`,
//! `α` joins the monomial basis `b` and `γ` the dual exponents `c`; otherwise
//! `p_α` is a recurrence relation of the sequence and `α` joins `d`.
//!
//! When the relations cover the whole border of `b` and the data reaches far
//! enough (see [`certify`]), the relations form a border basis of the ideal
//! and [`mult_matrices`] yields the multiplication tables of the quotient
//! algebra in the basis `p`.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FieldValue};
use crate::linalg::Matrix;
use crate::moments::MomentSequence;
use crate::polys::{Exponent, MonomialOrder, Polynomial, ScaledMonomial};

/// Output of [`border_basis`].
#[derive(Clone, Debug, PartialEq)]
pub struct BorderBasisResult {
    pub nvars: usize,
    pub field: FieldSpec,
    /// Monomial basis exponents, in processing order.
    pub b: Vec<Exponent>,
    /// Dual exponents, `c[i]` paired with `b[i]`.
    pub c: Vec<Exponent>,
    /// Leading exponents of the relations.
    pub d: Vec<Exponent>,
    pub p: Vec<Polynomial>,
    pub q: Option<Vec<Polynomial>>,
    pub m: Vec<ScaledMonomial>,
    /// Relations, `k[i]` with leading exponent `d[i]`.
    pub k: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub certified: bool,
    /// Border monomials left without a relation (`∂b \ d`).
    pub missing: Vec<Exponent>,
}

impl BorderBasisResult {
    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn q(&self) -> Result<&[Polynomial]> {
        self.q.as_deref().ok_or_else(|| Error::InvalidInput("the dual basis q was not computed".into()))
    }

    pub fn require_certified(&self) -> Result<()> {
        if self.certified {
            Ok(())
        } else {
            Err(Error::NotCertified(self.missing.clone()))
        }
    }
}

/// `∂b`: monomials one step outside `b`. The border of the empty set is `{0}`.
pub fn border_of(b: &[Exponent], nvars: usize) -> BTreeSet<Exponent> {
    if b.is_empty() {
        return BTreeSet::from([Exponent::zero(nvars)]);
    }
    let inside: HashSet<&Exponent> = b.iter().collect();
    let mut out = BTreeSet::new();
    for e in b {
        for i in 0..nvars {
            let n = e.bump(i);
            if !inside.contains(&n) {
                out.insert(n);
            }
        }
    }
    out
}

/// `g = f - Σ λ_i p_i` with `⟨g, m_i⟩_σ = 0` for every `i`, computed
/// sequentially: each step uses the already updated `g`.
///
/// Requires `⟨p_i, m_j⟩_σ = 0` for `j < i` and `⟨p_i, m_i⟩_σ = 1`.
pub fn proj(sigma: &MomentSequence, f: &Polynomial, ps: &[Polynomial], ms: &[Polynomial]) -> Result<Polynomial> {
    assert_eq!(ps.len(), ms.len(), "proj needs as many p as m");
    let mut g = f.clone();
    for (p, m) in ps.iter().zip(ms) {
        let lambda = sigma.inner(&g, m)?;
        if !lambda.is_zero() {
            g = g.sub(&p.scale(&lambda));
        }
    }
    Ok(g)
}

/// Exponents of `∂b ∩ s` outside `d` whose shifts by every element of `c`
/// stay in the support, sorted by `order`. `s` is the support minus `b ∪ d`.
pub fn next_monomials(
    sigma: &MomentSequence,
    b: &[Exponent],
    d: &[Exponent],
    c: &[Exponent],
    order: &MonomialOrder,
) -> Vec<Exponent> {
    let done: HashSet<&Exponent> = b.iter().chain(d).collect();
    let mut out: Vec<Exponent> = border_of(b, sigma.nvars())
        .into_iter()
        .filter(|a| sigma.contains(a.as_slice()) && !done.contains(a))
        .filter(|a| c.iter().all(|g| sigma.get_sum(a.as_slice(), g.as_slice()).is_some()))
        .collect();
    out.sort_by(|x, y| order.compare(x, y));
    out
}

/// Tuning knobs of [`border_basis`].
#[derive(Clone, Copy, Debug)]
pub struct BorderOptions {
    /// Compute the dual basis `q` (needed for multiplication tables).
    pub compute_q: bool,
}

impl Default for BorderOptions {
    fn default() -> Self {
        BorderOptions { compute_q: true }
    }
}

/// Border basis of the recurrence ideal of `sigma`.
pub fn border_basis(sigma: &MomentSequence, order: &MonomialOrder, opts: BorderOptions) -> Result<BorderBasisResult> {
    if sigma.is_empty() {
        return Err(Error::EmptySupport);
    }
    if order.nvars() != sigma.nvars() {
        return Err(Error::InvalidInput(format!(
            "order has {} variables, sequence has {}",
            order.nvars(),
            sigma.nvars()
        )));
    }
    let mut engine = Engine::new(sigma, order, opts.compute_q);
    engine.run()?;
    Ok(engine.finish())
}

/// Dense working state. Polynomials `p_i` are coefficient vectors over the
/// positions of `b`, `q_i` over the positions of `c`.
struct Engine<'a> {
    sigma: &'a MomentSequence,
    order: &'a MonomialOrder,
    compute_q: bool,
    /// Support sorted by `order`; positions double as ranks.
    ranked: Vec<Exponent>,
    rank_of: HashMap<Exponent, usize>,
    used_in_c: Vec<bool>,
    b: Vec<Exponent>,
    c: Vec<Exponent>,
    scale: Vec<FieldValue>,
    p: Vec<Vec<FieldValue>>,
    q: Vec<Vec<FieldValue>>,
    /// `hank[j][l] = σ(b_j + c_l)` where defined.
    hank: Vec<Vec<Option<FieldValue>>>,
    /// `pc[i][l] = ⟨p_i, x^{c_l}⟩_σ`; zero for `l < i`.
    pc: Vec<Vec<FieldValue>>,
    d: Vec<Exponent>,
    k: Vec<Vec<FieldValue>>,
    processed: HashSet<Exponent>,
    /// Pending border candidates, by rank in the order.
    pending: BTreeSet<usize>,
}

impl<'a> Engine<'a> {
    fn new(sigma: &'a MomentSequence, order: &'a MonomialOrder, compute_q: bool) -> Self {
        let mut ranked = sigma.support().to_vec();
        ranked.sort_by(|a, b| order.compare(a, b));
        let rank_of = ranked.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let mut e = Engine {
            sigma,
            order,
            compute_q,
            used_in_c: vec![false; ranked.len()],
            ranked,
            rank_of,
            b: Vec::new(),
            c: Vec::new(),
            scale: Vec::new(),
            p: Vec::new(),
            q: Vec::new(),
            hank: Vec::new(),
            pc: Vec::new(),
            d: Vec::new(),
            k: Vec::new(),
            processed: HashSet::new(),
            pending: BTreeSet::new(),
        };
        let origin = Exponent::zero(sigma.nvars());
        if let Some(&r) = e.rank_of.get(&origin) {
            e.pending.insert(r);
        }
        e
    }

    fn zero(&self) -> FieldValue {
        self.sigma.field().zero()
    }

    fn moment(&self, a: &Exponent, g: &Exponent) -> Option<&'a FieldValue> {
        self.sigma.get_sum(a.as_slice(), g.as_slice())
    }

    /// Smallest pending candidate whose shifts by `c` stay in the support.
    /// Candidates failing the test are dropped for good, since `c` only grows.
    fn next_candidate(&mut self) -> Option<Exponent> {
        loop {
            let r = self.pending.pop_first()?;
            let alpha = &self.ranked[r];
            if self.c.iter().all(|g| self.moment(alpha, g).is_some()) {
                return Some(alpha.clone());
            }
        }
    }

    fn run(&mut self) -> Result<()> {
        while let Some(alpha) = self.next_candidate() {
            self.step(alpha)?;
        }
        Ok(())
    }

    fn step(&mut self, alpha: Exponent) -> Result<()> {
        let r = self.b.len();
        // Row σ(α + c_l); defined for all l because α passed the candidate test.
        let row: Vec<FieldValue> = self
            .c
            .iter()
            .map(|g| self.moment(&alpha, g).cloned().expect("candidate shifts stay in the support"))
            .collect();

        // p_α = proj(x^α, p, m); g holds the coefficients on b, the leading
        // coefficient of x^α is 1.
        let mut g = vec![self.zero(); r];
        for i in 0..r {
            let mut acc = row[i].clone();
            for j in 0..i {
                if g[j].is_zero() {
                    continue;
                }
                match &self.hank[j][i] {
                    Some(h) => acc.add_mul(&g[j], h),
                    None => {
                        return Err(Error::Support(vec![self.b[j].add(&self.c[i])]));
                    }
                }
            }
            let lambda = &acc * &self.scale[i];
            if lambda.is_zero() {
                continue;
            }
            for (gj, pij) in g.iter_mut().zip(&self.p[i]) {
                gj.sub_mul(&lambda, pij);
            }
        }

        self.processed.insert(alpha.clone());
        match self.find_pairing(&alpha, &g) {
            Some((rank, value)) => self.accept(alpha, g, row, rank, value),
            None => {
                self.d.push(alpha);
                self.k.push(g);
            }
        }
        Ok(())
    }

    /// First unused `γ` (in order) with `x^γ p_α` inside the support and
    /// `⟨p_α, x^γ⟩_σ ≠ 0`.
    fn find_pairing(&self, alpha: &Exponent, g: &[FieldValue]) -> Option<(usize, FieldValue)> {
        let nz: Vec<usize> = (0..g.len()).filter(|&j| !g[j].is_zero()).collect();
        let simplex = self.sigma.simplex_degree();
        let top = nz.iter().map(|&j| self.b[j].degree()).chain([alpha.degree()]).max().unwrap_or(0);
        'gamma: for (rank, gamma) in self.ranked.iter().enumerate() {
            if self.used_in_c[rank] {
                continue;
            }
            if let Some(deg) = simplex {
                // Ranked by degree first: nothing further can fit.
                if gamma.degree() + top > deg {
                    break;
                }
            }
            let Some(lead) = self.moment(alpha, gamma) else { continue };
            let mut acc = lead.clone();
            for &j in &nz {
                match self.moment(&self.b[j], gamma) {
                    Some(v) => acc.add_mul(&g[j], v),
                    None => continue 'gamma,
                }
            }
            if !acc.is_zero() {
                return Some((rank, acc));
            }
        }
        None
    }

    fn accept(
        &mut self,
        alpha: Exponent,
        mut g: Vec<FieldValue>,
        row: Vec<FieldValue>,
        rank: usize,
        value: FieldValue,
    ) {
        let r = self.b.len();
        let gamma = self.ranked[rank].clone();
        let scale = value.inv().expect("pairing value is nonzero");
        g.push(self.sigma.field().one());

        // Hankel block: new row for α, new column for γ.
        let mut new_row: Vec<Option<FieldValue>> = row.into_iter().map(Some).collect();
        new_row.push(self.moment(&alpha, &gamma).cloned());
        for (j, hrow) in self.hank.iter_mut().enumerate() {
            hrow.push(self.sigma.get_sum(self.b[j].as_slice(), gamma.as_slice()).cloned());
        }
        self.hank.push(new_row);

        self.b.push(alpha.clone());
        self.c.push(gamma.clone());
        self.used_in_c[rank] = true;
        self.scale.push(scale.clone());
        self.p.push(g);

        if self.compute_q {
            // Column of ⟨p_i, x^γ⟩ for the earlier p_i, then the new row,
            // which vanishes before the diagonal.
            for i in 0..r {
                let mut acc = self.zero();
                for (j, coef) in self.p[i].iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let h = self.hank[j][r].as_ref().expect("x^γ p_i lies in the support");
                    acc.add_mul(coef, h);
                }
                self.pc[i].push(acc);
            }
            let mut pr = vec![self.zero(); r];
            pr.push(value);
            self.pc.push(pr);

            // q_α = proj(m_α, q, p).
            let mut qv = vec![self.zero(); r + 1];
            qv[r] = scale;
            for i in 0..r {
                let mut lambda = self.zero();
                for l in i..=r {
                    if !qv[l].is_zero() {
                        lambda.add_mul(&qv[l], &self.pc[i][l]);
                    }
                }
                if lambda.is_zero() {
                    continue;
                }
                for (ql, qil) in qv.iter_mut().zip(&self.q[i]) {
                    ql.sub_mul(&lambda, qil);
                }
            }
            self.q.push(qv);
        }

        for i in 0..self.sigma.nvars() {
            let n = alpha.bump(i);
            if self.processed.contains(&n) {
                continue;
            }
            if let Some(&rk) = self.rank_of.get(&n) {
                self.pending.insert(rk);
            }
        }
    }

    fn finish(self) -> BorderBasisResult {
        let nvars = self.sigma.nvars();
        let field = self.sigma.field();
        let lift = |coeffs: &[FieldValue], basis: &[Exponent], lead: Option<&Exponent>| {
            let mut poly = Polynomial::from_terms(nvars, basis.iter().cloned().zip(coeffs.iter().cloned()));
            if let Some(e) = lead {
                poly.add_term(e.clone(), field.one());
            }
            poly
        };
        let p: Vec<Polynomial> = self.p.iter().map(|v| lift(v, &self.b, None)).collect();
        let q = self.compute_q.then(|| self.q.iter().map(|v| lift(v, &self.c, None)).collect());
        let k: Vec<Polynomial> =
            self.k.iter().zip(&self.d).map(|(v, a)| lift(v, &self.b[..v.len()], Some(a))).collect();
        let m = self
            .c
            .iter()
            .zip(&self.scale)
            .map(|(e, s)| ScaledMonomial { exponent: e.clone(), scale: s.clone() })
            .collect();
        let mut res = BorderBasisResult {
            nvars,
            field,
            b: self.b,
            c: self.c,
            d: self.d,
            p,
            q,
            m,
            k,
            order: self.order.clone(),
            certified: false,
            missing: Vec::new(),
        };
        let border = border_of(&res.b, nvars);
        let dset: BTreeSet<Exponent> = res.d.iter().cloned().collect();
        res.missing = border.difference(&dset).cloned().collect();
        res.missing.sort_by(|a, b| res.order.compare(a, b));
        res.certified = certify(&res, self.sigma);
        res
    }
}

/// `B⁺ = B ∪ x_1 B ∪ … ∪ x_n B`.
pub fn closure(b: &[Exponent], nvars: usize) -> BTreeSet<Exponent> {
    let mut out: BTreeSet<Exponent> = b.iter().cloned().collect();
    for e in b {
        for i in 0..nvars {
            out.insert(e.bump(i));
        }
    }
    out
}

/// Sufficient condition for the relations to be a border basis of the
/// recurrence ideal: `d = ∂b` and every product `x^β x^γ` with `β ∈ b⁺`,
/// `γ ∈ c⁺` has a known moment. On simplex supports of degree `D` the second
/// part reduces to `maxdeg(b⁺) + maxdeg(c⁺) ≤ D`.
pub fn certify(res: &BorderBasisResult, sigma: &MomentSequence) -> bool {
    let border = border_of(&res.b, res.nvars);
    let dset: BTreeSet<Exponent> = res.d.iter().cloned().collect();
    if border != dset {
        return false;
    }
    let bplus = closure(&res.b, res.nvars);
    let cplus = closure(&res.c, res.nvars);
    if let Some(deg) = sigma.simplex_degree() {
        let mb = bplus.iter().map(|e| e.degree()).max().unwrap_or(0);
        let mc = cplus.iter().map(|e| e.degree()).max().unwrap_or(0);
        return cplus.is_empty() || mb + mc <= deg;
    }
    bplus.iter().all(|b| cplus.iter().all(|c| sigma.get_sum(b.as_slice(), c.as_slice()).is_some()))
}

/// Multiplication tables of the quotient algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct MultTables {
    /// `matrices[k]` is the matrix of multiplication by `x_{k+1}` in basis
    /// `p`: column `j` holds the coordinates of `x_{k+1} p_j`.
    pub matrices: Vec<Matrix>,
}

impl MultTables {
    pub fn rank(&self) -> usize {
        self.matrices.first().map_or(0, |m| m.rows())
    }

    /// Linear combination `Σ λ_k M_k`.
    pub fn combine(&self, lambdas: &[FieldValue]) -> Matrix {
        let mut it = self.matrices.iter().zip(lambdas);
        let (m0, l0) = it.next().expect("at least one variable");
        let mut acc = m0.scale(l0);
        for (m, l) in it {
            acc = acc.add(&m.scale(l));
        }
        acc
    }
}

/// `M_k = (⟨σ | x_k p_j q_i⟩)_{i,j}`, computed as `Qᵀ H_k P` with
/// `H_k = (σ(c_l + b_j + e_k))`.
pub fn mult_matrices(sigma: &MomentSequence, res: &BorderBasisResult) -> Result<MultTables> {
    res.require_certified()?;
    let q = res.q()?;
    let r = res.rank();
    let field = res.field;
    let coeff_matrix = |polys: &[Polynomial], basis: &[Exponent]| {
        let mut m = Matrix::zeros(field, r, r);
        for (i, poly) in polys.iter().enumerate() {
            for (l, e) in basis.iter().enumerate() {
                if let Some(v) = poly.coeff(e) {
                    m[(i, l)] = v.clone();
                }
            }
        }
        m
    };
    let pmat = coeff_matrix(&res.p, &res.b);
    let qmat = coeff_matrix(q, &res.c);
    let mut matrices = Vec::with_capacity(res.nvars);
    for k in 0..res.nvars {
        let mut h = Matrix::zeros(field, r, r);
        for (l, gamma) in res.c.iter().enumerate() {
            let shifted = gamma.bump(k);
            for (j, beta) in res.b.iter().enumerate() {
                h[(l, j)] = sigma
                    .get_sum(shifted.as_slice(), beta.as_slice())
                    .cloned()
                    .ok_or_else(|| Error::Support(vec![shifted.add(beta)]))?;
            }
        }
        matrices.push(qmat.mul(&h).mul(&pmat.transpose()));
    }
    Ok(MultTables { matrices })
}

/// Tables re-expressed in the monomial basis `x^b` (same ordering as `b`).
pub fn monomial_tables(res: &BorderBasisResult, tables: &MultTables) -> MultTables {
    let r = res.rank();
    // Column j of `basis_change` holds the x^b-coordinates of p_j.
    let mut basis_change = Matrix::zeros(res.field, r, r);
    for (j, p) in res.p.iter().enumerate() {
        for (l, e) in res.b.iter().enumerate() {
            if let Some(v) = p.coeff(e) {
                basis_change[(l, j)] = v.clone();
            }
        }
    }
    let inverse = invert_unit_triangular(&basis_change);
    MultTables { matrices: tables.matrices.iter().map(|m| basis_change.mul(m).mul(&inverse)).collect() }
}

fn invert_unit_triangular(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut aug = Matrix::zeros(m.field(), n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = m.field().one();
    }
    aug.rref();
    let mut inv = Matrix::zeros(m.field(), n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    inv
}

/// Normal forms modulo the border basis, computed by walking monomials up
/// from `1` with the multiplication tables and memoizing every step.
pub struct NormalForm<'a> {
    res: &'a BorderBasisResult,
    tables: &'a MultTables,
    cache: HashMap<Exponent, Vec<FieldValue>>,
}

impl<'a> NormalForm<'a> {
    pub fn new(res: &'a BorderBasisResult, tables: &'a MultTables) -> Result<Self> {
        res.require_certified()?;
        Ok(NormalForm { res, tables, cache: HashMap::new() })
    }

    /// Coordinates of `x^e` in the basis `p`.
    pub fn monomial_coords(&mut self, e: &Exponent) -> Vec<FieldValue> {
        if let Some(v) = self.cache.get(e) {
            return v.clone();
        }
        let field = self.res.field;
        let r = self.res.rank();
        let v = if r == 0 {
            Vec::new()
        } else if e.is_zero() {
            // 1 = p_0: the first basis element is always the constant.
            let mut v = vec![field.zero(); r];
            v[0] = field.one();
            v
        } else {
            let i = (0..e.nvars()).find(|&i| e.as_slice()[i] > 0).expect("nonzero exponent");
            let prev = self.monomial_coords(&e.lower(i).expect("positive component"));
            self.tables.matrices[i].mul_vec(&prev)
        };
        self.cache.insert(e.clone(), v.clone());
        v
    }

    /// Coordinates of `f` in the basis `p`.
    pub fn coords(&mut self, f: &Polynomial) -> Vec<FieldValue> {
        let mut acc = vec![self.res.field.zero(); self.res.rank()];
        for (e, c) in f.terms() {
            let v = self.monomial_coords(e);
            for (a, x) in acc.iter_mut().zip(&v) {
                a.add_mul(c, x);
            }
        }
        acc
    }

    /// The representative of `f` in `span(x^b)`.
    pub fn reduce(&mut self, f: &Polynomial) -> Polynomial {
        let coords = self.coords(f);
        let mut out = Polynomial::zero(self.res.nvars);
        for (c, p) in coords.iter().zip(&self.res.p) {
            if !c.is_zero() {
                out = out.add(&p.scale(c));
            }
        }
        out
    }
}

/// One-shot normal form of `f`.
pub fn normal_form(res: &BorderBasisResult, tables: &MultTables, f: &Polynomial) -> Result<Polynomial> {
    Ok(NormalForm::new(res, tables)?.reduce(f))
}

/// Elements of `k` whose leading exponents are minimal for the componentwise
/// order: a minimal Gröbner basis of the ideal for `res.order`.
pub fn minimal_groebner(res: &BorderBasisResult) -> Result<Vec<Polynomial>> {
    res.require_certified()?;
    let keep = res
        .d
        .iter()
        .enumerate()
        .filter(|(i, a)| !res.d.iter().enumerate().any(|(j, other)| j != *i && other != *a && other.divides(a)));
    Ok(keep.map(|(i, _)| res.k[i].clone()).collect())
}
