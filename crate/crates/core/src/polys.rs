//! Exponent vectors, sparse multivariate polynomials and monomial orders.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fields::FieldValue;

/// Exponent vector `(α_1, …, α_n)` of the monomial `x^α`.
///
/// The derived `Ord` is plain lexicographic order on the vector; it fixes the
/// iteration order of term maps and is unrelated to [`MonomialOrder`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(v: Vec<u32>) -> Self {
        Exponent(v)
    }

    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    /// `e_i`, the exponent of `x_{i+1}`.
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        Exponent(v)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.nvars(), other.nvars());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self + e_i`.
    pub fn bump(&self, i: usize) -> Exponent {
        let mut v = self.0.clone();
        v[i] += 1;
        Exponent(v)
    }

    /// `self - e_i`, if every component stays non-negative.
    pub fn lower(&self, i: usize) -> Option<Exponent> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(Exponent(v))
    }

    /// Componentwise `self ≤ other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        if !other.divides(self) {
            return None;
        }
        Some(Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// `∏ ξ_i^{α_i}`.
    pub fn eval(&self, point: &[FieldValue]) -> FieldValue {
        debug_assert_eq!(point.len(), self.nvars());
        let mut acc = point.first().map(|x| x.one_like()).expect("evaluation at a point of dimension 0");
        for (x, &a) in point.iter().zip(&self.0) {
            if a > 0 {
                acc *= &x.pow(a);
            }
        }
        acc
    }
}

impl Borrow<[u32]> for Exponent {
    fn borrow(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

impl<const N: usize> From<[u32; N]> for Exponent {
    fn from(v: [u32; N]) -> Self {
        Exponent(v.to_vec())
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Prints the monomial, e.g. `x1^2*x3` or `1`.
impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if a == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, a)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All exponents of total degree at most `degree`, sorted by `order`.
pub fn simplex(nvars: usize, degree: u32, order: &MonomialOrder) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if i == cur.len() {
            out.push(Exponent(cur.clone()));
            return;
        }
        for a in 0..=left {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, degree, &mut cur, &mut out);
    out.sort_by(|a, b| order.compare(a, b));
    out
}

/// Number of exponents in `n` variables of degree at most `d`: `C(n + d, n)`.
pub fn simplex_size(nvars: usize, degree: u32) -> usize {
    let mut acc: u128 = 1;
    for i in 1..=nvars as u128 {
        acc = acc * (degree as u128 + i) / i;
    }
    acc as usize
}

/// True if every nonzero exponent of `set` has a predecessor `α - e_i` in
/// `set`, and `0` belongs to `set` whenever it is nonempty. Returns the first
/// offending exponent otherwise.
pub fn connected_to_one<'a, I>(set: I) -> Result<(), Exponent>
where
    I: IntoIterator<Item = &'a Exponent> + Clone,
{
    let members: HashSet<&[u32]> = set.clone().into_iter().map(|e| e.as_slice()).collect();
    for e in set {
        if e.is_zero() {
            continue;
        }
        let ok = (0..e.nvars()).any(|i| e.lower(i).is_some_and(|f| members.contains(f.as_slice())));
        if !ok {
            return Err(e.clone());
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Deglex,
    Degrevlex,
}

/// A graded monomial order.
///
/// `vars` lists the variable indices from least to most significant; the
/// default `[0, 1, …, n-1]` means `x1 < x2 < … < xn`. Ties in degree are
/// broken lexicographically starting at the most significant variable
/// (`Deglex`) or reverse-lexicographically starting at the least significant
/// one (`Degrevlex`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    vars: Vec<usize>,
}

impl MonomialOrder {
    pub fn deglex(nvars: usize) -> Self {
        MonomialOrder { kind: OrderKind::Deglex, vars: (0..nvars).collect() }
    }

    pub fn degrevlex(nvars: usize) -> Self {
        MonomialOrder { kind: OrderKind::Degrevlex, vars: (0..nvars).collect() }
    }

    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder { kind, vars: (0..nvars).collect() }
    }

    /// Order with an explicit variable ranking (least significant first).
    pub fn with_vars(kind: OrderKind, vars: Vec<usize>) -> Option<Self> {
        let mut seen = vars.clone();
        seen.sort_unstable();
        if seen.iter().enumerate().any(|(i, &v)| i != v) {
            return None;
        }
        Some(MonomialOrder { kind, vars })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Variable indices, least significant first.
    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            OrderKind::Deglex => "deglex",
            OrderKind::Degrevlex => "degrevlex",
        }
    }

    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Ordering {
        debug_assert_eq!(a.nvars(), self.vars.len());
        debug_assert_eq!(b.nvars(), self.vars.len());
        let by_degree = a.degree().cmp(&b.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let (x, y) = (a.as_slice(), b.as_slice());
        match self.kind {
            OrderKind::Deglex => {
                for &v in self.vars.iter().rev() {
                    match x[v].cmp(&y[v]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Degrevlex => {
                for &v in &self.vars {
                    match x[v].cmp(&y[v]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Largest exponent of the support of `p`.
    pub fn leading<'a>(&self, p: &'a Polynomial) -> Option<(&'a Exponent, &'a FieldValue)> {
        p.terms().max_by(|a, b| self.compare(a.0, b.0))
    }
}

/// Sparse polynomial: exponent → nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, FieldValue>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(exp: Exponent, coeff: FieldValue) -> Self {
        let nvars = exp.nvars();
        let mut p = Polynomial::zero(nvars);
        p.add_term(exp, coeff);
        p
    }

    pub fn constant(nvars: usize, c: FieldValue) -> Self {
        Polynomial::monomial(Exponent::zero(nvars), c)
    }

    /// Builds a polynomial from terms, merging repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (Exponent, FieldValue)>>(nvars: usize, terms: I) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &FieldValue)> + Clone {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &Exponent) -> Option<&FieldValue> {
        self.terms.get(e)
    }

    /// Adds `c·x^e`, dropping the term if it cancels.
    pub fn add_term(&mut self, e: Exponent, c: FieldValue) {
        assert_eq!(e.nvars(), self.nvars, "exponent length differs from nvars");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, s: &FieldValue) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }

    /// `x^γ · p`.
    pub fn mono_mul(&self, gamma: &Exponent) -> Polynomial {
        assert_eq!(gamma.nvars(), self.nvars);
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.add(gamma), c.clone())).collect() }
    }

    /// `p(ξ)`.
    pub fn evaluate(&self, point: &[FieldValue]) -> FieldValue {
        assert_eq!(point.len(), self.nvars, "point dimension differs from nvars");
        let mut acc: Option<FieldValue> = None;
        for (e, c) in self.terms() {
            let t = c * &e.eval(point);
            match acc.as_mut() {
                Some(a) => *a += &t,
                None => acc = Some(t),
            }
        }
        acc.unwrap_or_else(|| point[0].zero_like())
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    /// Remainder of multivariate division by `divisors` under `order`.
    ///
    /// Repeatedly cancels the leading term of the running polynomial with the
    /// first divisor whose leading monomial divides it; terms no divisor can
    /// cancel move to the remainder.
    pub fn reduce(&self, divisors: &[Polynomial], order: &MonomialOrder) -> Polynomial {
        let leads: Vec<Option<(Exponent, FieldValue)>> = divisors
            .iter()
            .map(|g| order.leading(g).map(|(e, c)| (e.clone(), c.inv().expect("nonzero leading coefficient"))))
            .collect();
        let mut f = self.clone();
        let mut rem = Polynomial::zero(self.nvars);
        while let Some((lead, lc)) = order.leading(&f).map(|(e, c)| (e.clone(), c.clone())) {
            let hit = leads.iter().enumerate().find_map(|(i, l)| {
                l.as_ref().and_then(|(le, linv)| lead.checked_sub(le).map(|shift| (i, shift, linv)))
            });
            match hit {
                Some((i, shift, linv)) => {
                    let factor = &lc * linv;
                    f = f.sub(&divisors[i].mono_mul(&shift).scale(&factor));
                }
                None => {
                    f.terms.remove(&lead);
                    rem.add_term(lead, lc);
                }
            }
        }
        rem
    }

    /// Human-readable form, largest terms first under `order`.
    pub fn display_with<'a>(&'a self, order: &'a MonomialOrder) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, order }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.display_with(&MonomialOrder::deglex(self.nvars)), f)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.display_with(&MonomialOrder::deglex(self.nvars)), f)
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    order: &'a MonomialOrder,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.poly.terms().collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by(|a, b| self.order.compare(b.0, a.0));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let (neg, mag) = if c.is_negative_rational() { (true, -c) } else { (false, c.clone()) };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{e}")?;
            } else {
                write!(f, "{mag}*{e}")?;
            }
        }
        Ok(())
    }
}

/// `scale · x^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMonomial {
    pub exponent: Exponent,
    pub scale: FieldValue,
}

impl ScaledMonomial {
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::monomial(self.exponent.clone(), self.scale.clone())
    }
}
