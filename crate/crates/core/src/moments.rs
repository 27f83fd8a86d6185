//! Truncated moment sequences and the bilinear form they induce.
//!
//! A [`MomentSequence`] stores `σ_α` for every `α` in a finite support `a`
//! connected to `0`. Reading a moment outside `a` is an error, never an
//! implicit zero: the engine has to tell unknown moments from vanishing ones.

use std::collections::HashMap;

use smallvec::SmallVec;

use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FieldValue};
use crate::linalg::Matrix;
use crate::polys::{connected_to_one, simplex, simplex_size, Exponent, MonomialOrder, Polynomial};

#[derive(Clone, Debug)]
pub struct MomentSequence {
    nvars: usize,
    field: FieldSpec,
    exps: Vec<Exponent>,
    values: Vec<FieldValue>,
    index: HashMap<Exponent, usize>,
    simplex_degree: Option<u32>,
}

impl PartialEq for MomentSequence {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.field == other.field
            && self.exps.len() == other.exps.len()
            && self.iter().all(|(e, v)| other.get(e.as_slice()) == Some(v))
    }
}

impl MomentSequence {
    /// Builds a sequence from explicit `(α, σ_α)` pairs. The support must be
    /// connected to 0 and every value must belong to `field`.
    pub fn new<I>(nvars: usize, field: FieldSpec, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, FieldValue)>,
    {
        let mut exps = Vec::new();
        let mut values = Vec::new();
        let mut index = HashMap::new();
        for (e, v) in entries {
            if e.nvars() != nvars {
                return Err(Error::InvalidInput(format!("exponent {e:?} does not have {nvars} components")));
            }
            if !field.owns(&v) {
                return Err(Error::InvalidInput(format!("moment {v} is not in field {field}")));
            }
            if index.insert(e.clone(), exps.len()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate moment for {e:?}")));
            }
            exps.push(e);
            values.push(v);
        }
        connected_to_one(&exps).map_err(Error::NotConnected)?;
        let simplex_degree = detect_simplex(nvars, &exps);
        Ok(MomentSequence { nvars, field, exps, values, index, simplex_degree })
    }

    /// Sequence on the simplex `{|α| ≤ degree}` with `σ_α = f(α)`.
    pub fn from_fn<F>(nvars: usize, field: FieldSpec, degree: u32, mut f: F) -> Self
    where
        F: FnMut(&Exponent) -> FieldValue,
    {
        let exps = simplex(nvars, degree, &MonomialOrder::deglex(nvars));
        let entries: Vec<_> = exps
            .into_iter()
            .map(|e| {
                let v = f(&e);
                (e, v)
            })
            .collect();
        MomentSequence::new(nvars, field, entries).expect("simplex supports are connected")
    }

    /// Simplex support of the given degree; unlisted moments are zero.
    pub fn simplex_with<I>(nvars: usize, field: FieldSpec, degree: u32, listed: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, FieldValue)>,
    {
        let mut given: HashMap<Exponent, FieldValue> = HashMap::new();
        for (e, v) in listed {
            if e.nvars() != nvars {
                return Err(Error::InvalidInput(format!("exponent {e:?} does not have {nvars} components")));
            }
            if e.degree() > degree {
                return Err(Error::InvalidInput(format!("moment {e:?} exceeds degree {degree}")));
            }
            if !field.owns(&v) {
                return Err(Error::InvalidInput(format!("moment {v} is not in field {field}")));
            }
            if given.insert(e.clone(), v).is_some() {
                return Err(Error::InvalidInput(format!("duplicate moment for {e:?}")));
            }
        }
        Ok(MomentSequence::from_fn(nvars, field, degree, |e| given.remove(e).unwrap_or_else(|| field.zero())))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// `Some(D)` when the support is exactly `{|α| ≤ D}`.
    pub fn simplex_degree(&self) -> Option<u32> {
        self.simplex_degree
    }

    pub fn support(&self) -> &[Exponent] {
        &self.exps
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        self.index.contains_key(e)
    }

    pub fn get(&self, e: &[u32]) -> Option<&FieldValue> {
        self.index.get(e).map(|&i| &self.values[i])
    }

    /// `σ_{a+b}`, if `a + b` lies in the support.
    pub fn get_sum(&self, a: &[u32], b: &[u32]) -> Option<&FieldValue> {
        let sum: SmallVec<[u32; 8]> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.get(&sum)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &FieldValue)> {
        self.exps.iter().zip(&self.values)
    }

    /// `⟨σ | p⟩ = Σ p_α σ_α`.
    pub fn apply(&self, p: &Polynomial) -> Result<FieldValue> {
        let mut acc = self.field.zero();
        let mut missing = Vec::new();
        for (e, c) in p.terms() {
            match self.get(e.as_slice()) {
                Some(v) => acc.add_mul(c, v),
                None => missing.push(e.clone()),
            }
        }
        if missing.is_empty() {
            Ok(acc)
        } else {
            Err(Error::Support(missing))
        }
    }

    /// `⟨p, q⟩_σ = ⟨σ | p q⟩`.
    pub fn inner(&self, p: &Polynomial, q: &Polynomial) -> Result<FieldValue> {
        self.apply(&p.mul(q))
    }

    /// Truncated Hankel matrix with rows labelled by `row_labels` and columns
    /// by `col_labels`: entry `(i, j)` is `⟨σ | col_j · row_i⟩`.
    pub fn hankel(&self, col_labels: &[Polynomial], row_labels: &[Polynomial]) -> Result<HankelMatrix> {
        let mut m = Matrix::zeros(self.field, row_labels.len(), col_labels.len());
        for (i, r) in row_labels.iter().enumerate() {
            for (j, c) in col_labels.iter().enumerate() {
                m[(i, j)] = self.inner(c, r)?;
            }
        }
        Ok(HankelMatrix { cols: col_labels.to_vec(), rows: row_labels.to_vec(), matrix: m })
    }

    /// Hankel matrix on monomial labels, `(σ_{β + β'})`.
    pub fn hankel_monomial(&self, cols: &[Exponent], rows: &[Exponent]) -> Result<HankelMatrix> {
        let lift = |v: &[Exponent]| -> Vec<Polynomial> {
            v.iter().map(|e| Polynomial::monomial(e.clone(), self.field.one())).collect()
        };
        self.hankel(&lift(cols), &lift(rows))
    }
}

fn detect_simplex(nvars: usize, exps: &[Exponent]) -> Option<u32> {
    let d = exps.iter().map(|e| e.degree()).max()?;
    (exps.len() == simplex_size(nvars, d)).then_some(d)
}

#[derive(Clone, Debug)]
pub struct HankelMatrix {
    pub cols: Vec<Polynomial>,
    pub rows: Vec<Polynomial>,
    pub matrix: Matrix,
}

/// `σ_α = Σ_i ω_i ξ_i^α` on `support`; the brute-force moment oracle.
pub fn moments_of_decomposition(
    dec: &Decomposition,
    nvars: usize,
    field: FieldSpec,
    support: &[Exponent],
) -> Result<MomentSequence> {
    let entries: Vec<_> = support
        .iter()
        .map(|e| {
            let mut acc = field.zero();
            for t in dec.terms() {
                acc.add_mul(&t.weight, &e.eval(&t.point));
            }
            (e.clone(), acc)
        })
        .collect();
    MomentSequence::new(nvars, field, entries)
}

/// Same as [`moments_of_decomposition`] on the simplex of degree `degree`.
pub fn simplex_moments(dec: &Decomposition, nvars: usize, field: FieldSpec, degree: u32) -> MomentSequence {
    let support = simplex(nvars, degree, &MonomialOrder::deglex(nvars));
    moments_of_decomposition(dec, nvars, field, &support).expect("simplex supports are connected")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::Term;
    use crate::fixtures;
    use proptest::prelude::*;

    fn q(s: &str) -> FieldValue {
        FieldSpec::Rational.parse(s).unwrap()
    }

    fn poly(nvars: usize, terms: &[(&[u32], &str)]) -> Polynomial {
        Polynomial::from_terms(nvars, terms.iter().map(|(e, c)| (Exponent::new(e.to_vec()), q(c))))
    }

    #[test]
    fn apply_examples() {
        let ex2 = fixtures::ex2_sequence();
        assert_eq!(ex2.apply(&poly(2, &[(&[0, 0], "1")])).unwrap(), q("4"));
        assert!(ex2.apply(&Polynomial::zero(2)).unwrap().is_zero());
        let ex4 = fixtures::ex4_sequence();
        let one = Polynomial::constant(3, ex4.field().one());
        assert!(ex4.apply(&one).unwrap().is_zero());
        let far = poly(2, &[(&[5, 0], "1"), (&[0, 0], "1")]);
        assert_eq!(ex2.apply(&far), Err(Error::Support(vec![Exponent::from([5, 0])])));
    }

    #[test]
    fn inner_examples() {
        let ex2 = fixtures::ex2_sequence();
        let p = poly(2, &[(&[1, 0], "1"), (&[0, 0], "-5/4")]);
        assert_eq!(ex2.inner(&p, &poly(2, &[(&[1, 0], "1")])).unwrap(), q("-5/4"));
        let ex3 = fixtures::ex3_sequence();
        let p = poly(2, &[(&[1, 0], "1"), (&[0, 0], "-6")]);
        assert!(ex3.inner(&p, &poly(2, &[(&[0, 0], "1")])).unwrap().is_zero());
        assert!(ex3.inner(&p, &Polynomial::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn hankel_examples() {
        let ex2 = fixtures::ex2_sequence();
        let u = vec![
            poly(2, &[(&[0, 0], "2"), (&[1, 0], "-1/2"), (&[0, 1], "-1/2")]),
            poly(2, &[(&[0, 0], "-1"), (&[0, 1], "1")]),
            poly(2, &[(&[1, 0], "1/2"), (&[0, 1], "-1/2")]),
        ];
        let rows = vec![poly(2, &[(&[0, 0], "1")]), poly(2, &[(&[1, 0], "1")]), poly(2, &[(&[0, 1], "1")])];
        let h = ex2.hankel(&u, &rows).unwrap();
        let want = [["2", "3", "-1"], ["2", "6", "-3"], ["2", "6", "-1"]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.matrix[(i, j)], q(want[i][j]));
            }
        }
        let ex3 = fixtures::ex3_sequence();
        let h = ex3.hankel_monomial(&[Exponent::zero(2)], &[Exponent::zero(2)]).unwrap();
        assert_eq!(h.matrix[(0, 0)], q("-1"));
        let h = ex3.hankel(&[], &[]).unwrap();
        assert_eq!((h.matrix.rows(), h.matrix.cols()), (0, 0));
    }

    #[test]
    fn decomposition_oracle_examples() {
        let d = fixtures::ex2_decomposition();
        let s = simplex_moments(&d, 2, FieldSpec::Rational, 4);
        assert_eq!(s.get(&[1, 1]), Some(&q("11")));
        let d = fixtures::ex3_decomposition();
        let s = simplex_moments(&d, 2, FieldSpec::Rational, 4);
        assert_eq!(s.get(&[0, 1]), Some(&q("-2")));
        let s = simplex_moments(&Decomposition::default(), 2, FieldSpec::Rational, 3);
        assert!(s.iter().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn construction_errors() {
        let f = FieldSpec::Rational;
        let gap = vec![(Exponent::from([0]), q("1")), (Exponent::from([2]), q("1"))];
        assert_eq!(MomentSequence::new(1, f, gap), Err(Error::NotConnected(Exponent::from([2]))));
        let wrong = vec![(Exponent::from([0]), FieldSpec::Prime { p: 7 }.one())];
        assert!(matches!(MomentSequence::new(1, f, wrong), Err(Error::InvalidInput(_))));
        let dup = vec![(Exponent::from([0]), q("1")), (Exponent::from([0]), q("2"))];
        assert!(matches!(MomentSequence::new(1, f, dup), Err(Error::InvalidInput(_))));
        let s = MomentSequence::simplex_with(2, f, 2, vec![(Exponent::from([1, 1]), q("3"))]).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.simplex_degree(), Some(2));
        assert!(s.get(&[2, 0]).unwrap().is_zero());
    }

    fn arb_seq() -> impl Strategy<Value = MomentSequence> {
        prop::collection::vec(-5i64..6, 15).prop_map(|v| {
            let mut it = v.into_iter();
            MomentSequence::from_fn(2, FieldSpec::Rational, 4, |_| FieldSpec::Rational.from_i64(it.next().unwrap()))
        })
    }

    fn arb_lin() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-3i64..4, 6).prop_map(|v| {
            let exps = simplex(2, 2, &MonomialOrder::deglex(2));
            Polynomial::from_terms(2, exps.into_iter().zip(v).map(|(e, c)| (e, FieldSpec::Rational.from_i64(c))))
        })
    }

    proptest! {
        #[test]
        fn form_is_symmetric_and_bilinear(s in arb_seq(), p in arb_lin(), r in arb_lin(), t in arb_lin(), k in -4i64..5) {
            prop_assert_eq!(s.inner(&p, &r).unwrap(), s.inner(&r, &p).unwrap());
            let kk = FieldSpec::Rational.from_i64(k);
            let lhs = s.inner(&p.scale(&kk).add(&t), &r).unwrap();
            let rhs = &(&kk * &s.inner(&p, &r).unwrap()) + &s.inner(&t, &r).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn hankel_entries_depend_on_label_sum(s in arb_seq()) {
            let labels = simplex(2, 2, &MonomialOrder::deglex(2));
            let h = s.hankel_monomial(&labels, &labels).unwrap();
            for i in 0..labels.len() {
                for j in 0..labels.len() {
                    for k in 0..labels.len() {
                        for l in 0..labels.len() {
                            if labels[i].add(&labels[j]) == labels[k].add(&labels[l]) {
                                prop_assert_eq!(&h.matrix[(i, j)], &h.matrix[(k, l)]);
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn separated_points_give_invertible_hankel(coords in prop::collection::vec((-6i64..7, -6i64..7), 1..5),
                                                   weights in prop::collection::vec(1i64..5, 5)) {
            let f = FieldSpec::Rational;
            let mut pts: Vec<(i64, i64)> = coords;
            pts.sort();
            pts.dedup();
            let dec = Decomposition::new(pts.iter().zip(&weights).map(|(&(x, y), &w)| Term {
                weight: f.from_i64(w),
                point: vec![f.from_i64(x), f.from_i64(y)],
            }).collect());
            let s = simplex_moments(&dec, 2, f, 8);
            // B = first r monomials of a basis separating the points: the
            // Lagrange-type basis 1, x1, x1^2, ... after a generic shear.
            let r = pts.len();
            let sheared: Vec<Polynomial> = (0..r as u32).map(|k| {
                let lin = poly(2, &[(&[1, 0], "1"), (&[0, 1], "17")]);
                let mut acc = Polynomial::constant(2, f.one());
                for _ in 0..k { acc = acc.mul(&lin); }
                acc
            }).collect();
            let h = s.hankel(&sheared, &sheared).unwrap();
            prop_assert_eq!(h.matrix.rank(), r);
        }
    }
}
