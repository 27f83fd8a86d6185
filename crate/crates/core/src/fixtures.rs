//! Worked instances with known answers, shared by unit tests, integration
//! tests and the CLI examples.

use crate::decomp::{Decomposition, Term};
use crate::fields::{FieldSpec, FieldValue, DEFAULT_PRIME};
use crate::moments::MomentSequence;
use crate::polys::{simplex, Exponent, MonomialOrder, Polynomial};

fn q(s: &str) -> FieldValue {
    FieldSpec::Rational.parse(s).expect("valid rational literal")
}

fn poly(field: FieldSpec, nvars: usize, terms: &[(&[u32], &str)]) -> Polynomial {
    Polynomial::from_terms(
        nvars,
        terms.iter().map(|(e, c)| (Exponent::new(e.to_vec()), field.parse(c).expect("valid literal"))),
    )
}

/// Univariate impulse: `σ_{d1} = 1`, all other moments on `{0..d}` zero.
pub fn ex1_sequence(d1: u32, d: u32) -> MomentSequence {
    assert!(d1 < d);
    MomentSequence::from_fn(1, FieldSpec::Rational, d, |e| if e.as_slice()[0] == d1 { q("1") } else { q("0") })
}

/// `σ_α = h(α)` for `h(u) = 2 + 3·2^{u1+u2} - 3^{u1}`, `|α| ≤ 4`.
pub fn ex2_sequence() -> MomentSequence {
    let f = FieldSpec::Rational;
    MomentSequence::from_fn(2, f, 4, |e| {
        let (u1, u2) = (e.as_slice()[0], e.as_slice()[1]);
        f.from_i64(2 + 3 * 2i64.pow(u1 + u2) - 3i64.pow(u1))
    })
}

pub fn ex2_decomposition() -> Decomposition {
    Decomposition::new(vec![
        Term { weight: q("2"), point: vec![q("1"), q("1")] },
        Term { weight: q("3"), point: vec![q("2"), q("2")] },
        Term { weight: q("-1"), point: vec![q("3"), q("1")] },
    ])
}

/// Raw coefficients of the quartic `τ` in `x0, x1, x2`.
pub fn ex3_tensor_terms() -> Vec<(Exponent, FieldValue)> {
    let raw: [([u32; 3], i64); 15] = [
        ([4, 0, 0], -1),
        ([3, 1, 0], -24),
        ([3, 0, 1], -8),
        ([2, 2, 0], -60),
        ([2, 1, 1], -168),
        ([2, 0, 2], -12),
        ([1, 3, 0], -96),
        ([1, 2, 1], -240),
        ([1, 1, 2], -384),
        ([1, 0, 3], 16),
        ([0, 4, 0], -46),
        ([0, 3, 1], -200),
        ([0, 2, 2], -228),
        ([0, 1, 3], -296),
        ([0, 0, 4], 34),
    ];
    raw.iter().map(|(e, c)| (Exponent::from(*e), FieldSpec::Rational.from_i64(*c))).collect()
}

/// Dehomogenized moments of `τ`, as listed with the worked example.
pub fn ex3_sequence() -> MomentSequence {
    let listed: [([u32; 2], i64); 15] = [
        ([0, 0], -1),
        ([1, 0], -6),
        ([0, 1], -2),
        ([2, 0], -10),
        ([1, 1], -14),
        ([0, 2], -2),
        ([3, 0], -24),
        ([2, 1], -20),
        ([1, 2], -32),
        ([0, 3], 4),
        ([4, 0], -46),
        ([3, 1], -50),
        ([2, 2], -38),
        ([1, 3], -74),
        ([0, 4], 34),
    ];
    MomentSequence::new(
        2,
        FieldSpec::Rational,
        listed.iter().map(|(e, c)| (Exponent::from(*e), FieldSpec::Rational.from_i64(*c))),
    )
    .expect("simplex support")
}

pub fn ex3_decomposition() -> Decomposition {
    Decomposition::new(vec![
        Term { weight: q("1"), point: vec![q("-1"), q("3")] },
        Term { weight: q("1"), point: vec![q("1"), q("1")] },
        Term { weight: q("-3"), point: vec![q("2"), q("2")] },
    ])
}

/// The three quadrics of the border basis, in the order `x1², x1x2, x2²`.
pub fn ex3_relations() -> Vec<Polynomial> {
    let f = FieldSpec::Rational;
    vec![
        poly(f, 2, &[(&[2, 0], "1"), (&[1, 0], "-3/2"), (&[0, 1], "-3/2"), (&[0, 0], "2")]),
        poly(f, 2, &[(&[1, 1], "1"), (&[1, 0], "-5/2"), (&[0, 1], "-1/2"), (&[0, 0], "2")]),
        poly(f, 2, &[(&[0, 2], "1"), (&[1, 0], "1/2"), (&[0, 1], "-7/2"), (&[0, 0], "2")]),
    ]
}

pub fn ex4_field() -> FieldSpec {
    FieldSpec::Prime { p: DEFAULT_PRIME }
}

/// Third coordinate row as printed with the worked example. It does not
/// reproduce the printed syndromes; see [`ex4_points`].
pub const EX4_PRINTED_ROW3: [i64; 11] = [0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1];

/// Third coordinate row consistent with the printed syndromes, locators and
/// corrected codeword.
pub const EX4_ROW3: [i64; 11] = [0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1];

const EX4_ROW1: [i64; 11] = [1, 1, 1, -1, -1, 0, 0, 2, 1, 1, 0];
const EX4_ROW2: [i64; 11] = [0, 1, -1, 1, -1, 1, 1, -1, 2, -2, 0];

fn columns(row3: &[i64; 11]) -> Vec<Vec<FieldValue>> {
    let f = ex4_field();
    (0..11).map(|i| vec![f.from_i64(EX4_ROW1[i]), f.from_i64(EX4_ROW2[i]), f.from_i64(row3[i])]).collect()
}

/// Evaluation points of the code, one per word position.
pub fn ex4_points() -> Vec<Vec<FieldValue>> {
    columns(&EX4_ROW3)
}

pub fn ex4_printed_points() -> Vec<Vec<FieldValue>> {
    columns(&EX4_PRINTED_ROW3)
}

pub const EX4_DEGREE: u32 = 2;

pub fn ex4_received() -> Vec<FieldValue> {
    let f = ex4_field();
    [0, 3, 3, 3, 0, 0, -6, -2, 0, -1, 0].iter().map(|&v| f.from_i64(v)).collect()
}

pub fn ex4_codeword() -> Vec<FieldValue> {
    let f = ex4_field();
    [0, 3, 3, 3, -1, 0, -6, -2, 0, 0, 0].iter().map(|&v| f.from_i64(v)).collect()
}

/// `σ_α = Σ_i w_i ξ_i^α` for `|α| ≤ 2`.
pub fn ex4_syndromes(points: &[Vec<FieldValue>], word: &[FieldValue]) -> MomentSequence {
    let f = ex4_field();
    let support = simplex(3, EX4_DEGREE, &MonomialOrder::deglex(3));
    let entries = support.into_iter().map(|e| {
        let mut acc = f.zero();
        for (pt, w) in points.iter().zip(word) {
            acc.add_mul(w, &e.eval(pt));
        }
        (e, acc)
    });
    MomentSequence::new(3, f, entries).expect("simplex support")
}

pub fn ex4_sequence() -> MomentSequence {
    ex4_syndromes(&ex4_points(), &ex4_received())
}

/// Error locators `x2 + x1/2 + 3/2` and `x3 - 1`.
pub fn ex4_locators() -> Vec<Polynomial> {
    let f = ex4_field();
    vec![
        poly(f, 3, &[(&[0, 1, 0], "1"), (&[1, 0, 0], "1/2"), (&[0, 0, 0], "3/2")]),
        poly(f, 3, &[(&[0, 0, 1], "1"), (&[0, 0, 0], "-1")]),
    ]
}
