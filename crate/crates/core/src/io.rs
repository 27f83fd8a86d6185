//! JSON formats for every input and output of the library.
//!
//! Field values are written as strings in field syntax (`"91/20"`); on input
//! plain JSON integers are accepted as well. Exponents are arrays of
//! integers, polynomials are term lists `[{"alpha": […], "coeff": "…"}]`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::apps::{CodeSpec, DecodeOutcome, SparseTerm, SymmetricTensor, VanishingIdeal};
use crate::border::{BorderBasisResult, MultTables};
use crate::decomp::{Decomposition, Term};
use crate::error::{Error, FieldError, Result};
use crate::fields::{FieldSpec, FieldValue};
use crate::linalg::Matrix;
use crate::moments::MomentSequence;
use crate::polys::{Exponent, MonomialOrder, OrderKind, Polynomial, ScaledMonomial};

/// A field value as it appears in input files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueText {
    Text(String),
    Int(i64),
}

impl ValueText {
    pub fn parse(&self, field: FieldSpec) -> Result<FieldValue> {
        Ok(match self {
            ValueText::Text(s) => field.parse(s)?,
            ValueText::Int(i) => field.from_i64(*i),
        })
    }

    pub fn of(v: &FieldValue) -> Self {
        ValueText::Text(v.to_string())
    }
}

fn parse_values(field: FieldSpec, v: &[ValueText]) -> Result<Vec<FieldValue>> {
    v.iter().map(|x| x.parse(field)).collect()
}

fn texts(v: &[FieldValue]) -> Vec<ValueText> {
    v.iter().map(ValueText::of).collect()
}

fn checked_field(field: FieldSpec) -> Result<FieldSpec> {
    field.validate()?;
    Ok(field)
}

fn check_len(e: &[u32], nvars: usize) -> Result<Exponent> {
    if e.len() != nvars {
        return Err(Error::InvalidInput(format!("exponent {e:?} does not have {nvars} entries")));
    }
    Ok(Exponent::new(e.to_vec()))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Field(FieldError::Parse(format!("invalid JSON input: {e}"))))
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("JSON documents serialize")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub coeff: ValueText,
}

pub fn poly_to_json(p: &Polynomial) -> Vec<TermJson> {
    p.terms().map(|(e, c)| TermJson { alpha: e.as_slice().to_vec(), coeff: ValueText::of(c) }).collect()
}

pub fn poly_from_json(field: FieldSpec, nvars: usize, terms: &[TermJson]) -> Result<Polynomial> {
    let mut p = Polynomial::zero(nvars);
    for t in terms {
        let e = check_len(&t.alpha, nvars)?;
        if p.coeff(&e).is_some() {
            return Err(Error::InvalidInput(format!("duplicate term {e}")));
        }
        p.add_term(e, t.coeff.parse(field)?);
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentJson {
    pub alpha: Vec<u32>,
    pub value: ValueText,
}

/// Sequence file. With `degree` the support is the whole simplex and
/// unlisted moments are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub nvars: usize,
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    pub moments: Vec<MomentJson>,
}

impl SequenceJson {
    pub fn of(s: &MomentSequence) -> Self {
        SequenceJson {
            nvars: s.nvars(),
            field: s.field(),
            degree: None,
            moments: s
                .iter()
                .map(|(e, v)| MomentJson { alpha: e.as_slice().to_vec(), value: ValueText::of(v) })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<MomentSequence> {
        let field = checked_field(self.field)?;
        if self.nvars == 0 {
            return Err(Error::InvalidInput("nvars must be at least 1".into()));
        }
        let entries = self
            .moments
            .iter()
            .map(|m| Ok((check_len(&m.alpha, self.nvars)?, m.value.parse(field)?)))
            .collect::<Result<Vec<_>>>()?;
        match self.degree {
            Some(d) => {
                if let Some((e, _)) = entries.iter().find(|(e, _)| e.degree() > d) {
                    return Err(Error::InvalidInput(format!("moment {e} exceeds degree {d}")));
                }
                MomentSequence::simplex_with(self.nvars, field, d, entries)
            }
            None => MomentSequence::new(self.nvars, field, entries),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledJson {
    pub alpha: Vec<u32>,
    pub scale: ValueText,
}

/// Border basis result file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultJson {
    pub r: usize,
    pub nvars: usize,
    pub field: FieldSpec,
    pub order: OrderKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_vars: Option<Vec<usize>>,
    pub b: Vec<Vec<u32>>,
    pub c: Vec<Vec<u32>>,
    pub d: Vec<Vec<u32>>,
    pub p: Vec<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<TermJson>>>,
    pub m: Vec<ScaledJson>,
    pub k: Vec<Vec<TermJson>>,
    pub certified: bool,
    /// Border monomials without a relation.
    pub missing: Vec<Vec<u32>>,
}

fn exps_json(v: &[Exponent]) -> Vec<Vec<u32>> {
    v.iter().map(|e| e.as_slice().to_vec()).collect()
}

impl ResultJson {
    pub fn of(res: &BorderBasisResult) -> Self {
        let identity: Vec<usize> = (0..res.nvars).collect();
        ResultJson {
            r: res.rank(),
            nvars: res.nvars,
            field: res.field,
            order: res.order.kind(),
            order_vars: (res.order.vars() != identity.as_slice()).then(|| res.order.vars().to_vec()),
            b: exps_json(&res.b),
            c: exps_json(&res.c),
            d: exps_json(&res.d),
            p: res.p.iter().map(poly_to_json).collect(),
            q: res.q.as_ref().map(|q| q.iter().map(poly_to_json).collect()),
            m: res
                .m
                .iter()
                .map(|m| ScaledJson { alpha: m.exponent.as_slice().to_vec(), scale: ValueText::of(&m.scale) })
                .collect(),
            k: res.k.iter().map(poly_to_json).collect(),
            certified: res.certified,
            missing: exps_json(&res.missing),
        }
    }

    pub fn build(&self) -> Result<BorderBasisResult> {
        let field = checked_field(self.field)?;
        let n = self.nvars;
        let exps = |v: &[Vec<u32>]| v.iter().map(|e| check_len(e, n)).collect::<Result<Vec<_>>>();
        let polys = |v: &[Vec<TermJson>]| v.iter().map(|t| poly_from_json(field, n, t)).collect::<Result<Vec<_>>>();
        let order = match &self.order_vars {
            Some(vars) => {
                MonomialOrder::with_vars(self.order, vars.clone()).filter(|o| o.nvars() == n).ok_or_else(|| {
                    Error::InvalidInput(format!("order_vars {vars:?} is not a permutation of {n} variables"))
                })?
            }
            None => MonomialOrder::new(self.order, n),
        };
        let res = BorderBasisResult {
            nvars: n,
            field,
            b: exps(&self.b)?,
            c: exps(&self.c)?,
            d: exps(&self.d)?,
            p: polys(&self.p)?,
            q: self.q.as_deref().map(polys).transpose()?,
            m: self
                .m
                .iter()
                .map(|m| Ok(ScaledMonomial { exponent: check_len(&m.alpha, n)?, scale: m.scale.parse(field)? }))
                .collect::<Result<Vec<_>>>()?,
            k: polys(&self.k)?,
            order,
            certified: self.certified,
            missing: exps(&self.missing)?,
        };
        let r = res.b.len();
        if self.r != r
            || res.c.len() != r
            || res.p.len() != r
            || res.m.len() != r
            || res.q.as_ref().is_some_and(|q| q.len() != r)
            || res.k.len() != res.d.len()
        {
            return Err(Error::InvalidInput("inconsistent list lengths in result".into()));
        }
        Ok(res)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermOut {
    pub weight: ValueText,
    pub point: Vec<ValueText>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    pub terms: Vec<TermOut>,
}

impl DecompositionJson {
    pub fn of(dec: &Decomposition, field: FieldSpec) -> Self {
        DecompositionJson {
            rank: dec.rank(),
            field: Some(field),
            terms: dec
                .terms()
                .iter()
                .map(|t| TermOut { weight: ValueText::of(&t.weight), point: texts(&t.point) })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Decomposition> {
        let field = checked_field(self.field.unwrap_or(FieldSpec::Rational))?;
        if self.rank != self.terms.len() {
            return Err(Error::InvalidInput(format!("rank {} but {} terms", self.rank, self.terms.len())));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(Term { weight: t.weight.parse(field)?, point: parse_values(field, &t.point)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Decomposition::new(terms))
    }
}

/// Tensor file: raw polynomial coefficients of a form in `x0, …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    pub degree: u32,
    pub nvars: usize,
    #[serde(default = "rational")]
    pub field: FieldSpec,
    pub terms: Vec<TermJson>,
}

fn rational() -> FieldSpec {
    FieldSpec::Rational
}

impl TensorJson {
    pub fn of(t: &SymmetricTensor) -> Self {
        TensorJson {
            degree: t.degree,
            nvars: t.nvars,
            field: t.field,
            terms: t
                .terms
                .iter()
                .map(|(e, c)| TermJson { alpha: e.as_slice().to_vec(), coeff: ValueText::of(c) })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<SymmetricTensor> {
        let field = checked_field(self.field)?;
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((check_len(&t.alpha, self.nvars)?, t.coeff.parse(field)?)))
            .collect::<Result<Vec<_>>>()?;
        SymmetricTensor::new(field, self.degree, self.nvars, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: FieldSpec,
    pub points: Vec<Vec<ValueText>>,
    pub degree: u32,
}

impl CodeJson {
    pub fn of(code: &CodeSpec) -> Self {
        CodeJson { field: code.field, points: code.points.iter().map(|p| texts(p)).collect(), degree: code.degree }
    }

    pub fn build(&self) -> Result<CodeSpec> {
        let field = checked_field(self.field)?;
        let points = self.points.iter().map(|p| parse_values(field, p)).collect::<Result<Vec<_>>>()?;
        CodeSpec::new(field, points, self.degree)
    }
}

/// Comma-separated field values, e.g. a received word.
pub fn parse_word(field: FieldSpec, text: &str) -> Result<Vec<FieldValue>> {
    text.split(',').map(|s| Ok(field.parse(s.trim())?)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub position: usize,
    pub value: ValueText,
}

/// Decoding output; positions are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeJson {
    pub corrected: Vec<ValueText>,
    pub errors: Vec<ErrorJson>,
    pub locators: Vec<Vec<TermJson>>,
}

impl DecodeJson {
    pub fn of(out: &DecodeOutcome) -> Self {
        DecodeJson {
            corrected: texts(&out.corrected),
            errors: out.errors.iter().map(|(i, v)| ErrorJson { position: i + 1, value: ValueText::of(v) }).collect(),
            locators: out.locators.iter().map(poly_to_json).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingInputJson {
    pub field: FieldSpec,
    pub points: Vec<Vec<ValueText>>,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<ValueText>>,
}

/// Field, points and optional weights of a vanishing-ideal request.
pub type VanishingInput = (FieldSpec, Vec<Vec<FieldValue>>, Option<Vec<FieldValue>>);

impl VanishingInputJson {
    pub fn build(&self) -> Result<VanishingInput> {
        let field = checked_field(self.field)?;
        let points = self.points.iter().map(|p| parse_values(field, p)).collect::<Result<Vec<_>>>()?;
        let weights = self.weights.as_deref().map(|w| parse_values(field, w)).transpose()?;
        Ok((field, points, weights))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingJson {
    pub b: Vec<Vec<u32>>,
    pub k: Vec<Vec<TermJson>>,
    pub interpolants: Vec<Vec<TermJson>>,
}

impl VanishingJson {
    pub fn of(v: &VanishingIdeal) -> Self {
        VanishingJson {
            b: exps_json(&v.basis),
            k: v.relations.iter().map(poly_to_json).collect(),
            interpolants: v.interpolants.iter().map(poly_to_json).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseTermJson {
    pub exponent: Vec<u32>,
    pub weight: ValueText,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseJson {
    pub terms: Vec<SparseTermJson>,
}

impl SparseJson {
    pub fn of(terms: &[SparseTerm]) -> Self {
        SparseJson {
            terms: terms
                .iter()
                .map(|t| SparseTermJson { exponent: t.exponent.clone(), weight: ValueText::of(&t.weight) })
                .collect(),
        }
    }

    pub fn build(&self, field: FieldSpec) -> Result<Vec<SparseTerm>> {
        self.terms
            .iter()
            .map(|t| Ok(SparseTerm { exponent: t.exponent.clone(), weight: t.weight.parse(field)? }))
            .collect()
    }
}

/// Matrices, row-major, entries as strings.
pub fn matrix_to_json(m: &Matrix) -> Vec<Vec<ValueText>> {
    m.to_rows().iter().map(|r| texts(r)).collect()
}

pub fn matrix_from_json(field: FieldSpec, rows: &[Vec<ValueText>]) -> Result<Matrix> {
    let parsed = rows.iter().map(|r| parse_values(field, r)).collect::<Result<Vec<_>>>()?;
    let cols = parsed.first().map_or(0, |r| r.len());
    if parsed.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged matrix".into()));
    }
    Ok(Matrix::from_rows(field, parsed))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TablesJson {
    pub field: FieldSpec,
    pub matrices: Vec<Vec<Vec<ValueText>>>,
}

impl TablesJson {
    pub fn of(t: &MultTables, field: FieldSpec) -> Self {
        TablesJson { field, matrices: t.matrices.iter().map(matrix_to_json).collect() }
    }

    pub fn build(&self) -> Result<MultTables> {
        let field = checked_field(self.field)?;
        Ok(MultTables {
            matrices: self.matrices.iter().map(|m| matrix_from_json(field, m)).collect::<Result<Vec<_>>>()?,
        })
    }
}

/// `{"error": {"kind": …, "message": …}}`.
pub fn error_json(kind: &str, message: &str) -> Value {
    serde_json::json!({ "error": { "kind": kind, "message": message } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::border::{border_basis, mult_matrices, BorderOptions};
    use crate::fixtures;
    use crate::moments::simplex_moments;
    use proptest::prelude::*;

    fn round_trip<T: Serialize + for<'de> Deserialize<'de>>(v: &T) -> T {
        from_json(&to_json_string(v)).unwrap()
    }

    #[test]
    fn sequence_formats() {
        let text = r#"{"nvars":2,"field":{"type":"rational"},"moments":[
            {"alpha":[0,0],"value":"4"},{"alpha":[1,0],"value":5},{"alpha":[0,1],"value":"7/2"}]}"#;
        let s = from_json::<SequenceJson>(text).unwrap().build().unwrap();
        assert_eq!(s.get(&[0, 1]), Some(&FieldSpec::Rational.parse("7/2").unwrap()));
        let helper =
            r#"{"nvars":2,"field":{"type":"prime","p":7},"degree":2,"moments":[{"alpha":[1,1],"value":"-1"}]}"#;
        let s = from_json::<SequenceJson>(helper).unwrap().build().unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.get(&[1, 1]).unwrap().to_string(), "6");
        assert!(s.get(&[2, 0]).unwrap().is_zero());
        let bad_prime = r#"{"nvars":1,"field":{"type":"prime","p":8},"moments":[]}"#;
        assert!(from_json::<SequenceJson>(bad_prime).unwrap().build().is_err());
        let bad_len = r#"{"nvars":2,"field":{"type":"rational"},"moments":[{"alpha":[0],"value":"1"}]}"#;
        assert!(from_json::<SequenceJson>(bad_len).unwrap().build().is_err());
        assert!(from_json::<SequenceJson>("{}").is_err());
    }

    #[test]
    fn result_round_trip() {
        for (s, n) in [(fixtures::ex2_sequence(), 2), (fixtures::ex4_sequence(), 3)] {
            for order in [MonomialOrder::deglex(n), MonomialOrder::degrevlex(n)] {
                let res = border_basis(&s, &order, BorderOptions::default()).unwrap();
                let j = ResultJson::of(&res);
                assert_eq!(round_trip(&j).build().unwrap(), res);
            }
        }
        let perm = MonomialOrder::with_vars(OrderKind::Deglex, vec![1, 0]).unwrap();
        let res = border_basis(&fixtures::ex3_sequence(), &perm, BorderOptions { compute_q: false }).unwrap();
        let j = ResultJson::of(&res);
        assert_eq!(j.order_vars, Some(vec![1, 0]));
        assert_eq!(round_trip(&j).build().unwrap(), res);
    }

    #[test]
    fn result_shape() {
        let res = border_basis(&fixtures::ex4_sequence(), &MonomialOrder::deglex(3), BorderOptions::default()).unwrap();
        let v: Value = serde_json::from_str(&to_json_string(&ResultJson::of(&res))).unwrap();
        assert_eq!(v["r"], 2);
        assert_eq!(v["order"], "deglex");
        assert_eq!(v["certified"], false);
        assert_eq!(v["k"][1], serde_json::json!([{"alpha":[0,0,0],"coeff":"32002"},{"alpha":[0,0,1],"coeff":"1"}]));
        assert_eq!(v["field"], serde_json::json!({"type":"prime","p":32003}));
    }

    #[test]
    fn other_formats() {
        let dec = fixtures::ex3_decomposition();
        let j = DecompositionJson::of(&dec, FieldSpec::Rational);
        assert_eq!(round_trip(&j).build().unwrap(), dec);
        let v: Value = serde_json::to_value(&j).unwrap();
        assert_eq!(v["terms"][0], serde_json::json!({"weight":"1","point":["-1","3"]}));

        let t = crate::apps::SymmetricTensor::new(FieldSpec::Rational, 4, 3, fixtures::ex3_tensor_terms()).unwrap();
        assert_eq!(round_trip(&TensorJson::of(&t)).build().unwrap(), t);

        let code = CodeSpec::new(fixtures::ex4_field(), fixtures::ex4_points(), 2).unwrap();
        assert_eq!(round_trip(&CodeJson::of(&code)).build().unwrap(), code);

        let s = fixtures::ex2_sequence();
        let res = border_basis(&s, &MonomialOrder::deglex(2), BorderOptions::default()).unwrap();
        let tables = mult_matrices(&s, &res).unwrap();
        let tj = TablesJson::of(&tables, FieldSpec::Rational);
        assert_eq!(tj.matrices[0][1][1], ValueText::Text("91/20".into()));
        assert_eq!(round_trip(&tj).build().unwrap(), tables);

        let f = fixtures::ex4_field();
        assert_eq!(parse_word(f, "0, 3,-1").unwrap(), vec![f.zero(), f.from_i64(3), f.from_i64(-1)]);
        assert!(parse_word(f, "1,,2").is_err());
        assert_eq!(error_json("SupportError", "x")["error"]["kind"], "SupportError");
    }

    fn arb_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![Just(FieldSpec::Rational), Just(FieldSpec::Prime { p: 32003 }), Just(FieldSpec::Prime { p: 7 })]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sequence_and_polynomial_round_trip(
            field in arb_field(),
            vals in prop::collection::vec((-50i64..50, 1i64..9), 10),
        ) {
            let it = vals.iter().map(|(a, b)| field.from_ratio(*a, *b).unwrap_or_else(|_| field.zero()));
            let mut it = it.cycle();
            let s = MomentSequence::from_fn(3, field, 2, |_| it.next().unwrap());
            prop_assert_eq!(round_trip(&SequenceJson::of(&s)).build().unwrap(), s.clone());
            let p = Polynomial::from_terms(3, s.iter().map(|(e, v)| (e.clone(), v.clone())));
            let back = poly_from_json(field, 3, &round_trip(&poly_to_json(&p))).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn decomposition_round_trip(pts in prop::collection::btree_set((-9i64..9, -9i64..9), 0..5), w in 1i64..20) {
            let f = FieldSpec::Rational;
            let dec = Decomposition::new(pts.iter().map(|(x, y)| Term {
                weight: f.from_ratio(w, 3).unwrap(),
                point: vec![f.from_i64(*x), f.from_i64(*y)],
            }).collect());
            prop_assert_eq!(round_trip(&DecompositionJson::of(&dec, f)).build().unwrap(), dec.clone());
            let s = simplex_moments(&dec, 2, f, 3);
            let res = border_basis(&s, &MonomialOrder::deglex(2), BorderOptions::default()).unwrap();
            prop_assert_eq!(round_trip(&ResultJson::of(&res)).build().unwrap(), res);
        }
    }
}
