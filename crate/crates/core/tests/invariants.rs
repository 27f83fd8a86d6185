//! Structural properties of the engine on random planted instances.

mod common;

use common::{check_all, check_groebner, instance, interpolate_on_basis, planted, random_instance, PRIME};
use hankel_border::border::{certify, NormalForm};
use hankel_border::decomp::{decompose_with, DecomposeOptions};
use hankel_border::polys::Exponent;
use hankel_border::{border_basis, BorderOptions, FieldSpec, MonomialOrder, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn deglex_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..60 {
        let field = if i % 2 == 0 { FieldSpec::Rational } else { PRIME };
        let inst = random_instance(field, &mut rng).unwrap();
        check_all(&inst, i).unwrap_or_else(|e| panic!("instance {i}: {e}"));
        check_groebner(&inst).unwrap_or_else(|e| panic!("instance {i}: {e}"));
        assert!(certify(&inst.res, &inst.sigma));
    }
}

#[test]
fn degrevlex_and_permuted_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..30 {
        let field = if i % 2 == 0 { FieldSpec::Rational } else { PRIME };
        let n = rng.gen_range(2..=3);
        let r = rng.gen_range(1..=8);
        let order = if i % 3 == 0 {
            let mut vars: Vec<usize> = (0..n).collect();
            vars.reverse();
            MonomialOrder::with_vars(hankel_border::OrderKind::Deglex, vars).unwrap()
        } else {
            MonomialOrder::degrevlex(n)
        };
        let inst = instance(planted(field, n, r, &mut rng), field, n, &order).unwrap();
        check_all(&inst, i).unwrap_or_else(|e| panic!("instance {i}: {e}"));
        check_groebner(&inst).unwrap_or_else(|e| panic!("instance {i}: {e}"));
    }
}

#[test]
fn normal_form_agrees_with_interpolation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..8 {
        let field = if i % 2 == 0 { FieldSpec::Rational } else { PRIME };
        let inst = random_instance(field, &mut rng).unwrap();
        let mut nf = NormalForm::new(&inst.res, &inst.tables).unwrap();
        for _ in 0..100 {
            let e = Exponent::new((0..inst.nvars).map(|_| rng.gen_range(0..=4)).collect());
            let f = Polynomial::monomial(e.clone(), field.one());
            assert_eq!(nf.reduce(&f), interpolate_on_basis(&inst, &f), "instance {i}, monomial {e}");
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for i in 0..10 {
        let field = if i % 2 == 0 { FieldSpec::Rational } else { PRIME };
        let inst = random_instance(field, &mut rng).unwrap();
        let again = border_basis(&inst.sigma, &inst.res.order, BorderOptions::default()).unwrap();
        assert_eq!(again, inst.res);
        let opts = DecomposeOptions { seed: 5, exhaustive_fp: true, ..DecomposeOptions::default() };
        let a = decompose_with(&inst.sigma, &inst.res, &inst.tables, &opts).unwrap();
        let b = decompose_with(&inst.sigma, &inst.res, &inst.tables, &opts).unwrap();
        assert_eq!(a.decomposition, b.decomposition);
        assert_eq!(a.interpolants, b.interpolants);
    }
}

#[test]
fn below_minimal_degree_is_uncertified() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for i in 0..20 {
        let field = if i % 2 == 0 { FieldSpec::Rational } else { PRIME };
        let inst = random_instance(field, &mut rng).unwrap();
        if inst.degree == 0 || !inst.premature.is_empty() {
            continue;
        }
        let s = hankel_border::moments::simplex_moments(&inst.planted, inst.nvars, field, inst.degree - 1);
        let res = border_basis(&s, &inst.res.order, BorderOptions::default()).unwrap();
        assert!(!res.certified);
        assert!(!certify(&res, &s));
        assert!(res.require_certified().is_err());
    }
}
