mod common;

use common::L;
use drinfeld::ring::Ring;
use drinfeld::skew::dual_isogeny_with;
use drinfeld::{DrinfeldModule, SkewPoly};
use rand::Rng as _;

fn rand_skew(r: &mut rand_chacha::ChaCha8Rng, like: &L, deg: usize) -> SkewPoly<L> {
    SkewPoly::new((0..=deg).map(|_| common::rand_l(r, like)).collect(), like)
}

fn rand_module(r: &mut rand_chacha::ChaCha8Rng, like: &L, rank: usize) -> DrinfeldModule<L> {
    let mut g: Vec<L> = (0..rank - 1).map(|_| common::rand_l(r, like)).collect();
    g.push(common::rand_nonzero_l(r, like));
    DrinfeldModule::new(common::rand_nonzero_l(r, like), g).unwrap()
}

#[test]
fn composition_is_associative() {
    let mut r = common::rng(10);
    let l = common::ext_field(3, 4);
    for _ in 0..30 {
        let (f, g, h) = (
            rand_skew(&mut r, &l, 3),
            rand_skew(&mut r, &l, 2),
            rand_skew(&mut r, &l, 3),
        );
        assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        assert_eq!(f.compose(&(g.clone() + h.clone())), f.compose(&g) + f.compose(&h));
    }
}

#[test]
fn tau_does_not_commute_with_scalars() {
    let l = common::ext_field(2, 3);
    let tau = SkewPoly::monomial(l.one_like(), 1);
    let c = SkewPoly::scalar(l.clone());
    assert_ne!(tau.compose(&c), c.compose(&tau));
    assert_eq!(tau.compose(&c), SkewPoly::monomial(l.pow(2), 1));
}

#[test]
fn right_division_round_trip() {
    let mut r = common::rng(11);
    let l = common::ext_field(5, 3);
    for _ in 0..40 {
        let (df, dg) = (r.gen_range(0..6), r.gen_range(0..4));
        let f = rand_skew(&mut r, &l, df);
        let mut g = rand_skew(&mut r, &l, dg);
        if g.is_zero() {
            g = SkewPoly::scalar(l.one_like());
        }
        let (qt, rem) = f.right_divide(&g).unwrap();
        assert_eq!(qt.compose(&g) + rem.clone(), f);
        assert!(rem.tau_degree().is_none_or(|d| Some(d) < g.tau_degree()));
    }
    let f = SkewPoly::scalar(l.one_like());
    assert_eq!(
        f.right_divide(&SkewPoly::zero(&l)).unwrap_err().name(),
        "DivisionByZero"
    );
}

#[test]
fn homomorphism_on_random_pairs() {
    let mut r = common::rng(12);
    let mut cases = 0;
    for q in [2, 3, 5] {
        let l = common::ext_field(q, 3);
        let ctx = common::fq(q);
        for rank in [2, 3] {
            for _ in 0..40 {
                let phi = rand_module(&mut r, &l, rank);
                let a = common::rand_nonzero_poly(&mut r, &ctx, 2);
                let b = common::rand_nonzero_poly(&mut r, &ctx, 2);
                let (pa, pb) = (phi.image(&a).unwrap(), phi.image(&b).unwrap());
                assert_eq!(phi.image(&(a.clone() * b.clone())).unwrap(), pa.compose(&pb));
                let s = a.clone() + b.clone();
                if !s.is_zero() {
                    assert_eq!(phi.image(&s).unwrap(), pa + pb);
                }
                cases += 1;
            }
        }
    }
    assert!(cases >= 200);
}

#[test]
fn image_has_expected_degree() {
    let mut r = common::rng(13);
    let l = common::ext_field(3, 2);
    let ctx = common::fq(3);
    let phi = rand_module(&mut r, &l, 3);
    let a = common::a("T^2+T+1", &ctx);
    assert_eq!(phi.image(&a).unwrap().tau_degree(), Some(6));
    assert_eq!(
        phi.image(&common::a("2", &ctx)).unwrap(),
        SkewPoly::scalar(l.from_int_like(2))
    );
}

#[test]
fn dual_of_phi_t_and_degenerate_scalar() {
    let mut r = common::rng(14);
    let l = common::ext_field(3, 5);
    let ctx = common::fq(3);
    let g = vec![common::rand_l(&mut r, &l), common::rand_nonzero_l(&mut r, &l)];
    let phi = DrinfeldModule::new(l.clone(), g).unwrap();
    let t2 = common::a("T^2", &ctx);
    assert_eq!(phi.dual_isogeny(&phi.phi_t(), &t2).unwrap(), phi.phi_t());
    let t = common::a("T", &ctx);
    let c = l.from_int_like(2);
    let one = common::a("1", &ctx);
    let hat = phi.dual_isogeny(&SkewPoly::scalar(c.clone()), &one).unwrap();
    assert_eq!(hat, SkewPoly::scalar(c.try_div(&c.pow(2)).unwrap()));
    // a constant u_0 ≠ 1 solves b_0 but makes u_0 − u_0^q vanish
    let u = SkewPoly::scalar(l.from_int_like(2));
    let e = phi.dual_isogeny(&u, &t).unwrap_err();
    assert!(matches!(e, drinfeld::Error::DegenerateDenominator { index: 1 }));
}

#[test]
fn dual_reports_non_isogenies() {
    let l = common::ext_field(2, 3);
    let tau = SkewPoly::monomial(l.one_like(), 1);
    let phi_a = SkewPoly::new(vec![l.clone(), l.one_like()], &l);
    let long = SkewPoly::monomial(l.one_like(), 3);
    assert_eq!(dual_isogeny_with(&phi_a, &long).unwrap_err().name(), "NotAnIsogeny");
    // u = τ: b_0 = φ_{a,0}/u_0 needs u_0 ≠ 0
    let e = dual_isogeny_with(&phi_a, &tau).unwrap_err();
    assert!(matches!(e, drinfeld::Error::DegenerateDenominator { index: 0 }));
}

#[test]
fn frobenius_on_extension_is_q_power() {
    let mut r = common::rng(15);
    let l = common::ext_field(5, 3);
    for _ in 0..20 {
        let x = common::rand_l(&mut r, &l);
        assert_eq!(x.frobenius(1), x.pow(5));
        assert_eq!(x.frobenius(3), x);
    }
}
