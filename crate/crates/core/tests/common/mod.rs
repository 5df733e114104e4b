#![allow(dead_code)]

use std::sync::Arc;

use drinfeld::field::{FieldCtx, Fq};
use drinfeld::mpoly::MPoly;
use drinfeld::{BiPoly, Poly, Ring, UPoly};
use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fq(q: u64) -> Arc<FieldCtx> {
    FieldCtx::of_size(q).unwrap()
}

pub fn a(s: &str, ctx: &Arc<FieldCtx>) -> Poly {
    MPoly::parse(s, ctx, vec!["T"]).unwrap().to_nested(&["T"]).unwrap()
}

/// Polynomial in `y` over `A`, written in `T` and `y`.
pub fn bi(s: &str, ctx: &Arc<FieldCtx>) -> BiPoly {
    MPoly::parse(s, ctx, vec!["T", "y"])
        .unwrap()
        .to_nested(&["y", "T"])
        .unwrap()
}

pub fn rand_fq(r: &mut ChaCha8Rng, ctx: &Arc<FieldCtx>) -> Fq {
    Fq::from_index(ctx, r.gen_range(0..ctx.q()))
}

pub fn rand_poly(r: &mut ChaCha8Rng, ctx: &Arc<FieldCtx>, max_deg: usize) -> Poly {
    let d = r.gen_range(0..=max_deg);
    UPoly::new((0..=d).map(|_| rand_fq(r, ctx)).collect(), Fq::zero(ctx))
}

pub fn rand_nonzero_poly(r: &mut ChaCha8Rng, ctx: &Arc<FieldCtx>, max_deg: usize) -> Poly {
    loop {
        let p = rand_poly(r, ctx, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn rand_bipoly(r: &mut ChaCha8Rng, ctx: &Arc<FieldCtx>, dy: usize, dt: usize) -> BiPoly {
    let z = Poly::zero(&Fq::zero(ctx));
    UPoly::new((0..=dy).map(|_| rand_poly(r, ctx, dt)).collect(), z)
}

pub type L = drinfeld::quotient::QuotElem<Fq>;

/// `F_{q^n} = F_q[y]/(m)` with the first irreducible monic `m` of degree `n`.
pub fn ext_field(q: u64, n: usize) -> L {
    let ctx = fq(q);
    for idx in 0..q.pow(n as u32) {
        let mut c: Vec<Fq> = Vec::new();
        let mut t = idx;
        for _ in 0..n {
            c.push(Fq::from_index(&ctx, t % q));
            t /= q;
        }
        c.push(Fq::one(&ctx));
        let m = UPoly::from_coeffs(c);
        if drinfeld::orders::is_irreducible(&m, 8).unwrap() {
            return L::generator(Arc::new(m)).unwrap();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub fn rand_l(r: &mut ChaCha8Rng, like: &L) -> L {
    let ctx = like.modulus().lc().ctx().clone();
    let n = like.modulus().deg() as usize;
    let v = UPoly::new((0..n).map(|_| rand_fq(r, &ctx)).collect(), Fq::zero(&ctx));
    L::new(v, like.modulus().clone()).unwrap()
}

pub fn rand_nonzero_l(r: &mut ChaCha8Rng, like: &L) -> L {
    loop {
        let x = rand_l(r, like);
        if !x.is_zero() {
            return x;
        }
    }
}
