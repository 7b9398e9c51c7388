//! Generators and property predicates shared by the property suites and
//! the acceptance target.
#![allow(dead_code)]

use rand::Rng;

use ascurves::asgenus::{
    abelian_invariants, abelian_invariants_with, as_reduce, characters, AbelianASSpec,
};
use ascurves::families::{classify_conic, parametrize_conic, Conic, ConicClass};
use ascurves::nfalg::{AutoMap, NFElem, NfCtx, MAX_LAYERS};
use ascurves::{FieldCtx, FieldElem, Place, Poly, RatFun};

pub fn random_elem<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> FieldElem {
    ctx.from_code(rng.gen_range(0..ctx.size()))
}

pub fn random_nonzero<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> FieldElem {
    ctx.from_code(rng.gen_range(1..ctx.size()))
}

/// Element of the subfield of degree `d` (over `F_p`).
pub fn random_in_subfield<R: Rng>(ctx: &FieldCtx, d: u32, rng: &mut R) -> FieldElem {
    let sub = ctx.subfield_elements(d).unwrap();
    sub[rng.gen_range(0..sub.len())]
}

pub fn random_poly<'a, R: Rng>(ctx: &'a FieldCtx, max_deg: usize, rng: &mut R) -> Poly<'a> {
    let d = rng.gen_range(0..=max_deg);
    Poly::new(ctx, (0..=d).map(|_| random_elem(ctx, rng)).collect())
}

/// Nonzero rational function with arbitrary (possibly non-split)
/// numerator and denominator.
pub fn random_ratfun<'a, R: Rng>(ctx: &'a FieldCtx, max_deg: usize, rng: &mut R) -> RatFun<'a> {
    loop {
        let num = random_poly(ctx, max_deg, rng);
        let den = random_poly(ctx, max_deg, rng);
        if !num.is_zero() && !den.is_zero() {
            return RatFun::new(num, den);
        }
    }
}

/// Nonzero function whose numerator and denominator split over `ctx`.
pub fn random_split_ratfun<'a, R: Rng>(ctx: &'a FieldCtx, factors: usize, rng: &mut R) -> RatFun<'a> {
    let mut f = RatFun::constant(ctx, random_nonzero(ctx, rng));
    for _ in 0..rng.gen_range(0..=factors) {
        let lin = RatFun::from_poly(Poly::linear_root(ctx, random_elem(ctx, rng)));
        let e = rng.gen_range(1..=3);
        f = if rng.gen_bool(0.5) { &f * &lin.pow(e) } else { &f / &lin.pow(e) };
    }
    f
}

pub fn random_place<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> Place {
    if rng.gen_bool(0.2) {
        Place::Infinity
    } else {
        Place::Finite(random_elem(ctx, rng))
    }
}

/// The reduced pole order is 0 or prime to `p`, and the shift accounts for
/// the difference.
pub fn as_reduce_postcondition(f: &RatFun<'_>, place: Place) -> bool {
    let p = f.ctx().p();
    let red = as_reduce(f, place);
    let g = &(f - &red.shift.pow(p as i64)) + &red.shift;
    let v = g.valuation_at(place);
    if red.m == 0 {
        v.is_none_or(|v| v >= 0)
    } else {
        !red.m.is_multiple_of(p) && v == Some(-(red.m as i64))
    }
}

pub fn divisor_has_degree_zero(f: &RatFun<'_>) -> bool {
    f.divisor_of().is_ok_and(|d| d.degree() == 0)
}

pub fn random_nf<'a, R: Rng>(nf: &NfCtx<'a>, terms: usize, rng: &mut R) -> NFElem<'a> {
    let mut out = NFElem::zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let mut m = [0u16; MAX_LAYERS];
        for e in m.iter_mut().take(nf.r()) {
            *e = rng.gen_range(0..nf.q() as u16);
        }
        let c = random_ratfun(nf.ctx, 2, rng);
        out = &out + &NFElem::monomial(m, c);
    }
    out
}

pub fn ring_axioms(nf: &NfCtx<'_>, a: &NFElem<'_>, b: &NFElem<'_>, c: &NFElem<'_>) -> bool {
    let assoc = nf.mul(&nf.mul(a, b), c) == nf.mul(a, &nf.mul(b, c));
    let comm = nf.mul(a, b) == nf.mul(b, a);
    let dist = nf.mul(a, &(b + c)) == &nf.mul(a, b) + &nf.mul(a, c);
    let add = &(a + b) - b == *a;
    assoc && comm && dist && add
}

pub fn substitute_is_homomorphism(
    nf: &NfCtx<'_>,
    m: &AutoMap<'_>,
    a: &NFElem<'_>,
    b: &NFElem<'_>,
) -> bool {
    let prod = m.substitute(nf, &nf.mul(a, b)) == nf.mul(&m.substitute(nf, a), &m.substitute(nf, b));
    let sum = m.substitute(nf, &(a + b)) == &m.substitute(nf, a) + &m.substitute(nf, b);
    prod && sum
}

/// An element generating `F_{q^r}` over `F_q` inside the ambient field.
pub fn random_eta<R: Rng>(ctx: &FieldCtx, n: u32, r: u32, rng: &mut R) -> FieldElem {
    loop {
        let e = random_in_subfield(ctx, n * r, rng);
        let proper = (1..r).filter(|d| r.is_multiple_of(*d)).any(|d| ctx.in_subfield(e, n * d));
        if !proper {
            return e;
        }
    }
}

/// Genus, p-rank and irreducibility do not depend on `eta` or on the
/// `F_p^*` representative of each character.
pub fn invariants_are_choice_free<R: Rng>(spec: &AbelianASSpec<'_>, rng: &mut R) -> bool {
    let ctx = spec.ctx;
    let base = abelian_invariants(spec).unwrap();
    let key = |r: &ascurves::InvariantsReport| (r.genus, r.p_rank, r.irreducible);
    let eta = random_eta(ctx, spec.n, spec.r(), rng);
    let other = AbelianASSpec::new(ctx, spec.n, spec.f.clone(), eta).unwrap();
    let by_eta = abelian_invariants(&other).unwrap();
    let reps: Vec<FieldElem> = characters(ctx, spec.n, spec.r())
        .unwrap()
        .into_iter()
        .map(|mu| ctx.mul(mu, ctx.from_int(rng.gen_range(1..ctx.p()) as i64)))
        .collect();
    let by_reps = abelian_invariants_with(spec, &reps).unwrap();
    key(&base) == key(&by_eta) && key(&base) == key(&by_reps)
}

/// Random irreducible conic over `F_q` with two points at infinity.
pub fn random_two_point_conic<R: Rng>(ctx: &FieldCtx, n: u32, rng: &mut R) -> Conic {
    loop {
        let a = [(); 6].map(|_| random_in_subfield(ctx, n, rng));
        let c = Conic::new(a, n);
        if !c.is_irreducible(ctx) {
            continue;
        }
        let Ok(cls) = classify_conic(ctx, &c) else { continue };
        if matches!(
            cls.class,
            ConicClass::TwoRational | ConicClass::RationalNonrational | ConicClass::TwoNonrational
        ) {
            return c;
        }
    }
}

/// The cover over a two-point conic is ordinary with the predicted genus.
pub fn two_point_conic_is_ordinary(ctx: &FieldCtx, n: u32, c: &Conic) -> bool {
    let predicted = classify_conic(ctx, c).unwrap().predicted;
    let (u, v) = parametrize_conic(ctx, c).unwrap();
    let eta = ctx.subfield_generator(n, 2).unwrap();
    let spec = AbelianASSpec::new(ctx, n, vec![u, v], eta).unwrap();
    let rep = abelian_invariants(&spec).unwrap();
    rep.ordinary && rep.irreducible && (rep.genus, rep.p_rank) == predicted
}
