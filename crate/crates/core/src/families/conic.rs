//! Plane conics `a1 u^2 + a2 v^2 + a3 uv + a4 u + a5 v + a6 = 0`: points at
//! infinity and rational parametrization.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::poly::Poly;
use crate::ratfun::RatFun;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conic {
    /// `[a1, .., a6]` in the order of the defining polynomial above.
    pub a: [FieldElem; 6],
    /// The base field is `F_q`, `q = p^n`.
    pub n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicClass {
    TwoRational,
    RationalNonrational,
    TwoNonrational,
    OneRational,
    OneNonrational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConicClassification {
    pub class: ConicClass,
    /// Genus and p-rank of the double Artin-Schreier cover over this conic.
    pub predicted: (u64, u64),
}

impl Conic {
    pub fn new(a: [FieldElem; 6], n: u32) -> Self {
        Conic { a, n }
    }

    /// Value of the defining polynomial at a point.
    pub fn eval(&self, ctx: &FieldCtx, u: FieldElem, v: FieldElem) -> FieldElem {
        let [a1, a2, a3, a4, a5, a6] = self.a;
        let terms = [
            ctx.mul(a1, ctx.mul(u, u)),
            ctx.mul(a2, ctx.mul(v, v)),
            ctx.mul(a3, ctx.mul(u, v)),
            ctx.mul(a4, u),
            ctx.mul(a5, v),
            a6,
        ];
        terms.into_iter().fold(FieldElem::ZERO, |s, t| ctx.add(s, t))
    }

    /// The defining polynomial evaluated at rational functions.
    pub fn eval_rat<'a>(&self, ctx: &'a FieldCtx, u: &RatFun<'a>, v: &RatFun<'a>) -> RatFun<'a> {
        let [a1, a2, a3, a4, a5, a6] = self.a;
        let terms = [
            (u * u).scale(a1),
            (v * v).scale(a2),
            (u * v).scale(a3),
            u.scale(a4),
            v.scale(a5),
            RatFun::constant(ctx, a6),
        ];
        terms.iter().fold(RatFun::zero(ctx), |s, t| &s + t)
    }

    /// Absolute irreducibility, i.e. smoothness of the projective closure.
    pub fn is_irreducible(&self, ctx: &FieldCtx) -> bool {
        let [a1, a2, a3, a4, a5, a6] = self.a;
        let m = |x: FieldElem, y: FieldElem| ctx.mul(x, y);
        let d = if ctx.p() == 2 {
            let terms = [
                m(a1, m(a5, a5)),
                m(a2, m(a4, a4)),
                m(a6, m(a3, a3)),
                m(a3, m(a4, a5)),
            ];
            terms.into_iter().fold(FieldElem::ZERO, |s, t| ctx.add(s, t))
        } else {
            let two = ctx.from_int(2);
            let (b11, b22, b33) = (m(two, a1), m(two, a2), m(two, a6));
            
            ctx.sub(
                ctx.add(m(b11, m(b22, b33)), m(two, m(a3, m(a5, a4)))),
                ctx.add(
                    ctx.add(m(b11, m(a5, a5)), m(b22, m(a4, a4))),
                    m(b33, m(a3, a3)),
                ),
            )
        };
        !d.is_zero()
    }
}

/// Classifies the points at infinity of an irreducible conic.
pub fn classify_conic(ctx: &FieldCtx, c: &Conic) -> Result<ConicClassification> {
    if !c.is_irreducible(ctx) {
        return Err(Error::Domain("conic is degenerate".into()));
    }
    let [a1, a2, a3, ..] = c.a;
    let p = ctx.p();
    let q = (p as u64).pow(c.n);
    let double = if p == 2 {
        a3.is_zero()
    } else {
        ctx.sub(ctx.mul(a3, a3), ctx.mul(ctx.from_int(4), ctx.mul(a1, a2)))
            .is_zero()
    };
    // Points (1 : t) with a1 + a3 t + a2 t^2 = 0, plus (0 : 1) when a2 = 0.
    let h = Poly::new(ctx, vec![a1, a3, a2]);
    let mut rational = 0;
    if a2.is_zero() {
        rational += 1;
    }
    if h.degree().unwrap_or(0) > 0 {
        if let Ok(roots) = h.roots() {
            rational += roots
                .iter()
                .filter(|(t, _)| ctx.in_subfield(*t, c.n))
                .count();
        }
    }
    let class = match (double, rational) {
        (true, 0) => ConicClass::OneNonrational,
        (true, _) => ConicClass::OneRational,
        (false, 0) => ConicClass::TwoNonrational,
        (false, 1) => ConicClass::RationalNonrational,
        (false, _) => ConicClass::TwoRational,
    };
    let predicted = match class {
        ConicClass::TwoRational => ((q - 1) * (q - 1), (q - 1) * (q - 1)),
        ConicClass::RationalNonrational => (q * q - q, q * q - q),
        ConicClass::TwoNonrational => (q * q - 1, q * q - 1),
        _ if p == 2 => (0, 0),
        ConicClass::OneRational => ((q * q - q) / 2, 0),
        ConicClass::OneNonrational => ((q * q - 1) / 2, 0),
    };
    Ok(ConicClassification { class, predicted })
}

/// Least point of the conic, searching subfields of increasing degree and
/// `(u, v)` in code order.
pub fn base_point(ctx: &FieldCtx, c: &Conic) -> Result<(FieldElem, FieldElem)> {
    let [a1, a2, a3, a4, a5, a6] = c.a;
    let k = ctx.k();
    for d in (1..=k).filter(|d| k.is_multiple_of(*d)) {
        for u in ctx.subfield_elements(d)? {
            let c0 = ctx.add(ctx.mul(u, ctx.add(ctx.mul(a1, u), a4)), a6);
            let c1 = ctx.add(ctx.mul(a3, u), a5);
            let quad = Poly::new(ctx, vec![c0, c1, a2]);
            let v = match quad.degree() {
                None => Some(FieldElem::ZERO),
                Some(0) => None,
                Some(_) => quad.roots().ok().and_then(|rs| {
                    rs.into_iter()
                        .map(|(v, _)| v)
                        .filter(|&v| ctx.in_subfield(v, d))
                        .min_by_key(|&v| ctx.code(v))
                }),
            };
            if let Some(v) = v {
                return Ok((u, v));
            }
        }
    }
    Err(Error::InsufficientField {
        needed_degree: 2 * k,
    })
}

/// A parametrization `(u(x), v(x))` with `K(u, v) = K(x)`.
pub fn parametrize_conic<'a>(ctx: &'a FieldCtx, c: &Conic) -> Result<(RatFun<'a>, RatFun<'a>)> {
    if !c.is_irreducible(ctx) {
        return Err(Error::Domain("conic is degenerate".into()));
    }
    let [a1, a2, a3, a4, a5, a6] = c.a;
    let x = RatFun::x(ctx);
    let lin = |s: FieldElem, t: FieldElem| RatFun::from_poly(Poly::new(ctx, vec![t, s]));
    // Linear in v: solve for v over K(u) with u = x.
    if a2.is_zero() && (!a3.is_zero() || !a5.is_zero()) {
        let num = Poly::new(ctx, vec![a6, a4, a1]);
        let v = &RatFun::from_poly(-&num) / &lin(a3, a5);
        return Ok((x, v));
    }
    if a1.is_zero() && (!a3.is_zero() || !a4.is_zero()) {
        let num = Poly::new(ctx, vec![a6, a5, a2]);
        let u = &RatFun::from_poly(-&num) / &lin(a3, a4);
        return Ok((u, x));
    }
    let (u0, v0) = base_point(ctx, c)?;
    let two = ctx.from_int(2);
    let quad = RatFun::from_poly(Poly::new(ctx, vec![a1, a3, a2]));
    let b0 = ctx.add(
        ctx.add(ctx.mul(two, ctx.mul(a1, u0)), ctx.mul(a3, v0)),
        a4,
    );
    let b1 = ctx.add(
        ctx.add(ctx.mul(two, ctx.mul(a2, v0)), ctx.mul(a3, u0)),
        a5,
    );
    let s = -&(&lin(b1, b0) / &quad);
    let u = &RatFun::constant(ctx, u0) + &s;
    let v = &RatFun::constant(ctx, v0) + &(&x * &s);
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic(ctx: &FieldCtx, a: [i64; 6], n: u32) -> Conic {
        Conic::new(a.map(|v| ctx.from_int(v)), n)
    }

    #[test]
    fn classification_examples() {
        for q in [3u32, 5, 7] {
            let f = FieldCtx::build_ambient(q, &[2]).unwrap();
            let qq = q as u64;
            let c = classify_conic(&f, &conic(&f, [0, 0, 1, 0, 0, -1], 1)).unwrap();
            assert_eq!(c.class, ConicClass::TwoRational);
            assert_eq!(c.predicted, ((qq - 1).pow(2), (qq - 1).pow(2)));
            let eps = f.least_nonsquare(1).unwrap();
            let sing = Conic::new(
                [f.one(), f.neg(eps), f.zero(), f.zero(), f.zero(), f.neg(f.one())],
                1,
            );
            let c = classify_conic(&f, &sing).unwrap();
            assert_eq!(c.class, ConicClass::TwoNonrational);
            assert_eq!(c.predicted, (qq * qq - 1, qq * qq - 1));
            let par = Conic::new(
                [f.one(), f.zero(), f.zero(), f.zero(), f.neg(eps), f.zero()],
                1,
            );
            let c = classify_conic(&f, &par).unwrap();
            assert_eq!(c.class, ConicClass::OneRational);
            assert_eq!(c.predicted, ((qq * qq - qq) / 2, 0));
        }
        let f = FieldCtx::build_ambient(2, &[2]).unwrap();
        let c = classify_conic(&f, &conic(&f, [1, 0, 0, 0, 1, 0], 1)).unwrap();
        assert_eq!(c.predicted, (0, 0));
    }

    #[test]
    fn degenerate_conics_are_rejected() {
        let f = FieldCtx::build_ambient(3, &[1]).unwrap();
        // (u - v)(u + v)
        let c = conic(&f, [1, -1, 0, 0, 0, 0], 1);
        assert!(matches!(classify_conic(&f, &c), Err(Error::Domain(_))));
        let f = FieldCtx::build_ambient(2, &[1]).unwrap();
        let c = conic(&f, [1, 1, 0, 0, 0, 0], 1);
        assert!(!c.is_irreducible(&f));
    }

    #[test]
    fn parametrization_examples() {
        let f = FieldCtx::build_ambient(5, &[2]).unwrap();
        let x = RatFun::x(&f);
        let (u, v) = parametrize_conic(&f, &conic(&f, [0, 0, 1, 0, 0, -1], 1)).unwrap();
        assert_eq!((u, v), (x.clone(), x.inv()));
        let eps = f.from_int(2);
        let par = Conic::new(
            [f.one(), f.zero(), f.zero(), f.zero(), f.neg(eps), f.zero()],
            1,
        );
        let (u, v) = parametrize_conic(&f, &par).unwrap();
        assert_eq!(u, x);
        assert_eq!(v, x.pow(2).scale(f.inv(eps)));
        let sing = conic(&f, [1, -2, 0, 0, 0, -1], 1);
        let (u, v) = parametrize_conic(&f, &sing).unwrap();
        assert!(sing.eval_rat(&f, &u, &v).is_zero());
    }
}
