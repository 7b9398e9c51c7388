//! Rational functions in one variable `x` over the ambient field, places of
//! the projective line, divisors and truncated Laurent expansions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::poly::Poly;

/// A reduced fraction `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun<'a> {
    num: Poly<'a>,
    den: Poly<'a>,
}

/// A degree-one place of `K(x)`: a point of the projective line.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    Infinity,
    Finite(FieldElem),
}

impl fmt::Debug for RatFun<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RatFun<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<'a> RatFun<'a> {
    /// Builds `num / den` in reduced form; panics if `den` is zero.
    pub fn new(num: Poly<'a>, den: Poly<'a>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let ctx = num.ctx();
        if num.is_zero() {
            return RatFun {
                num,
                den: Poly::one(ctx),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let s = ctx.inv(den.lead());
        RatFun {
            num: num.scale(s),
            den: den.scale(s),
        }
    }

    pub fn from_poly(p: Poly<'a>) -> Self {
        let ctx = p.ctx();
        RatFun {
            num: p,
            den: Poly::one(ctx),
        }
    }

    pub fn zero(ctx: &'a FieldCtx) -> Self {
        Self::from_poly(Poly::zero(ctx))
    }

    pub fn one(ctx: &'a FieldCtx) -> Self {
        Self::from_poly(Poly::one(ctx))
    }

    pub fn constant(ctx: &'a FieldCtx, a: FieldElem) -> Self {
        Self::from_poly(Poly::constant(ctx, a))
    }

    pub fn x(ctx: &'a FieldCtx) -> Self {
        Self::from_poly(Poly::x(ctx))
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.num.ctx()
    }

    pub fn num(&self) -> &Poly<'a> {
        &self.num
    }

    pub fn den(&self) -> &Poly<'a> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.degree() == Some(0)
    }

    /// The constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<FieldElem> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn scale(&self, a: FieldElem) -> Self {
        if a.is_zero() {
            return Self::zero(self.ctx());
        }
        RatFun {
            num: self.num.scale(a),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let e = e.unsigned_abs();
        RatFun {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
    }

    /// `self^p` through Frobenius on both parts; stays reduced.
    pub fn frob(&self) -> Self {
        RatFun {
            num: self.num.frob(),
            den: self.den.frob(),
        }
    }

    /// `self^(p^j)`.
    pub fn frob_iter(&self, j: u32) -> Self {
        (0..j).fold(self.clone(), |acc, _| acc.frob())
    }

    /// Substitutes `g` for `x`.
    pub fn compose(&self, g: &RatFun<'a>) -> RatFun<'a> {
        let ctx = self.ctx();
        let d = self
            .num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0));
        let mut pn = vec![Poly::one(ctx)];
        let mut pd = vec![Poly::one(ctx)];
        for i in 1..=d {
            pn.push(&pn[i - 1] * &g.num);
            pd.push(&pd[i - 1] * &g.den);
        }
        let homog = |p: &Poly<'a>| {
            p.coeffs()
                .iter()
                .enumerate()
                .fold(Poly::zero(ctx), |acc, (i, &a)| {
                    if a.is_zero() {
                        acc
                    } else {
                        &acc + &(&pn[i] * &pd[d - i]).scale(a)
                    }
                })
        };
        RatFun::new(homog(&self.num), homog(&self.den))
    }

    /// Value at `a`, or `None` if `a` is a pole.
    pub fn eval_at(&self, a: FieldElem) -> Option<FieldElem> {
        let d = self.den.eval(a);
        if d.is_zero() {
            None
        } else {
            Some(self.ctx().div(self.num.eval(a), d))
        }
    }

    /// Order of vanishing at `place`; `None` stands for `+infinity` (f = 0).
    pub fn valuation_at(&self, place: Place) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(match place {
            Place::Infinity => {
                self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64
            }
            Place::Finite(a) => {
                self.num.root_multiplicity(a) as i64 - self.den.root_multiplicity(a) as i64
            }
        })
    }

    /// Finite poles (roots of the denominator) plus infinity when it is a pole.
    pub fn poles(&self) -> Result<Vec<Place>> {
        let mut out: Vec<Place> = self
            .den
            .roots()?
            .into_iter()
            .map(|(a, _)| Place::Finite(a))
            .collect();
        if self.valuation_at(Place::Infinity).is_some_and(|v| v < 0) {
            out.push(Place::Infinity);
        }
        Ok(out)
    }

    /// Principal divisor of a nonzero function.
    pub fn divisor_of(&self) -> Result<Divisor> {
        if self.is_zero() {
            return Err(Error::Domain("divisor of zero".into()));
        }
        let mut entries: Vec<(Place, i64)> = Vec::new();
        for (a, m) in self.num.roots()? {
            entries.push((Place::Finite(a), m as i64));
        }
        for (a, m) in self.den.roots()? {
            entries.push((Place::Finite(a), -(m as i64)));
        }
        let ctx = self.ctx();
        entries.sort_by_key(|(p, _)| match p {
            Place::Finite(a) => ctx.code(*a) as i64,
            Place::Infinity => i64::MAX,
        });
        let vinf = self.valuation_at(Place::Infinity).unwrap();
        if vinf != 0 {
            entries.push((Place::Infinity, vinf));
        }
        Ok(Divisor { entries })
    }

    /// The first `terms` coefficients of the expansion at `place` in the
    /// uniformizer `x - a` (finite) or `1/x` (infinity).
    pub fn laurent_at(&self, place: Place, terms: usize) -> LaurentSeries<'a> {
        let ctx = self.ctx();
        if self.is_zero() {
            return LaurentSeries {
                ctx,
                place,
                v0: 0,
                coeffs: vec![FieldElem::ZERO; terms],
            };
        }
        let (num, den, shift) = match place {
            Place::Finite(a) => {
                let t = Poly::new(ctx, vec![a, FieldElem::ONE]);
                (self.num.compose(&t), self.den.compose(&t), 0i64)
            }
            Place::Infinity => {
                let dn = self.num.degree().unwrap();
                let dd = self.den.degree().unwrap();
                (
                    self.num.reversed(dn + 1),
                    self.den.reversed(dd + 1),
                    dd as i64 - dn as i64,
                )
            }
        };
        let vn = num.coeffs().iter().take_while(|c| c.is_zero()).count();
        let vd = den.coeffs().iter().take_while(|c| c.is_zero()).count();
        let n = &num.coeffs()[vn..];
        let d = &den.coeffs()[vd..];
        let inv0 = ctx.inv(d[0]);
        let mut coeffs: Vec<FieldElem> = Vec::with_capacity(terms);
        for j in 0..terms {
            let mut acc = n.get(j).copied().unwrap_or(FieldElem::ZERO);
            for i in 1..=j.min(d.len() - 1) {
                acc = ctx.sub(acc, ctx.mul(d[i], coeffs[j - i]));
            }
            coeffs.push(ctx.mul(acc, inv0));
        }
        LaurentSeries {
            ctx,
            place,
            v0: shift + vn as i64 - vd as i64,
            coeffs,
        }
    }
}

/// The uniformizer at a place: `x - a` or `1/x`.
pub fn uniformizer<'a>(ctx: &'a FieldCtx, place: Place) -> RatFun<'a> {
    match place {
        Place::Finite(a) => RatFun::from_poly(Poly::linear_root(ctx, a)),
        Place::Infinity => RatFun::x(ctx).inv(),
    }
}

/// A finite formal sum of places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub entries: Vec<(Place, i64)>,
}

impl Divisor {
    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn coefficient(&self, place: Place) -> i64 {
        self.entries
            .iter()
            .find(|(p, _)| *p == place)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `sum_j coeffs[j] * t^(v0 + j)` with `t` the uniformizer at `place`.
#[derive(Clone, Debug)]
pub struct LaurentSeries<'a> {
    pub ctx: &'a FieldCtx,
    pub place: Place,
    pub v0: i64,
    pub coeffs: Vec<FieldElem>,
}

impl<'a> LaurentSeries<'a> {
    /// Coefficient of `t^e` (zero outside the stored window).
    pub fn coeff(&self, e: i64) -> FieldElem {
        let j = e - self.v0;
        if j < 0 {
            FieldElem::ZERO
        } else {
            self.coeffs.get(j as usize).copied().unwrap_or(FieldElem::ZERO)
        }
    }

    /// Exponent of the first nonzero stored coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|j| self.v0 + j as i64)
    }

    /// Re-sums the truncation as a rational function.
    pub fn to_ratfun(&self) -> RatFun<'a> {
        let t = uniformizer(self.ctx, self.place);
        self.coeffs
            .iter()
            .enumerate()
            .fold(RatFun::zero(self.ctx), |acc, (j, &c)| {
                if c.is_zero() {
                    acc
                } else {
                    &acc + &t.pow(self.v0 + j as i64).scale(c)
                }
            })
    }
}

impl<'a> Add for &RatFun<'a> {
    type Output = RatFun<'a>;
    fn add(self, rhs: &RatFun<'a>) -> RatFun<'a> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFun::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub for &RatFun<'a> {
    type Output = RatFun<'a>;
    fn sub(self, rhs: &RatFun<'a>) -> RatFun<'a> {
        self + &(-rhs)
    }
}

impl<'a> Neg for &RatFun<'a> {
    type Output = RatFun<'a>;
    fn neg(self) -> RatFun<'a> {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul for &RatFun<'a> {
    type Output = RatFun<'a>;
    fn mul(self, rhs: &RatFun<'a>) -> RatFun<'a> {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero(self.ctx());
        }
        if self.den.degree() == Some(0) && rhs.den.degree() == Some(0) {
            return RatFun::from_poly(&self.num * &rhs.num);
        }
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div for &RatFun<'a> {
    type Output = RatFun<'a>;
    fn div(self, rhs: &RatFun<'a>) -> RatFun<'a> {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RatFun::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr for RatFun<'a> {
            type Output = RatFun<'a>;
            fn $m(self, rhs: RatFun<'a>) -> RatFun<'a> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn xq_minus_x<'a>(f: &'a FieldCtx, q: usize) -> Poly<'a> {
        &Poly::monomial(f, f.one(), q) - &Poly::x(f)
    }

    #[test]
    fn valuation_examples() {
        let f2 = FieldCtx::build_ambient(2, &[1]).unwrap();
        let x = RatFun::x(&f2);
        let g = &x.pow(3) / &RatFun::from_poly(xq_minus_x(&f2, 2));
        assert_eq!(g.valuation_at(Place::Infinity), Some(-1));
        let f3 = FieldCtx::build_ambient(3, &[1]).unwrap();
        let h = RatFun::from_poly(xq_minus_x(&f3, 3)).inv();
        assert_eq!(h.valuation_at(Place::Finite(f3.zero())), Some(-1));
        assert_eq!(
            RatFun::x(&f3).valuation_at(Place::Finite(f3.zero())),
            Some(1)
        );
        assert_eq!(RatFun::zero(&f3).valuation_at(Place::Infinity), None);
    }

    #[test]
    fn divisor_examples() {
        let f = FieldCtx::build_ambient(2, &[1]).unwrap();
        let x = RatFun::x(&f);
        let d = x.divisor_of().unwrap();
        assert_eq!(
            d.entries,
            vec![(Place::Finite(f.zero()), 1), (Place::Infinity, -1)]
        );
        let g = RatFun::from_poly(xq_minus_x(&f, 2)).inv();
        let d = g.divisor_of().unwrap();
        assert_eq!(
            d.entries,
            vec![
                (Place::Finite(f.zero()), -1),
                (Place::Finite(f.one()), -1),
                (Place::Infinity, 2)
            ]
        );
        assert!(RatFun::constant(&f, f.one()).divisor_of().unwrap().is_empty());
    }

    #[test]
    fn laurent_examples() {
        let f = FieldCtx::build_ambient(5, &[1]).unwrap();
        let a = f.from_int(3);
        let g = RatFun::from_poly(Poly::linear_root(&f, a)).inv();
        let s = g.laurent_at(Place::Finite(a), 4);
        assert_eq!(s.v0, -1);
        assert_eq!(s.coeffs, vec![f.one(), f.zero(), f.zero(), f.zero()]);
        let s = RatFun::x(&f).pow(2).laurent_at(Place::Infinity, 3);
        assert_eq!((s.v0, s.coeffs[0]), (-2, f.one()));

        let f2 = FieldCtx::build_ambient(2, &[1]).unwrap();
        let g = RatFun::from_poly(xq_minus_x(&f2, 2)).inv();
        let s = g.laurent_at(Place::Finite(f2.zero()), 3);
        assert_eq!((s.v0, s.coeffs[0]), (-1, f2.one()));
    }

    #[test]
    fn eval_examples() {
        let f2 = FieldCtx::build_ambient(2, &[2]).unwrap();
        let g = RatFun::from_poly(xq_minus_x(&f2, 2)).inv();
        assert_eq!(g.eval_at(f2.zero()), None);
        let w = f2.generator();
        assert_eq!(RatFun::x(&f2).eval_at(w), Some(w));
        let f3 = FieldCtx::build_ambient(3, &[1]).unwrap();
        let h = RatFun::new(Poly::from_ints(&f3, &[1, 0, 1]), Poly::from_ints(&f3, &[1, 1]));
        assert_eq!(h.eval_at(f3.one()), Some(f3.one()));
    }

    #[test]
    fn compose_with_mobius() {
        let f = FieldCtx::build_ambient(3, &[1]).unwrap();
        let x = RatFun::x(&f);
        let g = &x.pow(2) + &x.inv();
        let inv = x.inv();
        let composed = g.compose(&inv);
        assert_eq!(composed, &x.pow(-2) + &x);
        assert_eq!(composed.compose(&inv), g);
    }
}
