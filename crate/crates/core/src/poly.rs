//! Dense univariate polynomials over the ambient field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gf::{lcm, FieldCtx, FieldElem};

/// A polynomial with coefficients in the ambient field, constant term first.
/// The coefficient vector never has trailing zeros.
#[derive(Clone)]
pub struct Poly<'a> {
    ctx: &'a FieldCtx,
    c: Vec<FieldElem>,
}

impl PartialEq for Poly<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl Eq for Poly<'_> {}

impl fmt::Debug for Poly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = self.ctx.fmt_elem(a);
            let coef = if coef.contains('+') {
                format!("({coef})")
            } else {
                coef
            };
            match i {
                0 => write!(f, "{coef}")?,
                1 if a.is_one() => write!(f, "x")?,
                1 => write!(f, "{coef}*x")?,
                _ if a.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "{coef}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Poly<'a> {
    pub fn new(ctx: &'a FieldCtx, mut c: Vec<FieldElem>) -> Self {
        while c.last().is_some_and(|e| e.is_zero()) {
            c.pop();
        }
        Poly { ctx, c }
    }

    pub fn zero(ctx: &'a FieldCtx) -> Self {
        Poly { ctx, c: Vec::new() }
    }

    pub fn one(ctx: &'a FieldCtx) -> Self {
        Self::constant(ctx, FieldElem::ONE)
    }

    pub fn constant(ctx: &'a FieldCtx, a: FieldElem) -> Self {
        Self::new(ctx, vec![a])
    }

    pub fn x(ctx: &'a FieldCtx) -> Self {
        Self::new(ctx, vec![FieldElem::ZERO, FieldElem::ONE])
    }

    /// `a * x^d`.
    pub fn monomial(ctx: &'a FieldCtx, a: FieldElem, d: usize) -> Self {
        let mut c = vec![FieldElem::ZERO; d + 1];
        c[d] = a;
        Self::new(ctx, c)
    }

    /// `x - a`.
    pub fn linear_root(ctx: &'a FieldCtx, a: FieldElem) -> Self {
        Self::new(ctx, vec![ctx.neg(a), FieldElem::ONE])
    }

    /// Polynomial with small integer coefficients, constant term first.
    pub fn from_ints(ctx: &'a FieldCtx, c: &[i64]) -> Self {
        Self::new(ctx, c.iter().map(|&n| ctx.from_int(n)).collect())
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.c.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElem {
        self.c.last().copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, a: FieldElem) -> Self {
        let f = self.ctx;
        Self::new(f, self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.ctx.inv(self.lead()))
    }

    pub fn eval(&self, a: FieldElem) -> FieldElem {
        let f = self.ctx;
        self.c
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &x| f.add(f.mul(acc, a), x))
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn divrem(&self, d: &Poly<'a>) -> (Poly<'a>, Poly<'a>) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = self.ctx;
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let inv = f.inv(d.lead());
        let mut r = self.c.clone();
        let mut q = vec![FieldElem::ZERO; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = f.mul(r[top], inv);
            if c.is_zero() {
                continue;
            }
            q[top - dd] = c;
            for i in 0..=dd {
                let idx = top - dd + i;
                r[idx] = f.sub(r[idx], f.mul(c, d.c[i]));
            }
        }
        r.truncate(dd);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly<'a>) -> Poly<'a> {
        self.divrem(d).1
    }

    /// Exact division; panics on a nonzero remainder.
    pub fn div_exact(&self, d: &Poly<'a>) -> Poly<'a> {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly<'a>) -> Poly<'a> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u64) -> Poly<'a> {
        let mut result = Poly::one(self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self^p`, computed coefficient-wise through Frobenius.
    pub fn frob(&self) -> Poly<'a> {
        let f = self.ctx;
        let p = f.p() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![FieldElem::ZERO; (self.c.len() - 1) * p + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[i * p] = f.frob(a, 1);
        }
        Poly { ctx: f, c }
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Poly<'a>) -> Poly<'a> {
        let f = self.ctx;
        self.c.iter().rev().fold(Poly::zero(f), |acc, &a| {
            &(&acc * g) + &Poly::constant(f, a)
        })
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: FieldElem) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let lin = Poly::linear_root(self.ctx, a);
        let mut cur = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = cur.divrem(&lin);
            if !r.is_zero() {
                return m;
            }
            m += 1;
            cur = q;
        }
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly<'a>) -> Poly<'a> {
        let mut result = Poly::one(self.ctx).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                result = (&result * &base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m);
            }
        }
        result
    }

    /// All roots in the ambient field with multiplicities, in code order.
    ///
    /// Fails with [`Error::InsufficientField`] if the polynomial does not
    /// split, naming the degree over `F_p` of a field where it would.
    pub fn roots(&self) -> Result<Vec<(FieldElem, u32)>> {
        let f = self.ctx;
        let Some(deg) = self.degree() else {
            return Err(Error::Domain("roots of the zero polynomial".into()));
        };
        let mut out = Vec::new();
        let mut rest = self.clone();
        let mut total = 0;
        if deg > 0 {
            for a in f.elements() {
                if rest.degree() == Some(0) {
                    break;
                }
                if rest.eval(a).is_zero() {
                    let m = rest.root_multiplicity(a);
                    rest = rest.div_exact(&Poly::linear_root(f, a).pow(m as u64));
                    out.push((a, m));
                    total += m as usize;
                }
            }
        }
        if total < deg {
            return Err(Error::InsufficientField {
                needed_degree: rest.splitting_degree(),
            });
        }
        Ok(out)
    }

    /// Degree over `F_p` of the smallest extension of the ambient field in
    /// which this polynomial splits (distinct-degree factorisation).
    pub fn splitting_degree(&self) -> u32 {
        let f = self.ctx;
        let x = Poly::x(f);
        let mut rest = self.monic();
        let mut l = 1u64;
        let mut xq = x.clone();
        let mut e = 1u64;
        while rest.degree().unwrap_or(0) > 0 {
            xq = xq.pow_mod(f.size() as u64, &rest);
            let g = (&xq - &x).gcd(&rest);
            if g.degree().unwrap_or(0) > 0 {
                l = lcm(l, e);
                while rest.degree().unwrap_or(0) > 0 && (rest.gcd(&g).degree().unwrap_or(0) > 0) {
                    let h = rest.gcd(&g);
                    rest = rest.div_exact(&h);
                }
                xq = xq.rem(&rest.clone().max_one());
            }
            e += 1;
            if e > 64 {
                break;
            }
        }
        f.k() * l as u32
    }

    fn max_one(self) -> Poly<'a> {
        if self.degree().unwrap_or(0) == 0 {
            Poly::one(self.ctx)
        } else {
            self
        }
    }

    /// Reverses the coefficient vector after padding to length `len`.
    pub fn reversed(&self, len: usize) -> Poly<'a> {
        let mut c = self.c.clone();
        c.resize(len.max(c.len()), FieldElem::ZERO);
        c.reverse();
        Poly::new(self.ctx, c)
    }
}

impl<'a> Add for &Poly<'a> {
    type Output = Poly<'a>;
    fn add(self, rhs: &Poly<'a>) -> Poly<'a> {
        let f = self.ctx;
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(f, c)
    }
}

impl<'a> Sub for &Poly<'a> {
    type Output = Poly<'a>;
    fn sub(self, rhs: &Poly<'a>) -> Poly<'a> {
        let f = self.ctx;
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(f, c)
    }
}

impl<'a> Neg for &Poly<'a> {
    type Output = Poly<'a>;
    fn neg(self) -> Poly<'a> {
        let f = self.ctx;
        Poly::new(f, self.c.iter().map(|&a| f.neg(a)).collect())
    }
}

impl<'a> Mul for &Poly<'a> {
    type Output = Poly<'a>;
    fn mul(self, rhs: &Poly<'a>) -> Poly<'a> {
        let f = self.ctx;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut c = vec![FieldElem::ZERO; self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }
}
