use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::ratfun::RatFun;

use super::{NFElem, NfCtx, MAX_LAYERS};

/// A field map given by the images of `x` and of each `y_i`.
#[derive(Clone, Debug)]
pub struct AutoMap<'a> {
    pub x: RatFun<'a>,
    pub y: Vec<NFElem<'a>>,
    pub label: String,
}

impl<'a> AutoMap<'a> {
    /// Rejects x-images that are not fractional-linear.
    pub fn new(x: RatFun<'a>, y: Vec<NFElem<'a>>, label: &str) -> Result<Self> {
        if mobius_coefficients(&x).is_none() {
            return Err(Error::Domain(format!(
                "{label}: x-image {x} is not a fractional-linear map"
            )));
        }
        Ok(AutoMap {
            x,
            y,
            label: label.to_string(),
        })
    }

    pub fn identity(nf: &NfCtx<'a>) -> Self {
        AutoMap {
            x: RatFun::x(nf.ctx),
            y: (0..nf.r()).map(|i| nf.y(i)).collect(),
            label: "id".into(),
        }
    }

    pub fn is_identity(&self, nf: &NfCtx<'a>) -> bool {
        self.x == RatFun::x(nf.ctx) && (0..nf.r()).all(|i| self.y[i] == nf.y(i))
    }

    /// Fixes `x` and moves each `y_i` by a constant.
    pub fn is_translation(&self, nf: &NfCtx<'a>) -> bool {
        self.x == RatFun::x(nf.ctx)
            && (0..nf.r()).all(|i| {
                let d = &self.y[i] - &nf.y(i);
                d.is_zero() || d.as_ratfun().is_some_and(|c| c.is_constant())
            })
    }

    /// Bit-stable identity used for hashing group elements.
    pub fn key(&self, nf: &NfCtx<'a>) -> Vec<u32> {
        let ctx = nf.ctx;
        let mut out = Vec::new();
        let push_rat = |out: &mut Vec<u32>, c: &RatFun<'a>| {
            for p in [c.num(), c.den()] {
                out.push(p.coeffs().len() as u32);
                out.extend(p.coeffs().iter().map(|&a| ctx.code(a)));
            }
        };
        push_rat(&mut out, &self.x);
        for yi in &self.y {
            out.push(yi.len() as u32);
            for (m, c) in yi.terms() {
                out.extend(m.iter().map(|&e| e as u32));
                push_rat(&mut out, c);
            }
        }
        out
    }

    /// Applies the map to an element.
    pub fn substitute(&self, nf: &NfCtx<'a>, a: &NFElem<'a>) -> NFElem<'a> {
        let maxe = a.max_exponents();
        let powers: Vec<Vec<NFElem<'a>>> = (0..nf.r())
            .map(|i| {
                let mut v = vec![nf.one()];
                for e in 1..=maxe[i] as usize {
                    let next = nf.mul(&v[e - 1], &self.y[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = NFElem::zero();
        for (m, c) in a.terms() {
            let mut term = NFElem::from_ratfun(c.compose(&self.x));
            for i in 0..nf.r().min(MAX_LAYERS) {
                if m[i] > 0 {
                    term = nf.mul(&term, &powers[i][m[i] as usize]);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, nf: &NfCtx<'a>, other: &AutoMap<'a>) -> AutoMap<'a> {
        AutoMap {
            x: other.x.compose(&self.x),
            y: other.y.iter().map(|yi| self.substitute(nf, yi)).collect(),
            label: format!("{}*{}", self.label, other.label),
        }
    }

    /// Smallest `k <= bound` with `self^k = id`.
    pub fn order(&self, nf: &NfCtx<'a>, bound: u64) -> Option<u64> {
        let mut cur = self.clone();
        for k in 1..=bound {
            if cur.is_identity(nf) {
                return Some(k);
            }
            cur = self.compose(nf, &cur);
        }
        None
    }

    /// Inverse as `self^(k-1)`, `k` the order.
    pub fn inverse(&self, nf: &NfCtx<'a>, bound: u64) -> Option<AutoMap<'a>> {
        let k = self.order(nf, bound)?;
        let mut inv = AutoMap::identity(nf);
        for _ in 1..k {
            inv = self.compose(nf, &inv);
        }
        inv.label = format!("{}^-1", self.label);
        Some(inv)
    }

    /// Checks every layer equation on the images and exhibits an inverse.
    /// Returns the first failing layer (0-based), or `r` when no inverse
    /// turned up within `bound` powers.
    pub fn verify(&self, nf: &NfCtx<'a>, bound: u64) -> std::result::Result<(), usize> {
        if let Some(i) = self.failing_layer(nf) {
            return Err(i);
        }
        match self.inverse(nf, bound) {
            Some(inv) if self.compose(nf, &inv).is_identity(nf)
                && inv.compose(nf, self).is_identity(nf) => Ok(()),
            _ => Err(nf.r()),
        }
    }

    /// First layer whose equation fails on the images, if any.
    pub fn failing_layer(&self, nf: &NfCtx<'a>) -> Option<usize> {
        (0..nf.r()).find(|&i| {
            let yi = &self.y[i];
            let lhs = &nf.pow_q(yi) - yi;
            let rhs = NFElem::from_ratfun(nf.spec.f[i].compose(&self.x));
            lhs != rhs
        })
    }
}

/// `(a, b, c, d)` with `x-image = (a x + b) / (c x + d)`, normalized so the
/// first nonzero entry is 1.
pub fn mobius_coefficients(x: &RatFun<'_>) -> Option<[FieldElem; 4]> {
    let ctx = x.ctx();
    let (num, den) = (x.num(), x.den());
    if num.degree().unwrap_or(0) > 1 || den.degree().unwrap_or(0) > 1 || x.is_constant() {
        return None;
    }
    let v = [num.coeff(1), num.coeff(0), den.coeff(1), den.coeff(0)];
    let lead = *v.iter().find(|e| !e.is_zero())?;
    let s = ctx.inv(lead);
    Some(v.map(|e| ctx.mul(e, s)))
}

/// Projective class of the action on `K(x)`.
pub fn induced_base_action(m: &AutoMap<'_>) -> Option<[FieldElem; 4]> {
    mobius_coefficients(&m.x)
}
