//! Arithmetic in `F = K(x, y_1, .., y_r)` modulo `y_i^q = y_i + f_i`, with
//! every element kept in the normal form `sum c_e(x) y^e`, `0 <= e_i < q`.

mod automap;
mod closure;
pub mod generators;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

pub use automap::{induced_base_action, AutoMap};
pub use closure::{
    check_relations_and_structure, expected_group_order, family_closure, group_closure, Closure,
    GroupReport, RelationCheck, StructureReport,
};
pub use generators::{family_generators, GeneratorSet};

use crate::asgenus::{character_coefficients, subfield_rhs, AbelianASSpec};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::ratfun::RatFun;

/// Most layers any catalog family uses.
pub const MAX_LAYERS: usize = 3;

/// Exponent vector `(e_1, .., e_r)`; unused slots are zero.
pub type Monomial = [u16; MAX_LAYERS];

/// An element of the function field in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct NFElem<'a> {
    terms: BTreeMap<Monomial, RatFun<'a>>,
}

impl fmt::Debug for NFElem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})*y^{m:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> NFElem<'a> {
    pub fn zero() -> Self {
        NFElem {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_ratfun(c: RatFun<'a>) -> Self {
        Self::monomial([0; MAX_LAYERS], c)
    }

    pub fn monomial(m: Monomial, c: RatFun<'a>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        NFElem { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RatFun<'a>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&RatFun<'a>> {
        self.terms.get(m)
    }

    /// The coefficient of `y^0` when nothing else is present.
    pub fn as_ratfun(&self) -> Option<RatFun<'a>> {
        match self.terms.len() {
            0 => None,
            1 => self.terms.get(&[0; MAX_LAYERS]).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &RatFun<'a>) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NFElem {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: RatFun<'a>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(a) => {
                let s = &*a + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *a = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Monomial {
        let mut out = [0; MAX_LAYERS];
        for m in self.terms.keys() {
            for i in 0..MAX_LAYERS {
                out[i] = out[i].max(m[i]);
            }
        }
        out
    }
}

impl<'a> Add for &NFElem<'a> {
    type Output = NFElem<'a>;
    fn add(self, rhs: &NFElem<'a>) -> NFElem<'a> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Neg for &NFElem<'a> {
    type Output = NFElem<'a>;
    fn neg(self) -> NFElem<'a> {
        NFElem {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl<'a> Sub for &NFElem<'a> {
    type Output = NFElem<'a>;
    fn sub(self, rhs: &NFElem<'a>) -> NFElem<'a> {
        self + &(-rhs)
    }
}

/// Reduction data for one Artin-Schreier system.
pub struct NfCtx<'a> {
    pub ctx: &'a FieldCtx,
    pub spec: AbelianASSpec<'a>,
    q: usize,
    /// `pow_table[i][e]` lists the coefficients of `y_i^e` reduced to
    /// degree `< q` in `y_i`, for `e <= p (q - 1)`.
    pow_table: Vec<Vec<Vec<RatFun<'a>>>>,
}

impl<'a> NfCtx<'a> {
    pub fn new(spec: &AbelianASSpec<'a>) -> Result<Self> {
        let r = spec.r() as usize;
        if r > MAX_LAYERS {
            return Err(Error::Unsupported(format!(
                "at most {MAX_LAYERS} layers are supported"
            )));
        }
        let ctx = spec.ctx;
        let q = spec.q() as usize;
        if q > u16::MAX as usize / ctx.p() as usize {
            return Err(Error::Unsupported(format!("q = {q} is too large")));
        }
        let top = ctx.p() as usize * (q - 1);
        let pow_table = spec
            .f
            .iter()
            .map(|f| {
                let mut rows = Vec::with_capacity(top + 1);
                let mut cur = vec![RatFun::zero(ctx); q];
                cur[0] = RatFun::one(ctx);
                rows.push(cur.clone());
                for _ in 0..top {
                    let hi = cur[q - 1].clone();
                    let mut next = vec![RatFun::zero(ctx); q];
                    next[1..q].clone_from_slice(&cur[..q - 1]);
                    next[0] = &hi * f;
                    next[1] = &next[1] + &hi;
                    rows.push(next.clone());
                    cur = next;
                }
                rows
            })
            .collect();
        Ok(NfCtx {
            ctx,
            spec: spec.clone(),
            q,
            pow_table,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r(&self) -> usize {
        self.spec.f.len()
    }

    /// The generator `y_i` (0-based).
    pub fn y(&self, i: usize) -> NFElem<'a> {
        let mut m = [0; MAX_LAYERS];
        m[i] = 1;
        NFElem::monomial(m, RatFun::one(self.ctx))
    }

    pub fn constant(&self, c: FieldElem) -> NFElem<'a> {
        NFElem::from_ratfun(RatFun::constant(self.ctx, c))
    }

    pub fn one(&self) -> NFElem<'a> {
        self.constant(FieldElem::ONE)
    }

    /// Reduces a sum of `c * y^e` with exponents up to `p (q - 1)`.
    fn expand(&self, raw: HashMap<Monomial, RatFun<'a>>) -> NFElem<'a> {
        let q = self.q as u16;
        let mut out = NFElem::zero();
        let mut raw: Vec<_> = raw.into_iter().collect();
        raw.sort_by_key(|(m, _)| *m);
        for (m, c) in raw {
            if c.is_zero() {
                continue;
            }
            if m.iter().all(|&e| e < q) {
                out.add_term(m, c);
                continue;
            }
            let mut partial: Vec<(Monomial, RatFun<'a>)> = vec![([0; MAX_LAYERS], c)];
            for (i, &e) in m.iter().enumerate().take(self.r()) {
                if e < q {
                    for (pm, _) in partial.iter_mut() {
                        pm[i] = e;
                    }
                    continue;
                }
                let row = &self.pow_table[i][e as usize];
                let mut next = Vec::new();
                for (pm, pc) in &partial {
                    for (j, rc) in row.iter().enumerate() {
                        if rc.is_zero() {
                            continue;
                        }
                        let mut nm = *pm;
                        nm[i] = j as u16;
                        next.push((nm, pc * rc));
                    }
                }
                partial = next;
            }
            for (pm, pc) in partial {
                out.add_term(pm, pc);
            }
        }
        out
    }

    pub fn mul(&self, a: &NFElem<'a>, b: &NFElem<'a>) -> NFElem<'a> {
        let mut raw: HashMap<Monomial, RatFun<'a>> = HashMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let mut m = [0; MAX_LAYERS];
                for i in 0..MAX_LAYERS {
                    m[i] = ma[i] + mb[i];
                }
                let c = ca * cb;
                match raw.get_mut(&m) {
                    Some(s) => *s = &*s + &c,
                    None => {
                        raw.insert(m, c);
                    }
                }
            }
        }
        self.expand(raw)
    }

    pub fn pow(&self, a: &NFElem<'a>, e: u64) -> NFElem<'a> {
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// `a^p`: Frobenius on coefficients, exponents times `p`, then reduction.
    pub fn pow_p(&self, a: &NFElem<'a>) -> NFElem<'a> {
        let p = self.ctx.p() as u16;
        let raw = a
            .terms
            .iter()
            .map(|(m, c)| (m.map(|e| e * p), c.frob()))
            .collect();
        self.expand(raw)
    }

    /// `a^(p^j)`.
    pub fn pow_p_iter(&self, a: &NFElem<'a>, j: u32) -> NFElem<'a> {
        (0..j).fold(a.clone(), |acc, _| self.pow_p(&acc))
    }

    /// `a^q`.
    pub fn pow_q(&self, a: &NFElem<'a>) -> NFElem<'a> {
        self.pow_p_iter(a, self.spec.n)
    }

    /// Substitutes `g` for `x` in every coefficient.
    pub fn map_coefficients(
        &self,
        a: &NFElem<'a>,
        f: impl Fn(&RatFun<'a>) -> RatFun<'a>,
    ) -> NFElem<'a> {
        let mut out = NFElem::zero();
        for (m, c) in &a.terms {
            out.add_term(*m, f(c));
        }
        out
    }
}

/// Which sign pattern the two-layer single equation follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignVariant {
    /// `t^{q^2} - t = u^q + u + eta (v^q + v)`.
    Plus,
    /// `t^{q^2} - t = u^q - u + eta (v^q - v)`.
    Minus,
    /// Both, as happens in characteristic 2.
    Both,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingleEquationReport {
    pub variant: SignVariant,
    /// `t = y_1 + eta y_2` involves both layers and `eta` is not in `F_q`.
    pub generates: bool,
}

/// Evaluates `t^{q^2} - t` for `t = y_1 + eta y_2` and matches it against
/// both sign patterns.
pub fn verify_single_equation(nf: &NfCtx<'_>) -> Result<SingleEquationReport> {
    if nf.r() != 2 {
        return Err(Error::Usage("the single equation needs two layers".into()));
    }
    let ctx = nf.ctx;
    let eta = nf.spec.eta;
    let t = &nf.y(0) + &nf.y(1).scale(&RatFun::constant(ctx, eta));
    let t2 = nf.pow_q(&nf.pow_q(&t));
    let lhs = &t2 - &t;
    let (u, v) = (&nf.spec.f[0], &nf.spec.f[1]);
    let (uq, vq) = (u.frob_iter(nf.spec.n), v.frob_iter(nf.spec.n));
    let e = RatFun::constant(ctx, eta);
    let plus = &(&uq + u) + &(&(&vq + v) * &e);
    let minus = &(&uq - u) + &(&(&vq - v) * &e);
    let is = |r: &RatFun<'_>| lhs == NFElem::from_ratfun(r.clone());
    let variant = match (is(&plus), is(&minus)) {
        (true, true) => SignVariant::Both,
        (true, false) => SignVariant::Plus,
        (false, true) => SignVariant::Minus,
        (false, false) => SignVariant::Neither,
    };
    let generates = t.len() == 2 && !ctx.in_subfield(eta, nf.spec.n);
    Ok(SingleEquationReport { variant, generates })
}

/// Builds the generator of the degree-p subextension attached to `mu` and
/// checks that its Artin-Schreier equation has right-hand side
/// `subfield_rhs(spec, mu)`.
pub fn verify_subfield_identity(nf: &NfCtx<'_>, mu: FieldElem) -> Result<bool> {
    let t = subfield_generator(nf, mu)?;
    let lhs = &nf.pow_p(&t) - &t;
    let rhs = subfield_rhs(&nf.spec, mu)?;
    Ok(lhs == NFElem::from_ratfun(rhs) && t.as_ratfun().is_none())
}

/// `t_mu = sum_{j < rn} (mu t)^{p^j}` with `t = sum eta^{i-1} y_i`, minus
/// the telescoping corrections that turn each `a f_i^{q^k}` into
/// `a^{q^{-k}} f_i`.
pub fn subfield_generator<'a>(nf: &NfCtx<'a>, mu: FieldElem) -> Result<NFElem<'a>> {
    // validates mu
    character_coefficients(&nf.spec, mu)?;
    let ctx = nf.ctx;
    let (n, r) = (nf.spec.n, nf.r() as u32);
    let mut t = NFElem::zero();
    let mut c = mu;
    for i in 0..r as usize {
        t = &t + &nf.y(i).scale(&RatFun::constant(ctx, c));
        c = ctx.mul(c, nf.spec.eta);
    }
    let mut acc = NFElem::zero();
    let mut cur = t;
    for _ in 0..r * n {
        acc = &acc + &cur;
        cur = nf.pow_p(&cur);
    }
    let mut a = mu;
    for f in &nf.spec.f {
        for k in 1..r {
            // b^{q^k} = a
            let b = ctx.frob(a, ctx.k() - (k * n) % ctx.k());
            let mut w = f.scale(b);
            for _ in 0..k * n {
                acc = &acc - &NFElem::from_ratfun(w.clone());
                w = w.frob();
            }
        }
        a = ctx.mul(a, nf.spec.eta);
    }
    Ok(acc)
}
