//! Arithmetic in a single ambient finite field `F_{p^k}`.
//!
//! Elements are stored in logarithmic form relative to a fixed primitive
//! element `g`: the raw value `0` is the zero element and `v >= 1` stands for
//! `g^(v-1)`. Multiplication is index addition; addition goes through a Zech
//! logarithm table. Every subfield `F_{p^d}` with `d | k` is addressed inside
//! the same ambient field, so no embedding bookkeeping is needed within a run.
//!
//! The defining modulus is the monic irreducible polynomial of degree `k`
//! whose coefficient vector, read as a base-`p` integer with the constant term
//! as least significant digit, is smallest. Enumeration order of elements
//! ("code order") is the same base-`p` reading of the coordinate vector in the
//! power basis of that modulus.

use std::fmt;

use crate::error::{Error, Result};

/// Upper bound on the number of elements of an ambient field.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// An element of the ambient field, in logarithmic representation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 1
    }

    /// Raw logarithmic index; stable for a fixed context.
    #[inline]
    pub fn raw(self) -> u32 {
        self.0
    }
}

/// The ambient field `F_{p^k}` together with its lookup tables.
pub struct FieldCtx {
    p: u32,
    k: u32,
    size: u32,
    modulus: Vec<u32>,
    exp_code: Vec<u32>,
    log_of_code: Vec<u32>,
    zech: Vec<u32>,
    neg_one_log: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

const NO_LOG: u32 = u32::MAX;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Splits a prime power `q = p^n` into `(p, n)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut n = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p as u32, n))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over the prime field, used only while selecting the
/// modulus and the primitive element.
mod fp {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = inv(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * inv_lead % p;
            for i in 0..=dm {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p * p - c * m[i] % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        result
    }

    pub fn inv(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out = vec![0u32; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }
}

fn digits(mut code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(code % p);
        code /= p;
    }
    out
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let k = (m.len() - 1) as u32;
    let x = vec![0, 1];
    let mut frob = Vec::with_capacity(k as usize + 1);
    let mut cur = x.clone();
    frob.push(cur.clone());
    for _ in 0..k {
        cur = fp::pow_mod(&cur, p as u64, m, p);
        frob.push(cur.clone());
    }
    if fp::sub(&frob[k as usize], &fp::rem(&x, m, p), p) != Vec::<u32>::new() {
        return false;
    }
    for r in prime_factors(k) {
        let h = fp::sub(&frob[(k / r) as usize], &fp::rem(&x, m, p), p);
        if fp::gcd(&h, m, p).len() != 1 {
            return false;
        }
    }
    true
}

impl FieldCtx {
    /// Builds the ambient field of degree `lcm(required_degrees)` over `F_p`.
    pub fn build_ambient(p: u32, required_degrees: &[u32]) -> Result<FieldCtx> {
        if !is_prime(p as u64) {
            return Err(Error::Usage(format!("{p} is not prime")));
        }
        if required_degrees.is_empty() || required_degrees.contains(&0) {
            return Err(Error::Usage("field degrees must be positive".into()));
        }
        let k = required_degrees.iter().fold(1u64, |acc, &d| lcm(acc, d as u64));
        let size = (p as u64).checked_pow(k as u32).filter(|&s| s <= MAX_FIELD_SIZE);
        let Some(size) = size else {
            return Err(Error::Usage(format!(
                "ambient field F_{p}^{k} exceeds {MAX_FIELD_SIZE} elements"
            )));
        };
        Ok(Self::with_degree(p, k as u32, size as u32))
    }

    fn with_degree(p: u32, k: u32, size: u32) -> FieldCtx {
        let modulus = (0..size)
            .map(|c| {
                let mut m = digits(c, p, k);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");

        let order = size - 1;
        let mut exp_code = Vec::new();
        for cand in 2..size.max(3) {
            let g = if size == 2 { vec![1] } else { digits(cand, p, k) };
            exp_code.clear();
            let mut cur = vec![1u32];
            let mut ok = true;
            for i in 0..order {
                let mut d = cur.clone();
                d.resize(k as usize, 0);
                let code = from_digits(&d, p);
                if i > 0 && code == 1 {
                    ok = false;
                    break;
                }
                exp_code.push(code);
                cur = fp::mul_mod(&cur, &g, &modulus, p);
            }
            if ok {
                break;
            }
        }
        debug_assert_eq!(exp_code.len() as u32, order);

        let mut log_of_code = vec![NO_LOG; size as usize];
        for (i, &c) in exp_code.iter().enumerate() {
            log_of_code[c as usize] = i as u32;
        }
        let zech = exp_code
            .iter()
            .map(|&c| {
                let mut d = digits(c, p, k);
                d[0] = (d[0] + 1) % p;
                let s = from_digits(&d, p);
                if s == 0 {
                    NO_LOG
                } else {
                    log_of_code[s as usize]
                }
            })
            .collect();
        let neg_one_log = if p == 2 { 0 } else { order / 2 };
        FieldCtx {
            p,
            k,
            size,
            modulus,
            exp_code,
            log_of_code,
            zech,
            neg_one_log,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Coefficients of the defining modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    fn order(&self) -> u32 {
        self.size - 1
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// The element with the given coordinate code.
    pub fn from_code(&self, code: u32) -> FieldElem {
        assert!(code < self.size, "code {code} out of range");
        if code == 0 {
            FieldElem::ZERO
        } else {
            FieldElem(self.log_of_code[code as usize] + 1)
        }
    }

    /// Coordinate code of `e` in the power basis of the modulus.
    pub fn code(&self, e: FieldElem) -> u32 {
        if e.is_zero() {
            0
        } else {
            self.exp_code[(e.0 - 1) as usize]
        }
    }

    /// Coordinate vector of `e` over `F_p`, constant coordinate first.
    pub fn coords(&self, e: FieldElem) -> Vec<u32> {
        digits(self.code(e), self.p, self.k)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        let r = n.rem_euclid(self.p as i64) as u32;
        self.from_code(r)
    }

    /// The primitive element used for the logarithm tables.
    pub fn generator(&self) -> FieldElem {
        if self.size == 2 {
            FieldElem::ONE
        } else {
            FieldElem(2)
        }
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.size).map(move |c| self.from_code(c))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = self.order();
        let la = a.0 - 1;
        let lb = b.0 - 1;
        let d = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[d as usize];
        if z == NO_LOG {
            FieldElem::ZERO
        } else {
            let s = la as u64 + z as u64;
            FieldElem((s % n as u64) as u32 + 1)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if a.0 == 0 || self.p == 2 {
            a
        } else {
            let s = (a.0 - 1) as u64 + self.neg_one_log as u64;
            FieldElem((s % self.order() as u64) as u32 + 1)
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let s = (a.0 - 1) as u64 + (b.0 - 1) as u64;
        FieldElem((s % self.order() as u64) as u32 + 1)
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(!a.is_zero(), "inverse of zero");
        let n = self.order();
        FieldElem((n - (a.0 - 1)) % n + 1)
    }

    #[inline]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    /// `a^e` for a signed exponent (negative exponents invert `a`).
    pub fn pow(&self, a: FieldElem, e: i64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.is_zero() {
            assert!(e > 0, "negative power of zero");
            return FieldElem::ZERO;
        }
        let n = self.order() as i128;
        let l = ((a.0 - 1) as i128 * e as i128).rem_euclid(n);
        FieldElem(l as u32 + 1)
    }

    /// `a^(p^j)`, the `j`-th iterate of Frobenius.
    pub fn frob(&self, a: FieldElem, j: u32) -> FieldElem {
        if a.is_zero() {
            return a;
        }
        let n = self.order() as u64;
        let mut m = 1u64 % n.max(1);
        for _ in 0..(j % self.k) {
            m = m * self.p as u64 % n.max(1);
        }
        if n == 1 {
            return a;
        }
        FieldElem((((a.0 - 1) as u64 * m) % n) as u32 + 1)
    }

    /// The unique `f` with `f^p = e`.
    pub fn pth_root(&self, e: FieldElem) -> FieldElem {
        self.frob(e, self.k - 1)
    }

    /// Is `e` contained in the subfield `F_{p^d}`?
    pub fn in_subfield(&self, e: FieldElem, d: u32) -> bool {
        if d == 0 || !self.k.is_multiple_of(d) {
            return false;
        }
        if e.is_zero() {
            return true;
        }
        let step = self.order() / (self.p.pow(d) - 1);
        (e.0 - 1).is_multiple_of(step)
    }

    /// Elements of `F_{p^d}` in code order.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<FieldElem>> {
        self.check_degree(d)?;
        let step = self.order() / (self.p.pow(d) - 1);
        let mut out: Vec<FieldElem> = std::iter::once(FieldElem::ZERO)
            .chain((0..self.p.pow(d) - 1).map(|i| FieldElem(i * step + 1)))
            .collect();
        out.sort_by_key(|&e| self.code(e));
        Ok(out)
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if d == 0 || !self.k.is_multiple_of(d) {
            Err(Error::Domain(format!(
                "F_{}^{} is not a subfield of the ambient F_{}^{}",
                self.p, d, self.p, self.k
            )))
        } else {
            Ok(())
        }
    }

    /// Relative trace from `F_{p^from}` down to `F_{p^to}`.
    pub fn rel_trace(&self, e: FieldElem, from: u32, to: u32) -> Result<FieldElem> {
        self.check_degree(from)?;
        if to == 0 || !from.is_multiple_of(to) {
            return Err(Error::Domain(format!("{to} does not divide {from}")));
        }
        if !self.in_subfield(e, from) {
            return Err(Error::Domain(format!(
                "element is not in F_{}^{}",
                self.p, from
            )));
        }
        let mut acc = FieldElem::ZERO;
        let mut cur = e;
        for _ in 0..from / to {
            acc = self.add(acc, cur);
            cur = self.frob(cur, to);
        }
        Ok(acc)
    }

    /// Relative norm from `F_{p^from}` down to `F_{p^to}`.
    pub fn rel_norm(&self, e: FieldElem, from: u32, to: u32) -> Result<FieldElem> {
        self.check_degree(from)?;
        if to == 0 || !from.is_multiple_of(to) || !self.in_subfield(e, from) {
            return Err(Error::Domain("bad norm request".into()));
        }
        let mut acc = FieldElem::ONE;
        let mut cur = e;
        for _ in 0..from / to {
            acc = self.mul(acc, cur);
            cur = self.frob(cur, to);
        }
        Ok(acc)
    }

    /// Solves `y^q - y = c` inside `F_{p^d}`.
    pub fn as_solve(&self, c: FieldElem, q: u64, d: u32) -> Result<Option<FieldElem>> {
        let Some((qp, n)) = prime_power(q) else {
            return Err(Error::Usage(format!("{q} is not a prime power")));
        };
        if qp != self.p {
            return Err(Error::Usage(format!("{q} is not a power of {}", self.p)));
        }
        self.check_degree(d)?;
        if !self.in_subfield(c, d) {
            return Err(Error::Domain("right-hand side outside search field".into()));
        }
        let lhs = |y: FieldElem| self.sub(self.frob(y, n), y);
        if n > 0 && d.is_multiple_of(n) {
            if !self.rel_trace(c, d, n)?.is_zero() {
                return Ok(None);
            }
            if c.is_zero() {
                return Ok(Some(FieldElem::ZERO));
            }
            let m = d / n;
            let theta = self
                .subfield_elements(d)?
                .into_iter()
                .find(|&t| !self.rel_trace(t, d, n).unwrap().is_zero())
                .expect("trace is surjective");
            let tr = self.rel_trace(theta, d, n)?;
            let mut partial = FieldElem::ZERO;
            let mut acc = FieldElem::ZERO;
            for i in 1..m {
                partial = self.add(partial, self.frob(c, n * (i - 1)));
                acc = self.add(acc, self.mul(partial, self.frob(theta, n * i)));
            }
            let y = self.div(acc, tr);
            if lhs(y) == c {
                return Ok(Some(y));
            }
            let y = self.neg(y);
            if lhs(y) == c {
                return Ok(Some(y));
            }
        }
        Ok(self.subfield_elements(d)?.into_iter().find(|&y| lhs(y) == c))
    }

    /// Square root with the smaller code, if any.
    pub fn sqrt(&self, e: FieldElem) -> Option<FieldElem> {
        if e.is_zero() {
            return Some(e);
        }
        if self.p == 2 {
            return Some(self.pth_root(e));
        }
        let l = e.0 - 1;
        if !l.is_multiple_of(2) {
            return None;
        }
        let r1 = FieldElem(l / 2 + 1);
        let r2 = self.neg(r1);
        Some(if self.code(r1) <= self.code(r2) { r1 } else { r2 })
    }

    /// Human-readable form as a polynomial in the modulus root `a`.
    pub fn fmt_elem(&self, e: FieldElem) -> String {
        let c = self.coords(e);
        let mut terms = Vec::new();
        for (i, &x) in c.iter().enumerate().rev() {
            if x == 0 {
                continue;
            }
            let t = match (i, x) {
                (0, _) => format!("{x}"),
                (1, 1) => "a".to_string(),
                (1, _) => format!("{x}a"),
                (_, 1) => format!("a^{i}"),
                _ => format!("{x}a^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Finds an embedding of `self` into `target` (a root of this modulus).
    pub fn embed_into<'t>(&self, target: &'t FieldCtx) -> Result<Embedding<'t>> {
        if self.p != target.p || !target.k.is_multiple_of(self.k) {
            return Err(Error::Domain(format!(
                "F_{}^{} does not embed in F_{}^{}",
                self.p, self.k, target.p, target.k
            )));
        }
        let root = target
            .subfield_elements(self.k)?
            .into_iter()
            .find(|&r| {
                let mut acc = FieldElem::ZERO;
                for &c in self.modulus.iter().rev() {
                    acc = target.add(target.mul(acc, r), target.from_int(c as i64));
                }
                acc.is_zero()
            })
            .expect("irreducible modulus splits in an extension of its degree");
        let mut powers = Vec::with_capacity(self.k as usize);
        let mut cur = FieldElem::ONE;
        for _ in 0..self.k {
            powers.push(cur);
            cur = target.mul(cur, root);
        }
        let table = (0..self.size)
            .map(|code| {
                digits(code, self.p, self.k)
                    .iter()
                    .zip(&powers)
                    .fold(FieldElem::ZERO, |acc, (&d, &pw)| {
                        target.add(acc, target.mul(target.from_int(d as i64), pw))
                    })
            })
            .collect();
        Ok(Embedding {
            target,
            table,
            source_log_to_code: self.exp_code.clone(),
        })
    }
}

/// A field embedding `F_{p^d} -> target`, tabulated.
pub struct Embedding<'t> {
    target: &'t FieldCtx,
    table: Vec<FieldElem>,
    source_log_to_code: Vec<u32>,
}

impl<'t> Embedding<'t> {
    pub fn target(&self) -> &'t FieldCtx {
        self.target
    }

    pub fn map(&self, e: FieldElem) -> FieldElem {
        if e.is_zero() {
            FieldElem::ZERO
        } else {
            self.table[self.source_log_to_code[(e.0 - 1) as usize] as usize]
        }
    }
}

/// Which named constants a family needs.
#[derive(Clone, Debug, Default)]
pub struct ConstantsRequest {
    /// `q = p^n`.
    pub n: u32,
    /// Least non-square of `F_q` and its square root (odd characteristic).
    pub nonsquare: bool,
    /// Generator of `F_{q^r}` over `F_q`.
    pub eta_degree: Option<u32>,
    /// Element of `F_q` with absolute trace 1 and a root of `X^2 + X + eps`
    /// (even characteristic).
    pub trace_one: bool,
}

/// Deterministically selected constants; `None` where not requested.
#[derive(Clone, Debug, Default)]
pub struct Constants {
    pub epsilon: Option<FieldElem>,
    pub sqrt_epsilon: Option<FieldElem>,
    pub eta: Option<FieldElem>,
    pub xi: Option<FieldElem>,
}

impl FieldCtx {
    /// Selects each requested constant as the least element (code order)
    /// satisfying its defining predicate.
    pub fn find_constants(&self, req: &ConstantsRequest) -> Result<Constants> {
        let n = req.n;
        let mut out = Constants::default();
        if req.nonsquare {
            if self.p == 2 {
                return Err(Error::Usage(
                    "every element is a square in characteristic 2".into(),
                ));
            }
            let eps = self.least_nonsquare(n)?;
            out.epsilon = Some(eps);
            self.check_degree(2 * n)?;
            out.sqrt_epsilon = self.sqrt(eps);
        }
        if req.trace_one {
            if self.p != 2 {
                return Err(Error::Usage(
                    "trace-one constant is for characteristic 2".into(),
                ));
            }
            let eps = self
                .subfield_elements(n)?
                .into_iter()
                .find(|&e| self.rel_trace(e, n, 1).unwrap().is_one())
                .ok_or_else(|| Error::Domain("no trace-one element".into()))?;
            self.check_degree(2 * n)?;
            let xi = self
                .subfield_elements(2 * n)?
                .into_iter()
                .find(|&x| self.add(self.mul(x, x), x) == eps)
                .ok_or_else(|| Error::Domain("X^2+X+eps has no root".into()))?;
            out.epsilon = Some(eps);
            out.xi = Some(xi);
        }
        if let Some(r) = req.eta_degree {
            out.eta = Some(self.subfield_generator(n, r)?);
        }
        Ok(out)
    }

    /// Least non-square of `F_{p^n}` (odd characteristic).
    pub fn least_nonsquare(&self, n: u32) -> Result<FieldElem> {
        if self.p == 2 {
            return Err(Error::Usage("no non-squares in characteristic 2".into()));
        }
        self.subfield_elements(n)?
            .into_iter()
            .find(|&e| !e.is_zero() && !self.is_square_in(e, n))
            .ok_or_else(|| Error::Domain("no non-square found".into()))
    }

    /// Square test relative to the subfield `F_{p^n}` containing `e`.
    pub fn is_square_in(&self, e: FieldElem, n: u32) -> bool {
        if e.is_zero() || self.p == 2 {
            return true;
        }
        let qn = (self.p as i64).pow(n);
        self.pow(e, (qn - 1) / 2).is_one()
    }

    /// Least element generating `F_{q^r}` over `F_q`, with `q = p^n`.
    pub fn subfield_generator(&self, n: u32, r: u32) -> Result<FieldElem> {
        self.check_degree(n * r)?;
        let proper: Vec<u32> = (1..r).filter(|e| r.is_multiple_of(*e)).collect();
        self.subfield_elements(n * r)?
            .into_iter()
            .find(|&e| proper.iter().all(|&d| !self.in_subfield(e, n * d)))
            .ok_or_else(|| Error::Domain("no generator found".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ambient_degree_is_lcm() {
        assert_eq!(FieldCtx::build_ambient(2, &[1, 2]).unwrap().k(), 2);
        assert_eq!(FieldCtx::build_ambient(3, &[2, 4]).unwrap().k(), 4);
        assert!(matches!(
            FieldCtx::build_ambient(4, &[1]),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn ambient_is_deterministic() {
        let a = FieldCtx::build_ambient(3, &[4]).unwrap();
        let b = FieldCtx::build_ambient(3, &[2, 4]).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        // X^4 + X + 2 is the least irreducible quartic over F_3 in code order
        assert_eq!(a.modulus(), &[2, 1, 0, 0, 1]);
    }

    #[test]
    fn modulus_is_irreducible() {
        for (p, k) in [(2, 6), (3, 4), (5, 2), (7, 3), (2, 8), (3, 6)] {
            let f = FieldCtx::build_ambient(p, &[k]).unwrap();
            assert!(is_irreducible(f.modulus(), p));
            // no roots in any proper subfield: check X^{p^d} - X gcd
            for d in 1..=k / 2 {
                let x = vec![0, 1];
                let xp = fp::pow_mod(&x, (p as u64).pow(d), f.modulus(), p);
                let h = fp::sub(&xp, &x, p);
                assert_eq!(fp::gcd(&h, f.modulus(), p).len(), 1);
            }
        }
    }

    #[test]
    fn table_arithmetic_matches_coordinates() {
        let f = FieldCtx::build_ambient(3, &[3]).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                let s = f.add(a, b);
                let ca = f.coords(a);
                let cb = f.coords(b);
                let expect: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(f.coords(s), expect);
                assert_eq!(f.sub(s, b), a);
                if !b.is_zero() {
                    assert_eq!(f.mul(f.div(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f = FieldCtx::build_ambient(2, &[2]).unwrap();
        let w = f
            .elements()
            .find(|&e| f.add(f.add(f.mul(e, e), e), f.one()).is_zero())
            .unwrap();
        assert_eq!(f.rel_trace(w, 2, 1).unwrap(), f.one());
        assert_eq!(f.rel_trace(f.zero(), 2, 1).unwrap(), f.zero());
        let g = FieldCtx::build_ambient(3, &[4]).unwrap();
        assert_eq!(g.rel_trace(g.one(), 4, 1).unwrap(), g.from_int(4));
        assert_eq!(g.rel_trace(g.one(), 2, 1).unwrap(), g.from_int(2));
        let gen = g.generator();
        assert!(matches!(g.rel_trace(gen, 2, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn as_solve_examples() {
        let f2 = FieldCtx::build_ambient(2, &[2]).unwrap();
        assert_eq!(f2.as_solve(f2.zero(), 2, 1).unwrap(), Some(f2.zero()));
        assert_eq!(f2.as_solve(f2.one(), 2, 1).unwrap(), None);
        let y = f2.as_solve(f2.one(), 2, 2).unwrap().unwrap();
        assert!(!f2.in_subfield(y, 1));
        assert_eq!(f2.add(f2.mul(y, y), y), f2.one());
        assert!(matches!(f2.as_solve(f2.one(), 6, 2), Err(Error::Usage(_))));
    }

    #[test]
    fn pth_root_examples() {
        let f = FieldCtx::build_ambient(2, &[2]).unwrap();
        assert_eq!(f.pth_root(f.zero()), f.zero());
        assert_eq!(f.pth_root(f.one()), f.one());
        for w in f.elements().filter(|&e| !f.in_subfield(e, 1)) {
            assert_eq!(f.pth_root(w), f.mul(w, w));
        }
    }

    #[test]
    fn constants_examples() {
        let f = FieldCtx::build_ambient(3, &[2]).unwrap();
        let c = f
            .find_constants(&ConstantsRequest {
                n: 1,
                nonsquare: true,
                eta_degree: Some(2),
                ..Default::default()
            })
            .unwrap();
        assert_eq!(c.epsilon, Some(f.from_int(2)));
        let s = c.sqrt_epsilon.unwrap();
        assert_eq!(f.mul(s, s), f.from_int(2));
        let eta = c.eta.unwrap();
        assert!(!f.in_subfield(eta, 1));
        assert_eq!(f.frob(eta, 2), eta);

        let g = FieldCtx::build_ambient(2, &[2]).unwrap();
        let c = g
            .find_constants(&ConstantsRequest {
                n: 1,
                trace_one: true,
                ..Default::default()
            })
            .unwrap();
        assert_eq!(c.epsilon, Some(g.one()));
        let xi = c.xi.unwrap();
        assert_eq!(g.add(g.mul(xi, xi), xi), g.one());
        assert!(g
            .find_constants(&ConstantsRequest {
                n: 1,
                nonsquare: true,
                ..Default::default()
            })
            .is_err());
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = FieldCtx::build_ambient(3, &[2]).unwrap();
        let big = FieldCtx::build_ambient(3, &[6]).unwrap();
        let emb = small.embed_into(&big).unwrap();
        for a in small.elements() {
            assert!(big.in_subfield(emb.map(a), 2));
            for b in small.elements() {
                assert_eq!(emb.map(small.add(a, b)), big.add(emb.map(a), emb.map(b)));
                assert_eq!(emb.map(small.mul(a, b)), big.mul(emb.map(a), emb.map(b)));
            }
        }
    }
}
