//! Rational-place counts, L-polynomials and the invariants they imply.
//!
//! Counting runs over `F_Q`, `Q = base^m`, where `base = q^d` is the field
//! of definition of the model. Above an unramified rational place
//! `x = x0` of `F_Q(x)` there are `q^r` rational places if every
//! `Tr_{F_Q/F_q} f_i(x0)` vanishes and none otherwise. At the poles, each
//! character `sum c_i f_i` is reduced locally: the rational places above the
//! pole number `|S|` when the characters unramified there (`U`) and those
//! also split there (`S`) coincide, and zero otherwise.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::asgenus::{abelian_invariants, as_reduce, AbelianASSpec};
use crate::error::{Error, Result};
use crate::families::{parametrize_conic, Family, FamilySpec};
use crate::gf::{FieldCtx, FieldElem, MAX_FIELD_SIZE};
use crate::poly::Poly;
use crate::ratfun::{Place, RatFun};

/// Relative tolerance on `|alpha| = sqrt(base)` for the roots of `L`.
pub const ROOT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountSeries {
    pub family: String,
    pub q: u64,
    /// Size of the constant field the counts refer to.
    pub base: u64,
    /// `(m, N_m)`: rational places over `F_{base^m}`.
    pub counts: Vec<(u32, u64)>,
}

impl CountSeries {
    pub fn get(&self, m: u32) -> Option<u64> {
        self.counts.iter().find(|&&(k, _)| k == m).map(|&(_, n)| n)
    }
}

/// Integer coefficients of `L(T)`, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPoly {
    pub base: u64,
    pub coeffs: Vec<i64>,
}

impl LPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Least `d` with every layer coefficient in `F_{q^d}`.
pub fn definition_degree(spec: &AbelianASSpec<'_>) -> u32 {
    let ctx = spec.ctx;
    let coeffs: Vec<FieldElem> = spec
        .f
        .iter()
        .flat_map(|f| f.num().coeffs().iter().chain(f.den().coeffs()).copied().collect::<Vec<_>>())
        .collect();
    let top = ctx.k() / spec.n;
    (1..=top)
        .filter(|d| top.is_multiple_of(*d))
        .find(|&d| coeffs.iter().all(|&c| ctx.in_subfield(c, spec.n * d)))
        .unwrap_or(top)
}

/// The model used for counting. The Singer families are rebuilt from an
/// `F_q`-rational parametrization of their conic; the catalog's form needs
/// `sqrt(eps)` and would only count over even extensions.
pub fn zeta_model<'a>(fs: &FamilySpec<'a>) -> Result<AbelianASSpec<'a>> {
    match (fs.family, fs.conic) {
        (Family::Singer | Family::SingerEven, Some(cn)) => {
            let (u, v) = parametrize_conic(fs.ctx(), &cn)?;
            let spec = AbelianASSpec::new(fs.ctx(), fs.n, vec![u, v], fs.spec.eta)?
                .with_tag(fs.family.name());
            if definition_degree(&spec) != 1 {
                return Err(Error::Consistency(
                    "Singer conic parametrization is not defined over F_q".into(),
                ));
            }
            Ok(spec)
        }
        _ => Ok(fs.spec.clone()),
    }
}

/// Layers transported into a counting field.
pub struct CountModel<'c> {
    pub ctx: &'c FieldCtx,
    pub q: u64,
    pub n: u32,
    pub f: Vec<RatFun<'c>>,
}

/// `F_{base^m}` for a spec defined over `F_{q^d}`.
pub fn count_field(spec: &AbelianASSpec<'_>, m: u32) -> Result<FieldCtx> {
    let deg = spec.n * definition_degree(spec) * m;
    let p = spec.ctx.p() as u64;
    if (deg as f64) * (p as f64).log2() > (MAX_FIELD_SIZE as f64).log2() + 1e-9 {
        return Err(Error::InsufficientField {
            needed_degree: deg,
        });
    }
    FieldCtx::build_ambient(spec.ctx.p(), &[deg])
}

fn map_ratfun<'c>(f: &RatFun<'_>, target: &'c FieldCtx, map: &dyn Fn(FieldElem) -> FieldElem) -> RatFun<'c> {
    let tr = |p: &Poly<'_>| Poly::new(target, p.coeffs().iter().map(|&c| map(c)).collect());
    RatFun::new(tr(f.num()), tr(f.den()))
}

impl<'c> CountModel<'c> {
    /// Moves the layers of `spec` into `target` through the field of
    /// definition. Any embedding gives a Galois conjugate model with the
    /// same counts.
    pub fn transport(spec: &AbelianASSpec<'_>, target: &'c FieldCtx) -> Result<Self> {
        let src = spec.ctx;
        let d = definition_degree(spec);
        let def = FieldCtx::build_ambient(src.p(), &[spec.n * d])?;
        let into_src = def.embed_into(src)?;
        let into_target = def.embed_into(target)?;
        let back: HashMap<u32, FieldElem> = def
            .elements()
            .map(|e| (src.code(into_src.map(e)), e))
            .collect();
        let map = |c: FieldElem| into_target.map(back[&src.code(c)]);
        Ok(CountModel {
            ctx: target,
            q: spec.q(),
            n: spec.n,
            f: spec.f.iter().map(|f| map_ratfun(f, target, &map)).collect(),
        })
    }

    fn is_pole(&self, x0: FieldElem) -> bool {
        self.f.iter().any(|f| f.den().eval(x0).is_zero())
    }

    /// Rational places over `x = x0` for a non-pole `x0`.
    fn unramified_contribution(&self, x0: FieldElem) -> u64 {
        let ctx = self.ctx;
        let split = self.f.iter().all(|f| {
            let v = f.eval_at(x0).expect("x0 is not a pole");
            ctx.rel_trace(v, ctx.k(), self.n).expect("valid degrees").is_zero()
        });
        if split {
            self.q.pow(self.f.len() as u32)
        } else {
            0
        }
    }

    /// Rational places above a place where some layer may have a pole.
    pub fn boundary_contribution(&self, place: Place) -> u64 {
        let ctx = self.ctx;
        let fq: Vec<FieldElem> = ctx.subfield_elements(self.n).expect("F_q inside");
        let r = self.f.len();
        let total = fq.len().pow(r as u32);
        let (mut unram, mut split) = (0u64, 0u64);
        for idx in 0..total {
            let mut g = RatFun::zero(ctx);
            let mut rest = idx;
            for f in &self.f {
                let c = fq[rest % fq.len()];
                rest /= fq.len();
                if !c.is_zero() {
                    g = &g + &f.scale(c);
                }
            }
            let red = as_reduce(&g, place);
            if red.m == 0 {
                unram += 1;
                if ctx.rel_trace(red.constant, ctx.k(), 1).expect("valid").is_zero() {
                    split += 1;
                }
            }
        }
        if split == unram {
            split
        } else {
            0
        }
    }

    fn affine_points(&self) -> Vec<FieldElem> {
        self.ctx.elements().filter(|&x0| !self.is_pole(x0)).collect()
    }

    /// `#{(x0, y) in F_Q^(1+r)}` on the affine part over non-poles.
    pub fn affine_count(&self) -> u64 {
        self.affine_points()
            .par_chunks(1024)
            .map(|c| c.iter().map(|&x0| self.unramified_contribution(x0)).sum::<u64>())
            .sum()
    }

    pub fn affine_count_serial(&self) -> u64 {
        self.affine_points()
            .iter()
            .map(|&x0| self.unramified_contribution(x0))
            .sum()
    }

    /// Rational places over `F_Q`.
    pub fn place_count(&self) -> u64 {
        let poles = self
            .ctx
            .elements()
            .filter(|&x0| self.is_pole(x0))
            .map(Place::Finite)
            .chain([Place::Infinity]);
        self.affine_count() + poles.map(|pl| self.boundary_contribution(pl)).sum::<u64>()
    }
}

/// Affine count over `F_{base^m}`.
pub fn affine_count(spec: &AbelianASSpec<'_>, m: u32) -> Result<u64> {
    let ctx = count_field(spec, m)?;
    Ok(CountModel::transport(spec, &ctx)?.affine_count())
}

/// Rational places over `F_{base^m}`.
pub fn place_count(spec: &AbelianASSpec<'_>, m: u32) -> Result<u64> {
    let ctx = count_field(spec, m)?;
    Ok(CountModel::transport(spec, &ctx)?.place_count())
}

/// Field size the counts of `spec` refer to.
pub fn count_base(spec: &AbelianASSpec<'_>) -> u64 {
    spec.q().pow(definition_degree(spec))
}

pub fn count_series(spec: &AbelianASSpec<'_>, max_m: u32) -> Result<CountSeries> {
    let counts = (1..=max_m)
        .map(|m| Ok((m, place_count(spec, m)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CountSeries {
        family: spec.tag.clone().unwrap_or_default(),
        q: spec.q(),
        base: count_base(spec),
        counts,
    })
}

/// Largest `m` whose counting field fits the field-size cap.
pub fn max_countable_m(spec: &AbelianASSpec<'_>) -> u32 {
    let per = spec.n * definition_degree(spec);
    let p = spec.ctx.p();
    (1..)
        .take_while(|&m| (p as u64).pow(per * m) <= MAX_FIELD_SIZE)
        .last()
        .unwrap_or(0)
}

/// Solves for `L(T)` of degree `2g` from `N_1..N_g` by Newton's identities
/// and the functional equation. Counts beyond `g` are checked against the
/// result.
pub fn lpoly_from_counts(series: &CountSeries, g: u32) -> Result<LPoly> {
    let q = series.base as i128;
    let g = g as usize;
    let s: Vec<i128> = (1..=g.max(series.counts.len()))
        .map(|m| {
            series
                .get(m as u32)
                .map(|n| q.pow(m as u32) + 1 - n as i128)
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Usage(format!("counts must cover m = 1..{g}")))?;
    let mut a = vec![0i128; 2 * g + 1];
    a[0] = 1;
    for k in 1..=g {
        let acc: i128 = (1..=k).map(|j| s[j - 1] * a[k - j]).sum();
        if acc % k as i128 != 0 {
            return Err(Error::Oracle(format!(
                "non-integral L coefficient at T^{k}: counts inconsistent with genus {g}"
            )));
        }
        a[k] = -acc / k as i128;
    }
    for k in g + 1..=2 * g {
        a[k] = q.pow((k - g) as u32) * a[2 * g - k];
    }
    // Extra counts must match the power sums of the completed polynomial.
    let mut full_s = Vec::new();
    for m in 1..=s.len() {
        let mut acc: i128 = if m <= 2 * g { -(m as i128) * a[m] } else { 0 };
        for j in 1..m {
            if m - j <= 2 * g {
                acc -= full_s[j - 1] * a[m - j];
            }
        }
        full_s.push(acc);
        if acc != s[m - 1] {
            return Err(Error::Oracle(format!(
                "N_{m} disagrees with the degree-{} L-polynomial",
                2 * g
            )));
        }
    }
    let coeffs: Vec<i64> = a
        .iter()
        .map(|&c| i64::try_from(c).map_err(|_| Error::Oracle("coefficient overflow".into())))
        .collect::<Result<_>>()?;
    let l = LPoly {
        base: series.base,
        coeffs,
    };
    check_roots(&l)?;
    Ok(l)
}

/// Roots of `T^{2g} L(1/T)` all have absolute value `sqrt(base)`.
pub fn check_roots(l: &LPoly) -> Result<()> {
    let deg = l.degree();
    if deg == 0 {
        return Ok(());
    }
    let rev: Vec<i64> = l.coeffs.iter().rev().copied().collect();
    let poly: Vec<Complex64> = squarefree_part(&rev)
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    let roots = durand_kerner(&poly)?;
    let target = (l.base as f64).sqrt();
    for z in roots {
        if ((z.norm() - target) / target).abs() > ROOT_TOLERANCE {
            return Err(Error::Oracle(format!(
                "root of absolute value {:.9} off the circle of radius {target:.9}",
                z.norm()
            )));
        }
    }
    Ok(())
}

type QPoly = Vec<BigRational>;

fn trim(a: &mut QPoly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

/// `(quotient, remainder)` of `a / b`, constant term first.
fn qdivrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut quo = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / b.last().unwrap();
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        quo[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (quo, r)
}

/// `P / gcd(P, P')` with exact rational arithmetic, as floats.
fn squarefree_part(c: &[i64]) -> Vec<f64> {
    let p: QPoly = c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
    let dp: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| a * BigRational::from_integer(BigInt::from(i)))
        .collect();
    let (mut a, mut b) = (p.clone(), dp);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = qdivrem(&a, &b);
        a = b;
        b = r;
    }
    let (sf, _) = qdivrem(&p, &a);
    let lead = sf.last().unwrap().clone();
    sf.iter().map(|x| (x / &lead).to_f64().unwrap_or(f64::NAN)).collect()
}

/// Durand-Kerner iteration; coefficients constant term first.
fn durand_kerner(coeffs_low_first: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs_low_first.len() - 1;
    let lead = coeffs_low_first[deg];
    let c: Vec<Complex64> = coeffs_low_first.iter().map(|&a| a / lead).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let radius = 1.0 + c[..deg].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| seed.powu(k as u32) * radius.powf(0.5))
        .collect();
    for _ in 0..5000 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1.0));
        }
        if delta < 1e-14 {
            return Ok(z);
        }
    }
    // Repeated roots converge slowly; accept once the residuals are small.
    let scale = radius.powi(deg as i32);
    if z.iter().all(|&r| eval(r).norm() <= 1e-6 * scale) {
        Ok(z)
    } else {
        Err(Error::Oracle("root iteration did not converge".into()))
    }
}

/// `(genus, p_rank)`: half the degree, and the degree of `L mod p`.
pub fn invariants_from_lpoly(l: &LPoly, p: u32) -> Result<(u64, u64)> {
    let deg = l.degree();
    if !deg.is_multiple_of(2) || l.coeffs.first() != Some(&1) {
        return Err(Error::Usage("malformed L-polynomial".into()));
    }
    let p = p as i64;
    let rank = l
        .coeffs
        .iter()
        .rposition(|&c| c.rem_euclid(p) != 0)
        .unwrap_or(0);
    Ok((deg as u64 / 2, rank as u64))
}

/// `|N_m - (base^m + 1)| <= 2 g base^(m/2)` for every count.
pub fn weil_bound_holds(series: &CountSeries, g: u64) -> bool {
    series.counts.iter().all(|&(m, n)| {
        let qm = (series.base as f64).powi(m as i32);
        let dev = (n as f64 - qm - 1.0).abs();
        dev <= 2.0 * g as f64 * qm.sqrt() + 1e-6 * qm.max(1.0)
    })
}

fn mobius(mut n: u32) -> i64 {
    let mut res = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            res = -res;
        }
        d += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

/// Places of exact degree `d` for `d = 1..` covered by consecutive counts;
/// `None` when some value is negative or fractional.
pub fn places_by_degree(series: &CountSeries) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    for d in 1.. {
        let Some(_) = series.get(d) else { break };
        let mut acc: i128 = 0;
        for e in (1..=d).filter(|e| d % e == 0) {
            acc += mobius(d / e) as i128 * series.get(e)? as i128;
        }
        if acc < 0 || acc % d as i128 != 0 {
            return None;
        }
        out.push((acc / d as i128) as u64);
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaReport {
    pub counts: CountSeries,
    pub l_poly: Option<LPoly>,
    /// Invariants from the invariants engine.
    pub genus: u64,
    pub p_rank: u64,
    /// Invariants read off `L`, when it could be reconstructed.
    pub oracle: Option<(u64, u64)>,
    pub weil_ok: bool,
    pub places_nonnegative: bool,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Counts up to `max_m` (default: the genus, capped by field size), then
/// reconstructs `L` when the counts reach the genus.
pub fn zeta_report(fs: &FamilySpec<'_>, max_m: Option<u32>) -> Result<ZetaReport> {
    let spec = zeta_model(fs)?;
    let inv = abelian_invariants(&spec)?;
    let cap = max_countable_m(&spec);
    let want = max_m.unwrap_or(inv.genus.max(1) as u32);
    if want > cap {
        return Err(Error::InsufficientField {
            needed_degree: spec.n * definition_degree(&spec) * want,
        });
    }
    let counts = count_series(&spec, want)?;
    let weil_ok = weil_bound_holds(&counts, inv.genus);
    let places_nonnegative = places_by_degree(&counts).is_some();
    let (l_poly, oracle, error) = if want as u64 >= inv.genus {
        match lpoly_from_counts(&counts, inv.genus as u32)
            .and_then(|l| Ok((invariants_from_lpoly(&l, fs.p)?, l)))
        {
            Ok((o, l)) => (Some(l), Some(o), None),
            Err(e) => (None, None, Some(e.to_string())),
        }
    } else {
        (None, None, None)
    };
    let agrees = error.is_none()
        && oracle.is_none_or(|o| o == (inv.genus, inv.p_rank))
        && weil_ok
        && places_nonnegative;
    Ok(ZetaReport {
        counts,
        l_poly,
        genus: inv.genus,
        p_rank: inv.p_rank,
        oracle,
        weil_ok,
        places_nonnegative,
        agrees,
        error,
    })
}
