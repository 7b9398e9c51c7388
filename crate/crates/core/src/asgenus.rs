//! Genus and p-rank of elementary abelian Artin-Schreier extensions of `K(x)`
//! through their degree-p subextensions.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::ratfun::{uniformizer, Place, RatFun};

/// The extension `K(x, y_1, .., y_r)` with `y_i^q - y_i = f_i(x)`, `q = p^n`.
#[derive(Clone, Debug)]
pub struct AbelianASSpec<'a> {
    pub ctx: &'a FieldCtx,
    pub p: u32,
    pub n: u32,
    pub f: Vec<RatFun<'a>>,
    /// Generator of `F_{q^r}` over `F_q`.
    pub eta: FieldElem,
    pub tag: Option<String>,
}

impl<'a> AbelianASSpec<'a> {
    pub fn new(ctx: &'a FieldCtx, n: u32, f: Vec<RatFun<'a>>, eta: FieldElem) -> Result<Self> {
        let r = f.len() as u32;
        if r == 0 {
            return Err(Error::Usage("at least one layer is required".into()));
        }
        if f.iter().any(|g| g.is_zero()) {
            return Err(Error::Usage("layer right-hand sides must be nonzero".into()));
        }
        if !ctx.in_subfield(eta, n * r)
            || (1..r).any(|d| r.is_multiple_of(d) && ctx.in_subfield(eta, n * d))
        {
            return Err(Error::Usage(format!(
                "eta does not generate F_q^{r} over F_q"
            )));
        }
        Ok(AbelianASSpec {
            ctx,
            p: ctx.p(),
            n,
            f,
            eta,
            tag: None,
        })
    }

    pub fn with_tag(mut self, tag: &str) -> Self {
        self.tag = Some(tag.to_string());
        self
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.n)
    }

    pub fn r(&self) -> u32 {
        self.f.len() as u32
    }

    /// Finite poles of all layers, plus infinity, in a fixed order.
    pub fn candidate_places(&self) -> Result<Vec<Place>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in &self.f {
            for (a, _) in g.den().roots()? {
                if seen.insert(a) {
                    out.push(Place::Finite(a));
                }
            }
        }
        out.sort_by_key(|pl| match pl {
            Place::Finite(a) => self.ctx.code(*a),
            Place::Infinity => u32::MAX,
        });
        out.push(Place::Infinity);
        Ok(out)
    }
}

/// Result of reducing `f` at one place modulo `h^p - h`.
#[derive(Clone, Debug)]
pub struct Reduction<'a> {
    /// Reduced pole order, 0 when no pole remains.
    pub m: u32,
    /// `f - (shift^p - shift)` has pole order `m` at the place.
    pub shift: RatFun<'a>,
    /// Coefficient of `t^0` of the reduced function, `t` the uniformizer.
    pub constant: FieldElem,
}

/// Reduces `f` at `place`: removes p-divisible leading pole terms.
pub fn as_reduce<'a>(f: &RatFun<'a>, place: Place) -> Reduction<'a> {
    let ctx = f.ctx();
    let p = ctx.p() as i64;
    let v = f.valuation_at(place).unwrap_or(0);
    if v >= 0 {
        let constant = if v == 0 {
            f.laurent_at(place, 1).coeff(0)
        } else {
            FieldElem::ZERO
        };
        return Reduction {
            m: 0,
            shift: RatFun::zero(ctx),
            constant,
        };
    }
    let s = f.laurent_at(place, (2 * v.unsigned_abs() + 4) as usize);
    // coeffs[i] is the coefficient of t^(v + i) for v + i <= 0
    let mut polar: Vec<FieldElem> = (v..=0).map(|e| s.coeff(e)).collect();
    let at = |e: i64| (e - v) as usize;
    let t_inv = uniformizer(ctx, place).inv();
    let mut shift = RatFun::zero(ctx);
    let mut m = 0;
    for e in v..0 {
        let a = polar[at(e)];
        if a.is_zero() {
            continue;
        }
        if e % p != 0 {
            m = (-e) as u32;
            break;
        }
        let k = -e / p;
        let c = ctx.pth_root(a);
        polar[at(e)] = FieldElem::ZERO;
        polar[at(-k)] = ctx.add(polar[at(-k)], c);
        shift = &shift + &t_inv.pow(k).scale(c);
    }
    Reduction {
        m,
        shift,
        constant: polar[at(0)],
    }
}

/// Ramification data of `Y^p - Y = f` over `K(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreePReport {
    /// Reduced pole orders at the ramified places (all coprime to p).
    pub pole_orders: Vec<u32>,
    pub genus: u64,
    pub p_rank: u64,
    /// `f` is of the form `h^p - h + const`; the extension splits.
    pub is_trivial: bool,
}

pub fn degree_p_report(f: &RatFun<'_>) -> Result<DegreePReport> {
    let mut places = f.poles()?;
    if !places.contains(&Place::Infinity) {
        places.push(Place::Infinity);
    }
    Ok(degree_p_report_at(f, &places))
}

/// As `degree_p_report`, with the poles of `f` known to lie in `places`.
pub fn degree_p_report_at(f: &RatFun<'_>, places: &[Place]) -> DegreePReport {
    let p = f.ctx().p() as u64;
    let pole_orders: Vec<u32> = places
        .iter()
        .map(|&pl| as_reduce(f, pl).m)
        .filter(|&m| m > 0)
        .collect();
    if pole_orders.is_empty() {
        return DegreePReport {
            pole_orders,
            genus: 0,
            p_rank: 0,
            is_trivial: true,
        };
    }
    let total: u64 = pole_orders.iter().map(|&m| m as u64 + 1).sum();
    DegreePReport {
        genus: (p - 1) * (total - 2) / 2,
        p_rank: (pole_orders.len() as u64 - 1) * (p - 1),
        pole_orders,
        is_trivial: false,
    }
}

/// Representatives of `F_{q^r}^*` modulo `F_p^*`, least code per class.
pub fn characters(ctx: &FieldCtx, n: u32, r: u32) -> Result<Vec<FieldElem>> {
    let scalars: Vec<FieldElem> = (1..ctx.p()).map(|a| ctx.from_int(a as i64)).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for e in ctx.subfield_elements(n * r)? {
        if e.is_zero() || seen.contains(&e) {
            continue;
        }
        out.push(e);
        seen.extend(scalars.iter().map(|&a| ctx.mul(a, e)));
    }
    Ok(out)
}

/// Coefficients `c_i = Tr_{F_{q^r}/F_q}(mu * eta^(i-1))` of the degree-p
/// subextension attached to `mu`.
pub fn character_coefficients(spec: &AbelianASSpec<'_>, mu: FieldElem) -> Result<Vec<FieldElem>> {
    if mu.is_zero() {
        return Err(Error::Usage("character representative must be nonzero".into()));
    }
    let ctx = spec.ctx;
    let (n, r) = (spec.n, spec.r());
    let mut c = Vec::with_capacity(r as usize);
    let mut e = mu;
    for _ in 0..r {
        c.push(ctx.rel_trace(e, n * r, n)?);
        e = ctx.mul(e, spec.eta);
    }
    Ok(c)
}

/// Right-hand side `sum_i c_i f_i` of the degree-p subextension for `mu`.
pub fn subfield_rhs<'a>(spec: &AbelianASSpec<'a>, mu: FieldElem) -> Result<RatFun<'a>> {
    let c = character_coefficients(spec, mu)?;
    Ok(c.iter()
        .zip(&spec.f)
        .fold(RatFun::zero(spec.ctx), |acc, (&ci, fi)| &acc + &fi.scale(ci)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterReport {
    /// Code of the representative in the ambient field.
    pub mu: u32,
    pub genus: u64,
    pub p_rank: u64,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantsReport {
    pub genus: u64,
    pub p_rank: u64,
    pub ordinary: bool,
    pub irreducible: bool,
    pub characters: Vec<CharacterReport>,
}

pub fn abelian_invariants(spec: &AbelianASSpec<'_>) -> Result<InvariantsReport> {
    let reps = characters(spec.ctx, spec.n, spec.r())?;
    abelian_invariants_with(spec, &reps)
}

/// Invariants summed over the given character representatives.
pub fn abelian_invariants_with(
    spec: &AbelianASSpec<'_>,
    reps: &[FieldElem],
) -> Result<InvariantsReport> {
    let places = spec.candidate_places()?;
    let characters: Vec<CharacterReport> = reps
        .par_iter()
        .map(|&mu| {
            let g = subfield_rhs(spec, mu)?;
            let d = degree_p_report_at(&g, &places);
            Ok(CharacterReport {
                mu: spec.ctx.code(mu),
                genus: d.genus,
                p_rank: d.p_rank,
                trivial: d.is_trivial,
            })
        })
        .collect::<Result<_>>()?;
    let genus = characters.iter().map(|c| c.genus).sum();
    let p_rank = characters.iter().map(|c| c.p_rank).sum();
    let report = InvariantsReport {
        genus,
        p_rank,
        ordinary: genus == p_rank,
        irreducible: characters.iter().all(|c| !c.trivial),
        characters,
    };
    if let Some(pl) = single_common_pole(spec, &places) {
        if report.p_rank != 0 {
            return Err(Error::Consistency(format!(
                "all layers have their only pole at {pl:?} but the p-rank is {}",
                report.p_rank
            )));
        }
    }
    Ok(report)
}

/// The unique place that is a pole of every layer and of nothing else.
fn single_common_pole(spec: &AbelianASSpec<'_>, places: &[Place]) -> Option<Place> {
    let mut found = None;
    for &pl in places {
        let poles: Vec<bool> = spec
            .f
            .iter()
            .map(|g| g.valuation_at(pl).is_some_and(|v| v < 0))
            .collect();
        if poles.iter().all(|&b| b) {
            if found.is_some() {
                return None;
            }
            found = Some(pl);
        } else if poles.iter().any(|&b| b) {
            return None;
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn xq_minus_x<'a>(f: &'a FieldCtx, q: usize) -> RatFun<'a> {
        RatFun::from_poly(&Poly::monomial(f, f.one(), q) - &Poly::x(f))
    }

    #[test]
    fn reduction_examples() {
        for p in [2u32, 3, 5] {
            let f = FieldCtx::build_ambient(p, &[1]).unwrap();
            let x = RatFun::x(&f);
            let r = as_reduce(&x.pow(-(p as i64)), Place::Finite(f.zero()));
            assert_eq!(r.m, 1);
            assert_eq!(r.shift, x.inv());
            let r = as_reduce(&xq_minus_x(&f, p as usize).inv(), Place::Finite(f.zero()));
            assert_eq!(r.m, 1);
        }
        let f = FieldCtx::build_ambient(3, &[1]).unwrap();
        let r = as_reduce(&RatFun::x(&f).pow(3), Place::Infinity);
        assert_eq!(r.m, 1);
        assert_eq!(r.shift, RatFun::x(&f));
    }

    #[test]
    fn degree_p_examples() {
        let f = FieldCtx::build_ambient(3, &[1]).unwrap();
        let d = degree_p_report(&xq_minus_x(&f, 3).inv()).unwrap();
        assert_eq!((d.genus, d.p_rank, d.is_trivial), (4, 4, false));
        assert_eq!(d.pole_orders, vec![1, 1, 1]);
        let d = degree_p_report(&RatFun::x(&f).inv()).unwrap();
        assert_eq!((d.genus, d.p_rank), (0, 0));
        let d = degree_p_report(&xq_minus_x(&f, 3)).unwrap();
        assert!(d.is_trivial);
        assert_eq!((d.genus, d.p_rank), (0, 0));
    }

    #[test]
    fn character_counts() {
        let f = FieldCtx::build_ambient(2, &[4]).unwrap();
        assert_eq!(characters(&f, 2, 2).unwrap().len(), 15);
        let f = FieldCtx::build_ambient(3, &[6]).unwrap();
        assert_eq!(characters(&f, 1, 2).unwrap().len(), 4);
        assert_eq!(characters(&f, 1, 3).unwrap().len(), 13);
    }

    #[test]
    fn rhs_for_base_field_multiplier() {
        let f = FieldCtx::build_ambient(3, &[2]).unwrap();
        let eta = f.subfield_generator(1, 2).unwrap();
        let x = RatFun::x(&f);
        let spec = AbelianASSpec::new(&f, 1, vec![x.clone(), x.inv()], eta).unwrap();
        let mu = f.from_int(1);
        let c = character_coefficients(&spec, mu).unwrap();
        assert_eq!(c[0], f.from_int(2));
        assert_eq!(c[1], f.rel_trace(eta, 2, 1).unwrap());
        assert!(matches!(
            subfield_rhs(&spec, f.zero()),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn artin_mumford_small() {
        for (p, n) in [(2u32, 1u32), (3, 1), (2, 2), (5, 1)] {
            let f = FieldCtx::build_ambient(p, &[2 * n]).unwrap();
            let eta = f.subfield_generator(n, 2).unwrap();
            let x = RatFun::x(&f);
            let spec = AbelianASSpec::new(&f, n, vec![x.clone(), x.inv()], eta).unwrap();
            let rep = abelian_invariants(&spec).unwrap();
            let q = (p as u64).pow(n);
            assert_eq!((rep.genus, rep.p_rank), ((q - 1).pow(2), (q - 1).pow(2)));
            assert!(rep.ordinary && rep.irreducible);
        }
    }

    #[test]
    fn one_layer_sums_degree_p_reports() {
        let f = FieldCtx::build_ambient(3, &[1]).unwrap();
        let g = xq_minus_x(&f, 3).inv();
        let spec = AbelianASSpec::new(&f, 1, vec![g.clone()], f.one()).unwrap();
        let rep = abelian_invariants(&spec).unwrap();
        assert_eq!((rep.genus, rep.p_rank), (4, 4));
    }

    #[test]
    fn lemma_single_pole_gives_p_rank_zero() {
        let f = FieldCtx::build_ambient(3, &[2]).unwrap();
        let eta = f.subfield_generator(1, 2).unwrap();
        let x = RatFun::x(&f);
        let spec = AbelianASSpec::new(&f, 1, vec![x.clone(), x.pow(2)], eta).unwrap();
        let rep = abelian_invariants(&spec).unwrap();
        assert_eq!(rep.p_rank, 0);
        assert!(rep.genus > 0);
    }

    #[test]
    fn reducible_spec_is_flagged() {
        let f = FieldCtx::build_ambient(2, &[2]).unwrap();
        let eta = f.subfield_generator(1, 2).unwrap();
        let x = RatFun::x(&f);
        let spec = AbelianASSpec::new(&f, 1, vec![x.inv(), x.inv()], eta).unwrap();
        assert!(!abelian_invariants(&spec).unwrap().irreducible);
    }
}
