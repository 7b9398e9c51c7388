//! The catalog of named double and triple Artin-Schreier families, their
//! conic models and closed-form invariants.

mod conic;
mod identities;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use conic::{base_point, classify_conic, parametrize_conic, Conic, ConicClass, ConicClassification};
pub use identities::{verify_family_identities, IdentityCheck, IdentityReport, SUBFIELD_CHECK_LIMIT};

use crate::asgenus::AbelianASSpec;
use crate::error::{Error, Result};
use crate::gf::{prime_power, FieldCtx, FieldElem};
use crate::poly::Poly;
use crate::ratfun::RatFun;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    ArtinMumford,
    Singer,
    SingerEven,
    ConicMixed,
    ConicParabola,
    ConicOneNonrational,
    Zieve,
    ZieveModified,
    ZieveExtended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Any,
    Odd,
    Even,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::ArtinMumford,
        Family::Singer,
        Family::SingerEven,
        Family::ConicMixed,
        Family::ConicParabola,
        Family::ConicOneNonrational,
        Family::Zieve,
        Family::ZieveModified,
        Family::ZieveExtended,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ArtinMumford => "artin_mumford",
            Family::Singer => "singer",
            Family::SingerEven => "singer_even",
            Family::ConicMixed => "conic_mixed",
            Family::ConicParabola => "conic_parabola",
            Family::ConicOneNonrational => "conic_one_nonrational",
            Family::Zieve => "zieve",
            Family::ZieveModified => "zieve_modified",
            Family::ZieveExtended => "zieve_extended",
        }
    }

    pub fn parity(self) -> Parity {
        match self {
            Family::Singer
            | Family::ConicOneNonrational
            | Family::ZieveModified
            | Family::ZieveExtended => Parity::Odd,
            Family::SingerEven => Parity::Even,
            _ => Parity::Any,
        }
    }

    /// Number of Artin-Schreier layers.
    pub fn layers(self) -> u32 {
        if self == Family::ZieveExtended {
            3
        } else {
            2
        }
    }

    /// Whether the catalog attaches automorphism generators.
    pub fn has_generators(self) -> bool {
        !matches!(
            self,
            Family::ConicMixed | Family::ConicParabola | Family::ConicOneNonrational
        )
    }

    /// Checks `q` and returns `(p, n)`.
    pub fn check_q(self, q: u64) -> Result<(u32, u32)> {
        let (p, n) =
            prime_power(q).ok_or_else(|| Error::Usage(format!("{q} is not a prime power")))?;
        let ok = match self.parity() {
            Parity::Any => true,
            Parity::Odd => p != 2,
            Parity::Even => p == 2,
        };
        if !ok {
            return Err(Error::Usage(format!(
                "{} is not defined for q = {q}",
                self.name()
            )));
        }
        Ok((p, n))
    }

    /// The ambient field holding every constant the family needs.
    pub fn field(self, q: u64) -> Result<FieldCtx> {
        let (p, n) = self.check_q(q)?;
        FieldCtx::build_ambient(p, &[self.layers() * n])
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown family `{s}`")))
    }
}

/// Closed-form `(genus, p_rank)` of a family at `q`.
pub fn expected_invariants(family: Family, q: u64) -> (u64, u64) {
    let odd = q % 2 == 1;
    let both = |g: u64| (g, g);
    match family {
        Family::ArtinMumford => both((q - 1) * (q - 1)),
        Family::Singer | Family::SingerEven => both(q * q - 1),
        Family::ConicMixed => both(q * q - q),
        Family::ConicParabola if odd => ((q * q - q) / 2, 0),
        Family::ConicParabola => (0, 0),
        Family::ConicOneNonrational => ((q * q - 1) / 2, 0),
        Family::Zieve => both(q * q * q - q * q - q + 1),
        Family::ZieveModified => both((q - 1) * (q * q - q - 1)),
        Family::ZieveExtended => both(q * q * q * q - q * q * q - q * q + 1),
    }
}

/// A catalog entry built in a given ambient field.
#[derive(Clone, Debug)]
pub struct FamilySpec<'a> {
    pub family: Family,
    pub q: u64,
    pub p: u32,
    pub n: u32,
    pub spec: AbelianASSpec<'a>,
    /// The family's distinguished constant, when it has one.
    pub epsilon: Option<FieldElem>,
    pub sqrt_epsilon: Option<FieldElem>,
    /// Root of `X^2 + X + epsilon` (even Singer).
    pub xi: Option<FieldElem>,
    /// The conic `f(u, v) = 0` whose parametrization gives the layers.
    pub conic: Option<Conic>,
}

/// Least element of `F_{q^2}` outside `F_q`.
pub fn least_outside_base(ctx: &FieldCtx, n: u32) -> Result<FieldElem> {
    ctx.subfield_elements(2 * n)?
        .into_iter()
        .find(|&e| !ctx.in_subfield(e, n))
        .ok_or_else(|| Error::Domain("F_q^2 is not larger than F_q".into()))
}

/// `x^q - x` and friends.
fn xq<'a>(ctx: &'a FieldCtx, q: u64, sign: i64) -> RatFun<'a> {
    let mono = Poly::monomial(ctx, ctx.one(), q as usize);
    let lin = Poly::x(ctx).scale(ctx.from_int(sign));
    RatFun::from_poly(&mono + &lin)
}

pub fn build_family<'a>(ctx: &'a FieldCtx, name: &str, q: u64) -> Result<FamilySpec<'a>> {
    FamilySpec::build(ctx, name.parse()?, q)
}

impl<'a> FamilySpec<'a> {
    pub fn build(ctx: &'a FieldCtx, family: Family, q: u64) -> Result<Self> {
        let (p, n) = family.check_q(q)?;
        let r = family.layers();
        if ctx.p() != p || !ctx.k().is_multiple_of(r * n) {
            return Err(Error::Usage(format!(
                "ambient field F_{}^{} cannot hold {} at q = {q}",
                ctx.p(),
                ctx.k(),
                family.name()
            )));
        }
        let x = RatFun::x(ctx);
        let c = |v: i64| ctx.from_int(v);
        let (zero, one) = (ctx.zero(), ctx.one());
        let mut epsilon = None;
        let mut sqrt_epsilon = None;
        let mut xi = None;
        let mut conic = None;
        let f: Vec<RatFun<'a>> = match family {
            Family::ArtinMumford => {
                let cn = Conic::new([zero, zero, one, zero, zero, c(-1)], n);
                conic = Some(cn);
                let (u, v) = parametrize_conic(ctx, &cn)?;
                vec![u, v]
            }
            Family::Singer => {
                let eps = ctx.least_nonsquare(n)?;
                let s = ctx.sqrt(eps).expect("ambient field holds F_q^2");
                epsilon = Some(eps);
                sqrt_epsilon = Some(s);
                conic = Some(Conic::new([one, ctx.neg(eps), zero, zero, zero, c(-1)], n));
                let half = ctx.inv(c(2));
                let u = (&x + &x.inv()).scale(half);
                let v = (&x - &x.inv()).scale(ctx.neg(ctx.inv(ctx.mul(c(2), s))));
                vec![u, v]
            }
            Family::SingerEven => {
                let k = ctx.find_constants(&crate::gf::ConstantsRequest {
                    n,
                    trace_one: true,
                    ..Default::default()
                })?;
                let (eps, x1) = (k.epsilon.unwrap(), k.xi.unwrap());
                epsilon = Some(eps);
                xi = Some(x1);
                conic = Some(Conic::new([one, eps, one, zero, zero, one], n));
                let v = &x + &x.inv();
                let u = &x.scale(ctx.add(one, x1)) + &x.inv().scale(x1);
                vec![u, v]
            }
            Family::ConicMixed => {
                let eps = least_outside_base(ctx, n)?;
                epsilon = Some(eps);
                let cn = Conic::new([one, zero, eps, zero, zero, one], n);
                conic = Some(cn);
                let (u, v) = parametrize_conic(ctx, &cn)?;
                vec![u, v]
            }
            Family::ConicParabola => {
                // With eps in F_q the even-characteristic cover splits.
                let eps = if p == 2 { least_outside_base(ctx, n)? } else { one };
                epsilon = Some(eps);
                let cn = Conic::new([one, zero, zero, zero, ctx.neg(eps), zero], n);
                conic = Some(cn);
                let (u, v) = parametrize_conic(ctx, &cn)?;
                vec![u, v]
            }
            Family::ConicOneNonrational => {
                let eps = least_outside_base(ctx, n)?;
                epsilon = Some(eps);
                conic = Some(Conic::new(
                    [
                        ctx.mul(eps, eps),
                        one,
                        ctx.neg(ctx.mul(c(2), eps)),
                        zero,
                        c(-1),
                        zero,
                    ],
                    n,
                ));
                let x2 = x.pow(2);
                let u = (&x + &x2).scale(ctx.inv(eps));
                vec![u, x2]
            }
            Family::Zieve | Family::ZieveModified | Family::ZieveExtended => {
                let den = xq(ctx, q, -1);
                let f1 = den.inv();
                let f2 = &x.pow(q as i64 + 1) / &den;
                let f3 = &xq(ctx, q, 1) / &den;
                match family {
                    Family::Zieve => vec![f1, f2],
                    Family::ZieveModified => vec![f1, f3],
                    _ => vec![f1, f2, f3],
                }
            }
        };
        let eta = ctx.subfield_generator(n, r)?;
        let spec = AbelianASSpec::new(ctx, n, f, eta)?.with_tag(family.name());
        Ok(FamilySpec {
            family,
            q,
            p,
            n,
            spec,
            epsilon,
            sqrt_epsilon,
            xi,
            conic,
        })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.spec.ctx
    }

    pub fn expected(&self) -> (u64, u64) {
        expected_invariants(self.family, self.q)
    }

    /// Layer right-hand sides `f_1, .., f_r`.
    pub fn layers(&self) -> &[RatFun<'a>] {
        &self.spec.f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asgenus::abelian_invariants;

    #[test]
    fn names_round_trip() {
        for fam in Family::ALL {
            assert_eq!(fam.name().parse::<Family>().unwrap(), fam);
        }
        assert!(matches!("klein".parse::<Family>(), Err(Error::Usage(_))));
    }

    #[test]
    fn expected_examples() {
        assert_eq!(expected_invariants(Family::ArtinMumford, 5), (16, 16));
        assert_eq!(expected_invariants(Family::Singer, 7), (48, 48));
        assert_eq!(expected_invariants(Family::ConicOneNonrational, 5), (12, 0));
        assert_eq!(expected_invariants(Family::Zieve, 4), (45, 45));
        assert_eq!(expected_invariants(Family::ZieveModified, 3), (10, 10));
        assert_eq!(expected_invariants(Family::ZieveExtended, 3), (46, 46));
    }

    #[test]
    fn parity_is_enforced() {
        assert!(matches!(Family::Singer.field(4), Err(Error::Usage(_))));
        assert!(matches!(Family::SingerEven.field(3), Err(Error::Usage(_))));
        assert!(matches!(Family::Zieve.field(6), Err(Error::Usage(_))));
    }

    #[test]
    fn zieve_layers_at_four() {
        let ctx = Family::Zieve.field(4).unwrap();
        let fs = build_family(&ctx, "zieve", 4).unwrap();
        let den = xq(&ctx, 4, -1);
        assert_eq!(fs.layers()[0], den.inv());
        assert_eq!(fs.layers()[1], &RatFun::x(&ctx).pow(5) / &den);
    }

    #[test]
    fn conic_layers_satisfy_their_conic() {
        for fam in Family::ALL {
            for q in [2u64, 3, 4, 5] {
                let Ok(ctx) = fam.field(q) else { continue };
                let fs = FamilySpec::build(&ctx, fam, q).unwrap();
                if let Some(cn) = fs.conic {
                    let l = fs.layers();
                    assert!(cn.eval_rat(&ctx, &l[0], &l[1]).is_zero(), "{fam} q={q}");
                    let cls = classify_conic(&ctx, &cn).unwrap();
                    assert_eq!(cls.predicted, fs.expected(), "{fam} q={q}");
                }
            }
        }
    }

    #[test]
    fn small_catalog_matches_closed_forms() {
        for fam in Family::ALL {
            for q in [2u64, 3, 4] {
                let Ok(ctx) = fam.field(q) else { continue };
                let fs = FamilySpec::build(&ctx, fam, q).unwrap();
                let rep = abelian_invariants(&fs.spec).unwrap();
                assert_eq!((rep.genus, rep.p_rank), fs.expected(), "{fam} q={q}");
                assert!(rep.irreducible, "{fam} q={q}");
            }
        }
    }
}
