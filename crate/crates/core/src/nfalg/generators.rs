//! Automorphism generators attached to the catalog families.

use crate::error::{Error, Result};
use crate::families::{Family, FamilySpec};
use crate::gf::{FieldCtx, FieldElem};
use crate::ratfun::RatFun;

use super::{AutoMap, NFElem, NfCtx};

/// Translations `y_i -> y_i + c` spanning the group of constant shifts, and
/// the remaining generators.
#[derive(Clone, Debug)]
pub struct GeneratorSet<'a> {
    pub translations: Vec<AutoMap<'a>>,
    pub others: Vec<AutoMap<'a>>,
}

impl<'a> GeneratorSet<'a> {
    pub fn all(&self) -> Vec<AutoMap<'a>> {
        self.translations
            .iter()
            .chain(&self.others)
            .cloned()
            .collect()
    }
}

/// `sum_j c_j y_j + c`.
pub fn linear<'a>(nf: &NfCtx<'a>, coeffs: &[(usize, FieldElem)], c: RatFun<'a>) -> NFElem<'a> {
    coeffs.iter().fold(NFElem::from_ratfun(c), |acc, &(j, a)| {
        &acc + &nf.y(j).scale(&RatFun::constant(nf.ctx, a))
    })
}

fn k<'a>(ctx: &'a FieldCtx, a: FieldElem) -> RatFun<'a> {
    RatFun::constant(ctx, a)
}

/// `x -> a x + b`.
fn affine<'a>(ctx: &'a FieldCtx, a: FieldElem, b: FieldElem) -> RatFun<'a> {
    &RatFun::x(ctx).scale(a) + &k(ctx, b)
}

/// Generator of the multiplicative subgroup of order `d`.
pub fn cyclic_generator(ctx: &FieldCtx, d: u64) -> FieldElem {
    let order = ctx.size() as u64 - 1;
    ctx.pow(ctx.generator(), (order / d) as i64)
}

/// Basis of `F_q` over `F_p`.
pub fn additive_basis(ctx: &FieldCtx, n: u32) -> Result<Vec<FieldElem>> {
    let theta = ctx.subfield_generator(1, n)?;
    Ok((0..n).map(|j| ctx.pow(theta, j as i64)).collect())
}

pub fn translation<'a>(nf: &NfCtx<'a>, i: usize, c: FieldElem) -> AutoMap<'a> {
    let ctx = nf.ctx;
    let y = (0..nf.r())
        .map(|j| {
            if j == i {
                &nf.y(j) + &nf.constant(c)
            } else {
                nf.y(j)
            }
        })
        .collect();
    AutoMap {
        x: RatFun::x(ctx),
        y,
        label: format!("sigma{}[{}]", i + 1, ctx.fmt_elem(c)),
    }
}

/// Zieve (even q): `(x + mu, y, z + mu^2 y + nu)`.
pub fn zieve_gamma<'a>(nf: &NfCtx<'a>, mu: FieldElem, nu: FieldElem) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    let z = linear(nf, &[(1, ctx.one()), (0, ctx.mul(mu, mu))], k(ctx, nu));
    AutoMap::new(
        affine(ctx, ctx.one(), mu),
        vec![nf.y(0), z],
        &format!("gamma[{},{}]", ctx.fmt_elem(mu), ctx.fmt_elem(nu)),
    )
}

/// Zieve: `(lambda x, y / lambda, lambda z)`.
pub fn zieve_delta<'a>(nf: &NfCtx<'a>, lambda: FieldElem) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    let li = ctx.inv(lambda);
    AutoMap::new(
        affine(ctx, lambda, ctx.zero()),
        vec![
            linear(nf, &[(0, li)], RatFun::zero(ctx)),
            linear(nf, &[(1, lambda)], RatFun::zero(ctx)),
        ],
        &format!("delta[{}]", ctx.fmt_elem(lambda)),
    )
}

/// Zieve: `(1/x, z, y)`, with both signs flipped in odd characteristic.
pub fn zieve_pi<'a>(nf: &NfCtx<'a>) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    let s = ctx.neg(ctx.one());
    let s = if ctx.p() == 2 { ctx.one() } else { s };
    AutoMap::new(
        RatFun::x(ctx).inv(),
        vec![
            linear(nf, &[(1, s)], RatFun::zero(ctx)),
            linear(nf, &[(0, s)], RatFun::zero(ctx)),
        ],
        "pi",
    )
}

/// Extended Zieve: `(x + mu, y, z + mu^2 y + mu t, t + 2 mu y)`.
pub fn ext_gamma<'a>(nf: &NfCtx<'a>, mu: FieldElem) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    let one = ctx.one();
    let zero = RatFun::zero(ctx);
    AutoMap::new(
        affine(ctx, one, mu),
        vec![
            nf.y(0),
            linear(nf, &[(1, one), (0, ctx.mul(mu, mu)), (2, mu)], zero.clone()),
            linear(nf, &[(2, one), (0, ctx.mul(ctx.from_int(2), mu))], zero),
        ],
        &format!("gamma[{}]", ctx.fmt_elem(mu)),
    )
}

/// Extended Zieve: `(lambda x, y / lambda, lambda z, t)`.
pub fn ext_delta<'a>(nf: &NfCtx<'a>, lambda: FieldElem) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    let zero = RatFun::zero(ctx);
    AutoMap::new(
        affine(ctx, lambda, ctx.zero()),
        vec![
            linear(nf, &[(0, ctx.inv(lambda))], zero.clone()),
            linear(nf, &[(1, lambda)], zero),
            nf.y(2),
        ],
        &format!("delta[{}]", ctx.fmt_elem(lambda)),
    )
}

/// Extended Zieve: `(-1/x, z, y, -t)`.
pub fn ext_pi<'a>(nf: &NfCtx<'a>) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    let zero = RatFun::zero(ctx);
    AutoMap::new(
        -&RatFun::x(ctx).inv(),
        vec![
            nf.y(1),
            nf.y(0),
            linear(nf, &[(2, ctx.neg(ctx.one()))], zero),
        ],
        "pi",
    )
}

/// Modified Zieve: `(x + mu, y, z + 2 mu y)`.
pub fn modified_gamma<'a>(nf: &NfCtx<'a>, mu: FieldElem) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    AutoMap::new(
        affine(ctx, ctx.one(), mu),
        vec![
            nf.y(0),
            linear(
                nf,
                &[(1, ctx.one()), (0, ctx.mul(ctx.from_int(2), mu))],
                RatFun::zero(ctx),
            ),
        ],
        &format!("gamma[{}]", ctx.fmt_elem(mu)),
    )
}

/// Modified Zieve: `(lambda x, y / lambda, z)`.
pub fn modified_delta<'a>(nf: &NfCtx<'a>, lambda: FieldElem) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    AutoMap::new(
        affine(ctx, lambda, ctx.zero()),
        vec![
            linear(nf, &[(0, ctx.inv(lambda))], RatFun::zero(ctx)),
            nf.y(1),
        ],
        &format!("delta[{}]", ctx.fmt_elem(lambda)),
    )
}

/// Artin-Mumford: `(a x, a y, z / a)`.
pub fn am_delta<'a>(nf: &NfCtx<'a>, a: FieldElem) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    let zero = RatFun::zero(ctx);
    AutoMap::new(
        affine(ctx, a, ctx.zero()),
        vec![
            linear(nf, &[(0, a)], zero.clone()),
            linear(nf, &[(1, ctx.inv(a))], zero),
        ],
        &format!("delta[{}]", ctx.fmt_elem(a)),
    )
}

/// Artin-Mumford: `(1/x, z, y)`.
pub fn am_pi<'a>(nf: &NfCtx<'a>) -> Result<AutoMap<'a>> {
    AutoMap::new(RatFun::x(nf.ctx).inv(), vec![nf.y(1), nf.y(0)], "pi")
}

/// Singer coordinates: `(s, t) = M (y, z)`.
fn singer_matrix(fs: &FamilySpec<'_>) -> [[FieldElem; 2]; 2] {
    let ctx = fs.ctx();
    let one = ctx.one();
    match (fs.sqrt_epsilon, fs.xi) {
        (Some(se), _) => [[one, ctx.neg(se)], [one, se]],
        (None, Some(xi)) => [[one, xi], [one, ctx.add(xi, one)]],
        _ => unreachable!("singer constants are always set"),
    }
}

fn mat_mul(ctx: &FieldCtx, a: [[FieldElem; 2]; 2], b: [[FieldElem; 2]; 2]) -> [[FieldElem; 2]; 2] {
    let e = |i: usize, j: usize| ctx.add(ctx.mul(a[i][0], b[0][j]), ctx.mul(a[i][1], b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_inv(ctx: &FieldCtx, a: [[FieldElem; 2]; 2]) -> [[FieldElem; 2]; 2] {
    let det = ctx.sub(ctx.mul(a[0][0], a[1][1]), ctx.mul(a[0][1], a[1][0]));
    let d = ctx.inv(det);
    [
        [ctx.mul(a[1][1], d), ctx.neg(ctx.mul(a[0][1], d))],
        [ctx.neg(ctx.mul(a[1][0], d)), ctx.mul(a[0][0], d)],
    ]
}

/// A linear map of `(s, t)` rewritten in `(y, z)`.
fn singer_linear<'a>(
    nf: &NfCtx<'a>,
    fs: &FamilySpec<'a>,
    st: [[FieldElem; 2]; 2],
    x: RatFun<'a>,
    label: &str,
) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    let m = singer_matrix(fs);
    let a = mat_mul(ctx, mat_inv(ctx, m), mat_mul(ctx, st, m));
    let zero = RatFun::zero(ctx);
    AutoMap::new(
        x,
        vec![
            linear(nf, &[(0, a[0][0]), (1, a[0][1])], zero.clone()),
            linear(nf, &[(0, a[1][0]), (1, a[1][1])], zero),
        ],
        label,
    )
}

/// Singer: `(s, t) -> (lambda s, t / lambda)`, acting as `x -> lambda x`.
pub fn singer_delta<'a>(nf: &NfCtx<'a>, fs: &FamilySpec<'a>, lambda: FieldElem) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    let z = ctx.zero();
    singer_linear(
        nf,
        fs,
        [[lambda, z], [z, ctx.inv(lambda)]],
        affine(ctx, lambda, z),
        &format!("delta[{}]", ctx.fmt_elem(lambda)),
    )
}

/// Singer: `(s, t) -> (t, s)`, acting as `x -> 1/x`.
pub fn singer_pi<'a>(nf: &NfCtx<'a>, fs: &FamilySpec<'a>) -> Result<AutoMap<'a>> {
    let ctx = nf.ctx;
    let (z, o) = (ctx.zero(), ctx.one());
    singer_linear(nf, fs, [[z, o], [o, z]], RatFun::x(ctx).inv(), "pi")
}

/// Solution of `nu^q + nu = mu` in `F_{q^2}`.
pub fn half_trace_root(ctx: &FieldCtx, q: u64, n: u32, mu: FieldElem) -> Result<FieldElem> {
    // nu^q + nu = mu is nu^q - nu = mu in characteristic 2
    if ctx.p() != 2 {
        return Err(Error::Usage("defined for characteristic 2".into()));
    }
    ctx.as_solve(mu, q, 2 * n)?
        .ok_or_else(|| Error::Domain("nu^q + nu = mu has no solution in F_q^2".into()))
}

pub fn family_generators<'a>(fs: &FamilySpec<'a>, nf: &NfCtx<'a>) -> Result<GeneratorSet<'a>> {
    let ctx = nf.ctx;
    let (q, n) = (fs.q, fs.n);
    let basis = additive_basis(ctx, n)?;
    let translations = (0..nf.r())
        .flat_map(|i| basis.iter().map(move |&c| (i, c)))
        .map(|(i, c)| translation(nf, i, c))
        .collect();
    let lam = cyclic_generator(ctx, q - 1);
    let mut others = Vec::new();
    match fs.family {
        Family::ArtinMumford => {
            if q > 2 {
                others.push(am_delta(nf, lam)?);
            }
            others.push(am_pi(nf)?);
        }
        Family::Singer | Family::SingerEven => {
            others.push(singer_delta(nf, fs, cyclic_generator(ctx, q + 1))?);
            others.push(singer_pi(nf, fs)?);
        }
        Family::Zieve => {
            if ctx.p() == 2 {
                for &mu in &basis {
                    let nu = half_trace_root(ctx, q, n, mu)?;
                    others.push(zieve_gamma(nf, mu, nu)?);
                }
            }
            if q > 2 {
                others.push(zieve_delta(nf, lam)?);
            }
            others.push(zieve_pi(nf)?);
        }
        Family::ZieveModified => {
            for &mu in &basis {
                others.push(modified_gamma(nf, mu)?);
            }
            others.push(modified_delta(nf, lam)?);
        }
        Family::ZieveExtended => {
            for &mu in &basis {
                others.push(ext_gamma(nf, mu)?);
            }
            others.push(ext_delta(nf, lam)?);
            others.push(ext_pi(nf)?);
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no automorphism generators are catalogued for {}",
                fs.family
            )))
        }
    }
    Ok(GeneratorSet {
        translations,
        others,
    })
}
