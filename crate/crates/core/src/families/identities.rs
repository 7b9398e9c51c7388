//! Explicit identities attached to the catalog, checked exactly.

use serde::Serialize;

use super::{Family, FamilySpec};
use crate::asgenus::{characters, AbelianASSpec};
use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::nfalg::generators::{cyclic_generator, singer_delta};
use crate::nfalg::{verify_single_equation, verify_subfield_identity, NFElem, NfCtx, SignVariant};
use crate::poly::Poly;
use crate::ratfun::{Place, RatFun};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub family: Family,
    pub q: u64,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

fn check(name: impl Into<String>, passed: bool) -> IdentityCheck {
    IdentityCheck {
        name: name.into(),
        passed,
        detail: None,
    }
}

/// Largest `q^r` for which every character is certified symbolically.
pub const SUBFIELD_CHECK_LIMIT: u64 = 1 << 12;

fn variant_name(v: SignVariant) -> &'static str {
    match v {
        SignVariant::Plus => "plus",
        SignVariant::Minus => "minus",
        SignVariant::Both => "both",
        SignVariant::Neither => "neither",
    }
}

/// Runs every identity that applies to `fs`.
pub fn verify_family_identities(fs: &FamilySpec<'_>) -> Result<IdentityReport> {
    let ctx = fs.ctx();
    let nf = NfCtx::new(&fs.spec)?;
    let mut checks = Vec::new();

    if nf.r() == 2 {
        let rep = verify_single_equation(&nf)?;
        let mut c = check(
            "single equation t^(q^2) - t",
            rep.variant != SignVariant::Neither && rep.generates,
        );
        c.detail = Some(format!("variant {}", variant_name(rep.variant)));
        checks.push(c);
    }
    if fs.q.pow(nf.r() as u32) <= SUBFIELD_CHECK_LIMIT {
        let chars = characters(ctx, fs.n, nf.r() as u32)?;
        let bad: Vec<String> = chars
            .iter()
            .filter(|&&mu| !verify_subfield_identity(&nf, mu).unwrap_or(false))
            .map(|&mu| ctx.fmt_elem(mu))
            .collect();
        let mut c = check(
            format!("degree-p subfield equations ({} characters)", chars.len()),
            bad.is_empty(),
        );
        if !bad.is_empty() {
            c.detail = Some(format!("failing characters: {}", bad.join(", ")));
        }
        checks.push(c);
    }
    if let Some(cn) = fs.conic {
        let l = fs.layers();
        checks.push(check("layers satisfy the conic", cn.eval_rat(ctx, &l[0], &l[1]).is_zero()));
    }

    match fs.family {
        Family::Singer => singer(fs, &nf, &mut checks)?,
        Family::SingerEven => singer_even(fs, &nf, &mut checks)?,
        Family::Zieve => {
            zieve_plane_model(fs, &mut checks)?;
            zieve_splitting(fs, &mut checks)?;
        }
        Family::ConicParabola if fs.p != 2 => parabola(fs, &nf, &mut checks)?,
        Family::ConicOneNonrational => one_nonrational(fs, &nf, &mut checks)?,
        Family::ZieveModified => {
            let (u, v) = (&fs.layers()[0], &fs.layers()[1]);
            let q = fs.q as i64;
            let uq1 = u.pow(q - 1);
            let lhs = &(&(&(&uq1 * v) - &v.pow(q)) + &uq1) + &RatFun::one(ctx);
            checks.push(check("u^(q-1) v - v^q + u^(q-1) + 1 = 0", lhs.is_zero()));
        }
        _ => {}
    }
    Ok(IdentityReport {
        family: fs.family,
        q: fs.q,
        checks,
    })
}

fn k<'a>(nf: &NfCtx<'a>, a: FieldElem) -> RatFun<'a> {
    RatFun::constant(nf.ctx, a)
}

fn nf_of<'a>(r: &RatFun<'a>) -> NFElem<'a> {
    NFElem::from_ratfun(r.clone())
}

/// `s = y - sqrt(eps) z`, `t = y + sqrt(eps) z` satisfy
/// `(s^q - t)(t^q - s) = 1`.
fn singer<'a>(fs: &FamilySpec<'a>, nf: &NfCtx<'a>, out: &mut Vec<IdentityCheck>) -> Result<()> {
    let ctx = nf.ctx;
    let se = fs.sqrt_epsilon.expect("singer carries sqrt(eps)");
    out.push(check(
        "sqrt(eps)^q + sqrt(eps) = 0",
        ctx.add(ctx.frob(se, fs.n), se).is_zero(),
    ));
    let (y, z) = (nf.y(0), nf.y(1));
    let s = &y - &z.scale(&k(nf, se));
    let t = &y + &z.scale(&k(nf, se));
    let lhs = nf.mul(&(&nf.pow_q(&s) - &t), &(&nf.pow_q(&t) - &s));
    out.push(check("(s^q - t)(t^q - s) = 1", lhs == nf.one()));

    let x = RatFun::x(ctx);
    let two = ctx.from_int(2);
    let u = (&x + &x.inv()).scale(ctx.inv(two));
    let v = (&x - &x.inv()).scale(ctx.neg(ctx.inv(ctx.mul(two, se))));
    out.push(check(
        "u = (x + 1/x)/2, v = -(x - 1/x)/(2 sqrt(eps))",
        fs.layers()[0] == u && fs.layers()[1] == v,
    ));
    let lam = cyclic_generator(ctx, fs.q + 1);
    let d = singer_delta(nf, fs, lam)?;
    out.push(check(
        "Singer map acts as x -> lambda x",
        d.x == x.scale(lam) && d.failing_layer(nf).is_none(),
    ));
    Ok(())
}

/// `s = y + xi z`, `t = y + (xi + 1) z` satisfy `(s^q + t)(t^q + s) = 1`.
fn singer_even<'a>(
    fs: &FamilySpec<'a>,
    nf: &NfCtx<'a>,
    out: &mut Vec<IdentityCheck>,
) -> Result<()> {
    let ctx = nf.ctx;
    let (eps, xi) = (fs.epsilon.unwrap(), fs.xi.unwrap());
    out.push(check(
        "xi^2 + xi = eps",
        ctx.add(ctx.mul(xi, xi), xi) == eps,
    ));
    let (y, z) = (nf.y(0), nf.y(1));
    let s = &y + &z.scale(&k(nf, xi));
    let t = &y + &z.scale(&k(nf, ctx.add(xi, ctx.one())));
    let lhs = nf.mul(&(&nf.pow_q(&s) + &t), &(&nf.pow_q(&t) + &s));
    out.push(check("(s^q + t)(t^q + s) = 1", lhs == nf.one()));
    let lam = cyclic_generator(ctx, fs.q + 1);
    let d = singer_delta(nf, fs, lam)?;
    out.push(check(
        "Singer map acts as x -> lambda x",
        d.x == RatFun::x(ctx).scale(lam) && d.failing_layer(nf).is_none(),
    ));
    Ok(())
}

/// Plane relation between `u = 1/(x^q - x)` and `v = x^(q+1)/(x^q - x)`.
fn zieve_plane_model(fs: &FamilySpec<'_>, out: &mut Vec<IdentityCheck>) -> Result<()> {
    let ctx = fs.ctx();
    let (u, v) = (&fs.layers()[0], &fs.layers()[1]);
    let q = fs.q as i64;
    let lhs = &(&u.pow(q) * v) + &(u * &v.pow(q));
    let w = u * v;
    if fs.p == 2 {
        // Tr(w) = w + w^2 + .. + w^(2^(n-1))
        let mut tr = RatFun::zero(ctx);
        let mut cur = w.clone();
        for _ in 0..fs.n {
            tr = &tr + &cur;
            cur = cur.frob();
        }
        let total = &(&lhs + &tr) + &RatFun::one(ctx);
        out.push(check("u^q v + u v^q + Tr(uv) + 1 = 0", total.is_zero()));
        return Ok(());
    }
    // Orbit representatives of {a, -a, 1/a, -1/a} on the roots of
    // T^(q+1) + 1 that are not roots of T^2 + 1.
    let minus_one = ctx.neg(ctx.one());
    let mut roots: Vec<FieldElem> = ctx
        .subfield_elements(2 * fs.n)?
        .into_iter()
        .filter(|&a| {
            ctx.pow(a, q + 1) == minus_one && ctx.mul(a, a) != minus_one
        })
        .collect();
    roots.sort_by_key(|&a| ctx.code(a));
    let mut reps = Vec::new();
    let mut used = std::collections::HashSet::new();
    for a in roots {
        if used.contains(&ctx.code(a)) {
            continue;
        }
        for b in [a, ctx.neg(a), ctx.inv(a), ctx.neg(ctx.inv(a))] {
            used.insert(ctx.code(b));
        }
        reps.push(a);
    }
    let expected_reps = if q % 4 == 1 { (q - 1) / 4 } else { (q + 1) / 4 };
    let one = RatFun::one(ctx);
    let two = ctx.from_int(2);
    // Leading constant 1 when q = 3 mod 4.
    let mut rhs = if q % 4 == 1 { &w.scale(two) + &one } else { one.clone() };
    for &a in &reps {
        let s = ctx.add(a, ctx.frob(a, fs.n));
        let factor = &(&one + &w.scale(ctx.from_int(4))) - &w.pow(2).scale(ctx.mul(s, s));
        rhs = &rhs * &factor;
    }
    let mut c = check(
        "u^q v + u v^q factors over the roots of T^(q+1) + 1",
        reps.len() as i64 == expected_reps && lhs == rhs,
    );
    c.detail = Some(format!("{} orbit representatives", reps.len()));
    out.push(c);
    Ok(())
}

/// `(x^(q+1) - l^(q+1))/(x^q - x)` is a unit at `x = l` for each nonzero
/// `l` in `F_q`.
fn zieve_splitting(fs: &FamilySpec<'_>, out: &mut Vec<IdentityCheck>) -> Result<()> {
    let ctx = fs.ctx();
    let q = fs.q as usize;
    let xq1 = Poly::monomial(ctx, ctx.one(), q + 1);
    let den = &Poly::monomial(ctx, ctx.one(), q) - &Poly::x(ctx);
    let mut failing = Vec::new();
    for l in ctx.subfield_elements(fs.n)?.into_iter().filter(|e| !e.is_zero()) {
        let num = &xq1 - &Poly::constant(ctx, ctx.pow(l, q as i64 + 1));
        let f = RatFun::new(num, den.clone());
        if f.valuation_at(Place::Finite(l)) != Some(0) {
            failing.push(ctx.fmt_elem(l));
        }
    }
    let mut c = check("splitting witness has valuation 0 at each nonzero l", failing.is_empty());
    if !failing.is_empty() {
        c.detail = Some(format!("failing at {}", failing.join(", ")));
    }
    out.push(c);
    Ok(())
}

/// Both substitutions for `u^2 = eps v`: with `eps` in `F_q`,
/// `z' = (y^2 - eps z)/2` gives `z'^q - z' = y (y^q - y)`; with
/// `eps^q = -eps`, `z' = eps z + y^2` gives `z'^q + z' = 2 y^(q+1)`, which
/// is Hermitian after `y' = xi y`, `xi^(q+1) = 2`.
fn parabola<'a>(fs: &FamilySpec<'a>, nf: &NfCtx<'a>, out: &mut Vec<IdentityCheck>) -> Result<()> {
    let ctx = nf.ctx;
    let eps = fs.epsilon.unwrap();
    let (y, z) = (nf.y(0), nf.y(1));
    if ctx.in_subfield(eps, fs.n) {
        let half = ctx.inv(ctx.from_int(2));
        let zt = (&nf.mul(&y, &y) - &z.scale(&k(nf, eps))).scale(&k(nf, half));
        let lhs = &nf.pow_q(&zt) - &zt;
        let rhs = nf.mul(&y, &(&nf.pow_q(&y) - &y));
        out.push(check("z'^q - z' = y (y^q - y)", lhs == rhs));
    }

    // The Hermitian case needs its own conic.
    let nonsq = ctx.least_nonsquare(fs.n)?;
    let e2 = ctx.sqrt(nonsq).ok_or(Error::InsufficientField { needed_degree: 2 * fs.n })?;
    let x = RatFun::x(ctx);
    let spec = AbelianASSpec::new(ctx, fs.n, vec![x.clone(), x.pow(2).scale(ctx.inv(e2))], fs.spec.eta)?;
    let hn = NfCtx::new(&spec)?;
    let (y, z) = (hn.y(0), hn.y(1));
    let zt = &z.scale(&k(&hn, e2)) + &hn.mul(&y, &y);
    let lhs = &hn.pow_q(&zt) + &zt;
    let rhs = hn.pow(&y, fs.q + 1).scale(&k(&hn, ctx.from_int(2)));
    let xi_ok = ctx
        .elements()
        .any(|xi| ctx.pow(xi, fs.q as i64 + 1) == ctx.from_int(2));
    out.push(check(
        "eps^q + eps = 0: z' = eps z + y^2 gives z'^q + z' = 2 y^(q+1)",
        ctx.add(ctx.frob(e2, fs.n), e2).is_zero() && lhs == rhs && xi_ok,
    ));
    Ok(())
}

/// `t = y - z/eps^q`, `s = u - v/eps`: `t^(q^2) - t = s^q +- s + a s^2`
/// with `a = (eps^(q-1) - 1)/eps^(q-2)`.
fn one_nonrational<'a>(
    fs: &FamilySpec<'a>,
    nf: &NfCtx<'a>,
    out: &mut Vec<IdentityCheck>,
) -> Result<()> {
    let ctx = nf.ctx;
    let eps = fs.epsilon.unwrap();
    let q = fs.q as i64;
    let epsq = ctx.frob(eps, fs.n);
    let t = &nf.y(0) - &nf.y(1).scale(&k(nf, ctx.inv(epsq)));
    let (u, v) = (&fs.layers()[0], &fs.layers()[1]);
    let s = u - &v.scale(ctx.inv(eps));
    let alpha = ctx.div(ctx.sub(ctx.pow(eps, q - 1), ctx.one()), ctx.pow(eps, q - 2));
    let lhs = &nf.pow_q(&nf.pow_q(&t)) - &t;
    let sq = s.frob_iter(fs.n);
    let tail = s.pow(2).scale(alpha);
    let plus = nf_of(&(&(&sq + &s) + &tail));
    let minus = nf_of(&(&(&sq - &s) + &tail));
    let variant = match (lhs == plus, lhs == minus) {
        (true, true) => SignVariant::Both,
        (true, false) => SignVariant::Plus,
        (false, true) => SignVariant::Minus,
        (false, false) => SignVariant::Neither,
    };
    let mut c = check("t^(q^2) - t = s^q + s + a s^2", variant != SignVariant::Neither);
    c.detail = Some(format!("variant {}", variant_name(variant)));
    out.push(c);
    Ok(())
}
