use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ascurves::asgenus::abelian_invariants;
use ascurves::families::{Family, FamilySpec};
use ascurves::nfalg::{family_closure, NfCtx};
use ascurves::zeta::{affine_count, zeta_model};
use ascurves::FieldCtx;

fn field_arith(c: &mut Criterion) {
    let ctx = FieldCtx::build_ambient(3, &[12]).unwrap();
    let elems: Vec<_> = (1..ctx.size()).map(|i| ctx.from_code(i)).collect();
    c.bench_function("field mul+add F_3^12", |b| {
        b.iter(|| {
            let mut acc = ctx.one();
            for &e in &elems[..4096] {
                acc = ctx.add(ctx.mul(acc, e), e);
            }
            black_box(acc)
        })
    });
    c.bench_function("trace F_3^12 -> F_3^2", |b| {
        b.iter(|| {
            elems[..4096]
                .iter()
                .filter(|&&e| ctx.rel_trace(e, 12, 2).unwrap().is_zero())
                .count()
        })
    });
}

fn invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("abelian_invariants");
    for (family, q) in [(Family::Zieve, 8), (Family::Singer, 9), (Family::ZieveExtended, 7)] {
        let ctx = family.field(q).unwrap();
        let fs = FamilySpec::build(&ctx, family, q).unwrap();
        g.bench_function(format!("{family} q={q}"), |b| {
            b.iter(|| abelian_invariants(black_box(&fs.spec)).unwrap())
        });
    }
    g.finish();
}

fn closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("closure");
    g.sample_size(10);
    for (family, q) in [(Family::Singer, 5), (Family::Zieve, 4)] {
        let ctx = family.field(q).unwrap();
        let fs = FamilySpec::build(&ctx, family, q).unwrap();
        let nf = NfCtx::new(&fs.spec).unwrap();
        g.bench_function(format!("{family} q={q}"), |b| {
            b.iter(|| family_closure(&fs, &nf, None).unwrap().report.order)
        });
    }
    g.finish();
}

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("affine_count");
    g.sample_size(10);
    for (family, q, m) in [(Family::Zieve, 2, 10), (Family::Singer, 3, 8)] {
        let ctx = family.field(q).unwrap();
        let fs = FamilySpec::build(&ctx, family, q).unwrap();
        let spec = zeta_model(&fs).unwrap();
        g.bench_function(format!("{family} q={q} m={m}"), |b| {
            b.iter(|| affine_count(&spec, m).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, field_arith, invariants, closure, counting);
criterion_main!(benches);
