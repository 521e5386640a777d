use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use insqec::cg::{cg, CgArgs};
use insqec::channel::{insert, InsertionEvent, InsertionQubit};
use insqec::oracle::project_total_j;
use insqec::scb::build_scb;
use insqec::states::{encode, GnuCode, LogicalQubit};
use insqec::HalfInt;

fn bench_cg(c: &mut Criterion) {
    let args = CgArgs::new(
        HalfInt::from_twice(12),
        HalfInt::from_twice(2),
        HalfInt::from_twice(1),
        HalfInt::from_twice(1),
        HalfInt::from_twice(11),
        HalfInt::from_twice(3),
    );
    c.bench_function("cg_racah_n12", |b| b.iter(|| cg(black_box(&args)).unwrap()));
}

fn bench_scb(c: &mut Criterion) {
    c.bench_function("build_scb_8", |b| b.iter(|| build_scb(black_box(8)).unwrap()));
}

fn bench_projector(c: &mut Criterion) {
    let code = GnuCode::new(3, 2, 2).unwrap();
    let state = insert(
        &encode(&code, &LogicalQubit::plus()).unwrap(),
        &InsertionQubit::uniform(),
        InsertionEvent { position: 5 },
    )
    .unwrap();
    let j = HalfInt::from_twice(13);
    c.bench_function("project_total_j_13q", |b| {
        b.iter(|| project_total_j(black_box(&state), j).unwrap())
    });
}

criterion_group!(benches, bench_cg, bench_scb, bench_projector);
criterion_main!(benches);
