use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tderiv::codf::{from_unipoly, parse_singer, solve_singer_formal, sturm_decide};
use tderiv::coherence::{is_coherent, parse_condition, solve_condition_series, strong_coherence_probe};
use tderiv::jet::Cmp;
use tderiv::random::{self, rng};

fn bench_coherence(c: &mut Criterion) {
    let cond = random::coherent_condition(&mut rng(4), 2, 2, 2);
    c.bench_function("coherence/is_coherent", |bch| bch.iter(|| is_coherent(black_box(&cond)).unwrap()));
    let mut g = c.benchmark_group("coherence");
    g.sample_size(10);
    g.bench_function("probe to order 4", |bch| bch.iter(|| strong_coherence_probe(black_box(&cond), 4).unwrap()));
    g.finish();
    let exp = parse_condition("p = 2\nbeta [1,0] := z\nbeta [0,1] := z\ninit z[0,0] = 1\n").unwrap();
    c.bench_function("coherence/exponential to degree 8", |bch| {
        bch.iter(|| solve_condition_series(black_box(&exp), 8).unwrap())
    });
}

fn bench_singer(c: &mut Criterion) {
    let s = parse_singer("n = 1\nP = X1 - X0^3 + X0^2\na = (2, 4)").unwrap();
    c.bench_function("singer/formal solution to 12", |bch| bch.iter(|| solve_singer_formal(black_box(&s), 12).unwrap()));
}

fn bench_sturm(c: &mut Criterion) {
    let mut r = rng(5);
    let f = from_unipoly(&random::unipoly(&mut r, 6, 10), "x".to_string());
    let g = from_unipoly(&random::unipoly(&mut r, 4, 10), "x".to_string());
    let system = [(f, Cmp::Gt), (g, Cmp::Lt)];
    c.bench_function("sturm/two conditions", |bch| bch.iter(|| sturm_decide(black_box(&system)).unwrap()));
}

criterion_group!(benches, bench_coherence, bench_singer, bench_sturm);
criterion_main!(benches);
