use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use hypermono::freeness::brute_force_free;
use hypermono::gallery::{make_fixture, FixtureSpec};
use hypermono::hyperbolicity::delta_estimate;
use hypermono::monoid::{cayley_ball, complete, Presentation};

fn delta(c: &mut Criterion) {
    let fx = make_fixture(&FixtureSpec::new("grid").with("n", 6)).unwrap();
    c.bench_function("delta_estimate grid(6) r=4", |b| {
        // A clone starts without the memoized distance matrix.
        b.iter_batched(|| fx.graph.clone(), |g| delta_estimate(&g, fx.root, 4, 64).unwrap(), BatchSize::SmallInput)
    });
}

fn cayley(c: &mut Criterion) {
    let p = Presentation::parse(&["a", "b"], &["ba=ab"]).unwrap();
    let rs = complete(&p, 64, 16).unwrap();
    c.bench_function("cayley_ball Z^2_+ r=10", |b| b.iter(|| cayley_ball(&rs, 10).unwrap()));
    let free = complete(&Presentation::free(&["a", "b"]).unwrap(), 64, 16).unwrap();
    c.bench_function("cayley_ball free2 r=10", |b| b.iter(|| cayley_ball(&free, 10).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let fx = make_fixture(&FixtureSpec::new("out_tree").with("depth", 8)).unwrap();
    let (ma, mb) = (fx.map("left_a"), fx.map("left_b"));
    c.bench_function("brute_force_free out_tree(2,8) L=6", |b| {
        b.iter(|| brute_force_free(&fx.graph, ma, mb, 6, &[fx.root]).unwrap())
    });
}

criterion_group!(benches, delta, cayley, oracle);
criterion_main!(benches);
