use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skeinlab_core::poisson::{sigma_algebraic, sigma_goldman};
use skeinlab_core::skein::{mu, SkeinElement};
use skeinlab_core::surface::SurfacePattern;
use skeinlab_core::tangle::{random_word, rt_evaluate, RandomWordConfig};
use skeinlab_core::verify::{move_invariance, ribbon_axioms};
use skeinlab_core::{Backend, ObjectExpr};

fn tangles(c: &mut Criterion) {
    let mut g = c.benchmark_group("tangle");
    for b in [Backend::classical(), Backend::quantum(3).unwrap(), Backend::drinfeld(3).unwrap()] {
        let cfg = RandomWordConfig { strands: 3, slices: 6, labels: vec![1], coupons: true };
        g.bench_function(format!("eval/{}", b.kind()), |bench| {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            bench.iter_batched(|| random_word(&mut rng, &b, &cfg).unwrap(), |w| rt_evaluate(&w, &b).unwrap(), BatchSize::SmallInput)
        });
    }
    let q = Backend::quantum(3).unwrap();
    g.bench_function("ribbon-axioms/quantum", |bench| bench.iter(|| ribbon_axioms(&q)));
    g.sample_size(10);
    g.bench_function("moves/quantum/5-per-kind", |bench| bench.iter(|| move_invariance(&q, 3, 5)));
    g.finish();
}

fn torus_pair() -> (SkeinElement, SkeinElement) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = Backend::classical();
    let p = SurfacePattern::punctured_torus();
    let arg = vec![ObjectExpr::simple(1)];
    (
        SkeinElement::random(&mut rng, &c, &p, arg.clone(), &[0, 1, 2], 2).unwrap(),
        SkeinElement::random(&mut rng, &c, &p, arg, &[0, 1, 2], 2).unwrap(),
    )
}

fn products(c: &mut Criterion) {
    let (x, y) = torus_pair();
    let mut g = c.benchmark_group("skein");
    for b in [Backend::classical(), Backend::epsilon(), Backend::quantum(3).unwrap()] {
        let (xl, yl) = (x.lift(&b).unwrap(), y.lift(&b).unwrap());
        g.bench_function(format!("mu/torus/{}", b.kind()), |bench| bench.iter(|| mu(&b, &xl, &yl).unwrap()));
    }
    let eps = Backend::epsilon();
    g.bench_function("sigma/algebraic/torus", |bench| bench.iter(|| sigma_algebraic(&eps, &x, &y).unwrap()));
    g.bench_function("sigma/goldman/torus", |bench| bench.iter(|| sigma_goldman(&x, &y).unwrap()));
    g.finish();
}

criterion_group!(benches, tangles, products);
criterion_main!(benches);
