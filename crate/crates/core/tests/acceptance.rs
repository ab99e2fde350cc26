//! Acceptance criteria, one line per criterion.
//!
//! Every criterion runs its full case count and prints `PASS` or `FAIL`
//! with the number of cases and defects. The test fails if any criterion does.

use std::time::Instant;

use skeinlab_core::poisson::FrDiagonal;
use skeinlab_core::surface::FusionOrder;
use skeinlab_core::verify::{self, sizes, Check};
use skeinlab_core::Backend;

const SEED: u64 = 2024;

fn native_backends() -> Vec<Backend> {
    vec![Backend::classical(), Backend::epsilon(), Backend::quantum(3).unwrap(), Backend::drinfeld(3).unwrap()]
}

fn deformed_backends() -> Vec<Backend> {
    vec![Backend::epsilon(), Backend::quantum(3).unwrap(), Backend::drinfeld(3).unwrap()]
}

fn across(backends: &[Backend], f: impl Fn(&Backend) -> Check) -> Check {
    let mut c = Check::default();
    for b in backends {
        c.absorb(f(b));
    }
    c
}

struct Criterion {
    number: usize,
    name: &'static str,
    run: Box<dyn Fn() -> Check>,
}

fn criteria() -> Vec<Criterion> {
    let q3 = || Backend::quantum(3).unwrap();
    vec![
        Criterion {
            number: 1,
            name: "move invariance, 25 words per move kind, every backend",
            run: Box::new(|| across(&native_backends(), |b| verify::move_invariance(b, SEED, sizes::MOVES_PER_KIND))),
        },
        Criterion {
            number: 2,
            name: "ribbon axioms over {1, V, V*}, pentagon and hexagons on V^4 and V^3",
            run: Box::new(|| across(&native_backends(), verify::ribbon_axioms)),
        },
        Criterion {
            number: 3,
            name: "torsion exhibit theta^2 - id = (3/2) h id",
            run: Box::new(|| across(&[Backend::quantum(3).unwrap(), Backend::drinfeld(3).unwrap()], verify::torsion)),
        },
        Criterion { number: 4, name: "t extraction on V (x) V", run: Box::new(|| across(&deformed_backends(), verify::t_extraction)) },
        Criterion {
            number: 5,
            name: "disk formula, 50 pairs",
            run: Box::new(move || verify::disk_formula(&q3(), SEED, sizes::DISK_PAIRS)),
        },
        Criterion {
            number: 6,
            name: "chord rule equals algebraic sigma, generators and 50 pairs",
            run: Box::new(move || verify::goldman_equivalence(&q3(), SEED, sizes::GOLDMAN_PAIRS)),
        },
        Criterion {
            number: 7,
            name: "symmetrization identity, 50 pairs per surface",
            run: Box::new(move || verify::symmetrization(&q3(), SEED, sizes::SYMMETRIZATION_PAIRS)),
        },
        Criterion {
            number: 8,
            name: "Leibniz rule in both slots, 50 triples",
            run: Box::new(move || verify::biderivation(&q3(), SEED, sizes::LEIBNIZ_TRIPLES)),
        },
        Criterion {
            number: 9,
            name: "fusion identity on both trees, 25 pairs per step",
            run: Box::new(move || verify::fusion_theorem(&q3(), SEED, sizes::FUSION_PAIRS, FusionOrder::V1V2)),
        },
        Criterion {
            number: 10,
            name: "ciliated-graph consistency, 25 pairs, and Jacobi on torus traces",
            run: Box::new(move || {
                let mut c = verify::fock_rosly_consistency(&q3(), SEED, sizes::FOCK_ROSLY_PAIRS, FrDiagonal::Include);
                c.absorb(verify::jacobi(&q3(), SEED));
                c
            }),
        },
        Criterion {
            number: 11,
            name: "classical limit and first-order reduction",
            run: Box::new(|| across(&deformed_backends(), |b| verify::classical_limit(b, SEED, sizes::CLASSICAL_LIMIT_PAIRS))),
        },
    ]
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let check = (c.run)();
        let status = if check.passed() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status}: {} ({} cases, {} defects, {:.1}s)",
            c.number,
            c.name,
            check.cases,
            check.defects.len(),
            start.elapsed().as_secs_f64()
        );
        for d in check.defects.iter().take(3) {
            println!("    {}: {}", d.case, d.message);
        }
        if !check.passed() {
            failed.push(c.number);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
