use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skeinlab_core::holonomy::{holonomy_evaluate, HolonomyFunction};
use skeinlab_core::poisson::*;
use skeinlab_core::scalars::{q, qi};
use skeinlab_core::skein::SkeinElement;
use skeinlab_core::surface::{FusionOrder, SurfacePattern};
use skeinlab_core::{Backend, Error, Gen, ObjectExpr};

fn classical() -> Backend {
    Backend::classical()
}

fn v() -> ObjectExpr {
    ObjectExpr::simple(1)
}

fn random(rng: &mut ChaCha8Rng, p: &SurfacePattern, arg: Vec<ObjectExpr>) -> SkeinElement {
    SkeinElement::random(rng, &classical(), p, arg, &[0, 1, 2], 2).unwrap()
}

fn trace_a_b_ab() -> (SkeinElement, SkeinElement, SkeinElement) {
    let p = SurfacePattern::punctured_torus();
    let c = classical();
    (
        SkeinElement::handle_trace(&c, &p, 0, 1).unwrap(),
        SkeinElement::handle_trace(&c, &p, 1, 1).unwrap(),
        SkeinElement::product_trace(&c, &p, 0, 1, 1).unwrap(),
    )
}

#[test]
fn extracted_t_matches_stored_tensor() {
    let w = [Gen::simple(1)];
    for b in [Backend::epsilon(), Backend::quantum(3).unwrap(), Backend::drinfeld(2).unwrap()] {
        let t = extract_t(&b, &v(), &v()).unwrap();
        assert_eq!(t.mat, classical().t_words(&w, &w).unwrap());
        let zero = extract_t(&b, &ObjectExpr::Unit, &v()).unwrap();
        assert!(zero.mat.is_zero());
    }
    assert!(matches!(extract_t(&classical(), &v(), &v()), Err(Error::Mode(_))));
}

#[test]
fn sigma_needs_deformation() {
    let (a, b, _) = trace_a_b_ab();
    assert!(matches!(sigma_algebraic(&classical(), &a, &b), Err(Error::Mode(_))));
}

#[test]
fn disk_formula_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let d2 = SurfacePattern::disk_with_two_points();
    let eps = Backend::epsilon();
    let mut nonzero = 0;
    for _ in 0..10 {
        let c = classical();
        let a = SkeinElement::random(&mut rng, &c, &d2, vec![v(), v()], &[1], 1).unwrap();
        let v2 = ObjectExpr::simple(2);
        let b = SkeinElement::random(&mut rng, &c, &d2, vec![v2.clone(), v2], &[2], 1).unwrap();
        assert!(disk_formula_defect(&eps, &a, &b).unwrap().is_zero());
        nonzero += usize::from(!sigma_algebraic(&eps, &a, &b).unwrap().is_zero());
    }
    assert!(nonzero > 5);
}

#[test]
fn torus_generators() {
    let eps = Backend::epsilon();
    let (a, b, ab) = trace_a_b_ab();
    // sigma(tr a, tr b) = tr(a) tr(b) / 2 - tr(ab)
    let s = sigma_algebraic(&eps, &a, &b).unwrap();
    let ha = holonomy_evaluate(&a).unwrap().remove(0);
    let hb = holonomy_evaluate(&b).unwrap().remove(0);
    let hab = holonomy_evaluate(&ab).unwrap().remove(0);
    let expect = ha.mul(&hb).unwrap().scale(&q(1, 2)).sub(&hab).unwrap();
    assert_eq!(holonomy_evaluate(&s).unwrap(), vec![expect]);
    assert!(sigma_goldman(&a, &b).unwrap().equal(&s));
    // Parallel loops on the annulus do not interact.
    let an = SurfacePattern::annulus();
    let t = SkeinElement::handle_trace(&classical(), &an, 0, 1).unwrap();
    assert!(sigma_algebraic(&eps, &t, &t).unwrap().is_zero());
    assert!(sigma_goldman(&t, &t).unwrap().is_zero());
}

#[test]
fn goldman_matches_algebraic() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let eps = Backend::epsilon();
    for p in [SurfacePattern::annulus(), SurfacePattern::punctured_torus(), SurfacePattern::pair_of_chaps()] {
        for _ in 0..4 {
            let a = random(&mut rng, &p, vec![v()]);
            let b = random(&mut rng, &p, vec![ObjectExpr::simple(2)]);
            assert!(sigma_goldman(&a, &b).unwrap().equal(&sigma_algebraic(&eps, &a, &b).unwrap()));
        }
    }
}

#[test]
fn dual_label_flips_chord_sign() {
    let c = classical();
    let (g, d) = (Gen::simple(1), Gen::dual_of(1));
    let t = c.t_words(&[g], &[g]).unwrap();
    let td = c.t_words(&[d], &[g]).unwrap();
    // On the dual leg every generator acts by minus its transpose.
    let tt = skeinlab_core::Mat::identity(skeinlab_core::RingMode::Classical, 4);
    let partial = {
        let mut m = skeinlab_core::Mat::zeros(skeinlab_core::RingMode::Classical, 4, 4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let x = t.get(i * 2 + j, k * 2 + l);
                        if !x.is_zero() {
                            m.set(k * 2 + j, i * 2 + l, &x.neg());
                        }
                    }
                }
            }
        }
        m
    };
    assert_eq!(td, partial);
    assert!(!tt.is_zero());
}

#[test]
fn quantum_and_epsilon_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let eps = Backend::epsilon();
    let qb = Backend::quantum(3).unwrap();
    let dr = Backend::drinfeld(2).unwrap();
    let p = SurfacePattern::punctured_torus();
    for _ in 0..3 {
        let a = random(&mut rng, &p, vec![v()]);
        let b = random(&mut rng, &p, vec![v()]);
        let s = sigma_algebraic(&eps, &a, &b).unwrap();
        assert!(sigma_algebraic(&qb, &a, &b).unwrap().equal(&s));
        assert!(sigma_algebraic(&dr, &a, &b).unwrap().equal(&s));
    }
}

#[test]
fn symmetrization_and_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let eps = Backend::epsilon();
    for p in [SurfacePattern::disk_with_two_points(), SurfacePattern::annulus(), SurfacePattern::punctured_torus()] {
        let k = p.vertex_count();
        for _ in 0..3 {
            let a = random(&mut rng, &p, vec![v(); k]);
            let b = random(&mut rng, &p, vec![v(); k]);
            let c = random(&mut rng, &p, vec![ObjectExpr::Unit; k]);
            assert!(symmetrization_check(&eps, &a, &b).unwrap(), "{}", p.history());
            assert!(biderivation_check(&eps, &a, &b, &c).unwrap());
        }
    }
    let (a, b, _) = trace_a_b_ab();
    let one = SkeinElement::unit(a.pattern(), a.mode()).unwrap();
    assert!(sigma_algebraic(&eps, &one, &b).unwrap().is_zero());
    assert!(biderivation_check(&eps, &one, &a, &b).unwrap());
}

#[test]
fn fusion_rule_on_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let eps = Backend::epsilon();
    let d2 = SurfacePattern::disk_with_two_points();
    for order in [FusionOrder::V1V2, FusionOrder::V2V1] {
        for _ in 0..2 {
            let a = random(&mut rng, &d2, vec![v(), v()]);
            let b = random(&mut rng, &d2, vec![v(), v()]);
            let (ok, _) = check_fusion(&eps, &a, &b, 0, 1, order).unwrap();
            assert!(ok);
        }
        let (_, steps) = SurfacePattern::interleaved_steps(&[0, 1, 0, 1], "torus");
        for (p, v1, v2) in steps {
            let args: Vec<ObjectExpr> = (0..p.vertex_count()).map(|i| if i == v1 || i == v2 { v() } else { ObjectExpr::Unit }).collect();
            let a = random(&mut rng, &p, args.clone());
            let b = random(&mut rng, &p, args);
            assert!(check_fusion(&eps, &a, &b, v1, v2, order).unwrap().0);
        }
    }
}

#[test]
fn fock_rosly_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let eps = Backend::epsilon();
    for p in [SurfacePattern::disk_with_two_points(), SurfacePattern::annulus(), SurfacePattern::punctured_torus()] {
        let k = p.vertex_count();
        let a = random(&mut rng, &p, vec![v(); k]);
        let b = random(&mut rng, &p, vec![v(); k]);
        let expect = fock_rosly_expected(&eps, &a, &b).unwrap();
        assert!(fock_rosly_sigma(&a, &b, FrDiagonal::Include).unwrap().equal(&expect));
    }
    // Dropping the diagonal breaks the identity for elements with a shared band.
    let (a, b, _) = trace_a_b_ab();
    let t = SkeinElement::handle_trace(&classical(), a.pattern(), 0, 2).unwrap();
    let expect = fock_rosly_expected(&eps, &t, &a).unwrap();
    assert!(!fock_rosly_sigma(&t, &a, FrDiagonal::Exclude).unwrap().equal(&expect));
    let _ = b;
}

#[test]
fn jacobi_on_torus_traces() {
    let eps = Backend::epsilon();
    let (a, b, ab) = trace_a_b_ab();
    let j = jacobi_defect(&eps, &a, &b, &ab).unwrap();
    assert!(j.is_zero());
    assert_eq!(holonomy_evaluate(&j).unwrap(), vec![HolonomyFunction::zero(2)]);
    let br = bracket(&eps, &a, &b).unwrap();
    let rev = bracket(&eps, &b, &a).unwrap();
    assert!(br.add(&rev).unwrap().is_zero());
    let h = holonomy_evaluate(&br).unwrap().remove(0);
    let ha = holonomy_evaluate(&a).unwrap().remove(0);
    let hb = holonomy_evaluate(&b).unwrap().remove(0);
    let hab = holonomy_evaluate(&ab).unwrap().remove(0);
    assert_eq!(h, ha.mul(&hb).unwrap().sub(&hab.scale(&qi(2))).unwrap());
}
