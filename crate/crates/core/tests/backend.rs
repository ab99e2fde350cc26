use skeinlab_core::backend::{flip_matrix, word_dim, Backend, BackendKind, Gen};
use skeinlab_core::scalars::{q, qi, ScalarSeries};
use skeinlab_core::{Error, Mat};

fn all_backends() -> Vec<Backend> {
    vec![
        Backend::classical(),
        Backend::epsilon(),
        Backend::quantum(3).unwrap(),
        Backend::quantum(4).unwrap(),
        Backend::drinfeld(2).unwrap(),
        Backend::drinfeld(3).unwrap(),
    ]
}

const V: Gen = Gen::V;
const VD: Gen = Gen::VD;
const ADJ: Gen = Gen { label: 2, dual: false };

fn id(b: &Backend, w: &[Gen]) -> Mat {
    Mat::identity(b.mode(), word_dim(w))
}

#[test]
fn braiding_is_a_module_map() {
    for b in all_backends() {
        for (x, y) in [(V, V), (V, VD), (VD, ADJ), (ADJ, V)] {
            let m = b.braiding_words(&[x], &[y]).unwrap();
            assert!(b.is_equivariant(&[x, y], &[y, x], &m).unwrap(), "{:?} {x} {y}", b.kind());
        }
    }
}

#[test]
fn hexagon_on_generators() {
    for b in all_backends() {
        let mode = b.mode();
        let (x, y, z) = (V, ADJ, VD);
        let lhs = b.braiding_words(&[x], &[y, z]).unwrap();
        let step1 = b.braiding_words(&[x], &[y]).unwrap().kron(&id(&b, &[z])).unwrap();
        let step2 = id(&b, &[y]).kron(&b.braiding_words(&[x], &[z]).unwrap()).unwrap();
        // (Y Z) X <- Y (Z X) <- Y (X Z) <- (Y X) Z <- (X Y) Z <- X (Y Z)
        let a1 = b.associator_words(&[x], &[y], &[z]).unwrap();
        let a2 = b.associator_words(&[y], &[x], &[z]).unwrap();
        let a3 = b.associator_words(&[y], &[z], &[x]).unwrap();
        let rhs = a3.inverse().unwrap().mul(&step2).unwrap().mul(&a2).unwrap().mul(&step1).unwrap().mul(&a1.inverse().unwrap()).unwrap();
        assert_eq!(lhs, rhs, "{:?} in {mode}", b.kind());
    }
}

#[test]
fn inverse_braiding_composes_to_identity() {
    for b in all_backends() {
        let m = b.gen_braid(V, ADJ, false).unwrap();
        let n = b.gen_braid(V, ADJ, true).unwrap();
        assert_eq!(n.mul(&m).unwrap(), id(&b, &[V, ADJ]));
    }
}

#[test]
fn twist_is_natural_and_balanced() {
    for b in all_backends() {
        for w in [vec![V], vec![V, VD], vec![ADJ, V]] {
            let th = b.twist_words(&w).unwrap();
            assert!(b.is_equivariant(&w, &w, &th).unwrap());
        }
        let (x, y) = ([V, ADJ], [VD]);
        let xy: Vec<Gen> = x.iter().chain(y.iter()).copied().collect();
        let lhs = b.twist_words(&xy).unwrap();
        let rhs = b
            .braiding_words(&y, &x)
            .unwrap()
            .mul(&b.braiding_words(&x, &y).unwrap())
            .unwrap()
            .mul(&b.twist_words(&x).unwrap().kron(&b.twist_words(&y).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs, "{:?}", b.kind());
    }
}

#[test]
fn twist_on_fundamental_is_the_expected_scalar() {
    let b = Backend::quantum(4).unwrap();
    let th = b.twist_words(&[V]).unwrap();
    let s = ScalarSeries::exp_param(b.mode(), &q(3, 4));
    assert_eq!(th, Mat::identity(b.mode(), 2).scale(&s).unwrap());
    let e = Backend::epsilon();
    let th = e.twist_words(&[V]).unwrap().get(0, 0);
    assert_eq!(th.coeff(1), q(3, 4));
}

#[test]
fn duality_maps_are_module_maps_and_satisfy_snakes() {
    for b in all_backends() {
        for g in [V, VD, ADJ, Gen::dual_of(2)] {
            let d = g.dim();
            let gd = g.dualize();
            let ev = b.ev_gen(g).unwrap();
            let coev = b.coev_gen(g).unwrap();
            assert!(b.is_equivariant(&[gd, g], &[], &ev).unwrap());
            assert!(b.is_equivariant(&[], &[g, gd], &coev).unwrap());
            let idg = Mat::identity(b.mode(), d);
            let phi = b.associator_words(&[g], &[gd], &[g]).unwrap();
            let snake = idg.kron(&ev).unwrap().mul(&phi).unwrap().mul(&coev.kron(&idg).unwrap()).unwrap();
            assert_eq!(snake, idg, "{:?} {g}", b.kind());
            let phi2 = b.associator_words(&[gd], &[g], &[gd]).unwrap();
            let snake2 = ev.kron(&idg).unwrap().mul(&phi2.inverse().unwrap()).unwrap().mul(&idg.kron(&coev).unwrap()).unwrap();
            assert_eq!(snake2, idg, "{:?} {g}", b.kind());
        }
    }
}

#[test]
fn quantum_dimension_of_fundamental() {
    let b = Backend::quantum(4).unwrap();
    let dim = b.ev_gen(VD).unwrap().mul(&b.coev_gen(V).unwrap()).unwrap().get(0, 0);
    // q + q^-1 expanded to order h^3.
    let expect = ScalarSeries::exp_param(b.mode(), &q(1, 2)).add(&ScalarSeries::exp_param(b.mode(), &q(-1, 2))).unwrap();
    assert_eq!(dim, expect);
    let c = Backend::classical();
    assert_eq!(c.ev_gen(VD).unwrap().mul(&c.coev_gen(V).unwrap()).unwrap().get(0, 0).coeff(0), qi(2));
}

#[test]
fn cg_decomposition_is_complete() {
    for b in all_backends() {
        for (a, c) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            let comps = b.cg_decompose(a, c).unwrap();
            let labels: Vec<u32> = comps.iter().map(|x| x.label).collect();
            let expect: Vec<u32> = (a.abs_diff(c)..=a + c).step_by(2).collect();
            assert_eq!(labels, expect);
            let d = (a as usize + 1) * (c as usize + 1);
            let mut sum = Mat::zeros(b.mode(), d, d);
            for comp in comps.iter() {
                let n = comp.label as usize + 1;
                assert_eq!(comp.project.mul(&comp.embed).unwrap(), Mat::identity(b.mode(), n));
                let w = [Gen::simple(a), Gen::simple(c)];
                assert!(b.is_equivariant(&[Gen::simple(comp.label)], &w, &comp.embed).unwrap());
                assert!(b.is_equivariant(&w, &[Gen::simple(comp.label)], &comp.project).unwrap());
                sum = sum.add(&comp.embed.mul(&comp.project).unwrap()).unwrap();
            }
            assert_eq!(sum, Mat::identity(b.mode(), d));
        }
    }
}

#[test]
fn hom_basis_ranks_match_multiplicities() {
    for b in all_backends() {
        assert_eq!(b.hom_basis(&[V, V], &[V, V]).unwrap().len(), 2);
        assert_eq!(b.hom_basis(&[V, V, V], &[V]).unwrap().len(), 2);
        assert_eq!(b.hom_basis(&[VD, V], &[]).unwrap().len(), 1);
        assert_eq!(b.hom_basis(&[V], &[ADJ]).unwrap().len(), 0);
        for m in b.hom_basis(&[V, ADJ], &[ADJ, V]).unwrap().iter() {
            assert!(b.is_equivariant(&[V, ADJ], &[ADJ, V], m).unwrap());
        }
    }
}

#[test]
fn braiding_square_first_order_is_t() {
    for b in [Backend::epsilon(), Backend::quantum(3).unwrap(), Backend::drinfeld(3).unwrap()] {
        for (x, y) in [(V, V), (V, ADJ), (VD, V)] {
            let sq = b.braiding_words(&[y], &[x]).unwrap().mul(&b.braiding_words(&[x], &[y]).unwrap()).unwrap();
            let t = b.t_words(&[x], &[y]).unwrap();
            assert!(sq.part0() == id(&b, &[x, y]).part0());
            assert_eq!(sq.coeff_matrix(1), t.coeff_matrix(0), "{:?}", b.kind());
        }
    }
}

#[test]
fn classical_braiding_is_the_flip() {
    let b = Backend::classical();
    assert_eq!(b.braiding_words(&[V], &[ADJ]).unwrap(), flip_matrix(b.mode(), 2, 3));
    assert_eq!(b.twist_words(&[ADJ]).unwrap(), Mat::identity(b.mode(), 3));
}

#[test]
fn drinfeld_rejects_high_orders() {
    assert_eq!(Backend::drinfeld(4).unwrap_err(), Error::TruncationUnsupported(4));
    assert!(Backend::drinfeld(3).unwrap().kind() == BackendKind::DrinfeldSl2);
    assert!(!Backend::drinfeld(3).unwrap().is_strict());
}

#[test]
fn drinfeld_associator_satisfies_pentagon_to_order() {
    let b = Backend::drinfeld(3).unwrap();
    let (x, y, z, w) = ([V], [ADJ], [VD], [V]);
    let cat = |a: &[Gen], c: &[Gen]| -> Vec<Gen> { a.iter().chain(c.iter()).copied().collect() };
    let lhs = b
        .associator_words(&x, &y, &cat(&z, &w))
        .unwrap()
        .mul(&b.associator_words(&cat(&x, &y), &z, &w).unwrap())
        .unwrap();
    let rhs = Mat::identity(b.mode(), 2)
        .kron(&b.associator_words(&y, &z, &w).unwrap())
        .unwrap()
        .mul(&b.associator_words(&x, &cat(&y, &z), &w).unwrap())
        .unwrap()
        .mul(&b.associator_words(&x, &y, &z).unwrap().kron(&Mat::identity(b.mode(), 2)).unwrap())
        .unwrap();
    assert_eq!(lhs, rhs);
}
