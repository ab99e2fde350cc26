use proptest::prelude::*;
use skeinlab_core::surface::{FusionOrder, Handle, HandleEnd, SurfacePattern};
use skeinlab_core::Error;

fn chi(p: &SurfacePattern) -> i64 {
    p.euler_characteristic()
}

#[test]
fn standard_surfaces() {
    let d2 = SurfacePattern::disk_with_two_points();
    assert_eq!((d2.vertex_count(), d2.handles().len(), chi(&d2)), (2, 1, 1));
    assert_eq!(d2.holonomy_copies(), 1);
    let a = SurfacePattern::annulus();
    assert_eq!((a.vertex_count(), chi(&a), a.holonomy_copies()), (1, 0, 1));
    let pc = SurfacePattern::pair_of_chaps();
    assert_eq!((pc.vertex_count(), chi(&pc)), (1, -1));
    assert!(!pc.handles_interleave(0, 1));
    let t = SurfacePattern::punctured_torus();
    assert_eq!((t.vertex_count(), t.handles().len(), chi(&t)), (1, 2, -1));
    assert!(t.handles_interleave(0, 1));
    assert_eq!(t.slots(0), vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
    let g2 = SurfacePattern::genus_two();
    assert_eq!((g2.handles().len(), chi(&g2)), (4, -3));
    assert!(g2.handles_interleave(2, 3) && !g2.handles_interleave(1, 2));
    assert_eq!(SurfacePattern::disk().holonomy_copies(), 0);
}

#[test]
fn fusion_concatenates_slots() {
    let u = SurfacePattern::annulus().disjoint_union(&SurfacePattern::annulus());
    let f = u.fuse(0, 1, FusionOrder::V1V2).unwrap();
    assert_eq!(f.pattern.slots(0), vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    let g = u.fuse(0, 1, FusionOrder::V2V1).unwrap();
    assert_eq!(g.pattern.slots(0), vec![(1, 0), (1, 1), (0, 0), (0, 1)]);
    assert_eq!(chi(&f.pattern), chi(&u) - 1);
    assert!(matches!(u.fuse(1, 1, FusionOrder::V1V2), Err(Error::Fusion(_))));
    assert!(matches!(u.fuse(0, 5, FusionOrder::V1V2), Err(Error::Fusion(_))));
}

#[test]
fn torus_from_steps() {
    let (t, steps) = SurfacePattern::interleaved_steps(&[0, 1, 0, 1], "torus");
    assert_eq!(t, SurfacePattern::punctured_torus());
    assert_eq!(steps.len(), 3);
    for (i, (p, v1, v2)) in steps.iter().enumerate() {
        let f = p.fuse(*v1, *v2, FusionOrder::V1V2).unwrap();
        let next = steps.get(i + 1).map_or(&t, |s| &s.0);
        assert_eq!(&f.pattern, next);
    }
}

#[test]
fn invalid_patterns_rejected() {
    let h = Handle { ends: [HandleEnd { v: 0, slot: 0 }, HandleEnd { v: 0, slot: 2 }] };
    assert!(SurfacePattern::new(1, vec![h]).is_err());
    let h = Handle { ends: [HandleEnd { v: 0, slot: 0 }, HandleEnd { v: 3, slot: 0 }] };
    assert!(SurfacePattern::new(2, vec![h]).is_err());
}

#[test]
fn json_round_trip_and_errors() {
    for p in [SurfacePattern::disk_with_two_points(), SurfacePattern::punctured_torus(), SurfacePattern::genus_two()] {
        let j = p.to_json();
        assert_eq!(SurfacePattern::from_json(&j).unwrap(), p);
    }
    let j = serde_json::json!({"vertices": 2, "marked": [0], "handles": []});
    assert!(matches!(SurfacePattern::from_json(&j), Err(Error::Parse(_))));
    let j = serde_json::json!({"vertices": 1, "handles": [{"ends": [{"v": 0, "slot": 0}]}]});
    assert!(SurfacePattern::from_json(&j).is_err());
}

#[test]
fn empty_is_neutral() {
    let t = SurfacePattern::punctured_torus();
    assert_eq!(SurfacePattern::empty().disjoint_union(&t), t);
    assert_eq!(t.disjoint_union(&SurfacePattern::empty()), t);
}

fn small_pattern() -> impl Strategy<Value = SurfacePattern> {
    prop_oneof![
        Just(SurfacePattern::disk()),
        Just(SurfacePattern::disk_with_two_points()),
        Just(SurfacePattern::annulus()),
        Just(SurfacePattern::pair_of_chaps()),
        Just(SurfacePattern::punctured_torus()),
    ]
}

proptest! {
    #[test]
    fn union_is_additive(p in small_pattern(), q in small_pattern()) {
        let u = p.disjoint_union(&q);
        prop_assert_eq!(chi(&u), chi(&p) + chi(&q));
        prop_assert_eq!(u.vertex_count(), p.vertex_count() + q.vertex_count());
        let f = u.fuse(0, p.vertex_count(), FusionOrder::V1V2).unwrap();
        prop_assert_eq!(chi(&f.pattern), chi(&p) + chi(&q) - 1);
        prop_assert_eq!(f.pattern.handles().len(), u.handles().len());
    }
}

/// Handle ends as a sorted list after renaming vertices by `perm`.
fn relabeled(p: &SurfacePattern, perm: &[usize]) -> Vec<[(usize, usize); 2]> {
    let mut hs: Vec<[(usize, usize); 2]> =
        p.handles().iter().map(|h| [(perm[h.ends[0].v], h.ends[0].slot), (perm[h.ends[1].v], h.ends[1].slot)]).collect();
    hs.sort_unstable();
    hs
}

fn isomorphic(p: &SurfacePattern, q: &SurfacePattern) -> bool {
    if p.vertex_count() != q.vertex_count() {
        return false;
    }
    let target = relabeled(q, &(0..q.vertex_count()).collect::<Vec<_>>());
    let mut perm: Vec<usize> = (0..p.vertex_count()).collect();
    any_permutation(&mut perm, 0, &|perm| relabeled(p, perm) == target)
}

fn any_permutation(perm: &mut Vec<usize>, k: usize, f: &dyn Fn(&[usize]) -> bool) -> bool {
    if k == perm.len() {
        return f(perm);
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        if any_permutation(perm, k + 1, f) {
            return true;
        }
        perm.swap(k, i);
    }
    false
}

proptest! {
    #[test]
    fn unrelated_fusions_commute(p in small_pattern(), q in small_pattern().prop_filter("two vertices", |q| q.vertex_count() > 1), r in small_pattern()) {
        // Fuse the first vertex of p with that of q, and the last vertex of q with that of r.
        let u = p.disjoint_union(&q).disjoint_union(&r);
        let (a, b) = (0, p.vertex_count());
        let (c, d) = (p.vertex_count() + q.vertex_count() - 1, p.vertex_count() + q.vertex_count());
        let first = u.fuse(a, b, FusionOrder::V1V2).unwrap();
        let one = first.pattern.fuse(first.vertex_map[c], first.vertex_map[d], FusionOrder::V1V2).unwrap();
        let second = u.fuse(c, d, FusionOrder::V1V2).unwrap();
        let two = second.pattern.fuse(second.vertex_map[a], second.vertex_map[b], FusionOrder::V1V2).unwrap();
        prop_assert!(isomorphic(&one.pattern, &two.pattern));
        prop_assert_eq!(chi(&one.pattern), chi(&u) - 2);
    }
}
