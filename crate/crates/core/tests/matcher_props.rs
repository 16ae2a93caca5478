//! The sweep matcher against a maximum bipartite matching oracle, plus the
//! algebraic properties of the report.

use proptest::prelude::*;
use qrs_core::eval::{grace_samples, match_beats, metrics};
use qrs_core::BeatList;

const FS: f64 = 200.0;

/// Maximum matching size by augmenting paths.
fn max_matching(a: &[usize], p: &[usize], grace: usize) -> usize {
    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                if owner[j].map_or(true, |o| augment(o, adj, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let adj: Vec<Vec<usize>> = a
        .iter()
        .map(|&x| (0..p.len()).filter(|&j| x.abs_diff(p[j]) <= grace).collect())
        .collect();
    let mut owner = vec![None; p.len()];
    (0..a.len())
        .filter(|&i| augment(i, &adj, &mut vec![false; p.len()], &mut owner))
        .count()
}

fn beats(mut v: Vec<usize>) -> BeatList {
    v.sort_unstable();
    v.dedup();
    BeatList::new(v, FS).unwrap()
}

/// Sorted events at least `gap` apart.
fn spaced(max_len: usize, gap: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..3 * gap, 0..=max_len).prop_map(move |steps| {
        let mut t = 0;
        steps
            .into_iter()
            .map(|s| {
                t += gap + 1 + s;
                t
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sweep_is_optimal_for_well_spaced_events(
        a in spaced(20, 60),
        p in spaced(20, 60),
    ) {
        // 150 ms at 200 Hz is 30 samples; both lists are spaced more than 60.
        let r = match_beats(&beats(a.clone()), &beats(p.clone()), 150.0).unwrap();
        prop_assert_eq!(r.tp, max_matching(&a, &p, 30));
    }

    #[test]
    fn sweep_never_beats_the_oracle(
        a in prop::collection::vec(0usize..400, 0..20),
        p in prop::collection::vec(0usize..400, 0..20),
    ) {
        let (a, p) = (beats(a), beats(p));
        let r = match_beats(&a, &p, 150.0).unwrap();
        prop_assert!(r.tp <= max_matching(a.indices(), p.indices(), 30));
        prop_assert_eq!(r.tp + r.fn_, a.len());
        prop_assert_eq!(r.tp + r.fp, p.len());
    }

    #[test]
    fn pairs_are_within_grace_and_increasing(
        a in prop::collection::vec(0usize..2000, 0..40),
        p in prop::collection::vec(0usize..2000, 0..40),
        grace_ms in 0.0f64..400.0,
    ) {
        let (a, p) = (beats(a), beats(p));
        let r = match_beats(&a, &p, grace_ms).unwrap();
        let g = grace_samples(grace_ms, FS);
        for w in r.pairs.windows(2) {
            prop_assert!(w[0].0 < w[1].0 && w[0].1 < w[1].1);
        }
        for &(i, j) in &r.pairs {
            prop_assert!(a.indices()[i].abs_diff(p.indices()[j]) <= g);
        }
    }

    #[test]
    fn swapping_roles_swaps_fp_and_fn(
        a in prop::collection::vec(0usize..2000, 0..40),
        p in prop::collection::vec(0usize..2000, 0..40),
    ) {
        let (a, p) = (beats(a), beats(p));
        let x = match_beats(&a, &p, 150.0).unwrap();
        let y = match_beats(&p, &a, 150.0).unwrap();
        prop_assert_eq!(x.tp, y.tp);
        prop_assert_eq!(x.fp, y.fn_);
        prop_assert_eq!(x.fn_, y.fp);
    }

    #[test]
    fn doubled_predictions_cap_ppv_at_half(a in spaced(30, 100)) {
        prop_assume!(!a.is_empty());
        let p: Vec<usize> = a.iter().flat_map(|&x| [x, x + 1]).collect();
        let r = match_beats(&beats(a.clone()), &beats(p), 150.0).unwrap();
        prop_assert!(r.ppv <= 50.0);
        prop_assert_eq!(r.tp, a.len());
    }

    #[test]
    fn wider_grace_never_loses_matches(
        a in prop::collection::vec(0usize..600, 0..25),
        p in prop::collection::vec(0usize..600, 0..25),
    ) {
        let (a, p) = (beats(a), beats(p));
        let narrow = match_beats(&a, &p, 50.0).unwrap();
        let wide = match_beats(&a, &p, 150.0).unwrap();
        prop_assert!(narrow.tp <= wide.tp, "{} > {}", narrow.tp, wide.tp);
    }

    #[test]
    fn metric_identities(tp in 0usize..10_000, fp in 0usize..10_000, fn_ in 0usize..10_000) {
        let (se, ppv, f1) = metrics(tp, fp, fn_);
        prop_assert!((0.0..=100.0).contains(&se) && (0.0..=100.0).contains(&ppv));
        prop_assert!(f1 <= se.max(ppv) + 1e-9 && f1 + 1e-9 >= se.min(ppv));
    }
}

#[test]
fn empty_predictions_against_hundred_annotations() {
    let a = BeatList::new((0..100).map(|k| 100 + 200 * k).collect(), FS).unwrap();
    let r = match_beats(&a, &BeatList::empty(FS), 150.0).unwrap();
    assert_eq!((r.tp, r.fp, r.fn_), (0, 0, 100));
    assert_eq!((r.se, r.ppv), (0.0, 100.0));
    assert_eq!(r.f1, 0.0);
}
