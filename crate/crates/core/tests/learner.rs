use std::collections::BTreeSet;

use evcoref::pairlearn::{
    chain_pairs, grid_search_cv, positive_f1, train_tree, Criterion, GridSearchSpec, TreeParams,
};
use proptest::prelude::*;

fn gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

/// Exhaustive search over every (feature, midpoint) split; first strict
/// improvement wins, scanning features then thresholds in ascending order.
fn oracle_root(x: &[Vec<f64>], y: &[bool]) -> Option<(usize, f64)> {
    let pos = y.iter().filter(|&&b| b).count();
    if pos == 0 || pos == y.len() || y.len() < 2 {
        return None;
    }
    let mut best: Option<(f64, usize, f64)> = None;
    for f in 0..x[0].len() {
        let mut vals: Vec<f64> = x.iter().map(|r| r[f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (mut ln, mut lp, mut rn, mut rp) = (0, 0, 0, 0);
            for (r, &l) in x.iter().zip(y) {
                if r[f] <= t {
                    ln += 1;
                    lp += l as usize;
                } else {
                    rn += 1;
                    rp += l as usize;
                }
            }
            let imp = (ln as f64 * gini(lp, ln) + rn as f64 * gini(rp, rn)) / y.len() as f64;
            if best.is_none_or(|(b, _, _)| imp < b - 1e-12) {
                best = Some((imp, f, t));
            }
        }
    }
    best.map(|(_, f, t)| (f, t))
}

fn dataset() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<bool>)> {
    prop::collection::vec(((0u8..6, 0u8..6), any::<bool>()), 1..=12).prop_map(|rows| {
        let x = rows
            .iter()
            .map(|((a, b), _)| vec![f64::from(*a) / 5.0, f64::from(*b) / 5.0])
            .collect();
        let y = rows.iter().map(|(_, l)| *l).collect();
        (x, y)
    })
}

proptest! {
    #[test]
    fn root_split_matches_exhaustive_search((x, y) in dataset()) {
        let tree = train_tree(&x, &y, &TreeParams { max_depth: 3, ..TreeParams::default() }).unwrap();
        prop_assert_eq!(tree.root_split(), oracle_root(&x, &y));
    }

    #[test]
    fn training_ignores_example_order((x, y) in dataset(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let px: Vec<Vec<f64>> = idx.iter().map(|&i| x[i].clone()).collect();
        let py: Vec<bool> = idx.iter().map(|&i| y[i]).collect();
        let p = TreeParams { max_depth: 4, criterion: Criterion::Entropy, ..TreeParams::default() };
        prop_assert_eq!(train_tree(&x, &y, &p).unwrap(), train_tree(&px, &py, &p).unwrap());
    }

    #[test]
    fn depth_bound_holds((x, y) in dataset(), depth in 0usize..4) {
        let tree = train_tree(&x, &y, &TreeParams { max_depth: depth, ..TreeParams::default() }).unwrap();
        prop_assert!(tree.depth() <= depth);
    }

    #[test]
    fn chaining_partitions_universe(
        n in 1usize..12,
        pairs in prop::collection::vec((0usize..12, 0usize..12), 0..15),
    ) {
        let ids: Vec<String> = (0..n).map(|i| format!("m{i}")).collect();
        let pairs: Vec<(String, String)> = pairs
            .into_iter()
            .filter(|(a, b)| *a < n && *b < n)
            .map(|(a, b)| (ids[a].clone(), ids[b].clone()))
            .collect();
        let chains = chain_pairs(pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())), ids.iter().map(String::as_str));
        prop_assert_eq!(chains.mention_count(), n);
        let all: BTreeSet<&str> = chains.mentions();
        prop_assert_eq!(all.len(), n);
        for (a, b) in &pairs {
            let ca = chains.chains().iter().position(|c| c.contains(a));
            let cb = chains.chains().iter().position(|c| c.contains(b));
            prop_assert_eq!(ca, cb);
        }
    }
}

/// Replicated conjunction: a single split leaves positives mixed with an
/// equal number of negatives, two splits isolate them.
fn and_data() -> (Vec<Vec<f64>>, Vec<bool>) {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for _ in 0..100 {
        for (a, b) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
            x.push(vec![a, b]);
            y.push(a == 1.0 && b == 1.0);
        }
    }
    (x, y)
}

#[test]
fn grid_search_prefers_depth_two_on_conjunction() {
    let (x, y) = and_data();
    let spec = GridSearchSpec {
        max_depth: vec![1, 2],
        criterion: vec![Criterion::Gini],
        min_samples_leaf: vec![1],
        min_samples_split: vec![2],
        folds: 10,
        seed: 0,
    };
    let folds = spec.fold_assignment(x.len());
    let mut oracle = Vec::new();
    for p in spec.candidates() {
        let mut per_fold = Vec::new();
        for k in 0..spec.folds {
            let train: Vec<usize> = (0..x.len()).filter(|&i| folds[i] != k).collect();
            let test: Vec<usize> = (0..x.len()).filter(|&i| folds[i] == k).collect();
            let tx: Vec<Vec<f64>> = train.iter().map(|&i| x[i].clone()).collect();
            let ty: Vec<bool> = train.iter().map(|&i| y[i]).collect();
            let tree = train_tree(&tx, &ty, &p).unwrap();
            let pred: Vec<bool> = test.iter().map(|&i| tree.predict(&x[i])).collect();
            let gold: Vec<bool> = test.iter().map(|&i| y[i]).collect();
            per_fold.push(positive_f1(&gold, &pred));
        }
        oracle.push((p, per_fold));
    }
    let (d1, d2) = (&oracle[0].1, &oracle[1].1);
    assert!(d1.iter().zip(d2).all(|(a, b)| b > a), "{d1:?} {d2:?}");
    let result = grid_search_cv(&x, &y, &spec).unwrap();
    assert_eq!(result.best.max_depth, 2);
    for ((p, f), (op, of)) in result.scores.iter().zip(&oracle) {
        assert_eq!(p, op);
        assert!((f - of.iter().sum::<f64>() / of.len() as f64).abs() < 1e-12);
    }
}
