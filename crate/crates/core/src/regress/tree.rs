//! CART regression trees, bagged forests and histogram gradient boosting.
//!
//! Both the exact tree and the histogram tree reduce a node/feature pair to an
//! ordered list of value groups and share one split scan, so with one bin per
//! distinct value they pick identical splits.

use nalgebra::DMatrix;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{RegressorSpec, DEFAULT_MAX_BINS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    /// Candidate features drawn per split; `None` means all.
    pub feature_subsample: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_split: 2,
            min_samples_leaf: 1,
            feature_subsample: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf {
        value: f64,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

/// Sufficient statistics for a run of rows sharing a value (or a bin).
/// `wy` and `wyy` are taken about the node mean to limit cancellation.
#[derive(Debug, Clone, Copy)]
struct Group {
    lo: f64,
    hi: f64,
    w: f64,
    wy: f64,
    wyy: f64,
    n: usize,
}

impl Group {
    fn empty() -> Self {
        Group {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
            w: 0.0,
            wy: 0.0,
            wyy: 0.0,
            n: 0,
        }
    }

    fn push(&mut self, x: f64, yc: f64, w: f64) {
        self.lo = self.lo.min(x);
        self.hi = self.hi.max(x);
        self.w += w;
        self.wy += w * yc;
        self.wyy += w * yc * yc;
        self.n += 1;
    }
}

fn sse(w: f64, wy: f64, wyy: f64) -> f64 {
    if w > 0.0 {
        (wyy - wy * wy / w).max(0.0)
    } else {
        0.0
    }
}

/// Midpoint of `a < b` that never rounds up to `b`.
fn midpoint(a: f64, b: f64) -> f64 {
    let m = a + (b - a) / 2.0;
    if m >= b {
        a
    } else {
        m
    }
}

/// Best boundary between consecutive groups: `(children sse, threshold)`.
/// Only strictly better candidates replace the incumbent, so ties keep the
/// smallest threshold.
fn best_boundary(groups: &[Group], min_leaf: usize, eps: f64) -> Option<(f64, f64)> {
    let (tw, twy, twyy, tn) = groups.iter().fold((0.0, 0.0, 0.0, 0), |a, g| {
        (a.0 + g.w, a.1 + g.wy, a.2 + g.wyy, a.3 + g.n)
    });
    let mut best: Option<(f64, f64)> = None;
    let (mut lw, mut lwy, mut lwyy, mut ln) = (0.0, 0.0, 0.0, 0usize);
    for k in 0..groups.len().saturating_sub(1) {
        let g = &groups[k];
        lw += g.w;
        lwy += g.wy;
        lwyy += g.wyy;
        ln += g.n;
        if ln < min_leaf || tn - ln < min_leaf {
            continue;
        }
        let s = sse(lw, lwy, lwyy) + sse(tw - lw, twy - lwy, twyy - lwyy);
        if best.is_none_or(|(b, _)| s < b - eps) {
            best = Some((s, midpoint(g.hi, groups[k + 1].lo)));
        }
    }
    best
}

fn leaf_value(rows: &[usize], y: &[f64], w: &[f64]) -> f64 {
    let sw: f64 = rows.iter().map(|&i| w[i]).sum();
    if sw > 0.0 {
        rows.iter().map(|&i| w[i] * y[i]).sum::<f64>() / sw
    } else {
        rows.iter().map(|&i| y[i]).sum::<f64>() / rows.len() as f64
    }
}

/// Depth-first growth with an explicit stack. `groups(rows, feature, mean)`
/// yields the ordered value groups of one feature within a node.
fn grow<G>(
    x: &DMatrix<f64>,
    y: &[f64],
    w: &[f64],
    rows: Vec<usize>,
    params: &TreeParams,
    rng: &mut ChaCha8Rng,
    groups: G,
) -> Tree
where
    G: Fn(&[usize], usize, f64) -> Vec<Group>,
{
    let p = x.ncols();
    let mut nodes = vec![Node::Leaf { value: 0.0 }];
    let mut stack = vec![(0usize, rows, 0usize)];
    while let Some((id, rows, depth)) = stack.pop() {
        let mean = leaf_value(&rows, y, w);
        nodes[id] = Node::Leaf { value: mean };
        let constant = rows.iter().all(|&i| y[i] == y[rows[0]]);
        if constant
            || rows.len() < params.min_samples_split.max(2)
            || rows.len() < 2 * params.min_samples_leaf
            || params.max_depth.is_some_and(|d| depth >= d)
        {
            continue;
        }
        let features: Vec<usize> = match params.feature_subsample {
            Some(k) if k < p => {
                let mut f = index::sample(rng, p, k).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..p).collect(),
        };
        let parent: f64 = rows.iter().map(|&i| w[i] * (y[i] - mean).powi(2)).sum();
        let eps = 1e-12 * parent.max(f64::MIN_POSITIVE);
        let mut best: Option<(f64, usize, f64)> = None;
        for &j in &features {
            if let Some((s, t)) =
                best_boundary(&groups(&rows, j, mean), params.min_samples_leaf, eps)
            {
                if best.is_none_or(|(b, _, _)| s < b - eps) {
                    best = Some((s, j, t));
                }
            }
        }
        let Some((_, feature, threshold)) = best else {
            continue;
        };
        let (l, r): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&i| x[(i, feature)] <= threshold);
        let left = nodes.len();
        nodes.push(Node::Leaf { value: 0.0 });
        nodes.push(Node::Leaf { value: 0.0 });
        nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right: left + 1,
        };
        // Right first so the left subtree is numbered before it.
        stack.push((left + 1, r, depth + 1));
        stack.push((left, l, depth + 1));
    }
    Tree { nodes }
}

fn unit_weights(w: Option<&[f64]>, n: usize) -> Vec<f64> {
    w.map(|w| w.to_vec()).unwrap_or_else(|| vec![1.0; n])
}

fn exact_groups<'a>(
    x: &'a DMatrix<f64>,
    y: &'a [f64],
    w: &'a [f64],
) -> impl Fn(&[usize], usize, f64) -> Vec<Group> + 'a {
    move |rows, j, mean| {
        let mut order = rows.to_vec();
        order.sort_by(|&a, &b| x[(a, j)].total_cmp(&x[(b, j)]));
        let mut out: Vec<Group> = Vec::new();
        for i in order {
            let v = x[(i, j)];
            match out.last_mut() {
                Some(g) if g.hi == v => g.push(v, y[i] - mean, w[i]),
                _ => {
                    let mut g = Group::empty();
                    g.push(v, y[i] - mean, w[i]);
                    out.push(g);
                }
            }
        }
        out
    }
}

impl Tree {
    /// Exact CART on all rows. `seed` only matters when
    /// `params.feature_subsample` is below the feature count.
    pub fn fit(
        x: &DMatrix<f64>,
        y: &[f64],
        w: Option<&[f64]>,
        params: &TreeParams,
        seed: u64,
    ) -> Tree {
        Self::fit_rows(
            x,
            y,
            w,
            (0..y.len()).collect(),
            params,
            &mut ChaCha8Rng::seed_from_u64(seed),
        )
    }

    /// Exact CART on a row multiset (repeats allowed, as in a bootstrap draw).
    pub fn fit_rows(
        x: &DMatrix<f64>,
        y: &[f64],
        w: Option<&[f64]>,
        rows: Vec<usize>,
        params: &TreeParams,
        rng: &mut ChaCha8Rng,
    ) -> Tree {
        let w = unit_weights(w, y.len());
        grow(x, y, &w, rows, params, rng, exact_groups(x, y, &w))
    }

    fn fit_binned(
        x: &DMatrix<f64>,
        binner: &Binner,
        codes: &[Vec<u16>],
        y: &[f64],
        w: &[f64],
        params: &TreeParams,
    ) -> Tree {
        let groups = |rows: &[usize], j: usize, mean: f64| {
            let mut hist = vec![Group::empty(); binner.n_bins(j)];
            for &i in rows {
                hist[codes[j][i] as usize].push(x[(i, j)], y[i] - mean, w[i]);
            }
            hist.into_iter().filter(|g| g.n > 0).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        grow(x, y, w, (0..y.len()).collect(), params, &mut rng, groups)
    }

    pub fn predict_row(&self, x: &DMatrix<f64>, i: usize) -> f64 {
        let mut id = 0;
        loop {
            match self.nodes[id] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    id = if x[(i, feature)] <= threshold {
                        left
                    } else {
                        right
                    }
                }
            }
        }
    }

    pub fn predict(&self, x: &DMatrix<f64>) -> Vec<f64> {
        (0..x.nrows()).map(|i| self.predict_row(x, i)).collect()
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }
}

pub(super) fn fit_forest(
    spec: &RegressorSpec,
    x: &DMatrix<f64>,
    y: &[f64],
    w: Option<&[f64]>,
) -> Vec<Tree> {
    let params = spec.tree_params(x.ncols());
    let n = y.len();
    let bootstrap = spec.bootstrap.unwrap_or(true);
    (0..spec.n_trees() as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed().wrapping_add(t));
            let rows = if bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            Tree::fit_rows(x, y, w, rows, &params, &mut rng)
        })
        .collect()
}

/// Per-feature bin edges. With at most `max_bins` distinct values every value
/// gets its own bin; otherwise distinct values are grouped into bins of
/// roughly equal row count.
#[derive(Debug, Clone, PartialEq)]
pub struct Binner {
    /// Ascending cut points; value `v` falls in bin `#{t : t < v}`.
    pub cuts: Vec<Vec<f64>>,
}

impl Binner {
    pub fn fit(x: &DMatrix<f64>, max_bins: usize) -> Self {
        let n = x.nrows();
        let cuts = (0..x.ncols())
            .map(|j| {
                let mut v: Vec<f64> = x.column(j).iter().copied().collect();
                v.sort_by(f64::total_cmp);
                let mut distinct: Vec<(f64, usize)> = Vec::new();
                for x in v {
                    match distinct.last_mut() {
                        Some((d, c)) if *d == x => *c += 1,
                        _ => distinct.push((x, 1)),
                    }
                }
                if distinct.len() <= max_bins {
                    return distinct
                        .windows(2)
                        .map(|p| midpoint(p[0].0, p[1].0))
                        .collect();
                }
                let mut cuts = Vec::with_capacity(max_bins - 1);
                let mut seen = 0usize;
                for k in 0..distinct.len() - 1 {
                    seen += distinct[k].1;
                    let bin = cuts.len() + 1;
                    if cuts.len() < max_bins - 1 && seen * max_bins >= bin * n {
                        cuts.push(midpoint(distinct[k].0, distinct[k + 1].0));
                    }
                }
                cuts
            })
            .collect();
        Self { cuts }
    }

    pub fn n_bins(&self, feature: usize) -> usize {
        self.cuts[feature].len() + 1
    }

    pub fn bin(&self, feature: usize, v: f64) -> usize {
        self.cuts[feature].partition_point(|&t| t < v)
    }

    /// Column-major bin codes for every cell of `x`.
    pub fn transform(&self, x: &DMatrix<f64>) -> Vec<Vec<u16>> {
        (0..x.ncols())
            .map(|j| {
                (0..x.nrows())
                    .map(|i| self.bin(j, x[(i, j)]) as u16)
                    .collect()
            })
            .collect()
    }
}

/// Squared-loss boosting: `base + learning_rate · Σ tree(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GbtModel {
    pub base: f64,
    pub learning_rate: f64,
    pub trees: Vec<Tree>,
}

impl GbtModel {
    pub fn fit(spec: &RegressorSpec, x: &DMatrix<f64>, y: &[f64], w: Option<&[f64]>) -> GbtModel {
        let w = unit_weights(w, y.len());
        let params = spec.tree_params(x.ncols());
        let lr = spec.learning_rate();
        let binner = Binner::fit(x, spec.max_bins.unwrap_or(DEFAULT_MAX_BINS));
        let codes = binner.transform(x);
        let base = leaf_value(&(0..y.len()).collect::<Vec<_>>(), y, &w);
        let mut f = vec![base; y.len()];
        let mut trees = Vec::with_capacity(spec.n_rounds());
        for _ in 0..spec.n_rounds() {
            let resid: Vec<f64> = y.iter().zip(&f).map(|(a, b)| a - b).collect();
            let tree = Tree::fit_binned(x, &binner, &codes, &resid, &w, &params);
            for (i, fi) in f.iter_mut().enumerate() {
                *fi += lr * tree.predict_row(x, i);
            }
            trees.push(tree);
        }
        GbtModel {
            base,
            learning_rate: lr,
            trees,
        }
    }

    /// Predictions using only the first `rounds` stages.
    pub fn predict_stages(&self, x: &DMatrix<f64>, rounds: usize) -> Vec<f64> {
        (0..x.nrows())
            .map(|i| {
                self.trees[..rounds.min(self.trees.len())]
                    .iter()
                    .fold(self.base, |acc, t| {
                        acc + self.learning_rate * t.predict_row(x, i)
                    })
            })
            .collect()
    }

    pub fn predict(&self, x: &DMatrix<f64>) -> Vec<f64> {
        self.predict_stages(x, self.trees.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regress::{fit, Model, RegressorKind};

    fn random_xy(seed: u64, n: usize, p: usize, noise: f64) -> (DMatrix<f64>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = DMatrix::<f64>::from_fn(n, p, |_, _| rng.random_range(0.0..10.0));
        let y = (0..n)
            .map(|i| {
                (x[(i, 0)]).sin() * 3.0 + x[(i, p - 1)] * 0.5 + rng.random_range(-noise..=noise)
            })
            .collect();
        (x, y)
    }

    fn mse(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>() / a.len() as f64
    }

    #[test]
    fn constant_target_is_one_leaf() {
        let (x, _) = random_xy(1, 20, 2, 0.0);
        let t = Tree::fit(&x, &[4.5; 20], None, &TreeParams::default(), 0);
        assert_eq!(t.nodes, vec![Node::Leaf { value: 4.5 }]);
    }

    #[test]
    fn distinct_rows_are_memorized() {
        let (x, y) = random_xy(2, 80, 3, 1.0);
        let t = Tree::fit(&x, &y, None, &TreeParams::default(), 0);
        assert_eq!(mse(&t.predict(&x), &y), 0.0);
    }

    #[test]
    fn four_points_match_exhaustive_scan() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 9.0, 2.0, 3.0, 3.0, 7.0, 4.0, 1.0]);
        let y = [0.0, 0.1, 5.0, 5.2];
        let t = Tree::fit(
            &x,
            &y,
            None,
            &TreeParams {
                max_depth: Some(1),
                ..Default::default()
            },
            0,
        );
        let mut best = (f64::INFINITY, 0, 0.0);
        for j in 0..2 {
            let mut vals: Vec<f64> = (0..4).map(|i| x[(i, j)]).collect();
            vals.sort_by(f64::total_cmp);
            for k in 0..3 {
                let thr = (vals[k] + vals[k + 1]) / 2.0;
                let (l, r): (Vec<f64>, Vec<f64>) =
                    (0..4)
                        .map(|i| (x[(i, j)], y[i]))
                        .fold((vec![], vec![]), |mut acc, (v, t)| {
                            if v <= thr {
                                acc.0.push(t)
                            } else {
                                acc.1.push(t)
                            }
                            acc
                        });
                let s = |v: &[f64]| {
                    let m = v.iter().sum::<f64>() / v.len() as f64;
                    v.iter().map(|a| (a - m).powi(2)).sum::<f64>()
                };
                let total = s(&l) + s(&r);
                if total < best.0 {
                    best = (total, j, thr);
                }
            }
        }
        match t.nodes[0] {
            Node::Split {
                feature, threshold, ..
            } => assert_eq!((feature, threshold), (best.1, best.2)),
            _ => panic!("expected a split"),
        }
        assert_eq!((best.1, best.2), (0, 2.5));
    }

    #[test]
    fn ties_pick_lowest_feature_then_threshold() {
        // Two identical columns: the first must be chosen.
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0]);
        let y = [0.0, 1.0, 1.0, 0.0];
        let t = Tree::fit(
            &x,
            &y,
            None,
            &TreeParams {
                max_depth: Some(1),
                ..Default::default()
            },
            0,
        );
        // Splits at 1.5 and 3.5 tie; the smaller threshold wins.
        assert_eq!(
            t.nodes[0],
            Node::Split {
                feature: 0,
                threshold: 1.5,
                left: 1,
                right: 2
            }
        );
    }

    #[test]
    fn depth_limit_only_increases_training_error() {
        let (x, y) = random_xy(3, 120, 2, 0.5);
        let mut last = -1.0;
        for d in (1..=8).rev() {
            let t = Tree::fit(
                &x,
                &y,
                None,
                &TreeParams {
                    max_depth: Some(d),
                    ..Default::default()
                },
                0,
            );
            let e = mse(&t.predict(&x), &y);
            assert!(e >= last);
            last = e;
        }
        let leafy = Tree::fit(
            &x,
            &y,
            None,
            &TreeParams {
                min_samples_leaf: 10,
                ..Default::default()
            },
            0,
        );
        assert!(mse(&leafy.predict(&x), &y) > 0.0);
    }

    #[test]
    fn min_leaf_respected() {
        let (x, y) = random_xy(4, 60, 2, 0.5);
        let params = TreeParams {
            min_samples_leaf: 7,
            ..Default::default()
        };
        let t = Tree::fit(&x, &y, None, &params, 0);
        let mut counts = vec![0usize; t.nodes.len()];
        for i in 0..60 {
            let mut id = 0;
            while let Node::Split {
                feature,
                threshold,
                left,
                right,
            } = t.nodes[id]
            {
                id = if x[(i, feature)] <= threshold {
                    left
                } else {
                    right
                };
            }
            counts[id] += 1;
        }
        for (id, n) in t.nodes.iter().enumerate() {
            if matches!(n, Node::Leaf { .. }) {
                assert!(counts[id] >= 7);
            }
        }
    }

    #[test]
    fn single_unbagged_forest_is_a_tree() {
        let (x, y) = random_xy(5, 50, 3, 0.5);
        let spec = RegressorSpec {
            bootstrap: Some(false),
            feature_subsample: Some(3),
            ..RegressorSpec::forest(1, 9)
        };
        let f = fit_forest(&spec, &x, &y, None);
        let t = Tree::fit(&x, &y, None, &TreeParams::default(), 0);
        assert_eq!(f, vec![t]);
    }

    #[test]
    fn forest_is_deterministic() {
        let (x, y) = random_xy(6, 50, 3, 0.5);
        let spec = RegressorSpec::forest(20, 4);
        let a = fit(&spec, &x, &y, None).unwrap();
        let b = fit(&spec, &x, &y, None).unwrap();
        assert_eq!(a.predict(&x).unwrap(), b.predict(&x).unwrap());
    }

    #[test]
    fn more_trees_rarely_hurt() {
        let trials = 20;
        let mut ok = 0;
        for s in 0..trials {
            let (x, y) = random_xy(100 + s, 150, 3, 2.0);
            let (xv, yv) = random_xy(500 + s, 200, 3, 2.0);
            let one = fit(&RegressorSpec::forest(1, s), &x, &y, None).unwrap();
            let many = fit(&RegressorSpec::forest(50, s), &x, &y, None).unwrap();
            if mse(&many.predict(&xv).unwrap(), &yv) <= mse(&one.predict(&xv).unwrap(), &yv) {
                ok += 1;
            }
        }
        assert!(ok * 10 >= trials * 9, "{ok}/{trials}");
    }

    #[test]
    fn binner_exact_when_few_values() {
        let x = DMatrix::from_row_slice(5, 1, &[3.0, 1.0, 2.0, 3.0, 1.0]);
        let b = Binner::fit(&x, 256);
        assert_eq!(b.cuts[0], vec![1.5, 2.5]);
        assert_eq!(b.transform(&x)[0], vec![2, 0, 1, 2, 0]);
    }

    #[test]
    fn binner_caps_bins() {
        let x = DMatrix::from_fn(1000, 1, |i, _| i as f64);
        let b = Binner::fit(&x, 16);
        assert!(b.n_bins(0) <= 16);
        let codes = b.transform(&x);
        let mut counts = vec![0; b.n_bins(0)];
        for c in &codes[0] {
            counts[*c as usize] += 1;
        }
        assert!(counts.iter().all(|&c| (60..=66).contains(&c)), "{counts:?}");
    }

    fn gbt_of(m: &crate::regress::FittedModel) -> &GbtModel {
        match &m.model {
            Model::Gbt(g) => g,
            _ => panic!(),
        }
    }

    #[test]
    fn single_stage_interpolates() {
        let (x, y) = random_xy(7, 40, 2, 1.0);
        let spec = RegressorSpec::gbt(1, 1.0).with_max_depth(10_000);
        let m = fit(&spec, &x, &y, None).unwrap();
        for (p, t) in m.predict(&x).unwrap().iter().zip(&y) {
            assert!((p - t).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_learning_rate_predicts_mean() {
        let (x, y) = random_xy(8, 30, 2, 1.0);
        let m = fit(&RegressorSpec::gbt(5, 0.0), &x, &y, None).unwrap();
        let mean = y.iter().sum::<f64>() / 30.0;
        for p in m.predict(&x).unwrap() {
            assert!((p - mean).abs() < 1e-12);
        }
    }

    #[test]
    fn boosting_matches_unbinned_reference() {
        let (x, y) = random_xy(9, 20, 2, 1.0);
        let spec = RegressorSpec::gbt(10, 0.3).with_max_depth(2);
        let m = fit(&spec, &x, &y, None).unwrap();
        let g = gbt_of(&m);
        let params = TreeParams {
            max_depth: Some(2),
            ..Default::default()
        };
        let mut f = vec![y.iter().sum::<f64>() / 20.0; 20];
        let mut last = mse(&f, &y);
        for round in 1..=10 {
            let resid: Vec<f64> = y.iter().zip(&f).map(|(a, b)| a - b).collect();
            let t = Tree::fit(&x, &resid, None, &params, 0);
            for (i, fi) in f.iter_mut().enumerate() {
                *fi += 0.3 * t.predict_row(&x, i);
            }
            assert_eq!(t, g.trees[round - 1]);
            let staged = g.predict_stages(&x, round);
            let e = mse(&staged, &y);
            assert!((e - mse(&f, &y)).abs() < 1e-12);
            assert!(e < last);
            last = e;
        }
    }

    #[test]
    fn gbt_training_error_never_rises() {
        let (x, y) = random_xy(10, 300, 3, 1.0);
        let spec = RegressorSpec {
            max_bins: Some(32),
            ..RegressorSpec::gbt(30, 0.5)
        };
        let m = fit(&spec, &x, &y, None).unwrap();
        assert_eq!(m.spec.kind, RegressorKind::Gbt);
        let g = gbt_of(&m);
        let errs: Vec<f64> = (0..=30)
            .map(|r| mse(&g.predict_stages(&x, r), &y))
            .collect();
        for w in errs.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }
}
