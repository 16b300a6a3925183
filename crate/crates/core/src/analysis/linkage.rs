use crate::error::{Error, Result};

use super::DistanceMatrix;

/// One agglomeration step. Items are clusters `0..n`; the cluster created
/// by step `k` gets id `n + k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MergeStep {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram {
    pub labels: Vec<String>,
    pub steps: Vec<MergeStep>,
}

impl Dendrogram {
    pub fn item_count(&self) -> usize {
        self.labels.len()
    }
}

/// Single-linkage agglomerative clustering.
///
/// Among equally close cluster pairs the one with the lexicographically
/// smallest `(a, b)` cluster ids (`a < b`) merges first.
pub fn single_linkage(d: &DistanceMatrix) -> Dendrogram {
    let n = d.len();
    // slot i holds cluster id ids[i]; dist is indexed by slot
    let mut ids: Vec<usize> = (0..n).collect();
    let mut sizes = vec![1usize; n];
    let mut active = vec![true; n];
    let mut dist = d.rows();
    let mut steps = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in 0..n {
                if j == i || !active[j] || ids[i] > ids[j] {
                    continue;
                }
                let cand = (dist[i][j], ids[i], ids[j], i, j);
                let better = match best {
                    None => true,
                    Some(b) => {
                        cand.0 < b.0 || (cand.0 == b.0 && (cand.1, cand.2) < (b.1, b.2))
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        let (h, a, b, si, sj) = best.expect("at least two active clusters");
        for t in 0..n {
            let m = dist[si][t].min(dist[sj][t]);
            dist[si][t] = m;
            dist[t][si] = m;
        }
        active[sj] = false;
        sizes[si] += sizes[sj];
        ids[si] = n + k;
        steps.push(MergeStep {
            a,
            b,
            height: h,
            size: sizes[si],
        });
    }
    Dendrogram {
        labels: d.labels().to_vec(),
        steps,
    }
}

/// Flat clusters left after undoing the last `k - 1` merges.
///
/// Labels are `0..k`, numbered by each cluster's smallest item.
pub fn cut_clusters(dend: &Dendrogram, k: usize) -> Result<Vec<usize>> {
    let n = dend.item_count();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("cluster count {k} outside 1..={n}")));
    }
    let mut owner: Vec<usize> = (0..2 * n).collect();
    fn find(owner: &mut [usize], mut x: usize) -> usize {
        while owner[x] != x {
            owner[x] = owner[owner[x]];
            x = owner[x];
        }
        x
    }
    for (step_idx, s) in dend.steps.iter().take(n - k).enumerate() {
        let new = n + step_idx;
        let (ra, rb) = (find(&mut owner, s.a), find(&mut owner, s.b));
        owner[ra] = new;
        owner[rb] = new;
    }
    let mut label_of_root = std::collections::HashMap::new();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let r = find(&mut owner, i);
        let next = label_of_root.len();
        out.push(*label_of_root.entry(r).or_insert(next));
    }
    Ok(out)
}

/// Fraction of items whose cluster's majority class equals their own class.
pub fn purity(clusters: &[usize], classes: &[usize]) -> f64 {
    assert_eq!(clusters.len(), classes.len());
    if clusters.is_empty() {
        return 1.0;
    }
    let mut counts: std::collections::BTreeMap<usize, std::collections::BTreeMap<usize, usize>> = Default::default();
    for (&c, &t) in clusters.iter().zip(classes) {
        *counts.entry(c).or_default().entry(t).or_default() += 1;
    }
    let majority: usize = counts.values().map(|m| m.values().copied().max().unwrap_or(0)).sum();
    majority as f64 / clusters.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: Vec<Vec<f64>>) -> DistanceMatrix {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        DistanceMatrix::from_rows(labels, rows).unwrap()
    }

    #[test]
    fn two_points() {
        let d = single_linkage(&matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]));
        assert_eq!(d.steps, vec![MergeStep { a: 0, b: 1, height: 1.0, size: 2 }]);
        assert_eq!(cut_clusters(&d, 2).unwrap(), vec![0, 1]);
        assert_eq!(cut_clusters(&d, 1).unwrap(), vec![0, 0]);
        assert!(cut_clusters(&d, 3).is_err());
        assert!(cut_clusters(&d, 0).is_err());
    }

    #[test]
    fn three_points_hand_trace() {
        let d = single_linkage(&matrix(vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 4.0],
            vec![5.0, 4.0, 0.0],
        ]));
        let heights: Vec<f64> = d.steps.iter().map(|s| s.height).collect();
        assert_eq!(heights, vec![1.0, 4.0]);
        assert_eq!((d.steps[1].a, d.steps[1].b, d.steps[1].size), (2, 3, 3));
        assert_eq!(cut_clusters(&d, 2).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn all_zero_and_ties() {
        let d = single_linkage(&matrix(vec![vec![0.0; 4]; 4]));
        assert!(d.steps.iter().all(|s| s.height == 0.0));
        assert_eq!((d.steps[0].a, d.steps[0].b), (0, 1));
        assert_eq!((d.steps[1].a, d.steps[1].b), (2, 3));
    }

    #[test]
    fn purity_counts_majorities() {
        assert_eq!(purity(&[0, 0, 1, 1], &[5, 5, 6, 6]), 1.0);
        assert_eq!(purity(&[0, 0, 0, 1], &[5, 5, 6, 6]), 0.75);
    }
}
