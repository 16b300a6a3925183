//! Matching children of two matched branches.

/// Is there a partial matching between `left` and `right` items, using only
/// `allowed` pairs, that leaves unmatched only items marked removable?
///
/// Reduced to a perfect matching: each side is padded with one dummy per
/// item of the other side. A real item may take its own dummy only if it is
/// removable, and dummies pair freely among themselves.
pub(crate) fn covering_matching_exists(
    left_removable: &[bool],
    right_removable: &[bool],
    allowed: impl Fn(usize, usize) -> bool,
) -> bool {
    let (nl, nr) = (left_removable.len(), right_removable.len());
    // quick exits
    let forced_left = left_removable.iter().filter(|&&r| !r).count();
    let forced_right = right_removable.iter().filter(|&&r| !r).count();
    if forced_left > nr || forced_right > nl {
        return false;
    }
    if forced_left == 0 && forced_right == 0 {
        return true;
    }

    // left vertices: 0..nl real, nl..nl+nr dummies for right items
    // right vertices: 0..nr real, nr..nr+nl dummies for left items
    let size = nl + nr;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for i in 0..nl {
        for j in 0..nr {
            if allowed(i, j) {
                adj[i].push(j);
            }
        }
        if left_removable[i] {
            adj[i].push(nr + i);
        }
    }
    for j in 0..nr {
        if right_removable[j] {
            adj[nl + j].push(j);
        }
        adj[nl + j].extend(nr..nr + nl);
    }

    let mut match_right = vec![usize::MAX; size];
    for u in 0..size {
        let mut visited = vec![false; size];
        if !augment(u, &adj, &mut match_right, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(u: usize, adj: &[Vec<usize>], match_right: &mut [usize], visited: &mut [bool]) -> bool {
    for &v in &adj[u] {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        if match_right[v] == usize::MAX || augment(match_right[v], adj, match_right, visited) {
            match_right[v] = u;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive reference: try every partial injection left -> right.
    fn brute(lr: &[bool], rr: &[bool], allowed: &dyn Fn(usize, usize) -> bool) -> bool {
        fn go(i: usize, lr: &[bool], rr: &[bool], used: &mut Vec<bool>, allowed: &dyn Fn(usize, usize) -> bool) -> bool {
            if i == lr.len() {
                return used.iter().zip(rr).all(|(&u, &r)| u || r);
            }
            if lr[i] && go(i + 1, lr, rr, used, allowed) {
                return true;
            }
            for j in 0..rr.len() {
                if !used[j] && allowed(i, j) {
                    used[j] = true;
                    let ok = go(i + 1, lr, rr, used, allowed);
                    used[j] = false;
                    if ok {
                        return true;
                    }
                }
            }
            false
        }
        go(0, lr, rr, &mut vec![false; rr.len()], allowed)
    }

    #[test]
    fn agrees_with_exhaustive_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let nl = rng.random_range(0..5);
            let nr = rng.random_range(0..5);
            let lr: Vec<bool> = (0..nl).map(|_| rng.random_bool(0.5)).collect();
            let rr: Vec<bool> = (0..nr).map(|_| rng.random_bool(0.5)).collect();
            let table: Vec<Vec<bool>> = (0..nl).map(|_| (0..nr).map(|_| rng.random_bool(0.4)).collect()).collect();
            let allowed = |i: usize, j: usize| table[i][j];
            assert_eq!(covering_matching_exists(&lr, &rr, allowed), brute(&lr, &rr, &allowed));
        }
    }

    #[test]
    fn small_cases() {
        assert!(covering_matching_exists(&[], &[], |_, _| false));
        assert!(!covering_matching_exists(&[false], &[], |_, _| true));
        assert!(covering_matching_exists(&[false], &[true], |_, _| true));
        assert!(!covering_matching_exists(&[false, false], &[false], |_, _| true));
    }
}
