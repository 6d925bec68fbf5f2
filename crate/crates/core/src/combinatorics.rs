//! Index sets: m-element subsets of `[N] = {1, …, N}` in colex order.

/// An m-element index set `{k_1 < … < k_m}`, 1-based.
pub type IndexSet = Vec<usize>;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Position of `alpha` in the colex enumeration of `[N]^{(m)}` (independent of N).
pub fn colex_rank(alpha: &[usize]) -> usize {
    alpha
        .iter()
        .enumerate()
        .map(|(i, &k)| binomial(k - 1, i + 1) as usize)
        .sum()
}

pub fn is_strictly_increasing(alpha: &[usize]) -> bool {
    alpha.windows(2).all(|w| w[0] < w[1])
}

/// Iterator over the m-element subsets of `[n]` in colex order.
#[derive(Clone, Debug)]
pub struct Colex {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Colex {
    type Item = IndexSet;

    fn next(&mut self) -> Option<IndexSet> {
        let out = self.current.take()?;
        let m = out.len();
        let mut next = out.clone();
        let mut i = 0;
        loop {
            if i == m {
                break;
            }
            let limit = if i + 1 < m { next[i + 1] } else { self.n + 1 };
            if next[i] + 1 < limit {
                next[i] += 1;
                for (r, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = r + 1;
                }
                self.current = Some(next);
                break;
            }
            i += 1;
        }
        Some(out)
    }
}

pub fn colex(n: usize, m: usize) -> Colex {
    let current = if m <= n && m > 0 {
        Some((1..=m).collect())
    } else if m == 0 {
        Some(Vec::new())
    } else {
        None
    };
    // m == 0 yields the single empty set and then stops.
    Colex { n, current }
}

/// All m-element subsets of `ground` (sorted ascending), in colex order.
pub fn colex_within(ground: &[usize], m: usize) -> impl Iterator<Item = IndexSet> + '_ {
    colex(ground.len(), m).map(move |pos| pos.iter().map(|&p| ground[p - 1]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order_and_rank() {
        let all: Vec<_> = colex(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 4],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        for (i, a) in all.iter().enumerate() {
            assert_eq!(colex_rank(a), i);
        }
        assert_eq!(colex(5, 3).count() as u128, binomial(5, 3));
        assert_eq!(colex(3, 4).count(), 0);
        assert_eq!(colex(3, 0).count(), 1);
    }

    #[test]
    fn within_ground_set() {
        let g = [2, 5, 9];
        let v: Vec<_> = colex_within(&g, 2).collect();
        assert_eq!(v, vec![vec![2, 5], vec![2, 9], vec![5, 9]]);
    }
}
