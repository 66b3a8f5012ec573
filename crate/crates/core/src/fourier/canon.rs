//! Lexicographically least relabelling of a square integer matrix under simultaneous
//! row/column permutations that respect a vertex colouring.
//!
//! Colours are refined by neighbourhood signatures until stable; positions are then
//! assigned cell by cell in colour order and the search keeps only branches whose
//! principal-order prefix can still be minimal.

pub(crate) struct CanonInput<'a> {
    pub n: usize,
    /// Row-major `n x n`.
    pub matrix: &'a [i64],
    /// Isomorphism-invariant colour of each vertex; vertices are only mapped within colours,
    /// and smaller colours come first.
    pub colors: &'a [Vec<i64>],
    /// Extra data compared after the matrix, as a function of the ordering.
    pub tail: Option<&'a (dyn Fn(&[usize]) -> Vec<i64> + Sync)>,
}

/// Colour refinement: ranks vertices by `(colour, sorted (m_ij, m_ji, colour_j))` until stable.
fn refine(input: &CanonInput<'_>) -> Vec<usize> {
    let n = input.n;
    let m = input.matrix;
    let mut rank = ranks(input.colors);
    let mut cells = count_distinct(&rank);
    loop {
        if cells == n {
            return rank;
        }
        let sigs: Vec<(usize, i64, Vec<(i64, i64, usize)>)> = (0..n)
            .map(|i| {
                let mut nb: Vec<(i64, i64, usize)> = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (m[i * n + j], m[j * n + i], rank[j]))
                    .collect();
                nb.sort_unstable();
                (rank[i], m[i * n + i], nb)
            })
            .collect();
        let next = ranks(&sigs);
        let c = count_distinct(&next);
        if c == cells {
            return rank;
        }
        rank = next;
        cells = c;
    }
}

fn ranks<T: Ord>(keys: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut rank = vec![0; keys.len()];
    let mut r = 0;
    for w in 0..idx.len() {
        if w > 0 && keys[idx[w]] != keys[idx[w - 1]] {
            r += 1;
        }
        rank[idx[w]] = r;
    }
    rank
}

fn count_distinct(rank: &[usize]) -> usize {
    rank.iter().copied().max().map_or(0, |m| m + 1)
}

struct State<'a> {
    input: &'a CanonInput<'a>,
    /// Colour rank required at each position.
    slot_rank: Vec<usize>,
    rank: Vec<usize>,
    order: Vec<usize>,
    used: Vec<bool>,
    /// Best principal-order key so far, stored by position blocks.
    best: Option<(Vec<i64>, Vec<i64>, Vec<usize>)>,
    /// Current key under construction.
    key: Vec<i64>,
}

impl<'a> State<'a> {
    /// Key block contributed by placing `x` at position `k`.
    fn block(&self, x: usize) -> impl Iterator<Item = i64> + '_ {
        let n = self.input.n;
        let m = self.input.matrix;
        self.order
            .iter()
            .flat_map(move |&p| [m[x * n + p], m[p * n + x]])
            .chain(std::iter::once(m[x * n + x]))
    }

    fn search(&mut self) {
        let n = self.input.n;
        let k = self.order.len();
        if k == n {
            self.leaf();
            return;
        }
        let start = self.key.len();
        let want = self.slot_rank[k];
        let mut cands: Vec<(Vec<i64>, usize)> = (0..n)
            .filter(|&x| !self.used[x] && self.rank[x] == want)
            .map(|x| (self.block(x).collect(), x))
            .collect();
        cands.sort();
        // Only candidates with the least block can start a least key.
        let min_block = cands[0].0.clone();
        for (blk, x) in cands.into_iter().take_while(|(b, _)| *b == min_block) {
            self.key.extend_from_slice(&blk);
            let worse = self.best.as_ref().is_some_and(|(best, _, _)| {
                self.key.as_slice() > &best[..self.key.len()]
            });
            if !worse {
                self.order.push(x);
                self.used[x] = true;
                self.search();
                self.used[x] = false;
                self.order.pop();
            }
            self.key.truncate(start);
            if worse {
                return;
            }
        }
    }

    fn leaf(&mut self) {
        let tail = self.input.tail.map(|f| f(&self.order)).unwrap_or_default();
        let better = match &self.best {
            None => true,
            Some((bk, bt, _)) => (self.key.as_slice(), tail.as_slice()) < (bk.as_slice(), bt.as_slice()),
        };
        if better {
            self.best = Some((self.key.clone(), tail, self.order.clone()));
        }
    }
}

/// Returns the ordering (`order[k]` = original vertex at position `k`) giving the least key.
pub(crate) fn canonical_order(input: &CanonInput<'_>) -> Vec<usize> {
    let n = input.n;
    if n == 0 {
        return Vec::new();
    }
    let rank = refine(input);
    let mut slot_rank = rank.clone();
    slot_rank.sort_unstable();
    let mut st = State {
        input,
        slot_rank,
        rank,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
        key: Vec::with_capacity(n * n),
    };
    st.search();
    st.best.expect("at least one ordering").2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(m: &[i64], n: usize, order: &[usize]) -> Vec<i64> {
        let mut out = Vec::with_capacity(n * n);
        for &i in order {
            for &j in order {
                out.push(m[i * n + j]);
            }
        }
        out
    }

    #[test]
    fn invariant_under_relabelling() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let m: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-1..=1)).collect();
            let colors: Vec<Vec<i64>> = (0..n).map(|i| vec![(i != 0) as i64]).collect();
            let inp = CanonInput {
                n,
                matrix: &m,
                colors: &colors,
                tail: None,
            };
            let order = canonical_order(&inp);
            assert_eq!(order[0], 0);
            // invariance: relabel randomly (fixing 0) and compare results
            let mut perm: Vec<usize> = (1..n).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            perm.insert(0, 0);
            let pm = apply(&m, n, &perm);
            let inp2 = CanonInput {
                n,
                matrix: &pm,
                colors: &colors,
                tail: None,
            };
            let order2 = canonical_order(&inp2);
            assert_eq!(apply(&m, n, &order), apply(&pm, n, &order2));
        }
    }
}
