//! Row-by-row enumeration of integral Fourier matrices for a fixed norm vector.
//!
//! Index 0 is the degree row; the remaining indices are processed in order of increasing
//! norm, because small-norm rows have few integer vectors of that length. Placing row `r`
//! also fixes column `r` through symmetrizability (`s_jr = s_rj g_r / g_j`), so after each
//! step every structure constant among processed indices can be evaluated exactly.
//! Partial matrices are reduced level by level modulo permutations that preserve the
//! processed set and the norms.

use std::collections::{BTreeSet, HashSet};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{canonical_form, canonical_order, validate, CanonInput, IntegralFourierMatrix};
use crate::error::{Error, Result};
use crate::exact::integer_sqrt_u64;
use crate::norms::{enumerate_norm_vectors, NormVector};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateOptions {
    /// Keep only congruence multiplication tables.
    pub require_cmt: bool,
    /// Keep only matrices with nonnegative structure constants.
    pub require_nonneg: bool,
    /// Abort after this many search nodes.
    pub node_budget: u64,
    /// Frontier file written after every level and read back on restart.
    #[serde(skip)]
    pub checkpoint: Option<PathBuf>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            require_cmt: false,
            require_nonneg: false,
            node_budget: DEFAULT_NODE_BUDGET,
            checkpoint: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    pub nodes: u64,
    pub norm_vectors: usize,
    /// Largest number of partial matrices kept at one level.
    pub max_frontier: usize,
}

/// Resumable search state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchCheckpoint {
    pub n: usize,
    pub require_cmt: bool,
    pub require_nonneg: bool,
    /// Index into the norm vector list of the vector in progress.
    pub norm_index: usize,
    /// Number of rows placed in every frontier matrix.
    pub rows_placed: usize,
    /// Partial matrices, row-major in processing order.
    pub frontier: Vec<Vec<i64>>,
    pub found: Vec<IntegralFourierMatrix>,
    pub nodes: u64,
}

/// One representative per isomorphism class (canonical forms, sorted).
pub fn enumerate_fourier(n: usize, opts: &EnumerateOptions) -> Result<Vec<IntegralFourierMatrix>> {
    enumerate_fourier_with_stats(n, opts).map(|(v, _)| v)
}

pub fn enumerate_fourier_with_stats(
    n: usize,
    opts: &EnumerateOptions,
) -> Result<(Vec<IntegralFourierMatrix>, EnumerationStats)> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let norms = enumerate_norm_vectors(n)?;
    let mut stats = EnumerationStats {
        norm_vectors: norms.len(),
        ..Default::default()
    };
    let resume = match &opts.checkpoint {
        Some(p) if p.exists() => {
            let cp = read_checkpoint(p)?;
            if cp.n != n || cp.require_cmt != opts.require_cmt || cp.require_nonneg != opts.require_nonneg {
                return Err(Error::InvalidArgument(format!(
                    "checkpoint {} belongs to a different search",
                    p.display()
                )));
            }
            Some(cp)
        }
        _ => None,
    };
    let mut found: BTreeSet<IntegralFourierMatrix> = BTreeSet::new();
    let mut start_index = 0;
    let mut resume_frontier = None;
    if let Some(cp) = resume {
        found.extend(cp.found);
        start_index = cp.norm_index;
        stats.nodes = cp.nodes;
        resume_frontier = Some((cp.rows_placed, cp.frontier));
    }
    let counter = AtomicU64::new(stats.nodes);
    for (idx, nv) in norms.iter().enumerate().skip(start_index) {
        let problem = Problem::new(nv, opts);
        let frontier = resume_frontier.take();
        let ctx = RunContext {
            counter: &counter,
            budget: opts.node_budget,
            checkpoint: opts.checkpoint.as_deref(),
            norm_index: idx,
            found_so_far: &found,
            n,
            opts,
        };
        let (mats, max_frontier) = problem.run(frontier, &ctx)?;
        stats.max_frontier = stats.max_frontier.max(max_frontier);
        found.extend(mats);
    }
    stats.nodes = counter.load(Ordering::Relaxed);
    if let Some(p) = &opts.checkpoint {
        let _ = std::fs::remove_file(p);
    }
    Ok((found.into_iter().collect(), stats))
}

/// All classes with the given norm vector (canonical forms, sorted).
pub fn enumerate_fourier_for_norms(
    nv: &NormVector,
    opts: &EnumerateOptions,
) -> Result<(Vec<IntegralFourierMatrix>, EnumerationStats)> {
    let counter = AtomicU64::new(0);
    let empty = BTreeSet::new();
    let ctx = RunContext {
        counter: &counter,
        budget: opts.node_budget,
        checkpoint: None,
        norm_index: 0,
        found_so_far: &empty,
        n: nv.len(),
        opts,
    };
    let (mats, max_frontier) = Problem::new(nv, opts).run(None, &ctx)?;
    let mut v: Vec<_> = mats.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    v.sort();
    Ok((
        v,
        EnumerationStats {
            nodes: counter.load(Ordering::Relaxed),
            norm_vectors: 1,
            max_frontier,
        },
    ))
}

fn read_checkpoint(p: &Path) -> Result<SearchCheckpoint> {
    let text = std::fs::read_to_string(p)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("checkpoint: {e}")))
}

fn write_checkpoint(p: &Path, cp: &SearchCheckpoint) -> Result<()> {
    let tmp = p.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_vec(cp).map_err(|e| Error::Internal(e.to_string()))?)?;
    std::fs::rename(&tmp, p)?;
    Ok(())
}

struct RunContext<'a> {
    counter: &'a AtomicU64,
    budget: u64,
    checkpoint: Option<&'a Path>,
    norm_index: usize,
    found_so_far: &'a BTreeSet<IntegralFourierMatrix>,
    n: usize,
    opts: &'a EnumerateOptions,
}

/// Fixed data for one norm vector, in processing order.
struct Problem {
    n: usize,
    size: i64,
    norms: Vec<i64>,
    degrees: Vec<i64>,
    /// `g_k^2 = d_1 / d_k`.
    cof: Vec<i128>,
    /// `w = sqrt(d_1)` when congruences are required.
    cmt_root: Option<i64>,
    nonneg: bool,
    /// Norm block id of each index (index 0 alone in block 0).
    block: Vec<usize>,
}

impl Problem {
    fn new(nv: &NormVector, opts: &EnumerateOptions) -> Self {
        let n = nv.len();
        let mut norms: Vec<i64> = nv.dims.iter().map(|&d| d as i64).collect();
        norms[1..].sort_unstable();
        let size = norms[0];
        let degrees: Vec<i64> = norms
            .iter()
            .map(|&d| integer_sqrt_u64((size / d) as u64).expect("square cofactor") as i64)
            .collect();
        let cof = degrees.iter().map(|&g| (g as i128) * (g as i128)).collect();
        let mut block = vec![0; n];
        for k in 1..n {
            block[k] = if k > 1 && norms[k] == norms[k - 1] {
                block[k - 1]
            } else {
                block[k - 1] + 1
            };
        }
        let cmt_root = if opts.require_cmt {
            integer_sqrt_u64(size as u64).map(|w| w as i64)
        } else {
            None
        };
        Problem {
            n,
            size,
            norms,
            degrees,
            cof,
            cmt_root,
            nonneg: opts.require_nonneg,
            block,
        }
    }

    fn initial(&self) -> Vec<i64> {
        let n = self.n;
        let mut s = vec![0i64; n * n];
        for j in 0..n {
            s[j] = self.degrees[j];
            s[j * n] = 1;
        }
        s
    }

    /// Runs the level-wise search, returning canonical forms of complete matrices.
    fn run(
        &self,
        resume: Option<(usize, Vec<Vec<i64>>)>,
        ctx: &RunContext<'_>,
    ) -> Result<(Vec<IntegralFourierMatrix>, usize)> {
        let n = self.n;
        if ctx.opts.require_cmt && self.cmt_root.is_none() {
            return Ok((Vec::new(), 0));
        }
        let (mut placed, mut frontier) = match resume {
            Some(x) => x,
            None => {
                let s0 = self.initial();
                if !self.row_checks(&s0, 0) {
                    return Ok((Vec::new(), 0));
                }
                (1, vec![s0])
            }
        };
        let mut max_frontier = frontier.len();
        let stop = AtomicBool::new(false);
        while placed < n && !frontier.is_empty() {
            let r = placed;
            let children: Vec<Vec<Vec<i64>>> = frontier
                .par_iter()
                .map(|s| {
                    if stop.load(Ordering::Relaxed) {
                        return Vec::new();
                    }
                    let mut out = Vec::new();
                    let mut rowgen = RowGen::new(self, s, r);
                    let nodes = rowgen.generate(&mut |cand| out.push(cand));
                    let total = ctx.counter.fetch_add(nodes, Ordering::Relaxed) + nodes;
                    if total > ctx.budget {
                        stop.store(true, Ordering::Relaxed);
                    }
                    out
                })
                .collect();
            if stop.load(Ordering::Relaxed) {
                return Err(Error::BudgetExceeded {
                    nodes: ctx.counter.load(Ordering::Relaxed),
                });
            }
            let flat: Vec<Vec<i64>> = children.into_iter().flatten().collect();
            let keys: Vec<Vec<i64>> = if r + 1 < n {
                flat.par_iter().map(|s| self.partial_key(s, r + 1)).collect()
            } else {
                Vec::new()
            };
            let mut next = Vec::new();
            if r + 1 < n {
                let mut seen = HashSet::with_capacity(flat.len());
                for (s, k) in flat.into_iter().zip(keys) {
                    if seen.insert(k) {
                        next.push(s);
                    }
                }
            } else {
                next = flat;
            }
            frontier = next;
            placed = r + 1;
            max_frontier = max_frontier.max(frontier.len());
            if let Some(p) = ctx.checkpoint {
                if placed < n {
                    write_checkpoint(
                        p,
                        &SearchCheckpoint {
                            n: ctx.n,
                            require_cmt: ctx.opts.require_cmt,
                            require_nonneg: ctx.opts.require_nonneg,
                            norm_index: ctx.norm_index,
                            rows_placed: placed,
                            frontier: frontier.clone(),
                            found: ctx.found_so_far.iter().cloned().collect(),
                            nodes: ctx.counter.load(Ordering::Relaxed),
                        },
                    )?;
                }
            }
        }
        if placed < n {
            return Ok((Vec::new(), max_frontier));
        }
        let mats: Vec<IntegralFourierMatrix> = frontier
            .par_iter()
            .map(|s| {
                let rows: Vec<Vec<i64>> = s.chunks(n).map(|r| r.to_vec()).collect();
                let m = validate(&rows).map_err(|v| {
                    Error::Internal(format!("search produced an invalid matrix: {v}"))
                })?;
                Ok(canonical_form(&m))
            })
            .collect::<Result<_>>()?;
        let mut uniq: Vec<_> = mats.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        uniq.sort();
        Ok((uniq, max_frontier))
    }

    /// Exact checks after row (and column) `r` is complete: structure constants and the
    /// Parseval sums among processed indices, and congruences of row `r`.
    fn row_checks(&self, s: &[i64], r: usize) -> bool {
        let n = self.n;
        let d1 = self.size as i128;
        if let Some(w) = self.cmt_root {
            let g = self.degrees[r];
            for j in 0..n {
                if (g * s[r * n + j] - g * self.degrees[j]).rem_euclid(w) != 0 {
                    return false;
                }
            }
        }
        for a in 0..=r {
            // sum_l (N_ar^l)^2 = sum_k s_ka^2 s_kr^2 / d_k must be an integer
            let mut par: i128 = 0;
            for k in 0..n {
                let x = s[k * n + a] as i128 * s[k * n + r] as i128;
                par += self.cof[k] * x * x;
            }
            if par % d1 != 0 {
                return false;
            }
            for b in a..=r {
                let mut acc: i128 = 0;
                for k in 0..n {
                    let x = s[k * n + a] as i128 * s[k * n + b] as i128;
                    if x != 0 {
                        acc += self.cof[k] * x * s[k * n + r] as i128;
                    }
                }
                if acc % d1 != 0 || (self.nonneg && acc < 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Invariant of a partial matrix with `placed` rows under permutations preserving the
    /// processed set and norms.
    fn partial_key(&self, s: &[i64], placed: usize) -> Vec<i64> {
        let n = self.n;
        let p = placed;
        let sub: Vec<i64> = (0..p)
            .flat_map(|i| (0..p).map(move |j| s[i * n + j]))
            .collect();
        let colors: Vec<Vec<i64>> = (0..p)
            .map(|i| {
                let mut c = vec![(i != 0) as i64, self.norms[i]];
                let mut tail: Vec<(usize, i64)> =
                    (p..n).map(|u| (self.block[u], s[i * n + u])).collect();
                tail.sort_unstable();
                c.extend(tail.into_iter().flat_map(|(b, v)| [b as i64, v]));
                c
            })
            .collect();
        let tail_fn = |order: &[usize]| -> Vec<i64> { self.unprocessed_columns(s, p, order) };
        let order = canonical_order(&CanonInput {
            n: p,
            matrix: &sub,
            colors: &colors,
            tail: Some(&tail_fn),
        });
        let mut key: Vec<i64> = Vec::with_capacity(n * p);
        for &i in &order {
            for &j in &order {
                key.push(sub[i * p + j]);
            }
        }
        key.extend(self.unprocessed_columns(s, p, &order));
        key
    }

    /// Columns of unprocessed indices restricted to processed rows, sorted within norm blocks.
    fn unprocessed_columns(&self, s: &[i64], p: usize, order: &[usize]) -> Vec<i64> {
        let n = self.n;
        let mut cols: Vec<(usize, Vec<i64>)> = (p..n)
            .map(|u| (self.block[u], order.iter().map(|&i| s[i * n + u]).collect()))
            .collect();
        cols.sort_unstable();
        cols.into_iter().flat_map(|(_, c)| c).collect()
    }
}

/// Enumerates the admissible completions of row `r`.
struct RowGen<'a> {
    pb: &'a Problem,
    base: &'a [i64],
    r: usize,
    /// Rows `0..r` whose inner product with row `r` must vanish.
    resid: Vec<i128>,
    /// `suffix[i][t] = sum_{j >= t} s_ij^2` for placed rows `i`.
    suffix: Vec<Vec<i128>>,
    /// Allowed step and bound for each unknown position.
    step: Vec<i64>,
    bound: Vec<i64>,
    cur: Vec<i64>,
    nodes: u64,
}

impl<'a> RowGen<'a> {
    fn new(pb: &'a Problem, base: &'a [i64], r: usize) -> Self {
        let n = pb.n;
        let mut resid = vec![0i128; r];
        for (i, res) in resid.iter_mut().enumerate() {
            let known: i128 = (0..r)
                .map(|k| base[i * n + k] as i128 * base[r * n + k] as i128)
                .sum();
            *res = -known;
        }
        let suffix = (0..r)
            .map(|i| {
                let mut v = vec![0i128; n + 1];
                for t in (0..n).rev() {
                    let x = base[i * n + t] as i128;
                    v[t] = v[t + 1] + x * x;
                }
                v
            })
            .collect();
        let gr = pb.degrees[r];
        let mut step = vec![1i64; n];
        let mut bound = vec![i64::MAX; n];
        for j in r..n {
            if j > r {
                let gj = pb.degrees[j];
                step[j] = gj / gr.gcd(&gj);
                // row j keeps room for s_jr = s_rj g_r / g_j
                let used: i64 = (0..r).map(|k| base[j * n + k] * base[j * n + k]).sum();
                let room = pb.norms[j] - used;
                if room < 0 {
                    bound[j] = -1;
                    continue;
                }
                // s_rj^2 <= room * g_j^2 / g_r^2
                let lim = (room as i128 * (gj as i128) * (gj as i128)) / ((gr as i128) * (gr as i128));
                bound[j] = isqrt_i128(lim);
            }
            if pb.nonneg {
                bound[j] = bound[j].min(pb.degrees[j]);
            }
        }
        RowGen {
            pb,
            base,
            r,
            resid,
            suffix,
            step,
            bound,
            cur: Vec::with_capacity(n),
            nodes: 0,
        }
    }

    /// Calls `emit` with each completed partial matrix; returns the number of nodes visited.
    fn generate(&mut self, emit: &mut dyn FnMut(Vec<i64>)) -> u64 {
        let n = self.pb.n;
        let r = self.r;
        if self.bound[r..].iter().any(|&b| b < 0) {
            return 1;
        }
        let used: i64 = (0..r).map(|k| self.base[r * n + k] * self.base[r * n + k]).sum();
        let budget = self.pb.norms[r] - used;
        if budget < 0 {
            return 1;
        }
        self.dfs(r, budget, emit);
        self.nodes.max(1)
    }

    fn dfs(&mut self, j: usize, budget: i64, emit: &mut dyn FnMut(Vec<i64>)) {
        self.nodes += 1;
        let n = self.pb.n;
        // Cauchy-Schwarz: each residual must be reachable with the remaining budget.
        for i in 0..self.r {
            let need = self.resid[i];
            if need != 0 && need * need > self.suffix[i][j] * budget as i128 {
                return;
            }
        }
        if j == n {
            if budget == 0 && self.resid.iter().all(|&x| x == 0) {
                if let Some(s) = self.complete() {
                    emit(s);
                }
            }
            return;
        }
        let step = self.step[j];
        let lim = self.bound[j].min(isqrt_i128(budget as i128));
        let top = lim - lim.rem_euclid(step);
        let mut v = top;
        while v >= -top {
            if j == n - 1 && v * v != budget {
                v -= step;
                continue;
            }
            let cost = v * v;
            if cost <= budget {
                for i in 0..self.r {
                    self.resid[i] -= self.base[i * n + j] as i128 * v as i128;
                }
                self.cur.push(v);
                self.dfs(j + 1, budget - cost, emit);
                self.cur.pop();
                for i in 0..self.r {
                    self.resid[i] += self.base[i * n + j] as i128 * v as i128;
                }
            }
            v -= step;
        }
    }

    /// Writes row `r` and the induced column, then runs the exact checks.
    fn complete(&self) -> Option<Vec<i64>> {
        let pb = self.pb;
        let n = pb.n;
        let r = self.r;
        let mut s = self.base.to_vec();
        let gr = pb.degrees[r];
        for (t, &v) in self.cur.iter().enumerate() {
            let j = r + t;
            s[r * n + j] = v;
            if j > r {
                s[j * n + r] = v * gr / pb.degrees[j];
            }
        }
        // Remaining room of every later row and feasibility of future orthogonality.
        let room: Vec<i64> = (0..n)
            .map(|j| {
                if j <= r {
                    0
                } else {
                    pb.norms[j] - (0..=r).map(|k| s[j * n + k] * s[j * n + k]).sum::<i64>()
                }
            })
            .collect();
        if room.iter().any(|&x| x < 0) {
            return None;
        }
        for j in r + 1..n {
            for i in 0..=r {
                let known: i128 = (0..=r).map(|k| s[i * n + k] as i128 * s[j * n + k] as i128).sum();
                let rest: i128 = (r + 1..n).map(|k| (s[i * n + k] as i128).pow(2)).sum();
                if known * known > rest * room[j] as i128 {
                    return None;
                }
            }
            for jj in j + 1..n {
                let known: i128 = (0..=r).map(|k| s[jj * n + k] as i128 * s[j * n + k] as i128).sum();
                if known * known > room[j] as i128 * room[jj] as i128 {
                    return None;
                }
            }
        }
        if !pb.row_checks(&s, r) {
            return None;
        }
        Some(s)
    }
}

fn isqrt_i128(x: i128) -> i64 {
    if x <= 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r.min(i64::MAX as i128) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_dimension_counts() {
        let opts = EnumerateOptions::default();
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_fourier(n, &opts).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 0, 2, 0, 0, 1]);
        assert!(enumerate_fourier(0, &opts).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let opts = EnumerateOptions {
            node_budget: 10,
            ..Default::default()
        };
        assert!(matches!(enumerate_fourier(8, &opts), Err(Error::BudgetExceeded { .. })));
    }
}
