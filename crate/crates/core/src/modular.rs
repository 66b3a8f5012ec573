//! Normalized S-matrices, the modular equation `S^2 = (ST)^3`, diagonal T-matrices of
//! finite order, the group generated by `S` and `T`, and an infinite family of rational data.

use std::collections::HashSet;

use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Cyclotomic, ExactNumber, Rational};
use crate::fourier::{structure_constants, validate, FusionTensor, IntegralFourierMatrix};

/// Largest conductor used for one verification.
pub const MAX_SESSION_CONDUCTOR: u64 = 720;
pub const MAX_T_ORDER: u64 = 360;
pub const DEFAULT_T_ORDER: u64 = 24;
pub const DEFAULT_GROUP_CAP: u64 = 100_000;

/// Square matrix over a single cyclotomic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    n: usize,
    conductor: u64,
    entries: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn from_entries(n: usize, conductor: u64, entries: Vec<Cyclotomic>) -> Result<Self> {
        let entries = entries
            .into_iter()
            .map(|x| x.embed(conductor))
            .collect::<Result<_>>()?;
        Ok(CycloMatrix {
            n,
            conductor,
            entries,
        })
    }

    pub fn identity(n: usize, conductor: u64) -> Result<Self> {
        let mut e = vec![Cyclotomic::zero(); n * n];
        for i in 0..n {
            e[i * n + i] = Cyclotomic::one();
        }
        Self::from_entries(n, conductor, e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let entries: Vec<Cyclotomic> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                let mut acc = Cyclotomic::zero().embed(self.conductor).expect("valid conductor");
                for k in 0..n {
                    let a = &self.entries[i * n + k];
                    let b = &other.entries[k * n + j];
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect();
        CycloMatrix {
            n,
            conductor: self.conductor,
            entries,
        }
    }

    /// `self * diag(d)`.
    pub fn mul_diag(&self, d: &[Cyclotomic]) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|idx| &self.entries[idx] * &d[idx % n]).collect();
        CycloMatrix {
            n,
            conductor: self.conductor,
            entries,
        }
    }

    /// `diag(d) * self`.
    pub fn diag_mul(&self, d: &[Cyclotomic]) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|idx| &d[idx / n] * &self.entries[idx]).collect();
        CycloMatrix {
            n,
            conductor: self.conductor,
            entries,
        }
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n)
            .map(|idx| self.entries[(idx % n) * n + idx / n].conj())
            .collect();
        CycloMatrix {
            n,
            conductor: self.conductor,
            entries,
        }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    fn key(&self) -> Vec<Rational> {
        self.entries
            .iter()
            .flat_map(|x| {
                x.embed(self.conductor)
                    .expect("entries share the conductor")
                    .coefficients()
                    .to_vec()
            })
            .collect()
    }

    fn embed(&self, conductor: u64) -> Result<Self> {
        Self::from_entries(self.n, conductor, self.entries.clone())
    }
}

/// `S_ij = s_ij / sqrt(d_i)` over the smallest cyclotomic field holding every `sqrt(d_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedS {
    pub n: usize,
    pub conductor: u64,
    pub matrix: CycloMatrix,
}

impl NormalizedS {
    pub fn entry(&self, i: usize, j: usize) -> &Cyclotomic {
        self.matrix.get(i, j)
    }
}

pub fn normalize(m: &IntegralFourierMatrix) -> Result<NormalizedS> {
    let n = m.n();
    let roots: Vec<Cyclotomic> = m
        .norms()
        .iter()
        .map(|&d| Cyclotomic::sqrt_int(d as i64).map(|r| r.normalized()))
        .collect::<Result<_>>()?;
    let conductor = roots.iter().fold(1u64, |c, r| c.lcm(&r.conductor()));
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        // 1/sqrt(d) = sqrt(d)/d
        let inv = &roots[i] * &Rational::new(1.into(), m.norms()[i].into());
        for j in 0..n {
            entries.push(&inv * &Rational::from_integer(m.entry(i, j).into()));
        }
    }
    let matrix = CycloMatrix::from_entries(n, conductor, entries)?;
    Ok(NormalizedS {
        n,
        conductor,
        matrix,
    })
}

/// Diagonal T-matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TMatrix {
    pub entries: Vec<ExactNumber>,
    /// Least common multiple of the entry orders, when every entry is a root of unity.
    pub finite_order: Option<u64>,
}

impl TMatrix {
    pub fn new(entries: Vec<ExactNumber>) -> Result<Self> {
        let mut order = Some(1u64);
        for e in &entries {
            order = match (order, e.multiplicative_order()?) {
                (Some(a), Some(b)) => Some(a.lcm(&b)),
                _ => None,
            };
        }
        Ok(TMatrix {
            entries,
            finite_order: order,
        })
    }

    /// `diag(z(order)^e_1, ...)`.
    pub fn from_exponents(order: u64, exps: &[u64]) -> Result<Self> {
        let entries = exps
            .iter()
            .map(|&e| Cyclotomic::zeta_pow(order, e as i64).map(|z| ExactNumber::from(z.normalized())))
            .collect::<Result<_>>()?;
        Self::new(entries)
    }

    pub fn from_cyclotomics(entries: Vec<Cyclotomic>) -> Result<Self> {
        Self::new(entries.into_iter().map(ExactNumber::from).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn cyclotomic_entries(&self) -> Result<Vec<Cyclotomic>> {
        self.entries.iter().map(|e| e.to_cyclotomic()).collect()
    }
}

impl<'de> Deserialize<'de> for TMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Object { entries: Vec<ExactNumber> },
            List(Vec<ExactNumber>),
        }
        let entries = match Repr::deserialize(d)? {
            Repr::Object { entries } | Repr::List(entries) => entries,
        };
        TMatrix::new(entries).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularVerdict {
    pub symmetric: bool,
    pub unitary: bool,
    pub first_column_positive: bool,
    /// `S^2 = (ST)^3`.
    pub modular_equation: bool,
    pub finite_order: Option<u64>,
    pub failures: Vec<String>,
}

impl ModularVerdict {
    /// Every axiom holds except possibly finiteness of `T`.
    pub fn integral_modular(&self) -> bool {
        self.symmetric && self.unitary && self.first_column_positive && self.modular_equation
    }

    /// All axioms hold and `T` has finite order.
    pub fn is_modular_datum(&self) -> bool {
        self.integral_modular() && self.finite_order.is_some()
    }
}

fn session_conductor(s: &NormalizedS, t: &[Cyclotomic]) -> Result<u64> {
    let c = t.iter().fold(s.conductor, |c, x| c.lcm(&x.normalized().conductor()));
    if c > MAX_SESSION_CONDUCTOR {
        return Err(Error::InvalidArgument(format!(
            "common conductor {c} exceeds {MAX_SESSION_CONDUCTOR}"
        )));
    }
    Ok(c)
}

/// The common conductor of `S` and `T`, with the entries of `T` embedded there.
fn session_t(s: &NormalizedS, t: &TMatrix) -> Result<(u64, Vec<Cyclotomic>)> {
    let tc = t.cyclotomic_entries()?;
    let c = session_conductor(s, &tc)?;
    let tc = tc.iter().map(|x| x.normalized().embed(c)).collect::<Result<_>>()?;
    Ok((c, tc))
}

pub fn verify_modular(s: &NormalizedS, t: &TMatrix) -> Result<ModularVerdict> {
    let n = s.n;
    if t.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: t.len(),
        });
    }
    let (c, tc) = session_t(s, t)?;
    let sm = s.matrix.embed(c)?;
    let mut failures = Vec::new();
    let symmetric = (0..n).all(|i| (0..n).all(|j| sm.get(i, j) == sm.get(j, i)));
    if !symmetric {
        failures.push("S is not symmetric".to_string());
    }
    let unitary = sm.mul(&sm.conj_transpose()).is_identity();
    if !unitary {
        failures.push("S is not unitary".to_string());
    }
    let first_column_positive = (0..n).all(|i| {
        let x = sm.get(i, 0);
        let (re, _) = x.to_complex_f64();
        *x == x.conj() && (x * x).to_rational().is_some_and(|q| q.is_positive()) && re > 0.0
    });
    if !first_column_positive {
        failures.push("first column of S is not positive".to_string());
    }
    let modular_equation = modular_equation_holds(&sm, &tc);
    if !modular_equation {
        failures.push("S^2 != (ST)^3".to_string());
    }
    if t.finite_order.is_none() {
        failures.push("T has infinite order".to_string());
    }
    Ok(ModularVerdict {
        symmetric,
        unitary,
        first_column_positive,
        modular_equation,
        finite_order: t.finite_order,
        failures,
    })
}

fn modular_equation_holds(s: &CycloMatrix, t: &[Cyclotomic]) -> bool {
    let st = s.mul_diag(t);
    let st2 = st.mul(&st);
    st2.mul(&st) == s.mul(s)
}

/// Whether `S^2 = (ST)^3` for the given diagonal.
pub fn satisfies_modular_equation(s: &NormalizedS, t: &TMatrix) -> Result<bool> {
    let (c, tc) = session_t(s, t)?;
    Ok(modular_equation_holds(&s.matrix.embed(c)?, &tc))
}

/// One equation `t_i t_j g_j sum_k s_ik s_jk t_k = s_ij sqrt(d_1)`.
struct TEquation {
    i: usize,
    j: usize,
    scale: f64,
    rhs: f64,
    terms: Vec<(usize, f64)>,
    vars: Vec<usize>,
}

struct TSolver {
    n: usize,
    order: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
    eqs: Vec<TEquation>,
    /// Equations involving each variable.
    by_var: Vec<Vec<usize>>,
}

impl TSolver {
    fn new(m: &IntegralFourierMatrix, order: usize) -> Self {
        let n = m.n();
        let w = (m.size() as f64).sqrt();
        let g = m.degrees();
        let mut eqs = Vec::new();
        for i in 0..n {
            for j in i..n {
                let terms: Vec<(usize, f64)> = (0..n)
                    .filter_map(|k| {
                        let c = m.entry(i, k) * m.entry(j, k);
                        (c != 0).then_some((k, c as f64))
                    })
                    .collect();
                let mut vars: Vec<usize> = terms.iter().map(|&(k, _)| k).collect();
                vars.extend([i, j]);
                vars.sort_unstable();
                vars.dedup();
                eqs.push(TEquation {
                    i,
                    j,
                    scale: g[j] as f64,
                    rhs: m.entry(i, j) as f64 * w,
                    terms,
                    vars,
                });
            }
        }
        let mut by_var = vec![Vec::new(); n];
        for (e, eq) in eqs.iter().enumerate() {
            for &v in &eq.vars {
                by_var[v].push(e);
            }
        }
        let ang = |e: usize| 2.0 * std::f64::consts::PI * e as f64 / order as f64;
        TSolver {
            n,
            order,
            cos: (0..order).map(|e| ang(e).cos()).collect(),
            sin: (0..order).map(|e| ang(e).sin()).collect(),
            eqs,
            by_var,
        }
    }

    fn holds(&self, eq: &TEquation, asg: &[Option<usize>]) -> bool {
        let (mut re, mut im) = (0.0, 0.0);
        let mut mag = 0.0;
        for &(k, c) in &eq.terms {
            let e = asg[k].expect("assigned");
            re += c * self.cos[e];
            im += c * self.sin[e];
            mag += c.abs();
        }
        let p = (asg[eq.i].expect("assigned") + asg[eq.j].expect("assigned")) % self.order;
        let (pr, pi) = (self.cos[p], self.sin[p]);
        let lr = eq.scale * (re * pr - im * pi) - eq.rhs;
        let li = eq.scale * (re * pi + im * pr);
        let tol = 1e-7 * (1.0 + eq.scale * mag + eq.rhs.abs());
        lr.abs() <= tol && li.abs() <= tol
    }

    fn search(&self, asg: &mut Vec<Option<usize>>, dom: Vec<Vec<bool>>, out: &mut Vec<Vec<usize>>) {
        let pick = (0..self.n)
            .filter(|&v| asg[v].is_none())
            .min_by_key(|&v| (dom[v].iter().filter(|&&b| b).count(), usize::MAX - self.by_var[v].len()));
        let Some(v) = pick else {
            out.push(asg.iter().map(|x| x.expect("complete")).collect());
            return;
        };
        for val in 0..self.order {
            if !dom[v][val] {
                continue;
            }
            asg[v] = Some(val);
            if let Some(d) = self.propagate(v, asg, &dom) {
                self.search(asg, d, out);
            }
            asg[v] = None;
        }
    }

    /// Checks completed equations and filters the domain of any last free variable.
    fn propagate(&self, v: usize, asg: &mut [Option<usize>], dom: &[Vec<bool>]) -> Option<Vec<Vec<bool>>> {
        let mut dom = dom.to_vec();
        for &e in &self.by_var[v] {
            let eq = &self.eqs[e];
            let free: Vec<usize> = eq.vars.iter().copied().filter(|&u| asg[u].is_none()).collect();
            match free.len() {
                0 => {
                    if !self.holds(eq, asg) {
                        return None;
                    }
                }
                1 => {
                    let u = free[0];
                    let mut any = false;
                    for val in 0..self.order {
                        if !dom[u][val] {
                            continue;
                        }
                        asg[u] = Some(val);
                        let ok = self.holds(eq, asg);
                        asg[u] = None;
                        dom[u][val] = ok;
                        any |= ok;
                    }
                    if !any {
                        return None;
                    }
                }
                _ => {}
            }
        }
        Some(dom)
    }
}

/// All diagonal `T` whose entries are roots of unity of order dividing `max_order` and
/// which satisfy `S^2 = (ST)^3`. Candidates are pruned numerically and verified exactly.
pub fn solve_t(m: &IntegralFourierMatrix, max_order: u64) -> Result<Vec<TMatrix>> {
    if max_order == 0 || max_order > MAX_T_ORDER {
        return Err(Error::InvalidArgument(format!(
            "max order must lie in 1..={MAX_T_ORDER}"
        )));
    }
    let order = max_order as usize;
    let solver = TSolver::new(m, order);
    let n = m.n();
    let root_dom = vec![vec![true; order]; n];
    // Split on the value of t_1.
    let mut found: Vec<Vec<usize>> = (0..order)
        .into_par_iter()
        .flat_map_iter(|val| {
            let mut asg = vec![None; n];
            asg[0] = Some(val);
            let mut out = Vec::new();
            if let Some(d) = solver.propagate(0, &mut asg, &root_dom) {
                solver.search(&mut asg, d, &mut out);
            }
            out
        })
        .collect();
    found.sort();
    found.dedup();
    let s = normalize(m)?;
    let verified: Vec<Option<TMatrix>> = found
        .par_iter()
        .map(|exps| {
            let exps: Vec<u64> = exps.iter().map(|&e| e as u64).collect();
            let t = TMatrix::from_exponents(max_order, &exps)?;
            Ok(satisfies_modular_equation(&s, &t)?.then_some(t))
        })
        .collect::<Result<_>>()?;
    Ok(verified.into_iter().flatten().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupOrder {
    Finite(u64),
    ExceedsCap(u64),
    /// Some diagonal entry of `T` is not a root of unity.
    Infinite,
}

/// Order of the matrix group generated by `S` and `T`, by closure up to `cap` elements.
pub fn group_order(s: &NormalizedS, t: &TMatrix, cap: u64) -> Result<GroupOrder> {
    if t.finite_order.is_none() {
        return Ok(GroupOrder::Infinite);
    }
    if t.len() != s.n {
        return Err(Error::DimensionMismatch {
            expected: s.n,
            got: t.len(),
        });
    }
    let (c, tc) = session_t(s, t)?;
    let sm = s.matrix.embed(c)?;
    if !modular_equation_holds(&sm, &tc) {
        return Err(Error::Precondition("S^2 != (ST)^3".into()));
    }
    let id = CycloMatrix::identity(s.n, c)?;
    let mut seen: HashSet<Vec<Rational>> = HashSet::new();
    seen.insert(id.key());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let next: Vec<CycloMatrix> = frontier
            .par_iter()
            .flat_map_iter(|x| [x.mul(&sm), x.mul_diag(&tc)])
            .collect();
        frontier = Vec::new();
        for y in next {
            if seen.insert(y.key()) {
                if seen.len() as u64 > cap {
                    return Ok(GroupOrder::ExceedsCap(cap));
                }
                frontier.push(y);
            }
        }
    }
    Ok(GroupOrder::Finite(seen.len() as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceParams {
    pub k: u32,
    pub m: u32,
    pub g: u64,
    pub q: u64,
    pub a: u64,
    pub dimension: u64,
}

impl SequenceParams {
    pub fn new(k: u32) -> Result<Self> {
        if k > 12 {
            return Err(Error::InvalidArgument("k too large".into()));
        }
        let m = 2 * k + 1;
        let a = 1u64 << m;
        Ok(SequenceParams {
            k,
            m,
            g: 1 << k,
            q: 2 * (a - 1),
            a,
            dimension: 2 * (3 * (1u64 << (2 * k)) - 1),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SequenceDatum {
    pub params: SequenceParams,
    pub matrix: IntegralFourierMatrix,
    pub t: TMatrix,
    pub tensor: FusionTensor,
    pub verdict: ModularVerdict,
}

/// Entry `(x, y)` of the `m`-fold tensor power of the character table of `Z/2`.
fn sign_table(x: u64, y: u64) -> i64 {
    if (x & y).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The rational datum with `a = 2^(2k+1)` unit degrees and `2(a - 1)` degrees `2^k`.
pub fn sequence_datum(k: u32) -> Result<SequenceDatum> {
    let p = SequenceParams::new(k)?;
    let (a, g) = (p.a as usize, p.g as i64);
    let n = p.dimension as usize;
    let mut rows = vec![vec![0i64; n]; n];
    // column index of pair l (1..a), copy c (0, 1)
    let pair = |l: usize, c: usize| a + 2 * (l - 1) + c;
    for i in 0..a {
        for j in 0..a {
            rows[i][j] = 1;
        }
        for l in 1..a {
            let v = g * sign_table(l as u64, i as u64);
            rows[i][pair(l, 0)] = v;
            rows[i][pair(l, 1)] = v;
        }
    }
    for l in 1..a {
        for c in 0..2 {
            let r = pair(l, c);
            for i in 0..a {
                rows[r][i] = sign_table(l as u64, i as u64);
            }
            rows[r][pair(l, c)] = g;
            rows[r][pair(l, 1 - c)] = -g;
        }
    }
    let matrix = validate(&rows).map_err(Error::from)?;
    let mut t = vec![Cyclotomic::one(); n];
    for l in 1..a {
        t[pair(l, 1)] = Cyclotomic::from_int(-1);
    }
    let t = TMatrix::from_cyclotomics(t)?;
    let tensor = structure_constants(&matrix)?;
    let verdict = verify_modular(&normalize(&matrix)?, &t)?;
    Ok(SequenceDatum {
        params: p,
        matrix,
        t,
        tensor,
        verdict,
    })
}

/// Class-equation obstruction to the sequence datum coming from a quantum double.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotQdVerdict {
    pub k: u32,
    pub group_order: u64,
    pub center_size: u64,
    pub class_count: u64,
    /// `|Z| + (classes outside Z) * |G| / 2^(k+1)`.
    pub class_equation_sum: u64,
    pub no_group_exists: bool,
}

pub fn sequence_not_qd(k: u32) -> Result<NotQdVerdict> {
    if k <= 1 {
        return Err(Error::InvalidArgument("the obstruction needs k > 1".into()));
    }
    let p = SequenceParams::new(k)?;
    let order = p.a;
    let center = 2;
    let classes = (1u64 << (2 * k)) + 1;
    let centralizer = order / (1 << (k + 1));
    let sum = center + (classes - center) * centralizer;
    debug_assert_eq!(sum, 2 + (1 << (3 * k)) - (1 << k));
    Ok(NotQdVerdict {
        k,
        group_order: order,
        center_size: center,
        class_count: classes,
        class_equation_sum: sum,
        no_group_exists: sum != order,
    })
}

/// Integer `sqrt(d_1)` helper used by callers that need `w` as a cyclotomic number.
pub fn size_root_cyclotomic(m: &IntegralFourierMatrix) -> Result<Cyclotomic> {
    Cyclotomic::sqrt_int(m.size() as i64)
}

/// Whether every entry of the normalized S-matrix is rational.
pub fn is_rational(s: &NormalizedS) -> bool {
    (0..s.n).all(|i| (0..s.n).all(|j| s.entry(i, j).is_rational()))
}

/// `T -> conj(T)`.
pub fn conjugate_t(t: &TMatrix) -> Result<TMatrix> {
    TMatrix::from_cyclotomics(t.cyclotomic_entries()?.iter().map(|x| x.conj()).collect())
}
