//! Finite permutation groups with Cayley tables, conjugacy classes, centralizers,
//! subdirect products and exact character tables.

use std::fmt;

use num_integer::Integer;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::exact::{prime_factors, Cyclotomic, Rational};

/// Largest group the closure will build.
pub const MAX_GROUP_ORDER: usize = 100_000;
/// Largest group for which a full multiplication table is stored.
pub const MAX_TABLE_ORDER: usize = 4096;
/// Largest group for which character tables are computed.
pub const MAX_CHARACTER_ORDER: usize = 10_000;

/// Images of `0..degree`, composed left to right: `(a * b)(x) = b(a(x))`.
pub type Perm = Vec<u32>;

fn compose(a: &[u32], b: &[u32]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn invert(a: &[u32]) -> Perm {
    let mut r = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        r[x as usize] = i as u32;
    }
    r
}

/// Parses cycle notation with 1-based points, e.g. `(1 2 3)(4 5)` or `()`.
pub fn parse_perm(text: &str, degree: usize) -> Result<Perm> {
    let mut p: Perm = (0..degree as u32).collect();
    let t = text.trim();
    if t.is_empty() {
        return Ok(p);
    }
    let bad = || Error::Parse(format!("bad permutation {text:?}"));
    let mut rest = t;
    while !rest.is_empty() {
        let rest2 = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = rest2.find(')').ok_or_else(bad)?;
        let pts: Vec<usize> = rest2[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if pts.iter().any(|&x| x == 0 || x > degree) {
            return Err(Error::Parse(format!("point out of range in {text:?}")));
        }
        for w in 0..pts.len() {
            p[pts[w] - 1] = (pts[(w + 1) % pts.len()] - 1) as u32;
        }
        rest = rest2[close + 1..].trim_start();
    }
    if invert(&p).len() != degree || {
        let mut s = p.clone();
        s.sort_unstable();
        s.dedup();
        s.len() != degree
    } {
        return Err(Error::Parse(format!("{text:?} is not a permutation")));
    }
    Ok(p)
}

/// Largest point moved by a cycle-notation string.
pub fn perm_text_degree(text: &str) -> usize {
    text.split(|c: char| !c.is_ascii_digit())
        .filter_map(|s| s.parse::<usize>().ok())
        .max()
        .unwrap_or(0)
}

pub fn format_perm(p: &[u32]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] as usize == s {
            continue;
        }
        out.push('(');
        let mut x = s;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&(x + 1).to_string());
            x = p[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// A finite group of permutations; element 0 is the identity.
#[derive(Clone)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: FxHashMap<Perm, u32>,
    table: Option<Vec<u32>>,
    inverse: Vec<u32>,
    gens: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .finish()
    }
}

/// Closure of the generators: elements numbered breadth-first from the identity, with
/// generators applied in input order.
pub fn group_from_generators(gens: &[Perm], degree: usize) -> Result<FiniteGroup> {
    if gens.iter().any(|g| g.len() != degree) {
        return Err(Error::InvalidArgument("generators act on different domains".into()));
    }
    let id: Perm = (0..degree as u32).collect();
    let mut elements = vec![id.clone()];
    let mut index = FxHashMap::default();
    index.insert(id, 0u32);
    let mut head = 0;
    while head < elements.len() {
        for g in gens {
            let y = compose(&elements[head], g);
            if !index.contains_key(&y) {
                if elements.len() >= MAX_GROUP_ORDER {
                    return Err(Error::CapExceeded { cap: MAX_GROUP_ORDER });
                }
                index.insert(y.clone(), elements.len() as u32);
                elements.push(y);
            }
        }
        head += 1;
    }
    let gen_idx = gens.iter().map(|g| index[g]).filter(|&i| i != 0).collect();
    Ok(FiniteGroup::assemble(degree, elements, index, gen_idx))
}

impl FiniteGroup {
    fn assemble(degree: usize, elements: Vec<Perm>, index: FxHashMap<Perm, u32>, gens: Vec<u32>) -> Self {
        let inverse = elements.iter().map(|p| index[&invert(p)]).collect();
        let n = elements.len();
        let table = (n <= MAX_TABLE_ORDER).then(|| {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = index[&compose(&elements[a], &elements[b])];
                }
            }
            t
        });
        FiniteGroup {
            degree,
            elements,
            index,
            table,
            inverse,
            gens,
        }
    }

    /// Group on the given elements (which must be closed under products); a generating set is
    /// chosen greedily.
    pub fn from_elements(degree: usize, mut elements: Vec<Perm>) -> Result<Self> {
        let id: Perm = (0..degree as u32).collect();
        if let Some(pos) = elements.iter().position(|p| *p == id) {
            elements.swap(0, pos);
        } else {
            return Err(Error::InvalidArgument("element list lacks the identity".into()));
        }
        let mut index = FxHashMap::default();
        for (i, p) in elements.iter().enumerate() {
            if index.insert(p.clone(), i as u32).is_some() {
                return Err(Error::InvalidArgument("repeated element".into()));
            }
        }
        for a in &elements {
            for b in elements.iter().take(8) {
                if !index.contains_key(&compose(a, b)) {
                    return Err(Error::InvalidArgument("element list is not closed".into()));
                }
            }
        }
        let mut inside = vec![false; elements.len()];
        inside[0] = true;
        let mut gens: Vec<u32> = Vec::new();
        let mut members = vec![0u32];
        for x in 0..elements.len() {
            if inside[x] {
                continue;
            }
            gens.push(x as u32);
            // re-close
            members = vec![0];
            inside.iter_mut().for_each(|b| *b = false);
            inside[0] = true;
            let mut head = 0;
            while head < members.len() {
                for &g in &gens {
                    let y = index[&compose(&elements[members[head] as usize], &elements[g as usize])];
                    if !inside[y as usize] {
                        inside[y as usize] = true;
                        members.push(y);
                    }
                }
                head += 1;
            }
        }
        if members.len() != elements.len() {
            return Err(Error::InvalidArgument("element list is not a group".into()));
        }
        Ok(Self::assemble(degree, elements, index, gens))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &[u32]) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn generators(&self) -> Vec<usize> {
        self.gens.iter().map(|&g| g as usize).collect()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&compose(&self.elements[a], &self.elements[b])] as usize,
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g^-1 x g`.
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order()).fold(1u64, |e, a| e.lcm(&self.element_order(a)))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().all(|&a| self.gens.iter().all(|&b| self.commute(a as usize, b as usize)))
    }

    /// Checks associativity (all triples up to order 200, random triples beyond) and the
    /// identity and inverse laws.
    pub fn check_axioms(&self) -> bool {
        let n = self.order();
        let ok_units = (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a && self.mul(a, self.inv(a)) == 0);
        if !ok_units {
            return false;
        }
        if n <= 200 {
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
        } else {
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % n as u64) as usize
            };
            (0..20_000).all(|_| {
                let (a, b, c) = (next(), next(), next());
                self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
            })
        }
    }

    /// Subgroup generated by the given elements, as a list of element indices.
    pub fn subgroup_elements(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut members = vec![0];
        let mut head = 0;
        while head < members.len() {
            for &g in gens {
                let y = self.mul(members[head], g);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                }
            }
            head += 1;
        }
        members
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let mut inside = vec![false; self.order()];
        for &x in sub {
            inside[x] = true;
        }
        sub.iter().all(|&x| self.gens.iter().all(|&g| inside[self.conjugate(x, g as usize)]))
    }

    /// The subgroup on the given element indices as a group of its own.
    pub fn subgroup(&self, members: &[usize]) -> Result<FiniteGroup> {
        FiniteGroup::from_elements(self.degree, members.iter().map(|&i| self.elements[i].clone()).collect())
    }

    pub fn centralizer_elements(&self, a: usize) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.commute(a, g)).collect()
    }

    pub fn centralizer(&self, a: usize) -> Result<FiniteGroup> {
        self.subgroup(&self.centralizer_elements(a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub elements: Vec<usize>,
    pub centralizer_order: usize,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Clone, Debug)]
pub struct ConjugacyData {
    /// Ordered by least element index; the identity class comes first.
    pub classes: Vec<ConjugacyClass>,
    pub class_of: Vec<usize>,
}

pub fn conjugacy_data(g: &FiniteGroup) -> ConjugacyData {
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[x] = id;
        let mut members = vec![x];
        let mut head = 0;
        while head < members.len() {
            for &s in &g.gens {
                let y = g.conjugate(members[head], s as usize);
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    members.push(y);
                }
            }
            head += 1;
        }
        members.sort_unstable();
        classes.push(ConjugacyClass {
            representative: x,
            centralizer_order: n / members.len(),
            elements: members,
        });
    }
    ConjugacyData { classes, class_of }
}

/// True iff `x` is conjugate to `x^m` for every `m` coprime to the group order.
pub fn class_is_rational(g: &FiniteGroup, x: usize) -> bool {
    let data = conjugacy_data(g);
    class_is_rational_with(g, &data, x)
}

fn class_is_rational_with(g: &FiniteGroup, data: &ConjugacyData, x: usize) -> bool {
    let o = g.element_order(x);
    (1..o).filter(|m| m.gcd(&o) == 1).all(|m| data.class_of[g.pow(x, m as i64)] == data.class_of[x])
}

/// `{(h_1, ..., h_r) in H^r : h_i N = h_j N}` acting on `r * degree` points.
pub fn subdirect_product(h: &FiniteGroup, normal_gens: &[usize], r: usize) -> Result<FiniteGroup> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let n_elems = h.subgroup_elements(normal_gens);
    if !h.is_normal(&n_elems) {
        return Err(Error::InvalidArgument("subgroup is not normal".into()));
    }
    let order = h.order() * n_elems.len().pow(r as u32 - 1);
    if order > MAX_GROUP_ORDER {
        return Err(Error::CapExceeded { cap: MAX_GROUP_ORDER });
    }
    let d = h.degree();
    let embed = |parts: &[usize]| -> Perm {
        let mut p = Vec::with_capacity(r * d);
        for (slot, &e) in parts.iter().enumerate() {
            p.extend(h.element(e).iter().map(|&x| x + (slot * d) as u32));
        }
        p
    };
    let mut gens = Vec::new();
    for &s in &h.gens {
        gens.push(embed(&vec![s as usize; r]));
    }
    for slot in 1..r {
        for &x in normal_gens {
            let mut parts = vec![0; r];
            parts[slot] = x;
            gens.push(embed(&parts));
        }
    }
    let g = group_from_generators(&gens, r * d)?;
    debug_assert_eq!(g.order(), order);
    Ok(g)
}

pub fn symmetric_group(n: usize) -> Result<FiniteGroup> {
    if n <= 1 {
        return group_from_generators(&[], n.max(1));
    }
    let t = parse_perm("(1 2)", n)?;
    let cyc = parse_perm(&format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ")), n)?;
    group_from_generators(&[t, cyc], n)
}

pub fn cyclic_group(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclic group of order 0".into()));
    }
    if n == 1 {
        return group_from_generators(&[], 1);
    }
    let cyc = parse_perm(&format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ")), n)?;
    group_from_generators(&[cyc], n)
}

pub fn dihedral_group_8() -> Result<FiniteGroup> {
    group_from_generators(&[parse_perm("(1 2 3 4)", 4)?, parse_perm("(1 3)", 4)?], 4)
}

/// The quaternion group in its regular representation.
pub fn quaternion_group() -> Result<FiniteGroup> {
    // elements (sign, unit) with units 1, i, j, k encoded as 2*unit + sign
    let mul_unit = |a: usize, b: usize| -> (usize, usize) {
        // returns (sign flip, unit)
        const T: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        T[a][b]
    };
    let mul = |x: usize, y: usize| -> usize {
        let (s, u) = mul_unit(x / 2, y / 2);
        2 * u + ((x % 2) ^ (y % 2) ^ s)
    };
    // right multiplication by i and j
    let right = |y: usize| -> Perm { (0..8).map(|x| mul(x, y) as u32).collect() };
    group_from_generators(&[right(2), right(4)], 8)
}

/// Built-in groups: `S3`, `S4`, `D4`, `Q8`, `Z<n>`, `S<n>`.
pub fn builtin_group(name: &str) -> Result<FiniteGroup> {
    let upper = name.trim().to_ascii_uppercase();
    match upper.as_str() {
        "D4" | "D8" => dihedral_group_8(),
        "Q8" => quaternion_group(),
        _ => {
            if let Some(rest) = upper.strip_prefix('Z').or_else(|| upper.strip_prefix('C')) {
                let n = rest.parse().map_err(|_| Error::Parse(format!("unknown group {name:?}")))?;
                return cyclic_group(n);
            }
            if let Some(rest) = upper.strip_prefix('S') {
                let n: usize = rest.parse().map_err(|_| Error::Parse(format!("unknown group {name:?}")))?;
                if n > 8 {
                    return Err(Error::CapExceeded { cap: MAX_GROUP_ORDER });
                }
                return symmetric_group(n);
            }
            Err(Error::Parse(format!("unknown group {name:?}")))
        }
    }
}

/// Generators in cycle notation, one per line (blank lines and `#` comments ignored).
pub fn parse_generators(text: &str) -> Result<FiniteGroup> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    let degree = lines.iter().map(|l| perm_text_degree(l)).max().unwrap_or(1).max(1);
    let gens = lines.iter().map(|l| parse_perm(l, degree)).collect::<Result<Vec<_>>>()?;
    group_from_generators(&gens, degree)
}

/// Exact character table.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    /// `(representative, class size)` in conjugacy order.
    pub classes: Vec<(usize, usize)>,
    /// `characters[i][j] = chi_i(class j)`; the trivial character comes first.
    pub characters: Vec<Vec<Cyclotomic>>,
    pub degrees: Vec<u64>,
}

impl CharacterTable {
    /// Row and column orthogonality, checked exactly.
    pub fn is_orthogonal(&self, group_order: usize) -> bool {
        let k = self.classes.len();
        let go = Cyclotomic::from_int(group_order as i64);
        let zero = Cyclotomic::zero();
        for a in 0..k {
            for b in 0..k {
                let mut acc = Cyclotomic::zero();
                for j in 0..k {
                    let t = &self.characters[a][j] * &self.characters[b][j].conj();
                    acc += &(&t * &Rational::from_integer((self.classes[j].1 as i64).into()));
                }
                if acc != if a == b { go.clone() } else { zero.clone() } {
                    return false;
                }
                let mut col = Cyclotomic::zero();
                for i in 0..k {
                    col += &(&self.characters[i][a] * &self.characters[i][b].conj());
                }
                let want = if a == b {
                    Cyclotomic::from_int((group_order / self.classes[a].1) as i64)
                } else {
                    zero.clone()
                };
                if col != want {
                    return false;
                }
            }
        }
        self.degrees.iter().map(|d| d * d).sum::<u64>() == group_order as u64
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn primitive_root(p: u64) -> u64 {
    let fs = prime_factors(p - 1);
    (2..p)
        .find(|&g| fs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("prime has a primitive root")
}

/// Basis of the null space of `m` (rows x cols) over `F_p`, as column vectors.
fn null_space(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let iv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * iv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p - f * m[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[i][f]) % p;
            }
            v
        })
        .collect()
}

/// Exact character table by simultaneous eigenvectors of the class matrices modulo a prime.
pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable> {
    let n = g.order();
    if n > MAX_CHARACTER_ORDER {
        return Err(Error::CapExceeded { cap: MAX_CHARACTER_ORDER });
    }
    let data = conjugacy_data(g);
    let k = data.classes.len();
    let e = g.exponent();
    let bound = 2.0 * (n as f64).sqrt();
    let p = (1..)
        .map(|t| t * e + 1)
        .find(|&p| p as f64 > bound && is_prime(p))
        .ok_or_else(|| Error::Internal("no Dixon prime".into()))?;
    // a[i][j][l] = #{x in C_i : x^-1 z_l in C_j}, z_l the representative of C_l
    let mut a = vec![vec![vec![0u64; k]; k]; k];
    for (l, cl) in data.classes.iter().enumerate() {
        let z = cl.representative;
        for x in 0..n {
            let i = data.class_of[x];
            let j = data.class_of[g.mul(g.inv(x), z)];
            a[i][j][l] += 1;
        }
    }
    // common eigenvectors of M_i with (M_i)_{jl} = a[i][j][l]
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k)
        .map(|c| {
            let mut v = vec![0u64; k];
            v[c] = 1;
            v
        })
        .collect()];
    for i in 1..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let dim = basis.len();
            let apply = |v: &[u64]| -> Vec<u64> {
                (0..k)
                    .map(|j| (0..k).map(|l| a[i][j][l] % p * v[l] % p).sum::<u64>() % p)
                    .collect()
            };
            let images: Vec<Vec<u64>> = basis.iter().map(|v| apply(v)).collect();
            let mut found = 0;
            for lambda in 0..p {
                // solve sum_t c_t (M v_t - lambda v_t) = 0
                let m: Vec<Vec<u64>> = (0..k)
                    .map(|row| {
                        (0..dim)
                            .map(|t| (images[t][row] + p - lambda * basis[t][row] % p) % p)
                            .collect()
                    })
                    .collect();
                let ns = null_space(m, dim, p);
                if ns.is_empty() {
                    continue;
                }
                found += ns.len();
                let sub: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|c| {
                        (0..k)
                            .map(|row| (0..dim).map(|t| c[t] * basis[t][row] % p).sum::<u64>() % p)
                            .collect()
                    })
                    .collect();
                next.push(sub);
                if found == dim {
                    break;
                }
            }
            if found != dim {
                return Err(Error::Internal("class matrix not diagonalizable mod p".into()));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Internal("eigenspaces did not split".into()));
    }
    let inv_class: Vec<usize> = data.classes.iter().map(|c| data.class_of[g.inv(c.representative)]).collect();
    let root = primitive_root(p);
    let z = pow_mod(root, (p - 1) / e, p);
    let mut chars: Vec<(u64, Vec<Cyclotomic>)> = Vec::with_capacity(k);
    for s in &spaces {
        let v = &s[0];
        let scale = inv_mod(v[0], p);
        let omega: Vec<u64> = v.iter().map(|x| x * scale % p).collect();
        let mut sum = 0u64;
        for j in 0..k {
            let size = data.classes[j].size() as u64;
            sum = (sum + omega[j] * omega[inv_class[j]] % p * inv_mod(size % p, p)) % p;
        }
        let deg_sq = (n as u64 % p) * inv_mod(sum, p) % p;
        let deg = (1..=((n as f64).sqrt() as u64 + 1))
            .find(|d| d * d % p == deg_sq)
            .ok_or_else(|| Error::Internal("no character degree".into()))?;
        let modp: Vec<u64> = (0..k)
            .map(|j| omega[j] * deg % p * inv_mod(data.classes[j].size() as u64 % p, p) % p)
            .collect();
        let mut values = Vec::with_capacity(k);
        for cl in &data.classes {
            let x = cl.representative;
            let o = g.element_order(x);
            let zo = pow_mod(z, e / o, p);
            let powers: Vec<u64> = (0..o).map(|t| modp[data.class_of[g.pow(x, t as i64)]]).collect();
            let inv_o = inv_mod(o % p, p);
            let mut terms = Vec::new();
            for l in 0..o {
                let mut m = 0u64;
                for (t, &val) in powers.iter().enumerate() {
                    let ex = (l * t as u64) % o;
                    m = (m + val * pow_mod(zo, (o - ex) % o, p)) % p;
                }
                let m = m * inv_o % p;
                if m > deg {
                    return Err(Error::Internal("eigenvalue multiplicity out of range".into()));
                }
                if m > 0 {
                    terms.push((l as i64, Rational::from_integer((m as i64).into())));
                }
            }
            values.push(Cyclotomic::from_terms(o, terms)?.normalized());
        }
        chars.push((deg, values));
    }
    chars.sort_by(|(da, va), (db, vb)| {
        let trivial_a = va.iter().all(|x| x.is_one());
        let trivial_b = vb.iter().all(|x| x.is_one());
        trivial_b
            .cmp(&trivial_a)
            .then(da.cmp(db))
            .then_with(|| {
                va.iter()
                    .zip(vb)
                    .map(|(x, y)| x.cmp_canonical(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    let table = CharacterTable {
        classes: data.classes.iter().map(|c| (c.representative, c.size())).collect(),
        degrees: chars.iter().map(|c| c.0).collect(),
        characters: chars.into_iter().map(|c| c.1).collect(),
    };
    Ok(table)
}

/// Summary used by the command line.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GroupInfo {
    pub order: usize,
    pub exponent: u64,
    pub abelian: bool,
    pub class_sizes: Vec<usize>,
    pub centralizer_orders: Vec<usize>,
    pub representatives: Vec<String>,
    pub rational_classes: Vec<bool>,
}

pub fn group_info(g: &FiniteGroup) -> GroupInfo {
    let data = conjugacy_data(g);
    GroupInfo {
        order: g.order(),
        exponent: g.exponent(),
        abelian: g.is_abelian(),
        class_sizes: data.classes.iter().map(|c| c.size()).collect(),
        centralizer_orders: data.classes.iter().map(|c| c.centralizer_order).collect(),
        representatives: data.classes.iter().map(|c| format_perm(g.element(c.representative))).collect(),
        rational_classes: data.classes.iter().map(|c| class_is_rational_with(g, &data, c.representative)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation() {
        let s3 = group_from_generators(&[parse_perm("(1 2)", 3).unwrap(), parse_perm("(1 2 3)", 3).unwrap()], 3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(s3.check_axioms());
        assert_eq!(group_from_generators(&[], 3).unwrap().order(), 1);
        assert_eq!(dihedral_group_8().unwrap().order(), 8);
        let q8 = quaternion_group().unwrap();
        assert_eq!(q8.order(), 8);
        assert!(q8.check_axioms());
        assert_eq!(q8.exponent(), 4);
        assert!(!q8.is_abelian());
        assert_eq!(format_perm(&parse_perm("(1 3)(2 4)", 4).unwrap()), "(1 3)(2 4)");
        assert!(parse_perm("(1 5)", 4).is_err());
    }

    #[test]
    fn s3_classes() {
        let s3 = builtin_group("S3").unwrap();
        let d = conjugacy_data(&s3);
        let mut sizes: Vec<_> = d.classes.iter().map(|c| (c.size(), c.centralizer_order)).collect();
        sizes.sort();
        assert_eq!(sizes, vec![(1, 6), (2, 3), (3, 2)]);
        for c in &d.classes {
            assert!(class_is_rational(&s3, c.representative));
        }
        let z4 = builtin_group("Z4").unwrap();
        let gen = z4.generators()[0];
        assert!(!class_is_rational(&z4, gen));
    }

    #[test]
    fn subdirect_orders_and_classes() {
        let s3 = builtin_group("S3").unwrap();
        let rot = s3.index_of(&parse_perm("(1 2 3)", 3).unwrap()).unwrap();
        let g1 = subdirect_product(&s3, &[rot], 1).unwrap();
        assert_eq!(g1.order(), 6);
        for r in 1..=3 {
            let g = subdirect_product(&s3, &[rot], r).unwrap();
            assert_eq!(g.order(), 6 * 3usize.pow(r as u32 - 1));
            assert_eq!(conjugacy_data(&g).classes.len(), (3usize.pow(r as u32) + 3) / 2);
        }
        let d4 = dihedral_group_8().unwrap();
        let rot4 = d4.index_of(&parse_perm("(1 2 3 4)", 4).unwrap()).unwrap();
        for r in 1..=3u32 {
            let g = subdirect_product(&d4, &[rot4], r as usize).unwrap();
            assert_eq!(g.order(), 8 * 4usize.pow(r - 1));
            let want = (1usize << (r + 1)) + (1usize << (2 * r - 1)) - (1usize << (r - 1));
            assert_eq!(conjugacy_data(&g).classes.len(), want);
        }
        let refl = d4.index_of(&parse_perm("(1 3)", 4).unwrap()).unwrap();
        assert!(subdirect_product(&d4, &[refl], 2).is_err());
    }

    #[test]
    fn character_tables() {
        let z2 = builtin_group("Z2").unwrap();
        let t = character_table(&z2).unwrap();
        assert_eq!(t.characters[0], vec![Cyclotomic::one(), Cyclotomic::one()]);
        assert_eq!(t.characters[1], vec![Cyclotomic::one(), Cyclotomic::from_int(-1)]);
        let s3 = builtin_group("S3").unwrap();
        assert_eq!(character_table(&s3).unwrap().degrees, vec![1, 1, 2]);
        let q8 = quaternion_group().unwrap();
        let t = character_table(&q8).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 1, 2]);
        assert!(t.is_orthogonal(8));
        for name in ["Z5", "S4", "D4", "Z12"] {
            let g = builtin_group(name).unwrap();
            assert!(character_table(&g).unwrap().is_orthogonal(g.order()), "{name}");
        }
    }
}
