//! Named fixture matrices shipped with the crate, and comparison of enumeration output against them.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::congruence::{is_cmt, plus6, plus6_rational, tensor};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, ExactNumber, Rational};
use crate::fourier::{
    canonical_form, enumerate_fourier_with_stats, structure_constants, validate, EnumerateOptions,
    IntegralFourierMatrix,
};
use crate::groups::{parse_perm, perm_text_degree};
use crate::modular::{normalize, satisfies_modular_equation, TMatrix};

const BUILTIN: &str = include_str!("../data/catalog.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    /// Member of the complete list of classes up to dimension 12.
    Appendix,
    /// Stand-alone example matrix.
    Display,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseSpec {
    Matrix(Vec<Vec<i64>>),
    /// Rational input to the `+6` construction.
    Plus6(Vec<Vec<String>>),
    PlusSixOf(String),
    Tensor(Vec<String>),
    /// Another entry, to which this entry's permutations are applied.
    Entry(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogTags {
    pub cmt: bool,
    pub nonneg: bool,
    /// The stored `t` satisfies the modular equation.
    pub has_t: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: EntryKind,
    #[serde(with = "base_serde")]
    pub base: BaseSpec,
    /// Column permutation in 1-based cycle notation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<CatalogTags>,
    /// Diagonal of a known `T`-matrix, in exact text form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<String>>,
}

// `{"plus6_of": ...}` reads better in the data file than the derived `plus_six_of`.
mod base_serde {
    use super::BaseSpec;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(rename_all = "snake_case")]
    enum Wire {
        Matrix(Vec<Vec<i64>>),
        Plus6(Vec<Vec<String>>),
        #[serde(rename = "plus6_of")]
        PlusSixOf(String),
        Tensor(Vec<String>),
        Entry(String),
    }

    pub fn serialize<S: Serializer>(b: &BaseSpec, s: S) -> Result<S::Ok, S::Error> {
        let w = match b.clone() {
            BaseSpec::Matrix(m) => Wire::Matrix(m),
            BaseSpec::Plus6(m) => Wire::Plus6(m),
            BaseSpec::PlusSixOf(n) => Wire::PlusSixOf(n),
            BaseSpec::Tensor(v) => Wire::Tensor(v),
            BaseSpec::Entry(n) => Wire::Entry(n),
        };
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BaseSpec, D::Error> {
        Ok(match Wire::deserialize(d)? {
            Wire::Matrix(m) => BaseSpec::Matrix(m),
            Wire::Plus6(m) => BaseSpec::Plus6(m),
            Wire::PlusSixOf(n) => BaseSpec::PlusSixOf(n),
            Wire::Tensor(v) => BaseSpec::Tensor(v),
            Wire::Entry(n) => BaseSpec::Entry(n),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

/// Applies "column `j` moves to position `sigma(j)`".
fn placement(cycles: &str, n: usize) -> Result<Vec<usize>> {
    if perm_text_degree(cycles) > n {
        return Err(Error::InvalidArgument(format!("{cycles} moves points beyond {n}")));
    }
    let sigma = parse_perm(cycles, n)?;
    let mut perm = vec![0; n];
    for (j, &img) in sigma.iter().enumerate() {
        perm[img as usize] = j;
    }
    Ok(perm)
}

impl Catalog {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let c: Catalog = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut seen = std::collections::HashSet::new();
        for e in &c.entries {
            if !seen.insert(e.name.as_str()) {
                return Err(Error::Parse(format!("duplicate catalog name {}", e.name)));
            }
        }
        Ok(c)
    }

    /// The catalog embedded in the crate.
    pub fn builtin() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| Catalog::from_json_str(BUILTIN).expect("embedded catalog parses"))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownEntry(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    /// Fully materialized matrix of an entry.
    pub fn get(&self, name: &str) -> Result<IntegralFourierMatrix> {
        self.materialize(name, 0)
    }

    fn materialize(&self, name: &str, depth: usize) -> Result<IntegralFourierMatrix> {
        if depth > 16 {
            return Err(Error::Parse(format!("catalog reference cycle at {name}")));
        }
        let e = self.entry(name)?;
        let mut m = match &e.base {
            BaseSpec::Matrix(rows) => validate(rows)?,
            BaseSpec::Plus6(rows) => {
                let q: Vec<Vec<Rational>> = rows
                    .iter()
                    .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<_>>())
                    .collect::<Result<_>>()?;
                plus6_rational(&q)?
            }
            BaseSpec::PlusSixOf(other) => plus6(&self.materialize(other, depth + 1)?)?,
            BaseSpec::Tensor(parts) => {
                let mut acc = validate(&[vec![1]])?;
                for p in parts {
                    acc = tensor(&acc, &self.materialize(p, depth + 1)?)?;
                }
                acc
            }
            BaseSpec::Entry(other) => self.materialize(other, depth + 1)?,
        };
        if let Some(c) = &e.columns {
            m = m.permute_columns(&placement(c, m.n())?)?;
        }
        if let Some(r) = &e.rows {
            m = m.permute_rows(&placement(r, m.n())?)?;
        }
        Ok(m)
    }

    /// The stored `T`-matrix of an entry, if any.
    pub fn t_matrix(&self, name: &str) -> Result<Option<TMatrix>> {
        let e = self.entry(name)?;
        e.t.as_ref()
            .map(|t| {
                let vals = t.iter().map(|x| ExactNumber::parse(x)).collect::<Result<Vec<_>>>()?;
                TMatrix::new(vals)
            })
            .transpose()
    }

    /// Tags recomputed from the matrix: CMT status, nonnegative structure constants, and
    /// whether a stored `T` satisfies `S^2 = (ST)^3`.
    pub fn compute_tags(&self, name: &str) -> Result<CatalogTags> {
        let m = self.get(name)?;
        let has_t = match self.t_matrix(name)? {
            Some(t) => satisfies_modular_equation(&normalize(&m)?, &t)?,
            None => false,
        };
        Ok(CatalogTags {
            cmt: is_cmt(&m).is_cmt(),
            nonneg: structure_constants(&m)?.nonnegative,
            has_t,
        })
    }

    /// Entries whose stored tags disagree with recomputation, with both values.
    pub fn tag_mismatches(&self) -> Result<Vec<(String, Option<CatalogTags>, CatalogTags)>> {
        let mut out = Vec::new();
        for e in &self.entries {
            let computed = self.compute_tags(&e.name)?;
            if e.tags != Some(computed) {
                out.push((e.name.clone(), e.tags, computed));
            }
        }
        Ok(out)
    }

    /// Appendix entries of the given dimension, by name.
    pub fn appendix_of_dimension(&self, n: usize) -> Result<Vec<(String, IntegralFourierMatrix)>> {
        let mut out = Vec::new();
        for e in self.entries.iter().filter(|e| e.kind == EntryKind::Appendix) {
            let m = self.get(&e.name)?;
            if m.n() == n {
                out.push((e.name.clone(), m));
            }
        }
        Ok(out)
    }
}

pub fn catalog_get(name: &str) -> Result<IntegralFourierMatrix> {
    Catalog::builtin().get(name)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimensionComparison {
    pub n: usize,
    pub expected: usize,
    pub found: usize,
    /// Catalog names of the matched classes, in enumeration order.
    pub matched: Vec<String>,
    pub missing: Vec<String>,
    /// Enumerated canonical forms with no catalog counterpart.
    pub extra: Vec<Vec<Vec<i64>>>,
    /// Catalog entries of this dimension that share a class with an earlier entry.
    pub duplicate_entries: Vec<String>,
    pub nodes: u64,
}

impl DimensionComparison {
    pub fn exact(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.duplicate_entries.is_empty()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReproductionReport {
    pub dimensions: Vec<DimensionComparison>,
}

impl ReproductionReport {
    pub fn exact(&self) -> bool {
        self.dimensions.iter().all(|d| d.exact())
    }

    pub fn counts(&self) -> BTreeMap<usize, usize> {
        self.dimensions.iter().map(|d| (d.n, d.found)).collect()
    }
}

/// Enumerates one dimension and matches the classes one-to-one against the catalog.
pub fn compare_dimension(n: usize, opts: &EnumerateOptions) -> Result<DimensionComparison> {
    let (found, stats) = enumerate_fourier_with_stats(n, opts)?;
    let expected = Catalog::builtin().appendix_of_dimension(n)?;
    let mut by_form: BTreeMap<IntegralFourierMatrix, String> = BTreeMap::new();
    let mut duplicate_entries = Vec::new();
    for (name, m) in &expected {
        let c = canonical_form(m);
        if by_form.contains_key(&c) {
            duplicate_entries.push(name.clone());
        } else {
            by_form.insert(c, name.clone());
        }
    }
    let mut matched = Vec::new();
    let mut extra = Vec::new();
    for m in &found {
        match by_form.remove(&canonical_form(m)) {
            Some(name) => matched.push(name),
            None => extra.push(m.rows().to_vec()),
        }
    }
    Ok(DimensionComparison {
        n,
        expected: expected.len(),
        found: found.len(),
        matched,
        missing: by_form.into_values().collect(),
        extra,
        duplicate_entries,
        nodes: stats.nodes,
    })
}

/// Runs [`compare_dimension`] for every `n <= max_dim`.
pub fn reproduce_appendix(max_dim: usize, opts: &EnumerateOptions) -> Result<ReproductionReport> {
    if max_dim == 0 || max_dim > 12 {
        return Err(Error::InvalidArgument(format!("max_dim {max_dim} outside 1..=12")));
    }
    let dimensions = (1..=max_dim)
        .map(|n| compare_dimension(n, opts))
        .collect::<Result<_>>()?;
    Ok(ReproductionReport { dimensions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructed_entries() {
        let c = Catalog::builtin();
        assert_eq!(c.get("s(7,1)").unwrap().n(), 7);
        let s10 = c.get("s(10,2)").unwrap();
        assert_eq!(s10.size(), 16 * 4);
        assert_eq!(c.get("s(8,1)").unwrap().n(), 8);
        assert_eq!(c.get("dim16").unwrap().n(), 16);
        assert!(matches!(c.get("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn variants_differ_from_base() {
        let c = Catalog::builtin();
        let a = canonical_form(&c.get("s(8,2)").unwrap());
        let b = canonical_form(&c.get("s(8,2)_{(7,8)}").unwrap());
        assert_ne!(a, b);
        let r = c.get("s(10,1)_{(7,9),(3,5)}").unwrap();
        assert_eq!(r.n(), 10);
    }

    #[test]
    fn json_round_trip() {
        let c = Catalog::builtin();
        let back = Catalog::from_json_str(&c.to_json_string()).unwrap();
        assert_eq!(back.entries, c.entries);
    }

    #[test]
    fn small_reproduction() {
        let r = reproduce_appendix(7, &EnumerateOptions::default()).unwrap();
        assert!(r.exact(), "{r:?}");
        assert_eq!(r.counts().values().copied().collect::<Vec<_>>(), vec![1, 1, 0, 2, 0, 0, 1]);
    }
}
