//! Argument resolution: files, standard input, catalog names and built-in groups.

use std::io::Read;
use std::path::Path;

use fourier_core::catalog::Catalog;
use fourier_core::fourier::IntegralFourierMatrix;
use fourier_core::groups::{builtin_group, parse_generators, parse_perm, FiniteGroup};
use fourier_core::modular::TMatrix;
use fourier_core::Error;

use crate::error::{CliError, CliResult};

fn read_source(arg: &str) -> CliResult<Option<String>> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::io("<stdin>", e))?;
        return Ok(Some(s));
    }
    let p = Path::new(arg);
    if p.is_file() {
        return std::fs::read_to_string(p).map(Some).map_err(|e| CliError::io(p, e));
    }
    Ok(None)
}

/// A matrix JSON file, `-` for standard input, or a catalog entry name.
pub fn load_matrix(arg: &str) -> CliResult<IntegralFourierMatrix> {
    match read_source(arg)? {
        Some(text) => Ok(IntegralFourierMatrix::from_json_str(&text)?),
        None => match Catalog::builtin().get(arg) {
            Ok(m) => Ok(m),
            Err(Error::UnknownEntry(_)) => Err(CliError::Usage(format!(
                "{arg:?} is neither a readable file nor a catalog entry"
            ))),
            Err(e) => Err(e.into()),
        },
    }
}

/// A T-matrix JSON file (list of exact numbers or `{"entries": [...]}`), or the stored `T` of a
/// catalog entry.
pub fn load_t(arg: &str) -> CliResult<TMatrix> {
    match read_source(arg)? {
        Some(text) => serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{arg}: {e}"))),
        None => catalog_t(arg),
    }
}

pub fn catalog_t(name: &str) -> CliResult<TMatrix> {
    Catalog::builtin()
        .t_matrix(name)?
        .ok_or_else(|| CliError::Usage(format!("catalog entry {name} has no stored T-matrix")))
}

/// A generator file (cycle notation, one per line) or a built-in name.
pub fn load_group(arg: &str) -> CliResult<FiniteGroup> {
    match read_source(arg)? {
        Some(text) => Ok(parse_generators(&text)?),
        None => builtin_group(arg).map_err(|e| match e {
            Error::Parse(_) => CliError::Usage(format!(
                "{arg:?} is neither a generator file nor a built-in group (S<n>, D4, Q8, Z<n>)"
            )),
            other => other.into(),
        }),
    }
}

/// Elements of `h` named by a `;`-separated list of cycle-notation permutations or `g<k>`
/// (the `k`-th generator of `h`, 1-based).
pub fn parse_elements(h: &FiniteGroup, text: &str) -> CliResult<Vec<usize>> {
    let gens = h.generators();
    let mut out = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let idx = if let Some(k) = item.strip_prefix('g') {
            let k: usize = k
                .parse()
                .map_err(|_| CliError::Usage(format!("bad generator reference {item:?}")))?;
            *k.checked_sub(1)
                .and_then(|i| gens.get(i))
                .ok_or_else(|| CliError::Usage(format!("{item}: the group has {} generators", gens.len())))?
        } else {
            let p = parse_perm(item, h.degree())?;
            h.index_of(&p)
                .ok_or_else(|| CliError::Usage(format!("{item} is not an element of the group")))?
        };
        out.push(idx);
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty element list".into()));
    }
    Ok(out)
}
