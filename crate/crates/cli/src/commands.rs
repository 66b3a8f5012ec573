use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::{json, Value};

use fourier_core::catalog::{compare_dimension, Catalog, DimensionComparison};
use fourier_core::congruence::{self, is_cmt};
use fourier_core::fourier::{enumerate_fourier_with_stats, structure_constants, EnumerateOptions, IntegralFourierMatrix};
use fourier_core::groups::{
    character_table, format_perm, group_info as info_of, subdirect_product, FiniteGroup,
};
use fourier_core::modular::{group_order, normalize, sequence_datum, solve_t, verify_modular, GroupOrder, TMatrix};
use fourier_core::norms::enumerate_norm_vectors;
use fourier_core::qdouble::{
    default_multipliers, fourier_of, pairing_maps_search, quantum_double, rationality_of, PairingOutcome,
};

use crate::cache::{cached_run, Cache};
use crate::error::{CliError, CliResult};
use crate::input::{catalog_t, load_group, load_matrix, load_t, parse_elements};

/// JSON for `--json`, a human rendering otherwise, and whether the command's check passed.
pub struct Outcome {
    pub value: Value,
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(value: Value, text: String) -> Self {
        Outcome { value, text, ok: true }
    }
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn matrix_text(m: &IntegralFourierMatrix) -> String {
    format!("norms {}\ndegrees {}\n{m}", join(m.norms(), ","), join(m.degrees(), ","))
}

fn matrix_outcome(m: &IntegralFourierMatrix) -> Outcome {
    Outcome::ok(m.to_json_value(), matrix_text(m))
}

fn t_text(t: &TMatrix) -> String {
    let order = match t.finite_order {
        Some(o) => format!("order {o}"),
        None => "infinite order".to_string(),
    };
    format!("diag({})  {order}", join(&t.entries, ", "))
}

pub fn norms(cache: Option<&Cache>, n: usize) -> CliResult<Outcome> {
    let value = cached_run(cache, "norms", json!({ "n": n }), || {
        let vs = enumerate_norm_vectors(n)?;
        Ok(json!(vs.iter().map(|v| &v.dims).collect::<Vec<_>>()))
    })?;
    let vs: Vec<Vec<u64>> = serde_json::from_value(value.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = vs.iter().map(|v| join(v, ",") + "\n").collect();
    Ok(Outcome::ok(value, text))
}

pub fn enumerate(
    cache: Option<&Cache>,
    n: usize,
    cmt: bool,
    nonneg: bool,
    checkpoint: Option<PathBuf>,
    budget: u64,
) -> CliResult<Outcome> {
    let opts = EnumerateOptions {
        require_cmt: cmt,
        require_nonneg: nonneg,
        node_budget: budget,
        checkpoint,
    };
    let params = json!({ "n": n, "cmt": cmt, "nonneg": nonneg });
    let value = cached_run(cache, "enumerate", params, || {
        let (found, stats) = enumerate_fourier_with_stats(n, &opts)?;
        eprintln!("{} classes, {} nodes, {} norm vectors", found.len(), stats.nodes, stats.norm_vectors);
        Ok(json!(found))
    })?;
    let found: Vec<IntegralFourierMatrix> =
        serde_json::from_value(value.clone()).map_err(|e| CliError::Usage(format!("cached result: {e}")))?;
    let mut text = String::new();
    for (i, m) in found.iter().enumerate() {
        let _ = writeln!(text, "# class {} of {}", i + 1, found.len());
        text.push_str(&matrix_text(m));
        text.push('\n');
    }
    Ok(Outcome::ok(value, text))
}

pub fn cmt(arg: &str) -> CliResult<Outcome> {
    let m = load_matrix(arg)?;
    let r = is_cmt(&m);
    let mut value = serde_json::to_value(&r).expect("reports serialize");
    value["is_cmt"] = json!(r.is_cmt());
    let w = r.w.map_or("-".to_string(), |w| w.to_string());
    let text = table(&[
        vec!["cmt".into(), r.is_cmt().to_string()],
        vec!["square size".into(), r.is_square_size.to_string()],
        vec!["w".into(), w],
        vec!["congruence".into(), r.congruence_holds.to_string()],
    ]);
    Ok(Outcome::ok(value, text))
}

pub fn modulus(arg: &str) -> CliResult<Outcome> {
    let w = congruence::modulus(&load_matrix(arg)?);
    Ok(Outcome::ok(json!({ "modulus": w }), format!("{w}\n")))
}

pub fn tensor(a: &str, b: &str) -> CliResult<Outcome> {
    Ok(matrix_outcome(&congruence::tensor(&load_matrix(a)?, &load_matrix(b)?)?))
}

pub fn plus6(arg: &str) -> CliResult<Outcome> {
    Ok(matrix_outcome(&congruence::plus6(&load_matrix(arg)?)?))
}

pub fn tsolve(arg: &str, max_order: u64) -> CliResult<Outcome> {
    let sols = solve_t(&load_matrix(arg)?, max_order)?;
    let mut text: String = sols.iter().map(|t| t_text(t) + "\n").collect();
    let _ = writeln!(text, "{} solutions", sols.len());
    Ok(Outcome::ok(json!(sols), text))
}

fn resolve_t(s_arg: &str, t_arg: Option<&str>) -> CliResult<TMatrix> {
    match t_arg {
        Some(t) => load_t(t),
        None => catalog_t(s_arg),
    }
}

pub fn verify(s_arg: &str, t_arg: Option<&str>) -> CliResult<Outcome> {
    let m = load_matrix(s_arg)?;
    let t = resolve_t(s_arg, t_arg)?;
    let v = verify_modular(&normalize(&m)?, &t)?;
    let tensor = structure_constants(&m)?;
    let ok = v.is_modular_datum();
    let mut value = serde_json::to_value(&v).expect("verdicts serialize");
    value["nonnegative_structure_constants"] = json!(tensor.nonnegative);
    value["modular_datum"] = json!(ok);
    let order = v.finite_order.map_or("infinite".to_string(), |o| o.to_string());
    let mut text = table(&[
        vec!["symmetric".into(), v.symmetric.to_string()],
        vec!["unitary".into(), v.unitary.to_string()],
        vec!["first column positive".into(), v.first_column_positive.to_string()],
        vec!["S^2 = (ST)^3".into(), v.modular_equation.to_string()],
        vec!["T order".into(), order],
        vec!["nonnegative N".into(), tensor.nonnegative.to_string()],
        vec!["modular datum".into(), ok.to_string()],
    ]);
    for f in &v.failures {
        let _ = writeln!(text, "failure: {f}");
    }
    Ok(Outcome { value, text, ok })
}

fn order_value(o: GroupOrder) -> (Value, String) {
    match o {
        GroupOrder::Finite(k) => (json!({ "finite": k }), k.to_string()),
        GroupOrder::ExceedsCap(c) => (json!({ "exceeds_cap": c }), format!("more than {c}")),
        GroupOrder::Infinite => (json!("infinite"), "infinite".to_string()),
    }
}

pub fn sequence(k: u32, with_order: bool) -> CliResult<Outcome> {
    let d = sequence_datum(k)?;
    let p = d.params;
    let mut value = json!({
        "params": p,
        "verdict": d.verdict,
        "modular_datum": d.verdict.is_modular_datum(),
        "max_structure_constant": d.tensor.max,
        "nonnegative": d.tensor.nonnegative,
        "matrix": d.matrix,
        "t": d.t,
    });
    let mut rows = vec![
        vec!["k".into(), k.to_string()],
        vec!["dimension".into(), p.dimension.to_string()],
        vec!["unit degrees".into(), p.a.to_string()],
        vec!["degree".into(), p.g.to_string()],
        vec!["modular datum".into(), d.verdict.is_modular_datum().to_string()],
        vec!["max N".into(), d.tensor.max.to_string()],
    ];
    if with_order {
        let (v, t) = order_value(group_order(&normalize(&d.matrix)?, &d.t, fourier_core::modular::DEFAULT_GROUP_CAP)?);
        value["group_order"] = v;
        rows.push(vec!["group order".into(), t]);
    }
    Ok(Outcome {
        value,
        text: table(&rows),
        ok: d.verdict.is_modular_datum(),
    })
}

pub fn grouporder(s_arg: &str, t_arg: Option<&str>, cap: u64) -> CliResult<Outcome> {
    let m = load_matrix(s_arg)?;
    let t = resolve_t(s_arg, t_arg)?;
    let o = group_order(&normalize(&m)?, &t, cap)?;
    if let GroupOrder::ExceedsCap(c) = o {
        return Err(CliError::Budget(format!("group order exceeds the cap of {c}")));
    }
    let (value, text) = order_value(o);
    Ok(Outcome::ok(json!({ "group_order": value }), text + "\n"))
}

fn info_outcome(g: &FiniteGroup) -> Outcome {
    let info = info_of(g);
    let mut rows = vec![vec![
        "class".to_string(),
        "representative".into(),
        "size".into(),
        "centralizer".into(),
        "rational".into(),
    ]];
    for (i, rep) in info.representatives.iter().enumerate() {
        rows.push(vec![
            (i + 1).to_string(),
            rep.clone(),
            info.class_sizes[i].to_string(),
            info.centralizer_orders[i].to_string(),
            info.rational_classes[i].to_string(),
        ]);
    }
    let text = format!(
        "order {}  exponent {}  abelian {}  classes {}\n{}",
        info.order,
        info.exponent,
        info.abelian,
        info.class_sizes.len(),
        table(&rows)
    );
    Outcome::ok(serde_json::to_value(&info).expect("infos serialize"), text)
}

pub fn group_info(arg: &str) -> CliResult<Outcome> {
    Ok(info_outcome(&load_group(arg)?))
}

pub fn chartab(arg: &str) -> CliResult<Outcome> {
    let g = load_group(arg)?;
    let ct = character_table(&g)?;
    let reps: Vec<String> = ct.classes.iter().map(|&(r, _)| format_perm(g.element(r))).collect();
    let sizes: Vec<usize> = ct.classes.iter().map(|&(_, s)| s).collect();
    let chars: Vec<Vec<String>> = ct.characters.iter().map(|c| c.iter().map(ToString::to_string).collect()).collect();
    let mut rows = vec![
        std::iter::once(String::new()).chain(reps.iter().cloned()).collect::<Vec<_>>(),
        std::iter::once("size".to_string()).chain(sizes.iter().map(ToString::to_string)).collect(),
    ];
    for (i, c) in chars.iter().enumerate() {
        rows.push(std::iter::once(format!("chi{}", i + 1)).chain(c.iter().cloned()).collect());
    }
    let ok = ct.is_orthogonal(g.order());
    let value = json!({
        "order": g.order(),
        "representatives": reps,
        "class_sizes": sizes,
        "degrees": ct.degrees,
        "characters": chars,
        "orthogonal": ok,
    });
    Ok(Outcome {
        value,
        text: table(&rows),
        ok,
    })
}

fn rational_outcome(value: &mut Value, text: &mut String, g: &FiniteGroup) -> CliResult<bool> {
    let d = quantum_double(g)?;
    let r = rationality_of(&d);
    let _ = writeln!(text, "double dimension {}  rational {}", d.dimension(), r.rational);
    if let Some((a, b)) = &r.witness {
        let _ = writeln!(text, "irrational entry at {a} x {b}");
    }
    value["double_dimension"] = json!(d.dimension());
    value["rationality"] = serde_json::to_value(&r).expect("verdicts serialize");
    Ok(r.rational)
}

pub fn subdirect(h_arg: &str, n_arg: &str, r: usize, rational_check: bool) -> CliResult<Outcome> {
    let h = load_group(h_arg)?;
    let n = parse_elements(&h, n_arg)?;
    let g = subdirect_product(&h, &n, r)?;
    let mut out = info_outcome(&g);
    out.value["generators"] = json!(g.generators().iter().map(|&x| format_perm(g.element(x))).collect::<Vec<_>>());
    if rational_check {
        out.ok = rational_outcome(&mut out.value, &mut out.text, &g)?;
    }
    Ok(out)
}

pub fn qdouble(arg: &str, fourier: bool, rational_check: bool, with_matrix: bool) -> CliResult<Outcome> {
    let g = load_group(arg)?;
    let d = quantum_double(&g)?;
    let r = rationality_of(&d);
    let mut rows = vec![vec!["label".to_string(), "degree".into(), "T".into()]];
    let mut labels = Vec::new();
    for (i, l) in d.labels.iter().enumerate() {
        let t = d.t[i].normalized().to_string();
        rows.push(vec![d.label_name(i), l.degree.to_string(), t.clone()]);
        labels.push(json!({ "name": d.label_name(i), "class": l.class, "character": l.character, "degree": l.degree, "t": t }));
    }
    let mut value = json!({
        "group_order": g.order(),
        "dimension": d.dimension(),
        "conductor": d.conductor,
        "labels": labels,
        "rational": r.rational,
        "irrational_witness": r.witness,
    });
    let mut text = format!(
        "group order {}  dimension {}  conductor {}  rational {}\n{}",
        g.order(),
        d.dimension(),
        d.conductor,
        r.rational,
        table(&rows)
    );
    if with_matrix {
        let n = d.dimension();
        let s: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| d.s.get(i, j).to_string()).collect()).collect();
        text.push_str(&table(&s));
        value["s"] = json!(s);
    }
    if fourier {
        let m = fourier_of(&d)?;
        text.push_str(&matrix_text(&m));
        value["fourier"] = m.to_json_value();
    }
    Ok(Outcome {
        value,
        text,
        ok: !rational_check || r.rational,
    })
}

pub fn pairing(h_arg: &str, n_arg: &str, multipliers: &[u64]) -> CliResult<Outcome> {
    let h = load_group(h_arg)?;
    let n = parse_elements(&h, n_arg)?;
    let ms = if multipliers.is_empty() {
        default_multipliers(&h)
    } else {
        multipliers.to_vec()
    };
    let outcome = pairing_maps_search(&h, &n, &ms)?;
    let text = match &outcome {
        PairingOutcome::Found { families } => {
            let mut s = String::new();
            for f in families {
                let _ = writeln!(s, "multiplier {}: {} maps", f.m, f.maps.len());
            }
            s
        }
        PairingOutcome::None { m, a, b } => format!(
            "no pairing maps; multiplier {m} fails at ({}, {})\n",
            format_perm(h.element(*a)),
            format_perm(h.element(*b))
        ),
    };
    let value = json!({ "multipliers": ms, "result": outcome });
    Ok(Outcome::ok(value, text))
}

pub fn reproduce(cache: Option<&Cache>, max_dim: usize, long: bool, budget: u64) -> CliResult<Outcome> {
    if max_dim == 0 || max_dim > 12 {
        return Err(CliError::Usage(format!("max_dim {max_dim} outside 1..=12")));
    }
    if max_dim == 12 && !long {
        return Err(CliError::Budget("dimension 12 is long-running; pass --long or set FOURIER_LONG=1".into()));
    }
    let opts = EnumerateOptions {
        node_budget: budget,
        ..EnumerateOptions::default()
    };
    let mut dims = Vec::new();
    for n in 1..=max_dim {
        let v = cached_run(cache, "reproduce-dimension", json!({ "n": n }), || {
            Ok(serde_json::to_value(compare_dimension(n, &opts)?).expect("reports serialize"))
        })?;
        let d: DimensionComparison =
            serde_json::from_value(v).map_err(|e| CliError::Usage(format!("cached result: {e}")))?;
        dims.push(d);
    }
    let ok = dims.iter().all(DimensionComparison::exact);
    let mut rows = vec![vec![
        "n".to_string(),
        "expected".into(),
        "found".into(),
        "missing".into(),
        "extra".into(),
        "nodes".into(),
    ]];
    for d in &dims {
        rows.push(vec![
            d.n.to_string(),
            d.expected.to_string(),
            d.found.to_string(),
            d.missing.join(" "),
            d.extra.len().to_string(),
            d.nodes.to_string(),
        ]);
    }
    let text = table(&rows) + &format!("exact {ok}\n");
    Ok(Outcome {
        value: json!({ "dimensions": dims, "exact": ok }),
        text,
        ok,
    })
}

pub fn catalog_list() -> CliResult<Outcome> {
    let c = Catalog::builtin();
    let mut rows = vec![vec![
        "name".to_string(),
        "n".into(),
        "kind".into(),
        "cmt".into(),
        "nonneg".into(),
        "T".into(),
    ]];
    let mut items = Vec::new();
    for e in &c.entries {
        let n = c.get(&e.name)?.n();
        let flag = |f: fn(&fourier_core::catalog::CatalogTags) -> bool| e.tags.as_ref().map_or("?".into(), |t| f(t).to_string());
        let kind = serde_json::to_value(&e.kind).expect("kinds serialize");
        rows.push(vec![
            e.name.clone(),
            n.to_string(),
            kind.as_str().unwrap_or("").to_string(),
            flag(|t| t.cmt),
            flag(|t| t.nonneg),
            flag(|t| t.has_t),
        ]);
        items.push(json!({ "name": e.name, "n": n, "kind": kind, "tags": e.tags }));
    }
    Ok(Outcome::ok(json!(items), table(&rows)))
}

pub fn catalog_show(name: &str) -> CliResult<Outcome> {
    let c = Catalog::builtin();
    let m = c.get(name)?;
    let mut out = matrix_outcome(&m);
    if let Some(t) = c.t_matrix(name)? {
        out.text.push_str(&format!("T {}\n", t_text(&t)));
        out.value["t"] = json!(t);
    }
    Ok(out)
}

pub fn catalog_check() -> CliResult<Outcome> {
    let c = Catalog::builtin();
    let mismatches = c.tag_mismatches()?;
    let mut text = String::new();
    for (name, stored, computed) in &mismatches {
        let _ = writeln!(text, "{name}: stored {stored:?}, computed {computed:?}");
    }
    let _ = writeln!(text, "{} entries, {} tag mismatches", c.entries.len(), mismatches.len());
    let value = json!({
        "entries": c.entries.len(),
        "mismatches": mismatches.iter().map(|(n, s, c)| json!({ "name": n, "stored": s, "computed": c })).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        value,
        text,
        ok: mismatches.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fourier_core::groups::conjugacy_data;

    #[test]
    fn table_alignment() {
        let t = table(&[vec!["a".into(), "bb".into()], vec!["ccc".into(), "d".into()]]);
        assert_eq!(t, "a    bb\nccc  d\n");
    }

    #[test]
    fn dim18_verifies() {
        let o = verify("dim18", None).unwrap();
        assert!(o.ok);
        assert_eq!(o.value["finite_order"], json!(6));
    }

    #[test]
    fn reproduce_twelve_needs_long() {
        let e = reproduce(None, 12, false, 10).err().unwrap();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn conjugacy_classes_listed() {
        let o = group_info("S4").unwrap();
        assert_eq!(o.value["class_sizes"].as_array().unwrap().len(), conjugacy_data(&load_group("S4").unwrap()).classes.len());
    }
}
