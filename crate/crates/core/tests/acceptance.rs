//! Acceptance criteria 1-9, one result line each.
//!
//! `cargo test -p fourier-core --test acceptance -- --long` (or `FOURIER_LONG=1`) adds the
//! dimension-12 enumeration and the order-96 subdirect product. Failures listed in `KNOWN`
//! are reported as FAIL but do not fail the run unless `FOURIER_STRICT=1`.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use fourier_core::catalog::{compare_dimension, reproduce_appendix, Catalog};
use fourier_core::congruence::{congrest_check, is_cmt, modulus, plus6, power_sum_residues, tensor, Modulus};
use fourier_core::fourier::{
    canonical_form, enumerate_fourier, has_zero_entry, pf_bound_holds, structure_constants, EnumerateOptions,
    IntegralFourierMatrix,
};
use fourier_core::groups::{
    builtin_group, character_table, conjugacy_data, cyclic_group, subdirect_product, symmetric_group, FiniteGroup,
};
use fourier_core::modular::{
    group_order, normalize, satisfies_modular_equation, sequence_datum, solve_t, verify_modular, GroupOrder, TMatrix,
};
use fourier_core::qdouble::{qd_fourier, qd_is_rational};
use fourier_core::{Cyclotomic, ExactNumber};

/// Sub-checks whose failure is understood and recorded; see the README.
const KNOWN: &[(&str, &str)] = &[
    (
        "dim16-printed-t",
        "the printed T (last entries 1, -1) fails S^2 = (ST)^3; with (i, -i) the equation holds",
    ),
    (
        "s3-double-vs-s82",
        "the S3 double has the canonical form of the column variant s(8,2)_{(4,5)}, not of s(8,2)",
    ),
];

struct Check {
    label: String,
    pass: bool,
    known: Option<&'static str>,
}

#[derive(Default)]
struct Criterion {
    checks: Vec<Check>,
    notes: Vec<String>,
    skipped: Vec<String>,
}

impl Criterion {
    fn check(&mut self, label: impl Into<String>, pass: bool) {
        self.checks.push(Check {
            label: label.into(),
            pass,
            known: None,
        });
    }

    /// A check with a documented expected failure.
    fn check_known(&mut self, label: impl Into<String>, pass: bool, key: &str) {
        let reason = KNOWN.iter().find(|k| k.0 == key).map(|k| k.1).expect("known key");
        self.checks.push(Check {
            label: label.into(),
            pass,
            known: Some(reason),
        });
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn skip(&mut self, text: impl Into<String>) {
        self.skipped.push(text.into());
    }
}

#[derive(Default)]
struct Totals {
    unexpected: usize,
    known: usize,
}

fn report(totals: &mut Totals, id: usize, title: &str, run: impl FnOnce(&mut Criterion)) {
    let start = Instant::now();
    let mut c = Criterion::default();
    run(&mut c);
    let failed: Vec<&Check> = c.checks.iter().filter(|k| !k.pass).collect();
    let status = if failed.is_empty() { "PASS" } else { "FAIL" };
    let mut detail = if failed.is_empty() {
        format!("{} checks", c.checks.len())
    } else {
        let names: Vec<&str> = failed.iter().map(|k| k.label.as_str()).collect();
        format!("{} of {} checks failed: {}", failed.len(), c.checks.len(), names.join("; "))
    };
    if !c.skipped.is_empty() {
        detail.push_str(&format!("; skipped without --long: {}", c.skipped.join(", ")));
    }
    println!("{status} criterion {id} ({title}): {detail} [{:.1}s]", start.elapsed().as_secs_f64());
    for k in &failed {
        match k.known {
            Some(reason) => {
                totals.known += 1;
                println!("    known failure: {reason}");
            }
            None => totals.unexpected += 1,
        }
    }
    for n in &c.notes {
        println!("    {n}");
    }
}

fn long_mode() -> bool {
    std::env::args().any(|a| a == "--long") || std::env::var("FOURIER_LONG").is_ok_and(|v| !v.is_empty() && v != "0")
}

fn catalog_matrix(name: &str) -> IntegralFourierMatrix {
    Catalog::builtin().get(name).unwrap()
}

fn catalog_t(name: &str) -> TMatrix {
    Catalog::builtin().t_matrix(name).unwrap().unwrap()
}

fn criterion_1(c: &mut Criterion) {
    let r = reproduce_appendix(11, &EnumerateOptions::default()).unwrap();
    let expected = BTreeMap::from([(2, 1), (3, 0), (4, 2), (5, 0), (6, 0), (7, 1), (8, 7), (9, 3), (10, 6), (11, 3)]);
    let counts: BTreeMap<usize, usize> = r.counts().into_iter().filter(|&(n, _)| n >= 2).collect();
    c.check(format!("counts {counts:?}"), counts == expected);
    for d in &r.dimensions {
        c.check(format!("n={} one-to-one with the catalog", d.n), d.exact());
    }
}

fn criterion_2(c: &mut Criterion, long: bool) {
    if !long {
        c.skip("dimension 12");
        return;
    }
    let d = compare_dimension(12, &EnumerateOptions::default()).unwrap();
    c.check(format!("28 classes (found {})", d.found), d.found == 28);
    c.check("one-to-one with the catalog", d.exact());
    c.note(format!("dimension 12: {} search nodes", d.nodes));
}

fn criterion_3(c: &mut Criterion, long: bool) {
    let mut all: Vec<IntegralFourierMatrix> = Vec::new();
    for n in 2..=11 {
        all.extend(enumerate_fourier(n, &EnumerateOptions::default()).unwrap());
    }
    if long {
        all.extend(enumerate_fourier(12, &EnumerateOptions::default()).unwrap());
    } else {
        // equal to the enumeration by criterion 2
        all.extend(Catalog::builtin().appendix_of_dimension(12).unwrap().into_iter().map(|(_, m)| m));
        c.note("dimension-12 classes taken from the catalog (matched against enumeration under --long)");
    }
    let nonneg: Vec<&IntegralFourierMatrix> =
        all.iter().filter(|m| structure_constants(m).unwrap().nonnegative).collect();
    let not_cmt: Vec<&&IntegralFourierMatrix> = nonneg.iter().filter(|m| !is_cmt(m).is_cmt()).collect();
    c.check(format!("28 nonnegative (found {})", nonneg.len()), nonneg.len() == 28);
    c.check(format!("2 of them not CMT (found {})", not_cmt.len()), not_cmt.len() == 2);
    let z2 = catalog_matrix("s(2,1)");
    let z2cubed = catalog_matrix("s(8,1)");
    let forms: Vec<IntegralFourierMatrix> = not_cmt.iter().map(|m| canonical_form(m)).collect();
    c.check(
        "the non-CMT ones are Z/2 and (Z/2)^3",
        forms.contains(&canonical_form(&z2)) && forms.contains(&canonical_form(&z2cubed)),
    );
}

fn same_t(a: &TMatrix, b: &[Cyclotomic]) -> bool {
    a.entries.len() == b.len() && a.entries.iter().zip(b).all(|(x, y)| x.to_cyclotomic().is_ok_and(|x| x == *y))
}

fn criterion_4(c: &mut Criterion) {
    let fours = enumerate_fourier(4, &EnumerateOptions::default()).unwrap();
    c.check("two 4x4 classes", fours.len() == 2);
    for (i, m) in fours.iter().enumerate() {
        let k = solve_t(m, 24).unwrap().len();
        c.check(format!("4x4 matrix {}: 12 T-matrices (found {k})", i + 1), k == 12);
    }
    let sols = solve_t(&catalog_matrix("s(2,1)"), 24).unwrap();
    let z = Cyclotomic::zeta_pow(24, 1).unwrap();
    let want = [z.clone(), -Cyclotomic::zeta_pow(24, 7).unwrap()];
    c.check("s(2,1) admits diag(z24, -z24^7)", sols.iter().any(|t| same_t(t, &want)));
}

fn criterion_5(c: &mut Criterion) {
    let m18 = catalog_matrix("dim18");
    let t18 = catalog_t("dim18");
    let s18 = normalize(&m18).unwrap();
    let v = verify_modular(&s18, &t18).unwrap();
    c.check("dim18 passes every modular datum axiom", v.is_modular_datum());
    let order = group_order(&s18, &t18, 100_000).unwrap();
    c.check(format!("dim18 group order 72 ({order:?})"), order == GroupOrder::Finite(72));

    let m16 = catalog_matrix("dim16");
    let s16 = normalize(&m16).unwrap();
    let t16 = catalog_t("dim16");
    let printed = satisfies_modular_equation(&s16, &t16).unwrap();
    c.check_known("dim16 printed T satisfies S^2 = (ST)^3", printed, "dim16-printed-t");
    let alpha = &t16.entries[9];
    c.check(
        "dim16 T has an entry that is not a root of unity",
        alpha.multiplicative_order().unwrap().is_none() && t16.finite_order.is_none(),
    );
    let mut corrected = t16.entries.clone();
    corrected[14] = ExactNumber::parse("z(4)").unwrap();
    corrected[15] = ExactNumber::parse("-z(4)").unwrap();
    let corrected = TMatrix::new(corrected).unwrap();
    let holds = satisfies_modular_equation(&s16, &corrected).unwrap();
    c.note(format!("dim16 with the last two T entries (i, -i): S^2 = (ST)^3 is {holds}, T order infinite"));
    c.check("dim16 corrected T satisfies the equation", holds && corrected.finite_order.is_none());
}

fn criterion_6(c: &mut Criterion) {
    for (k, dim) in [(0u32, 4usize), (1, 22), (2, 94)] {
        let d = sequence_datum(k).unwrap();
        c.check(format!("k={k} modular datum"), d.verdict.is_modular_datum());
        c.check(format!("k={k} dimension {dim}"), d.matrix.n() == dim);
        if k >= 1 {
            c.check(format!("k={k} max structure constant {}", 1 << (k - 1)), d.tensor.max == 1 << (k - 1));
            let o = group_order(&normalize(&d.matrix).unwrap(), &d.t, 100_000).unwrap();
            c.check(format!("k={k} group order 6 ({o:?})"), o == GroupOrder::Finite(6));
        }
    }
}

fn subdirect(name: &str, n_gens: impl Fn(&FiniteGroup) -> Vec<usize>, r: usize) -> FiniteGroup {
    let h = builtin_group(name).unwrap();
    let n = n_gens(&h);
    subdirect_product(&h, &n, r).unwrap()
}

fn klein_in_s4(h: &FiniteGroup) -> Vec<usize> {
    elements(h, &["(1 2)(3 4)", "(1 3)(2 4)"])
}

fn elements(h: &FiniteGroup, perms: &[&str]) -> Vec<usize> {
    perms
        .iter()
        .map(|p| h.index_of(&fourier_core::groups::parse_perm(p, h.degree()).unwrap()).unwrap())
        .collect()
}

/// The cyclic normal subgroup N of the subdirect products: Z3 in S3, Z4 in D4 and in Q8.
fn cyclic_normal(h: &FiniteGroup) -> Vec<usize> {
    match h.order() {
        6 => elements(h, &["(1 2 3)"]),
        // D4 acts on 4 points; every generator of the regular Q8 has order 4
        8 if h.degree() == 4 => elements(h, &["(1 2 3 4)"]),
        _ => vec![h.generators()[0]],
    }
}

fn criterion_7(c: &mut Criterion, long: bool) {
    let s3 = symmetric_group(3).unwrap();
    let qd = canonical_form(&qd_fourier(&s3).unwrap());
    c.check_known(
        "qd_fourier(S3) isomorphic to s(8,2)",
        qd == canonical_form(&catalog_matrix("s(8,2)")),
        "s3-double-vs-s82",
    );
    c.note(format!(
        "qd_fourier(S3) isomorphic to s(8,2)_{{(4,5)}}: {}",
        qd == canonical_form(&catalog_matrix("s(8,2)_{(4,5)}"))
    ));
    for r in 1..=2u32 {
        let g = subdirect("S3", cyclic_normal, r as usize);
        let classes = conjugacy_data(&g).classes.len();
        c.check(format!("S3/Z3 r={r}: {} classes", (3usize.pow(r) + 3) / 2), classes == (3usize.pow(r) + 3) / 2);
        c.check(format!("S3/Z3 r={r} rational"), qd_is_rational(&g).unwrap().rational);
        let want = (1usize << (r + 1)) + (1 << (2 * r - 1)) - (1 << (r - 1));
        for name in ["D4", "Q8"] {
            let g = subdirect(name, cyclic_normal, r as usize);
            let classes = conjugacy_data(&g).classes.len();
            c.check(format!("{name}/Z4 r={r}: {want} classes"), classes == want);
            c.check(format!("{name}/Z4 r={r} rational"), qd_is_rational(&g).unwrap().rational);
        }
    }
    let s4v4 = subdirect("S4", klein_in_s4, 1);
    c.check("S4/V4 r=1 rational", qd_is_rational(&s4v4).unwrap().rational);
    if long {
        let g = subdirect("S4", klein_in_s4, 2);
        c.check(format!("S4/V4 r=2 (order {}) rational", g.order()), qd_is_rational(&g).unwrap().rational);
    } else {
        c.skip("S4/V4 r=2");
    }
}

fn criterion_8(c: &mut Criterion) {
    let m = qd_fourier(&symmetric_group(4).unwrap()).unwrap();
    let root = fourier_core::fourier::size_root(&m).expect("square size");
    let w = modulus(&m);
    c.check(format!("modulus {w} = sqrt({})/2", m.size()), root % 2 == 0 && w == Modulus::Finite(root / 2));
}

fn criterion_9(c: &mut Criterion) {
    let fixtures = common::fixtures();
    let mut enumerated = Vec::new();
    for n in 1..=11 {
        enumerated.extend(enumerate_fourier(n, &EnumerateOptions::default()).unwrap());
    }
    let pool: Vec<&IntegralFourierMatrix> = fixtures.iter().map(|(_, m)| m).chain(enumerated.iter()).collect();

    let cong1 = pool.iter().all(|m| power_sum_residues(m).iter().all(|r| r == &[0, 0, 0]));
    c.check("power-sum congruences mod d1", cong1);

    let zeros = pool
        .iter()
        .filter(|m| m.norms().iter().any(|&d| d != m.norms()[0]))
        .all(|m| has_zero_entry(m));
    c.check("a zero entry whenever norms differ", zeros);

    let oracle = (1..=8).map(common::norm_oracle_check).collect::<Result<Vec<_>, _>>();
    if let Err(e) = &oracle {
        c.note(e.clone());
    }
    c.check("norm vectors agree with the direct search (n <= 8)", oracle.is_ok());

    let appendix = common::appendix_fixtures();
    let base: Vec<&IntegralFourierMatrix> = appendix.iter().map(|(_, m)| m).collect();
    let mut gcd_ok = true;
    for (i, a) in base.iter().enumerate() {
        for b in &base[i..] {
            gcd_ok &= modulus(&tensor(a, b).unwrap()) == modulus(a).gcd(modulus(b));
        }
    }
    c.check(format!("modulus is gcd-multiplicative over {} pairs", base.len() * (base.len() + 1) / 2), gcd_ok);

    let mut plus6_ok = true;
    let square: Vec<_> = fixtures.iter().filter(|(_, m)| common::is_square(m.size())).collect();
    for (_, m) in &square {
        let p = plus6(m).unwrap();
        plus6_ok &= p.size() == 16 * m.size() && p.n() == m.n() + 6;
        if is_cmt(m).is_cmt() {
            plus6_ok &= is_cmt(&p).is_cmt();
        }
    }
    c.check(format!("plus6 has size 16 d1 and keeps CMTs ({} square sizes)", square.len()), plus6_ok);

    let mut congrest_ok = true;
    let mut count = 0;
    // the 1x1 table has sigma = w, outside the range -w < sigma < w the implications rest on
    for m in pool.iter().filter(|m| m.n() > 1) {
        if is_cmt(m).is_cmt() && structure_constants(m).unwrap().nonnegative {
            count += 1;
            congrest_ok &= pf_bound_holds(m).holds && congrest_check(m).unwrap().all_hold();
        }
    }
    c.check(format!("congruence implications and PF bound on {count} nonnegative CMTs (n > 1)"), congrest_ok);

    let mut groups: Vec<(String, FiniteGroup)> = Vec::new();
    for n in 1..=5 {
        groups.push((format!("S{n}"), symmetric_group(n).unwrap()));
    }
    for n in 1..=12 {
        groups.push((format!("Z{n}"), cyclic_group(n).unwrap()));
    }
    for name in ["D4", "Q8"] {
        groups.push((name.into(), builtin_group(name).unwrap()));
    }
    for r in 1..=2 {
        groups.push((format!("S3/Z3 r={r}"), subdirect("S3", cyclic_normal, r)));
        groups.push((format!("D4/Z4 r={r}"), subdirect("D4", cyclic_normal, r)));
        groups.push((format!("Q8/Z4 r={r}"), subdirect("Q8", cyclic_normal, r)));
    }
    groups.push(("S4/V4 r=1".into(), subdirect("S4", klein_in_s4, 1)));
    let bad: Vec<&str> = groups
        .iter()
        .filter(|(_, g)| !character_table(g).unwrap().is_orthogonal(g.order()))
        .map(|(n, _)| n.as_str())
        .collect();
    c.check(format!("character tables orthogonal for {} groups {bad:?}", groups.len()), bad.is_empty());
}

fn main() {
    let long = long_mode();
    let strict = std::env::var("FOURIER_STRICT").is_ok_and(|v| !v.is_empty() && v != "0");
    println!("acceptance suite (long items {})", if long { "on" } else { "off" });
    let mut t = Totals::default();
    report(&mut t, 1, "reproduction up to dimension 11", criterion_1);
    report(&mut t, 2, "dimension 12", |c| criterion_2(c, long));
    report(&mut t, 3, "nonnegativity census", |c| criterion_3(c, long));
    report(&mut t, 4, "T-matrix counts", criterion_4);
    report(&mut t, 5, "modularity verification", criterion_5);
    report(&mut t, 6, "infinite sequence", criterion_6);
    report(&mut t, 7, "quantum doubles", |c| criterion_7(c, long));
    report(&mut t, 8, "modulus of the S4 double", criterion_8);
    report(&mut t, 9, "property suites", criterion_9);
    println!("{} unexpected failures, {} known failures", t.unexpected, t.known);
    if t.unexpected > 0 || (strict && t.known > 0) {
        std::process::exit(1);
    }
}
