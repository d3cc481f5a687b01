use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ordlat::mordell::{self, build_table, mordell_step, shipped_config, shipped_densest};
use ordlat::num::{parse_rational, Rational};
use ordlat::reduction::{self, EnumOptions};
use ordlat::verify::{self, BRUTE_FORCE_MAX_RANK};
use ordlat::{catalog, corpus, par, sections, Order, PowerProduct, Result};

const SEED: u64 = corpus::DEFAULT_SEED;
const ORDERS: [&str; 4] = ["eisenstein", "gaussian", "hurwitz", "j"];
const LATTICES: usize = 200;
const NESTED: usize = 50;
const SECTIONS: usize = 200;
const FIVE_PLACE_TOL: f64 = 1e-5;
const DECIMAL_TOL: f64 = 1e-3;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn pp(s: &str) -> PowerProduct {
    PowerProduct::parse(s).unwrap()
}

fn orders() -> Vec<Arc<Order>> {
    ORDERS.iter().map(|n| Arc::new(Order::builtin(n).unwrap())).collect()
}

fn count_failures<T: Sync>(items: &[T], f: impl Fn(&T) -> bool + Sync + Send) -> usize {
    par::map(par::Parallelism::default(), items, |x| !f(x)).into_iter().filter(|&b| b).count()
}

fn d_invariants() -> Result<Outcome> {
    let want = [("eisenstein", "3/4"), ("gaussian", "1"), ("hurwitz", "1/4"), ("j", "9/16")];
    let mut bad = Vec::new();
    for (name, d) in want {
        let o = Order::builtin(name)?;
        if o.d_invariant() != q(d) || mordell::d_invariant(&o) != pp(d) {
            bad.push(format!("{name}: {}", o.d_invariant()));
        }
    }
    // closed forms used by the Mordell tables
    let h = mordell::d_invariant(&Order::builtin("hurwitz")?);
    let e = mordell::d_invariant(&Order::builtin("eisenstein")?);
    let closed = h == pp("2^(-2)") && e == pp("3*2^(-2)");
    Ok(outcome(bad.is_empty() && closed, if bad.is_empty() { "3/4, 1, 1/4, 9/16".into() } else { bad.join("; ") }))
}

fn product_formula() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;
    for o in orders() {
        let ls = corpus::lattices(&o, LATTICES, 3, SEED);
        let fails = count_failures(&ls, |l| verify::product_formula(l).is_none());
        ok &= fails == 0 && ls.len() >= LATTICES;
        parts.push(format!("{} {}/{}", o.name(), ls.len() - fails, ls.len()));
    }
    Ok(outcome(ok, parts.join(", ")))
}

fn biduality_antitonicity() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;
    for o in orders() {
        let ls = corpus::lattices(&o, LATTICES, 3, SEED);
        let pairs = corpus::nested_pairs(&o, NESTED, 3, SEED.wrapping_add(1));
        let bid = count_failures(&ls, |l| verify::biduality(l).is_none());
        let anti = count_failures(&pairs, |(a, b)| verify::antitonicity(a, b).is_none() && a.is_sublattice_of(b));
        ok &= bid == 0 && anti == 0 && pairs.len() >= NESTED;
        parts.push(format!("{} {}/{} {}/{}", o.name(), ls.len() - bid, ls.len(), pairs.len() - anti, pairs.len()));
    }
    Ok(outcome(ok, parts.join(", ")))
}

fn section_identities() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;
    for o in orders() {
        let inst = corpus::section_instances(&o, SECTIONS, SEED.wrapping_add(2));
        let s_values: std::collections::BTreeSet<usize> = inst.iter().map(|(_, f)| f.k_dim()).collect();
        let fails = count_failures(&inst, |(l, f)| {
            let proj = matches!(verify::section_projection(l, f), Ok(None));
            let dual = matches!(verify::dual_section(l, f), Ok((None, None)));
            let rep = sections::dual_section_identity(l, f).map(|r| r.projection_dual_matches).unwrap_or(false);
            proj && dual && rep
        });
        ok &= fails == 0 && inst.len() >= SECTIONS && s_values == [1, 2].into();
        parts.push(format!("{} {}/{}", o.name(), inst.len() - fails, inst.len()));
    }
    Ok(outcome(ok, parts.join(", ")))
}

fn svp_oracle() -> Result<Outcome> {
    let opts = EnumOptions::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for o in orders() {
        let ls: Vec<_> = corpus::lattices(&o, LATTICES, 3, SEED)
            .into_iter()
            .filter(|l| l.rank() <= BRUTE_FORCE_MAX_RANK)
            .collect();
        let fails = count_failures(&ls, |l| matches!(verify::svp_oracle(l, &opts), Ok(None)));
        ok &= fails == 0 && !ls.is_empty();
        parts.push(format!("{} {}/{}", o.name(), ls.len() - fails, ls.len()));
    }
    Ok(outcome(ok, parts.join(", ")))
}

fn catalog_gammas() -> Result<Outcome> {
    let opts = EnumOptions::default();
    let cases = [
        ("D4/hurwitz", "4"),
        ("E8/hurwitz", "2^8"),
        ("K12/eisenstein", "2^24/3^6"),
        ("Λ16/hurwitz", "2^24"),
        ("A2/eisenstein", "4/3"),
        ("E6/eisenstein", "2^6/3"),
        ("Λ12min/hurwitz", "2^14"),
        ("Λ12max/hurwitz", "2^14"),
    ];
    let mut bad = Vec::new();
    for (name, want) in cases {
        let h = reduction::hermite(&catalog::load(name)?, &opts)?;
        if Some(h.gamma_nth.clone()) != pp(want).to_rational() {
            bad.push(format!("{name}: {}", h.gamma_nth));
        }
    }
    let leech = catalog::load("Λ24/hurwitz")?;
    let min = reduction::shortest_norm(&leech, &opts)?;
    let det = leech.determinant();
    let leech_ok = min == q("4") && det == q("1");
    let detail = if bad.is_empty() {
        format!("8 entries exact; Λ24 min {min} det {det}")
    } else {
        bad.join("; ")
    };
    Ok(outcome(bad.is_empty() && leech_ok, detail))
}

fn table(order: &str, max_dim: u32) -> Result<mordell::BoundTable> {
    let o = Order::builtin(order)?;
    build_table(&o, max_dim, &shipped_config(order)?, shipped_densest(order)?.as_ref())
}

fn cell(t: &mordell::BoundTable, dim: u32) -> Option<PowerProduct> {
    t.row(dim)?.mordell.clone()
}

fn hurwitz_table() -> Result<Outcome> {
    let t = table("hurwitz", 28)?;
    let mut bad = Vec::new();
    for (dim, v) in [(12, "2^(3/2)"), (16, "2^(3/2)"), (20, "2^(11/6)"), (28, "2^(23/10)")] {
        if cell(&t, dim) != Some(pp(v)) {
            bad.push(format!("dim {dim}"));
        }
    }
    if t.row(24).and_then(|r| r.conjectured.clone()) != Some(pp("4")) {
        bad.push("conjectured 24".into());
    }
    let row24 = t.row(24);
    let v24 = cell(&t, 24).map(|p| p.to_f64()).unwrap_or(f64::NAN);
    let noted = row24
        .and_then(|r| r.annotation.as_deref())
        .is_some_and(|a| a.contains("4.21390"));
    if (v24 - 4.42139).abs() > FIVE_PLACE_TOL || !noted {
        bad.push(format!("dim 24: {v24}"));
    }
    Ok(outcome(bad.is_empty(), format!("dim 24 = {v24:.5}, annotated: {noted}; failures: {bad:?}")))
}

fn eisenstein_table() -> Result<Outcome> {
    let t = table("eisenstein", 26)?;
    let mut bad = Vec::new();
    for (dim, v) in [
        (6, "3^(1/2)"),
        (10, "2*3^(1/6)"),
        (12, "2^(5/4)"),
        (14, "2^(13/10)*3^(1/10)"),
        (16, "2^(27/20)*3^(1/5)"),
        (26, "2^(23/11)*3^(1/22)"),
    ] {
        if cell(&t, dim) != Some(pp(v)) {
            bad.push(format!("dim {dim}"));
        }
    }
    if cell(&t, 16).is_none_or(|p| (p.to_f64() - 3.17552).abs() > FIVE_PLACE_TOL) {
        bad.push("dim 16 decimal".into());
    }
    for (dim, v) in [(18, 3.47300), (20, 3.72996), (22, 3.98416), (24, 4.23616)] {
        if cell(&t, dim).is_none_or(|p| (p.to_f64() - v).abs() > DECIMAL_TOL) {
            bad.push(format!("dim {dim} decimal"));
        }
    }
    for (dim, v) in [
        (14, "2^(11/5)/3^(1/2)"),
        (16, "2^(3/2)"),
        (18, "2^(11/7)*3^(1/14)"),
        (20, "2^(7/4)"),
        (22, "2^(16/9)*3^(1/18)"),
        (24, "4"),
    ] {
        if t.row(dim).and_then(|r| r.conjectured.clone()) != Some(pp(v)) {
            bad.push(format!("conjectured {dim}"));
        }
    }
    Ok(outcome(bad.is_empty(), format!("failures: {bad:?}")))
}

fn lambda16_audit() -> Result<Outcome> {
    let l = catalog::load("Λ16/hurwitz")?;
    let r = sections::equality_audit(&l, &pp("2^(7/6)"), false, &EnumOptions::default())?;
    let every = r.orbits.iter().all(|o| o.passed() && o.section_norm == "4");
    let ok = every && r.all_conditions_hold && r.lattice_norm == "4";
    Ok(outcome(
        ok,
        format!(
            "{} orbits over {} dual minimal vectors, N(section) = {}, N(L) = {}",
            r.orbits.len(),
            r.dual_minimal_vectors,
            r.orbits.first().map_or("-", |o| o.section_norm.as_str()),
            r.lattice_norm
        ),
    ))
}

fn gaussian_sharpness() -> Result<Outcome> {
    let v = mordell_step(&Order::builtin("gaussian")?, 4, &pp("2^(2/3)"))?;
    Ok(outcome(v == pp("2"), format!("step = {v}")))
}

type Check = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let checks: [(&str, Check, u64); 10] = [
        ("order invariants", d_invariants, 5),
        ("determinant product formula", product_formula, 60),
        ("biduality and antitonicity", biduality_antitonicity, 60),
        ("section identities", section_identities, 120),
        ("shortest norm oracle", svp_oracle, 120),
        ("catalog invariants", catalog_gammas, 600),
        ("Hurwitz bound table", hurwitz_table, 30),
        ("Eisenstein bound table", eisenstein_table, 30),
        ("equality audit on Λ16", lambda16_audit, 300),
        ("Gaussian sharpness", gaussian_sharpness, 5),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in checks.iter().enumerate() {
        let start = Instant::now();
        let res = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (passed, detail) = match res {
            Ok(o) => (o.passed && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!passed);
        println!(
            "criterion {:>2} {}: {} ({detail}; {:.2} s, limit {limit} s)",
            i + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {}/{} passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
